//! Exact scalars of the p-local ring and its quadratic extensions.
//!
//! A [`Scalar`] is an element `a + b·θ` of `ℚ(θ)` where `θ` is one of a small
//! set of quadratic integers that embed into `ℤ_p`.  Rational scalars
//! (`b = 0`) carry no extension tag.  Valuations are taken at the prime
//! singled out by the fixed embedding `θ ↦ r ∈ ℤ_p`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::config;
use crate::error::{Error, Result};

/// Quadratic extensions of `ℚ` embedded in `ℚ_p` by a chosen root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extension {
    /// `ω = (1+√−7)/2`, `ω² = ω − 2`, embedded in `ℤ₂` with `√−7 ≡ 1 (mod 4)`,
    /// so that `ω` is a unit and `ω̄ = 1 − ω` has valuation one.
    Omega7,
    /// A primitive cube root of unity `ζ`, `ζ² = −ζ − 1`, in `ℤ_p` for `p ≡ 1 (mod 3)`.
    Zeta3 { p: u32 },
    /// A primitive fourth root of unity `i`, `i² = −1`, in `ℤ_p` for `p ≡ 1 (mod 4)`.
    Zeta4 { p: u32 },
}

impl Extension {
    /// `(s, t)` with `θ² = s·θ + t`.
    pub fn relation(self) -> (i64, i64) {
        match self {
            Extension::Omega7 => (1, -2),
            Extension::Zeta3 { .. } => (-1, -1),
            Extension::Zeta4 { .. } => (0, -1),
        }
    }

    pub fn prime(self) -> u64 {
        match self {
            Extension::Omega7 => 2,
            Extension::Zeta3 { p } | Extension::Zeta4 { p } => p as u64,
        }
    }

    /// Validates that the embedding exists at the stated prime.
    pub fn checked(self) -> Result<Self> {
        let ok = match self {
            Extension::Omega7 => true,
            Extension::Zeta3 { p } => p > 3 && is_prime(p as u64) && p % 3 == 1,
            Extension::Zeta4 { p } => is_prime(p as u64) && p % 4 == 1,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::Domain(format!("extension {self} does not embed at its prime")))
        }
    }

    /// Name used by the datum file format.
    pub fn ring_label(self) -> String {
        match self {
            Extension::Omega7 => "q7-extension".to_string(),
            Extension::Zeta3 { p } => format!("zeta3-extension@{p}"),
            Extension::Zeta4 { p } => format!("zeta4-extension@{p}"),
        }
    }

    pub fn from_ring_label(label: &str) -> Option<Self> {
        if label == "q7-extension" {
            return Some(Extension::Omega7);
        }
        let (head, p) = label.split_once('@')?;
        let p: u32 = p.parse().ok()?;
        let ext = match head {
            "zeta3-extension" => Extension::Zeta3 { p },
            "zeta4-extension" => Extension::Zeta4 { p },
            _ => return None,
        };
        ext.checked().ok()
    }

    /// The residue of `θ` modulo `p`, fixing the embedding.
    fn root_mod_p(self) -> u64 {
        let p = self.prime();
        let (s, t) = self.relation();
        match self {
            Extension::Omega7 => 1,
            _ => (1..p)
                .find(|&r| {
                    let r = r as i128;
                    (r * r - s as i128 * r - t as i128).rem_euclid(p as i128) == 0
                })
                .expect("embedding checked at construction"),
        }
    }

    /// The image of `θ` in `ℤ/p^k`, by Newton–Hensel lifting of the simple root.
    pub fn embedded_root(self, k: u32) -> BigInt {
        thread_local! {
            static ROOTS: std::cell::RefCell<std::collections::HashMap<(Extension, u32), BigInt>> =
                std::cell::RefCell::new(std::collections::HashMap::new());
        }
        if let Some(r) = ROOTS.with(|c| c.borrow().get(&(self, k)).cloned()) {
            return r;
        }
        let r = self.lift_root(k);
        ROOTS.with(|c| c.borrow_mut().insert((self, k), r.clone()));
        r
    }

    fn lift_root(self, k: u32) -> BigInt {
        let p = BigInt::from(self.prime());
        let (s, t) = self.relation();
        let (s, t) = (BigInt::from(s), BigInt::from(t));
        let mut r = BigInt::from(self.root_mod_p());
        let mut prec = 1u32;
        while prec < k {
            prec = (prec * 2).min(k);
            let m = p.pow(prec);
            let f = &r * &r - &s * &r - &t;
            let df = BigInt::from(2) * &r - &s;
            let inv = mod_inverse(&df, &m).expect("simple root: derivative is a unit");
            r = (r - f * inv).mod_floor(&m);
        }
        r.mod_floor(&p.pow(k.max(1)))
    }
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring_label())
    }
}

/// p-adic valuation, with `+∞` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_integral(self) -> bool {
        self >= Valuation::Finite(0)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// An exact element `re + im·θ` of `ℚ` or of a quadratic extension `ℚ(θ)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: BigRational,
    ext: Option<Box<(Extension, BigRational)>>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { re: BigRational::zero(), ext: None }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { re: BigRational::from_integer(n.into()), ext: None }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar { re: BigRational::from_integer(n), ext: None }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar { re: BigRational::new(n.into(), d.into()), ext: None }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar { re: q, ext: None }
    }

    /// `re + im·θ` in the given extension.
    pub fn new(re: BigRational, ext: Extension, im: BigRational) -> Self {
        if im.is_zero() {
            Scalar { re, ext: None }
        } else {
            Scalar { re, ext: Some(Box::new((ext, im))) }
        }
    }

    /// The generator `θ` of the extension.
    pub fn theta(ext: Extension) -> Self {
        Scalar::new(BigRational::zero(), ext, BigRational::one())
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.re
    }

    pub fn extension(&self) -> Option<Extension> {
        self.ext.as_deref().map(|(e, _)| *e)
    }

    pub fn extension_part(&self) -> Option<&BigRational> {
        self.ext.as_deref().map(|(_, b)| b)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.ext.is_none() {
            Some(&self.re)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ext.is_none() && self.re.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.ext.is_none() && self.re.is_one()
    }

    /// Galois conjugate (`θ ↦ s − θ`); identity on rationals.
    pub fn conj(&self) -> Scalar {
        match self.ext.as_deref() {
            None => self.clone(),
            Some((e, b)) => {
                let (s, _) = e.relation();
                let re = &self.re + b * BigRational::from_integer(s.into());
                Scalar::new(re, *e, -b)
            }
        }
    }

    /// Field norm down to `ℚ`.
    pub fn norm(&self) -> BigRational {
        match self.ext.as_deref() {
            None => self.re.clone(),
            Some((e, b)) => {
                let (s, t) = e.relation();
                let a = &self.re;
                a * a + a * b * BigRational::from_integer(s.into())
                    - b * b * BigRational::from_integer(t.into())
            }
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self.ext.as_deref() {
            None => Some(Scalar::from_rational(self.re.recip())),
            Some(_) => {
                let n = self.norm();
                Some(self.conj().scale(&n.recip()))
            }
        }
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        match self.ext.as_deref() {
            None => Scalar::from_rational(&self.re * q),
            Some((e, b)) => Scalar::new(&self.re * q, *e, b * q),
        }
    }

    /// Valuation at `p` (for extension scalars, at the prime fixed by the embedding).
    pub fn valuation(&self, p: u64) -> Result<Valuation> {
        match self.ext.as_deref() {
            None => Ok(rational_valuation(&self.re, p)),
            Some((e, b)) => {
                debug_assert_eq!(e.prime(), p, "extension scalar used at a foreign prime");
                let (num_a, num_b, den) = common_denominator(&self.re, b);
                let v_den = int_valuation(&den, p);
                let v_num = extension_integer_valuation(*e, &num_a, &num_b)?;
                Ok(Valuation::Finite(v_num - v_den as i64))
            }
        }
    }

    /// The integer in `[0, p^k)` congruent to this (p-integral) scalar modulo `p^k`.
    pub fn residue(&self, p: u64, k: u32) -> Result<BigInt> {
        let m = BigInt::from(p).pow(k);
        match self.ext.as_deref() {
            None => {
                let num = self.re.numer();
                let den = self.re.denom();
                let inv = mod_inverse(den, &m).ok_or_else(|| {
                    Error::Domain(format!("{self} is not {p}-integral"))
                })?;
                Ok((num * inv).mod_floor(&m))
            }
            Some((e, b)) => {
                let (a_num, b_num, den) = common_denominator(&self.re, b);
                let e_den = int_valuation(&den, p);
                let den_unit = &den / BigInt::from(p).pow(e_den);
                let r = e.embedded_root(k + e_den);
                let big_m = BigInt::from(p).pow(k + e_den);
                let img = (a_num + b_num * r).mod_floor(&big_m);
                let pe = BigInt::from(p).pow(e_den);
                if !img.is_multiple_of(&pe) {
                    return Err(Error::Domain(format!("{self} is not {p}-integral")));
                }
                let img = img / pe;
                let inv = mod_inverse(&den_unit, &m).expect("unit part of denominator");
                Ok((img * inv).mod_floor(&m))
            }
        }
    }

    /// Canonical representative of the class of `self` in `ℚ_p / ℤ_p`,
    /// as a rational in `[0, 1)` with p-power denominator.
    pub fn fractional_part(&self, p: u64) -> Result<BigRational> {
        match self.valuation(p)? {
            Valuation::Infinite => Ok(BigRational::zero()),
            Valuation::Finite(v) if v >= 0 => Ok(BigRational::zero()),
            Valuation::Finite(v) => {
                let k = (-v) as u32;
                let pk = BigInt::from(p).pow(k);
                let y = self.scale(&BigRational::from_integer(pk.clone()));
                let r = y.residue(p, k)?;
                Ok(BigRational::new(r, pk))
            }
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn combine_ext(a: Option<&(Extension, BigRational)>, b: Option<&(Extension, BigRational)>) -> Option<Extension> {
        match (a, b) {
            (Some((x, _)), Some((y, _))) => {
                assert_eq!(x, y, "mixing scalars from different extensions");
                Some(*x)
            }
            (Some((x, _)), None) | (None, Some((x, _))) => Some(*x),
            (None, None) => None,
        }
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub(crate) fn int_valuation(n: &BigInt, p: u64) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub(crate) fn rational_valuation(q: &BigRational, p: u64) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64)
}

/// `(A, B, D)` with `a = A/D`, `b = B/D`.
fn common_denominator(a: &BigRational, b: &BigRational) -> (BigInt, BigInt, BigInt) {
    let d = a.denom().lcm(b.denom());
    let aa = a.numer() * (&d / a.denom());
    let bb = b.numer() * (&d / b.denom());
    (aa, bb, d)
}

/// Valuation of the algebraic integer `A + B·θ` by p-adic expansion of its image,
/// doubling the working precision up to the configured cap.
fn extension_integer_valuation(e: Extension, a: &BigInt, b: &BigInt) -> Result<i64> {
    if b.is_zero() {
        return Ok(if a.is_zero() { i64::MAX } else { int_valuation(a, e.prime()) as i64 });
    }
    let p = e.prime();
    let cap = config::precision_cap();
    let mut k = 32u32.min(cap.max(1));
    loop {
        let m = BigInt::from(p).pow(k);
        let img = (a + b * e.embedded_root(k)).mod_floor(&m);
        if !img.is_zero() {
            return Ok(int_valuation(&img, p) as i64);
        }
        if k >= cap {
            return Err(Error::PrecisionExhausted { digits: cap });
        }
        k = (k * 2).min(cap);
    }
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.mod_floor(m).extended_gcd(m);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(m))
    } else if m.is_one() {
        Some(BigInt::zero())
    } else {
        None
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let re = &self.re + &o.re;
        match Scalar::combine_ext(self.ext.as_deref(), o.ext.as_deref()) {
            None => Scalar { re, ext: None },
            Some(e) => {
                let zero = BigRational::zero();
                let b1 = self.ext.as_ref().map_or(&zero, |x| &x.1);
                let b2 = o.ext.as_ref().map_or(&zero, |x| &x.1);
                Scalar::new(re, e, b1 + b2)
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -&self.re, ext: self.ext.as_deref().map(|(e, b)| Box::new((*e, -b))) }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self.ext.as_deref(), o.ext.as_deref()) {
            (None, None) => Scalar { re: &self.re * &o.re, ext: None },
            (None, Some((e, d))) => Scalar::new(&self.re * &o.re, *e, &self.re * d),
            (Some((e, b)), None) => Scalar::new(&self.re * &o.re, *e, b * &o.re),
            (Some((e, b)), Some((e2, d))) => {
                assert_eq!(e, e2, "mixing scalars from different extensions");
                let (s, t) = e.relation();
                let s = BigRational::from_integer(s.into());
                let t = BigRational::from_integer(t.into());
                let (a, c) = (&self.re, &o.re);
                let bd = b * d;
                let re = a * c + &t * &bd;
                let im = a * d + b * c + &s * &bd;
                Scalar::new(re, *e, im)
            }
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero scalar")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// `a/b` for rationals, `a/b+c/d*w` for extension scalars.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ext.as_deref() {
            None => f.write_str(&fmt_rational(&self.re)),
            Some((_, b)) => {
                let sign = if b.is_negative() { "-" } else { "+" };
                write!(f, "{}{}{}*w", fmt_rational(&self.re), sign, fmt_rational(&b.abs()))
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Parses `a/b` or, when `ext` is given, `a/b+c/d*w` (also `c/d*w` and `a-c*w`).
pub fn parse_scalar(s: &str, ext: Option<Extension>) -> Result<Scalar> {
    let s = s.trim();
    if let Some(body) = s.strip_suffix("*w").or_else(|| s.strip_suffix('w').filter(|b| b.is_empty() || b.ends_with(['+', '-']))) {
        let ext = ext.ok_or_else(|| Error::Parse(format!("'{s}' uses w outside an extension ring")))?;
        // split at the last sign that is not at position 0 and not part of an exponent
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        let (re, im) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            x => x.strip_prefix('+').unwrap_or(x),
        };
        return Ok(Scalar::new(parse_rational(re)?, ext, parse_rational(im)?));
    }
    Ok(Scalar::from_rational(parse_rational(s)?))
}
