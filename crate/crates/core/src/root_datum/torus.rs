//! Elements of the discrete torus `T̆ = L ⊗ ℤ/p^∞`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_linear::normal_form::is_integral;
use crate::exact_linear::{Matrix, Scalar, Vector};

/// A vector with p-power denominators modulo the standard lattice, stored with
/// every coordinate in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusElement {
    p: u64,
    coords: Vec<BigRational>,
}

impl TorusElement {
    pub fn zero(n: usize, p: u64) -> Self {
        TorusElement { p, coords: vec![BigRational::zero(); n] }
    }

    /// Reduces an arbitrary scalar vector into `ℚ_p/ℤ_p` coordinatewise.
    pub fn from_scalars(v: &[Scalar], p: u64) -> Result<Self> {
        let coords = v.iter().map(|x| x.fractional_part(p)).collect::<Result<_>>()?;
        Ok(TorusElement { p, coords })
    }

    pub fn from_rationals(v: &[BigRational], p: u64) -> Result<Self> {
        let s: Vector = v.iter().cloned().map(Scalar::from_rational).collect();
        TorusElement::from_scalars(&s, p)
    }

    pub fn from_ratios(v: &[(i64, i64)], p: u64) -> Result<Self> {
        let s: Vector = v.iter().map(|&(a, b)| Scalar::from_ratio(a, b)).collect();
        TorusElement::from_scalars(&s, p)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// The canonical lift with coordinates in `[0, 1)`.
    pub fn lift(&self) -> Vector {
        self.coords.iter().cloned().map(Scalar::from_rational).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &TorusElement) -> Result<TorusElement> {
        let v: Vector = self.lift().iter().zip(o.lift()).map(|(a, b)| a + &b).collect();
        TorusElement::from_scalars(&v, self.p)
    }

    pub fn neg(&self) -> Result<TorusElement> {
        let v: Vector = self.lift().iter().map(|a| -a).collect();
        TorusElement::from_scalars(&v, self.p)
    }

    pub fn mul_int(&self, k: &BigInt) -> Result<TorusElement> {
        let s = Scalar::from_bigint(k.clone());
        let v: Vector = self.lift().iter().map(|a| a * &s).collect();
        TorusElement::from_scalars(&v, self.p)
    }

    /// `w·t` for a lattice automorphism acting on column vectors.
    pub fn act(&self, w: &Matrix) -> Result<TorusElement> {
        TorusElement::from_scalars(&w.apply(&self.lift()), self.p)
    }

    /// Multiplicative order, a power of p.
    pub fn order(&self) -> BigInt {
        self.coords.iter().fold(BigInt::one(), |acc, c| {
            let d = c.denom().clone();
            if d > acc {
                d
            } else {
                acc
            }
        })
    }

    /// `true` if the linear form `beta` takes an integral value on a (any) lift.
    pub fn pairs_integrally(&self, beta: &[Scalar]) -> Result<bool> {
        let v = crate::exact_linear::dot(beta, &self.lift());
        is_integral(&v, self.p)
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| if c.denom().is_one() { c.numer().to_string() } else { c.to_string() })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[{self}]")
    }
}

/// Parses `1/2,0;1/4,1/4` into a list of torus elements of dimension `n`.
pub fn parse_torus_list(s: &str, n: usize, p: u64) -> Result<Vec<TorusElement>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|part| {
            let v: Vector = part
                .split(',')
                .map(|x| crate::exact_linear::parse_scalar(x, None))
                .collect::<Result<_>>()?;
            if v.len() != n {
                return Err(Error::Parse(format!(
                    "torus element '{part}' has {} coordinates, expected {n}",
                    v.len()
                )));
            }
            TorusElement::from_scalars(&v, p)
        })
        .collect()
}

/// All elements of the subgroup generated by `gens`, by breadth-first closure.
pub fn subgroup_elements(gens: &[TorusElement], n: usize, p: u64) -> Result<Vec<TorusElement>> {
    let mut seen = std::collections::HashSet::new();
    let zero = TorusElement::zero(n, p);
    seen.insert(zero.clone());
    let mut out = vec![zero];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let x = out[i].add(g)?;
            if seen.insert(x.clone()) {
                out.push(x);
                if out.len() > crate::config::order_bound() {
                    return Err(Error::OrderBoundExceeded { bound: crate::config::order_bound() });
                }
            }
        }
        i += 1;
    }
    Ok(out)
}
