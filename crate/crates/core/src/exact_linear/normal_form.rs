//! Hermite and Smith normal forms over the discrete valuation ring `ℤ_(p)`
//! (and its unramified quadratic extensions), lattices, and finite abelian p-groups.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact_linear::matrix::{Matrix, Vector};
use crate::exact_linear::scalar::{Scalar, Valuation};

/// `p^e` for any integer exponent.
pub fn p_power(p: u64, e: i64) -> Scalar {
    let base = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Scalar::from_bigint(base)
    } else {
        Scalar::from_rational(BigRational::new(BigInt::one(), base))
    }
}

pub fn is_integral(x: &Scalar, p: u64) -> Result<bool> {
    Ok(x.valuation(p)?.is_integral())
}

pub fn is_unit(x: &Scalar, p: u64) -> Result<bool> {
    Ok(x.valuation(p)? == Valuation::Finite(0))
}

pub fn matrix_is_integral(m: &Matrix, p: u64) -> Result<bool> {
    for x in m.entries() {
        if !is_integral(x, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Invertible over the ring: integral with unit determinant.
pub fn is_ring_invertible(m: &Matrix, p: u64) -> Result<bool> {
    Ok(m.is_square() && matrix_is_integral(m, p)? && is_unit(&m.determinant(), p)?)
}

/// Canonical representative of `x` modulo `p^v·ℤ_p`: either zero or
/// `p^w·r` with `w = v(x) < v` and `0 < r < p^(v−w)` an integer.
pub fn reduce_mod_power(x: &Scalar, p: u64, v: i64) -> Result<Scalar> {
    match x.valuation(p)? {
        Valuation::Infinite => Ok(Scalar::zero()),
        Valuation::Finite(w) if w >= v => Ok(Scalar::zero()),
        Valuation::Finite(w) => {
            let unit_part = x * &p_power(p, -w);
            let r = unit_part.residue(p, (v - w) as u32)?;
            Ok(&Scalar::from_bigint(r) * &p_power(p, w))
        }
    }
}

fn min_valuation_entry(
    m: &Matrix,
    p: u64,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Result<Option<(usize, usize, i64)>> {
    let mut best: Option<(usize, usize, i64)> = None;
    for i in rows {
        for j in cols.clone() {
            if let Valuation::Finite(v) = m[(i, j)].valuation(p)? {
                if best.is_none_or(|(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                }
            }
        }
    }
    Ok(best)
}

/// Row-echelon normal form `H = U·m` with `U` invertible over the ring.
///
/// Pivots are `p^v`; entries above a pivot are reduced to canonical
/// representatives modulo the pivot, so row spans compare by equality of `H`.
/// Zero rows are moved to the bottom.
pub fn hermite_form(m: &Matrix, p: u64) -> Result<(Matrix, Matrix)> {
    let mut h = m.clone();
    let mut u = Matrix::identity(m.rows());
    let mut r = 0;
    for c in 0..h.cols() {
        if r == h.rows() {
            break;
        }
        let Some((pr, _, v)) = min_valuation_entry(&h, p, r..h.rows(), c..c + 1)? else {
            continue;
        };
        h.swap_rows(r, pr);
        u.swap_rows(r, pr);
        let unit = &p_power(p, v) / &h[(r, c)];
        h.scale_row(r, &unit);
        u.scale_row(r, &unit);
        let pivot = p_power(p, v);
        for i in r + 1..h.rows() {
            if !h[(i, c)].is_zero() {
                let f = -(&h[(i, c)] / &pivot);
                h.add_row_multiple(i, r, &f);
                u.add_row_multiple(i, r, &f);
            }
        }
        for i in 0..r {
            let x = h[(i, c)].clone();
            let rem = reduce_mod_power(&x, p, v)?;
            let f = -(&(&x - &rem) / &pivot);
            h.add_row_multiple(i, r, &f);
            u.add_row_multiple(i, r, &f);
        }
        r += 1;
    }
    Ok((h, u))
}

/// Smith normal form: `U·m·V = D` with `D` diagonal, entries `p^{e_1}, p^{e_2}, …`
/// ascending, then zeros.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: Matrix,
    pub right: Matrix,
    pub diagonal: Matrix,
    /// Valuations of the nonzero diagonal entries, ascending.
    pub exponents: Vec<i64>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }
}

pub fn smith_form(m: &Matrix, p: u64) -> Result<SmithForm> {
    let mut d = m.clone();
    let mut u = Matrix::identity(m.rows());
    let mut w = Matrix::identity(m.cols());
    let mut exponents = Vec::new();
    let k_max = m.rows().min(m.cols());
    for k in 0..k_max {
        let Some((pi, pj, v)) = min_valuation_entry(&d, p, k..d.rows(), k..d.cols())? else {
            break;
        };
        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        d.swap_cols(k, pj);
        w.swap_cols(k, pj);
        let unit = &p_power(p, v) / &d[(k, k)];
        d.scale_row(k, &unit);
        u.scale_row(k, &unit);
        let pivot = p_power(p, v);
        for i in k + 1..d.rows() {
            if !d[(i, k)].is_zero() {
                let f = -(&d[(i, k)] / &pivot);
                d.add_row_multiple(i, k, &f);
                u.add_row_multiple(i, k, &f);
            }
        }
        for j in k + 1..d.cols() {
            if !d[(k, j)].is_zero() {
                let f = -(&d[(k, j)] / &pivot);
                d.add_col_multiple(j, k, &f);
                w.add_col_multiple(j, k, &f);
            }
        }
        exponents.push(v);
    }
    Ok(SmithForm { left: u, right: w, diagonal: d, exponents })
}

/// A finite abelian p-group `⊕ ℤ/p^{e_i}` together with a free part of the
/// given rank (read as `ℤ_p^r` for quotients of lattices and `(ℤ/p^∞)^r`
/// for the divisible part of a center).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteAbelianPGroup {
    pub p: u64,
    /// Exponents `e_i ≥ 1`, ascending.
    pub exponents: Vec<u32>,
    pub free_rank: usize,
}

impl FiniteAbelianPGroup {
    pub fn trivial(p: u64) -> Self {
        FiniteAbelianPGroup { p, exponents: Vec::new(), free_rank: 0 }
    }

    pub fn new(p: u64, mut exponents: Vec<u32>, free_rank: usize) -> Self {
        exponents.retain(|&e| e > 0);
        exponents.sort_unstable();
        FiniteAbelianPGroup { p, exponents, free_rank }
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.exponents.iter().map(|&e| BigInt::from(self.p).pow(e)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty() && self.free_rank == 0
    }

    pub fn is_finite_trivial(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Order of the finite part.
    pub fn order(&self) -> BigInt {
        self.invariant_factors().iter().product()
    }

    /// Total exponent `log_p` of the order of the finite part.
    pub fn log_order(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

impl fmt::Display for FiniteAbelianPGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> =
            self.invariant_factors().iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(format!("free^{}", self.free_rank));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `ℤ_p^n / (row span of m)`.
pub fn cokernel_structure(m: &Matrix, p: u64) -> Result<FiniteAbelianPGroup> {
    let s = smith_form(m, p)?;
    let exps = s.exponents.iter().filter(|&&e| e > 0).map(|&e| e as u32).collect();
    Ok(FiniteAbelianPGroup::new(p, exps, m.cols() - s.rank()))
}

/// A free submodule of `R^n` given by a basis of row vectors in Hermite form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    p: u64,
    ambient: usize,
    basis: Matrix,
}

impl Lattice {
    /// Lattice spanned by the given rows (which need not be independent).
    pub fn span(rows: &Matrix, p: u64) -> Result<Self> {
        let (h, _) = hermite_form(rows, p)?;
        let nonzero: Vec<Vector> =
            h.row_vectors().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        Ok(Lattice { p, ambient: rows.cols(), basis: Matrix::from_rows(nonzero, rows.cols()) })
    }

    pub fn from_vectors(vs: &[Vector], ambient: usize, p: u64) -> Result<Self> {
        Lattice::span(&Matrix::from_rows(vs.to_vec(), ambient), p)
    }

    pub fn full(n: usize, p: u64) -> Self {
        Lattice { p, ambient: n, basis: Matrix::identity(n) }
    }

    pub fn zero(n: usize, p: u64) -> Self {
        Lattice { p, ambient: n, basis: Matrix::zeros(0, n) }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Coordinates of `v` in the basis, if `v` lies in the rational span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if self.rank() == 0 {
            return v.iter().all(Scalar::is_zero).then(Vec::new);
        }
        self.basis.solve_left(v)
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        match self.coordinates(v) {
            None => Ok(false),
            Some(c) => {
                for x in &c {
                    if !is_integral(x, self.p)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn contains_lattice(&self, other: &Lattice) -> Result<bool> {
        for r in other.basis.row_vectors() {
            if !self.contains(&r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        Lattice::span(&self.basis.vstack(&other.basis), self.p)
    }

    pub fn saturate(&self) -> Result<Lattice> {
        saturate(&self.basis, self.p)
    }

    /// `other / self` for `self ⊆ other` of the same rank is finite; returns its structure.
    pub fn quotient_in(&self, other: &Lattice) -> Result<FiniteAbelianPGroup> {
        let coords: Option<Vec<Vector>> =
            self.basis.row_vectors().iter().map(|r| other.coordinates(r)).collect();
        let coords = coords.ok_or_else(|| Error::Domain("lattice not contained in the rational span".into()))?;
        cokernel_structure(&Matrix::from_rows(coords, other.rank()), self.p)
    }
}

/// `{x ∈ R^n : kx ∈ span(rows) for some k ≠ 0}`, in Hermite form.
pub fn saturate(rows: &Matrix, p: u64) -> Result<Lattice> {
    let n = rows.cols();
    if rows.rows() == 0 {
        return Ok(Lattice::zero(n, p));
    }
    let s = smith_form(rows, p)?;
    let vinv = s.right.inverse().expect("smith transform is invertible");
    let idx: Vec<usize> = (0..s.rank()).collect();
    Lattice::span(&vinv.select_rows(&idx), p)
}

/// Integer vectors to scalars.
pub fn int_vector(v: &[i64]) -> Vector {
    v.iter().map(|&x| Scalar::from_int(x)).collect()
}

/// `true` when the two vectors span the same `R`-line (or are both zero).
pub fn same_line(a: &[Scalar], b: &[Scalar], p: u64) -> Result<bool> {
    let ia = a.iter().position(|x| !x.is_zero());
    let ib = b.iter().position(|x| !x.is_zero());
    match (ia, ib) {
        (None, None) => Ok(true),
        (Some(i), Some(j)) if i == j => {
            let ratio = &b[i] / &a[i];
            if !is_unit(&ratio, p)? {
                return Ok(false);
            }
            Ok(a.iter().zip(b).all(|(x, y)| &(x * &ratio) == y))
        }
        _ => Ok(false),
    }
}

/// The scalar `λ` with `v = λ·b`, if `v` is a multiple of the nonzero vector `b`.
pub fn multiple_of(v: &[Scalar], b: &[Scalar]) -> Option<Scalar> {
    let i = b.iter().position(|x| !x.is_zero())?;
    let lambda = &v[i] / &b[i];
    v.iter().zip(b).all(|(x, y)| &(y * &lambda) == x).then_some(lambda)
}

/// Divides a nonzero vector by `p^v` where `v` is the minimal valuation of its entries,
/// giving a primitive generator of the same rational line.
pub fn primitive(v: &[Scalar], p: u64) -> Result<Vector> {
    let mut min: Option<i64> = None;
    for x in v {
        if let Valuation::Finite(w) = x.valuation(p)? {
            min = Some(min.map_or(w, |m| m.min(w)));
        }
    }
    let Some(m) = min else { return Ok(v.to_vec()) };
    let s = p_power(p, -m);
    Ok(v.iter().map(|x| x * &s).collect())
}

/// Minimal valuation over the entries of a vector (`Infinite` for zero).
pub fn vector_valuation(v: &[Scalar], p: u64) -> Result<Valuation> {
    let mut min = Valuation::Infinite;
    for x in v {
        if let Valuation::Finite(w) = x.valuation(p)? {
            min = match min {
                Valuation::Infinite => Valuation::Finite(w),
                Valuation::Finite(m) => Valuation::Finite(m.min(w)),
            };
        }
    }
    Ok(min)
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64(rows)
    }

    #[test]
    fn hermite_examples() {
        let (h, u) = hermite_form(&m(&[vec![1, 0], vec![0, 1]]), 2).unwrap();
        assert!(h.is_identity() && u.is_identity());

        let (h, _) = hermite_form(&m(&[vec![3, 0], vec![0, 2]]), 2).unwrap();
        assert_eq!(h, m(&[vec![1, 0], vec![0, 2]]));

        // im(1 − σ) for σ = −1 on ℤ²: rows of 1 − σ = 2I
        let one_minus = m(&[vec![2, 0], vec![0, 2]]);
        let (h, u) = hermite_form(&one_minus, 2).unwrap();
        assert_eq!(h, m(&[vec![2, 0], vec![0, 2]]));
        assert_eq!(&u * &one_minus, h);
    }

    #[test]
    fn hermite_reduces_above_pivot() {
        // rows (1, 5), (0, 4) at p = 2: 5 reduces to 1 mod 4
        let (h, u) = hermite_form(&m(&[vec![1, 5], vec![0, 4]]), 2).unwrap();
        assert_eq!(h, m(&[vec![1, 1], vec![0, 4]]));
        assert!(is_ring_invertible(&u, 2).unwrap());
    }

    #[test]
    fn smith_examples() {
        let s = smith_form(&Matrix::zeros(2, 3), 2).unwrap();
        assert!(s.exponents.is_empty());

        let a = m(&[vec![2, 0], vec![0, 3]]);
        let s = smith_form(&a, 2).unwrap();
        assert_eq!(s.exponents, vec![0, 1]);
        assert_eq!(&(&s.left * &a) * &s.right, s.diagonal);
        assert_eq!(cokernel_structure(&a, 2).unwrap(), FiniteAbelianPGroup::new(2, vec![1], 0));

        let s = smith_form(&m(&[vec![2]]), 2).unwrap();
        assert_eq!(s.exponents, vec![1]);
    }

    #[test]
    fn cokernel_examples() {
        assert!(cokernel_structure(&Matrix::identity(3), 5).unwrap().is_trivial());
        assert_eq!(cokernel_structure(&m(&[vec![4]]), 2).unwrap().invariant_factors(), vec![BigInt::from(4)]);
        let g = cokernel_structure(&m(&[vec![2, 0], vec![0, 2]]), 2).unwrap();
        // oracle: ℤ²/2ℤ² has four elements, all of order ≤ 2
        let mut classes = std::collections::HashSet::new();
        for x in 0..6i64 {
            for y in 0..6i64 {
                classes.insert((x.rem_euclid(2), y.rem_euclid(2)));
            }
        }
        assert_eq!(g.order(), BigInt::from(classes.len()));
        assert_eq!(g.exponents, vec![1, 1]);
        assert_eq!(cokernel_structure(&m(&[vec![1, 0]]), 2).unwrap().free_rank, 1);
    }

    #[test]
    fn saturate_examples() {
        let s = saturate(&m(&[vec![2, 0]]), 2).unwrap();
        assert_eq!(s.basis(), &m(&[vec![1, 0]]));
        let s = saturate(&m(&[vec![1, 1]]), 2).unwrap();
        assert_eq!(s.basis(), &m(&[vec![1, 1]]));
        let s = saturate(&m(&[vec![2, 2], vec![0, 4]]), 2).unwrap();
        assert_eq!(s, Lattice::full(2, 2));
        // brute-force oracle: (1,0) and (0,1) have multiples in span{(2,2),(0,4)}
        let l = Lattice::span(&m(&[vec![2, 2], vec![0, 4]]), 2).unwrap();
        assert!(l.contains(&int_vector(&[4, 0])).unwrap());
        assert!(l.contains(&int_vector(&[0, 4])).unwrap());
    }

    #[test]
    fn reduce_mod_power_is_canonical() {
        let r = reduce_mod_power(&Scalar::from_int(13), 2, 3).unwrap();
        assert_eq!(r, Scalar::from_int(5));
        let r = reduce_mod_power(&Scalar::from_ratio(3, 2), 2, 1).unwrap();
        // 3/2 ≡ 1/2 + 1 ≡ 1/2 + 3/2 − 1 ... canonical rep has the form 2^{-1}·r, r < 4
        assert_eq!(r, Scalar::from_ratio(3, 2));
        assert_eq!(reduce_mod_power(&Scalar::from_int(8), 2, 3).unwrap(), Scalar::zero());
    }

    #[test]
    fn lattice_quotient_index() {
        let big = Lattice::full(2, 3);
        let small = Lattice::span(&m(&[vec![3, 0], vec![0, 9]]), 3).unwrap();
        let q = small.quotient_in(&big).unwrap();
        assert_eq!(q.exponents, vec![1, 2]);
    }
}
