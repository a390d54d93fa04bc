//! The exotic 2-compact datum DI(4): Shephard–Todd group 24 acting on a
//! rank-three lattice over `ℤ₂ ⊃ ℤ[ω]`, `ω = (1+√−7)/2`.

use crate::error::{Error, Result};
use crate::exact_linear::normal_form::p_power;
use crate::exact_linear::{Extension, Lattice, Matrix, Scalar, Vector};
use crate::group_engine::{greedy_generating_set, MatrixGroup};
use crate::root_datum::RootDatum;

const P: u64 = 2;

fn omega() -> Scalar {
    Scalar::theta(Extension::Omega7)
}

/// The 42 vectors `±` permutations of `(2,0,0)`, `(0,λ,λ)`, `(λ̄,1,1)` with
/// `λ = (−1+√−7)/2 = ω − 1` and `λ̄ = −ω`, under all sign changes.
pub fn di4_root_vectors() -> Vec<Vector> {
    let lambda = &omega() - &Scalar::one();
    let lambda_bar = -omega();
    let zero = Scalar::zero();
    let bases = [
        [Scalar::from_int(2), zero.clone(), zero.clone()],
        [zero.clone(), lambda.clone(), lambda],
        [lambda_bar, Scalar::one(), Scalar::one()],
    ];
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out: Vec<Vector> = Vec::new();
    for b in &bases {
        for perm in &perms {
            for signs in 0..8u32 {
                let v: Vector = (0..3)
                    .map(|i| {
                        let x = b[perm[i]].clone();
                        if signs >> i & 1 == 1 {
                            -x
                        } else {
                            x
                        }
                    })
                    .collect();
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Unitary reflection `x ↦ x − (⟨x, a⟩/2)·a` with `⟨x, a⟩ = Σ x_i·ā_i` (all roots have norm 4).
fn unitary_reflection(a: &[Scalar]) -> Matrix {
    let half = Scalar::from_ratio(1, 2);
    Matrix::from_fn(3, 3, |i, j| {
        let d = &(&a[i] * &a[j].conj()) * &half;
        if i == j {
            &Scalar::one() - &d
        } else {
            -d
        }
    })
}

/// Reflections and roots rewritten in a basis of the `ℤ₂`-span `L` of the roots.
fn lattice_frame() -> Result<(Vec<Matrix>, Vec<Vector>)> {
    let roots = di4_root_vectors();
    let l = Lattice::from_vectors(&roots, 3, P)?;
    let pm = l.basis().clone();
    if pm.rows() != 3 {
        return Err(Error::InvariantViolation("DI(4) roots do not span a rank-3 lattice".into()));
    }
    let q = pm.transpose().inverse().expect("full rank");
    let qi = pm.transpose();
    let mut mats: Vec<Matrix> = Vec::new();
    for a in &roots {
        let m = &(&q * &unitary_reflection(a)) * &qi;
        if !mats.contains(&m) {
            mats.push(m);
        }
    }
    let new_roots = roots.iter().map(|a| q.apply(a)).collect();
    Ok((mats, new_roots))
}

/// The group `W(DI(4))` in the lattice basis.
pub fn di4_weyl_group() -> Result<MatrixGroup> {
    let (mats, _) = lattice_frame()?;
    let gens = greedy_generating_set(&mats, 3, P);
    MatrixGroup::generated_by(gens, 3, P)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorootEnumeration {
    /// Lines `R·2^j·ℓ` between `im(1 − σ)` and its saturation `R·ℓ`, per class.
    pub candidates: usize,
    pub valid: usize,
    /// The exponents `j` of the valid candidates.
    pub valid_exponents: Vec<i64>,
}

fn candidates(w: &MatrixGroup) -> Result<Vec<(i64, RootDatum)>> {
    let classes = w.reflection_classes();
    if classes.len() != 1 {
        return Err(Error::InvariantViolation(format!(
            "W(DI(4)) has {} reflection classes, expected one",
            classes.len()
        )));
    }
    let rep = &w.reflections()[classes[0].representative];
    let mut out = Vec::new();
    for j in 0..=rep.image_index {
        let s = p_power(P, j);
        let b: Vector = rep.line.iter().map(|x| x * &s).collect();
        let d = RootDatum::with_group(P, 3, Some(Extension::Omega7), w.clone(), vec![(rep.matrix.clone(), b)])?;
        out.push((j, d));
    }
    Ok(out)
}

/// Enumerates the equivariant coroot-line structures on `W(DI(4))`.
pub fn di4_coroot_enumeration() -> Result<CorootEnumeration> {
    let w = di4_weyl_group()?;
    let cands = candidates(&w)?;
    let mut valid_exponents = Vec::new();
    for (j, d) in &cands {
        if d.verify()?.ok() {
            valid_exponents.push(*j);
        }
    }
    Ok(CorootEnumeration { candidates: cands.len(), valid: valid_exponents.len(), valid_exponents })
}

pub fn di4_datum() -> Result<RootDatum> {
    let w = di4_weyl_group()?;
    let mut valid = Vec::new();
    for (_, d) in candidates(&w)? {
        if d.verify()?.ok() {
            valid.push(d);
        }
    }
    if valid.len() != 1 {
        return Err(Error::InvariantViolation(format!(
            "expected a unique coroot structure on W(DI(4)), found {}",
            valid.len()
        )));
    }
    Ok(valid.pop().expect("one"))
}
