//! Isomorphism search between root data: backtracking over reflection images
//! of a generating set, with the space of intertwiners narrowed at every step.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::fingerprint::{fingerprint, ClassData};
use crate::error::Result;
use crate::exact_linear::normal_form::{
    is_ring_invertible, multiple_of, same_line, saturate, vector_valuation,
};
use crate::exact_linear::{dot, Matrix, Scalar, Vector};
use crate::group_engine::greedy_generating_set;
use crate::root_datum::RootDatum;

#[derive(Clone, Debug)]
pub struct IsoBudget {
    /// Search-tree nodes visited before giving up.
    pub max_nodes: usize,
    /// Coefficient vectors tried per leaf before a leaf counts as unresolved.
    pub max_sweep: usize,
    pub seed: u64,
}

impl Default for IsoBudget {
    fn default() -> Self {
        IsoBudget { max_nodes: 200_000, max_sweep: 1 << 16, seed: 0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: usize,
    pub leaves: usize,
    /// Leaves whose coefficient sweep was not exhaustive and found nothing.
    pub unresolved_leaves: usize,
    pub max_intertwiner_dim: usize,
    pub budget_exceeded: bool,
}

#[derive(Clone, Debug)]
pub enum IsoVerdict {
    Isomorphic { witness: Matrix, intertwiner_dim: usize, stats: SearchStats },
    NotIsomorphic { field: Option<&'static str>, reason: String, stats: SearchStats },
    Inconclusive { reason: String, stats: SearchStats },
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> Option<bool> {
        match self {
            IsoVerdict::Isomorphic { .. } => Some(true),
            IsoVerdict::NotIsomorphic { .. } => Some(false),
            IsoVerdict::Inconclusive { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Matrix> {
        match self {
            IsoVerdict::Isomorphic { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// Re-checks a claimed isomorphism `φ: D₁ → D₂` directly from the definition:
/// `φ` is ring-invertible, `φ W₁ φ⁻¹ = W₂`, and `φ(R·b_σ) = R·b'_{φσφ⁻¹}`.
pub fn check_isomorphism(d1: &RootDatum, d2: &RootDatum, phi: &Matrix) -> Result<bool> {
    let n = d1.rank();
    if d1.p() != d2.p() || n != d2.rank() || phi.rows() != n || phi.cols() != n {
        return Ok(false);
    }
    if d1.weyl().order() != d2.weyl().order() || !is_ring_invertible(phi, d1.p())? {
        return Ok(false);
    }
    let inv = phi.inverse().expect("invertible");
    for g in d1.weyl().generators() {
        if !d2.weyl().contains(&(&(phi * g) * &inv)) {
            return Ok(false);
        }
    }
    for (r, b) in d1.reflections().iter().zip(d1.coroots()) {
        let image = &(phi * &r.matrix) * &inv;
        let Some(j) = d2.weyl().reflection_index(&image) else {
            return Ok(false);
        };
        if !same_line(&phi.apply(b), d2.coroot(j), d1.p())? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn check_automorphism(d: &RootDatum, phi: &Matrix) -> Result<bool> {
    check_isomorphism(d, d, phi)
}

pub fn is_isomorphic(d1: &RootDatum, d2: &RootDatum) -> Result<IsoVerdict> {
    is_isomorphic_with(d1, d2, &IsoBudget::default())
}

pub fn is_isomorphic_with(d1: &RootDatum, d2: &RootDatum, budget: &IsoBudget) -> Result<IsoVerdict> {
    let f1 = fingerprint(d1)?;
    let f2 = fingerprint(d2)?;
    if let Some(field) = f1.first_difference(&f2) {
        return Ok(IsoVerdict::NotIsomorphic {
            field: Some(field),
            reason: format!("fingerprints differ in {field}"),
            stats: SearchStats::default(),
        });
    }
    let n = d1.rank();
    if d1.weyl().order() == 1 {
        return Ok(IsoVerdict::Isomorphic {
            witness: Matrix::identity(n),
            intertwiner_dim: n * n,
            stats: SearchStats::default(),
        });
    }
    let mut search = Search::new(d1, d2, budget)?;
    let space: Vec<Matrix> = (0..n * n)
        .map(|k| Matrix::from_fn(n, n, |i, j| if i * n + j == k { Scalar::one() } else { Scalar::zero() }))
        .collect();
    let found = search.descend(0, space)?;
    let stats = search.stats.clone();
    Ok(match found {
        Some((witness, dim)) => IsoVerdict::Isomorphic { witness, intertwiner_dim: dim, stats },
        None if stats.budget_exceeded => IsoVerdict::Inconclusive {
            reason: format!("search budget of {} nodes exceeded", budget.max_nodes),
            stats,
        },
        None if stats.unresolved_leaves > 0 => IsoVerdict::Inconclusive {
            reason: format!(
                "{} leaves with intertwiner spaces too large to sweep exhaustively",
                stats.unresolved_leaves
            ),
            stats,
        },
        None => IsoVerdict::NotIsomorphic {
            field: None,
            reason: "no reflection-preserving generator correspondence admits a ring-invertible intertwiner respecting coroot lines".into(),
            stats,
        },
    })
}

#[derive(Clone, PartialEq, Eq)]
struct PairData {
    char_poly: Vec<Scalar>,
    forward: Option<i64>,
    backward: Option<i64>,
}

fn class_data(d: &RootDatum, i: usize, size: usize) -> Result<ClassData> {
    let beta = d.root(i)?;
    Ok(ClassData {
        size,
        order: d.reflections()[i].order,
        self_pairing: dot(beta, d.coroot(i)).valuation(d.p())?.finite(),
        image_index: vector_valuation(beta, d.p())?.finite(),
    })
}

fn pair_data(d: &RootDatum, i: usize, j: usize) -> Result<PairData> {
    let r = d.reflections();
    let prod = &r[i].matrix * &r[j].matrix;
    Ok(PairData {
        char_poly: prod.char_poly(),
        forward: dot(d.root(i)?, d.coroot(j)).valuation(d.p())?.finite(),
        backward: dot(d.root(j)?, d.coroot(i)).valuation(d.p())?.finite(),
    })
}

fn class_sizes(d: &RootDatum) -> Vec<(usize, usize, bool)> {
    // (class size, representative flag) per reflection
    let mut out = vec![(0, 0, false); d.reflections().len()];
    for c in d.reflection_classes() {
        for &m in &c.members {
            out[m] = (c.members.len(), c.representative, m == c.representative);
        }
    }
    out
}

/// Orders generators so that each one after the first fails to commute with
/// an earlier one whenever possible.
fn connected_order(gens: Vec<Matrix>) -> Vec<Matrix> {
    let mut rest = gens;
    let mut out: Vec<Matrix> = Vec::new();
    while !rest.is_empty() {
        let pos = rest
            .iter()
            .position(|g| out.iter().any(|h| (g * h) != (h * g)))
            .unwrap_or(0);
        out.push(rest.remove(pos));
    }
    out
}

struct Search<'a> {
    d1: &'a RootDatum,
    d2: &'a RootDatum,
    budget: &'a IsoBudget,
    p: u64,
    n: usize,
    /// Reflection indices in `d1` of the chosen generators.
    gens: Vec<usize>,
    /// Candidate images (reflection indices in `d2`) per generator.
    candidates: Vec<Vec<usize>>,
    chosen: Vec<usize>,
    pairs1: Vec<Vec<Option<PairData>>>,
    pairs2: HashMap<(usize, usize), PairData>,
    /// Class representatives of `d1` used for the coroot conditions.
    reps1: Vec<usize>,
    rng: ChaCha8Rng,
    stats: SearchStats,
}

impl<'a> Search<'a> {
    fn new(d1: &'a RootDatum, d2: &'a RootDatum, budget: &'a IsoBudget) -> Result<Self> {
        let p = d1.p();
        let n = d1.rank();
        let w1 = d1.weyl();
        let refl1: Vec<Matrix> = d1.reflections().iter().map(|r| r.matrix.clone()).collect();
        let gens_m = connected_order(greedy_generating_set(&refl1, n, p));
        let gens: Vec<usize> =
            gens_m.iter().map(|g| w1.reflection_index(g).expect("generator is a reflection")).collect();
        let sizes1 = class_sizes(d1);
        let sizes2 = class_sizes(d2);
        let mut data2 = Vec::new();
        for j in 0..d2.reflections().len() {
            data2.push(class_data(d2, j, sizes2[j].0)?);
        }
        let mut candidates = Vec::new();
        for (k, &g) in gens.iter().enumerate() {
            let want = class_data(d1, g, sizes1[g].0)?;
            let c: Vec<usize> = (0..data2.len())
                .filter(|&j| data2[j] == want && (k > 0 || sizes2[j].2))
                .collect();
            candidates.push(c);
        }
        let mut pairs1 = vec![vec![None; gens.len()]; gens.len()];
        for a in 0..gens.len() {
            for b in 0..a {
                pairs1[a][b] = Some(pair_data(d1, gens[b], gens[a])?);
            }
        }
        let reps1 = d1.reflection_classes().iter().map(|c| c.representative).collect();
        Ok(Search {
            d1,
            d2,
            budget,
            p,
            n,
            gens,
            candidates,
            chosen: Vec::new(),
            pairs1,
            pairs2: HashMap::new(),
            reps1,
            rng: ChaCha8Rng::seed_from_u64(budget.seed),
            stats: SearchStats::default(),
        })
    }

    fn pair2(&mut self, i: usize, j: usize) -> Result<PairData> {
        if let Some(d) = self.pairs2.get(&(i, j)) {
            return Ok(d.clone());
        }
        let d = pair_data(self.d2, i, j)?;
        self.pairs2.insert((i, j), d.clone());
        Ok(d)
    }

    fn descend(&mut self, level: usize, space: Vec<Matrix>) -> Result<Option<(Matrix, usize)>> {
        self.stats.nodes += 1;
        self.stats.max_intertwiner_dim = self.stats.max_intertwiner_dim.max(space.len());
        if self.stats.nodes > self.budget.max_nodes {
            self.stats.budget_exceeded = true;
            return Ok(None);
        }
        if level == self.gens.len() {
            self.stats.leaves += 1;
            let dim = space.len();
            return Ok(self.leaf(&space)?.map(|phi| (phi, dim)));
        }
        let g = self.d1.reflections()[self.gens[level]].matrix.clone();
        for h_idx in self.candidates[level].clone() {
            if self.chosen.contains(&h_idx) {
                continue;
            }
            let mut consistent = true;
            for b in 0..level {
                let want = self.pairs1[level][b].clone().expect("lower triangle");
                if self.pair2(self.chosen[b], h_idx)? != want {
                    consistent = false;
                    break;
                }
            }
            if !consistent {
                continue;
            }
            let h = self.d2.reflections()[h_idx].matrix.clone();
            let next = restrict_space(&space, &g, &h, self.n);
            if next.is_empty() {
                continue;
            }
            self.chosen.push(h_idx);
            let found = self.descend(level + 1, next)?;
            self.chosen.pop();
            if found.is_some() {
                return Ok(found);
            }
            if self.stats.budget_exceeded {
                return Ok(None);
            }
        }
        Ok(None)
    }

    /// Looks for a ring-invertible element of the intertwiner space carrying
    /// each coroot line onto the matching one.
    fn leaf(&mut self, space: &[Matrix]) -> Result<Option<Matrix>> {
        let (n, p) = (self.n, self.p);
        let d = space.len();
        // image reflection of each class representative
        let mut targets = Vec::new();
        for &i in &self.reps1 {
            let s = &self.d1.reflections()[i].matrix;
            let t = self
                .d2
                .reflections()
                .iter()
                .position(|r| space.iter().all(|b| (&r.matrix * b) == (b * s)));
            match t {
                Some(j) => targets.push((i, j)),
                None => return Ok(None),
            }
        }
        // coordinates: the n² entries followed by one coroot coefficient per class
        let width = n * n + targets.len();
        let mut cols: Vec<Vector> = Vec::with_capacity(d);
        for b in space {
            let mut v: Vector = b.entries().to_vec();
            for &(i, j) in &targets {
                let image = b.apply(self.d1.coroot(i));
                match multiple_of(&image, self.d2.coroot(j)) {
                    Some(l) => v.push(l),
                    None => return Ok(None),
                }
            }
            cols.push(v);
        }
        let lattice = saturate(&Matrix::from_rows(cols, width), p)?;
        let basis = lattice.basis().row_vectors();
        if basis.len() != d {
            return Ok(None);
        }
        let residues: Vec<Vec<u64>> = basis
            .iter()
            .map(|v| v.iter().map(|x| small_residue(x, p)).collect::<Result<Vec<u64>>>())
            .collect::<Result<_>>()?;
        let accept = |c: &[u64]| -> bool {
            let combo: Vec<u64> = (0..width)
                .map(|k| c.iter().zip(&residues).fold(0u64, |acc, (ci, r)| (acc + ci * r[k]) % p))
                .collect();
            combo[n * n..].iter().all(|&x| x != 0) && det_mod_p(&combo[..n * n], n, p) != 0
        };
        let total = (p as f64).powi(d as i32);
        let exhaustive = total <= self.budget.max_sweep as f64;
        let mut hit: Option<Vec<u64>> = None;
        if exhaustive {
            let mut c = vec![0u64; d];
            loop {
                if accept(&c) {
                    hit = Some(c.clone());
                    break;
                }
                let mut k = 0;
                while k < d {
                    c[k] += 1;
                    if c[k] < p {
                        break;
                    }
                    c[k] = 0;
                    k += 1;
                }
                if k == d {
                    break;
                }
            }
        } else {
            for _ in 0..self.budget.max_sweep {
                let c: Vec<u64> = (0..d).map(|_| self.rng.gen_range(0..p)).collect();
                if accept(&c) {
                    hit = Some(c);
                    break;
                }
            }
        }
        let Some(c) = hit else {
            if !exhaustive {
                self.stats.unresolved_leaves += 1;
            }
            return Ok(None);
        };
        let mut phi = Matrix::zeros(n, n);
        for (ci, v) in c.iter().zip(&basis) {
            let s = Scalar::from_int(*ci as i64);
            let m = Matrix::from_fn(n, n, |i, j| &v[i * n + j] * &s);
            phi = &phi + &m;
        }
        if check_isomorphism(self.d1, self.d2, &phi)? {
            Ok(Some(phi))
        } else {
            Ok(None)
        }
    }
}

/// Elements `φ` of the span of `space` with `φ·g = h·φ`.
fn restrict_space(space: &[Matrix], g: &Matrix, h: &Matrix, n: usize) -> Vec<Matrix> {
    let d = space.len();
    let images: Vec<Matrix> = space.iter().map(|b| (b * g).sub(&(h * b))).collect();
    let system = Matrix::from_fn(n * n, d, |r, k| images[k][(r / n, r % n)].clone());
    system
        .nullspace()
        .into_iter()
        .map(|c| {
            let mut m = Matrix::zeros(n, n);
            for (ck, b) in c.iter().zip(space) {
                if !ck.is_zero() {
                    m = &m + &b.scale(ck);
                }
            }
            m
        })
        .collect()
}

fn small_residue(x: &Scalar, p: u64) -> Result<u64> {
    let r: BigInt = x.residue(p, 1)?;
    Ok(r.to_u64().expect("residue below p"))
}

/// Determinant modulo `p` of a row-major `n × n` matrix of residues.
pub(crate) fn det_mod_p(entries: &[u64], n: usize, p: u64) -> u64 {
    let mut m: Vec<u64> = entries.to_vec();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r * n + col].is_multiple_of(p)) else {
            return 0;
        };
        if piv != col {
            for k in 0..n {
                m.swap(piv * n + k, col * n + k);
            }
            det = (p - det) % p;
        }
        let a = m[col * n + col];
        det = det * a % p;
        let inv = pow_mod(a, p - 2, p);
        for r in col + 1..n {
            let f = m[r * n + col] * inv % p;
            if f == 0 {
                continue;
            }
            for k in col..n {
                m[r * n + k] = (m[r * n + k] + p * p - f * m[col * n + k] % p) % p;
            }
        }
    }
    det
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}
