//! Modules over `𝔽₂[W]` for a finite matrix group `W ⊆ GL_n(𝔽₂)`:
//! Krull–Schmidt decomposition via the endomorphism ring, and identification
//! of Weyl pairs `(W(ν), E)` of 2-compact groups with polynomial cohomology.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config;
use crate::error::{Error, Result};

/// Largest supported module dimension.
pub const MAX_DIM: usize = 12;
const EXHAUSTIVE_END_DIM: usize = 16;
const RANDOM_TRIES: usize = 4096;

/// A matrix over `𝔽₂`; row `i` is stored as the bits of `rows[i]` (bit `j` = column `j`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_strings())
    }
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix { rows, cols, data: vec![0; rows] }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix { rows: n, cols: n, data: (0..n).map(|i| 1 << i).collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let data = (0..rows)
            .map(|i| (0..cols).filter(|&j| f(i, j)).fold(0u32, |acc, j| acc | 1 << j))
            .collect();
        F2Matrix { rows, cols, data }
    }

    /// Rows given as strings of `0`/`1`.
    pub fn from_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::new();
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Parse("rows of unequal length".into()));
            }
            let mut bits = 0u32;
            for (j, ch) in r.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => bits |= 1 << j,
                    _ => return Err(Error::Parse(format!("bad matrix entry '{ch}'"))),
                }
            }
            data.push(bits);
        }
        Ok(F2Matrix { rows: rows.len(), cols, data })
    }

    pub fn to_strings(&self) -> Vec<String> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect())
            .collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if v {
            self.data[i] |= 1 << j;
        } else {
            self.data[i] &= !(1 << j);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&r| r == 0)
    }

    pub fn mul(&self, o: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, o.rows);
        let data = self
            .data
            .iter()
            .map(|&r| (0..self.cols).filter(|&k| r >> k & 1 == 1).fold(0u32, |acc, k| acc ^ o.data[k]))
            .collect();
        F2Matrix { rows: self.rows, cols: o.cols, data }
    }

    pub fn add(&self, o: &F2Matrix) -> F2Matrix {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a ^ b).collect();
        F2Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> F2Matrix {
        F2Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn column(&self, j: usize) -> u32 {
        (0..self.rows).filter(|&i| self.get(i, j)).fold(0u32, |acc, i| acc | 1 << i)
    }

    pub fn from_columns(rows: usize, cols: &[u32]) -> F2Matrix {
        F2Matrix::from_fn(rows, cols.len(), |i, j| cols[j] >> i & 1 == 1)
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: u32) -> u32 {
        self.data
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &r)| acc | (((r & v).count_ones() & 1) << i))
    }

    pub fn rank(&self) -> usize {
        row_basis(&self.data).len()
    }

    pub fn inverse(&self) -> Option<F2Matrix> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let mut a = self.data.clone();
        let mut b: Vec<u32> = (0..n).map(|i| 1 << i).collect();
        for c in 0..n {
            let piv = (c..n).find(|&r| a[r] >> c & 1 == 1)?;
            a.swap(c, piv);
            b.swap(c, piv);
            for r in 0..n {
                if r != c && a[r] >> c & 1 == 1 {
                    a[r] ^= a[c];
                    b[r] ^= b[c];
                }
            }
        }
        Some(F2Matrix { rows: n, cols: n, data: b })
    }

    pub fn pow(&self, e: usize) -> F2Matrix {
        let mut r = F2Matrix::identity(self.rows);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Basis of `{v : M v = 0}` as column bit vectors.
    pub fn kernel(&self) -> Vec<u32> {
        nullspace_bits(&self.data, self.cols)
    }

    /// Basis of the column space.
    pub fn image(&self) -> Vec<u32> {
        row_basis(&self.transpose().data)
    }
}

/// Reduced basis of the span of bit vectors.
fn row_basis(vs: &[u32]) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for &v in vs {
        let mut x = v;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

/// Solutions of the homogeneous system whose equations are the given rows.
fn nullspace_bits(rows: &[u32], nvars: usize) -> Vec<u32> {
    let mut m: Vec<u32> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nvars {
        let Some(p) = (r..m.len()).find(|&i| m[i] >> c & 1 == 1) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i] >> c & 1 == 1 {
                m[i] ^= m[r];
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..nvars)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = 1u32 << free;
            for (i, &pc) in pivots.iter().enumerate() {
                if m[i] >> free & 1 == 1 {
                    v |= 1 << pc;
                }
            }
            v
        })
        .collect()
}

/// Long-bit-vector nullspace for the endomorphism-ring system (up to 144 unknowns).
fn nullspace_wide(rows: Vec<Vec<u64>>, nvars: usize) -> Vec<Vec<u64>> {
    let words = nvars.div_ceil(64);
    let bit = |v: &Vec<u64>, c: usize| v[c / 64] >> (c % 64) & 1 == 1;
    let mut m = rows;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nvars {
        let Some(p) = (r..m.len()).find(|&i| bit(&m[i], c)) else { continue };
        m.swap(r, p);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && bit(row, c) {
                for w in 0..words {
                    row[w] ^= pivot_row[w];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..nvars)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; words];
            v[free / 64] |= 1 << (free % 64);
            for (i, &pc) in pivots.iter().enumerate() {
                if bit(&m[i], free) {
                    v[pc / 64] |= 1 << (pc % 64);
                }
            }
            v
        })
        .collect()
}

/// A finite-dimensional module: generators of `W` acting on `𝔽₂^dim` (columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Module {
    pub dim: usize,
    pub generators: Vec<F2Matrix>,
}

#[derive(Clone, Debug)]
pub struct Summand {
    pub module: F2Module,
    /// Columns: the summand's basis in the coordinates of the input module.
    pub basis: F2Matrix,
}

#[derive(Clone, Debug)]
pub struct KrullSchmidt {
    pub summands: Vec<Summand>,
    /// `[basis₁ | basis₂ | …]`, invertible.
    pub change_of_basis: F2Matrix,
    /// Every indecomposability claim came from an exhaustive search of `End`.
    pub certified: bool,
}

impl F2Module {
    pub fn new(dim: usize, generators: Vec<F2Matrix>) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::Domain(format!("module dimension {dim} exceeds the bound {MAX_DIM}")));
        }
        for g in &generators {
            if g.rows() != dim || g.cols() != dim || g.inverse().is_none() {
                return Err(Error::Domain("generators must be invertible dim × dim matrices".into()));
            }
        }
        Ok(F2Module { dim, generators })
    }

    /// Basis of `End_{𝔽₂[W]}(V)`.
    pub fn endomorphisms(&self) -> Vec<F2Matrix> {
        let n = self.dim;
        let nvars = n * n;
        let words = nvars.div_ceil(64).max(1);
        let mut rows = Vec::new();
        for g in &self.generators {
            for i in 0..n {
                for j in 0..n {
                    // (Xg − gX)_{ij} = Σ_k x_{ik} g_{kj} + g_{ik} x_{kj}
                    let mut row = vec![0u64; words];
                    for k in 0..n {
                        if g.get(k, j) {
                            let v = i * n + k;
                            row[v / 64] ^= 1 << (v % 64);
                        }
                        if g.get(i, k) {
                            let v = k * n + j;
                            row[v / 64] ^= 1 << (v % 64);
                        }
                    }
                    rows.push(row);
                }
            }
        }
        nullspace_wide(rows, nvars)
            .into_iter()
            .map(|v| F2Matrix::from_fn(n, n, |i, j| v[(i * n + j) / 64] >> ((i * n + j) % 64) & 1 == 1))
            .collect()
    }

    /// The module structure on a `W`-invariant subspace with basis columns `basis`.
    pub fn restrict(&self, basis: &F2Matrix) -> F2Module {
        let k = basis.cols();
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let cols: Vec<u32> = (0..k).map(|j| coordinates(basis, g.apply(basis.column(j)))).collect();
                F2Matrix::from_columns(k, &cols)
            })
            .collect();
        F2Module { dim: k, generators: gens }
    }

    /// Closure of the generators, bounded by the configured order bound.
    pub fn image_group(&self) -> Result<Vec<F2Matrix>> {
        let id = F2Matrix::identity(self.dim);
        let mut seen: HashSet<F2Matrix> = HashSet::from([id.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        let bound = config::order_bound();
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.mul(&x);
                if seen.insert(y.clone()) {
                    if out.len() >= bound {
                        return Err(Error::OrderBoundExceeded { bound });
                    }
                    out.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(out)
    }

    fn fixed_dim(&self) -> usize {
        let n = self.dim;
        let mut rows = Vec::new();
        for g in &self.generators {
            rows.extend(g.add(&F2Matrix::identity(n)).data);
        }
        nullspace_bits(&rows, n).len()
    }

    /// `dim V / Σ im(g − 1)`.
    fn cofixed_dim(&self) -> usize {
        let n = self.dim;
        let mut cols = Vec::new();
        for g in &self.generators {
            cols.extend(g.add(&F2Matrix::identity(n)).image());
        }
        n - row_basis(&cols).len()
    }

    pub fn signature(&self) -> Result<ModuleSignature> {
        Ok(ModuleSignature {
            dim: self.dim,
            order: self.image_group()?.len(),
            fixed_dim: self.fixed_dim(),
            cofixed_dim: self.cofixed_dim(),
            end_dim: self.endomorphisms().len(),
        })
    }
}

/// `a` with `basis·a = v`, for `v` in the column span.
fn coordinates(basis: &F2Matrix, v: u32) -> u32 {
    let k = basis.cols();
    // augment columns with v and eliminate
    let aug: Vec<u32> = (0..basis.rows()).map(|i| basis.data[i] | ((v >> i & 1) << k)).collect();
    let mut m = aug;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..m.len()).find(|&i| m[i] >> c & 1 == 1) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i] >> c & 1 == 1 {
                m[i] ^= m[r];
            }
        }
        pivots.push(c);
        r += 1;
    }
    debug_assert!(m[r..].iter().all(|&x| x >> k & 1 == 0), "vector outside the span");
    pivots.iter().enumerate().fold(0u32, |acc, (i, &c)| acc | ((m[i] >> k & 1) << c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModuleSignature {
    pub dim: usize,
    pub order: usize,
    pub fixed_dim: usize,
    pub cofixed_dim: usize,
    pub end_dim: usize,
}

/// Krull–Schmidt decomposition by repeated Fitting splittings.
pub fn krull_schmidt(m: &F2Module, seed: u64) -> Result<KrullSchmidt> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut certified = true;
    let mut summands = Vec::new();
    let id = F2Matrix::identity(m.dim);
    split_recursive(m, &id, &mut rng, &mut certified, &mut summands);
    let cols: Vec<u32> = summands.iter().flat_map(|s: &Summand| (0..s.basis.cols()).map(|j| s.basis.column(j)).collect::<Vec<_>>()).collect();
    let change_of_basis = F2Matrix::from_columns(m.dim, &cols);
    Ok(KrullSchmidt { summands, change_of_basis, certified })
}

fn split_recursive(
    m: &F2Module,
    basis: &F2Matrix,
    rng: &mut ChaCha8Rng,
    certified: &mut bool,
    out: &mut Vec<Summand>,
) {
    if m.dim == 0 {
        return;
    }
    match fitting_split(m, rng, certified) {
        Some((ker, img)) => {
            for part in [ker, img] {
                let sub = m.restrict(&part);
                let composed = basis.mul(&part);
                split_recursive(&sub, &composed, rng, certified, out);
            }
        }
        None => out.push(Summand { module: m.clone(), basis: basis.clone() }),
    }
}

/// Finds `X ∈ End(V)` with `X^n` neither zero nor invertible and returns
/// bases of `ker X^n` and `im X^n`.
fn fitting_split(m: &F2Module, rng: &mut ChaCha8Rng, certified: &mut bool) -> Option<(F2Matrix, F2Matrix)> {
    let n = m.dim;
    let end = m.endomorphisms();
    let e = end.len();
    let test = |x: &F2Matrix| -> Option<(F2Matrix, F2Matrix)> {
        let y = x.pow(n);
        if y.is_zero() || y.inverse().is_some() {
            return None;
        }
        Some((F2Matrix::from_columns(n, &y.kernel()), F2Matrix::from_columns(n, &y.image())))
    };
    let combo = |mask: u64| -> F2Matrix {
        (0..e).filter(|&k| mask >> k & 1 == 1).fold(F2Matrix::zeros(n, n), |acc, k| acc.add(&end[k]))
    };
    for x in &end {
        if let Some(r) = test(x) {
            return Some(r);
        }
    }
    if e <= EXHAUSTIVE_END_DIM {
        for mask in 1u64..(1 << e) {
            if let Some(r) = test(&combo(mask)) {
                return Some(r);
            }
        }
        return None;
    }
    for _ in 0..RANDOM_TRIES {
        let mask: u64 = rng.gen::<u64>() & ((1u64 << e.min(63)) - 1);
        if let Some(r) = test(&combo(mask)) {
            return Some(r);
        }
    }
    *certified = false;
    None
}

/// Permutation action of `Σ_n` (transposition and long cycle) on `𝔽₂^n`.
pub fn permutation_module(n: usize) -> F2Module {
    let perm = |f: &dyn Fn(usize) -> usize| F2Matrix::from_fn(n, n, |i, j| f(j) == i);
    let swap = perm(&|j| if j == 0 { 1 } else if j == 1 { 0 } else { j });
    let cycle = perm(&|j| (j + 1) % n);
    F2Module { dim: n, generators: vec![swap, cycle] }
}

/// The coordinate-sum-zero submodule `V′_{n−1}`, basis `e_i + e_{i+1}`.
pub fn sum_zero_module(n: usize) -> F2Module {
    let v = permutation_module(n);
    let cols: Vec<u32> = (0..n - 1).map(|i| (1 << i) | (1 << (i + 1))).collect();
    v.restrict(&F2Matrix::from_columns(n, &cols))
}

fn transvection(n: usize, i: usize, j: usize) -> F2Matrix {
    let mut m = F2Matrix::identity(n);
    m.set(i, j, true);
    m
}

/// `GL_k(𝔽₂)` acting on coordinates `offset..offset+k` of `𝔽₂^n`.
fn gl_block(n: usize, offset: usize, k: usize) -> Vec<F2Matrix> {
    let mut out = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                out.push(transvection(n, offset + i, offset + j));
            }
        }
    }
    out
}

pub fn natural_module(k: usize) -> F2Module {
    F2Module { dim: k, generators: gl_block(k, 0, k) }
}

/// Block upper-triangular groups `[[H, *], [0, GL₃]]` with `H ⊆ GL_top(𝔽₂)`
/// generated by the given transvections of the top block.
fn parabolic(top: usize, top_gens: &[(usize, usize)]) -> F2Module {
    let n = top + 3;
    let mut gens = gl_block(n, top, 3);
    for i in 0..top {
        for j in top..n {
            gens.push(transvection(n, i, j));
        }
    }
    for &(i, j) in top_gens {
        gens.push(transvection(n, i, j));
    }
    F2Module { dim: n, generators: gens }
}

fn factorial(n: usize) -> Option<usize> {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k))
}

/// Reference pairs: name, module, and the order of the acting group.
fn references(dim: usize) -> Vec<(String, F2Module, Option<usize>)> {
    let mut out = Vec::new();
    if dim == 1 {
        out.push(("SU(2)".to_string(), F2Module { dim: 1, generators: vec![] }, Some(1)));
        return out;
    }
    out.push((format!("SU({})", dim + 1), sum_zero_module(dim + 1), factorial(dim + 1)));
    if dim.is_multiple_of(2) {
        out.push((format!("Sp({dim})"), permutation_module(dim), factorial(dim)));
    }
    match dim {
        3 => out.push(("G2".into(), natural_module(3), Some(168))),
        4 => {
            out.push(("DI4".into(), natural_module(4), Some(20160)));
            out.push(("Spin(7)".into(), parabolic(1, &[]), Some(1344)));
        }
        5 => {
            out.push(("Spin(8)".into(), parabolic(2, &[]), Some(10752)));
            out.push(("Spin(9)".into(), parabolic(2, &[(0, 1)]), Some(21504)));
            out.push(("F4".into(), parabolic(2, &[(0, 1), (1, 0)]), Some(64512)));
        }
        _ => {}
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentifiedFactor {
    pub name: String,
    pub signature: ModuleSignature,
}

/// Names the factors of a Weyl pair `(W, E)`. `h6_trivial` lists, as a
/// multiset of dimensions, the summands `V′_{n−1}` (`n` odd) on which
/// `H⁶(BX) → H⁶(BE)` vanishes; each such summand together with one trivial
/// one-dimensional summand is named `Sp(n)` instead of `SU(n)`.
pub fn identify_weyl_pair(m: &F2Module, h6_trivial: &[usize], seed: u64) -> Result<Vec<IdentifiedFactor>> {
    let ks = krull_schmidt(m, seed)?;
    let mut flags = h6_trivial.to_vec();
    let mut named: Vec<IdentifiedFactor> = Vec::new();
    let mut trivial_lines = 0usize;
    let mut consumed = 0usize;
    for s in &ks.summands {
        let sig = s.module.signature()?;
        if sig.dim == 1 && sig.order == 1 {
            trivial_lines += 1;
            continue;
        }
        let mut name = None;
        for (ref_name, module, order) in references(sig.dim) {
            if order != Some(sig.order) {
                continue;
            }
            if (ModuleSignature { order: sig.order, ..module.signature_without_order() }) == sig {
                name = Some(ref_name);
                break;
            }
        }
        let Some(mut name) = name else {
            return Err(Error::Domain(format!(
                "unidentified factor: dimension {}, group order {}, fixed dimension {}, End dimension {}",
                sig.dim, sig.order, sig.fixed_dim, sig.end_dim
            )));
        };
        let n = sig.dim + 1;
        if name.starts_with("SU(") && n % 2 == 1 {
            if let Some(pos) = flags.iter().position(|&d| d == sig.dim) {
                flags.remove(pos);
                consumed += 1;
                name = format!("Sp({n})");
            }
        }
        named.push(IdentifiedFactor { name, signature: sig });
    }
    if !flags.is_empty() {
        return Err(Error::Domain(format!("H⁶ flags {flags:?} match no odd (Σ_n, V′_(n−1)) summand")));
    }
    if consumed > trivial_lines {
        return Err(Error::Domain("not enough trivial summands for the Sp(n) factors marked by H⁶ flags".into()));
    }
    let line_sig = ModuleSignature { dim: 1, order: 1, fixed_dim: 1, cofixed_dim: 1, end_dim: 1 };
    for _ in 0..trivial_lines - consumed {
        named.push(IdentifiedFactor { name: "SU(2)".into(), signature: line_sig });
    }
    named.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(named)
}

impl F2Module {
    fn signature_without_order(&self) -> ModuleSignature {
        ModuleSignature {
            dim: self.dim,
            order: 0,
            fixed_dim: self.fixed_dim(),
            cofixed_dim: self.cofixed_dim(),
            end_dim: self.endomorphisms().len(),
        }
    }
}
