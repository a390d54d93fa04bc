//! Finite matrix groups over the p-local scalar ring.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use crate::config;
use crate::error::{Error, Result};
use crate::exact_linear::normal_form::{is_ring_invertible, multiple_of, primitive, saturate};
use crate::exact_linear::{Lattice, Matrix, Scalar, Valuation, Vector};
use crate::root_datum::TorusElement;

/// A finite group of `n × n` matrices acting on column vectors, stored with
/// its full element list.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    p: u64,
    n: usize,
    generators: Vec<Matrix>,
    elements: Vec<Matrix>,
    /// Element positions keyed by matrix hash (avoids storing every matrix twice).
    index: HashMap<u64, Vec<u32>>,
    reflections: OnceLock<Vec<Reflection>>,
}

#[derive(Clone, Debug)]
pub struct Reflection {
    /// Position of `σ` in the group's element list.
    pub element: usize,
    pub matrix: Matrix,
    pub order: usize,
    /// Basis of `ker(1 − σ)` over the fraction field.
    pub hyperplane: Vec<Vector>,
    /// Primitive generator of the saturation of `im(1 − σ)`.
    pub line: Vector,
    /// `k` with `im(1 − σ) = p^k · R·line`.
    pub image_index: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionClass {
    /// Index into [`MatrixGroup::reflections`].
    pub representative: usize,
    pub members: Vec<usize>,
}

impl MatrixGroup {
    /// Breadth-first closure of the generators, failing past `order_bound` elements.
    pub fn close(generators: Vec<Matrix>, n: usize, p: u64, order_bound: usize) -> Result<Self> {
        for g in &generators {
            if g.rows() != n || g.cols() != n {
                return Err(Error::Domain(format!("generator is not {n}×{n}")));
            }
            if !is_ring_invertible(g, p)? {
                return Err(Error::Domain(format!("generator {g} is not invertible over the ring")));
            }
        }
        let id = Matrix::identity(n);
        let mut index: HashMap<u64, Vec<u32>> = HashMap::new();
        index.entry(matrix_hash(&id)).or_default().push(0);
        let mut elements = vec![id];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &generators {
                let x = &elements[i] * g;
                let h = matrix_hash(&x);
                let known = index.get(&h).is_some_and(|c| c.iter().any(|&k| elements[k as usize] == x));
                if !known {
                    if elements.len() >= order_bound {
                        return Err(Error::OrderBoundExceeded { bound: order_bound });
                    }
                    index.entry(h).or_default().push(elements.len() as u32);
                    queue.push_back(elements.len());
                    elements.push(x);
                }
            }
        }
        Ok(MatrixGroup { p, n, generators, elements, index, reflections: OnceLock::new() })
    }

    /// Closure with the configured global order bound.
    pub fn generated_by(generators: Vec<Matrix>, n: usize, p: u64) -> Result<Self> {
        MatrixGroup::close(generators, n, p, config::order_bound())
    }

    pub fn trivial(n: usize, p: u64) -> Self {
        MatrixGroup::close(Vec::new(), n, p, 1).expect("trivial group")
    }

    /// Wraps an element list known to be a group, choosing a small generating set.
    pub fn from_elements(elements: Vec<Matrix>, n: usize, p: u64) -> Self {
        let mut gens: Vec<Matrix> = Vec::new();
        let mut covered: HashSet<Matrix> = HashSet::from([Matrix::identity(n)]);
        for e in &elements {
            if !covered.contains(e) {
                gens.push(e.clone());
                let g = MatrixGroup::close(gens.clone(), n, p, usize::MAX).expect("subgroup of a finite group");
                covered = g.elements.into_iter().collect();
            }
        }
        MatrixGroup::from_parts(gens, elements, n, p)
    }

    fn from_parts(generators: Vec<Matrix>, elements: Vec<Matrix>, n: usize, p: u64) -> Self {
        let mut index: HashMap<u64, Vec<u32>> = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            index.entry(matrix_hash(e)).or_default().push(i as u32);
        }
        MatrixGroup { p, n, generators, elements, index, reflections: OnceLock::new() }
    }

    /// `{q·w·q⁻¹}`, keeping the element order (so reflection indices are preserved).
    pub fn conjugate(&self, q: &Matrix, q_inv: &Matrix) -> MatrixGroup {
        let conj = |w: &Matrix| &(q * w) * q_inv;
        MatrixGroup::from_parts(
            self.generators.iter().map(conj).collect(),
            self.elements.iter().map(conj).collect(),
            q.rows(),
            self.p,
        )
    }

    /// Restriction to an invariant sublattice or quotient: `w ↦ left·w·right`.
    pub fn transport(&self, left: &Matrix, right: &Matrix) -> MatrixGroup {
        let f = |w: &Matrix| &(left * w) * right;
        let k = left.rows();
        let mut seen = HashSet::new();
        let elements: Vec<Matrix> = self.elements.iter().map(f).filter(|m| seen.insert(m.clone())).collect();
        let generators = self.generators.iter().map(f).collect();
        MatrixGroup::from_parts(generators, elements, k, self.p)
    }

    /// Direct product acting block-diagonally.
    pub fn product(a: &MatrixGroup, b: &MatrixGroup) -> MatrixGroup {
        let n = a.n + b.n;
        let mut elements = Vec::with_capacity(a.order() * b.order());
        for x in &a.elements {
            for y in &b.elements {
                elements.push(Matrix::diagonal_blocks(x, y));
            }
        }
        let mut generators: Vec<Matrix> =
            a.generators.iter().map(|g| Matrix::diagonal_blocks(g, &Matrix::identity(b.n))).collect();
        generators.extend(b.generators.iter().map(|g| Matrix::diagonal_blocks(&Matrix::identity(a.n), g)));
        MatrixGroup::from_parts(generators, elements, n, a.p)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.index_of(m).is_some()
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        let c = self.index.get(&matrix_hash(m))?;
        c.iter().map(|&k| k as usize).find(|&k| &self.elements[k] == m)
    }

    pub fn inverse_of(&self, i: usize) -> usize {
        let e = &self.elements[i];
        self.elements
            .iter()
            .position(|x| (x * e).is_identity())
            .expect("group is closed under inverses")
    }

    /// All elements with `rank(1 − σ) = 1`, in element order.
    pub fn reflections(&self) -> &[Reflection] {
        self.reflections.get_or_init(|| {
            let id = Matrix::identity(self.n);
            self.elements
                .iter()
                .enumerate()
                .filter_map(|(i, s)| {
                    let d = id.sub(s);
                    (d.rank() == 1).then(|| make_reflection(i, s, &d, self.p))
                })
                .collect()
        })
    }

    /// Position of an element in the reflection list.
    pub fn reflection_index(&self, m: &Matrix) -> Option<usize> {
        let e = self.index_of(m)?;
        self.reflections().binary_search_by_key(&e, |r| r.element).ok()
    }

    /// Conjugacy classes of reflections, orbits under conjugation by the generators.
    pub fn reflection_classes(&self) -> Vec<ReflectionClass> {
        let refl = self.reflections();
        let gen_inv: Vec<Matrix> =
            self.generators.iter().map(|g| g.inverse().expect("invertible generator")).collect();
        let mut class_of = vec![usize::MAX; refl.len()];
        let mut classes = Vec::new();
        for start in 0..refl.len() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let c = classes.len();
            class_of[start] = c;
            let mut members = vec![start];
            let mut i = 0;
            while i < members.len() {
                let s = &refl[members[i]].matrix;
                for (g, gi) in self.generators.iter().zip(&gen_inv) {
                    let t = &(g * s) * gi;
                    let j = self.reflection_index(&t).expect("conjugate of a reflection");
                    if class_of[j] == usize::MAX {
                        class_of[j] = c;
                        members.push(j);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            classes.push(ReflectionClass { representative: start, members });
        }
        classes
    }

    /// `{w : w·t = t for all t}`, with torus elements compared modulo the lattice.
    pub fn pointwise_stabilizer(&self, points: &[TorusElement]) -> Result<MatrixGroup> {
        let mut keep = Vec::new();
        for w in &self.elements {
            let mut fixes = true;
            for t in points {
                if &t.act(w)? != t {
                    fixes = false;
                    break;
                }
            }
            if fixes {
                keep.push(w.clone());
            }
        }
        Ok(MatrixGroup::from_elements(keep, self.n, self.p))
    }

    /// `{w : w·v = v for all v}` for honest lattice vectors.
    pub fn vector_stabilizer(&self, points: &[Vector]) -> MatrixGroup {
        let keep = self
            .elements
            .iter()
            .filter(|w| points.iter().all(|v| &w.apply(v) == v))
            .cloned()
            .collect();
        MatrixGroup::from_elements(keep, self.n, self.p)
    }

    /// The saturated sublattice `L^W` (rows are fixed vectors).
    pub fn fixed_lattice(&self) -> Result<Lattice> {
        let id = Matrix::identity(self.n);
        let mut stacked = Matrix::zeros(0, self.n);
        for g in &self.generators {
            stacked = stacked.vstack(&id.sub(g));
        }
        let kernel = if self.generators.is_empty() {
            Matrix::identity(self.n).row_vectors()
        } else {
            stacked.nullspace()
        };
        if kernel.is_empty() {
            return Ok(Lattice::zero(self.n, self.p));
        }
        saturate(&Matrix::from_rows(kernel, self.n), self.p)
    }

    /// Order of the element at position `i`.
    pub fn element_order(&self, i: usize) -> usize {
        element_order(&self.elements[i])
    }
}

fn matrix_hash(m: &Matrix) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    m.hash(&mut h);
    h.finish()
}

pub fn element_order(m: &Matrix) -> usize {
    let mut x = m.clone();
    let mut k = 1;
    while !x.is_identity() {
        x = &x * m;
        k += 1;
    }
    k
}

fn make_reflection(element: usize, s: &Matrix, one_minus: &Matrix, p: u64) -> Reflection {
    let col = (0..one_minus.cols())
        .map(|j| one_minus.col(j))
        .find(|c| c.iter().any(|x| !x.is_zero()))
        .expect("rank one");
    let line = primitive(&col, p).expect("valuations of group entries");
    let mut image_index = i64::MAX;
    for j in 0..one_minus.cols() {
        let c = one_minus.col(j);
        if let Some(l) = multiple_of(&c, &line) {
            if let Valuation::Finite(v) = l.valuation(p).expect("valuation") {
                image_index = image_index.min(v);
            }
        }
    }
    Reflection {
        element,
        matrix: s.clone(),
        order: element_order(s),
        hyperplane: one_minus.nullspace(),
        line,
        image_index,
    }
}

/// Greedy subset of `candidates` generating the same group as all of them.
pub fn greedy_generating_set(candidates: &[Matrix], n: usize, p: u64) -> Vec<Matrix> {
    let mut gens: Vec<Matrix> = Vec::new();
    let mut covered: HashSet<Matrix> = HashSet::from([Matrix::identity(n)]);
    for c in candidates {
        if !covered.contains(c) {
            gens.push(c.clone());
            let g = MatrixGroup::close(gens.clone(), n, p, usize::MAX).expect("finite group");
            covered = g.elements.into_iter().collect();
        }
    }
    gens
}

/// Helper for tests and the catalog: the rank-one matrix `1 + b·β` as `σ`.
pub fn reflection_from(b: &[Scalar], beta: &[Scalar]) -> Matrix {
    let n = b.len();
    Matrix::from_fn(n, n, |i, j| {
        let d = &b[i] * &beta[j];
        if i == j {
            &Scalar::one() + &d
        } else {
            d
        }
    })
}
