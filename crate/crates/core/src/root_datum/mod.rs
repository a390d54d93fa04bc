//! The root datum `(W, L, {R·b_σ})`: axioms, invariants and constructions.

mod torus;

pub use torus::{parse_torus_list, subgroup_elements, TorusElement};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact_linear::normal_form::{
    is_integral, is_ring_invertible, multiple_of, p_power, same_line, saturate, smith_form,
};
use crate::exact_linear::{
    cokernel_structure, Extension, FiniteAbelianPGroup, Lattice, Matrix, Scalar, Vector,
};
use crate::group_engine::{MatrixGroup, Reflection, ReflectionClass};

#[derive(Clone, Debug)]
pub struct RootDatum {
    p: u64,
    n: usize,
    ext: Option<Extension>,
    weyl: MatrixGroup,
    /// One coroot per reflection, aligned with `weyl.reflections()`.
    coroots: Vec<Vector>,
    /// `β_σ`, or `None` when the coroot is not on the line of `im(1 − σ)`.
    roots: Vec<Option<Vector>>,
    /// Inconsistencies found while propagating class-representative coroots.
    conflicts: Vec<Conflict>,
}

#[derive(Clone, Debug)]
struct Conflict {
    reflection: usize,
    witness: Matrix,
    message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{:<28} {}", c.name, if c.passed { "pass" } else { "FAIL" })?;
            if let Some(w) = &c.witness {
                write!(f, "  ({w})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The discrete center: a finite part with explicit generators plus `(ℤ/p^∞)^corank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterStructure {
    pub group: FiniteAbelianPGroup,
    /// One generator per invariant factor, in the same order.
    pub generators: Vec<TorusElement>,
}

impl CenterStructure {
    pub fn corank(&self) -> usize {
        self.group.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.group.is_trivial()
    }
}

/// A root datum over `ℤ` (or `ℤ[1/N]`), not yet localized.
#[derive(Clone, Debug)]
pub struct IntegralDatum {
    pub rank: usize,
    pub generators: Vec<Matrix>,
    /// `(σ, b_σ)` for at least one reflection per class.
    pub coroots: Vec<(Matrix, Vector)>,
}

impl IntegralDatum {
    pub fn base_change(&self, p: u64) -> Result<RootDatum> {
        base_change(self, p)
    }
}

/// Localizes an integral datum at `p`.
pub fn base_change(d: &IntegralDatum, p: u64) -> Result<RootDatum> {
    RootDatum::new(p, d.rank, None, d.generators.clone(), d.coroots.clone())
}

fn factor_root(sigma: &Matrix, b: &[Scalar]) -> Option<Vector> {
    let n = sigma.rows();
    let d = sigma.sub(&Matrix::identity(n));
    let i = b.iter().position(|x| !x.is_zero())?;
    let beta: Vector = (0..n).map(|j| &d[(i, j)] / &b[i]).collect();
    let ok = (0..n).all(|r| (0..n).all(|c| d[(r, c)] == &b[r] * &beta[c]));
    ok.then_some(beta)
}

/// A left inverse `G` of `Pᵀ` (so `G·Pᵀ = I`) for a full-row-rank `P`.
fn left_inverse_of_transpose(p_rows: &Matrix) -> Matrix {
    let (k, n) = (p_rows.rows(), p_rows.cols());
    let (_, pivots) = p_rows.rref();
    assert_eq!(pivots.len(), k, "basis rows must be independent");
    let sub = Matrix::from_fn(k, k, |i, j| p_rows[(i, pivots[j])].clone());
    let inv_t = sub.transpose().inverse().expect("pivot minor is invertible");
    let mut g = Matrix::zeros(k, n);
    for (j, &c) in pivots.iter().enumerate() {
        for i in 0..k {
            g[(i, c)] = inv_t[(i, j)].clone();
        }
    }
    g
}

/// A right inverse `B⁺` of a full-row-rank `B` (so `B·B⁺ = I`).
fn right_inverse(b: &Matrix) -> Matrix {
    left_inverse_of_transpose(b).transpose()
}

impl RootDatum {
    /// Builds a datum from Weyl generators and coroots given on (at least) one
    /// reflection per conjugacy class; coroots are propagated by equivariance.
    pub fn new(
        p: u64,
        n: usize,
        ext: Option<Extension>,
        generators: Vec<Matrix>,
        assignments: Vec<(Matrix, Vector)>,
    ) -> Result<Self> {
        let weyl = MatrixGroup::generated_by(generators, n, p)?;
        RootDatum::with_group(p, n, ext, weyl, assignments)
    }

    pub fn with_group(
        p: u64,
        n: usize,
        ext: Option<Extension>,
        weyl: MatrixGroup,
        assignments: Vec<(Matrix, Vector)>,
    ) -> Result<Self> {
        let refl = weyl.reflections();
        let gens = weyl.generators().to_vec();
        let gen_inv: Vec<Matrix> = gens.iter().map(|g| g.inverse().expect("invertible")).collect();
        let mut coroots: Vec<Option<Vector>> = vec![None; refl.len()];
        // transporter from the class representative, used to name stabilizer witnesses
        let mut transporter: Vec<Option<(usize, Matrix)>> = vec![None; refl.len()];
        let mut conflicts = Vec::new();
        for (a, (sigma, b)) in assignments.into_iter().enumerate() {
            if b.len() != n {
                return Err(Error::Domain(format!("coroot {a} has length {}, expected {n}", b.len())));
            }
            let Some(start) = weyl.reflection_index(&sigma) else {
                return Err(Error::Domain(format!("coroot {a} is attached to a non-reflection {sigma}")));
            };
            if let Some(existing) = &coroots[start] {
                if !same_line(existing, &b, p)? {
                    let (_, w) = transporter[start].clone().expect("assigned");
                    conflicts.push(Conflict {
                        reflection: start,
                        witness: w,
                        message: format!(
                            "assigned coroot {} disagrees with propagated coroot {}",
                            fmt_vec(&b),
                            fmt_vec(existing)
                        ),
                    });
                }
                continue;
            }
            coroots[start] = Some(b);
            transporter[start] = Some((a, Matrix::identity(n)));
            let mut queue = vec![start];
            while let Some(j) = queue.pop() {
                let bj = coroots[j].clone().expect("assigned");
                let (origin, tj) = transporter[j].clone().expect("assigned");
                for (g, gi) in gens.iter().zip(&gen_inv) {
                    let conj = &(g * &refl[j].matrix) * gi;
                    let k = weyl.reflection_index(&conj).expect("conjugate of a reflection");
                    let bk = g.apply(&bj);
                    let tk = g * &tj;
                    match &coroots[k] {
                        None => {
                            coroots[k] = Some(bk);
                            transporter[k] = Some((origin, tk));
                            queue.push(k);
                        }
                        Some(existing) => {
                            if !same_line(existing, &bk, p)? {
                                let (_, t_old) = transporter[k].clone().expect("assigned");
                                let witness = &t_old.inverse().expect("invertible") * &tk;
                                conflicts.push(Conflict {
                                    reflection: k,
                                    witness,
                                    message: format!(
                                        "coroot lines {} and {} meet at the same reflection",
                                        fmt_vec(existing),
                                        fmt_vec(&bk)
                                    ),
                                });
                            }
                        }
                    }
                }
            }
        }
        let coroots: Vec<Vector> = coroots
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                c.ok_or_else(|| {
                    Error::Domain(format!("no coroot given for the class of reflection {}", refl[i].matrix))
                })
            })
            .collect::<Result<_>>()?;
        let mut d = RootDatum::aligned(p, n, ext, weyl, coroots);
        d.conflicts = conflicts;
        Ok(d)
    }

    /// Datum from a closed group and one coroot per reflection, in reflection order.
    fn aligned(p: u64, n: usize, ext: Option<Extension>, weyl: MatrixGroup, coroots: Vec<Vector>) -> Self {
        let roots = weyl
            .reflections()
            .iter()
            .zip(&coroots)
            .map(|(r, b)| factor_root(&r.matrix, b))
            .collect();
        RootDatum { p, n, ext, weyl, coroots, roots, conflicts: Vec::new() }
    }

    /// Rank-`n` datum with trivial Weyl group.
    pub fn trivial(n: usize, p: u64) -> Self {
        RootDatum::aligned(p, n, None, MatrixGroup::trivial(n, p), Vec::new())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn extension(&self) -> Option<Extension> {
        self.ext
    }

    pub fn weyl(&self) -> &MatrixGroup {
        &self.weyl
    }

    pub fn reflections(&self) -> &[Reflection] {
        self.weyl.reflections()
    }

    pub fn reflection_classes(&self) -> Vec<ReflectionClass> {
        self.weyl.reflection_classes()
    }

    pub fn coroots(&self) -> &[Vector] {
        &self.coroots
    }

    pub fn coroot(&self, i: usize) -> &Vector {
        &self.coroots[i]
    }

    /// `β_σ` for the reflection at index `i`, with `σ(x) = x + β_σ(x)·b_σ`.
    pub fn root(&self, i: usize) -> Result<&Vector> {
        self.roots[i].as_ref().ok_or_else(|| {
            Error::Domain(format!(
                "coroot {} is not on the line of im(1 − σ) for σ = {}",
                fmt_vec(&self.coroots[i]),
                self.reflections()[i].matrix
            ))
        })
    }

    pub fn roots(&self) -> Result<Vec<Vector>> {
        (0..self.roots.len()).map(|i| self.root(i).cloned()).collect()
    }

    /// The root of an arbitrary reflection matrix of `W`.
    pub fn root_of(&self, sigma: &Matrix) -> Result<Vector> {
        let i = self
            .weyl
            .reflection_index(sigma)
            .ok_or_else(|| Error::Domain(format!("{sigma} is not a reflection of W")))?;
        self.root(i).cloned()
    }

    /// Class representatives with their coroots, the compact form used by files.
    pub fn class_coroots(&self) -> Vec<(Matrix, Vector)> {
        self.reflection_classes()
            .iter()
            .map(|c| (self.reflections()[c.representative].matrix.clone(), self.coroots[c.representative].clone()))
            .collect()
    }

    /// Every reflection with its coroot.
    pub fn all_coroots(&self) -> Vec<(Matrix, Vector)> {
        self.reflections().iter().zip(&self.coroots).map(|(r, b)| (r.matrix.clone(), b.clone())).collect()
    }

    pub fn verify(&self) -> Result<ValidationReport> {
        let p = self.p;
        let n = self.n;
        let refl = self.reflections();
        let mut checks = Vec::new();

        let mut gens_ok = None;
        for g in self.weyl.generators() {
            if !is_ring_invertible(g, p)? {
                gens_ok = Some(format!("generator {g}"));
                break;
            }
        }
        checks.push(AxiomCheck { name: "generators invertible", passed: gens_ok.is_none(), witness: gens_ok });

        let refl_mats: Vec<Matrix> = refl.iter().map(|r| r.matrix.clone()).collect();
        let sub = MatrixGroup::close(refl_mats, n, p, self.weyl.order() + 1)?;
        let generated = sub.order() == self.weyl.order();
        checks.push(AxiomCheck {
            name: "generated by reflections",
            passed: generated,
            witness: (!generated).then(|| format!("reflections generate order {} of {}", sub.order(), self.weyl.order())),
        });

        let mut integral = None;
        'outer: for (i, b) in self.coroots.iter().enumerate() {
            if b.iter().all(Scalar::is_zero) {
                integral = Some(format!("zero coroot at {}", refl[i].matrix));
                break;
            }
            for x in b {
                if !is_integral(x, p)? {
                    integral = Some(format!("coroot {} of {}", fmt_vec(b), refl[i].matrix));
                    break 'outer;
                }
            }
        }
        checks.push(AxiomCheck { name: "coroots in L", passed: integral.is_none(), witness: integral });

        let mut contain = None;
        'refl: for (i, r) in refl.iter().enumerate() {
            let b = &self.coroots[i];
            let d = Matrix::identity(n).sub(&r.matrix);
            for j in 0..n {
                let c = d.col(j);
                let ok = match multiple_of(&c, b) {
                    Some(l) => is_integral(&l, p)?,
                    None => c.iter().all(Scalar::is_zero),
                };
                if !ok {
                    contain = Some(format!("σ = {}, b = {}", r.matrix, fmt_vec(b)));
                    break 'refl;
                }
            }
        }
        checks.push(AxiomCheck { name: "im(1-σ) ⊆ R·b_σ", passed: contain.is_none(), witness: contain });

        let mut equi = self.conflicts.first().map(|c| {
            format!("w = {} at σ = {}: {}", c.witness, refl[c.reflection].matrix, c.message)
        });
        if equi.is_none() {
            let gens = self.weyl.generators();
            'eq: for g in gens {
                let gi = g.inverse().expect("invertible");
                for (i, r) in refl.iter().enumerate() {
                    let k = self.weyl.reflection_index(&(&(g * &r.matrix) * &gi)).expect("conjugate");
                    if !same_line(&g.apply(&self.coroots[i]), &self.coroots[k], p)? {
                        equi = Some(format!("w = {g} at σ = {}", r.matrix));
                        break 'eq;
                    }
                }
            }
        }
        checks.push(AxiomCheck { name: "equivariance", passed: equi.is_none(), witness: equi });

        let mut norm = None;
        for (i, r) in refl.iter().enumerate() {
            let mut acc = vec![Scalar::zero(); n];
            let mut x = self.coroots[i].clone();
            for _ in 0..r.order {
                for (a, y) in acc.iter_mut().zip(&x) {
                    *a += y;
                }
                x = r.matrix.apply(&x);
            }
            if acc.iter().any(|x| !x.is_zero()) {
                norm = Some(format!("σ = {}", r.matrix));
                break;
            }
        }
        checks.push(AxiomCheck { name: "N·b_σ = 0", passed: norm.is_none(), witness: norm });

        Ok(ValidationReport { checks })
    }

    /// Coroot lattice `L₀`, spanned by all coroots.
    pub fn coroot_lattice(&self) -> Result<Lattice> {
        Lattice::from_vectors(&self.coroots, self.n, self.p)
    }

    /// Root lattice `M₀ ⊆ L*`, spanned by all roots (as row vectors).
    pub fn root_lattice(&self) -> Result<Lattice> {
        Lattice::from_vectors(&self.roots()?, self.n, self.p)
    }

    /// `π₁ = L / L₀`; a free part appears when `W` fixes a nonzero sublattice.
    pub fn fundamental_group(&self) -> Result<FiniteAbelianPGroup> {
        cokernel_structure(self.coroot_lattice()?.basis(), self.p)
    }

    pub fn fixed_lattice(&self) -> Result<Lattice> {
        self.weyl.fixed_lattice()
    }

    pub fn center(&self) -> Result<CenterStructure> {
        let m0 = self.root_lattice()?;
        let n = self.n;
        let s = smith_form(m0.basis(), self.p)?;
        let mut exps = Vec::new();
        let mut generators = Vec::new();
        for (i, &e) in s.exponents.iter().enumerate() {
            if e > 0 {
                let col = s.right.col(i);
                let scale = p_power(self.p, -e);
                let v: Vector = col.iter().map(|x| x * &scale).collect();
                generators.push(TorusElement::from_scalars(&v, self.p)?);
                exps.push(e as u32);
            }
        }
        let corank = n - s.rank();
        Ok(CenterStructure { group: FiniteAbelianPGroup::new(self.p, exps, corank), generators })
    }

    /// `t ∈ Ż(D)`: every root is integral on `t`.
    pub fn is_central(&self, t: &TorusElement) -> Result<bool> {
        for b in self.roots()? {
            if !t.pairs_integrally(&b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `t ∈ S(σ)` for the reflection at index `i`.
    pub fn in_singular_set(&self, i: usize, t: &TorusElement) -> Result<bool> {
        t.pairs_integrally(self.root(i)?)
    }

    /// `h_σ = b_σ / 2` in `T̆` (zero for odd p).
    pub fn h_sigma(&self, i: usize) -> Result<TorusElement> {
        if self.p != 2 {
            return Ok(TorusElement::zero(self.n, self.p));
        }
        let half = Scalar::from_ratio(1, 2);
        let v: Vector = self.coroots[i].iter().map(|x| x * &half).collect();
        TorusElement::from_scalars(&v, self.p)
    }

    /// New coordinates `y = q·x` for a ring-invertible `q`.
    pub fn change_basis(&self, q: &Matrix) -> Result<RootDatum> {
        if !is_ring_invertible(q, self.p)? {
            return Err(Error::Domain("basis change is not invertible over the ring".into()));
        }
        let qi = q.inverse().expect("invertible");
        Ok(self.transport(q, &qi, q))
    }

    /// `w ↦ left·w·right`, `b ↦ coroot_map·b`; the action must stay faithful.
    fn transport(&self, left: &Matrix, right: &Matrix, coroot_map: &Matrix) -> RootDatum {
        let weyl = self.weyl.transport(left, right);
        assert_eq!(weyl.order(), self.weyl.order(), "transported action is not faithful");
        let coroots = self.coroots.iter().map(|b| coroot_map.apply(b)).collect();
        RootDatum::aligned(self.p, left.rows(), self.ext, weyl, coroots)
    }

    /// Restriction to the `W`-invariant sublattice with basis rows `basis`.
    pub fn restrict(&self, basis: &Matrix) -> Result<RootDatum> {
        if basis.rows() == 0 {
            return Ok(RootDatum::trivial(0, self.p));
        }
        let g = left_inverse_of_transpose(basis);
        let pt = basis.transpose();
        let d = self.transport(&g, &pt, &g);
        let l = Lattice::span(basis, self.p)?;
        for b in &self.coroots {
            if !l.contains(b)? {
                return Err(Error::Domain(format!("coroot {} is outside the sublattice", fmt_vec(b))));
            }
        }
        Ok(d)
    }

    /// `D/A` for a finite subgroup `A` of the center, with the lattice `L + ⟨A⟩`
    /// written in its Hermite basis.
    pub fn quotient(&self, a: &[TorusElement]) -> Result<RootDatum> {
        Ok(self.quotient_with_basis(a)?.0)
    }

    /// As [`RootDatum::quotient`], also returning the basis `P` of `L'` (rows, old coordinates).
    pub fn quotient_with_basis(&self, a: &[TorusElement]) -> Result<(RootDatum, Matrix)> {
        for t in a {
            if t.dim() != self.n {
                return Err(Error::Domain(format!("torus element {t} has the wrong dimension")));
            }
            if !self.is_central(t)? {
                return Err(Error::Domain(format!("torus element {t} is not central")));
            }
        }
        let mut rows = Matrix::identity(self.n);
        for t in a {
            rows = rows.vstack(&Matrix::from_rows(vec![t.lift()], self.n));
        }
        let l = Lattice::span(&rows, self.p)?;
        let pm = l.basis().clone();
        let q = pm.transpose().inverse().expect("full rank");
        let qi = pm.transpose();
        Ok((self.transport(&q, &qi, &q), pm))
    }

    /// The cover attached to the subgroup of `π₁ = L/L₀` generated by the
    /// classes of the given lattice vectors.
    pub fn cover(&self, h: &[Vector]) -> Result<RootDatum> {
        for v in h {
            if v.len() != self.n {
                return Err(Error::Domain("subgroup generator has the wrong dimension".into()));
            }
            for x in v {
                if !is_integral(x, self.p)? {
                    return Err(Error::Domain(format!("{} is not an element of L", fmt_vec(v))));
                }
            }
        }
        let l0 = self.coroot_lattice()?;
        let mut rows = l0.basis().clone();
        for v in h {
            rows = rows.vstack(&Matrix::from_rows(vec![v.clone()], self.n));
        }
        let sub = Lattice::span(&rows, self.p)?;
        if sub.rank() == self.n && sub.basis().is_identity() {
            return Ok(self.clone());
        }
        self.restrict(sub.basis())
    }

    /// `(W, L₀, {R·b_σ})`.
    pub fn universal_cover(&self) -> Result<RootDatum> {
        let l0 = self.coroot_lattice()?;
        self.restrict(l0.basis())
    }

    /// `(W, M₀*, {R·b_σ})`.
    pub fn adjoint(&self) -> Result<RootDatum> {
        let m0 = self.root_lattice()?;
        let b = m0.basis().clone();
        if b.rows() == 0 {
            return Ok(RootDatum::trivial(0, self.p));
        }
        let bp = right_inverse(&b);
        Ok(self.transport(&b, &bp, &b))
    }

    pub fn product(&self, other: &RootDatum) -> Result<RootDatum> {
        if self.p != other.p {
            return Err(Error::Domain(format!("primes differ: {} and {}", self.p, other.p)));
        }
        let ext = match (self.ext, other.ext) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Domain("factors use different extension rings".into()))
            }
            (a, b) => a.or(b),
        };
        let weyl = MatrixGroup::product(&self.weyl, &other.weyl);
        let (n1, n2) = (self.n, other.n);
        let coroots = weyl
            .reflections()
            .iter()
            .map(|r| {
                let top = Matrix::from_fn(n1, n1, |i, j| r.matrix[(i, j)].clone());
                let mut b = vec![Scalar::zero(); n1 + n2];
                if top.is_identity() {
                    let bot = Matrix::from_fn(n2, n2, |i, j| r.matrix[(n1 + i, n1 + j)].clone());
                    let k = other.weyl.reflection_index(&bot).expect("reflection of the second factor");
                    b[n1..].clone_from_slice(&other.coroots[k]);
                } else {
                    let k = self.weyl.reflection_index(&top).expect("reflection of the first factor");
                    b[..n1].clone_from_slice(&self.coroots[k]);
                }
                b
            })
            .collect();
        Ok(RootDatum::aligned(self.p, n1 + n2, ext, weyl, coroots))
    }

    /// `true` when the splitting hypothesis holds: trivial center, trivial
    /// fundamental group, or trivial Weyl group.
    pub fn splitting_hypothesis(&self) -> Result<bool> {
        if self.weyl.order() == 1 {
            return Ok(true);
        }
        Ok(self.center()?.is_trivial() || self.fundamental_group()?.is_trivial())
    }

    /// Splits into irreducible factors and rank-one trivial pieces, each with
    /// its inclusion matrix (`n × k`, columns are the factor's basis in `L`).
    pub fn split_irreducibles(&self) -> Result<Vec<(RootDatum, Matrix)>> {
        if !self.splitting_hypothesis()? {
            return Err(Error::Domain(
                "not splittable under the proposition's hypothesis (center and fundamental group both nontrivial)".into(),
            ));
        }
        let refl = self.reflections();
        let m = refl.len();
        // union-find over reflections, joined when they do not commute or share a line
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for i in 0..m {
            for j in i + 1..m {
                let a = &refl[i].matrix;
                let b = &refl[j].matrix;
                if (a * b) != (b * a) || multiple_of(&refl[i].line, &refl[j].line).is_some() {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[rj.max(ri)] = rj.min(ri);
                    }
                }
            }
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..m {
            let r = find(&mut parent, i);
            comps.entry(r).or_default().push(i);
        }
        let mut out = Vec::new();
        let mut all_rows = Matrix::zeros(0, self.n);
        for members in comps.values() {
            let lines: Vec<Vector> = members.iter().map(|&i| refl[i].line.clone()).collect();
            let li = saturate(&Matrix::from_rows(lines, self.n), self.p)?;
            let basis = li.basis().clone();
            let g = left_inverse_of_transpose(&basis);
            let pt = basis.transpose();
            let gens: Vec<Matrix> = members.iter().map(|&i| &(&g * &refl[i].matrix) * &pt).collect();
            let assignments: Vec<(Matrix, Vector)> =
                members.iter().zip(&gens).map(|(&i, s)| (s.clone(), g.apply(&self.coroots[i]))).collect();
            let factor = RootDatum::new(self.p, basis.rows(), self.ext, gens, assignments)?;
            all_rows = all_rows.vstack(&basis);
            out.push((factor, pt));
        }
        let fixed = self.fixed_lattice()?;
        for v in fixed.basis().row_vectors() {
            let row = Matrix::from_rows(vec![v], self.n);
            all_rows = all_rows.vstack(&row);
            out.push((RootDatum::trivial(1, self.p), row.transpose()));
        }
        if all_rows.rows() != self.n || !is_ring_invertible(&all_rows, self.p)? {
            return Err(Error::InvariantViolation(
                "the factor lattices do not sum to L".into(),
            ));
        }
        Ok(out)
    }

    /// `(W(A), D_A)`: the pointwise stabilizer of `A` and the subdatum on the
    /// reflections whose singular sets contain `A`.
    pub fn centralizer_subdatum(&self, a: &[TorusElement]) -> Result<(MatrixGroup, RootDatum)> {
        let stab = self.weyl.pointwise_stabilizer(a)?;
        let mut chosen = Vec::new();
        for i in 0..self.reflections().len() {
            let mut all = true;
            for t in a {
                if !self.in_singular_set(i, t)? {
                    all = false;
                    break;
                }
            }
            if all {
                chosen.push(i);
            }
        }
        let refl = self.reflections();
        let gens: Vec<Matrix> = chosen.iter().map(|&i| refl[i].matrix.clone()).collect();
        let assignments = chosen.iter().map(|&i| (refl[i].matrix.clone(), self.coroots[i].clone())).collect();
        let d = RootDatum::new(self.p, self.n, self.ext, gens, assignments)?;
        Ok((stab, d))
    }

    /// Exact equality of data: same group (as a set of matrices) and the same
    /// coroot line at every reflection.
    pub fn same_as(&self, other: &RootDatum) -> Result<bool> {
        if self.p != other.p || self.n != other.n || self.weyl.order() != other.weyl.order() {
            return Ok(false);
        }
        if !self.weyl.elements().iter().all(|e| other.weyl.contains(e)) {
            return Ok(false);
        }
        for (r, b) in self.reflections().iter().zip(&self.coroots) {
            let k = other.weyl.reflection_index(&r.matrix).expect("same group");
            if !same_line(b, &other.coroots[k], self.p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Order of `W` as a big integer, for reporting.
    pub fn weyl_order(&self) -> BigInt {
        BigInt::from(self.weyl.order())
    }
}

pub(crate) fn fmt_vec(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}
