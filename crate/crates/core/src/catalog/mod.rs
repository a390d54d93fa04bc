//! Built-in root data: Lie types, standard quotients, tori, DI(4) and
//! rank-one Sullivan spheres.

mod di4;

pub use di4::{di4_coroot_enumeration, di4_datum, di4_root_vectors, CorootEnumeration};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact_linear::{Extension, Matrix, Scalar, Vector};
use crate::root_datum::{IntegralDatum, RootDatum, TorusElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    SU(u32),
    PU(u32),
    Sp(u32),
    PSp(u32),
    Spin(u32),
    SO(u32),
    PSO(u32),
    G2,
    F4,
    E6,
    E7,
    E8,
    Torus(u32),
    DI4,
    SullivanSphere(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CatalogKey {
    pub family: Family,
    pub p: u64,
}

impl CatalogKey {
    pub fn new(family: Family, p: u64) -> Result<Self> {
        let k = CatalogKey { family, p };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.p;
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        let bad = |why: &str| Err(Error::Domain(format!("invalid catalog key {self}: {why}")));
        match self.family {
            Family::SU(n) | Family::PU(n) if n < 2 => bad("needs n ≥ 2"),
            Family::Sp(n) | Family::PSp(n) if n < 1 => bad("needs n ≥ 1"),
            Family::Spin(m) | Family::SO(m) if m < 3 => bad("needs m ≥ 3"),
            Family::PSO(m) if m < 4 || m % 2 == 1 => bad("needs even m ≥ 4"),
            Family::DI4 if p != 2 => bad("DI4 exists only at p = 2"),
            Family::SullivanSphere(q) => {
                if p == 2 || !(p - 1).is_multiple_of(q as u64) {
                    bad("needs q | p − 1 with p odd")
                } else if ![2, 3, 4, 6].contains(&q) {
                    bad("only q ∈ {2, 3, 4, 6} are supported")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn rank(&self) -> usize {
        match self.family {
            Family::SU(n) | Family::PU(n) => n as usize - 1,
            Family::Sp(n) | Family::PSp(n) => n as usize,
            Family::Spin(m) | Family::SO(m) | Family::PSO(m) => m as usize / 2,
            Family::G2 => 2,
            Family::F4 => 4,
            Family::E6 => 6,
            Family::E7 => 7,
            Family::E8 => 8,
            Family::Torus(r) => r as usize,
            Family::DI4 => 3,
            Family::SullivanSphere(_) => 1,
        }
    }

    /// Name without the prime, e.g. `SU(4)`.
    pub fn name(&self) -> String {
        match self.family {
            Family::SU(n) => format!("SU({n})"),
            Family::PU(n) => format!("PU({n})"),
            Family::Sp(n) => format!("Sp({n})"),
            Family::PSp(n) => format!("PSp({n})"),
            Family::Spin(n) => format!("Spin({n})"),
            Family::SO(n) => format!("SO({n})"),
            Family::PSO(n) => format!("PSO({n})"),
            Family::G2 => "G2".into(),
            Family::F4 => "F4".into(),
            Family::E6 => "E6".into(),
            Family::E7 => "E7".into(),
            Family::E8 => "E8".into(),
            Family::Torus(r) => format!("T({r})"),
            Family::DI4 => "DI4".into(),
            Family::SullivanSphere(q) => format!("SullivanSphere({q})"),
        }
    }

    /// Exotic entries, i.e. not the localization of a ℤ-root datum.
    pub fn is_exotic(&self) -> bool {
        matches!(self.family, Family::DI4) || matches!(self.family, Family::SullivanSphere(q) if q > 2)
    }
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.name(), self.p)
    }
}

impl FromStr for CatalogKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid catalog key '{s}' (expected NAME(params)@p)"));
        let (name, p) = s.trim().rsplit_once('@').ok_or_else(bad)?;
        let p: u64 = p.parse().map_err(|_| bad())?;
        let (head, param) = match name.split_once('(') {
            Some((h, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(bad)?;
                (h, Some(inner.parse::<u32>().map_err(|_| bad())?))
            }
            None => (name, None),
        };
        let family = match (head, param) {
            ("SU", Some(n)) => Family::SU(n),
            ("PU", Some(n)) => Family::PU(n),
            ("Sp", Some(n)) => Family::Sp(n),
            ("PSp", Some(n)) => Family::PSp(n),
            ("Spin", Some(n)) => Family::Spin(n),
            ("SO", Some(n)) => Family::SO(n),
            ("PSO", Some(n)) => Family::PSO(n),
            ("G2", None) => Family::G2,
            ("F4", None) => Family::F4,
            ("E6", None) => Family::E6,
            ("E7", None) => Family::E7,
            ("E8", None) => Family::E8,
            ("T" | "Torus", Some(r)) => Family::Torus(r),
            ("DI4", None) => Family::DI4,
            ("SullivanSphere" | "S", Some(q)) => Family::SullivanSphere(q),
            _ => return Err(bad()),
        };
        CatalogKey::new(family, p)
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Cartan types of the simply connected groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    G2,
    F4,
    E(usize),
}

fn eps(n: usize, entries: &[(usize, i64)]) -> Vec<BigRational> {
    let mut v = vec![BigRational::from_integer(0.into()); n];
    for &(i, c) in entries {
        v[i] = BigRational::from_integer(c.into());
    }
    v
}

/// Simple roots in an orthonormal basis, or directly a Gram matrix.
fn gram_matrix(t: CartanType) -> Vec<Vec<BigRational>> {
    let from_vectors = |roots: Vec<Vec<BigRational>>| -> Vec<Vec<BigRational>> {
        roots
            .iter()
            .map(|a| roots.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect())
            .collect()
    };
    let chain = |n: usize, dim: usize| -> Vec<Vec<BigRational>> {
        (0..n).map(|i| eps(dim, &[(i, 1), (i + 1, -1)])).collect()
    };
    match t {
        CartanType::A(n) => from_vectors(chain(n, n + 1)),
        CartanType::B(n) => {
            let mut r = chain(n - 1, n);
            r.push(eps(n, &[(n - 1, 1)]));
            from_vectors(r)
        }
        CartanType::C(n) => {
            let mut r = chain(n - 1, n);
            r.push(eps(n, &[(n - 1, 2)]));
            from_vectors(r)
        }
        CartanType::D(n) => {
            let mut r = chain(n - 1, n);
            r.push(eps(n, &[(n - 2, 1), (n - 1, 1)]));
            from_vectors(r)
        }
        CartanType::G2 => {
            let g = [[2, -3], [-3, 6]];
            g.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect()
        }
        CartanType::F4 => {
            let half = BigRational::new(1.into(), 2.into());
            let mut a4 = eps(4, &[(0, 1), (1, -1), (2, -1), (3, -1)]);
            for x in &mut a4 {
                *x = &*x * &half;
            }
            from_vectors(vec![eps(4, &[(1, 1), (2, -1)]), eps(4, &[(2, 1), (3, -1)]), eps(4, &[(3, 1)]), a4])
        }
        CartanType::E(n) => {
            // Bourbaki numbering: chain 1-3-4-5-6-7-8 with 2 attached to 4
            let mut edges = vec![(0, 2), (2, 3), (3, 4), (1, 3)];
            for k in 5..n {
                edges.push((k - 1, k));
            }
            let mut g = vec![vec![BigRational::from_integer(0.into()); n]; n];
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = BigRational::from_integer(2.into());
            }
            for (a, b) in edges {
                if a < n && b < n {
                    g[a][b] = BigRational::from_integer((-1).into());
                    g[b][a] = BigRational::from_integer((-1).into());
                }
            }
            g
        }
    }
}

/// `C[i][j] = ⟨α_i, α_j^∨⟩ = 2(α_i, α_j)/(α_j, α_j)`.
pub fn cartan_matrix(t: CartanType) -> Vec<Vec<i64>> {
    let g = gram_matrix(t);
    let n = g.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = BigRational::from_integer(2.into()) * &g[i][j] / &g[j][j];
                    assert!(v.is_integer());
                    i64::try_from(v.to_integer()).expect("small entry")
                })
                .collect()
        })
        .collect()
}

/// Simply connected ℤ-datum: coroot basis, `σ_i = 1 − e_i·C_i`.
pub fn simply_connected(t: CartanType) -> IntegralDatum {
    let c = cartan_matrix(t);
    let n = c.len();
    let mut generators = Vec::new();
    let mut coroots = Vec::new();
    for i in 0..n {
        let mut m = Matrix::identity(n);
        for j in 0..n {
            m[(i, j)] = &m[(i, j)] - &Scalar::from_int(c[i][j]);
        }
        let mut e = vec![Scalar::zero(); n];
        e[i] = Scalar::one();
        coroots.push((m.clone(), e));
        generators.push(m);
    }
    IntegralDatum { rank: n, generators, coroots }
}

/// Coweights with prescribed values on the simple roots, in coroot coordinates.
fn coweight(c: &[Vec<i64>], values: &[i64]) -> Vector {
    let m = Matrix::from_i64(c);
    let v: Vector = values.iter().map(|&x| Scalar::from_int(x)).collect();
    m.solve(&v).expect("Cartan matrix is invertible")
}

fn fundamental_coweights(c: &[Vec<i64>]) -> Vec<Vector> {
    let n = c.len();
    (0..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            coweight(c, &e)
        })
        .collect()
}

fn spin_type(m: u32) -> CartanType {
    let r = (m / 2) as usize;
    if m % 2 == 1 {
        CartanType::B(r)
    } else {
        CartanType::D(r)
    }
}

/// Which central subgroup of the simply connected form to divide by.
enum Center {
    None,
    Full,
    /// The kernel of `Spin(2n) → SO(2n)`: the coweight pairing with simple roots like `ε₁`.
    VectorKernel,
}

fn lie_datum(t: CartanType, center: Center, p: u64) -> Result<RootDatum> {
    let sc = simply_connected(t).base_change(p)?;
    let c = cartan_matrix(t);
    let gens: Vec<Vector> = match center {
        Center::None => return Ok(sc),
        Center::Full => fundamental_coweights(&c),
        Center::VectorKernel => {
            let CartanType::D(n) = t else { unreachable!("vector kernel only for type D") };
            // (α_i, ε₁) for α_i = ε_i − ε_{i+1} (i < n), α_n = ε_{n−1} + ε_n
            let mut values = vec![0; n];
            values[0] = 1;
            if n == 2 {
                values[1] = 1;
            }
            vec![coweight(&c, &values)]
        }
    };
    let a: Vec<TorusElement> =
        gens.iter().map(|v| TorusElement::from_scalars(v, p)).collect::<Result<_>>()?;
    let a: Vec<TorusElement> = a.into_iter().filter(|t| !t.is_zero()).collect();
    sc.quotient(&a)
}

fn sullivan(q: u32, p: u64) -> Result<RootDatum> {
    let zeta = match q {
        2 => Scalar::from_int(-1),
        3 => Scalar::theta(Extension::Zeta3 { p: p as u32 }.checked()?),
        4 => Scalar::theta(Extension::Zeta4 { p: p as u32 }.checked()?),
        6 => &Scalar::one() + &Scalar::theta(Extension::Zeta3 { p: p as u32 }.checked()?),
        _ => return Err(Error::Domain(format!("SullivanSphere({q}) is not supported"))),
    };
    let ext = zeta.extension();
    let g = Matrix::from_rows(vec![vec![zeta]], 1);
    // every nontrivial power of ζ is a reflection in its own class, all with coroot line R
    let assignments = (1..q as u64).map(|k| (g.pow(k), vec![Scalar::one()])).collect();
    RootDatum::new(p, 1, ext, vec![g], assignments)
}

fn build(key: &CatalogKey) -> Result<RootDatum> {
    let p = key.p;
    match key.family {
        Family::SU(n) => lie_datum(CartanType::A(n as usize - 1), Center::None, p),
        Family::PU(n) => lie_datum(CartanType::A(n as usize - 1), Center::Full, p),
        Family::Sp(n) => lie_datum(CartanType::C(n as usize), Center::None, p),
        Family::PSp(n) => lie_datum(CartanType::C(n as usize), Center::Full, p),
        Family::Spin(m) => lie_datum(spin_type(m), Center::None, p),
        Family::SO(m) if m % 2 == 1 => lie_datum(spin_type(m), Center::Full, p),
        Family::SO(3) => lie_datum(CartanType::A(1), Center::Full, p),
        Family::SO(m) => lie_datum(spin_type(m), Center::VectorKernel, p),
        Family::PSO(m) => lie_datum(spin_type(m), Center::Full, p),
        Family::G2 => lie_datum(CartanType::G2, Center::None, p),
        Family::F4 => lie_datum(CartanType::F4, Center::None, p),
        Family::E6 => lie_datum(CartanType::E(6), Center::None, p),
        Family::E7 => lie_datum(CartanType::E(7), Center::None, p),
        Family::E8 => lie_datum(CartanType::E(8), Center::None, p),
        Family::Torus(r) => Ok(RootDatum::trivial(r as usize, p)),
        Family::DI4 => di4_datum(),
        Family::SullivanSphere(q) => sullivan(q, p),
    }
}

fn cache() -> &'static Mutex<HashMap<CatalogKey, RootDatum>> {
    static CACHE: OnceLock<Mutex<HashMap<CatalogKey, RootDatum>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn get(key: &CatalogKey) -> Result<RootDatum> {
    key.validate()?;
    if let Some(d) = cache().lock().expect("catalog cache").get(key) {
        return Ok(d.clone());
    }
    let d = build(key)?;
    cache().lock().expect("catalog cache").insert(*key, d.clone());
    Ok(d)
}

/// Parses and builds a key such as `"Sp(3)@2"`.
pub fn get_str(key: &str) -> Result<RootDatum> {
    get(&key.parse()?)
}

/// All keys of rank at most `max_rank` at `p`, in a fixed order, without the
/// low-rank coincidences among the Spin/SO families in even dimension.
pub fn list_entries(max_rank: usize, p: u64) -> Vec<CatalogKey> {
    let r = max_rank as u32;
    let mut fams = Vec::new();
    fams.extend((2..=r + 1).map(Family::SU));
    fams.extend((2..=r + 1).map(Family::PU));
    fams.extend((1..=r).map(Family::Sp));
    fams.extend((2..=r).map(Family::PSp));
    fams.extend((2..=r).map(|n| Family::Spin(2 * n + 1)));
    fams.extend((1..=r).map(|n| Family::SO(2 * n + 1)));
    for n in 4..=r {
        fams.extend([Family::Spin(2 * n), Family::SO(2 * n), Family::PSO(2 * n)]);
    }
    fams.extend([Family::G2, Family::F4, Family::E6, Family::E7, Family::E8]);
    fams.extend((1..=r).map(Family::Torus));
    fams.push(Family::DI4);
    fams.extend([2, 3, 4, 6].map(Family::SullivanSphere));
    fams.into_iter()
        .map(|family| CatalogKey { family, p })
        .filter(|k| k.rank() <= max_rank && k.validate().is_ok())
        .collect()
}
