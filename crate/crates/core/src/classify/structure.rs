//! `D ≅ (D̃ × T)/A`: universal cover times the torus on the fixed lattice,
//! divided by a finite central subgroup.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use super::fingerprint::{fingerprint, Fingerprint};
use super::iso::{check_isomorphism, is_isomorphic, IsoVerdict};
use crate::catalog::{self, CatalogKey, Family};
use crate::error::{Error, Result};
use crate::exact_linear::normal_form::multiple_of;
use crate::exact_linear::{cokernel_structure, FiniteAbelianPGroup, Matrix};
use crate::root_datum::{RootDatum, TorusElement};

/// Factors above this rank are left unlabeled.
pub const LABEL_RANK_BOUND: usize = 6;

#[derive(Clone, Debug)]
pub struct Factor {
    pub datum: RootDatum,
    /// Columns: the factor's basis inside the universal cover's lattice.
    pub inclusion: Matrix,
    pub label: Option<CatalogKey>,
}

impl Factor {
    pub fn is_exotic(&self) -> Option<bool> {
        self.label.map(|k| k.is_exotic())
    }

    pub fn name(&self) -> String {
        match self.label {
            Some(k) => k.to_string(),
            None => format!("unlabeled rank-{} factor", self.datum.rank()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StructureDecomposition {
    /// Rank of `L^W`.
    pub m0: usize,
    pub factors: Vec<Factor>,
    /// `D̃ × T` in the basis `[L₀; L^W]` of `L`.
    pub cover: RootDatum,
    /// Generators of `A ⊆ Ż(D̃ × T)`.
    pub central_subgroup: Vec<TorusElement>,
    pub a_structure: FiniteAbelianPGroup,
    /// The quotient `(D̃ × T)/A` as computed, and an isomorphism from it onto the input.
    pub reassembled: RootDatum,
    pub witness: Matrix,
}

#[derive(Serialize)]
struct Summary<'a> {
    m0: usize,
    factors: Vec<String>,
    exotic: Vec<Option<bool>>,
    central_subgroup: Vec<String>,
    a_invariant_factors: Vec<String>,
    witness_verified: &'a bool,
}

impl StructureDecomposition {
    pub fn to_json(&self, verified: bool) -> serde_json::Value {
        let s = Summary {
            m0: self.m0,
            factors: self.factors.iter().map(Factor::name).collect(),
            exotic: self.factors.iter().map(Factor::is_exotic).collect(),
            central_subgroup: self.central_subgroup.iter().map(|t| t.to_string()).collect(),
            a_invariant_factors: self.a_structure.invariant_factors().iter().map(|x| x.to_string()).collect(),
            witness_verified: &verified,
        };
        serde_json::to_value(s).expect("serializable")
    }
}

pub fn structure_decomposition(d: &RootDatum) -> Result<StructureDecomposition> {
    let n = d.rank();
    let p = d.p();
    let l0 = d.coroot_lattice()?;
    let fixed = d.fixed_lattice()?;
    let pm = l0.basis().vstack(fixed.basis());
    if pm.rows() != n {
        return Err(Error::InvariantViolation(format!(
            "rank L₀ + rank L^W = {} differs from rank L = {n}",
            pm.rows()
        )));
    }
    let cover = d.restrict(&pm)?;
    let k = l0.rank();
    // L in the new coordinates is spanned by the columns of P^{-T}
    let pit = pm.transpose().inverse().expect("finite index");
    let mut central = Vec::new();
    for j in 0..n {
        let t = TorusElement::from_scalars(&pit.col(j), p)?;
        if !t.is_zero() && !central.contains(&t) {
            central.push(t);
        }
    }
    let a_structure = cokernel_structure(&pm, p)?;
    let (reassembled, h) = cover.quotient_with_basis(&central)?;
    let witness = &pm.transpose() * &h.transpose();
    if !check_isomorphism(&reassembled, d, &witness)? {
        return Err(Error::InvariantViolation("reassembled quotient is not isomorphic to the input".into()));
    }
    let universal = d.universal_cover()?;
    let mut factors = Vec::new();
    if k > 0 {
        for (f, inc) in universal.split_irreducibles()? {
            let label = catalog_label(&f)?;
            factors.push(Factor { datum: f, inclusion: inc, label });
        }
    }
    Ok(StructureDecomposition {
        m0: fixed.rank(),
        factors,
        cover,
        central_subgroup: central,
        a_structure,
        reassembled,
        witness,
    })
}

fn fingerprint_cache() -> &'static Mutex<HashMap<CatalogKey, Fingerprint>> {
    static CACHE: OnceLock<Mutex<HashMap<CatalogKey, Fingerprint>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn catalog_fingerprint(key: &CatalogKey) -> Result<Fingerprint> {
    if let Some(f) = fingerprint_cache().lock().expect("fingerprint cache").get(key) {
        return Ok(f.clone());
    }
    let f = fingerprint(&catalog::get(key)?)?;
    fingerprint_cache().lock().expect("fingerprint cache").insert(*key, f.clone());
    Ok(f)
}

/// The catalog entry isomorphic to `d`, searched among entries of the same rank.
pub fn catalog_label(d: &RootDatum) -> Result<Option<CatalogKey>> {
    let r = d.rank();
    if r > LABEL_RANK_BOUND {
        return Ok(None);
    }
    let f = fingerprint(d)?;
    for key in catalog::list_entries(r, d.p()) {
        if key.rank() != r || matches!(key.family, Family::E7 | Family::E8) {
            continue;
        }
        if catalog_fingerprint(&key)? != f {
            continue;
        }
        if let IsoVerdict::Isomorphic { .. } = is_isomorphic(d, &catalog::get(&key)?)? {
            return Ok(Some(key));
        }
    }
    Ok(None)
}

/// `W ≠ 1`, `L^W = 0`, and the graph on reflections joining non-commuting
/// pairs and pairs with a common line is connected.
pub fn is_irreducible(d: &RootDatum) -> Result<bool> {
    if d.weyl().order() == 1 || d.fixed_lattice()?.rank() > 0 {
        return Ok(false);
    }
    let refl = d.reflections();
    let m = refl.len();
    let mut seen = vec![false; m];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..m {
            if !seen[j] {
                let (a, b) = (&refl[i].matrix, &refl[j].matrix);
                if (a * b) != (b * a) || multiple_of(&refl[i].line, &refl[j].line).is_some() {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    Ok(seen.iter().all(|&s| s))
}

/// Multiset of factor labels, e.g. `{"SU(2)@2": 2}`; unlabeled factors are keyed by fingerprint.
pub fn factor_multiset(factors: &[RootDatum]) -> Result<BTreeMap<String, usize>> {
    let mut out = BTreeMap::new();
    for f in factors {
        let key = match catalog_label(f)? {
            Some(k) => k.to_string(),
            None => serde_json::to_string(&fingerprint(f)?).expect("serializable"),
        };
        *out.entry(key).or_default() += 1;
    }
    Ok(out)
}
