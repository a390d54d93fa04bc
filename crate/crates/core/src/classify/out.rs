//! Symbolic outer automorphism groups of products of pairwise non-isomorphic
//! irreducible data and a trivial part.

use std::fmt;

use serde::Serialize;

use super::iso::{is_isomorphic, IsoVerdict};
use super::structure::{catalog_label, is_irreducible};
use crate::error::{Error, Result};
use crate::root_datum::RootDatum;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OutFactor {
    pub label: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OutDescription {
    pub p: u64,
    /// Rank of the trivial part.
    pub m0: usize,
    pub factors: Vec<OutFactor>,
}

impl fmt::Display for OutDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.m0 > 0 {
            parts.push(format!("GL_{}(Z_{})", self.m0, self.p));
        }
        for o in &self.factors {
            if o.multiplicity == 1 {
                parts.push(format!("Out({})", o.label));
            } else {
                parts.push(format!("(Out({}) ≀ Σ_{})", o.label, o.multiplicity));
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" × "))
        }
    }
}

/// `Out(T^{m₀} × D₁^{m₁} × … × D_k^{m_k})` for data given with multiplicities.
/// Data with trivial Weyl group count towards `m₀`; all others must be
/// irreducible and pairwise non-isomorphic.
pub fn out_of_product(items: &[(RootDatum, usize)]) -> Result<OutDescription> {
    let Some(p) = items.first().map(|(d, _)| d.p()) else {
        return Err(Error::Domain("empty product".into()));
    };
    let mut m0 = 0;
    let mut irreducible: Vec<(&RootDatum, usize)> = Vec::new();
    for (d, m) in items {
        if d.p() != p {
            return Err(Error::Domain("factors live over different primes".into()));
        }
        if *m == 0 {
            continue;
        }
        if d.weyl().order() == 1 {
            m0 += d.rank() * m;
            continue;
        }
        if !is_irreducible(d)? {
            return Err(Error::Domain("factor is neither trivial nor irreducible".into()));
        }
        irreducible.push((d, *m));
    }
    for i in 0..irreducible.len() {
        for j in 0..i {
            match is_isomorphic(irreducible[i].0, irreducible[j].0)? {
                IsoVerdict::NotIsomorphic { .. } => {}
                IsoVerdict::Isomorphic { .. } => {
                    return Err(Error::Domain(format!(
                        "factors {j} and {i} are isomorphic; merge them into one multiplicity"
                    )))
                }
                IsoVerdict::Inconclusive { reason, .. } => {
                    return Err(Error::Domain(format!(
                        "could not certify factors {j} and {i} as non-isomorphic: {reason}"
                    )))
                }
            }
        }
    }
    let mut factors = Vec::new();
    for (k, (d, m)) in irreducible.iter().enumerate() {
        let label = match catalog_label(d)? {
            Some(key) => key.to_string(),
            None => format!("D{}", k + 1),
        };
        factors.push(OutFactor { label, multiplicity: *m });
    }
    Ok(OutDescription { p, m0, factors })
}
