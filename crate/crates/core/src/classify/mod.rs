//! Isomorphism invariants and decision procedures.

pub mod degrees;
pub mod f2module;
pub mod fingerprint;
pub mod iso;
pub mod out;
pub mod steenrod;
pub mod structure;

#[cfg(test)]
mod tests;

pub use degrees::{invariant_degrees, molien_series};
pub use f2module::{identify_weyl_pair, krull_schmidt, F2Matrix, F2Module, KrullSchmidt};
pub use fingerprint::{fingerprint, ClassData, Fingerprint};
pub use iso::{check_automorphism, check_isomorphism, is_isomorphic, is_isomorphic_with, IsoBudget, IsoVerdict};
pub use out::{out_of_product, OutDescription};
pub use steenrod::{steenrod_decide, SteenrodMode, SteenrodResult};
pub use structure::{catalog_label, is_irreducible, structure_decomposition, StructureDecomposition};

use crate::error::Result;
use crate::exact_linear::Matrix;
use crate::root_datum::{subgroup_elements, RootDatum, TorusElement};

/// `φ′` is an automorphism of `D′` with `φ′(A) = A` as a set of torus elements.
pub fn check_quotient_aut(d: &RootDatum, a: &[TorusElement], phi: &Matrix) -> Result<bool> {
    if !check_automorphism(d, phi)? {
        return Ok(false);
    }
    let elements = subgroup_elements(a, d.rank(), d.p())?;
    for t in &elements {
        let image = TorusElement::from_scalars(&phi.apply(&t.lift()), d.p())?;
        if !elements.contains(&image) {
            return Ok(false);
        }
    }
    Ok(true)
}
