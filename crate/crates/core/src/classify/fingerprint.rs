//! Basis-independent invariants of a root datum.

use serde::{Deserialize, Serialize};

use super::degrees::invariant_degrees;
use crate::error::Result;
use crate::exact_linear::normal_form::vector_valuation;
use crate::exact_linear::{dot, Valuation};
use crate::root_datum::RootDatum;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassData {
    pub size: usize,
    pub order: usize,
    /// `v_p(β_σ(b_σ))`.
    pub self_pairing: Option<i64>,
    /// `k` with `im(1 − σ) = p^k·R·b_σ`; zero exactly when the coroot line is spanned by the image.
    pub image_index: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub p: u64,
    pub rank: usize,
    pub weyl_order: usize,
    pub degrees: Vec<usize>,
    pub reflection_classes: Vec<ClassData>,
    pub pi1: Vec<u32>,
    pub pi1_free_rank: usize,
    pub center: Vec<u32>,
    pub center_corank: usize,
    /// Sorted multiset of `v_p(β_σ(b_τ))` over ordered pairs of reflections (`None` for a zero pairing).
    pub pairings: Vec<Option<i64>>,
}

impl Fingerprint {
    /// Name of the first field in which the two fingerprints differ.
    pub fn first_difference(&self, other: &Fingerprint) -> Option<&'static str> {
        if self.p != other.p {
            Some("p")
        } else if self.rank != other.rank {
            Some("rank")
        } else if self.weyl_order != other.weyl_order {
            Some("weyl_order")
        } else if self.degrees != other.degrees {
            Some("degrees")
        } else if self.reflection_classes != other.reflection_classes {
            Some("reflection_classes")
        } else if self.pi1 != other.pi1 || self.pi1_free_rank != other.pi1_free_rank {
            Some("pi1")
        } else if self.center != other.center || self.center_corank != other.center_corank {
            Some("center")
        } else if self.pairings != other.pairings {
            Some("pairings")
        } else {
            None
        }
    }
}

fn finite(v: Valuation) -> Option<i64> {
    v.finite()
}

pub fn fingerprint(d: &RootDatum) -> Result<Fingerprint> {
    let p = d.p();
    let roots = d.roots()?;
    let refl = d.reflections();
    let mut classes = Vec::new();
    for class in d.reflection_classes() {
        let i = class.representative;
        let beta = &roots[i];
        classes.push(ClassData {
            size: class.members.len(),
            order: refl[i].order,
            self_pairing: finite(dot(beta, d.coroot(i)).valuation(p)?),
            image_index: finite(vector_valuation(beta, p)?),
        });
    }
    classes.sort();
    let mut pairings = Vec::with_capacity(refl.len() * refl.len());
    for beta in &roots {
        for b in d.coroots() {
            pairings.push(finite(dot(beta, b).valuation(p)?));
        }
    }
    pairings.sort();
    let pi1 = d.fundamental_group()?;
    let z = d.center()?;
    Ok(Fingerprint {
        p,
        rank: d.rank(),
        weyl_order: d.weyl().order(),
        degrees: invariant_degrees(d.weyl()),
        reflection_classes: classes,
        pi1: pi1.exponents.clone(),
        pi1_free_rank: pi1.free_rank,
        center: z.group.exponents.clone(),
        center_corank: z.corank(),
        pairings,
    })
}
