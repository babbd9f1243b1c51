//! Rigid ideals and the Betti poset.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::Field;
use crate::gradedcomplex::{minimize, taylor_complex, BettiTable};
use crate::incidence::incidence_poset;
use crate::minsupport::make_minimal_support_basis;
use crate::monomials::{MonomialIdeal, Multidegree};
use crate::posets::Poset;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum RigidityViolation {
    /// Some `beta_{i,alpha}` exceeds one.
    R1 { i: usize, deg: Multidegree, beta: usize },
    /// Two distinct degrees in one homological degree are comparable.
    R2 {
        i: usize,
        lower: Multidegree,
        upper: Multidegree,
    },
}

/// First violation of the rigidity conditions, scanning `i` upward.
pub fn rigidity_violation(table: &BettiTable) -> Option<RigidityViolation> {
    let entries: Vec<(usize, &Multidegree, usize)> = table.entries().collect();
    if let Some(&(i, deg, beta)) = entries.iter().find(|e| e.2 > 1) {
        return Some(RigidityViolation::R1 {
            i,
            deg: deg.clone(),
            beta,
        });
    }
    for &(i, a, _) in &entries {
        for &(j, b, _) in &entries {
            if i == j && a.strictly_divides(b) {
                return Some(RigidityViolation::R2 {
                    i,
                    lower: a.clone(),
                    upper: b.clone(),
                });
            }
        }
    }
    None
}

pub fn is_rigid(table: &BettiTable) -> bool {
    rigidity_violation(table).is_none()
}

/// Distinct multidegrees with a nonzero Betti number, ordered by divisibility.
pub fn betti_poset(table: &BettiTable) -> Result<Poset> {
    let mut degrees: Vec<Multidegree> = table.entries().map(|(_, d, _)| d.clone()).collect();
    degrees.sort();
    degrees.dedup();
    let mut relations = Vec::new();
    for (i, a) in degrees.iter().enumerate() {
        for (j, b) in degrees.iter().enumerate() {
            if a.strictly_divides(b) {
                relations.push((i, j));
            }
        }
    }
    Poset::new(degrees.iter().map(ToString::to_string).collect(), relations)?.with_degrees(degrees)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidHcwCheck {
    pub rigid: bool,
    pub violation: Option<RigidityViolation>,
    pub betti_poset_hcw: bool,
    pub betti_poset_size: usize,
    /// For rigid ideals: whether the degree map is an order-preserving
    /// bijection from the incidence poset of the minimal-support basis onto
    /// the Betti poset.
    pub incidence_maps_onto_betti_poset: Option<bool>,
    /// For rigid ideals: whether that bijection also reflects the order.
    /// This can fail, since divisibility need not force a nonzero entry.
    pub incidence_isomorphic_to_betti_poset: Option<bool>,
}

impl RigidHcwCheck {
    pub fn agrees(&self) -> bool {
        self.rigid == self.betti_poset_hcw && self.incidence_maps_onto_betti_poset != Some(false)
    }
}

/// Computes rigidity and the hcw property of the Betti poset, which must
/// coincide.
pub fn check_rigid_iff_hcw<F: Field>(ideal: &MonomialIdeal, field: &F) -> Result<RigidHcwCheck> {
    let minimal = minimize(&taylor_complex(ideal, field.clone())?)?;
    let table = minimal.betti_table()?;
    let violation = rigidity_violation(&table);
    let rigid = violation.is_none();
    let bp = betti_poset(&table)?;
    let betti_poset_hcw = bp.is_hcw(field)?;
    let (onto, iso) = if rigid {
        let (basis, _) = make_minimal_support_basis(&minimal)?;
        let inc = incidence_poset(&basis)?;
        let inc_deg = inc.poset.degrees().expect("incidence poset has degrees");
        let bp_deg = bp.degrees().expect("Betti poset has degrees");
        let map: Option<Vec<usize>> = inc_deg.iter().map(|d| bp_deg.iter().position(|e| e == d)).collect();
        match map {
            Some(m) if m.len() == bp.len() && m.iter().collect::<BTreeSet<_>>().len() == m.len() => {
                let monotone = inc.poset.covers().iter().all(|&(a, b)| bp.lt(m[a], m[b]));
                (Some(monotone), Some(inc.poset.is_isomorphism(&bp, &m)))
            }
            _ => (Some(false), Some(false)),
        }
    } else {
        (None, None)
    };
    Ok(RigidHcwCheck {
        rigid,
        violation,
        betti_poset_hcw,
        betti_poset_size: bp.len(),
        incidence_maps_onto_betti_poset: onto,
        incidence_isomorphic_to_betti_poset: iso,
    })
}

/// Like [`check_rigid_iff_hcw`], failing when the two sides disagree.
pub fn assert_rigid_iff_hcw<F: Field>(ideal: &MonomialIdeal, field: &F) -> Result<RigidHcwCheck> {
    let check = check_rigid_iff_hcw(ideal, field)?;
    if !check.agrees() {
        return Err(Error::VerificationFailed(format!(
            "rigid = {} but Betti poset hcw = {} (incidence onto Betti poset {:?})",
            check.rigid, check.betti_poset_hcw, check.incidence_maps_onto_betti_poset
        )));
    }
    Ok(check)
}
