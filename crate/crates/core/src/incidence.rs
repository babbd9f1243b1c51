//! Incidence poset of a graded free complex, and the comparison of its
//! conic complex with the bar complex.

use crate::conic::ConicComplex;
use crate::error::{Error, Result};
use crate::exactla::Field;
use crate::gradedcomplex::GradedFreeComplex;
use crate::minsupport::{first_non_minimal_column, noncomparable_supports};
use crate::posets::Poset;

/// Poset on all basis elements, generated by `b < b'` whenever `b` occurs
/// in the boundary of `b'`. Element `i` is the `i`-th basis element in
/// degree-major order and carries its id as label and its multidegree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidencePoset {
    pub poset: Poset,
    /// `(homological degree, basis position)` of each element.
    pub location: Vec<(usize, usize)>,
}

impl IncidencePoset {
    pub fn element_of(&self, n: usize, pos: usize) -> Option<usize> {
        self.location.iter().position(|&l| l == (n, pos))
    }
}

pub fn incidence_poset<F: Field>(complex: &GradedFreeComplex<F>) -> Result<IncidencePoset> {
    let mut location = Vec::new();
    let mut offsets = Vec::new();
    for (n, b) in complex.bases().iter().enumerate() {
        offsets.push(location.len());
        location.extend((0..b.len()).map(|p| (n, p)));
    }
    let mut relations = Vec::new();
    for (i, d) in complex.differentials().iter().enumerate() {
        let n = i + 1;
        let mut hit = vec![false; d.ncols()];
        for (r, c, _) in d.triplets() {
            relations.push((offsets[n - 1] + r, offsets[n] + c));
            hit[c] = true;
        }
        if let Some(c) = hit.iter().position(|h| !h) {
            return Err(Error::DegenerateColumn(format!(
                "basis element {} of degree {n} has zero boundary",
                complex.basis(n)[c].id
            )));
        }
    }
    let labels = location
        .iter()
        .map(|&(n, p)| complex.basis(n)[p].id.to_string())
        .collect();
    let degrees = location
        .iter()
        .map(|&(n, p)| complex.basis(n)[p].degree.clone())
        .collect();
    let poset = Poset::new(labels, relations)?.with_degrees(degrees)?;
    Ok(IncidencePoset { poset, location })
}

/// Diagonal isomorphism from the bar complex of a minimal-support basis to
/// the conic complex of its incidence poset: element `a` is sent to
/// `scalars[a]` times the echelon generator of its conic summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicIsomorphism<F: Field> {
    pub scalars: Vec<F::Elem>,
}

/// Checks that every conic summand of the incidence poset is a line and
/// that the conic boundary of each generator is proportional to the bar
/// boundary, building the scalars degree by degree.
pub fn conic_iso_check<F: Field>(
    complex: &GradedFreeComplex<F>,
    incidence: &IncidencePoset,
) -> Result<ConicIsomorphism<F>> {
    let field = complex.field();
    let p = &incidence.poset;
    let conic = ConicComplex::new(p, field.clone())?;
    for a in 0..p.len() {
        let rank = conic.component(a).rank();
        if rank != 1 {
            return Err(Error::NotMinimalSupport {
                apex: p.label(a).to_string(),
                reason: format!("conic summand has dimension {rank}"),
            });
        }
    }
    let mut scalars = vec![field.one(); p.len()];
    for n in 1..complex.num_degrees() {
        let bar = complex.differential(n).expect("degree n");
        let cd = conic.complex().boundary(n).expect("same degrees");
        for col in 0..bar.ncols() {
            let a = incidence.element_of(n, col).expect("element");
            let bar_col = bar.column(col);
            let conic_col = cd.column(col);
            let rows = |v: &[(usize, F::Elem)]| v.iter().map(|(r, _)| *r).collect::<Vec<_>>();
            if rows(&bar_col) != rows(&conic_col) {
                return Err(Error::NotMinimalSupport {
                    apex: p.label(a).to_string(),
                    reason: "conic boundary and bar boundary have different supports".into(),
                });
            }
            let lower = |r: usize| incidence.element_of(n - 1, r).expect("element");
            let (r0, d0) = &bar_col[0];
            let s = field.div(&field.mul(d0, &scalars[lower(*r0)]), &conic_col[0].1);
            for ((r, d), (_, g)) in bar_col.iter().zip(&conic_col) {
                if field.mul(&s, g) != field.mul(d, &scalars[lower(*r)]) {
                    return Err(Error::NotMinimalSupport {
                        apex: p.label(a).to_string(),
                        reason: "conic boundary is not proportional to the bar boundary".into(),
                    });
                }
            }
            scalars[a] = s;
        }
    }
    Ok(ConicIsomorphism { scalars })
}

/// Hypotheses for the incidence poset to support the resolution: every
/// boundary is a circuit and supports within a degree are incomparable.
pub fn check_minimal_support_hypotheses<F: Field>(complex: &GradedFreeComplex<F>) -> Result<()> {
    if let Some((n, pos)) = first_non_minimal_column(complex)? {
        return Err(Error::NotMinimalSupport {
            apex: complex.basis(n)[pos].id.to_string(),
            reason: "boundary is not a cycle with minimal support".into(),
        });
    }
    if !noncomparable_supports(complex) {
        return Err(Error::HypothesisFailed(
            "two boundary supports in one degree are comparable".into(),
        ));
    }
    Ok(())
}

/// Summary of [`verify_mfr_support`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportVerification<F: Field> {
    pub incidence: IncidencePoset,
    pub isomorphism: ConicIsomorphism<F>,
    pub conic_ranks: Vec<usize>,
}

/// Verifies that the incidence poset of a minimal resolution with a
/// minimal-support basis supports it: the conic complex is isomorphic to
/// the bar complex and its homogenization is a resolution with the same
/// Betti numbers.
pub fn verify_mfr_support<F: Field>(complex: &GradedFreeComplex<F>) -> Result<SupportVerification<F>> {
    check_minimal_support_hypotheses(complex)?;
    let incidence = incidence_poset(complex)?;
    let isomorphism = conic_iso_check(complex, &incidence)?;
    let conic = ConicComplex::new(&incidence.poset, complex.field().clone())?;
    let degrees = incidence.poset.degrees().expect("incidence poset has degrees").to_vec();
    let h = conic.homogenize(&degrees)?;
    let report = h.complex.is_resolution()?;
    if !report.is_resolution {
        return Err(Error::VerificationFailed(format!(
            "homogenized conic complex is not acyclic at {}",
            report.failures[0].degree
        )));
    }
    if h.complex.betti_table()? != complex.betti_table()? {
        return Err(Error::VerificationFailed(
            "Betti numbers of the conic resolution differ".into(),
        ));
    }
    Ok(SupportVerification {
        incidence,
        isomorphism,
        conic_ranks: conic.ranks(),
    })
}
