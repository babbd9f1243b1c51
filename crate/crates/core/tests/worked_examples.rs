mod common;

use common::*;
use hcw_core::conic::ConicComplex;
use hcw_core::exactla::{PrimeField, Rationals};
use hcw_core::gradedcomplex::{minimize, taylor_complex};
use hcw_core::hcw::{compare_conic, hcw_support, hcwify};
use hcw_core::incidence::{incidence_poset, verify_mfr_support};
use hcw_core::minsupport::{boundary_support, first_non_minimal_column, make_minimal_support_basis};
use hcw_core::rigidity::assert_rigid_iff_hcw;

fn gf2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

#[test]
fn rp2_fixture_is_a_minimal_resolution_with_minimal_support() {
    let c = load_complex("rp2_complex.json", gf2());
    c.check_complex().unwrap();
    assert!(c.is_minimal());
    assert!(c.is_resolution().unwrap().is_resolution);
    assert_eq!(c.ranks(), vec![10, 15, 7, 1]);
    assert_eq!(c.resolved_ideal().unwrap(), rp2_ideal());
    assert_eq!(first_non_minimal_column(&c).unwrap(), None);
    let (same, log) = make_minimal_support_basis(&c).unwrap();
    assert!(log.is_empty());
    assert_eq!(same, c);
}

#[test]
fn rp2_betti_numbers_depend_on_the_characteristic() {
    let over_gf2 = minimize(&taylor_complex(&rp2_ideal(), gf2()).unwrap()).unwrap();
    assert_eq!(over_gf2.betti_table().unwrap().totals(), vec![10, 15, 7, 1]);
    assert_eq!(totals(&upper_koszul_betti(&rp2_ideal(), 2)), vec![10, 15, 7, 1]);
    let over_q = minimize(&taylor_complex(&rp2_ideal(), Rationals).unwrap()).unwrap();
    assert_eq!(over_q.betti_table().unwrap().totals(), vec![10, 15, 6]);
    assert_eq!(totals(&upper_koszul_betti(&rp2_ideal(), 0)), vec![10, 15, 6]);
}

#[test]
fn rp2_incidence_poset_and_cavity() {
    let c = load_complex("rp2_complex.json", gf2());
    let inc = incidence_poset(&c).unwrap();
    let p = &inc.poset;
    assert_eq!(p.len(), 33);
    let top = p.index_of("32").unwrap();
    assert_eq!(p.dim_element(top), 3);
    let h = p.lower_order_complex(top).unwrap().reduced_homology(&gf2());
    assert_eq!(h.betti, vec![0, 0, 1, 1]);
    assert!(!p.is_hcw(&gf2()).unwrap());
    assert_eq!(p.first_non_sphere(&gf2()).unwrap(), Some(top));

    let (q, report) = hcwify(p, &gf2()).unwrap();
    assert_eq!(report.added.len(), 1);
    let added = &report.added[0];
    assert_eq!(added.upper, "32");
    assert_eq!(p.dim_element(p.index_of(&added.lower).unwrap()), 2);
    assert!(q.is_hcw(&gf2()).unwrap());
    compare_conic(
        &ConicComplex::new(p, gf2()).unwrap(),
        &ConicComplex::new(&q, gf2()).unwrap(),
    )
    .unwrap();
    let deg = q.degrees().unwrap().to_vec();
    let hom = ConicComplex::new(&q, gf2()).unwrap().homogenize(&deg).unwrap();
    assert_eq!(hom.complex.betti_table().unwrap(), c.betti_table().unwrap());
    verify_mfr_support(&c).unwrap();
}

#[test]
fn rp2_pipeline_over_gf2() {
    let s = hcw_support(&rp2_ideal(), &gf2()).unwrap();
    assert_eq!(s.poset.len(), 33);
    assert_eq!(s.report.added.len(), 1);
    assert_eq!(s.resolution.betti_table().unwrap().totals(), vec![10, 15, 7, 1]);
}

#[test]
fn m_bases_give_two_hcw_incidence_posets() {
    let b1 = load_complex("m_basis1.json", Rationals);
    let b2 = load_complex("m_basis2.json", Rationals);
    for c in [&b1, &b2] {
        c.check_complex().unwrap();
        assert!(c.is_minimal());
        assert!(c.is_resolution().unwrap().is_resolution);
        assert_eq!(c.resolved_ideal().unwrap(), m_ideal());
        assert_eq!(c.ranks(), vec![5, 6, 2]);
        assert_eq!(first_non_minimal_column(c).unwrap(), None);
        verify_mfr_support(c).unwrap();
    }
    assert_eq!(boundary_support(&b1, 12).unwrap().len(), 3);
    assert_eq!(boundary_support(&b2, 12).unwrap().len(), 4);
    let p1 = incidence_poset(&b1).unwrap().poset;
    let p2 = incidence_poset(&b2).unwrap().poset;
    assert_eq!((p1.len(), p2.len()), (13, 13));
    assert!(p1.is_hcw(&Rationals).unwrap() && p2.is_hcw(&Rationals).unwrap());
    assert!(p1.find_isomorphism(&p2).is_none());
    for p in [&p1, &p2] {
        let (q, report) = hcwify(p, &Rationals).unwrap();
        assert!(report.added.is_empty());
        assert_eq!(&q, p);
    }
    assert_eq!(
        minimize(&taylor_complex(&m_ideal(), Rationals).unwrap())
            .unwrap()
            .betti_table()
            .unwrap(),
        b1.betti_table().unwrap()
    );
}

#[test]
fn m_is_not_rigid() {
    let c = assert_rigid_iff_hcw(&m_ideal(), &Rationals).unwrap();
    assert!(!c.rigid);
    assert!(!c.betti_poset_hcw);
}
