mod common;

use common::*;
use hcw_core::conic::ConicComplex;
use hcw_core::exactla::{Field, PrimeField, Rationals};
use hcw_core::gradedcomplex::taylor_complex;
use hcw_core::hcw::hcw_support;
use hcw_core::monomials::{MonomialIdeal, Multidegree};
use hcw_core::rigidity::assert_rigid_iff_hcw;

const SEED: u64 = 0x5eed_2024;
const SIZE: usize = 100;

fn check_ideal<F: Field>(ideal: &MonomialIdeal, field: &F) -> (usize, bool) {
    let s = hcw_support(ideal, field).unwrap_or_else(|e| panic!("{ideal:?}: {e}"));
    let q = &s.poset;
    assert!(q.is_hcw(field).unwrap());
    let deg = q.degrees().unwrap();
    for &(lo, hi) in q.covers() {
        assert!(deg[lo].divides(&deg[hi]));
    }
    let oracle = upper_koszul_betti(ideal, field.characteristic());
    let table = s.resolution.betti_table().unwrap();
    let ours: Vec<_> = table.entries().map(|(i, d, b)| ((i, d.clone()), b)).collect();
    let theirs: Vec<_> = oracle.into_iter().collect();
    assert_eq!(ours, theirs, "{ideal:?}");

    let conic = ConicComplex::new(q, field.clone()).unwrap();
    assert!(conic.supports_resolution(deg).unwrap().is_resolution);
    conic.complex().check_square_zero().unwrap();
    conic.check_kernels_against_skeleta().unwrap();
    conic.check_cone_boundaries().unwrap();
    conic.check_homogenize_round_trip(deg).unwrap();
    let (a, b) = conic.compare_with_order_complex().unwrap();
    assert_eq!(a, b);

    let check = assert_rigid_iff_hcw(ideal, field).unwrap();
    if check.rigid {
        assert_eq!(check.incidence_maps_onto_betti_poset, Some(true));
    }
    (s.report.added.len(), check.rigid)
}

#[test]
fn random_corpus_over_q() {
    let stats: Vec<_> = random_corpus(SEED, SIZE)
        .iter()
        .map(|i| check_ideal(i, &Rationals))
        .collect();
    let rigid = stats.iter().filter(|s| s.1).count();
    assert!(rigid > 0 && rigid < SIZE);
}

#[test]
fn random_corpus_over_gf2() {
    let f = PrimeField::new(2).unwrap();
    for ideal in random_corpus(SEED, SIZE) {
        check_ideal(&ideal, &f);
    }
}

#[test]
fn taylor_strands_are_exact_on_the_corpus() {
    for ideal in random_corpus(SEED, SIZE) {
        let t = taylor_complex(&ideal, Rationals).unwrap();
        t.check_complex().unwrap();
        assert!(t.is_resolution().unwrap().is_resolution);
    }
}

#[test]
fn fixture_ideals_pass_the_suite() {
    let f = PrimeField::new(2).unwrap();
    assert_eq!(check_ideal(&rp2_ideal(), &f).0, 1);
    check_ideal(&m_ideal(), &Rationals);
    check_ideal(&m_ideal(), &f);
    check_ideal(&triangle_ideal(), &Rationals);
}

#[test]
fn rp2_cavity_survives_exponent_scaling() {
    let f = PrimeField::new(2).unwrap();
    let scaled = MonomialIdeal::minimalize(
        rp2_ideal()
            .generators()
            .iter()
            .map(|g| Multidegree(g.0.iter().enumerate().map(|(j, &e)| e * (j as u32 % 3 + 1)).collect())),
    )
    .unwrap();
    assert_eq!(check_ideal(&scaled, &f).0, 1);
    assert_eq!(check_ideal(&rp2_ideal(), &Rationals).0, 0);
}

#[test]
fn rigid_incidence_order_can_be_weaker_than_divisibility() {
    let ideal = MonomialIdeal::minimalize(
        [
            [0, 1, 3, 1],
            [1, 1, 2, 1],
            [2, 0, 1, 1],
            [2, 0, 3, 0],
            [2, 1, 0, 3],
            [2, 3, 1, 0],
        ]
        .into_iter()
        .map(|e| Multidegree(e.to_vec())),
    )
    .unwrap();
    let check = assert_rigid_iff_hcw(&ideal, &Rationals).unwrap();
    assert!(check.rigid && check.betti_poset_hcw);
    assert_eq!(check.betti_poset_size, 13);
    assert_eq!(check.incidence_maps_onto_betti_poset, Some(true));
    assert_eq!(check.incidence_isomorphic_to_betti_poset, Some(false));
}
