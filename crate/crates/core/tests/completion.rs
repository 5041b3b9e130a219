use std::sync::Arc;

use proptest::prelude::*;
use seqcomp::algebra::*;
use seqcomp::catalog::{self, MAIN_SET};
use seqcomp::completion::*;
use seqcomp::complexes::{cone, ChainMap, Complex};
use seqcomp::derived::{dbhom, khom};
use seqcomp::exactla::Mat;
use seqcomp::sample::{random_complex, rng};

fn alg(name: &str) -> Arc<Algebra> {
    catalog::lookup(name).unwrap()
}

fn k_stalk(name: &str, i: usize) -> Complex {
    Complex::stalk(&simples(&alg(name)).unwrap()[i], 0)
}

fn stalks(a: &Arc<Algebra>, lo: i64, hi: i64) -> Vec<Complex> {
    proj_indecs(a).unwrap().iter().flat_map(|q| (lo..=hi).map(move |d| Complex::stalk(q, d))).collect()
}

#[test]
fn truncations_of_k_over_dual_numbers() {
    let x = CauchySeq::truncation(&k_stalk("D2", 0));
    for i in 0..5 {
        let t = x.term(i).unwrap();
        assert_eq!(t.window(), Some((-(i as i64), 0)));
        assert!(t.has_projective_terms());
        let h: Vec<usize> = (-(i as i64)..=0).map(|n| t.cohomology_dim(n)).collect();
        let mut want = vec![0; i + 1];
        want[0] += 1;
        want[i] += 1;
        assert_eq!(h, want, "X_{i}");
    }
}

#[test]
fn truncation_of_projective_is_constant() {
    let a2 = alg("A2");
    let p = Complex::stalk(&proj_indecs(&a2).unwrap()[0], 0);
    let x = CauchySeq::truncation(&p);
    for i in 0..4 {
        assert_eq!(x.term(i).unwrap().total_dim(), 2);
        assert!(seqcomp::complexes::is_quasi_iso(&x.map(i).unwrap()));
    }
}

#[test]
fn cauchy_indices() {
    let d2 = alg("D2");
    let c = CauchySeq::constant(&Complex::stalk(&Module::regular(&d2), 0));
    for idx in is_cauchy(&c, &stalks(&d2, -2, 2), 4).unwrap() {
        assert_eq!(idx.empirical, 0);
    }
    let x = CauchySeq::truncation(&k_stalk("D2", 0));
    for j in 0..4 {
        let l = Complex::stalk(&Module::regular(&d2), j);
        let idx = &is_cauchy(&x, &[l], 6).unwrap()[0];
        assert!(idx.empirical <= idx.certified.unwrap());
        assert!(idx.certified.unwrap() as i64 <= j + 2);
    }
}

#[test]
fn alternating_rule_is_not_cauchy() {
    let d2 = alg("D2");
    let z = Complex::stalk(&Module::regular(&d2), 0);
    let x = CauchySeq::alternating(&z);
    assert!(is_cauchy(&x, &stalks(&d2, -1, 1), 4).is_err());
}

#[test]
fn colimit_homs() {
    let d2 = alg("D2");
    let x = CauchySeq::truncation(&k_stalk("D2", 0));
    let l = Complex::stalk(&Module::regular(&d2), 0);
    assert_eq!(colim_hom(&l, &x).unwrap().space.dim(), 1);
    let z = random_complex(&d2, &mut rng(4), 6).unwrap();
    let c = CauchySeq::constant(&z);
    assert_eq!(colim_hom(&l, &c).unwrap().space.dim(), khom(&l, &z).unwrap().dim());
}

#[test]
fn completion_homs_over_dual_numbers() {
    let x = CauchySeq::truncation(&k_stalk("D2", 0));
    assert_eq!(completion_hom(&x, &x).unwrap().dim(), 1);
    assert_eq!(completion_hom(&x, &CauchySeq::shifted(&x, 1)).unwrap().dim(), 1);
    let t2 = alg("T2");
    let z = random_complex(&t2, &mut rng(9), 6).unwrap();
    let c = CauchySeq::constant(&z);
    assert_eq!(completion_hom(&c, &c).unwrap().dim(), khom(&z, &z).unwrap().dim());
}

#[test]
fn endomorphism_composition_is_the_ext_product_in_degree_zero() {
    let x = CauchySeq::truncation(&k_stalk("D2", 0));
    let e = completion_hom(&x, &x).unwrap();
    let (g, k) = completion_compose(&e, &[1], &e, &[1]).unwrap();
    assert_eq!(e.class_of(e.i, k, &g).unwrap(), vec![1]);
}

#[test]
fn reindexing_is_invertible_in_the_completion() {
    let d2 = alg("D2");
    let x = CauchySeq::truncation(&k_stalk("D2", 0));
    let tests = stalks(&d2, -2, 2);
    let (_, id) = SeqMorphism::reindex(&x, Cofinal::identity()).unwrap();
    assert_eq!(id.eventually_invertible(&tests, 5).unwrap(), 0);
    // from the largest certified index on, Hom(C, X_i) -> Hom(C, X_f(i)) is bijective
    let bound = is_cauchy(&x, &tests, 6).unwrap().iter().map(|c| c.certified.unwrap()).max().unwrap();
    for f in [Cofinal::Affine { a: 2, b: 0 }, Cofinal::shift(1)] {
        let (_, fx) = SeqMorphism::reindex(&x, f).unwrap();
        let n = fx.eventually_invertible(&tests, bound + 2).unwrap();
        assert!(n <= bound, "{f:?} invertible only from {n}, certified {bound}");
    }
}

#[test]
fn fraction_identities() {
    let a = alg("A2");
    let mut r = rng(2);
    let m = random_complex(&a, &mut r, 6).unwrap();
    let x = CauchySeq::truncation(&m);
    let id = SeqMorphism::identity(&x);
    let plain = Fraction::plain(id.clone());
    let via = Fraction::new(id.clone(), SeqMorphism::identity(&x)).unwrap();
    assert!(fraction_equal(&plain, &via).unwrap());
    let (_, fx) = SeqMorphism::reindex(&x, Cofinal::shift(1)).unwrap();
    let re = Fraction::new(fx.clone(), fx).unwrap();
    assert!(fraction_equal(&plain, &re).unwrap());
    assert!(yoneda_equal(&plain, &re, &stalks(&a, -3, 3)).unwrap());
}

#[test]
fn mittag_leffler_towers() {
    let surj = Tower { dims: vec![3, 2, 1], maps: vec![Mat::from_rows(2, &[vec![1, 0, 0], vec![0, 1, 0]]), Mat::from_rows(2, &[vec![1, 0]])], certified_from: None };
    assert!(ml_lim1(&surj).vanishes());
    let zero = Tower { dims: vec![2, 2], maps: vec![Mat::zeros(2, 2, 2)], certified_from: None };
    assert!(ml_lim1(&zero).vanishes());
    assert!(matches!(ml_lim1_int(&IntTower::ConstantMultiplier(2), 6), MlVerdict::MlFails { .. }));
    assert!(ml_lim1_int(&IntTower::ConstantMultiplier(1), 6).vanishes());
    assert!(matches!(ml_lim1_int(&IntTower::Prefix(vec![2, 2]), 6), MlVerdict::Unknown(_)));
}

#[test]
fn truncation_sequences_are_phantomless() {
    let x = CauchySeq::truncation(&k_stalk("D2", 0));
    assert!(phantomless_check(&x, &x, -3..=3).unwrap().vanishes);
    let (s0, s1) = (CauchySeq::truncation(&k_stalk("A2", 0)), CauchySeq::truncation(&k_stalk("A2", 1)));
    assert!(phantomless_check(&s0, &s1, -2..=2).unwrap().vanishes);
}

#[test]
fn cones_of_identity_and_zero() {
    let a = alg("D2");
    let m = random_complex(&a, &mut rng(6), 6).unwrap();
    let x = CauchySeq::truncation(&m);
    let tri = seq_cone(&SeqMorphism::identity(&x), 4).unwrap();
    for i in 0..4 {
        let t = tri.cone.term(i).unwrap();
        assert_eq!(khom(&t, &t).unwrap().dim(), 0);
    }
    let n = random_complex(&a, &mut rng(7), 6).unwrap();
    let y = CauchySeq::truncation(&n);
    let tri = seq_cone(&SeqMorphism::zero(&x, &y), 4).unwrap();
    for i in 0..4 {
        let (t, xi, yi) = (tri.cone.term(i).unwrap(), x.term(i).unwrap(), y.term(i).unwrap());
        assert_eq!(t.total_dim(), xi.total_dim() + yi.total_dim());
        for d in -6..=4 {
            assert_eq!(t.cohomology_dim(d), yi.cohomology_dim(d) + xi.shift(1).cohomology_dim(d));
        }
    }
}

#[test]
fn cone_of_x_on_resolutions() {
    let d2 = alg("D2");
    let l = Complex::stalk(&Module::regular(&d2), 0);
    let f = ChainMap::new(&l, &l, 0, vec![Mat::from_rows(2, &[vec![0, 1], vec![0, 0]])]).unwrap();
    let x = CauchySeq::truncation(&l);
    let phi = SeqMorphism::induced(&x, &x, &f).unwrap();
    let tri = seq_cone(&phi, 4).unwrap();
    let cf = cone(&f).complex;
    let k = CauchySeq::truncation(&k_stalk("D2", 0));
    for s in -2..=2 {
        let want = dbhom(&k_stalk("D2", 0), &cf, s).unwrap().dim();
        assert_eq!(completion_hom(&k, &CauchySeq::shifted(&tri.cone, s)).unwrap().dim(), want, "shift {s}");
    }
}

#[test]
fn verified_pairs() {
    let r = verify_pair(&k_stalk("D2", 0), &k_stalk("D2", 0), &[0, 1, 2, 3, 4], 0).unwrap();
    assert!(r.matched);
    assert!(r.shifts.iter().all(|&(_, d, c)| d == 1 && c == 1));
    let r = verify_pair(&k_stalk("A2", 0), &k_stalk("A2", 1), &[0, 1], 0).unwrap();
    assert!(r.matched);
    assert_eq!(r.shifts.iter().map(|s| s.1).collect::<Vec<_>>(), vec![0, 1]);
    let f3 = alg("F3");
    let m = random_complex(&f3, &mut rng(1), 5).unwrap();
    let r = verify_pair(&m, &m, &[-1, 0, 1], 0).unwrap();
    assert!(r.matched);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn completion_matches_derived(k in 0..MAIN_SET.len(), seed in any::<u64>(), s in -3i64..=3) {
        let a = alg(MAIN_SET[k]);
        let mut r = rng(seed);
        let m = random_complex(&a, &mut r, 8).unwrap();
        let n = random_complex(&a, &mut r, 8).unwrap();
        let (x, y) = (CauchySeq::truncation(&m), CauchySeq::truncation(&n));
        let c = completion_hom(&x, &CauchySeq::shifted(&y, s)).unwrap().dim();
        prop_assert_eq!(c, dbhom(&m, &n, s).unwrap().dim());
    }

    #[test]
    fn empirical_index_within_certificate(k in 0..MAIN_SET.len(), seed in any::<u64>()) {
        let a = alg(MAIN_SET[k]);
        let m = random_complex(&a, &mut rng(seed), 8).unwrap();
        for idx in is_cauchy(&CauchySeq::truncation(&m), &stalks(&a, -3, 3), 4).unwrap() {
            prop_assert!(idx.empirical <= idx.certified.unwrap());
        }
    }

    #[test]
    fn certificates_verify(k in 0..MAIN_SET.len(), seed in any::<u64>()) {
        let a = alg(MAIN_SET[k]);
        let m = random_complex(&a, &mut rng(seed), 8).unwrap();
        let x = CauchySeq::truncation(&m);
        for i in 0..4 {
            prop_assert!(x.verify_certificate(i).unwrap());
        }
    }
}
