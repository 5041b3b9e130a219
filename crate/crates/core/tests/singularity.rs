mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use seqcomp::algebra::*;
use seqcomp::catalog::{self, MAIN_SET};
use seqcomp::complexes::Complex;
use seqcomp::derived::dbhom;
use seqcomp::exactla::Mat;
use seqcomp::sample::{random_module, rng};
use seqcomp::singularity::*;

fn alg(name: &str) -> Arc<Algebra> {
    catalog::lookup(name).unwrap()
}

fn homs(m: &Module, n: &Module) -> Vec<Mat> {
    let p = m.p();
    common::all_vectors(p, m.dim() * n.dim())
        .into_iter()
        .map(|v| Mat::from_vec(p, m.dim(), n.dim(), v))
        .filter(|f| m.action().iter().zip(n.action()).all(|(a, b)| a.mul(f) == f.mul(b)))
        .collect()
}

// |Hom(M, N)| / |maps factoring through the regular module|, valid when N is cyclic
fn stable_dim_by_enumeration(m: &Module, n: &Module) -> usize {
    let l = Module::regular(m.algebra());
    let all = homs(m, n);
    let through: BTreeSet<Vec<u32>> = homs(m, &l).iter().flat_map(|u| homs(&l, n).into_iter().map(move |v| u.mul(&v).data().to_vec())).collect();
    let mut sums: BTreeSet<Vec<u32>> = BTreeSet::new();
    sums.insert(vec![0; m.dim() * n.dim()]);
    // span of the composites
    loop {
        let before = sums.len();
        let next: Vec<Vec<u32>> = sums.iter().flat_map(|a| through.iter().map(move |b| a.iter().zip(b).map(|(x, y)| (x + y) % m.p()).collect())).collect();
        sums.extend(next);
        if sums.len() == before {
            break;
        }
    }
    let (mut a, b) = (all.len(), sums.len());
    let mut k = 0;
    while a > b {
        a /= m.p() as usize;
        k += 1;
    }
    k
}

#[test]
fn stable_endomorphisms_of_k() {
    for name in ["D2", "D3"] {
        let k = &simples(&alg(name)).unwrap()[0];
        assert_eq!(stable_dim_by_enumeration(k, k), 1);
        assert_eq!(stable_hom(k, k).unwrap().dim(), 1, "{name}");
    }
    // D3 regular onto k: x^2-multiples are the only maps through Λ
    let d3 = alg("D3");
    let k = &simples(&d3).unwrap()[0];
    let rad = Module::regular(&d3).submodule(&Module::regular(&d3).radical().unwrap()).0;
    assert_eq!(stable_hom(&rad, k).unwrap().dim(), stable_dim_by_enumeration(&rad, k));
}

#[test]
fn projectives_are_stably_zero() {
    for name in MAIN_SET {
        let a = alg(name);
        for p in proj_indecs(&a).unwrap() {
            for s in simples(&a).unwrap() {
                assert_eq!(stable_hom(&p, &s).unwrap().dim(), 0, "{name}");
            }
        }
    }
    let f2 = alg("F2");
    let m = random_module(&f2, &mut rng(1), 3).unwrap();
    assert_eq!(stable_hom(&m, &m).unwrap().dim(), 0);
}

#[test]
fn syzygies() {
    let d2 = alg("D2");
    let k = &simples(&d2).unwrap()[0];
    let om = syzygy(k).unwrap().module;
    assert_eq!(om.dim(), 1);
    assert_eq!(common::hom_dim(k, &om), 1);

    let a2 = alg("A2");
    let s = simples(&a2).unwrap();
    let om = syzygy(&s[0]).unwrap().module;
    assert_eq!(om.dim(), 1);
    assert_eq!(common::hom_dim(&s[1], &om), 1);
    assert!(is_projective(&om).unwrap());

    let p = &proj_indecs(&a2).unwrap()[0];
    assert_eq!(syzygy(p).unwrap().module.dim(), 0);
}

#[test]
fn self_injectivity() {
    let got: Vec<bool> = ["D2", "D3", "F2", "A2", "A3", "T2"].iter().map(|n| is_self_injective(&alg(n)).unwrap()).collect();
    assert_eq!(got, vec![true, true, true, false, false, false]);
}

#[test]
fn tate_periodicity_over_dual_numbers() {
    let k = &simples(&alg("D2")).unwrap()[0];
    for n in -3..=3 {
        let h = sg_hom(k, k, n, 4).unwrap();
        assert_eq!(h.dim, 1);
        assert_eq!(h.certificate, SgCertificate::SelfInjective);
    }
    assert_eq!(perfect_factoring_quotient(k, k, 4).unwrap().dim(), 1);
}

#[test]
fn finite_global_dimension_kills_singularity_homs() {
    for name in ["A2", "A3", "T2"] {
        let a = alg(name);
        let ss = simples(&a).unwrap();
        for m in &ss {
            for n in &ss {
                for s in -2..=2 {
                    let h = sg_hom(m, n, s, 4).unwrap();
                    assert_eq!(h.dim, 0, "{name}");
                    assert!(matches!(h.certificate, SgCertificate::Vanished { .. }));
                }
            }
        }
    }
}

#[test]
fn projective_source_vanishes() {
    let d3 = alg("D3");
    let l = Module::regular(&d3);
    let k = &simples(&d3).unwrap()[0];
    for s in -2..=2 {
        assert_eq!(sg_hom(&l, k, s, 3).unwrap().dim, 0);
    }
}

#[test]
fn non_gorenstein_example_is_horizon_tagged() {
    let td2 = alg("TD2");
    let s = simples(&td2).unwrap();
    let h = sg_hom(&s[0], &s[0], 0, 3).unwrap();
    assert!(!h.certified());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // over a self-injective algebra, positive-degree singularity homs are Ext groups
    #[test]
    fn self_injective_sg_matches_ext(k in 0..3usize, seed in any::<u64>(), n in 1i64..=3) {
        let a = alg(["D2", "D3", "D2p3"][k]);
        let mut r = rng(seed);
        let m = random_module(&a, &mut r, 3).unwrap();
        let nn = random_module(&a, &mut r, 3).unwrap();
        let sg = sg_hom(&m, &nn, n, 4).unwrap();
        let ext = dbhom(&Complex::stalk(&m, 0), &Complex::stalk(&nn, 0), n).unwrap().dim();
        prop_assert_eq!(sg.dim, ext);
    }

    #[test]
    fn stable_hom_bounded_by_hom(k in 0..MAIN_SET.len(), seed in any::<u64>()) {
        let a = alg(MAIN_SET[k]);
        let mut r = rng(seed);
        let m = random_module(&a, &mut r, 4).unwrap();
        let n = random_module(&a, &mut r, 4).unwrap();
        let s = stable_hom(&m, &n).unwrap();
        prop_assert_eq!(s.dim() + s.factoring_dim, s.hom.dim());
        for c in 0..s.dim() {
            let f = s.representative(c);
            let mut want = vec![0; s.dim()];
            want[c] = 1;
            prop_assert_eq!(s.class_of(&f).unwrap(), want);
        }
    }

    #[test]
    fn perfect_quotient_matches_sg_on_self_injective(seed in any::<u64>()) {
        let a = alg("D2");
        let mut r = rng(seed);
        let m = random_module(&a, &mut r, 3).unwrap();
        let n = random_module(&a, &mut r, 3).unwrap();
        let q = perfect_factoring_quotient(&m, &n, 4).unwrap();
        prop_assert_eq!(q.dim(), sg_hom(&m, &n, 0, 4).unwrap().dim);
    }
}
