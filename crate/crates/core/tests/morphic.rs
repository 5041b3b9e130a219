mod common;

use std::sync::Arc;

use proptest::prelude::*;
use seqcomp::algebra::*;
use seqcomp::catalog;
use seqcomp::complexes::{cone, is_quasi_iso, ChainMap, Complex};
use seqcomp::derived::khom;
use seqcomp::exactla::Mat;
use seqcomp::morphic::*;
use seqcomp::sample::{Rng, random_chain_map, random_complex, random_module, random_module_map, rng};

fn alg(name: &str) -> Arc<Algebra> {
    catalog::lookup(name).unwrap()
}

fn lambda1(name: &str) -> Lambda1 {
    Lambda1::new(&alg(name)).unwrap()
}

fn stalk(m: &Module) -> Complex {
    Complex::stalk(m, 0)
}

fn iso(a: &Complex, b: &Complex) -> bool {
    find_iso(a, b, 200, 3).unwrap().is_some()
}

// C = cone(x·: Λ -> Λ) over D2, a perfect complex with k in two degrees
fn cone_of_x(l: &Lambda1) -> Complex {
    let reg = Module::regular(&l.base);
    // commutative, so right multiplication by x is Λ-linear
    let x = reg.action()[1].clone();
    let f = ChainMap::new(&stalk(&reg), &stalk(&reg), 0, vec![x]).unwrap();
    cone(&f).complex
}

#[test]
fn lambda1_has_three_corners() {
    for name in ["F2", "D2", "D3"] {
        let l = lambda1(name);
        assert_eq!(l.alg.dim(), 3 * l.base.dim(), "{name}");
    }
}

#[test]
fn corners_of_the_indecomposable_projectives() {
    for name in ["F2", "D2"] {
        let l = lambda1(name);
        let n = l.base.dim();
        // e₁₁Λ₁ = (Λ = Λ)
        let e1 = l.from_lambda1(&stalk(&proj_module(&l.alg, &[0]).unwrap())).unwrap();
        assert_eq!((e1.x1.dim_at(0), e1.x0.dim_at(0)), (n, n), "{name}");
        assert_eq!(e1.alpha.at(0).rank(), n, "{name}");
        // e₂₂Λ₁ = (0 -> Λ)
        let e2 = l.from_lambda1(&stalk(&proj_module(&l.alg, &[1]).unwrap())).unwrap();
        assert!(e2.x1.is_zero(), "{name}");
        assert_eq!(e2.x0.dim_at(0), n, "{name}");
        assert!(iso(&e2.x0, &stalk(&Module::regular(&l.base))));
    }
}

#[test]
fn regular_lambda1_splits_into_corners() {
    for name in ["F2", "D2", "D3"] {
        let l = lambda1(name);
        let n = l.base.dim();
        let pr = l.from_lambda1(&stalk(&Module::regular(&l.alg))).unwrap();
        assert_eq!((pr.x1.dim_at(0), pr.x0.dim_at(0)), (n, 2 * n), "{name}");
        assert_eq!(pr.alpha.at(0).rank(), n, "{name}");
    }
}

#[test]
fn lambda1_module_homs_match_enumeration() {
    for name in ["F2", "D2"] {
        let l = lambda1(name);
        let p = l.base.p();
        let zero = Module::zero(&l.base);
        let k = simples(&l.base).unwrap().remove(0);
        let reg = Module::regular(&l.base);
        let soc = socle_inclusion(&k, &reg);
        let mods = [
            l.module(&k, &k, &Mat::identity(p, k.dim())).unwrap(),
            l.module(&zero, &k, &Mat::zeros(p, 0, k.dim())).unwrap(),
            l.module(&k, &zero, &Mat::zeros(p, k.dim(), 0)).unwrap(),
            l.module(&k, &reg, &soc).unwrap(),
            l.module(&reg, &reg, &Mat::identity(p, reg.dim())).unwrap(),
        ];
        for a in &mods {
            for b in &mods {
                if a.dim() * b.dim() > 16 {
                    continue;
                }
                let want = common::hom_dim(a, b);
                assert_eq!(khom(&stalk(a), &stalk(b)).unwrap().dim(), want, "{name}");
            }
        }
    }
}

// k -> Λ onto the socle, found by enumeration
fn socle_inclusion(k: &Module, reg: &Module) -> Mat {
    let p = k.p();
    common::all_vectors(p, k.dim() * reg.dim())
        .into_iter()
        .map(|v| Mat::from_vec(p, k.dim(), reg.dim(), v))
        .find(|f| f.rank() > 0 && k.action().iter().zip(reg.action()).all(|(a, b)| a.mul(f) == f.mul(b)))
        .unwrap()
}

#[test]
fn corners_recover_module_pairs() {
    let mut r = rng(21);
    for name in ["F2", "D2", "D3"] {
        let l = lambda1(name);
        for _ in 0..10 {
            let m1 = random_module(&l.base, &mut r, 4).unwrap();
            let m0 = random_module(&l.base, &mut r, 4).unwrap();
            let phi = random_module_map(&m1, &m0, &mut r).unwrap();
            let pr = l.from_lambda1(&stalk(&l.module(&m1, &m0, &phi).unwrap())).unwrap();
            assert_eq!(pr.x1.dim_at(0), m1.dim());
            assert_eq!(pr.x0.dim_at(0), m0.dim());
            assert_eq!(pr.alpha.at(0).rank(), phi.rank());
            assert!(iso(&pr.x1, &stalk(&m1)) && iso(&pr.x0, &stalk(&m0)));
        }
    }
}

#[test]
fn round_trip_through_lambda1() {
    let mut r = rng(4);
    for name in ["F2", "D2"] {
        let l = lambda1(name);
        let projs = proj_indecs(&l.base).unwrap();
        for _ in 0..20 {
            let a = Complex::stalk(&projs[r.gen_range(0..projs.len())], r.gen_range(-1..=1));
            let b = Complex::stalk(&projs[r.gen_range(0..projs.len())], r.gen_range(-1..=1));
            let f = random_chain_map(&a, &b, &mut r).unwrap();
            let z = l.to_lambda1(&MorphPair::new(f.clone())).unwrap();
            assert!(z.window().map_or(true, |(lo, hi)| (lo..=hi).all(|d| is_projective(&z.term(d)).unwrap())));
            let back = l.from_lambda1(&z).unwrap();
            assert!(iso(&back.x1, &a) && iso(&back.x0, &b));
            assert!(iso(&cone(&back.alpha).complex, &cone(&f).complex));
        }
    }
}

#[test]
fn q_functors_against_p_functors() {
    for name in ["F2", "D2"] {
        let l = lambda1(name);
        let mut base: Vec<Complex> = proj_indecs(&l.base).unwrap().iter().map(stalk).collect();
        if name == "D2" {
            base.push(cone_of_x(&l));
        }
        for m in &base {
            let q0 = l.functor_q(0, m).unwrap();
            for n in [0, 1] {
                let pm = l.functor_p(n, &q0).unwrap();
                assert_eq!(pm.window(), m.window());
                assert!(m.window().map_or(true, |(lo, hi)| (lo..=hi).all(|d| pm.dim_at(d) == m.dim_at(d))));
                assert!(iso(&pm, m));
            }
            let q1 = l.functor_q(1, m).unwrap();
            assert!(iso(&l.functor_p(-1, &q1).unwrap(), &m.shift(1)));
            assert!(l.functor_p(0, &q1).unwrap().is_acyclic());
            let qm1 = l.functor_q(-1, m).unwrap();
            assert!(iso(&l.functor_p(2, &qm1).unwrap(), &m.shift(-1)));
            assert!(l.functor_p(1, &qm1).unwrap().is_zero());
        }
    }
}

#[test]
fn unsupported_indices_are_errors() {
    let l = lambda1("F2");
    let m = stalk(&Module::regular(&l.base));
    let z = l.functor_q(0, &m).unwrap();
    assert!(matches!(l.functor_q(2, &m), Err(MorphicError::UnsupportedQ(2))));
    assert!(matches!(l.functor_p(3, &z), Err(MorphicError::UnsupportedP(3))));
    assert!(l.q_extended(4, &m).is_err());
}

#[test]
fn cylinder_factors_alpha() {
    let mut r = rng(8);
    for name in ["F2", "D2", "A2"] {
        let a = alg(name);
        for _ in 0..8 {
            let x = random_complex(&a, &mut r, 5).unwrap();
            let y = random_complex(&a, &mut r, 5).unwrap();
            let f = random_chain_map(&x, &y, &mut r).unwrap();
            let cyl = cylinder(&f).unwrap();
            assert!(cyl.inclusion.then(&cyl.collapse).sub(&f.retarget(&x, &y)).is_zero());
            assert!(is_quasi_iso(&cyl.collapse));
            if let Some((lo, hi)) = x.window() {
                for d in lo..=hi {
                    assert_eq!(cyl.inclusion.at(d).rank(), x.dim_at(d));
                }
            }
        }
    }
}

#[test]
fn standard_triangles_of_q_objects() {
    let l = lambda1("D2");
    let m = stalk(&Module::regular(&l.base));
    let tests = vec![m.clone(), m.shift(1), cone_of_x(&l)];
    // Q₀M: M = M -> 0
    let t = standard_triangle(&l, &l.functor_q(0, &m).unwrap()).unwrap();
    let [a, b, c] = t.objects();
    assert!(iso(a, &m) && iso(b, &m) && c.is_acyclic());
    assert!(triangle_exact(&t, &tests).unwrap());
    // Q₁M: M -> 0 -> ΣM
    let t = standard_triangle(&l, &l.functor_q(1, &m).unwrap()).unwrap();
    let [a, b, c] = t.objects();
    assert!(iso(a, &m) && b.is_acyclic() && iso(c, &m.shift(1)));
    assert!(triangle_exact(&t, &tests).unwrap());
}

#[test]
fn broken_triangle_is_not_exact() {
    let l = lambda1("D2");
    let m = stalk(&Module::regular(&l.base));
    let mut t = standard_triangle(&l, &l.functor_q(-1, &m).unwrap()).unwrap();
    assert!(triangle_exact(&t, &[m.clone()]).unwrap());
    t.inclusion = ChainMap::zero(t.inclusion.source(), t.inclusion.target());
    assert!(!triangle_exact(&t, &[m]).unwrap());
}

#[test]
fn cone_compatibility_for_x_on_q0k() {
    let l = lambda1("D2");
    let c = cone_of_x(&l);
    let q = l.functor_q(0, &c).unwrap();
    let h = khom(&q, &q).unwrap();
    let ms: Vec<ChainMap> = h.basis.clone();
    assert!(!ms.is_empty());
    let tests = vec![stalk(&Module::regular(&l.base)), c];
    let rep = cone_compat_check(&l, &ms, &tests).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
}

#[test]
fn square_zero_on_perfect_q_objects() {
    // k is not perfect over D2, so C stands in for it
    let l = lambda1("D2");
    let c = cone_of_x(&l);
    let reg = stalk(&Module::regular(&l.base));
    let objects = vec![l.functor_q(1, &c).unwrap(), l.functor_q(0, &c).unwrap(), l.functor_q(-1, &c).unwrap(), l.functor_q(1, &reg).unwrap()];
    let sample = Sample { base: vec![reg, c], pairs: vec![], objects };
    let rep = square_zero_check(&l, &sample, 100).unwrap();
    assert!(rep.passed(), "{:?} {:?}", rep.products.failures, rep.exactness.failures);
    assert!(rep.dims.iter().any(|&(_, _, g)| g > 0), "no ghost maps in the sample: {:?}", rep.dims);
}

#[test]
fn shift_periodicity_on_regular_and_zero() {
    for name in ["F2", "D2"] {
        let l = lambda1(name);
        let m = stalk(&Module::regular(&l.base));
        let z = Complex::zero(&l.base);
        let tests: Vec<Complex> = (-1..=1).map(|n| l.functor_q(n, &m).unwrap()).collect();
        for n in -1..=0 {
            let rep = shift_periodicity_check(&l, n, &[m.clone(), z.clone()], &tests).unwrap();
            assert!(rep.passed(), "{name} n = {n}: {:?}", rep.failures);
        }
        assert!(shift_periodicity_check(&l, 1, &[m], &tests).is_err());
    }
}

#[test]
fn adjunctions_and_recollement_on_f2() {
    let l = lambda1("F2");
    let s = default_sample(&l, 2).unwrap();
    let rep = adjunction_check(&l, &s.base, &s.objects).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
    let rep = recollement_check(&l, &s).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
}

#[test]
fn epivalence_over_f2() {
    let l = lambda1("F2");
    let s = default_sample(&l, 6).unwrap();
    let rep = epivalence_check(&l, &s, 1).unwrap();
    assert!(rep.passed(), "{:?}", rep);
    // identity squares lift: the sample includes every diagonal pair
    assert!(rep.full.cases >= s.objects.len());
}

#[test]
fn morphic_completion_over_semisimple_and_dual_numbers() {
    for name in ["F2", "D2"] {
        let rep = morphic_completion_check(&lambda1(name)).unwrap();
        assert!(rep.passed(), "{name}: {rep:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn adjunction_dims_on_random_base(seed in 0u64..1000) {
        let l = lambda1("D2");
        let mut r = rng(seed);
        let projs = proj_indecs(&l.base).unwrap();
        let a = Complex::stalk(&projs[0], 0);
        let b = Complex::stalk(&projs[0], r.gen_range(0..=1));
        let f = random_chain_map(&a, &b, &mut r).unwrap();
        let m = cone(&f).complex;
        let objects = vec![l.to_lambda1(&MorphPair::new(f)).unwrap()];
        let rep = adjunction_check(&l, &[m], &objects).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.failures);
    }
}
