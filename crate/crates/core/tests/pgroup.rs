use std::collections::BTreeSet;

use proptest::prelude::*;
use seqcomp::pgroup::*;

// Elementwise model: an element of ⊕ Z/p^e is its coordinate vector.

fn elements(g: &PGroup) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &e in &g.exponents {
        let q = g.p.pow(e);
        out = out.into_iter().flat_map(|v: Vec<u64>| (0..q).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn apply(f: &PGroupMap, x: &[u64]) -> Vec<u64> {
    let t = &f.target;
    (0..t.rank())
        .map(|i| {
            let q = t.p.pow(t.exponents[i]) as i128;
            let s: i128 = x.iter().enumerate().map(|(j, &v)| f.matrix[i][j] as i128 * v as i128).sum();
            s.rem_euclid(q) as u64
        })
        .collect()
}

fn killed_by(g: &PGroup, x: &[u64], k: u32) -> bool {
    x.iter().zip(&g.exponents).all(|(&v, &e)| (v as u128 * (g.p as u128).pow(k)) % (g.p as u128).pow(e) == 0)
}

fn log_p(p: u64, mut n: usize) -> u32 {
    let mut k = 0;
    while n > 1 {
        n /= p as usize;
        k += 1;
    }
    k
}

fn socle_log_order(g: &PGroup, i: u32) -> u32 {
    log_p(g.p, elements(g).iter().filter(|x| killed_by(g, x, i)).count())
}

fn image(f: &PGroupMap) -> BTreeSet<Vec<u64>> {
    elements(&f.source).iter().map(|x| apply(f, x)).collect()
}

// X_i -> X_j identifies X_i with the elements of X_j killed by p^i
fn socle_stable_by_elements(maps: &[PGroupMap]) -> bool {
    for i in 0..=maps.len() {
        let mut f = match maps.get(i) {
            Some(m) => PGroupMap::identity(&m.source),
            None => PGroupMap::identity(&maps[i - 1].target),
        };
        for j in i..=maps.len() {
            if j > i {
                f = f.then(&maps[j - 1]).unwrap();
            }
            let im = image(&f);
            let soc: BTreeSet<Vec<u64>> = elements(&f.target).into_iter().filter(|x| killed_by(&f.target, x, i as u32)).collect();
            if im.len() != elements(&f.source).len() || im != soc {
                return false;
            }
        }
    }
    true
}

fn g(p: u64, e: &[u32]) -> PGroup {
    PGroup::new(p, e.to_vec()).unwrap()
}

#[test]
fn socles_of_small_groups() {
    let z8 = g(2, &[3]);
    let got: Vec<u32> = socle_series_pg(&z8, 3).iter().map(|(s, _)| s.log_order()).collect();
    let oracle: Vec<u32> = (0..=3).map(|i| socle_log_order(&z8, i)).collect();
    assert_eq!(got, oracle);
    assert_eq!(got, vec![0, 1, 2, 3]);

    let el = g(3, &[1, 1, 1]);
    assert_eq!(socle_series_pg(&el, 1)[1].0, el);

    let mixed = g(2, &[2, 1]);
    let s = socle_series_pg(&mixed, 2);
    assert_eq!(s[1].0.exponents, vec![1, 1]);
    assert_eq!(socle_log_order(&mixed, 1), 2);
    assert_eq!(s[2].0.log_order(), mixed.log_order());
    for (sub, incl) in &s {
        let im = image(incl);
        assert_eq!(im.len(), elements(sub).len());
        assert!(im.iter().all(|x| killed_by(&mixed, x, sub.max_exponent())));
    }
}

#[test]
fn socle_stability_examples() {
    let canonical: Vec<PGroupMap> = (0..4).map(|i| PSeq::CanonicalPruefer(2).map(i).unwrap()).collect();
    assert!(socle_stable_by_elements(&canonical));
    assert!(is_socle_stable(&PSeq::CanonicalPruefer(2), 4).unwrap());

    let z4 = g(2, &[2]);
    let constant: Vec<PGroupMap> = (0..3).map(|_| PGroupMap::identity(&z4)).collect();
    assert!(!socle_stable_by_elements(&constant));
    assert!(!is_socle_stable(&PSeq::Constant(z4), 3).unwrap());

    // Z/p -> Z/p + Z/p^2, x -> (x, p x)
    for p in [2, 3] {
        let f = PGroupMap::new(&g(p, &[1]), &g(p, &[1, 2]), vec![vec![1], vec![p as i64]]).unwrap();
        let want = socle_stable_by_elements(std::slice::from_ref(&f));
        assert_eq!(is_socle_stable(&PSeq::Prefix(vec![f]), 1).unwrap(), want);
    }
    // 0 -> Z/p + Z/p -> ... is stable at the first step only if soc^1 is everything
    let f = PGroupMap::new(&PGroup::trivial(3), &g(3, &[1, 2]), vec![vec![], vec![]]).unwrap();
    assert_eq!(is_socle_stable(&PSeq::Prefix(vec![f.clone()]), 1).unwrap(), socle_stable_by_elements(&[f]));
}

#[test]
fn classification_examples() {
    for p in [2, 3, 5] {
        let c = classify_colimit(&PSeq::CanonicalPruefer(p), 6).unwrap();
        assert_eq!(c.colimit, ArtinianType::new(p, vec![], 1).unwrap());
    }
    let z9 = g(3, &[2]);
    let c = classify_colimit(&PSeq::Constant(z9.clone()), 4).unwrap();
    assert_eq!(c.colimit, ArtinianType::finite(&z9));
    // Z/p + Z/p^i with the identity on the first factor
    let seq = PSeq::DirectSum(Box::new(PSeq::Constant(g(2, &[1]))), Box::new(PSeq::CanonicalPruefer(2)));
    assert_eq!(classify_colimit(&seq, 8).unwrap().colimit, ArtinianType::new(2, vec![1], 1).unwrap());
}

#[test]
fn growing_rank_is_not_cauchy() {
    assert!(classify_colimit(&PSeq::GrowingRank(2), 6).is_err());
}

#[test]
fn composite_maps_agree_elementwise() {
    let a = g(2, &[1, 2]);
    let b = g(2, &[2, 3]);
    let c = g(2, &[3]);
    let f = PGroupMap::new(&a, &b, vec![vec![2, 1], vec![0, 2]]).unwrap();
    let h = PGroupMap::new(&b, &c, vec![vec![2, 1]]).unwrap();
    let fh = f.then(&h).unwrap();
    for x in elements(&a) {
        assert_eq!(apply(&fh, &x), apply(&h, &apply(&f, &x)));
    }
}

fn artinian() -> impl Strategy<Value = ArtinianType> {
    (prop::sample::select(vec![2u64, 3]), prop::collection::vec(1u32..=3, 0..=3), 0usize..=2)
        .prop_map(|(p, e, k)| ArtinianType::new(p, e, k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn socle_series_round_trip(t in artinian()) {
        let seq = PSeq::SocleSeries(t.clone());
        prop_assert!(is_socle_stable(&seq, 5).unwrap());
        prop_assert_eq!(classify_colimit(&seq, 8).unwrap().colimit, t);
    }

    #[test]
    fn socle_orders_match_elements(e in prop::collection::vec(1u32..=3, 1..=2), i in 0u32..=3) {
        let grp = g(2, &e);
        let (s, _) = &socle_series_pg(&grp, i)[i as usize];
        prop_assert_eq!(s.log_order(), socle_log_order(&grp, i));
    }

    #[test]
    fn injectivity_and_cokernel_match_elements(e in prop::collection::vec(1u32..=2, 1..=2), f in prop::collection::vec(1u32..=3, 1..=2), seed in any::<u64>()) {
        let (a, b) = (g(2, &e), g(2, &f));
        // scale each entry so the map is well defined
        let m: Vec<Vec<i64>> = (0..b.rank()).map(|i| (0..a.rank()).map(|j| {
            let need = f[i].saturating_sub(e[j]);
            (((seed >> (2 * (i * 2 + j))) & 3) as i64) * 2i64.pow(need)
        }).collect()).collect();
        let map = PGroupMap::new(&a, &b, m).unwrap();
        let im = image(&map);
        prop_assert_eq!(map.is_injective().unwrap(), im.len() == elements(&a).len());
        prop_assert_eq!(map.cokernel().unwrap().log_order(), b.log_order() - log_p(2, im.len()));
    }
}
