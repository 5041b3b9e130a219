//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test --release -p seqcomp-core --test acceptance`.

use std::sync::Arc;
use std::time::{Duration, Instant};

use seqcomp::algebra::{k_dual, module_hom, proj_indecs, simples, Algebra, Module};
use seqcomp::catalog::{self, MAIN_SET};
use seqcomp::completion::*;
use seqcomp::complexes::{cone, ChainMap, Complex};
use seqcomp::derived::{dbhom, pc_certificate, pc_check, Resolution};
use seqcomp::exactla::Mat;
use seqcomp::morphic::*;
use seqcomp::pgroup::{classify_colimit, ArtinianType, PGroup, PGroupMap, PSeq};
use seqcomp::sample::{random_chain_map, random_complex, random_module, rng, Rng};
use seqcomp::singularity::sg_hom;

const SEED: u64 = 7;
const PAIRS: usize = 25;
const MAX_TOTAL: usize = 12;

type Outcome = Result<String, String>;

fn alg(name: &str) -> Arc<Algebra> {
    catalog::lookup(name).expect("catalog algebra")
}

fn window() -> Vec<i64> {
    (-4..=4).collect()
}

/// The complexes drawn by the main-theorem run, in the same order.
fn criterion1_complexes(a: &Arc<Algebra>) -> Vec<Complex> {
    let mut r = rng(SEED);
    (0..2 * PAIRS).map(|_| random_complex(a, &mut r, MAX_TOTAL).unwrap()).collect()
}

fn compacts(a: &Arc<Algebra>) -> Vec<Complex> {
    let mut out = Vec::new();
    for q in proj_indecs(a).unwrap() {
        for d in -4..=4 {
            out.push(Complex::stalk(&q, d));
        }
    }
    out
}

fn main_theorem() -> Outcome {
    let t = Instant::now();
    let mut pairs = 0;
    let mut comps = 0;
    for name in MAIN_SET {
        let rep = verify_main_theorem(name, &alg(name), PAIRS, MAX_TOTAL, &window(), SEED).map_err(|e| format!("{name}: {e}"))?;
        if let Some(p) = rep.pairs.iter().find(|p| !p.matched) {
            return Err(format!("{name} pair {}: {:?}", p.pair, p.detail));
        }
        pairs += rep.pairs.len();
        comps += rep.pairs.iter().map(|p| p.compositions_checked).sum::<usize>();
    }
    let el = t.elapsed();
    if el > Duration::from_secs(30) {
        return Err(format!("took {el:?}"));
    }
    Ok(format!("{pairs} pairs, shifts -4..4, {comps} compositions, {el:.1?}"))
}

// Ext^n(k, k) over F_2[x]/(x^2) from the periodic resolution
// ... -> D -x-> D -x-> D -> k, by enumerating all F_2-linear maps D -> k.
fn ext_oracle_dual_numbers(n: i64) -> usize {
    if n < 0 {
        return 0;
    }
    // basis (1, x); right multiplication by x sends 1 -> x, x -> 0
    let act_x = |v: [u8; 2]| [0, v[0]];
    let maps: Vec<[u8; 2]> = (0..4).map(|m| [m & 1, (m >> 1) & 1]).collect();
    let apply = |f: [u8; 2], v: [u8; 2]| (f[0] * v[0] + f[1] * v[1]) % 2;
    // x acts on k by zero, so equivariance means f(v x) = 0
    let homs: Vec<[u8; 2]> = maps.iter().copied().filter(|&f| apply(f, act_x([1, 0])) == 0 && apply(f, act_x([0, 1])) == 0).collect();
    // the induced map on Hom(P, k) is f -> f∘(·x)
    let pull = |f: [u8; 2]| [apply(f, act_x([1, 0])), apply(f, act_x([0, 1]))];
    let cocycles = homs.iter().filter(|&&f| pull(f) == [0, 0]).count();
    let boundaries: std::collections::BTreeSet<[u8; 2]> = if n == 0 { [[0, 0]].into() } else { homs.iter().map(|&f| pull(f)).collect() };
    let log2 = |c: usize| c.trailing_zeros() as usize;
    log2(cocycles) - log2(boundaries.len())
}

fn ext_algebra() -> Outcome {
    let a = alg("D2");
    let k = Complex::stalk(&simples(&a).unwrap()[0], 0);
    let x = CauchySeq::truncation(&k);
    let mut row = Vec::new();
    for n in -3..=5 {
        let want = ext_oracle_dual_numbers(n);
        let d = dbhom(&k, &k, n).map_err(|e| e.to_string())?.dim();
        let c = completion_hom(&x, &CauchySeq::shifted(&x, n)).map_err(|e| e.to_string())?.dim();
        if d != want || c != want {
            return Err(format!("n = {n}: oracle {want}, dbhom {d}, completion {c}"));
        }
        row.push(want.to_string());
    }
    Ok(format!("dims for n = -3..5: {}", row.join(" ")))
}

fn cauchy_phantomless() -> Outcome {
    let mut seqs = 0;
    let mut phantom_pairs = 0;
    for name in MAIN_SET {
        let a = alg(name);
        let cs = compacts(&a);
        let xs = criterion1_complexes(&a);
        let seq: Vec<_> = xs.iter().map(CauchySeq::truncation).collect();
        for (k, x) in seq.iter().enumerate() {
            let idx = is_cauchy(x, &cs, 4).map_err(|e| format!("{name} #{k}: {e}"))?;
            if let Some(bad) = idx.iter().find(|i| i.certified.map_or(true, |c| i.empirical > c)) {
                return Err(format!("{name} #{k}: empirical {} vs certified {:?}", bad.empirical, bad.certified));
            }
            seqs += 1;
        }
        for pair in seq.chunks(2) {
            let rep = phantomless_check(&pair[0], &pair[1], -4..=4).map_err(|e| format!("{name}: {e}"))?;
            if !rep.vanishes {
                return Err(format!("{name}: lim^1 not shown to vanish"));
            }
            phantom_pairs += 1;
        }
    }
    match ml_lim1_int(&IntTower::ConstantMultiplier(2), 8) {
        MlVerdict::MlFails { .. } => {}
        v => return Err(format!("Z <-2- Z gave {v:?}")),
    }
    Ok(format!("{seqs} sequences Cauchy, {phantom_pairs} pairs phantomless, Z <-2- Z fails ML"))
}

fn triangles() -> Outcome {
    let mut total = 0;
    for name in MAIN_SET {
        let a = alg(name);
        let mut r = rng(11);
        for case in 0..10 {
            let m = random_complex(&a, &mut r, 8).unwrap();
            let n = random_complex(&a, &mut r, 8).unwrap();
            let w = random_complex(&a, &mut r, 6).unwrap();
            let f = random_chain_map(&m, &n, &mut r).unwrap();
            let err = |e: CompletionError| format!("{name} #{case}: {e}");
            let (sm, sn, sw) = (CauchySeq::truncation(&m), CauchySeq::truncation(&n), CauchySeq::truncation(&w));
            let phi = SeqMorphism::induced(&sm, &sn, &f).map_err(err)?;
            let tri = seq_cone(&phi, 6).map_err(err)?;
            let les = les_check(&sw, &tri, &phi, -2..=2).map_err(err)?;
            if !les.exact {
                return Err(format!("{name} #{case}: long sequence not exact {:?}", les.nodes));
            }
            let cf = cone(&f).complex;
            for s in -2..=2 {
                let d = dbhom(&w, &cf, s).map_err(|e| e.to_string())?.dim();
                let c = completion_hom(&sw, &CauchySeq::shifted(&tri.cone, s)).map_err(err)?.dim();
                if d != c {
                    return Err(format!("{name} #{case} shift {s}: cone in D^b {d}, completion {c}"));
                }
            }
            if !realizes(&tri.cone, &cf, -10).map_err(err)? {
                return Err(format!("{name} #{case}: realization differs from the cone"));
            }
            total += 1;
        }
    }
    Ok(format!("{total} seeded morphisms, sequences exact and cones agree"))
}

fn fractions() -> Outcome {
    let mut cases = 0;
    let mut comparisons = 0;
    for name in MAIN_SET {
        let a = alg(name);
        let mut r = rng(5);
        let mut cs = compacts(&a);
        for case in 0..4 {
            let at = |e: CompletionError| format!("{name} #{case}: {e}");
            let m = random_complex(&a, &mut r, 8).unwrap();
            let n = random_complex(&a, &mut r, 8).unwrap();
            let f = random_chain_map(&m, &n, &mut r).unwrap();
            let g = random_chain_map(&m, &n, &mut r).unwrap();
            let x = CauchySeq::truncation(&m);
            let y = CauchySeq::truncation(&n);
            let alpha = SeqMorphism::induced(&x, &y, &f).map_err(at)?;
            let gamma = SeqMorphism::induced(&x, &y, &g).map_err(at)?;
            let beta = SeqMorphism::sum(&alpha, &bottom_ghost(&x, &y, case).map_err(at)?).map_err(at)?;
            let other = SeqMorphism::sum(&alpha, &gamma).map_err(at)?;
            let (ci, _) = completion_indices(&x, &y).map_err(at)?;
            cs.push(x.term(ci).map_err(at)?);

            // (LF2) square over a reindexing of the source
            let (_, fx) = SeqMorphism::reindex(&x, Cofinal::shift(1)).map_err(at)?;
            let (sp, ap) = lf2_square(&fx, &alpha, 6).map_err(at)?;
            let l = SeqMorphism::compose(&fx, &ap).map_err(at)?;
            let rr = SeqMorphism::compose(&alpha, &sp).map_err(at)?;
            if !homotopic_up_to(&l, &rr, 6).map_err(at)? {
                return Err(format!("{name} #{case}: LF2 square does not commute"));
            }
            // (LF3) equalizer of two maps agreeing in the completion
            let tau = lf3_equalizer(&alpha, &beta, 6).map_err(at)?;
            let ta = SeqMorphism::compose(&alpha, &tau).map_err(at)?;
            let tb = SeqMorphism::compose(&beta, &tau).map_err(at)?;
            if !homotopic_up_to(&ta, &tb, 6).map_err(at)? {
                return Err(format!("{name} #{case}: LF3 witness does not equalize"));
            }
            // (LF1) composites of fractions exist
            let (_, fy) = SeqMorphism::reindex(&y, Cofinal::shift(1)).map_err(at)?;
            let fr = Fraction::new(SeqMorphism::compose(&alpha, &fy).map_err(at)?, fy.clone()).map_err(at)?;
            let id_y = Fraction::plain(SeqMorphism::identity(&y));
            fraction_compose(&fr, &id_y, 6).map_err(at)?;

            let fa = Fraction::plain(alpha.clone());
            for (u, v) in [(&fa, &Fraction::plain(beta.clone())), (&fa, &Fraction::plain(other.clone())), (&fa, &fr)] {
                let e1 = fraction_equal(u, v).map_err(at)?;
                let e2 = yoneda_equal(u, v, &cs).map_err(at)?;
                if e1 != e2 {
                    return Err(format!("{name} #{case}: fraction_equal {e1}, Yoneda {e2}"));
                }
                comparisons += 1;
            }
            cs.pop();
            cases += 1;
        }
    }
    Ok(format!("{cases} cases with LF1-LF3 witnesses, {comparisons} equality comparisons agree"))
}

fn pgroups() -> Outcome {
    let mut r = rng(SEED);
    for k in 0..10 {
        let p = [2, 3][k % 2];
        let exps: Vec<u32> = (0..r.gen_range(0..=3)).map(|_| r.gen_range(1..=3)).collect();
        let t = ArtinianType::new(p, exps, r.gen_range(0..=2)).map_err(|e| e.to_string())?;
        let got = classify_colimit(&PSeq::SocleSeries(t.clone()), 8).map_err(|e| format!("{t}: {e}"))?;
        if got.colimit != t {
            return Err(format!("{t} came back as {}", got.colimit));
        }
    }
    for p in [2, 3] {
        let got = classify_colimit(&PSeq::CanonicalPruefer(p), 8).map_err(|e| e.to_string())?;
        if got.colimit.pruefer_count != 1 || !got.colimit.finite_exponents.is_empty() {
            return Err(format!("canonical-pruefer({p}) gave {}", got.colimit));
        }
    }
    let mut ev = 0;
    for k in 0..6 {
        let p = [2, 3][k % 2];
        let maps = injective_chain(p, &mut r);
        let last = maps.last().unwrap().target.clone();
        let got = classify_colimit(&PSeq::EventuallyConstant(maps), 8).map_err(|e| e.to_string())?;
        if got.colimit != ArtinianType::finite(&last) {
            return Err(format!("eventually {:?} gave {}", last.exponents, got.colimit));
        }
        ev += 1;
    }
    Ok(format!("10 socle-series round trips, canonical-pruefer(2,3) one factor, {ev} eventually-constant sequences"))
}

// G_0 -> G_1 -> G_2 -> G_3, each step multiplying some summands by p and
// sometimes adding a new cyclic summand.
fn injective_chain(p: u64, r: &mut seqcomp::sample::SampleRng) -> Vec<PGroupMap> {
    let mut exps: Vec<u32> = (0..r.gen_range(1..=2)).map(|_| r.gen_range(1..=2)).collect();
    let mut maps = Vec::new();
    for _ in 0..3 {
        let src = PGroup::new(p, exps.clone()).unwrap();
        let bumps: Vec<u32> = exps.iter().map(|_| r.gen_range(0..=1)).collect();
        let mut next: Vec<u32> = exps.iter().zip(&bumps).map(|(e, b)| e + b).collect();
        if r.gen_bool(0.3) {
            next.push(1);
        }
        let tgt = PGroup::new(p, next.clone()).unwrap();
        let matrix: Vec<Vec<i64>> = (0..next.len()).map(|i| (0..exps.len()).map(|j| if i == j { (p as i64).pow(bumps[j]) } else { 0 }).collect()).collect();
        maps.push(PGroupMap::new(&src, &tgt, matrix).unwrap());
        exps = next;
    }
    maps
}

fn singularity() -> Outcome {
    let d2 = alg("D2");
    let k = &simples(&d2).unwrap()[0];
    for n in -3..=3 {
        let h = sg_hom(k, k, n, 4).map_err(|e| e.to_string())?;
        if h.dim != 1 || !h.certified() {
            return Err(format!("D2 shift {n}: dim {} certificate {:?}", h.dim, h.certificate));
        }
    }
    let a2 = alg("A2");
    let mut r = rng(SEED);
    for k in 0..10 {
        let m = random_module(&a2, &mut r, 3).unwrap();
        let n = random_module(&a2, &mut r, 3).unwrap();
        for s in -3..=3 {
            let h = sg_hom(&m, &n, s, 4).map_err(|e| e.to_string())?;
            if h.dim != 0 || !h.certified() {
                return Err(format!("A2 pair {k} shift {s}: dim {} certificate {:?}", h.dim, h.certificate));
            }
        }
    }
    Ok("D2 sg_hom(k,k,n) = 1 for n = -3..3, A2 vanishes on 10 pairs".into())
}

fn morphic() -> Outcome {
    let t = Instant::now();
    let mut summary = Vec::new();
    for name in ["F2", "D2"] {
        let l = Lambda1::new(&alg(name)).map_err(|e| e.to_string())?;
        let err = |e: MorphicError| format!("{name}: {e}");
        let s = default_sample(&l, 11).map_err(err)?;
        let mut reports = Vec::new();
        let e = epivalence_check(&l, &s, 5).map_err(err)?;
        reports.extend([e.full, e.conservative, e.essentially_surjective]);
        let sq = square_zero_check(&l, &s, 200).map_err(err)?;
        reports.extend([sq.products, sq.exactness]);
        for z in &s.objects {
            if !triangle_exact(&standard_triangle(&l, z).map_err(err)?, &s.base).map_err(err)? {
                return Err(format!("{name}: standard triangle not exact"));
            }
        }
        let ms = sample_morphisms(&s, 10, 9).map_err(err)?;
        if ms.len() < 10 {
            return Err(format!("{name}: only {} morphisms sampled", ms.len()));
        }
        reports.push(cone_compat_check(&l, &ms, &s.base).map_err(err)?);
        for n in -1..=0 {
            reports.push(shift_periodicity_check(&l, n, &s.base, &s.objects).map_err(err)?);
        }
        reports.push(adjunction_check(&l, &s.base, &s.objects).map_err(err)?);
        reports.push(recollement_check(&l, &s).map_err(err)?);
        if let Some(bad) = reports.iter().find(|r| !r.passed()) {
            return Err(format!("{name} {}: {:?}", bad.name, bad.failures.first()));
        }
        let cases: usize = reports.iter().map(|r| r.cases).sum();
        summary.push(format!("{name} {cases} cases"));
    }
    let el = t.elapsed();
    if el > Duration::from_secs(60) {
        return Err(format!("took {el:?}"));
    }
    Ok(format!("{}, {el:.1?}", summary.join(", ")))
}

// zero the differential into the top degree; the augmentation still commutes
fn corrupted(f: &ChainMap) -> Option<ChainMap> {
    let x = f.source();
    let (lo, hi) = x.window()?;
    if lo == hi {
        return None;
    }
    let terms = (lo..=hi).map(|n| x.term(n)).collect();
    let diffs = (lo..hi).map(|n| if n == hi - 1 { Mat::zeros(x.p(), x.dim_at(n), x.dim_at(hi)) } else { x.diff(n) }).collect();
    let y = Complex::new(x.algebra(), lo, terms, diffs).ok()?;
    ChainMap::new(&y, f.target(), lo, (lo..=hi).map(|n| f.at(n)).collect()).ok()
}

fn pseudo_coherence() -> Outcome {
    let mut checked = 0;
    let mut controls = 0;
    for name in MAIN_SET {
        for x in criterion1_complexes(&alg(name)) {
            let res = Resolution::new(&x);
            for i in 0..=4 {
                if !pc_certificate(&res, i).map_err(|e| e.to_string())? {
                    return Err(format!("{name}: certificate fails at i = {i}"));
                }
                checked += 1;
            }
        }
        // the resolution of the sum of the simples has a nonzero first differential
        let a = alg(name);
        let ss = simples(&a).unwrap();
        let top = Module::direct_sum(&ss.iter().collect::<Vec<_>>());
        let res = Resolution::of_module(&top);
        let (_, f) = res.truncation(2).map_err(|e| e.to_string())?;
        if let Some(bad) = corrupted(&f) {
            if pc_check(&bad, 2) {
                return Err(format!("{name}: corrupted differential passes"));
            }
            controls += 1;
        }
    }
    if controls == 0 {
        return Err("no negative control was constructed".into());
    }
    Ok(format!("{checked} certificates pass, {controls} corrupted controls rejected"))
}

fn duality() -> Outcome {
    let mut total = 0;
    for name in MAIN_SET {
        let a = alg(name);
        let mut r = rng(SEED + 3);
        for k in 0..20 {
            let m = random_module(&a, &mut r, 4).unwrap();
            let n = random_module(&a, &mut r, 4).unwrap();
            let h = module_hom(&m, &n).map_err(|e| e.to_string())?.dim();
            let hd = module_hom(&k_dual(&n), &k_dual(&m)).map_err(|e| e.to_string())?.dim();
            if h != hd {
                return Err(format!("{name} pair {k}: Hom {h}, dual Hom {hd}"));
            }
            total += 1;
        }
    }
    Ok(format!("{total} pairs"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("main theorem", main_theorem),
        ("Ext algebra of dual numbers", ext_algebra),
        ("Cauchy and phantomless certificates", cauchy_phantomless),
        ("triangles and long exact sequences", triangles),
        ("fraction calculus", fractions),
        ("abelian completion of p-groups", pgroups),
        ("singularity category", singularity),
        ("morphic suite", morphic),
        ("pseudo-coherence", pseudo_coherence),
        ("duality", duality),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match run() {
            Ok(msg) => println!("criterion {:>2} PASS {name}: {msg} [{:.1?}]", i + 1, t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {msg} [{:.1?}]", i + 1, t.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
