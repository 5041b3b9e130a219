//! Sequential completion of perfect complexes.
//!
//! A [`CauchySeq`] is generated by a closed set of rules, each carrying a
//! co-connectivity certificate `c`: the cone of `X_i -> X_{i+1}` has
//! cohomology (equivalently, for projective terms, a homotopy model) in
//! degrees `≤ c - i` once `i ≥ start`. Hom indices are derived from it:
//! `Hom(C, X_i)` is stable for `i ≥ c - lo(C) + 2`, and restriction
//! `Hom(X_{i+1}, Ŷ) -> Hom(X_i, Ŷ)` is bijective for `i ≥ c - a(Ŷ) + 2`.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::AlgError;
use crate::complexes::{cone, ChainMap, Complex, ComplexError};
use crate::derived::{dbhom_with, db_lift, khom, lift_to_resolution, DbHom, DerivedError, HomSpace, Resolution, ShiftedResolution};
use crate::exactla::{LaError, Mat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompletionError {
    #[error("not Cauchy within horizon {0}")]
    NotCauchy(usize),
    #[error("certificate violated: {0}")]
    Certificate(String),
    #[error("sequence has no stabilization certificate")]
    Uncertified,
    #[error("cofinal map must satisfy f(i) ≥ i and be nondecreasing")]
    NotCofinal,
    #[error("morphism is not strictly natural at index {0}")]
    NotStrict(usize),
    #[error("morphism is not natural up to homotopy at index {0}")]
    NotNatural(usize),
    #[error("morphism is not eventually invertible: {0}")]
    NotInvertible(String),
    #[error("endpoints do not compose")]
    NotComposable,
    #[error("index {0} lies beyond the computed representative index {1}")]
    IndexBeyond(usize, usize),
    #[error("tower fails to stabilize within {0}")]
    NoStabilization(usize),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Derived(#[from] DerivedError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    La(#[from] LaError),
}

type R<T> = Result<T, CompletionError>;

// ------------------------------------------------------------ reindexing

/// Cofinal reindexing maps with `f(i) ≥ i`, nondecreasing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cofinal {
    /// `f(i) = a i + b`, `a ≥ 1`.
    Affine { a: usize, b: usize },
    /// `f(i) = max(i, floor) + k`.
    FloorShift { floor: usize, k: usize },
}

impl Cofinal {
    pub fn identity() -> Cofinal {
        Cofinal::Affine { a: 1, b: 0 }
    }
    pub fn shift(k: usize) -> Cofinal {
        Cofinal::Affine { a: 1, b: k }
    }
    pub fn apply(&self, i: usize) -> usize {
        match *self {
            Cofinal::Affine { a, b } => a * i + b,
            Cofinal::FloorShift { floor, k } => i.max(floor) + k,
        }
    }
    /// Lower bound on `f(i) - i`.
    pub fn min_excess(&self) -> usize {
        match *self {
            Cofinal::Affine { b, .. } => b,
            Cofinal::FloorShift { k, .. } => k,
        }
    }
    pub fn validate(&self) -> R<()> {
        match *self {
            Cofinal::Affine { a, .. } if a == 0 => Err(CompletionError::NotCofinal),
            _ => Ok(()),
        }
    }
    pub fn is_identity(&self) -> bool {
        *self == Cofinal::identity()
    }
}

// ------------------------------------------------------------ sequences

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// `None`: cones of the structure maps are acyclic from `start` on.
    pub coconn: Option<i64>,
    pub start: usize,
    /// Cohomology window of the colimit; `None` when it vanishes.
    pub window: Option<(i64, i64)>,
}

impl Certificate {
    /// Index past which `Hom(C, X_i)` is stable for `C` with terms from degree `c_lo`.
    pub fn compact_index(&self, c_lo: Option<i64>) -> usize {
        match (self.coconn, c_lo) {
            (Some(c), Some(lo)) => (c - lo + 2).max(self.start as i64).max(0) as usize,
            _ => self.start,
        }
    }

    /// Index past which restriction `Hom(X_{i+1}, Ŷ) -> Hom(X_i, Ŷ)` is
    /// bijective, for `Ŷ` with cohomology from degree `a`.
    pub fn outer_index(&self, a: Option<i64>) -> usize {
        match (self.coconn, a) {
            (Some(c), Some(a)) => (c - a + 2).max(self.start as i64).max(0) as usize,
            _ => self.start,
        }
    }
}

fn union(a: Option<(i64, i64)>, b: Option<(i64, i64)>) -> Option<(i64, i64)> {
    match (a, b) {
        (Some(x), Some(y)) => Some((x.0.min(y.0), x.1.max(y.1))),
        (x, None) => x,
        (None, y) => y,
    }
}

fn max_coconn(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Clone, Debug)]
pub enum Rule {
    Truncation(Arc<Resolution>),
    Constant(Complex),
    Shifted(Arc<CauchySeq>, i64),
    Coned(Arc<SeqMorphism>),
    DirectSum(Arc<CauchySeq>, Arc<CauchySeq>),
    Reindexed(Arc<CauchySeq>, Cofinal),
    /// `Z, Z ⊕ Z, Z, …` with inclusion and projection; never Cauchy unless `Z ≃ 0`.
    Alternating(Complex),
}

/// A sequence `X_0 -> X_1 -> …` of complexes given by a rule.
#[derive(Debug)]
pub struct CauchySeq {
    rule: Rule,
    cert: Option<Certificate>,
    terms: Mutex<BTreeMap<usize, Complex>>,
}

impl CauchySeq {
    fn build(rule: Rule, cert: Option<Certificate>) -> Arc<CauchySeq> {
        Arc::new(CauchySeq { rule, cert, terms: Mutex::new(BTreeMap::new()) })
    }

    /// `X_i = σ_{≥-i} P` for a projective resolution `P` of `m`.
    pub fn truncation(m: &Complex) -> Arc<CauchySeq> {
        Self::truncation_of(Resolution::new(m))
    }

    pub fn truncation_of(res: Arc<Resolution>) -> Arc<CauchySeq> {
        let window = res.target().cohomology_window();
        Self::build(Rule::Truncation(res), Some(Certificate { coconn: Some(0), start: 0, window }))
    }

    pub fn constant(z: &Complex) -> Arc<CauchySeq> {
        let window = z.cohomology_window();
        Self::build(Rule::Constant(z.clone()), Some(Certificate { coconn: None, start: 0, window }))
    }

    pub fn shifted(x: &Arc<CauchySeq>, m: i64) -> Arc<CauchySeq> {
        let cert = x.cert.map(|c| Certificate {
            coconn: c.coconn.map(|v| v - m),
            start: c.start,
            window: c.window.map(|(a, b)| (a - m, b - m)),
        });
        Self::build(Rule::Shifted(x.clone(), m), cert)
    }

    pub fn direct_sum(a: &Arc<CauchySeq>, b: &Arc<CauchySeq>) -> Arc<CauchySeq> {
        let cert = match (a.cert, b.cert) {
            (Some(x), Some(y)) => Some(Certificate {
                coconn: max_coconn(x.coconn, y.coconn),
                start: x.start.max(y.start),
                window: union(x.window, y.window),
            }),
            _ => None,
        };
        Self::build(Rule::DirectSum(a.clone(), b.clone()), cert)
    }

    pub fn reindexed(x: &Arc<CauchySeq>, f: Cofinal) -> R<Arc<CauchySeq>> {
        f.validate()?;
        let cert = x.cert.map(|c| Certificate { coconn: c.coconn.map(|v| v - f.min_excess() as i64), start: c.start, window: c.window });
        Ok(Self::build(Rule::Reindexed(x.clone(), f), cert))
    }

    pub fn alternating(z: &Complex) -> Arc<CauchySeq> {
        Self::build(Rule::Alternating(z.clone()), None)
    }

    fn coned(phi: &Arc<SeqMorphism>) -> Arc<CauchySeq> {
        let (x, y) = (&phi.source, &phi.target);
        let cert = match (x.cert, y.cert) {
            (Some(a), Some(b)) => {
                let c = match (a.coconn, b.coconn) {
                    (None, None) => None,
                    (u, v) => Some(max_coconn(u, v).unwrap() + 1),
                };
                Some(Certificate {
                    coconn: c,
                    start: a.start.max(b.start),
                    window: union(b.window, a.window.map(|(lo, hi)| (lo - 1, hi - 1))),
                })
            }
            _ => None,
        };
        Self::build(Rule::Coned(phi.clone()), cert)
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }
    pub fn certificate(&self) -> Option<Certificate> {
        self.cert
    }
    fn require_cert(&self) -> R<Certificate> {
        self.cert.ok_or(CompletionError::Uncertified)
    }

    pub fn algebra(&self) -> Arc<crate::algebra::Algebra> {
        match &self.rule {
            Rule::Truncation(r) => r.target().algebra().clone(),
            Rule::Constant(z) | Rule::Alternating(z) => z.algebra().clone(),
            Rule::Shifted(x, _) | Rule::Reindexed(x, _) | Rule::DirectSum(x, _) => x.algebra(),
            Rule::Coned(phi) => phi.target.algebra(),
        }
    }

    pub fn term(&self, i: usize) -> R<Complex> {
        if let Some(t) = self.terms.lock().unwrap().get(&i) {
            return Ok(t.clone());
        }
        let t = match &self.rule {
            Rule::Truncation(res) => res.truncation(i)?.0,
            Rule::Constant(z) => z.clone(),
            Rule::Shifted(x, m) => x.term(i)?.shift(*m),
            Rule::DirectSum(a, b) => a.term(i)?.direct_sum(&b.term(i)?),
            Rule::Reindexed(x, f) => x.term(f.apply(i))?,
            Rule::Coned(phi) => cone(&phi.component(i)?).complex,
            Rule::Alternating(z) => {
                if i % 2 == 0 {
                    z.clone()
                } else {
                    z.direct_sum(z)
                }
            }
        };
        self.terms.lock().unwrap().insert(i, t.clone());
        Ok(t)
    }

    /// Structure map `X_i -> X_{i+1}`.
    pub fn map(&self, i: usize) -> R<ChainMap> {
        let (s, t) = (self.term(i)?, self.term(i + 1)?);
        let f = match &self.rule {
            Rule::Truncation(_) => identity_on_overlap(&s, &t),
            Rule::Constant(_) => ChainMap::identity(&s),
            Rule::Shifted(x, m) => x.map(i)?.shift(*m).retarget(&s, &t),
            Rule::DirectSum(a, b) => block_sum(&a.map(i)?, &b.map(i)?, &s, &t),
            Rule::Reindexed(x, f) => x.map_range(f.apply(i), f.apply(i + 1))?.retarget(&s, &t),
            Rule::Coned(phi) => {
                phi.check_strict(i)?;
                let (fx, fy) = (phi.source.map(i)?, phi.target.map(i)?);
                cone_map(&fx, &fy, &s, &t)
            }
            Rule::Alternating(z) => {
                let p = z.p();
                let lo = z.window().map_or(0, |w| w.0);
                let maps: Vec<Mat> = z
                    .window()
                    .map_or(vec![], |(lo, hi)| (lo..=hi).map(|n| {
                        let d = z.dim_at(n);
                        let mut m = if i % 2 == 0 { Mat::zeros(p, d, 2 * d) } else { Mat::zeros(p, 2 * d, d) };
                        for k in 0..d {
                            m.set(k, k, 1);
                        }
                        m
                    }).collect());
                ChainMap::from_window(&s, &t, lo, maps)
            }
        };
        Ok(f)
    }

    /// Composite `X_i -> X_j` for `i ≤ j`.
    pub fn map_range(&self, i: usize, j: usize) -> R<ChainMap> {
        let mut f = ChainMap::identity(&self.term(i)?);
        for k in i..j {
            f = f.then(&self.map(k)?);
        }
        Ok(f)
    }

    /// Checks the co-connectivity certificate at index `i`: the cone of
    /// `X_i -> X_{i+1}` has no cohomology above `c - i`.
    pub fn verify_certificate(&self, i: usize) -> R<bool> {
        let cert = self.require_cert()?;
        if i < cert.start {
            return Ok(true);
        }
        let c = cone(&self.map(i)?).complex;
        Ok(match cert.coconn {
            None => c.is_acyclic(),
            Some(v) => c.cohomology_window().map_or(true, |w| w.1 <= v - i as i64),
        })
    }
}

fn identity_on_overlap(s: &Complex, t: &Complex) -> ChainMap {
    let p = s.p();
    let lo = s.window().map_or(0, |w| w.0);
    let maps = s.window().map_or(vec![], |(lo, hi)| (lo..=hi).map(|n| Mat::identity(p, s.dim_at(n))).collect());
    ChainMap::from_window(s, t, lo, maps)
}

fn block_sum(f: &ChainMap, g: &ChainMap, s: &Complex, t: &Complex) -> ChainMap {
    let p = s.p();
    let lo = s.window().map_or(0, |w| w.0);
    let maps = s.window().map_or(vec![], |(lo, hi)| {
        (lo..=hi)
            .map(|n| {
                let (a, b) = (f.at(n), g.at(n));
                let mut m = Mat::zeros(p, s.dim_at(n), t.dim_at(n));
                m.set_block(0, 0, &a);
                m.set_block(a.rows(), a.cols(), &b);
                m
            })
            .collect()
    });
    ChainMap::from_window(s, t, lo, maps)
}

// cone(φ_i) -> cone(φ_{i+1}) from the structure maps of source and target
fn cone_map(fx: &ChainMap, fy: &ChainMap, s: &Complex, t: &Complex) -> ChainMap {
    let p = s.p();
    let lo = s.window().map_or(0, |w| w.0);
    let maps = s.window().map_or(vec![], |(lo, hi)| {
        (lo..=hi)
            .map(|n| {
                let (a, b) = (fx.at(n + 1), fy.at(n));
                let mut m = Mat::zeros(p, s.dim_at(n), t.dim_at(n));
                m.set_block(0, 0, &a);
                m.set_block(a.rows(), a.cols(), &b);
                m
            })
            .collect()
    });
    ChainMap::from_window(s, t, lo, maps)
}

// ------------------------------------------------------------ morphisms

#[derive(Clone)]
pub enum MorphKind {
    Identity,
    Zero,
    /// Lift of a chain map `M -> N` between truncation sequences.
    Induced(ChainMap),
    /// `f_X: X -> X_f`, components `X_i -> X_{f(i)}`.
    Reindex(Cofinal),
    Compose(Arc<SeqMorphism>, Arc<SeqMorphism>),
    Sum(Arc<SeqMorphism>, Arc<SeqMorphism>),
    Scale(Arc<SeqMorphism>, u32),
    Shift(Arc<SeqMorphism>, i64),
    ConeInclusion(Arc<SeqMorphism>),
    ConeProjection(Arc<SeqMorphism>),
    /// Components produced by a solver (fraction witnesses).
    Family(Arc<dyn Fn(usize) -> R<ChainMap> + Send + Sync>),
}

impl std::fmt::Debug for MorphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            MorphKind::Identity => "Identity",
            MorphKind::Zero => "Zero",
            MorphKind::Induced(_) => "Induced",
            MorphKind::Reindex(_) => "Reindex",
            MorphKind::Compose(..) => "Compose",
            MorphKind::Sum(..) => "Sum",
            MorphKind::Scale(..) => "Scale",
            MorphKind::Shift(..) => "Shift",
            MorphKind::ConeInclusion(_) => "ConeInclusion",
            MorphKind::ConeProjection(_) => "ConeProjection",
            MorphKind::Family(_) => "Family",
        };
        write!(f, "{name}")
    }
}

/// A morphism of sequences given by components `φ_i: X_i -> Y_i`.
#[derive(Debug)]
pub struct SeqMorphism {
    pub source: Arc<CauchySeq>,
    pub target: Arc<CauchySeq>,
    kind: MorphKind,
    cache: Mutex<BTreeMap<usize, ChainMap>>,
}

impl SeqMorphism {
    fn build(source: &Arc<CauchySeq>, target: &Arc<CauchySeq>, kind: MorphKind) -> Arc<SeqMorphism> {
        Arc::new(SeqMorphism { source: source.clone(), target: target.clone(), kind, cache: Mutex::new(BTreeMap::new()) })
    }

    pub fn identity(x: &Arc<CauchySeq>) -> Arc<SeqMorphism> {
        Self::build(x, x, MorphKind::Identity)
    }

    pub fn zero(x: &Arc<CauchySeq>, y: &Arc<CauchySeq>) -> Arc<SeqMorphism> {
        Self::build(x, y, MorphKind::Zero)
    }

    /// Componentwise lifts of `f: M -> N` between the truncation sequences of `M` and `N`.
    pub fn induced(x: &Arc<CauchySeq>, y: &Arc<CauchySeq>, f: &ChainMap) -> R<Arc<SeqMorphism>> {
        match (&x.rule, &y.rule) {
            (Rule::Truncation(_), Rule::Truncation(_)) => Ok(Self::build(x, y, MorphKind::Induced(f.clone()))),
            _ => Err(CompletionError::Mismatch("induced morphisms need truncation sequences".into())),
        }
    }

    /// `f_X: X -> X_f` together with `X_f`.
    pub fn reindex(x: &Arc<CauchySeq>, f: Cofinal) -> R<(Arc<CauchySeq>, Arc<SeqMorphism>)> {
        let xf = CauchySeq::reindexed(x, f)?;
        let m = Self::build(x, &xf, MorphKind::Reindex(f));
        Ok((xf, m))
    }

    pub fn compose(first: &Arc<SeqMorphism>, second: &Arc<SeqMorphism>) -> R<Arc<SeqMorphism>> {
        if !Arc::ptr_eq(&first.target, &second.source) {
            return Err(CompletionError::NotComposable);
        }
        Ok(Self::build(&first.source, &second.target, MorphKind::Compose(first.clone(), second.clone())))
    }

    pub fn sum(a: &Arc<SeqMorphism>, b: &Arc<SeqMorphism>) -> R<Arc<SeqMorphism>> {
        if !Arc::ptr_eq(&a.source, &b.source) || !Arc::ptr_eq(&a.target, &b.target) {
            return Err(CompletionError::NotComposable);
        }
        Ok(Self::build(&a.source, &a.target, MorphKind::Sum(a.clone(), b.clone())))
    }

    pub fn scale(a: &Arc<SeqMorphism>, s: u32) -> Arc<SeqMorphism> {
        Self::build(&a.source, &a.target, MorphKind::Scale(a.clone(), s))
    }

    pub fn shift(a: &Arc<SeqMorphism>, m: i64, source: &Arc<CauchySeq>, target: &Arc<CauchySeq>) -> Arc<SeqMorphism> {
        Self::build(source, target, MorphKind::Shift(a.clone(), m))
    }

    pub fn family(x: &Arc<CauchySeq>, y: &Arc<CauchySeq>, f: Arc<dyn Fn(usize) -> R<ChainMap> + Send + Sync>) -> Arc<SeqMorphism> {
        Self::build(x, y, MorphKind::Family(f))
    }

    pub fn kind(&self) -> &MorphKind {
        &self.kind
    }

    pub fn component(&self, i: usize) -> R<ChainMap> {
        if let Some(c) = self.cache.lock().unwrap().get(&i) {
            return Ok(c.clone());
        }
        let (s, t) = (self.source.term(i)?, self.target.term(i)?);
        let c = match &self.kind {
            MorphKind::Identity => ChainMap::identity(&s),
            MorphKind::Zero => ChainMap::zero(&s, &t),
            MorphKind::Induced(f) => {
                let (Rule::Truncation(rx), Rule::Truncation(ry)) = (&self.source.rule, &self.target.rule) else {
                    unreachable!("checked at construction")
                };
                let (_, aug) = rx.truncation(i)?;
                let g = aug.then(f);
                let view = ShiftedResolution { res: ry.clone(), shift: 0 };
                let lifted = lift_to_resolution(&g, &view)?;
                let incl = identity_on_overlap(lifted.target(), &t);
                lifted.then(&incl).retarget(&s, &t)
            }
            MorphKind::Reindex(f) => self.source.map_range(i, f.apply(i))?.retarget(&s, &t),
            MorphKind::Compose(a, b) => a.component(i)?.then(&b.component(i)?),
            MorphKind::Sum(a, b) => a.component(i)?.add(&b.component(i)?),
            MorphKind::Scale(a, k) => a.component(i)?.scale(*k),
            MorphKind::Shift(a, m) => a.component(i)?.shift(*m).retarget(&s, &t),
            MorphKind::ConeInclusion(phi) => cone(&phi.component(i)?).inclusion.retarget(&s, &t),
            MorphKind::ConeProjection(phi) => cone(&phi.component(i)?).projection.retarget(&s, &t),
            MorphKind::Family(f) => f(i)?.retarget(&s, &t),
        };
        self.cache.lock().unwrap().insert(i, c.clone());
        Ok(c)
    }

    /// `φ_{i+1} ∘ ι = ι ∘ φ_i` on the nose.
    pub fn is_strict_at(&self, i: usize) -> R<bool> {
        let a = self.source.map(i)?.then(&self.component(i + 1)?);
        let b = self.component(i)?.then(&self.target.map(i)?);
        let w = self.source.term(i)?.window();
        Ok(w.map_or(true, |(lo, hi)| (lo..=hi).all(|n| a.at(n) == b.at(n))))
    }

    fn check_strict(&self, i: usize) -> R<()> {
        if self.is_strict_at(i)? {
            Ok(())
        } else {
            Err(CompletionError::NotStrict(i))
        }
    }

    /// Naturality square at `i` commutes up to homotopy.
    pub fn is_natural_at(&self, i: usize) -> R<bool> {
        let a = self.source.map(i)?.then(&self.component(i + 1)?);
        let b = self.component(i)?.then(&self.target.map(i)?);
        let h = khom(&self.source.term(i)?, &self.target.term(i + 1)?)?;
        Ok(h.is_null_homotopic(&a.sub(&b))?)
    }

    /// Matrix of `Hom(C, X_i) -> Hom(C, Y_i)` in the khom bases.
    pub fn on_compact(&self, c: &Complex, i: usize) -> R<(Mat, HomSpace, HomSpace)> {
        let hx = khom(c, &self.source.term(i)?)?;
        let hy = khom(c, &self.target.term(i)?)?;
        let phi = self.component(i)?;
        let m = hy.map_matrix(&hx, |f| f.then(&phi))?;
        Ok((m, hx, hy))
    }

    /// Smallest index from which `Hom(C, φ_i)` is bijective for every `C`
    /// in the test set, checked up to `horizon`.
    pub fn eventually_invertible(&self, compacts: &[Complex], horizon: usize) -> R<usize> {
        let mut worst = 0;
        for c in compacts {
            let mut first_good = None;
            for i in 0..=horizon {
                let (m, hx, hy) = self.on_compact(c, i)?;
                let ok = hx.dim() == hy.dim() && m.rank() == hx.dim();
                match (ok, first_good) {
                    (true, None) => first_good = Some(i),
                    (false, _) => first_good = None,
                    _ => {}
                }
            }
            let n = first_good.ok_or_else(|| CompletionError::NotInvertible(format!("Hom(C, φ_{horizon}) is not bijective")))?;
            worst = worst.max(n);
        }
        Ok(worst)
    }
}

/// A morphism of truncation sequences concentrated in the bottom degree `-i`
/// of each term. Each component is a chain map that the next structure map
/// kills up to homotopy, so the morphism vanishes in the completion while its
/// components are typically nonzero in `K`. `pick` selects among the
/// admissible bottom maps.
pub fn bottom_ghost(x: &Arc<CauchySeq>, y: &Arc<CauchySeq>, pick: usize) -> R<Arc<SeqMorphism>> {
    if !matches!((&x.rule, &y.rule), (Rule::Truncation(_), Rule::Truncation(_))) {
        return Err(CompletionError::Mismatch("ghosts need truncation sequences".into()));
    }
    let a = y.require_cert()?.window.map_or(0, |w| w.0);
    let i0 = (1 - a).max(0) as usize;
    let (xs, ys) = (x.clone(), y.clone());
    let f = move |i: usize| -> R<ChainMap> {
        let (s, t) = (xs.term(i)?, ys.term(i)?);
        let deg = -(i as i64);
        if i < i0 || s.dim_at(deg) == 0 || t.dim_at(deg) == 0 {
            return Ok(ChainMap::zero(&s, &t));
        }
        let hb = crate::algebra::module_hom(&s.term(deg), &t.term(deg))?;
        let d = t.diff(deg);
        let p = s.p();
        // coefficients c with (Σ c_k u_k) d = 0
        let rows: Vec<Vec<u32>> = hb.mats.iter().map(|u| u.mul(&d).flatten()).collect();
        let width = s.dim_at(deg) * d.cols();
        let mut sys = Mat::zeros(p, rows.len(), width);
        for (r, v) in rows.iter().enumerate() {
            for (c, &x) in v.iter().enumerate() {
                sys.set(r, c, x);
            }
        }
        let ker = sys.left_kernel();
        if ker.rows() == 0 {
            return Ok(ChainMap::zero(&s, &t));
        }
        let u = hb.combine(p, ker.row(pick % ker.rows()));
        let (lo, hi) = s.window().expect("nonzero term");
        let maps = (lo..=hi).map(|n| if n == deg { u.clone() } else { Mat::zeros(p, s.dim_at(n), t.dim_at(n)) }).collect();
        Ok(ChainMap::from_window(&s, &t, lo, maps))
    };
    Ok(SeqMorphism::family(x, y, Arc::new(f)))
}

// ------------------------------------------------------------ Cauchy test

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CauchyIndex {
    pub certified: Option<usize>,
    pub empirical: usize,
}

fn hom_step_bijective(c: &Complex, x: &CauchySeq, i: usize) -> R<bool> {
    let a = khom(c, &x.term(i)?)?;
    let b = khom(c, &x.term(i + 1)?)?;
    if a.dim() != b.dim() {
        return Ok(false);
    }
    let f = x.map(i)?;
    let m = b.map_matrix(&a, |g| g.then(&f))?;
    Ok(m.rank() == a.dim())
}

/// Per compact `C`: the smallest `n` with `Hom(C, X_i) -> Hom(C, X_{i+1})`
/// bijective for `n ≤ i ≤ horizon`, and the certified index.
pub fn is_cauchy(x: &CauchySeq, compacts: &[Complex], horizon: usize) -> R<Vec<CauchyIndex>> {
    let mut out = Vec::new();
    for c in compacts {
        let certified = x.cert.map(|k| k.compact_index(c.window().map(|w| w.0)));
        let h = horizon.max(certified.unwrap_or(0) + 1);
        let mut empirical = h + 1;
        for i in (0..=h).rev() {
            if hom_step_bijective(c, x, i)? {
                empirical = i;
            } else {
                break;
            }
        }
        if empirical > h {
            return Err(CompletionError::NotCauchy(h));
        }
        if let Some(n) = certified {
            if empirical > n {
                return Err(CompletionError::Certificate(format!("empirical index {empirical} exceeds certified {n}")));
            }
        }
        out.push(CauchyIndex { certified, empirical });
    }
    Ok(out)
}

// ------------------------------------------------------------ homs

/// `colim_j Hom(C, Y_j)`, represented at a certified index.
#[derive(Clone, Debug)]
pub struct ColimHom {
    pub index: usize,
    pub space: HomSpace,
}

pub fn colim_hom(c: &Complex, y: &CauchySeq) -> R<ColimHom> {
    let cert = y.require_cert()?;
    let n = cert.compact_index(c.window().map(|w| w.0));
    if !hom_step_bijective(c, y, n)? {
        return Err(CompletionError::Certificate(format!("Hom(C, Y_{n}) -> Hom(C, Y_{}) is not bijective", n + 1)));
    }
    Ok(ColimHom { index: n, space: khom(c, &y.term(n)?)? })
}

/// `lim_i colim_j Hom(X_i, Y_j)` represented by `Hom_K(X_i, Y_j)` at a pair of
/// indices past both certified bounds.
#[derive(Clone, Debug)]
pub struct CompletionHom {
    pub i: usize,
    pub j: usize,
    pub space: HomSpace,
    pub x: Arc<CauchySeq>,
    pub y: Arc<CauchySeq>,
}

impl CompletionHom {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Class of a representative `X_a -> Y_b` with `a ≥ i`.
    pub fn class_of(&self, a: usize, b: usize, f: &ChainMap) -> R<Vec<u32>> {
        if a < self.i {
            return Err(CompletionError::IndexBeyond(a, self.i));
        }
        let restricted = self.x.map_range(self.i, a)?.then(f);
        if b <= self.j {
            let g = restricted.then(&self.y.map_range(b, self.j)?);
            return Ok(self.space.class_of(&g)?);
        }
        // push the basis up to Y_b instead
        let far = khom(&self.x.term(self.i)?, &self.y.term(b)?)?;
        let push = self.y.map_range(self.j, b)?;
        let up = far.map_matrix(&self.space, |h| h.then(&push))?;
        up.solve_left(&far.class_of(&restricted)?)?
            .ok_or_else(|| CompletionError::Certificate(format!("Hom(X_{}, Y_{}) is not reached from Y_{}", self.i, b, self.j)))
    }

    /// The same hom at later indices `(a, b)`, with the coordinate change
    /// from this representation to the new one.
    pub fn transfer(&self, a: usize, b: usize) -> R<(CompletionHom, Mat)> {
        let b = b.max(self.j).max(inner_index(&self.x, &self.y.require_cert()?, a)?);
        let next = completion_hom_at(&self.x, &self.y, a, b, false)?;
        let yb = self.y.term(b)?;
        let mid = khom(&self.x.term(self.i)?, &yb)?;
        let push = self.y.map_range(self.j, b)?;
        let pmat = mid.map_matrix(&self.space, |h| h.then(&push))?;
        let inc = self.x.map_range(self.i, a)?;
        let rmat = mid.map_matrix(&next.space, |h| inc.then(h))?;
        let rinv = rmat
            .inverse()
            .ok_or_else(|| CompletionError::Certificate(format!("restriction from X_{a} to X_{} is not bijective", self.i)))?;
        Ok((next, pmat.mul(&rinv)))
    }

    /// Representative `X_i -> Y_j` of a coordinate vector.
    pub fn representative(&self, c: &[u32]) -> ChainMap {
        self.space.combine(c)
    }
}

/// Certified index pair `(i*, j*)` for `Hom(X̂, Ŷ)`.
pub fn completion_indices(x: &CauchySeq, y: &CauchySeq) -> R<(usize, usize)> {
    let cx = x.require_cert()?;
    let cy = y.require_cert()?;
    let i = cx.outer_index(cy.window.map(|w| w.0));
    let j = inner_index(x, &cy, i)?;
    Ok((i, j))
}

fn inner_index(x: &CauchySeq, cy: &Certificate, i: usize) -> R<usize> {
    // X_{i+1} is also mapped at the same j during verification
    let a = cy.compact_index(x.term(i)?.window().map(|w| w.0));
    let b = cy.compact_index(x.term(i + 1)?.window().map(|w| w.0));
    Ok(a.max(b))
}

pub fn completion_hom(x: &Arc<CauchySeq>, y: &Arc<CauchySeq>) -> R<CompletionHom> {
    let (i, j) = completion_indices(x, y)?;
    completion_hom_at(x, y, i, j, true)
}

/// Computes at `(i, j)` after checking both are past the certified bounds;
/// `verify` re-checks both limits one step further.
pub fn completion_hom_at(x: &Arc<CauchySeq>, y: &Arc<CauchySeq>, i: usize, j: usize, verify: bool) -> R<CompletionHom> {
    let (ci, _) = completion_indices(x, y)?;
    let cy = y.require_cert()?;
    if i < ci || j < inner_index(x, &cy, i)? {
        return Err(CompletionError::Certificate(format!("indices ({i}, {j}) precede the certified bounds")));
    }
    let xi = x.term(i)?;
    let yj = y.term(j)?;
    let space = khom(&xi, &yj)?;
    if verify {
        // inner colimit: Hom(X_i, Y_j) -> Hom(X_i, Y_{j+1}) bijective
        if !hom_step_bijective(&xi, y, j)? {
            return Err(CompletionError::Certificate(format!("inner colimit not reached at j = {j}")));
        }
        // outer limit: restriction Hom(X_{i+1}, Y_j) -> Hom(X_i, Y_j) bijective
        let next = khom(&x.term(i + 1)?, &yj)?;
        let inc = x.map(i)?;
        let m = space.map_matrix(&next, |f| inc.then(f))?;
        if next.dim() != space.dim() || m.rank() != space.dim() {
            return Err(CompletionError::NoStabilization(i + 1));
        }
    }
    Ok(CompletionHom { i, j, space, x: x.clone(), y: y.clone() })
}

/// `g ∘ f` for `f ∈ Hom(X̂, Ŷ)` at `(i, j)` and `g ∈ Hom(Ŷ, Ŵ)` at `(j', k)`
/// with `j' ≤ j`; returns the composite `X_i -> W_k'` and `k'`.
pub fn completion_compose(f: &CompletionHom, fc: &[u32], g: &CompletionHom, gc: &[u32]) -> R<(ChainMap, usize)> {
    let (gj, k) = restrict_along(g, gc, f.j)?;
    Ok((f.representative(fc).then(&gj), k))
}

// Re-expresses a class of `g` on `Y_b` for `b ≥ g.i`: the map `Y_b -> W_k`
// restricting to `g` (pushed to `W_k`), with `k` past the inner bound for `Y_b`.
fn restrict_along(g: &CompletionHom, gc: &[u32], b: usize) -> R<(ChainMap, usize)> {
    if b < g.i {
        return Err(CompletionError::IndexBeyond(g.i, b));
    }
    let rep = g.representative(gc);
    if b == g.i {
        return Ok((rep, g.j));
    }
    let k = g.j.max(inner_index(&g.x, &g.y.require_cert()?, b)?);
    let wk = g.y.term(k)?;
    let pushed = rep.then(&g.y.map_range(g.j, k)?);
    let hb = khom(&g.x.term(b)?, &wk)?;
    let ha = khom(&g.x.term(g.i)?, &wk)?;
    let inc = g.x.map_range(g.i, b)?;
    let r = ha.map_matrix(&hb, |h| inc.then(h))?;
    let c = r
        .solve_left(&ha.class_of(&pushed)?)?
        .ok_or_else(|| CompletionError::Certificate("restriction not onto at the chosen indices".into()))?;
    Ok((hb.combine(&c), k))
}

// ------------------------------------------------------------ fractions

/// A left fraction `σ⁻¹ α: X -> Y` with `α: X -> Y'` and `σ: Y -> Y'`.
#[derive(Clone, Debug)]
pub struct Fraction {
    pub alpha: Arc<SeqMorphism>,
    pub sigma: Arc<SeqMorphism>,
}

impl Fraction {
    pub fn new(alpha: Arc<SeqMorphism>, sigma: Arc<SeqMorphism>) -> R<Fraction> {
        if !Arc::ptr_eq(&alpha.target, &sigma.target) {
            return Err(CompletionError::NotComposable);
        }
        Ok(Fraction { alpha, sigma })
    }
    pub fn plain(alpha: Arc<SeqMorphism>) -> Fraction {
        let sigma = SeqMorphism::identity(&alpha.target);
        Fraction { alpha, sigma }
    }
    pub fn source(&self) -> &Arc<CauchySeq> {
        &self.alpha.source
    }
    pub fn target(&self) -> &Arc<CauchySeq> {
        &self.sigma.source
    }
}

/// The map `colim Hom(C, X) -> colim Hom(C, Y)` induced by a fraction, at
/// index `i` (row convention: `v -> v A S⁻¹`).
pub fn yoneda_matrix(f: &Fraction, c: &Complex, i: usize) -> R<Mat> {
    let (a, _, _) = f.alpha.on_compact(c, i)?;
    let (s, _, _) = f.sigma.on_compact(c, i)?;
    let inv = s.inverse().ok_or_else(|| CompletionError::NotInvertible(format!("σ is not bijective on Hom(C, -) at index {i}")))?;
    Ok(a.mul(&inv))
}

fn yoneda_index(fs: &[&Fraction], c: &Complex) -> R<usize> {
    let lo = c.window().map(|w| w.0);
    let mut i = 0;
    for f in fs {
        for s in [&f.alpha.source, &f.alpha.target, &f.sigma.source] {
            i = i.max(s.require_cert()?.compact_index(lo));
        }
    }
    Ok(i)
}

/// Equality through the induced maps on `colim Hom(C, -)` for each test object.
pub fn yoneda_equal(f: &Fraction, g: &Fraction, compacts: &[Complex]) -> R<bool> {
    for c in compacts {
        let i = yoneda_index(&[f, g], c)?;
        if yoneda_matrix(f, c, i)? != yoneda_matrix(g, c, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The element of `lim_i colim_j Hom(X_i, Y_j)` represented by `σ⁻¹α`:
/// coordinates of the unique class `z` with `σ z = α` at the given pair.
pub fn fraction_element(f: &Fraction, at: &CompletionHom) -> R<Vec<u32>> {
    let (i, j) = (at.i, at.j);
    let yp = &f.alpha.target;
    let xi = f.source().term(i)?;
    let (_, jp) = completion_indices(f.source(), yp)?;
    let jj = j.max(jp).max(i);
    let hy = khom(&xi, &f.target().term(jj)?)?;
    let hyp = khom(&xi, &yp.term(jj)?)?;
    let s = f.sigma.component(jj)?;
    let m = hyp.map_matrix(&hy, |z| z.then(&s))?;
    let alpha = f.alpha.component(i)?.then(&yp.map_range(i, jj)?);
    let target = hyp.class_of(&alpha)?;
    let z = m.solve_left(&target)?.ok_or_else(|| CompletionError::NotInvertible("σ does not act bijectively on the colimit".into()))?;
    // transport from Y_jj back to the representative index j
    let rep = hy.combine(&z);
    if jj == j {
        return Ok(at.space.class_of(&rep)?);
    }
    let push = f.target().map_range(j, jj)?;
    let up = hy.map_matrix(&at.space, |h| h.then(&push))?;
    let c = up.solve_left(&hy.class_of(&rep)?)?.ok_or_else(|| CompletionError::Certificate("colimit not reached".into()))?;
    Ok(c)
}

/// Equality of fractions by comparing their elements of the completion hom.
pub fn fraction_equal(f: &Fraction, g: &Fraction) -> R<bool> {
    if !Arc::ptr_eq(f.source(), g.source()) || !Arc::ptr_eq(f.target(), g.target()) {
        return Err(CompletionError::NotComposable);
    }
    let at = completion_hom(f.source(), f.target())?;
    Ok(fraction_element(f, &at)? == fraction_element(g, &at)?)
}

/// (LF2) square: for `σ: Y -> Y'` eventually invertible and `α: Y -> Z`,
/// returns `(σ': Z -> Z_f, α': Y' -> Z_f)` with `α' σ ≃ σ' α`.
pub fn lf2_square(sigma: &Arc<SeqMorphism>, alpha: &Arc<SeqMorphism>, horizon: usize) -> R<(Arc<SeqMorphism>, Arc<SeqMorphism>)> {
    if !Arc::ptr_eq(&sigma.source, &alpha.source) {
        return Err(CompletionError::NotComposable);
    }
    let (y, yp, z) = (sigma.source.clone(), sigma.target.clone(), alpha.target.clone());
    let (i0y, _) = completion_indices(&y, &z)?;
    let (i0p, _) = completion_indices(&yp, &z)?;
    let i0 = i0y.max(i0p);
    let cz = z.require_cert()?;
    // f(i) must reach the inner index for both Y_i and Y'_i
    let mut k = 0usize;
    for i in i0..=i0.max(horizon) {
        for s in [&y, &yp] {
            let j = cz.compact_index(s.term(i)?.window().map(|w| w.0));
            k = k.max(j.saturating_sub(i));
        }
    }
    let f = Cofinal::FloorShift { floor: i0, k };
    let (zf, sigma_p) = SeqMorphism::reindex(&z, f)?;
    let (sg, al, zz, ypp) = (sigma.clone(), alpha.clone(), z.clone(), yp.clone());
    let solve = move |i: usize| -> R<ChainMap> {
        let ii = i.max(i0);
        let j = f.apply(ii);
        let ypi = ypp.term(ii)?;
        let yi = sg.source.term(ii)?;
        let zj = zz.term(j)?;
        let h_src = khom(&ypi, &zj)?;
        let h_tgt = khom(&yi, &zj)?;
        let s = sg.component(ii)?;
        let m = h_tgt.map_matrix(&h_src, |g| s.then(g))?;
        let want = al.component(ii)?.then(&zz.map_range(ii, j)?);
        let c = m
            .solve_left(&h_tgt.class_of(&want)?)?
            .ok_or_else(|| CompletionError::NotInvertible(format!("σ_{ii} does not act bijectively on Hom(-, Z_{j})")))?;
        let a = h_src.combine(&c);
        if i < i0 {
            Ok(ypp.map_range(i, i0)?.then(&a))
        } else {
            Ok(a)
        }
    };
    let alpha_p = SeqMorphism::family(&yp, &zf, Arc::new(solve));
    Ok((sigma_p, alpha_p))
}

/// (LF3): for `α, β: X -> Y` with `σ α ≃ σ β`, a reindexing `τ = f_Y` with
/// `τ α ≃ τ β`.
pub fn lf3_equalizer(alpha: &Arc<SeqMorphism>, beta: &Arc<SeqMorphism>, horizon: usize) -> R<Arc<SeqMorphism>> {
    let (x, y) = (alpha.source.clone(), alpha.target.clone());
    let cy = y.require_cert()?;
    let start = x.require_cert()?.start.max(cy.start);
    let mut k = 0usize;
    for i in start..=horizon.max(start) {
        let d = alpha.component(i)?.sub(&beta.component(i)?);
        let bound = cy.compact_index(x.term(i)?.window().map(|w| w.0)).saturating_sub(i);
        let mut found = None;
        for kk in 0..=bound.max(k) {
            let moved = d.then(&y.map_range(i, i + kk)?);
            if khom(&x.term(i)?, &y.term(i + kk)?)?.is_null_homotopic(&moved)? {
                found = Some(kk);
                break;
            }
        }
        let kk = found.ok_or_else(|| CompletionError::Mismatch(format!("α and β are not equalized by any reindexing at index {i}")))?;
        k = k.max(kk);
    }
    let (_, tau) = SeqMorphism::reindex(&y, Cofinal::FloorShift { floor: start, k })?;
    Ok(tau)
}

/// `(τ⁻¹β) ∘ (σ⁻¹α)` via an (LF2) square.
pub fn fraction_compose(f: &Fraction, g: &Fraction, horizon: usize) -> R<Fraction> {
    if !Arc::ptr_eq(f.target(), g.source()) {
        return Err(CompletionError::NotComposable);
    }
    let (sigma_p, beta_p) = lf2_square(&f.sigma, &g.alpha, horizon)?;
    let alpha = SeqMorphism::compose(&f.alpha, &beta_p)?;
    let sigma = SeqMorphism::compose(&g.sigma, &sigma_p)?;
    Fraction::new(alpha, sigma)
}

/// Checks `a ≃ b` componentwise for `i ≤ horizon`.
pub fn homotopic_up_to(a: &SeqMorphism, b: &SeqMorphism, horizon: usize) -> R<bool> {
    for i in 0..=horizon {
        let h = khom(&a.source.term(i)?, &a.target.term(i)?)?;
        if !h.is_null_homotopic(&a.component(i)?.sub(&b.component(i)?))? {
            return Ok(false);
        }
    }
    Ok(true)
}

// ------------------------------------------------------------ towers

/// An inverse system `A_0 <- A_1 <- …` of finite-dimensional spaces;
/// `maps[i]` is `A_{i+1} -> A_i` in the row convention.
#[derive(Clone, Debug)]
pub struct Tower {
    pub dims: Vec<usize>,
    pub maps: Vec<Mat>,
    /// Index from which the maps are certified bijective, if known.
    pub certified_from: Option<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub enum MlVerdict {
    /// Images `Im(A_{i+k} -> A_i)` stabilized; `stable[i] = (k, dim)`.
    Vanishes { stable: Vec<(usize, usize)>, certified_from: Option<usize> },
    /// A strictly descending image chain, with the rule that certifies it continues.
    MlFails { witness: Vec<String>, rule: String },
    Unknown(String),
}

impl MlVerdict {
    pub fn vanishes(&self) -> bool {
        matches!(self, MlVerdict::Vanishes { .. })
    }
}

/// Mittag-Leffler test for a tower of finite-dimensional spaces.
pub fn ml_lim1(t: &Tower) -> MlVerdict {
    let n = t.dims.len();
    if n == 0 {
        return MlVerdict::Vanishes { stable: vec![], certified_from: t.certified_from };
    }
    let mut stable = Vec::new();
    for i in 0..n {
        // composite A_{i+k} -> A_i and its image dimension
        let mut comp = Mat::identity(p_of(t), t.dims[i]);
        let mut dims = vec![t.dims[i]];
        for k in i..n - 1 {
            comp = t.maps[k].mul(&comp);
            dims.push(comp.rank());
        }
        let last = *dims.last().unwrap();
        let k = dims.iter().position(|&d| d == last).unwrap();
        stable.push((k, last));
    }
    MlVerdict::Vanishes { stable, certified_from: t.certified_from }
}

fn p_of(t: &Tower) -> u32 {
    t.maps.first().map_or(2, |m| m.p())
}

/// Rank bookkeeping for `∏_{i≤N} A_i -> ∏_{i<N} A_i`, `(a_i) -> (a_i - φ(a_{i+1}))`:
/// returns `(dim ker, dim coker)`; a finite window has kernel `A_N` and no cokernel.
pub fn milnor_window(t: &Tower) -> (usize, usize) {
    let n = t.dims.len();
    if n == 0 {
        return (0, 0);
    }
    let p = p_of(t);
    let src: usize = t.dims.iter().sum();
    let tgt: usize = t.dims[..n - 1].iter().sum();
    let mut d = Mat::zeros(p, src, tgt);
    let mut ro = 0;
    let mut co = 0;
    for i in 0..n {
        if i < n - 1 {
            d.set_block(ro, co, &Mat::identity(p, t.dims[i]));
        }
        if i > 0 {
            // a_i contributes -φ(a_i) to slot i-1
            let prev_co = co - t.dims[i - 1];
            d.set_block(ro, prev_co, &t.maps[i - 1].neg());
        }
        ro += t.dims[i];
        if i < n - 1 {
            co += t.dims[i];
        }
    }
    let r = d.rank();
    (src - r, tgt - r)
}

/// Integer tower `Z <- Z <- …` with multiplication maps.
#[derive(Clone, Debug, Serialize)]
pub enum IntTower {
    /// Every map is multiplication by `m`.
    ConstantMultiplier(i64),
    /// Finitely many multipliers, no statement about the tail.
    Prefix(Vec<i64>),
}

pub fn ml_lim1_int(t: &IntTower, horizon: usize) -> MlVerdict {
    match t {
        IntTower::ConstantMultiplier(m) => {
            let m = m.unsigned_abs() as u128;
            if m == 1 {
                return MlVerdict::Vanishes { stable: vec![(0, 1)], certified_from: Some(0) };
            }
            if m == 0 {
                return MlVerdict::Vanishes { stable: vec![(1, 0)], certified_from: Some(1) };
            }
            let mut witness = Vec::new();
            let mut g: u128 = 1;
            for _ in 0..=horizon {
                witness.push(format!("{g}Z"));
                match g.checked_mul(m) {
                    Some(v) => g = v,
                    None => break,
                }
            }
            MlVerdict::MlFails { witness, rule: format!("constant multiplier {m} ≥ 2: Im(A_k -> A_0) = {m}^k Z strictly decreases") }
        }
        IntTower::Prefix(ms) => {
            if ms.iter().all(|m| m.abs() == 1) {
                MlVerdict::Unknown("finite prefix of units; the tail is not determined".into())
            } else {
                MlVerdict::Unknown("finite prefix cannot certify the behaviour of the tail".into())
            }
        }
    }
}

/// Restriction tower `i -> Hom(X_i, Ŷ)` for `i ≤ horizon`, computed at a common `j`.
pub fn hom_tower(x: &Arc<CauchySeq>, y: &Arc<CauchySeq>, horizon: usize) -> R<(Tower, usize)> {
    let cy = y.require_cert()?;
    let mut j = 0;
    for i in 0..=horizon {
        j = j.max(inner_index(x, &cy, i)?);
    }
    let spaces: Vec<HomSpace> = (0..=horizon).map(|i| Ok(khom(&x.term(i)?, &y.term(j)?)?)).collect::<R<_>>()?;
    let mut maps = Vec::new();
    for i in 0..horizon {
        let inc = x.map(i)?;
        maps.push(spaces[i].map_matrix(&spaces[i + 1], |f| inc.then(f))?);
    }
    let (ci, _) = completion_indices(x, y)?;
    let tower = Tower { dims: spaces.iter().map(|s| s.dim()).collect(), maps, certified_from: Some(ci) };
    Ok((tower, j))
}

#[derive(Clone, Debug, Serialize)]
pub struct PhantomlessReport {
    pub per_shift: Vec<(i64, MlVerdict, usize)>,
    pub vanishes: bool,
}

/// Runs the Mittag-Leffler test on `i -> colim_j Hom(X_i, Σ^s Y_j)` for each shift.
pub fn phantomless_check(x: &Arc<CauchySeq>, y: &Arc<CauchySeq>, shifts: std::ops::RangeInclusive<i64>) -> R<PhantomlessReport> {
    let mut per_shift = Vec::new();
    for s in shifts {
        let ys = CauchySeq::shifted(y, s);
        let (ci, _) = completion_indices(x, &ys)?;
        let (t, _) = hom_tower(x, &ys, ci + 2)?;
        // the certified tail must consist of bijections
        for k in ci..t.maps.len() {
            if t.dims[k] != t.dims[k + 1] || t.maps[k].rank() != t.dims[k] {
                return Err(CompletionError::NoStabilization(k));
            }
        }
        per_shift.push((s, ml_lim1(&t), ci));
    }
    let vanishes = per_shift.iter().all(|v| v.1.vanishes());
    Ok(PhantomlessReport { per_shift, vanishes })
}

// ------------------------------------------------------------ triangles

/// Termwise cone of a strictly natural morphism with the triangle maps
/// `Y -> C` and `C -> ΣX`.
pub struct SeqCone {
    pub cone: Arc<CauchySeq>,
    pub inclusion: Arc<SeqMorphism>,
    pub projection: Arc<SeqMorphism>,
    pub shifted_source: Arc<CauchySeq>,
}

pub fn seq_cone(phi: &Arc<SeqMorphism>, check_upto: usize) -> R<SeqCone> {
    for i in 0..check_upto {
        phi.check_strict(i)?;
    }
    let c = CauchySeq::coned(phi);
    let sx = CauchySeq::shifted(&phi.source, 1);
    let inclusion = SeqMorphism::build(&phi.target, &c, MorphKind::ConeInclusion(phi.clone()));
    let projection = SeqMorphism::build(&c, &sx, MorphKind::ConeProjection(phi.clone()));
    Ok(SeqCone { cone: c, inclusion, projection, shifted_source: sx })
}

/// Dimensions and ranks along `Hom(Ŵ, Σ^s X̂) -> Hom(Ŵ, Σ^s Ŷ) -> Hom(Ŵ, Σ^s Ĉ) -> Hom(Ŵ, Σ^{s+1} X̂) -> …`.
#[derive(Clone, Debug, Serialize)]
pub struct LesReport {
    /// `(label, dim)` per node.
    pub nodes: Vec<(String, usize)>,
    /// Rank of the map leaving each node except the last.
    pub ranks: Vec<usize>,
    pub exact: bool,
}

/// Exactness of the long sequence obtained by applying `Hom(Ŵ, -)` to the
/// triangle of a sequence cone, for shifts in `range`; interior nodes are
/// checked by rank bookkeeping.
pub fn les_check(w: &Arc<CauchySeq>, tri: &SeqCone, phi: &Arc<SeqMorphism>, range: std::ops::RangeInclusive<i64>) -> R<LesReport> {
    let (x, y, c) = (&phi.source, &phi.target, &tri.cone);
    let (lo, hi) = (*range.start(), *range.end());
    // nodes Σ^s X, Σ^s Y, Σ^s C for s in the range, then Σ^{hi+1} X
    let mut objs: Vec<(String, Arc<CauchySeq>)> = Vec::new();
    for s in lo..=hi {
        objs.push((format!("X[{s}]"), CauchySeq::shifted(x, s)));
        objs.push((format!("Y[{s}]"), CauchySeq::shifted(y, s)));
        objs.push((format!("C[{s}]"), CauchySeq::shifted(c, s)));
    }
    objs.push((format!("X[{}]", hi + 1), CauchySeq::shifted(x, hi + 1)));
    let mut i = 0;
    for (_, o) in &objs {
        i = i.max(completion_indices(w, o)?.0);
    }
    let mut j = 0;
    for (_, o) in &objs {
        j = j.max(inner_index(w, &o.require_cert()?, i)?);
    }
    let spaces: Vec<CompletionHom> = objs.iter().map(|(_, o)| completion_hom_at(w, o, i, j, true)).collect::<R<_>>()?;
    let mut ranks = Vec::new();
    let mut mats = Vec::new();
    for (k, pair) in spaces.windows(2).enumerate() {
        let s = lo + (k / 3) as i64;
        let comp = match k % 3 {
            0 => phi.component(j)?.shift(s),
            1 => tri.inclusion.component(j)?.shift(s),
            _ => tri.projection.component(j)?.shift(s),
        };
        let comp = comp.retarget(&objs[k].1.term(j)?, &objs[k + 1].1.term(j)?);
        let m = pair[1].space.map_matrix(&pair[0].space, |f| f.then(&comp))?;
        ranks.push(m.rank());
        mats.push(m);
    }
    let mut exact = true;
    for k in 1..spaces.len() - 1 {
        // image of the incoming map equals kernel of the outgoing one
        if !mats[k - 1].mul(&mats[k]).is_zero() || ranks[k - 1] + ranks[k] != spaces[k].dim() {
            exact = false;
        }
    }
    let nodes = objs.iter().zip(&spaces).map(|((l, _), s)| (l.clone(), s.dim())).collect();
    Ok(LesReport { nodes, ranks, exact })
}

/// A representative of the colimit good enough for cohomology from degree `lo` up.
pub fn realize(x: &CauchySeq, lo: i64) -> R<Complex> {
    let cert = x.require_cert()?;
    let i = cert.outer_index(Some(lo));
    x.term(i)
}

// ------------------------------------------------------------ verifier

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub pair: usize,
    pub shifts: Vec<(i64, usize, usize)>,
    pub compositions_checked: usize,
    pub matched: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MainTheoremReport {
    pub algebra: String,
    pub pairs: Vec<PairReport>,
    pub all_matched: bool,
}

/// Compares `Hom_{D^b}(M, Σ^n N)` with `Hom(X̂_M, Σ^n X̂_N)` for each pair and
/// shift, and checks that composition agrees under the augmentation map.
pub fn verify_pair(m: &Complex, n: &Complex, shifts: &[i64], pair: usize) -> R<PairReport> {
    let rm = Resolution::new(m);
    let rn = Resolution::new(n);
    let sm = CauchySeq::truncation_of(rm.clone());
    let sn = CauchySeq::truncation_of(rn.clone());
    let targets: Vec<(i64, Arc<CauchySeq>)> = shifts.iter().map(|&s| (s, CauchySeq::shifted(&sn, s))).collect();
    let selfs: Vec<(i64, Arc<CauchySeq>)> = [0i64, 1].iter().map(|&t| (t, CauchySeq::shifted(&sn, t))).collect();

    // common indices: N-side spaces first, then M-side ones deep enough to absorb them
    let (mut gi, mut gj) = (0, 0);
    for (_, y) in &selfs {
        let (a, b) = completion_indices(&sn, y)?;
        gi = gi.max(a);
        gj = gj.max(b);
    }
    for &t in &[0i64, 1] {
        gi = gi.max(crate::derived::stabilization_depth(n.shift(t).cohomology_window().map(|w| w.0)));
    }
    for (_, y) in &selfs {
        gj = gj.max(inner_index(&sn, &y.require_cert()?, gi)?);
    }
    let mut depth = 0;
    let (mut fi, mut fj) = (0, gj.max(gi));
    for &s in shifts {
        depth = depth.max(crate::derived::stabilization_depth(n.shift(s).cohomology_window().map(|w| w.0)));
    }
    for (_, y) in &targets {
        let (a, b) = completion_indices(&sm, y)?;
        fi = fi.max(a);
        fj = fj.max(b);
    }
    fi = fi.max(depth);
    for (_, y) in &targets {
        fj = fj.max(inner_index(&sm, &y.require_cert()?, fi)?);
    }
    let n_self: Vec<(i64, DbHom, CompletionHom)> = selfs
        .iter()
        .map(|(t, y)| Ok((*t, dbhom_with(&rn, n, *t)?, completion_hom_at(&sn, y, gi, gj, true)?)))
        .collect::<R<_>>()?;

    let mut rows = Vec::new();
    let mut matched = true;
    let mut detail = None;
    let mut spaces: BTreeMap<i64, (DbHom, CompletionHom, Mat)> = BTreeMap::new();
    for (s, y) in &targets {
        let target = n.shift(*s);
        let db = crate::derived::dbhom_at(&rm, &target, *s, depth, true)?;
        let ch = completion_hom_at(&sm, y, fi, fj, true)?;
        rows.push((*s, db.dim(), ch.dim()));
        if db.dim() != ch.dim() {
            matched = false;
            detail.get_or_insert(format!("shift {s}: derived {} vs completion {}", db.dim(), ch.dim()));
            continue;
        }
        let phi = augmentation_matrix(&ch, &db, &rn, *s)?;
        spaces.insert(*s, (db, ch, phi));
    }
    let n_phis: Vec<Mat> = n_self.iter().map(|(t, db, ch)| augmentation_matrix(ch, db, &rn, *t)).collect::<R<_>>()?;

    let p = m.p();
    let mut checked = 0;
    // g re-expressed on Y_fj, shared by every f
    let moved: Vec<(CompletionHom, Mat)> = n_self.iter().map(|(_, _, gch)| gch.transfer(fj, 0)).collect::<R<_>>()?;
    let mut far: BTreeMap<(i64, usize), (CompletionHom, Mat)> = BTreeMap::new();
    for (&s, (fdb, fch, phi_f)) in &spaces {
        for (((t, gdb, _), phi_g), (gmoved, tmat)) in n_self.iter().zip(&n_phis).zip(&moved) {
            let Some((hdb, _, _)) = spaces.get(&(s + t)) else { continue };
            let k = gmoved.j;
            let kk = k.max(fj);
            if !far.contains_key(&(s + t, kk)) {
                let h = completion_hom_at(&sm, &targets.iter().find(|y| y.0 == s + t).unwrap().1, fi, kk, false)?;
                let phi = augmentation_matrix(&h, hdb, &rn, s + t)?;
                far.insert((s + t, kk), (h, phi));
            }
            let (hch, phi_h) = &far[&(s + t, kk)];
            for a in 0..fch.dim() {
                let ea = unit(fch.dim(), a);
                let fr = fch.representative(&ea);
                let lifted = db_lift(fdb, &phi_f.vec_mul(&ea), gdb)?;
                for b in 0..gmoved.dim() {
                    let eb = unit(gmoved.dim(), b);
                    let gr = gmoved.representative(&tmat.vec_mul(&eb));
                    let gs = gr.shift(s).retarget(fr.target(), &gr.target().shift(s));
                    let lhs = phi_h.vec_mul(&hch.class_of(fi, k, &fr.then(&gs))?);
                    let rhs = hdb.class_of(&lifted.compose(&phi_g.vec_mul(&eb))?)?;
                    if lhs != rhs {
                        matched = false;
                        detail.get_or_insert(format!("composition mismatch at shifts ({s}, {t}) over F_{p}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(PairReport { pair, shifts: rows, compositions_checked: checked, matched, detail })
}

fn unit(n: usize, k: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[k] = 1;
    v
}

// Sends completion-hom coordinates to derived coordinates by composing with
// the shifted augmentation Σ^s Y_j -> Σ^s N.
fn augmentation_matrix(ch: &CompletionHom, db: &DbHom, rn: &Arc<Resolution>, s: i64) -> R<Mat> {
    let (_, aug) = rn.truncation(ch.j)?;
    let p = db.target.p();
    let mut m = Mat::zeros(p, ch.dim(), db.dim());
    for (r, b) in ch.space.basis.iter().enumerate() {
        let aug_s = aug.shift(s).retarget(b.target(), &db.target);
        let c = db.class_of(&b.then(&aug_s))?;
        for (k, x) in c.into_iter().enumerate() {
            m.set(r, k, x);
        }
    }
    if m.rank() != ch.dim() || ch.dim() != db.dim() {
        return Err(CompletionError::Mismatch(format!("augmentation is not an isomorphism at shift {s}")));
    }
    Ok(m)
}

/// Runs [`verify_pair`] on seeded random pairs.
pub fn verify_main_theorem(name: &str, alg: &Arc<crate::algebra::Algebra>, pairs: usize, max_total: usize, shifts: &[i64], seed: u64) -> R<MainTheoremReport> {
    let mut rng = crate::sample::rng(seed);
    let mut out = Vec::new();
    for k in 0..pairs {
        let m = crate::sample::random_complex(alg, &mut rng, max_total)?;
        let n = crate::sample::random_complex(alg, &mut rng, max_total)?;
        let r = verify_pair(&m, &n, shifts, k).unwrap_or_else(|e| PairReport {
            pair: k,
            shifts: vec![],
            compositions_checked: 0,
            matched: false,
            detail: Some(e.to_string()),
        });
        out.push(r);
    }
    let all_matched = out.iter().all(|r| r.matched);
    Ok(MainTheoremReport { algebra: name.to_string(), pairs: out, all_matched })
}

/// Whether the realization agrees with `target` in cohomology from degree `lo` up.
pub fn realizes(x: &CauchySeq, target: &Complex, lo: i64) -> R<bool> {
    let r = realize(x, lo)?;
    let top = r.hi().max(target.hi());
    Ok((lo..=top).all(|n| r.cohomology_dim(n) == target.cohomology_dim(n)))
}
