//! Bounded cohomologically graded complexes of modules.
//!
//! Conventions: `d: X^n -> X^{n+1}`; `(Σ^m X)^n = X^{n+m}` with differential
//! `(-1)^m d`; `cone(f)^n = X^{n+1} ⊕ Y^n` with `(x, y) -> (-x d_X, x f + y d_Y)`.
//! Maps act on row vectors, so a differential is a `dim X^n x dim X^{n+1}` matrix.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgError, Algebra, Module};
use crate::exactla::{quotient_basis, ColumnSolver, Mat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("differentials compose to a nonzero map out of degree {0}")]
    NotComplex(i64),
    #[error("map in degree {0} is not a module map")]
    NotEquivariant(i64),
    #[error("chain map fails to commute with the differential in degree {0}")]
    NotChainMap(i64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// A complex with components in degrees `lo ..= lo + terms.len() - 1`.
#[derive(Clone, Debug)]
pub struct Complex {
    alg: Arc<Algebra>,
    lo: i64,
    terms: Vec<Module>,
    diffs: Vec<Mat>,
}

impl Complex {
    /// `diffs[k]` maps `terms[k]` to `terms[k + 1]`.
    pub fn new(alg: &Arc<Algebra>, lo: i64, terms: Vec<Module>, diffs: Vec<Mat>) -> Result<Complex, ComplexError> {
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(ComplexError::Shape(format!("{} terms need {} differentials", terms.len(), terms.len().saturating_sub(1))));
        }
        for (k, d) in diffs.iter().enumerate() {
            let n = lo + k as i64;
            if d.shape() != (terms[k].dim(), terms[k + 1].dim()) {
                return Err(ComplexError::Shape(format!("differential in degree {n}")));
            }
            if !terms[k].is_hom(&terms[k + 1], d) {
                return Err(ComplexError::NotEquivariant(n));
            }
            if k + 1 < diffs.len() && !d.mul(&diffs[k + 1]).is_zero() {
                return Err(ComplexError::NotComplex(n));
            }
        }
        if terms.iter().any(|t| !crate::algebra::same_algebra(t.algebra(), alg)) {
            return Err(AlgError::AlgebraMismatch.into());
        }
        Ok(Complex { alg: alg.clone(), lo, terms, diffs }.trimmed())
    }

    pub(crate) fn new_unchecked(alg: &Arc<Algebra>, lo: i64, terms: Vec<Module>, diffs: Vec<Mat>) -> Complex {
        let c = Complex { alg: alg.clone(), lo, terms, diffs };
        debug_assert!(c.check().is_ok(), "{:?}", c.check());
        c.trimmed()
    }

    /// Re-runs the construction checks.
    pub fn check(&self) -> Result<(), ComplexError> {
        Complex::new(&self.alg, self.lo, self.terms.clone(), self.diffs.clone()).map(|_| ())
    }

    // Drops zero modules at either end of the window.
    fn trimmed(mut self) -> Complex {
        while self.terms.last().is_some_and(|t| t.dim() == 0) {
            self.terms.pop();
            self.diffs.pop();
        }
        let lead = self.terms.iter().take_while(|t| t.dim() == 0).count();
        if lead > 0 {
            self.terms.drain(..lead);
            self.diffs.drain(..lead.min(self.diffs.len()));
            self.lo += lead as i64;
        }
        if self.terms.is_empty() {
            self.diffs.clear();
            self.lo = 0;
        }
        self
    }

    pub fn zero(alg: &Arc<Algebra>) -> Complex {
        Complex { alg: alg.clone(), lo: 0, terms: vec![], diffs: vec![] }
    }

    pub fn stalk(m: &Module, deg: i64) -> Complex {
        Complex { alg: m.algebra().clone(), lo: deg, terms: vec![m.clone()], diffs: vec![] }.trimmed()
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }
    pub fn p(&self) -> u32 {
        self.alg.p()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    /// Lowest nonzero degree (meaningless for the zero complex).
    pub fn lo(&self) -> i64 {
        self.lo
    }
    /// Highest nonzero degree; `lo - 1` for the zero complex.
    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }
    /// Degree window `(lo, hi)`, or `None` for the zero complex.
    pub fn window(&self) -> Option<(i64, i64)> {
        (!self.is_zero()).then(|| (self.lo, self.hi()))
    }
    pub fn total_dim(&self) -> usize {
        self.terms.iter().map(|t| t.dim()).sum()
    }

    pub fn term(&self, n: i64) -> Module {
        match self.index(n) {
            Some(k) => self.terms[k].clone(),
            None => Module::zero(&self.alg),
        }
    }

    pub fn term_ref(&self, n: i64) -> Option<&Module> {
        self.index(n).map(|k| &self.terms[k])
    }

    pub fn dim_at(&self, n: i64) -> usize {
        self.index(n).map_or(0, |k| self.terms[k].dim())
    }

    fn index(&self, n: i64) -> Option<usize> {
        (n >= self.lo && n <= self.hi()).then(|| (n - self.lo) as usize)
    }

    /// `d^n: X^n -> X^{n+1}` (zero outside the window).
    pub fn diff(&self, n: i64) -> Mat {
        match self.index(n) {
            Some(k) if k < self.diffs.len() => self.diffs[k].clone(),
            _ => Mat::zeros(self.p(), self.dim_at(n), self.dim_at(n + 1)),
        }
    }

    /// Whether all components are tagged standard projectives.
    pub fn has_projective_terms(&self) -> bool {
        self.terms.iter().all(|t| t.proj_summands().is_some())
    }

    pub fn shift(&self, m: i64) -> Complex {
        let diffs = if m.rem_euclid(2) == 1 { self.diffs.iter().map(|d| d.neg()).collect() } else { self.diffs.clone() };
        Complex { alg: self.alg.clone(), lo: self.lo - m, terms: self.terms.clone(), diffs }
    }

    pub fn direct_sum(&self, o: &Complex) -> Complex {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(o.lo);
        let hi = self.hi().max(o.hi());
        let p = self.p();
        let terms = (lo..=hi).map(|n| Module::direct_sum(&[&self.term(n), &o.term(n)])).collect();
        let diffs = (lo..hi).map(|n| Mat::block_diag(p, &[&self.diff(n), &o.diff(n)])).collect();
        Complex::new_unchecked(&self.alg, lo, terms, diffs)
    }

    /// `σ_{≥n} X` and its inclusion into `X`.
    pub fn brutal_truncate_geq(&self, n: i64) -> (Complex, ChainMap) {
        let sub = if self.is_zero() || n > self.hi() {
            Complex::zero(&self.alg)
        } else if n <= self.lo {
            self.clone()
        } else {
            let k = (n - self.lo) as usize;
            Complex { alg: self.alg.clone(), lo: n, terms: self.terms[k..].to_vec(), diffs: self.diffs[k..].to_vec() }.trimmed()
        };
        let map = ChainMap::identity_on_overlap(&sub, self);
        (sub, map)
    }

    /// Cycles `Z^n` as rows in `X^n` coordinates.
    pub fn cycles(&self, n: i64) -> Mat {
        if self.dim_at(n) == 0 {
            return Mat::zeros(self.p(), 0, 0);
        }
        self.diff(n).left_kernel().row_space_basis()
    }

    /// Boundaries `B^n` as rows in `X^n` coordinates.
    pub fn boundaries(&self, n: i64) -> Mat {
        self.diff(n - 1).row_space_basis()
    }

    pub fn cohomology_dim(&self, n: i64) -> usize {
        let d = self.dim_at(n);
        if d == 0 {
            return 0;
        }
        d - self.diff(n).rank() - self.diff(n - 1).rank()
    }

    pub fn cohomology(&self, n: i64) -> Cohomology {
        Cohomology::new(self, n)
    }

    pub fn is_acyclic(&self) -> bool {
        self.window().map_or(true, |(lo, hi)| (lo..=hi).all(|n| self.cohomology_dim(n) == 0))
    }

    /// Smallest window containing all nonzero cohomology.
    pub fn cohomology_window(&self) -> Option<(i64, i64)> {
        let (lo, hi) = self.window()?;
        let nz: Vec<i64> = (lo..=hi).filter(|&n| self.cohomology_dim(n) > 0).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    /// `τ_{≤n} X`: `… -> X^{n-1} -> Z^n -> 0`, with its inclusion.
    pub fn tau_leq(&self, n: i64) -> (Complex, ChainMap) {
        let Some((lo, hi)) = self.window() else {
            return (self.clone(), ChainMap::identity(self));
        };
        if n >= hi {
            return (self.clone(), ChainMap::identity(self));
        }
        if n < lo {
            let z = Complex::zero(&self.alg);
            let f = ChainMap::zero(&z, self);
            return (z, f);
        }
        let z = self.cycles(n);
        let (zm, incl) = self.term(n).submodule(&z);
        let mut terms: Vec<Module> = (lo..n).map(|m| self.term(m)).collect();
        terms.push(zm);
        let mut diffs: Vec<Mat> = (lo..n - 1).map(|m| self.diff(m)).collect();
        if n > lo {
            // d^{n-1} lands in Z^n
            let solver = ColumnSolver::new(&incl.transpose());
            let d = self.diff(n - 1);
            let mut dz = Mat::zeros(self.p(), d.rows(), incl.rows());
            for r in 0..d.rows() {
                let c = solver.coords(d.row(r)).expect("boundaries are cycles");
                for (j, x) in c.into_iter().enumerate() {
                    dz.set(r, j, x);
                }
            }
            diffs.push(dz);
        }
        let sub = Complex::new_unchecked(&self.alg, lo, terms, diffs);
        let mut maps: Vec<Mat> = (lo..n).map(|m| Mat::identity(self.p(), self.dim_at(m))).collect();
        maps.push(incl);
        let f = ChainMap::from_window(&sub, self, lo, maps);
        (sub, f)
    }

    /// `τ_{>n} X`: `0 -> X^n / Z^n -> X^{n+1} -> …`, with the projection.
    pub fn tau_gt(&self, n: i64) -> (Complex, ChainMap) {
        let Some((lo, hi)) = self.window() else {
            return (self.clone(), ChainMap::identity(self));
        };
        if n < lo {
            return (self.clone(), ChainMap::identity(self));
        }
        if n >= hi {
            let z = Complex::zero(&self.alg);
            let f = ChainMap::zero(self, &z);
            return (z, f);
        }
        let z = self.cycles(n);
        let (q, proj) = self.term(n).quotient(&z);
        // induced differential X^n/Z^n -> X^{n+1}: lift each basis class, apply d
        let lift = lift_of_projection(&proj);
        let d0 = lift.mul(&self.diff(n));
        let mut terms = vec![q];
        terms.extend((n + 1..=hi).map(|m| self.term(m)));
        let mut diffs = vec![d0];
        diffs.extend((n + 1..hi).map(|m| self.diff(m)));
        let quo = Complex::new_unchecked(&self.alg, n, terms, diffs);
        let mut maps = Vec::new();
        for m in lo..=hi {
            if m < n {
                maps.push(Mat::zeros(self.p(), self.dim_at(m), 0));
            } else if m == n {
                maps.push(proj.clone());
            } else {
                maps.push(Mat::identity(self.p(), self.dim_at(m)));
            }
        }
        let f = ChainMap::from_window(self, &quo, lo, maps);
        (quo, f)
    }
}

// Rows lifting each quotient basis vector through a projection matrix.
fn lift_of_projection(proj: &Mat) -> Mat {
    let q = proj.cols();
    let mut lift = Mat::zeros(proj.p(), q, proj.rows());
    for i in 0..q {
        let mut e = vec![0u32; q];
        e[i] = 1;
        let v = proj.solve_left(&e).expect("shape").expect("projection is onto");
        for (j, x) in v.into_iter().enumerate() {
            lift.set(i, j, x);
        }
    }
    lift
}

/// `H^n` with its subquotient data.
#[derive(Debug, Clone)]
pub struct Cohomology {
    pub degree: i64,
    pub module: Module,
    /// Rows of `X^n` lifting the basis of `H^n`.
    pub lifts: Mat,
    quotient: Option<crate::exactla::Quotient>,
}

impl Cohomology {
    fn new(x: &Complex, n: i64) -> Cohomology {
        let p = x.p();
        let dn = x.dim_at(n);
        if dn == 0 {
            return Cohomology { degree: n, module: Module::zero(x.algebra()), lifts: Mat::zeros(p, 0, 0), quotient: None };
        }
        let z = x.cycles(n);
        let b = x.boundaries(n);
        let quotient = quotient_basis(&z.transpose(), &b.transpose()).expect("boundaries lie in cycles");
        let lifts = quotient.lift_basis.transpose();
        let module = cohomology_module(x, n, &lifts, &quotient);
        Cohomology { degree: n, module, lifts, quotient: Some(quotient) }
    }

    pub fn dim(&self) -> usize {
        self.lifts.rows()
    }

    /// Class of a cycle of `X^n` in the chosen basis.
    pub fn class_of(&self, v: &[u32]) -> Option<Vec<u32>> {
        match &self.quotient {
            None => Some(vec![]),
            Some(q) => q.coords(v),
        }
    }
}

// The module structure on H^n in the basis given by `lifts`.
fn cohomology_module(x: &Complex, n: i64, lifts: &Mat, q: &crate::exactla::Quotient) -> Module {
    let alg = x.algebra();
    let k = lifts.rows();
    let term = x.term(n);
    let action = term
        .action()
        .iter()
        .map(|a| {
            let img = lifts.mul(a);
            let mut m = Mat::zeros(x.p(), k, k);
            for r in 0..k {
                let c = q.coords(img.row(r)).expect("cycles are a submodule");
                for (j, v) in c.into_iter().enumerate() {
                    m.set(r, j, v);
                }
            }
            m
        })
        .collect();
    Module::new_unchecked(alg, k, action)
}

/// Degreewise maps `f^n: X^n -> Y^n`, stored over the source window.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: Arc<Complex>,
    target: Arc<Complex>,
    maps: Vec<Mat>,
}

impl ChainMap {
    /// `maps[k]` is the component in degree `lo + k`; degrees outside are zero.
    pub fn new(source: &Complex, target: &Complex, lo: i64, maps: Vec<Mat>) -> Result<ChainMap, ComplexError> {
        let f = Self::from_window(source, target, lo, maps);
        f.check()?;
        Ok(f)
    }

    pub(crate) fn from_window(source: &Complex, target: &Complex, lo: i64, maps: Vec<Mat>) -> ChainMap {
        let p = source.p();
        let comps = match source.window() {
            None => vec![],
            Some((slo, shi)) => (slo..=shi)
                .map(|n| {
                    let k = n - lo;
                    if k >= 0 && (k as usize) < maps.len() {
                        maps[k as usize].clone()
                    } else {
                        Mat::zeros(p, source.dim_at(n), target.dim_at(n))
                    }
                })
                .collect(),
        };
        ChainMap { source: Arc::new(source.clone()), target: Arc::new(target.clone()), maps: comps }
    }

    pub fn check(&self) -> Result<(), ComplexError> {
        let (s, t) = (&*self.source, &*self.target);
        let Some((lo, hi)) = s.window() else {
            return Ok(());
        };
        for n in lo..=hi {
            let f = self.at(n);
            if f.shape() != (s.dim_at(n), t.dim_at(n)) {
                return Err(ComplexError::Shape(format!("chain map component in degree {n}")));
            }
            if s.dim_at(n) > 0 && t.dim_at(n) > 0 && !s.term(n).is_hom(&t.term(n), &f) {
                return Err(ComplexError::NotEquivariant(n));
            }
        }
        for n in lo - 1..=hi {
            if s.diff(n).mul(&self.at(n + 1)) != self.at(n).mul(&t.diff(n)) {
                return Err(ComplexError::NotChainMap(n));
            }
        }
        Ok(())
    }

    pub fn identity(x: &Complex) -> ChainMap {
        let maps = x.window().map_or(vec![], |(lo, hi)| (lo..=hi).map(|n| Mat::identity(x.p(), x.dim_at(n))).collect());
        ChainMap { source: Arc::new(x.clone()), target: Arc::new(x.clone()), maps }
    }

    pub fn zero(x: &Complex, y: &Complex) -> ChainMap {
        ChainMap::from_window(x, y, 0, vec![])
    }

    // Identity in degrees where both complexes agree (truncation inclusions).
    pub(crate) fn identity_on_overlap(x: &Complex, y: &Complex) -> ChainMap {
        let maps = x.window().map_or(vec![], |(lo, hi)| (lo..=hi).map(|n| Mat::identity(x.p(), x.dim_at(n))).collect());
        let lo = x.window().map_or(0, |w| w.0);
        ChainMap::from_window(x, y, lo, maps)
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }
    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn at(&self, n: i64) -> Mat {
        match self.source.window() {
            Some((lo, hi)) if n >= lo && n <= hi => self.maps[(n - lo) as usize].clone(),
            _ => Mat::zeros(self.source.p(), self.source.dim_at(n), self.target.dim_at(n)),
        }
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &ChainMap) -> ChainMap {
        let maps: Vec<Mat> = match self.source.window() {
            None => vec![],
            Some((lo, hi)) => (lo..=hi).map(|n| self.at(n).mul(&g.at(n))).collect(),
        };
        let lo = self.source.window().map_or(0, |w| w.0);
        ChainMap::from_window(&self.source, &g.target, lo, maps)
    }

    pub fn add(&self, o: &ChainMap) -> ChainMap {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &ChainMap) -> ChainMap {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn scale(&self, s: u32) -> ChainMap {
        ChainMap { source: self.source.clone(), target: self.target.clone(), maps: self.maps.iter().map(|m| m.scale(s)).collect() }
    }

    fn zip(&self, o: &ChainMap, op: impl Fn(&Mat, &Mat) -> Mat) -> ChainMap {
        let maps = self.maps.iter().zip(&o.maps).map(|(a, b)| op(a, b)).collect();
        ChainMap { source: self.source.clone(), target: self.target.clone(), maps }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }

    /// The same components viewed between other complexes with equal terms.
    pub fn retarget(&self, source: &Complex, target: &Complex) -> ChainMap {
        let lo = self.source.window().map_or(0, |w| w.0);
        ChainMap::from_window(source, target, lo, self.maps.clone())
    }

    /// `Σ^m f`, with components `f^{n+m}`.
    pub fn shift(&self, m: i64) -> ChainMap {
        let s = self.source.shift(m);
        let t = self.target.shift(m);
        let lo = self.source.window().map_or(0, |w| w.0) - m;
        ChainMap::from_window(&s, &t, lo, self.maps.clone())
    }

    /// Induced map `H^n(X) -> H^n(Y)` in the chosen cohomology bases.
    pub fn on_cohomology(&self, n: i64, hx: &Cohomology, hy: &Cohomology) -> Mat {
        let f = self.at(n);
        let mut m = Mat::zeros(self.source.p(), hx.dim(), hy.dim());
        for r in 0..hx.dim() {
            let img = f.vec_mul(hx.lifts.row(r));
            let c = hy.class_of(&img).expect("chain maps send cycles to cycles");
            for (j, v) in c.into_iter().enumerate() {
                m.set(r, j, v);
            }
        }
        m
    }

    /// Checks `self - other = d h + h d` for `h^n: X^n -> Y^{n-1}` given on the source window.
    pub fn homotopic_via(&self, other: &ChainMap, h: &Homotopy) -> bool {
        let (s, t) = (&*self.source, &*self.target);
        let Some((lo, hi)) = s.window() else {
            return true;
        };
        (lo..=hi).all(|n| {
            let lhs = self.at(n).sub(&other.at(n));
            let rhs = s.diff(n).mul(&h.at(n + 1, s, t)).add(&h.at(n, s, t).mul(&t.diff(n - 1)));
            lhs == rhs
        })
    }
}

/// Maps `h^n: X^n -> Y^{n-1}`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    pub lo: i64,
    pub maps: Vec<Mat>,
}

impl Homotopy {
    pub fn at(&self, n: i64, x: &Complex, y: &Complex) -> Mat {
        let k = n - self.lo;
        if k >= 0 && (k as usize) < self.maps.len() {
            self.maps[k as usize].clone()
        } else {
            Mat::zeros(x.p(), x.dim_at(n), y.dim_at(n - 1))
        }
    }
}

/// Mapping cone of `f: X -> Y` with the maps `Y -> cone(f) -> ΣX`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub complex: Complex,
    pub inclusion: ChainMap,
    pub projection: ChainMap,
}

pub fn cone(f: &ChainMap) -> Cone {
    let (x, y) = (f.source(), f.target());
    let alg = x.algebra().clone();
    let p = x.p();
    let sx = x.shift(1);
    let bounds: Vec<(i64, i64)> = [sx.window(), y.window()].into_iter().flatten().collect();
    if bounds.is_empty() {
        let z = Complex::zero(&alg);
        return Cone { inclusion: ChainMap::zero(y, &z), projection: ChainMap::zero(&z, &sx), complex: z };
    }
    let lo = bounds.iter().map(|b| b.0).min().unwrap();
    let hi = bounds.iter().map(|b| b.1).max().unwrap();
    let terms: Vec<Module> = (lo..=hi).map(|n| Module::direct_sum(&[&x.term(n + 1), &y.term(n)])).collect();
    let diffs: Vec<Mat> = (lo..hi)
        .map(|n| {
            let (a0, b0) = (x.dim_at(n + 1), y.dim_at(n));
            let (a1, b1) = (x.dim_at(n + 2), y.dim_at(n + 1));
            let mut d = Mat::zeros(p, a0 + b0, a1 + b1);
            d.set_block(0, 0, &x.diff(n + 1).neg());
            d.set_block(0, a1, &f.at(n + 1));
            d.set_block(a0, a1, &y.diff(n));
            d
        })
        .collect();
    let c = Complex::new_unchecked(&alg, lo, terms, diffs);
    let incl: Vec<Mat> = (lo..=hi)
        .map(|n| {
            let mut m = Mat::zeros(p, y.dim_at(n), x.dim_at(n + 1) + y.dim_at(n));
            m.set_block(0, x.dim_at(n + 1), &Mat::identity(p, y.dim_at(n)));
            m
        })
        .collect();
    let proj: Vec<Mat> = (lo..=hi)
        .map(|n| {
            let mut m = Mat::zeros(p, x.dim_at(n + 1) + y.dim_at(n), x.dim_at(n + 1));
            m.set_block(0, 0, &Mat::identity(p, x.dim_at(n + 1)));
            m
        })
        .collect();
    let inclusion = ChainMap::from_window(y, &c, lo, incl);
    let projection = ChainMap::from_window(&c, &sx, lo, proj);
    Cone { complex: c, inclusion, projection }
}

/// Contracting homotopy of `cone(id_X)`: `h(x, y) = (y, 0)`.
pub fn cone_identity_contraction(x: &Complex) -> Homotopy {
    let p = x.p();
    let c = cone(&ChainMap::identity(x)).complex;
    let Some((lo, hi)) = c.window() else {
        return Homotopy { lo: 0, maps: vec![] };
    };
    let maps = (lo..=hi)
        .map(|n| {
            // cone^n = X^{n+1} ⊕ X^n -> cone^{n-1} = X^n ⊕ X^{n-1}
            let (a, b) = (x.dim_at(n + 1), x.dim_at(n));
            let (a1, b1) = (x.dim_at(n), x.dim_at(n - 1));
            let mut h = Mat::zeros(p, a + b, a1 + b1);
            h.set_block(a, 0, &Mat::identity(p, b));
            h
        })
        .collect();
    Homotopy { lo, maps }
}

/// `τ_{>n}(f)` between the quotient complexes.
pub fn tau_gt_map(f: &ChainMap, n: i64) -> ChainMap {
    let (tx, px) = f.source().tau_gt(n);
    let (ty, py) = f.target().tau_gt(n);
    let p = f.source().p();
    let Some((lo, hi)) = tx.window() else {
        return ChainMap::zero(&tx, &ty);
    };
    let maps = (lo..=hi)
        .map(|m| {
            // lift through the source projection, map, project
            let lift = lift_of_projection(&px.at(m));
            let g = lift.mul(&f.at(m)).mul(&py.at(m));
            if g.shape() == (tx.dim_at(m), ty.dim_at(m)) {
                g
            } else {
                Mat::zeros(p, tx.dim_at(m), ty.dim_at(m))
            }
        })
        .collect();
    ChainMap::from_window(&tx, &ty, lo, maps)
}

/// Cohomology ranks `(dim H^n X, dim H^n Y, rank H^n f)` over the combined window.
pub fn cohomology_ranks(f: &ChainMap) -> Vec<(i64, usize, usize, usize)> {
    let ws: Vec<(i64, i64)> = [f.source().window(), f.target().window()].into_iter().flatten().collect();
    if ws.is_empty() {
        return vec![];
    }
    let lo = ws.iter().map(|w| w.0).min().unwrap();
    let hi = ws.iter().map(|w| w.1).max().unwrap();
    (lo..=hi)
        .map(|n| {
            let hx = f.source().cohomology(n);
            let hy = f.target().cohomology(n);
            let r = f.on_cohomology(n, &hx, &hy).rank();
            (n, hx.dim(), hy.dim(), r)
        })
        .collect()
}

/// `H^n(f)` is an isomorphism in every degree.
pub fn is_quasi_iso(f: &ChainMap) -> bool {
    cohomology_ranks(f).into_iter().all(|(_, a, b, r)| a == b && r == a)
}

/// `H^n(f)` is an isomorphism for every `n > bound`.
pub fn is_quasi_iso_above(f: &ChainMap, bound: i64) -> bool {
    cohomology_ranks(f).into_iter().filter(|t| t.0 > bound).all(|(_, a, b, r)| a == b && r == a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{truncated_poly, Module};

    fn d2_x() -> (Complex, Complex, ChainMap) {
        let a = truncated_poly(2, 2).unwrap();
        let reg = Module::regular(&a);
        let x = Complex::stalk(&reg, 0);
        // multiplication by x on the left: row v -> v * [[0,1],[0,0]]
        let f = ChainMap::new(&x, &x, 0, vec![Mat::from_rows(2, &[vec![0, 1], vec![0, 0]])]).unwrap();
        (x.clone(), x, f)
    }

    #[test]
    fn cone_of_x_has_two_cohomologies() {
        let (_, _, f) = d2_x();
        let c = cone(&f).complex;
        assert_eq!(c.cohomology_dim(0), 1);
        assert_eq!(c.cohomology_dim(-1), 1);
        assert!(c.check().is_ok());
    }

    #[test]
    fn cone_of_identity_is_contractible() {
        let (x, _, _) = d2_x();
        let c = cone(&ChainMap::identity(&x)).complex;
        let h = cone_identity_contraction(&x);
        assert!(ChainMap::identity(&c).homotopic_via(&ChainMap::zero(&c, &c), &h));
        assert!(c.is_acyclic());
    }

    #[test]
    fn tau_splits_cohomology() {
        let (_, _, f) = d2_x();
        let c = cone(&f).complex;
        let (hi, _) = c.tau_gt(-1);
        assert_eq!(hi.cohomology_dim(0), 1);
        assert_eq!(hi.cohomology_dim(-1), 0);
        let (lo, _) = c.tau_leq(-1);
        assert_eq!(lo.cohomology_dim(-1), 1);
        assert_eq!(lo.cohomology_dim(0), 0);
    }
}
