//! Homotopy-category homs, projective resolutions of complexes and
//! bounded-derived homs computed on deep enough truncations.

use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::algebra::{cover_generators, generator_vectors, lift_through, map_from_generators, module_hom, proj_module, AlgError, HomBasis, Module};
use crate::complexes::{tau_gt_map, ChainMap, Complex, ComplexError};
use crate::exactla::{quotient_basis, ColumnSolver, LaError, Mat, Quotient};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivedError {
    #[error("window unverified: hom dimension changes from {0} to {1} between depths {2} and {3}")]
    WindowUnverified(usize, usize, usize, usize),
    #[error("lift into the resolution fails in degree {0}")]
    LiftFailed(i64),
    #[error("chain map is not in the hom space")]
    NotInSpace,
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    La(#[from] LaError),
}

// ------------------------------------------------------------ K-homs

/// `Hom_K(X, Y)`: chain maps modulo null-homotopic ones.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Complex,
    target: Complex,
    degrees: Vec<(i64, HomBasis)>,
    offsets: Vec<usize>,
    quotient: Quotient,
    pub basis: Vec<ChainMap>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn source(&self) -> &Complex {
        &self.source
    }
    pub fn target(&self) -> &Complex {
        &self.target
    }

    fn unknowns(&self) -> usize {
        self.offsets.last().copied().unwrap_or(0)
    }

    // Coordinates of a degreewise map on the per-degree hom bases.
    fn flat_coords(&self, f: &ChainMap) -> Option<Vec<u32>> {
        let mut u = Vec::with_capacity(self.unknowns());
        for (n, hb) in &self.degrees {
            u.extend(hb.coords(&f.at(*n))?);
        }
        Some(u)
    }

    /// Class of a chain map `source -> target` in the chosen basis.
    pub fn class_of(&self, f: &ChainMap) -> Result<Vec<u32>, DerivedError> {
        let u = self.flat_coords(f).ok_or(DerivedError::NotInSpace)?;
        self.quotient.coords(&u).ok_or(DerivedError::NotInSpace)
    }

    pub fn is_null_homotopic(&self, f: &ChainMap) -> Result<bool, DerivedError> {
        Ok(self.class_of(f)?.iter().all(|&x| x == 0))
    }

    pub fn combine(&self, c: &[u32]) -> ChainMap {
        let mut f = ChainMap::zero(&self.source, &self.target);
        for (b, &x) in self.basis.iter().zip(c) {
            if x != 0 {
                f = f.add(&b.scale(x));
            }
        }
        f
    }

    /// Matrix of a linear operation `from -> self` on basis representatives;
    /// row `r` is the class of `op(from.basis[r])`.
    pub fn map_matrix(&self, from: &HomSpace, op: impl Fn(&ChainMap) -> ChainMap) -> Result<Mat, DerivedError> {
        let p = self.source.p();
        let mut m = Mat::zeros(p, from.dim(), self.dim());
        for (r, b) in from.basis.iter().enumerate() {
            let c = self.class_of(&op(b))?;
            for (j, x) in c.into_iter().enumerate() {
                m.set(r, j, x);
            }
        }
        Ok(m)
    }
}

/// Rows of a module on which module maps out of it are determined.
fn test_rows(m: &Module) -> Mat {
    match generator_vectors(m) {
        Ok(g) if m.proj_summands().is_some() => crate::algebra::rows_to_mat(m.p(), m.dim(), &g),
        _ => Mat::identity(m.p(), m.dim()),
    }
}

pub fn khom(x: &Complex, y: &Complex) -> Result<HomSpace, DerivedError> {
    let p = x.p();
    let (xw, yw) = (x.window(), y.window());
    let (lo, hi) = match (xw, yw) {
        (Some(a), Some(b)) if a.0.max(b.0) <= a.1.min(b.1) => (a.0.max(b.0), a.1.min(b.1)),
        _ => (0, -1),
    };
    let mut degrees = Vec::new();
    let mut offsets = vec![0];
    for n in lo..=hi {
        let hb = module_hom(&x.term(n), &y.term(n))?;
        offsets.push(offsets.last().unwrap() + hb.dim());
        degrees.push((n, hb));
    }
    let u = *offsets.last().unwrap();
    let deg_index = |n: i64| (n >= lo && n <= hi).then(|| (n - lo) as usize);

    // Chain condition g (d_X F^{n+1} - F^n d_Y) = 0 on test rows g of X^n.
    let mut blocks: Vec<(i64, Mat, usize)> = Vec::new();
    let mut rows = 0;
    if let Some((xlo, xhi)) = xw {
        for n in xlo..=xhi {
            if y.dim_at(n + 1) == 0 && y.dim_at(n) == 0 {
                continue;
            }
            let t = test_rows(&x.term(n));
            blocks.push((n, t.clone(), rows));
            rows += t.rows() * y.dim_at(n + 1);
        }
    }
    let mut sys = Mat::zeros(p, rows, u);
    for (n, t, r0) in &blocks {
        let n = *n;
        let w = y.dim_at(n + 1);
        if w == 0 {
            continue;
        }
        if let Some(k) = deg_index(n) {
            let dy = y.diff(n);
            for (j, b) in degrees[k].1.mats.iter().enumerate() {
                let v = t.mul(b).mul(&dy);
                for g in 0..t.rows() {
                    for c in 0..w {
                        let val = v.get(g, c);
                        if val != 0 {
                            sys.set(r0 + g * w + c, offsets[k] + j, (p - val) % p);
                        }
                    }
                }
            }
        }
        if let Some(k) = deg_index(n + 1) {
            let tdx = t.mul(&x.diff(n));
            for (j, b) in degrees[k].1.mats.iter().enumerate() {
                let v = tdx.mul(b);
                for g in 0..t.rows() {
                    for c in 0..w {
                        let val = v.get(g, c);
                        if val != 0 {
                            let idx = (r0 + g * w + c, offsets[k] + j);
                            sys.set(idx.0, idx.1, (sys.get(idx.0, idx.1) + val) % p);
                        }
                    }
                }
            }
        }
    }
    let cycles = if u == 0 { Mat::zeros(p, 0, 0) } else { sys.kernel_basis() };

    // Null-homotopic maps d h + h d for h^n: X^n -> Y^{n-1}.
    let mut bcols: Vec<Vec<u32>> = Vec::new();
    if let (Some((xlo, xhi)), true) = (xw, u > 0) {
        for n in xlo..=xhi {
            if y.dim_at(n - 1) == 0 {
                continue;
            }
            let hb = module_hom(&x.term(n), &y.term(n - 1))?;
            for h in &hb.mats {
                let mut col = vec![0u32; u];
                if let Some(k) = deg_index(n) {
                    let c = degrees[k].1.coords(&h.mul(&y.diff(n - 1))).expect("hd is a module map");
                    col[offsets[k]..offsets[k + 1]].copy_from_slice(&c);
                }
                if let Some(k) = deg_index(n - 1) {
                    let c = degrees[k].1.coords(&x.diff(n - 1).mul(h)).expect("dh is a module map");
                    for (i, v) in c.into_iter().enumerate() {
                        let e = &mut col[offsets[k] + i];
                        *e = (*e + v) % p;
                    }
                }
                bcols.push(col);
            }
        }
    }
    let mut bmat = Mat::zeros(p, u, bcols.len());
    for (j, c) in bcols.iter().enumerate() {
        for (i, &v) in c.iter().enumerate() {
            bmat.set(i, j, v);
        }
    }
    let cyc = if u == 0 { Mat::zeros(p, 0, 0) } else { cycles };
    let quotient = quotient_basis(&cyc, &bmat)?;
    let basis = (0..quotient.dim())
        .map(|j| {
            let v = quotient.lift_basis.col_vec(j);
            let maps: Vec<Mat> = degrees
                .iter()
                .enumerate()
                .map(|(k, (_, hb))| hb.combine(p, &v[offsets[k]..offsets[k + 1]]))
                .collect();
            ChainMap::from_window(x, y, lo, maps)
        })
        .collect();
    Ok(HomSpace { source: x.clone(), target: y.clone(), degrees, offsets, quotient, basis })
}

// ------------------------------------------------------- resolutions

#[derive(Clone, Debug)]
struct Level {
    module: Module,
    d: Mat,
    pi: Mat,
}

/// Projective resolution `P -> X` built degree by degree from the top by
/// covering the cycles of the cone of the partial map.
#[derive(Debug)]
pub struct Resolution {
    target: Complex,
    // levels[k] sits in degree top - k
    levels: Mutex<Vec<Level>>,
}

impl Resolution {
    pub fn new(x: &Complex) -> Arc<Resolution> {
        Arc::new(Resolution { target: x.clone(), levels: Mutex::new(Vec::new()) })
    }

    pub fn of_module(m: &Module) -> Arc<Resolution> {
        Self::new(&Complex::stalk(m, 0))
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    fn top(&self) -> i64 {
        self.target.window().map_or(0, |w| w.1)
    }

    /// Degrees computed so far reach down to this value.
    pub fn computed_to(&self) -> i64 {
        self.top() + 1 - self.levels.lock().unwrap().len() as i64
    }

    fn ensure(&self, low: i64) -> Result<(), DerivedError> {
        let mut levels = self.levels.lock().unwrap();
        if self.target.is_zero() {
            return Ok(());
        }
        let x = &self.target;
        let alg = x.algebra();
        let p = x.p();
        let top = self.top();
        while top - (levels.len() as i64) >= low {
            let n = top - levels.len() as i64;
            let (pn1, d1, pi1) = match levels.last() {
                Some(l) => (l.module.clone(), l.d.clone(), l.pi.clone()),
                None => (Module::zero(alg), Mat::zeros(p, 0, 0), Mat::zeros(p, 0, x.dim_at(n + 1))),
            };
            let xn = x.term(n);
            let amb = Module::direct_sum(&[&pn1, &xn]);
            let (a, b) = (pn1.dim(), xn.dim());
            let (a2, b2) = (d1.cols(), x.dim_at(n + 1));
            // cone differential (q, y) -> (-q d, q π + y d_X)
            let mut delta = Mat::zeros(p, a + b, a2 + b2);
            delta.set_block(0, 0, &d1.neg());
            delta.set_block(0, a2, &pi1);
            delta.set_block(a, a2, &x.diff(n));
            let z = if a + b == 0 { Mat::zeros(p, 0, 0) } else { delta.left_kernel().row_space_basis() };
            let (zm, incl) = amb.submodule(&z);
            let dprev = x.diff(n - 1);
            let mut w_amb = Mat::zeros(p, dprev.rows(), a + b);
            w_amb.set_block(0, a, &dprev);
            let solver = ColumnSolver::new(&incl.transpose());
            let mut w = Mat::zeros(p, w_amb.rows(), zm.dim());
            for r in 0..w_amb.rows() {
                let c = solver.coords(w_amb.row(r)).expect("boundaries are cycles");
                for (j, v) in c.into_iter().enumerate() {
                    w.set(r, j, v);
                }
            }
            let gens = cover_generators(&zm, &w)?;
            let summands: Vec<usize> = gens.iter().map(|g| g.0).collect();
            let pm = proj_module(alg, &summands)?;
            let mut d_imgs = Vec::new();
            let mut pi_imgs = Vec::new();
            for (_, v) in &gens {
                let amb_v = incl.vec_mul(v);
                d_imgs.push(amb_v[..a].iter().map(|&t| (p - t) % p).collect::<Vec<u32>>());
                pi_imgs.push(amb_v[a..].to_vec());
            }
            let d = map_from_generators(&pm, &pn1, &d_imgs)?;
            let pi = map_from_generators(&pm, &xn, &pi_imgs)?;
            levels.push(Level { module: pm, d, pi });
        }
        Ok(())
    }

    fn level(&self, n: i64) -> Result<Option<Level>, DerivedError> {
        if self.target.is_zero() || n > self.top() {
            return Ok(None);
        }
        self.ensure(n)?;
        let levels = self.levels.lock().unwrap();
        Ok(Some(levels[(self.top() - n) as usize].clone()))
    }

    pub fn term(&self, n: i64) -> Result<Module, DerivedError> {
        Ok(self.level(n)?.map_or_else(|| Module::zero(self.target.algebra()), |l| l.module))
    }

    /// `σ_{≥lo} P` with the augmentation to the target.
    pub fn truncated_at(&self, lo: i64) -> Result<(Complex, ChainMap), DerivedError> {
        let alg = self.target.algebra();
        if self.target.is_zero() || lo > self.top() {
            let z = Complex::zero(alg);
            let f = ChainMap::zero(&z, &self.target);
            return Ok((z, f));
        }
        self.ensure(lo)?;
        let levels = self.levels.lock().unwrap();
        let top = self.top();
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        let mut pis = Vec::new();
        for n in lo..=top {
            let l = &levels[(top - n) as usize];
            terms.push(l.module.clone());
            if n < top {
                diffs.push(l.d.clone());
            }
            pis.push(l.pi.clone());
        }
        drop(levels);
        let c = Complex::new_unchecked(alg, lo, terms, diffs);
        // trimming may move the window; rebuild components by degree
        let f = ChainMap::from_window(&c, &self.target, lo, pis);
        Ok((c, f))
    }

    /// `X_i = σ_{≥-i} P` with its augmentation.
    pub fn truncation(&self, i: usize) -> Result<(Complex, ChainMap), DerivedError> {
        self.truncated_at(-(i as i64))
    }

    /// The degree-`n` differential `P^n -> P^{n+1}`.
    pub fn diff(&self, n: i64) -> Result<Mat, DerivedError> {
        let p = self.target.p();
        match self.level(n)? {
            Some(l) if n < self.top() => Ok(l.d),
            Some(l) => Ok(Mat::zeros(p, l.module.dim(), 0)),
            None => Ok(Mat::zeros(p, 0, self.term(n + 1)?.dim())),
        }
    }

    pub fn augmentation(&self, n: i64) -> Result<Mat, DerivedError> {
        match self.level(n)? {
            Some(l) => Ok(l.pi),
            None => Ok(Mat::zeros(self.target.p(), 0, self.target.dim_at(n))),
        }
    }

    /// All differentials down to `lo` land in `P · rad Λ`.
    pub fn is_minimal(&self, lo: i64) -> Result<bool, DerivedError> {
        if self.target.is_zero() {
            return Ok(true);
        }
        for n in lo..self.top() {
            let d = self.diff(n)?;
            let target = self.term(n + 1)?;
            let rad = target.radical()?;
            if d.rows() == 0 || rad.cols() == 0 {
                if !d.is_zero() && rad.rows() == 0 {
                    return Ok(false);
                }
                continue;
            }
            let both = Mat::vstack(target.p(), target.dim(), &[&rad, &d]);
            if both.rank() != rad.rows() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Resolution of `Σ^shift Y` read off from a resolution of `Y`.
#[derive(Clone, Debug)]
pub struct ShiftedResolution {
    pub res: Arc<Resolution>,
    pub shift: i64,
}

impl ShiftedResolution {
    fn sign(&self) -> bool {
        self.shift.rem_euclid(2) == 1
    }
    fn term(&self, k: i64) -> Result<Module, DerivedError> {
        self.res.term(k + self.shift)
    }
    fn diff(&self, k: i64) -> Result<Mat, DerivedError> {
        let d = self.res.diff(k + self.shift)?;
        Ok(if self.sign() { d.neg() } else { d })
    }
    fn aug(&self, k: i64) -> Result<Mat, DerivedError> {
        self.res.augmentation(k + self.shift)
    }
    pub fn target(&self) -> Complex {
        self.res.target().shift(self.shift)
    }
    /// `Σ^shift σ_{≥lo+shift} P` with its augmentation to `Σ^shift Y`.
    pub fn truncated_at(&self, lo: i64) -> Result<(Complex, ChainMap), DerivedError> {
        let (c, f) = self.res.truncated_at(lo + self.shift)?;
        Ok((c.shift(self.shift), f.shift(self.shift)))
    }
}

/// Lifts `g: A -> Y'` along the augmentation of a resolution of `Y'`, where
/// `A` has projective terms. The lift lands in `σ_{≥lo A}` of the resolution
/// and satisfies `π φ ≃ g`.
pub fn lift_to_resolution(g: &ChainMap, res: &ShiftedResolution) -> Result<ChainMap, DerivedError> {
    let a = g.source();
    let y = g.target();
    let p = a.p();
    let Some((lo, hi)) = a.window() else {
        let (t, _) = res.truncated_at(0)?;
        return Ok(ChainMap::zero(a, &t));
    };
    let top = hi.max(res.target().window().map_or(hi, |w| w.1));
    let mut phi: Vec<(i64, Mat)> = Vec::new();
    let mut s_next = Mat::zeros(p, a.dim_at(top + 1), y.dim_at(top));
    let mut phi_next = Mat::zeros(p, a.dim_at(top + 1), res.term(top + 1)?.dim());
    for n in (lo..=top).rev() {
        let an = a.term(n);
        let pn = res.term(n)?;
        let pn1 = res.term(n + 1)?;
        let yprev = y.term(n - 1);
        let da = a.diff(n);
        let need_p = da.mul(&phi_next);
        let need_y = g.at(n).sub(&da.mul(&s_next));
        let (w_p, w_y) = (pn.dim(), yprev.dim());
        let (v_p, v_y) = (pn1.dim(), y.dim_at(n));
        let mut t = Mat::zeros(p, w_p + w_y, v_p + v_y);
        t.set_block(0, 0, &res.diff(n)?);
        t.set_block(0, v_p, &res.aug(n)?);
        t.set_block(w_p, v_p, &y.diff(n - 1));
        let needed = Mat::hstack(p, an.dim(), &[&need_p, &need_y]);
        let (phi_n, s_n) = if an.dim() == 0 {
            (Mat::zeros(p, 0, w_p), Mat::zeros(p, 0, w_y))
        } else {
            let w = Module::direct_sum(&[&pn, &yprev]);
            let l = lift_through(&an, &w, &t, &needed)?.ok_or(DerivedError::LiftFailed(n))?;
            (l.block(0, 0, an.dim(), w_p), l.block(0, w_p, an.dim(), w_y))
        };
        phi.push((n, phi_n.clone()));
        phi_next = phi_n;
        s_next = s_n;
    }
    phi.reverse();
    let (target, _) = res.truncated_at(lo)?;
    let maps: Vec<Mat> = phi.into_iter().map(|(_, m)| m).collect();
    let f = ChainMap::from_window(a, &target, lo, maps);
    debug_assert!(f.check().is_ok());
    Ok(f)
}

// --------------------------------------------------------- derived homs

/// Stabilization depth for maps into a target whose cohomology starts at `a`.
pub fn stabilization_depth(a: Option<i64>) -> usize {
    match a {
        None => 0,
        Some(a) => ((1 - a).max(0) + 1) as usize,
    }
}

/// `Hom_{D^b}(X, Σ^shift Y)` computed on `σ_{≥-depth} P_X`.
#[derive(Clone, Debug)]
pub struct DbHom {
    pub shift: i64,
    pub depth: usize,
    pub space: HomSpace,
    pub res: Arc<Resolution>,
    pub target: Complex,
    /// `(depth, dim)` pairs checked beyond the formula.
    pub checked: Vec<(usize, usize)>,
}

impl DbHom {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Class of a chain map `σ_{≥-k} P_X -> Σ^shift Y` for any `k ≥ depth`.
    pub fn class_of(&self, f: &ChainMap) -> Result<Vec<u32>, DerivedError> {
        let restricted = restrict_to(f, self.space.source())?;
        self.space.class_of(&restricted)
    }
}

/// Restricts a map out of a brutal truncation to a shorter truncation.
pub fn restrict_to(f: &ChainMap, sub: &Complex) -> Result<ChainMap, DerivedError> {
    let lo = sub.window().map_or(0, |w| w.0);
    let maps: Vec<Mat> = sub.window().map_or(vec![], |(lo, hi)| (lo..=hi).map(|n| f.at(n)).collect());
    let g = ChainMap::from_window(sub, f.target(), lo, maps);
    g.check()?;
    Ok(g)
}

pub fn dbhom(x: &Complex, y: &Complex, shift: i64) -> Result<DbHom, DerivedError> {
    dbhom_with(&Resolution::new(x), y, shift)
}

pub fn dbhom_with(res: &Arc<Resolution>, y: &Complex, shift: i64) -> Result<DbHom, DerivedError> {
    let target = y.shift(shift);
    let depth = stabilization_depth(target.cohomology_window().map(|w| w.0));
    dbhom_at(res, &target, shift, depth, true)
}

/// Computes at a given depth; `verify` compares against one extra step.
pub fn dbhom_at(res: &Arc<Resolution>, target: &Complex, shift: i64, depth: usize, verify: bool) -> Result<DbHom, DerivedError> {
    let (xi, _) = res.truncation(depth)?;
    let space = khom(&xi, target)?;
    let mut checked = vec![(depth, space.dim())];
    if verify {
        let (xn, _) = res.truncation(depth + 1)?;
        let next = khom(&xn, target)?;
        // restriction along σ_{≥-i} ⊆ σ_{≥-i-1} must be bijective
        let m = space.map_matrix(&next, |f| restrict_to(f, &xi).expect("truncation inclusion"))?;
        if next.dim() != space.dim() || m.rank() != space.dim() {
            return Err(DerivedError::WindowUnverified(space.dim(), next.dim(), depth, depth + 1));
        }
        checked.push((depth + 1, next.dim()));
    }
    Ok(DbHom { shift, depth, space, res: res.clone(), target: target.clone(), checked })
}

/// Composite `g ∘ f` of `f ∈ Hom(X, Σ^n Y)` and `g ∈ Hom(Y, Σ^m W)` as a
/// chain map out of `f`'s truncation of `P_X`.
pub fn db_compose(f_space: &DbHom, f: &[u32], g_space: &DbHom, g: &[u32]) -> Result<ChainMap, DerivedError> {
    db_lift(f_space, f, g_space)?.compose(g)
}

/// A lift of `f ∈ Hom(X, Σ^n Y)` through the resolution of `Y`, ready to be
/// composed with classes of `g_space`.
pub struct DbLift {
    lifted: ChainMap,
    shift: i64,
    deep: HomSpace,
    // g coordinates -> coordinates on the deep truncation
    transfer: Option<Mat>,
}

impl DbLift {
    pub fn compose(&self, g: &[u32]) -> Result<ChainMap, DerivedError> {
        let c = match &self.transfer {
            Some(t) => t.vec_mul(g),
            None => g.to_vec(),
        };
        let gmap = self.deep.combine(&c);
        let g_on = restrict_to(&gmap.shift(self.shift), self.lifted.target())?;
        Ok(self.lifted.then(&g_on))
    }
}

pub fn db_lift(f_space: &DbHom, f: &[u32], g_space: &DbHom) -> Result<DbLift, DerivedError> {
    let fmap = f_space.space.combine(f);
    let n = f_space.shift;
    let view = ShiftedResolution { res: g_space.res.clone(), shift: n };
    let lifted = lift_to_resolution(&fmap, &view)?;
    // the lift reaches P_Y down to degree lo + n; g must be defined there
    let need = lifted.target().window().map_or(0, |w| (-(w.0 + n)).max(0) as usize);
    let (deep, transfer) = if need > g_space.depth {
        let deep = dbhom_at(&g_space.res, &g_space.target, g_space.shift, need, false)?;
        let shallow = g_space.space.source().clone();
        let r = g_space.space.map_matrix(&deep.space, |h| restrict_to(h, &shallow).expect("truncation inclusion"))?;
        let inv = r.inverse().ok_or(DerivedError::WindowUnverified(deep.dim(), g_space.dim(), need, g_space.depth))?;
        (deep.space, Some(inv))
    } else {
        (g_space.space.clone(), None)
    };
    Ok(DbLift { lifted, shift: n, deep, transfer })
}

/// The class of `g` re-expressed on a deeper truncation.
pub fn deepen(space: &DbHom, g: &[u32], depth: usize) -> Result<ChainMap, DerivedError> {
    let deep = dbhom_at(&space.res, &space.target, space.shift, depth, false)?;
    let shallow = space.space.source().clone();
    let r = space.space.map_matrix(&deep.space, |f| restrict_to(f, &shallow).expect("truncation inclusion"))?;
    let c = r.solve_left(g)?.ok_or(DerivedError::WindowUnverified(deep.dim(), space.dim(), depth, space.depth))?;
    Ok(deep.space.combine(&c))
}

// ------------------------------------------------ pseudo-coherence

/// `τ_{>-i}(f)` is a quasi-isomorphism, where `f` is an augmentation
/// `σ_{≥-i} P -> X`. Fails when `f` is not a chain map.
pub fn pc_check(f: &ChainMap, i: usize) -> bool {
    if f.check().is_err() || f.source().check().is_err() {
        return false;
    }
    let t = tau_gt_map(f, -(i as i64));
    crate::complexes::is_quasi_iso(&t)
}

pub fn pc_certificate(res: &Resolution, i: usize) -> Result<bool, DerivedError> {
    let (_, f) = res.truncation(i)?;
    Ok(pc_check(&f, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{simples, truncated_poly};

    #[test]
    fn ext_of_simple_over_dual_numbers() {
        let a = truncated_poly(2, 2).unwrap();
        let k = Complex::stalk(&simples(&a).unwrap()[0], 0);
        for n in -2..=4 {
            let h = dbhom(&k, &k, n).unwrap();
            assert_eq!(h.dim(), usize::from(n >= 0), "shift {n}");
        }
    }

    #[test]
    fn resolution_is_minimal_and_pc() {
        let a = truncated_poly(2, 2).unwrap();
        let res = Resolution::of_module(&simples(&a).unwrap()[0]);
        for i in 0..5 {
            assert!(pc_certificate(&res, i).unwrap());
            assert_eq!(res.term(-(i as i64)).unwrap().dim(), 2);
        }
        assert!(res.is_minimal(-4).unwrap());
    }
}
