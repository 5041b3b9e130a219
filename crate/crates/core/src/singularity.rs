//! Stable module homs, syzygies and homs in the singularity category
//! `D^b(mod Λ) / D^per(Λ)` via the syzygy colimit.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{is_projective, k_dual, lift_through, module_hom, proj_indecs, projective_cover, AlgError, Algebra, HomBasis, Module};
use crate::complexes::Complex;
use crate::derived::{dbhom_at, dbhom_with, khom, stabilization_depth, DerivedError, Resolution};
use crate::exactla::{quotient_basis, Mat, Quotient};

/// `Hom(M, N)` modulo maps factoring through a projective.
#[derive(Clone, Debug)]
pub struct StableHomSpace {
    pub source: Module,
    pub target: Module,
    pub hom: HomBasis,
    /// Dimension of the subspace of maps factoring through a projective.
    pub factoring_dim: usize,
    quotient: Quotient,
}

impl StableHomSpace {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn class_of(&self, f: &Mat) -> Result<Vec<u32>, AlgError> {
        let c = self.hom.coords(f).ok_or_else(|| AlgError::Shape("not a module map".into()))?;
        self.quotient.coords(&c).ok_or_else(|| AlgError::Shape("coordinates outside the hom space".into()))
    }

    /// Module map representing the `k`-th basis class.
    pub fn representative(&self, k: usize) -> Mat {
        let c = self.quotient.lift_basis.col_vec(k);
        self.hom.combine(self.source.p(), &c)
    }
}

/// Stable homs: the factoring subspace is the image of `Hom(M, P(N)) -> Hom(M, N)`.
pub fn stable_hom(m: &Module, n: &Module) -> Result<StableHomSpace, AlgError> {
    let p = m.p();
    let hom = module_hom(m, n)?;
    let (pn, pi) = projective_cover(n)?;
    let through = module_hom(m, &pn)?;
    let h = hom.dim();
    let mut w = Mat::zeros(p, h, through.dim());
    for (j, u) in through.mats.iter().enumerate() {
        let c = hom.coords(&u.mul(&pi)).expect("composite is a module map");
        for (i, x) in c.into_iter().enumerate() {
            w.set(i, j, x);
        }
    }
    let quotient = quotient_basis(&Mat::identity(p, h), &w)?;
    let factoring_dim = w.rank();
    Ok(StableHomSpace { source: m.clone(), target: n.clone(), hom, factoring_dim, quotient })
}

/// `Ω M = ker(P(M) -> M)` with its inclusion into the cover, and the cover map.
#[derive(Clone, Debug)]
pub struct Syzygy {
    pub module: Module,
    pub inclusion: Mat,
    pub cover: Module,
    pub cover_map: Mat,
}

pub fn syzygy(m: &Module) -> Result<Syzygy, AlgError> {
    let (pm, pi) = projective_cover(m)?;
    let (module, inclusion) = pm.submodule(&pi.left_kernel());
    Ok(Syzygy { module, inclusion, cover: pm, cover_map: pi })
}

/// `Ω f: Ω A -> Ω B` induced by a lift of `f` to the covers.
pub fn syzygy_map(a: &Syzygy, b: &Syzygy, f: &Mat) -> Result<Mat, AlgError> {
    let p = a.cover.p();
    let needed = a.cover_map.mul(f);
    let lift = lift_through(&a.cover, &b.cover, &b.cover_map, &needed)?.ok_or_else(|| AlgError::Shape("cover does not lift".into()))?;
    let image = a.inclusion.mul(&lift);
    // coordinates in Ω B
    let solver = crate::exactla::ColumnSolver::new(&b.inclusion.transpose());
    let mut out = Mat::zeros(p, a.module.dim(), b.module.dim());
    for r in 0..image.rows() {
        let c = solver.coords(image.row(r)).ok_or_else(|| AlgError::Shape("lift leaves the syzygy".into()))?;
        for (j, x) in c.into_iter().enumerate() {
            out.set(r, j, x);
        }
    }
    Ok(out)
}

/// Λ is self-injective iff `D(Λ_{Λ^op})` is projective over Λ.
pub fn is_self_injective(alg: &Arc<Algebra>) -> Result<bool, AlgError> {
    let op = alg.opposite();
    let d = k_dual(&Module::regular(&op));
    is_projective(&d)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub enum SgCertificate {
    /// Ω is a stable auto-equivalence, so every colimit map is bijective.
    SelfInjective,
    /// A syzygy became projective, so all later terms vanish.
    Vanished { at: usize },
    /// Bijective maps observed from `from` to the horizon only.
    HorizonTagged { from: usize, horizon: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct SgHom {
    pub dim: usize,
    /// Dimensions of the stable hom spaces along the colimit.
    pub terms: Vec<usize>,
    pub certificate: SgCertificate,
}

impl SgHom {
    pub fn certified(&self) -> bool {
        !matches!(self.certificate, SgCertificate::HorizonTagged { .. })
    }
}

fn syzygies(m: &Module, k: usize) -> Result<Vec<Syzygy>, AlgError> {
    let mut out = Vec::new();
    let mut cur = m.clone();
    for _ in 0..k {
        let s = syzygy(&cur)?;
        cur = s.module.clone();
        out.push(s);
    }
    Ok(out)
}

/// `colim_k sHom(Ω^{k+n} M, Ω^k N)` for `n ≥ 0`, and
/// `colim_k sHom(Ω^k M, Ω^{k-n} N)` for `n < 0`.
pub fn sg_hom(m: &Module, n: &Module, shift: i64, horizon: usize) -> Result<SgHom, AlgError> {
    let (a0, b0) = if shift >= 0 { (shift as usize, 0) } else { (0, shift.unsigned_abs() as usize) };
    let sm = syzygies(m, a0 + horizon + 1)?;
    let sn = syzygies(n, b0 + horizon + 1)?;
    let omega = |s: &[Syzygy], m0: &Module, k: usize| -> Module { if k == 0 { m0.clone() } else { s[k - 1].module.clone() } };
    let self_inj = is_self_injective(m.algebra())?;
    let mut spaces = Vec::new();
    for k in 0..=horizon {
        let (x, y) = (omega(&sm, m, a0 + k), omega(&sn, n, b0 + k));
        spaces.push(stable_hom(&x, &y)?);
        if is_projective(&x)? || is_projective(&y)? {
            let terms = spaces.iter().map(|s| s.dim()).collect();
            return Ok(SgHom { dim: 0, terms, certificate: SgCertificate::Vanished { at: k } });
        }
    }
    let terms: Vec<usize> = spaces.iter().map(|s| s.dim()).collect();
    if self_inj {
        return Ok(SgHom { dim: terms[0], terms, certificate: SgCertificate::SelfInjective });
    }
    // bijectivity of Ω on stable classes along the observed window
    let mut from = horizon;
    for k in (0..horizon).rev() {
        let (s, t) = (&spaces[k], &spaces[k + 1]);
        if s.dim() != t.dim() {
            break;
        }
        let (xa, xb) = (&sm[a0 + k], &sn[b0 + k]);
        let mut rows = Mat::zeros(m.p(), s.dim(), t.dim());
        for r in 0..s.dim() {
            let g = syzygy_map(xa, xb, &s.representative(r))?;
            for (j, v) in t.class_of(&g)?.into_iter().enumerate() {
                rows.set(r, j, v);
            }
        }
        if rows.rank() != s.dim() {
            break;
        }
        from = k;
    }
    Ok(SgHom { dim: terms[horizon], terms, certificate: SgCertificate::HorizonTagged { from, horizon } })
}

#[derive(Clone, Debug, Serialize)]
pub struct PerfectQuotient {
    pub hom_dim: usize,
    pub factoring_dim: usize,
    pub test_objects: usize,
}

impl PerfectQuotient {
    pub fn dim(&self) -> usize {
        self.hom_dim - self.factoring_dim
    }
}

/// `Hom_{D^b}(M, N)` modulo the span of composites `M -> P -> N` with `P`
/// running over brutal truncations of the resolution of `M` (up to
/// `horizon`) and stalk indecomposable projectives in degrees `-horizon..=horizon`.
pub fn perfect_factoring_quotient(m: &Module, n: &Module, horizon: usize) -> Result<PerfectQuotient, DerivedError> {
    let alg = m.algebra();
    let res = Resolution::of_module(m);
    let target = Complex::stalk(n, 0);
    let whole = dbhom_with(&res, &target, 0)?;
    let mut tests: Vec<Complex> = (0..=horizon).map(|i| res.truncation(i).map(|t| t.0)).collect::<Result<_, _>>()?;
    for q in proj_indecs(alg)? {
        for d in -(horizon as i64)..=horizon as i64 {
            tests.push(Complex::stalk(&q, d));
        }
    }
    let h = whole.dim();
    let mut span: Vec<Vec<u32>> = Vec::new();
    for pc in &tests {
        let out = khom(pc, &target)?;
        if out.dim() == 0 {
            continue;
        }
        let depth = stabilization_depth(pc.cohomology_window().map(|w| w.0)).max(whole.depth);
        let into = dbhom_at(&res, pc, 0, depth, true)?;
        for a in 0..into.dim() {
            let f = into.space.combine(&unit(into.dim(), a));
            for b in 0..out.dim() {
                let g = out.combine(&unit(out.dim(), b));
                span.push(whole.class_of(&f.then(&g))?);
            }
        }
    }
    let rows = span.len();
    let factoring_dim = Mat::from_vec(m.p(), rows, h, span.concat()).rank();
    Ok(PerfectQuotient { hom_dim: h, factoring_dim, test_objects: tests.len() })
}

fn unit(n: usize, k: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[k] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{path_algebra, simples, truncated_poly};

    #[test]
    fn dual_numbers_syzygy_of_k_is_k() {
        let d2 = truncated_poly(2, 2).unwrap();
        let k = simples(&d2).unwrap().remove(0);
        let s = syzygy(&k).unwrap();
        assert_eq!(s.module.dim(), 1);
        assert_eq!(stable_hom(&k, &k).unwrap().dim(), 1);
        assert!(is_self_injective(&d2).unwrap());
    }

    #[test]
    fn a2_is_not_self_injective() {
        let a2 = path_algebra(2, 2, &[(1, 2)]).unwrap();
        assert!(!is_self_injective(&a2).unwrap());
    }
}
