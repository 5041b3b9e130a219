//! Seeded random modules, complexes and maps.

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use crate::algebra::{module_hom, proj_module, AlgError, Algebra, Module};
use crate::complexes::{ChainMap, Complex};
use crate::exactla::Mat;

pub use rand::{Rng, SeedableRng};
pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_vec(rng: &mut SampleRng, p: u32, n: usize) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..p)).collect()
}

fn random_combination(rng: &mut SampleRng, p: u32, rows: &Mat) -> Vec<u32> {
    let c = random_vec(rng, p, rows.rows());
    rows.transpose().mul_vec(&c)
}

/// A random module of dimension at most `max_dim` (at least 1 when possible).
pub fn random_module(alg: &Arc<Algebra>, rng: &mut SampleRng, max_dim: usize) -> Result<Module, AlgError> {
    let st = alg.structure()?;
    let p = alg.p();
    for _ in 0..32 {
        let k = rng.gen_range(1..=2usize);
        let summands: Vec<usize> = (0..k).map(|_| st.class_rep[rng.gen_range(0..st.class_rep.len())]).collect();
        let pm = proj_module(alg, &summands)?;
        let m = match rng.gen_range(0..4) {
            // quotient by a random submodule of P · rad
            0 | 1 => {
                let rad = pm.radical()?;
                let r = rng.gen_range(0..=2usize);
                if rad.rows() == 0 || r == 0 {
                    pm.quotient(&Mat::zeros(p, 0, pm.dim())).0
                } else {
                    let vs: Vec<Vec<u32>> = (0..r).map(|_| random_combination(rng, p, &rad)).collect();
                    let gen = pm.generated(&crate::algebra::rows_to_mat(p, pm.dim(), &vs));
                    pm.quotient(&gen).0
                }
            }
            // cyclic submodule
            2 => {
                let v = random_vec(rng, p, pm.dim());
                let gen = pm.generated(&Mat::row_vec(p, &v));
                pm.submodule(&gen).0
            }
            // a simple top
            _ => pm.top()?.0,
        };
        if m.dim() >= 1 && m.dim() <= max_dim {
            return Ok(m);
        }
    }
    Ok(crate::algebra::simples(alg)?.remove(0))
}

/// A random module map `m -> n`.
pub fn random_module_map(m: &Module, n: &Module, rng: &mut SampleRng) -> Result<Mat, AlgError> {
    let hb = module_hom(m, n)?;
    let c = random_vec(rng, m.p(), hb.dim());
    Ok(hb.combine(m.p(), &c))
}

/// A random bounded complex with total dimension at most `max_total`,
/// living in degrees within `[-2, 2]`.
pub fn random_complex(alg: &Arc<Algebra>, rng: &mut SampleRng, max_total: usize) -> Result<Complex, AlgError> {
    let p = alg.p();
    let len = rng.gen_range(1..=3usize);
    let lo = rng.gen_range(-1..=1i64);
    let mut terms: Vec<Module> = Vec::new();
    let mut budget = max_total;
    for k in 0..len {
        let left = len - k - 1;
        let cap = budget.saturating_sub(left).clamp(1, 6);
        let m = random_module(alg, rng, cap)?;
        budget = budget.saturating_sub(m.dim());
        terms.push(m);
        if budget == 0 {
            break;
        }
    }
    let mut diffs: Vec<Mat> = Vec::new();
    for k in 0..terms.len().saturating_sub(1) {
        let hb = module_hom(&terms[k], &terms[k + 1])?;
        // maps d with d_prev d = 0
        let allowed = match diffs.last() {
            None => Mat::identity(p, hb.dim()),
            Some(prev) => {
                let mut sys = Mat::zeros(p, prev.rows() * terms[k + 1].dim(), hb.dim());
                for (j, b) in hb.mats.iter().enumerate() {
                    for (i, &x) in prev.mul(b).data().iter().enumerate() {
                        sys.set(i, j, x);
                    }
                }
                sys.kernel_basis()
            }
        };
        let c = random_vec(rng, p, allowed.cols());
        let coeffs = allowed.mul_vec(&c);
        diffs.push(hb.combine(p, &coeffs));
    }
    Ok(Complex::new(alg, lo, terms, diffs).expect("random differentials compose to zero"))
}

/// A random chain map `x -> y`, built degreewise from the top.
pub fn random_chain_map(x: &Complex, y: &Complex, rng: &mut SampleRng) -> Result<ChainMap, crate::derived::DerivedError> {
    let h = crate::derived::khom(x, y)?;
    let c = random_vec(rng, x.p(), h.dim());
    Ok(h.combine(&c))
}
