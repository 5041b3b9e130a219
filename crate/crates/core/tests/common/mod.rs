//! Brute-force oracles shared by the integration tests. They only use matrix
//! multiplication and enumeration, never the library's solvers.
#![allow(dead_code)]

use seqcomp::algebra::Module;
use seqcomp::exactla::Mat;

/// Every vector of `F_p^n`, in lexicographic order.
pub fn all_vectors(p: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (0..p).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn log_p(p: u32, mut n: usize) -> usize {
    let mut k = 0;
    while n > 1 {
        assert_eq!(n % p as usize, 0, "count is not a power of p");
        n /= p as usize;
        k += 1;
    }
    k
}

/// Rank as `log_p` of the number of distinct row combinations.
pub fn rank_by_span(m: &Mat) -> usize {
    let p = m.p();
    let span: std::collections::BTreeSet<Vec<u32>> = all_vectors(p, m.rows()).iter().map(|c| m.vec_mul(c)).collect();
    log_p(p, span.len())
}

/// Number of `x` with `x · m = 0`.
pub fn left_kernel_size(m: &Mat) -> usize {
    all_vectors(m.p(), m.rows()).iter().filter(|c| m.vec_mul(c).iter().all(|&x| x == 0)).count()
}

/// `dim Hom_Λ(M, N)` by testing every `dim M × dim N` matrix against every
/// basis element of Λ.
pub fn hom_dim(m: &Module, n: &Module) -> usize {
    let p = m.p();
    let (a, b) = (m.dim(), n.dim());
    assert!(a * b <= 16, "too many matrices to enumerate");
    let count = all_vectors(p, a * b)
        .into_iter()
        .filter(|v| {
            let f = Mat::from_vec(p, a, b, v.clone());
            m.action().iter().zip(n.action()).all(|(rm, rn)| rm.mul(&f) == f.mul(rn))
        })
        .count();
    log_p(p, count)
}
