mod common;

use proptest::prelude::*;
use seqcomp::exactla::{quotient_basis, Mat};

fn matrix(max: usize) -> impl Strategy<Value = Mat> {
    (prop::sample::select(vec![2u32, 3, 5]), 1..=max, 1..=max).prop_flat_map(|(p, r, c)| {
        prop::collection::vec(0..p, r * c).prop_map(move |d| Mat::from_vec(p, r, c, d))
    })
}

#[test]
fn rank_one_over_f5() {
    let m = Mat::from_rows(5, &[vec![1, 2], vec![2, 4]]);
    assert_eq!(m.rank(), 1);
    assert_eq!(common::rank_by_span(&m), 1);
}

#[test]
fn kernel_of_all_ones_row() {
    let m = Mat::from_rows(2, &[vec![1, 1]]);
    let zeros: Vec<Vec<u32>> = common::all_vectors(2, 2).into_iter().filter(|v| m.mul_vec(v) == vec![0]).collect();
    assert_eq!(zeros, vec![vec![0, 0], vec![1, 1]]);
    assert_eq!(m.kernel_basis().col_vec(0), vec![1, 1]);
}

#[test]
fn solve_matches_exhaustive_search() {
    let a = Mat::from_rows(2, &[vec![1, 1], vec![0, 1]]);
    let hits: Vec<Vec<u32>> = common::all_vectors(2, 2).into_iter().filter(|x| a.mul_vec(x) == vec![0, 1]).collect();
    assert_eq!(hits, vec![vec![1, 1]]);
    assert_eq!(a.solve(&[0, 1]).unwrap(), Some(vec![1, 1]));
}

#[test]
fn quotient_by_diagonal_has_two_cosets() {
    let w = [1u32, 1];
    let cosets: std::collections::BTreeSet<Vec<u32>> = common::all_vectors(2, 2)
        .into_iter()
        .map(|v| {
            let other = vec![(v[0] + w[0]) % 2, (v[1] + w[1]) % 2];
            v.min(other)
        })
        .collect();
    assert_eq!(cosets.len(), 2);
    let q = quotient_basis(&Mat::identity(2, 2), &Mat::column(2, &w)).unwrap();
    assert_eq!(q.dim(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_plus_nullity(m in matrix(6)) {
        prop_assert_eq!(m.rank() + m.kernel_basis().cols(), m.cols());
        prop_assert_eq!(m.rank() + m.left_kernel().rows(), m.rows());
    }

    #[test]
    fn rank_matches_span_count(m in matrix(5)) {
        prop_assert_eq!(m.rank(), common::rank_by_span(&m));
    }

    #[test]
    fn left_kernel_matches_enumeration(m in matrix(4)) {
        let k = m.left_kernel();
        prop_assert_eq!((m.p() as usize).pow(k.rows() as u32), common::left_kernel_size(&m));
        prop_assert!(k.mul(&m).is_zero());
    }

    #[test]
    fn rref_is_idempotent(m in matrix(6)) {
        let r = m.rref();
        let again = r.reduced.rref();
        prop_assert_eq!(&again.reduced, &r.reduced);
        prop_assert_eq!(again.pivots, r.pivots);
    }

    #[test]
    fn kernel_columns_are_killed(m in matrix(6)) {
        prop_assert!(m.mul(&m.kernel_basis()).is_zero());
    }

    #[test]
    fn solve_finds_preimages(m in matrix(6), seed in any::<u64>()) {
        let p = m.p();
        let x: Vec<u32> = (0..m.cols()).map(|i| ((seed >> (i % 60)) as u32 + i as u32) % p).collect();
        let b = m.mul_vec(&x);
        let y = m.solve(&b).unwrap().expect("b lies in the column space");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn quotient_dimension_is_rank_difference(v in matrix(5), pick in prop::collection::vec(any::<bool>(), 5)) {
        let cols: Vec<usize> = (0..v.cols()).filter(|&c| pick[c]).collect();
        let w = v.select_cols(&cols);
        let q = quotient_basis(&v, &w).unwrap();
        prop_assert_eq!(q.dim(), v.rank() - w.rank());
    }

    #[test]
    fn inverse_is_two_sided(m in matrix(4)) {
        if m.rows() == m.cols() {
            match m.inverse() {
                Some(inv) => {
                    prop_assert_eq!(m.mul(&inv), Mat::identity(m.p(), m.rows()));
                    prop_assert_eq!(inv.mul(&m), Mat::identity(m.p(), m.rows()));
                }
                None => prop_assert!(m.rank() < m.rows()),
            }
        }
    }
}
