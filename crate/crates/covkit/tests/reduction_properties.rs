//! Property tests for the reduction chain: the invariants each step
//! promises, checked against brute force on randomly drawn inputs.

use proptest::prelude::*;

use covkit::covers::{self, CoverFamily};
use covkit::gfmat::{FieldMatrix, FieldVector, PrimeField};
use covkit::instances::{MaxLinInstance, MldInstance};
use covkit::oracle::{
    classify_kmld, classify_mld, solve_maxlin_exact, solve_mld_min_weight, solve_ncp_exact,
};
use covkit::partitions::{hypercube_family, BalancedPartitionFamily};
use covkit::rational::{rational, Rational};
use covkit::reduce::{
    expand_solution, kmld_to_ncp, maxlin_to_mld, mld_group_cover, mld_group_naive, split_solution,
};
use covkit::instances::Verdict;

const BUDGET: u64 = 1_000_000;

fn field(q: u32) -> PrimeField {
    PrimeField::new(q).unwrap()
}

fn matrix_strategy(q: u32, rows: usize, cols: usize) -> impl Strategy<Value = FieldMatrix> {
    proptest::collection::vec(
        proptest::collection::vec(0..q as u64, cols),
        rows,
    )
    .prop_map(move |entries| FieldMatrix::from_rows(field(q), &entries).unwrap())
}

fn vector_strategy(q: u32, len: usize) -> impl Strategy<Value = FieldVector> {
    proptest::collection::vec(0..q as u64, len)
        .prop_map(move |values| FieldVector::from_values(field(q), &values))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parity_check_annihilates_the_column_space(
        q in prop::sample::select(vec![2u32, 3, 5]),
        rows in 1usize..6,
        cols in 1usize..6,
        entries in proptest::collection::vec(0u64..5, 36),
    ) {
        let reduced: Vec<Vec<u64>> = (0..rows)
            .map(|i| (0..cols).map(|j| entries[i * 6 + j] % q as u64).collect())
            .collect();
        let a = FieldMatrix::from_rows(field(q), &reduced).unwrap();
        let h = a.parity_check();
        prop_assert!(h.mul_mat(&a).unwrap().is_zero());
        prop_assert_eq!(h.rows(), rows - a.rank());
        prop_assert_eq!(h.rank(), h.rows());
    }

    #[test]
    fn duality_preserves_the_optimum(
        a in (1usize..4, 1usize..5).prop_flat_map(|(n, m)| matrix_strategy(2, m, n)),
    ) {
        let m = a.rows();
        let b_values: Vec<u64> = (0..m as u64).map(|i| i % 2).collect();
        let b = FieldVector::from_values(field(2), &b_values);
        let inst = MaxLinInstance::new(
            a,
            b,
            rational(1, 2).unwrap(),
            rational(1, 4).unwrap(),
        ).unwrap();
        let (_, opt) = solve_maxlin_exact(&inst, BUDGET).unwrap();
        let mld = maxlin_to_mld(&inst).unwrap();
        let dual = solve_mld_min_weight(
            mld.matrix(),
            mld.target(),
            mld.matrix().cols(),
            BUDGET,
        ).unwrap();
        let dual_opt = dual.map(|(_, w)| w).unwrap_or(usize::MAX);
        prop_assert_eq!(opt, dual_opt);
    }

    #[test]
    fn syndrome_and_codeword_optima_agree(
        q in prop::sample::select(vec![2u32, 3]),
        dims in (1usize..5).prop_flat_map(|n| (Just(n), 1usize..=n)),
        seed in 0u64..1u64 << 32,
    ) {
        let (n, d) = dims;
        let (h, u, _) = covkit::instances::gen_random_mld(n, d, q, seed).unwrap();
        let mld_opt = solve_mld_min_weight(&h, &u, n, BUDGET)
            .unwrap()
            .map(|(_, w)| w)
            .expect("u = Hx is feasible by construction");
        let ncp = kmld_to_ncp(&h, &u, 1, rational(2, 1).unwrap()).unwrap();
        let (_, dist) = solve_ncp_exact(ncp.generator(), ncp.target(), BUDGET).unwrap();
        prop_assert_eq!(mld_opt, dist);
    }

    #[test]
    fn maxlin_residual_is_a_dual_witness(
        a in matrix_strategy(3, 4, 3),
        b in vector_strategy(3, 4),
        x in vector_strategy(3, 3),
    ) {
        let inst = MaxLinInstance::new(
            a,
            b,
            rational(1, 2).unwrap(),
            rational(1, 4).unwrap(),
        ).unwrap();
        let mld = maxlin_to_mld(&inst).unwrap();
        let e = inst.rhs().sub(&inst.matrix().mul_vec(&x).unwrap()).unwrap();
        prop_assert_eq!(e.hamming_weight(), inst.violations(&x).unwrap());
        prop_assert_eq!(&mld.matrix().mul_vec(&e).unwrap(), mld.target());
    }
}

fn hypercube_cover(alpha: Rational, epsilon: Rational) -> (CoverFamily, BalancedPartitionFamily) {
    let fam = hypercube_family(2, 3, BUDGET).unwrap();
    let cover = covers::from_partition_family(&fam, alpha, epsilon, BUDGET).unwrap();
    (cover, fam)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn split_and_expand_commute_with_the_matrix(
        h in matrix_strategy(2, 3, 8),
        values in proptest::collection::vec(0u64..2, 8),
    ) {
        let (cover, fam) = hypercube_cover(rational(1, 4).unwrap(), rational(1, 1).unwrap());
        let u_dummy = FieldVector::zero(field(2), 3);
        let inst = MldInstance::new(h, u_dummy, 2, rational(5, 2).unwrap()).unwrap();
        let grouped = mld_group_cover(&inst, &cover, BUDGET).unwrap();
        // Truncate the drawn vector to weight alpha*m = 2 so splitting is
        // always legal.
        let mut x = FieldVector::zero(field(2), 8);
        let mut kept = 0;
        for (i, &v) in values.iter().enumerate() {
            if v != 0 && kept < 2 {
                x.set(i, field(2).one());
                kept += 1;
            }
        }
        let y = split_solution(&x, &cover, &fam).unwrap();
        prop_assert!(y.hamming_weight() <= cover.parts());
        prop_assert_eq!(
            grouped.matrix().mul_vec(&y).unwrap(),
            inst.matrix().mul_vec(&x).unwrap()
        );
        let back = expand_solution(&y, &grouped).unwrap();
        prop_assert_eq!(
            inst.matrix().mul_vec(&back).unwrap(),
            inst.matrix().mul_vec(&x).unwrap()
        );
    }

    #[test]
    fn expansion_bounds_the_weight_blowup(
        h in matrix_strategy(2, 3, 8),
        y_values in proptest::collection::vec(0u64..2, 45),
    ) {
        let (cover, _) = hypercube_cover(rational(1, 4).unwrap(), rational(1, 1).unwrap());
        let u_dummy = FieldVector::zero(field(2), 3);
        let inst = MldInstance::new(h, u_dummy, 2, rational(5, 2).unwrap()).unwrap();
        let grouped = mld_group_cover(&inst, &cover, BUDGET).unwrap();
        let cols = grouped.matrix().cols();
        let y = FieldVector::from_values(field(2), &y_values[..cols]);
        let x = expand_solution(&y, &grouped).unwrap();
        // Every label has weight at most the cover's size bound.
        let bound = covkit::rational::floor_to_usize(cover.size_bound()).unwrap();
        prop_assert!(x.hamming_weight() <= y.hamming_weight() * bound);
        prop_assert_eq!(
            grouped.matrix().mul_vec(&y).unwrap(),
            inst.matrix().mul_vec(&x).unwrap()
        );
    }
}

#[test]
fn naive_grouping_preserves_gap_verdicts() {
    // Regime-valid naive grouping (ell=2, k=2, epsilon=2, gamma=17/5) on
    // many random single-row instances: YES stays YES and NO stays NO.
    let eps = rational(2, 1).unwrap();
    for seed in 0..40u64 {
        let (h, u, _) = covkit::instances::gen_random_mld(7, 1, 2, seed).unwrap();
        let inst = MldInstance::new(h, u, 2, rational(17, 5).unwrap()).unwrap();
        let grouped = mld_group_naive(&inst, 2, eps, BUDGET).unwrap();
        let before = classify_mld(&inst, BUDGET).unwrap();
        let after = classify_kmld(&grouped, BUDGET).unwrap();
        match before.verdict {
            Verdict::Yes => assert_eq!(after.verdict, Verdict::Yes, "seed {seed}"),
            Verdict::No => assert_eq!(after.verdict, Verdict::No, "seed {seed}"),
            Verdict::Neither => {}
        }
    }
}

#[test]
fn cover_grouping_preserves_gap_verdicts() {
    let (cover, _) = hypercube_cover(rational(1, 4).unwrap(), rational(1, 1).unwrap());
    for seed in 0..40u64 {
        let (h, u, _) = covkit::instances::gen_random_mld(8, 2, 2, seed).unwrap();
        let inst = MldInstance::new(h, u, 2, rational(5, 2).unwrap()).unwrap();
        let grouped = mld_group_cover(&inst, &cover, BUDGET).unwrap();
        let before = classify_mld(&inst, BUDGET).unwrap();
        let after = classify_kmld(&grouped, BUDGET).unwrap();
        match before.verdict {
            Verdict::Yes => assert_eq!(after.verdict, Verdict::Yes, "seed {seed}"),
            Verdict::No => assert_eq!(after.verdict, Verdict::No, "seed {seed}"),
            Verdict::Neither => {}
        }
    }
}
