//! Weight-ordered enumeration of F_q^n vectors, and the counting helpers
//! that gate it behind budgets.
//!
//! The order is pinned and shared by everything that enumerates vectors:
//! Hamming weight ascending, then support lexicographic (as a sorted index
//! tuple), then the coefficient tuple lexicographic with values in 1..q and
//! the last support position varying fastest. Min-weight oracles return the
//! first hit under this order and grouped-instance columns inherit it, so
//! witnesses and serialized artifacts are reproducible byte for byte.

use itertools::Itertools;

use crate::gfmat::{FieldVector, PrimeField};

/// Binomial coefficient, saturating at u128::MAX.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128);
        acc /= (i + 1) as u128;
    }
    acc
}

/// (q-1)^w * C(n, w): vectors of exact weight w, saturating.
pub fn count_exact_weight(n: usize, w: usize, q: u32) -> u128 {
    let mut coefs: u128 = 1;
    for _ in 0..w {
        coefs = coefs.saturating_mul((q - 1) as u128);
    }
    coefs.saturating_mul(binomial(n as u64, w as u64))
}

/// Number of vectors of weight at most w, the zero vector included.
pub fn count_weight_at_most(n: usize, w: usize, q: u32) -> u128 {
    (0..=w).fold(0u128, |acc, i| acc.saturating_add(count_exact_weight(n, i, q)))
}

/// All coefficient tuples over {1, .., q-1} of the given width, in
/// lexicographic order (last position fastest). Width 0 yields one empty
/// tuple.
pub fn coefficient_tuples(q: u32, width: usize) -> impl Iterator<Item = Vec<u32>> {
    CoefficientTuples {
        q,
        next: Some(vec![1; width]),
    }
}

struct CoefficientTuples {
    q: u32,
    next: Option<Vec<u32>>,
}

impl Iterator for CoefficientTuples {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            if succ[pos] + 1 < self.q {
                succ[pos] += 1;
                succ[pos + 1..].fill(1);
                self.next = Some(succ);
                break;
            }
        }
        Some(current)
    }
}

/// Sparse vectors of weight 0..=w_max over F_q^n in the pinned canonical
/// order, yielded as (support, coefficients) with the support ascending.
pub fn weight_ordered(
    n: usize,
    q: u32,
    w_max: usize,
) -> impl Iterator<Item = (Vec<usize>, Vec<u32>)> {
    let w_cap = w_max.min(n);
    (0..=w_cap).flat_map(move |w| {
        (0..n).combinations(w).flat_map(move |support| {
            coefficient_tuples(q, w).map(move |coefs| (support.clone(), coefs))
        })
    })
}

/// Densifies a sparse (support, coefficients) pair.
pub fn sparse_to_vector(
    field: PrimeField,
    n: usize,
    support: &[usize],
    coefs: &[u32],
) -> FieldVector {
    let mut v = FieldVector::zero(field, n);
    for (&i, &c) in support.iter().zip(coefs) {
        v.set(i, field.element(c as u64));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(20, 2), 190);
    }

    #[test]
    fn counts_match_brute_force() {
        // Independent count: scan all q^n dense vectors.
        for (n, q) in [(4usize, 2u32), (3, 3), (2, 5)] {
            let total = (q as u128).pow(n as u32);
            for w in 0..=n {
                let mut by_scan = 0u128;
                for idx in 0..total {
                    let mut rem = idx;
                    let mut weight = 0;
                    for _ in 0..n {
                        if rem % q as u128 != 0 {
                            weight += 1;
                        }
                        rem /= q as u128;
                    }
                    if weight <= w {
                        by_scan += 1;
                    }
                }
                assert_eq!(count_weight_at_most(n, w, q), by_scan, "n={n} q={q} w={w}");
            }
        }
    }

    #[test]
    fn coefficient_tuples_order() {
        let tuples: Vec<_> = coefficient_tuples(3, 2).collect();
        assert_eq!(
            tuples,
            vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]
        );
        assert_eq!(coefficient_tuples(2, 3).collect::<Vec<_>>(), vec![vec![1, 1, 1]]);
        assert_eq!(
            coefficient_tuples(5, 0).collect::<Vec<_>>(),
            vec![Vec::<u32>::new()]
        );
    }

    #[test]
    fn weight_order_is_weight_then_support_then_coefs() {
        let items: Vec<_> = weight_ordered(3, 3, 2).collect();
        assert_eq!(items.len(), count_weight_at_most(3, 2, 3) as usize);
        assert_eq!(items[0], (vec![], vec![]));
        assert_eq!(items[1], (vec![0], vec![1]));
        assert_eq!(items[2], (vec![0], vec![2]));
        assert_eq!(items[3], (vec![1], vec![1]));
        assert_eq!(items[6], (vec![2], vec![2]));
        assert_eq!(items[7], (vec![0, 1], vec![1, 1]));
        // Weight never decreases; support is lexicographic within a weight.
        let mut prev_weight = 0;
        for (support, coefs) in &items {
            assert!(support.len() >= prev_weight);
            assert_eq!(support.len(), coefs.len());
            prev_weight = support.len();
        }
    }

    #[test]
    fn weight_order_covers_every_vector_once() {
        let field = PrimeField::new(3).unwrap();
        let dense: Vec<_> = weight_ordered(3, 3, 3)
            .map(|(s, c)| sparse_to_vector(field, 3, &s, &c))
            .collect();
        assert_eq!(dense.len(), 27);
        let mut seen = std::collections::HashSet::new();
        for v in &dense {
            assert!(seen.insert(v.residues().to_vec()));
        }
    }

    #[test]
    fn w_max_beyond_n_is_clamped() {
        let items: Vec<_> = weight_ordered(2, 2, 10).collect();
        assert_eq!(items.len(), 4);
    }
}
