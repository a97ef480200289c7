//! Balanced partition families over a ground set of m elements.
//!
//! A family is a list of functions [m] -> [k], each viewed as a partition
//! of the ground set into k buckets. Two properties matter downstream:
//!
//! * balance (P1): every bucket of every function has size at most
//!   `bucket_slack * m / k`;
//! * subset balancing (P2, with parameters alpha and epsilon): every subset
//!   of size alpha*m has SOME function under which each bucket receives at
//!   most (1+epsilon)*alpha*m/k of its elements.
//!
//! Constructors only guarantee what they can enforce cheaply; `check_p1`,
//! `check_p2_exhaustive` and `check_p2_sampled` certify or refute the
//! properties after the fact. Three constructions are provided: coordinate
//! projections of a full hypercube, projections of a diagonal slice of a
//! hypercube (deterministic, works for any m), and seeded random functions
//! filtered for balance.

use std::path::Path;

use itertools::Itertools;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::enumerate::binomial;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sampling::{rng_from_seed, sample_subset_sorted, uniform_below};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BalancedPartitionFamily {
    m: usize,
    k: usize,
    functions: Vec<Vec<u32>>,
    bucket_slack: Rational,
    guarantee_regime: bool,
}

/// First bucket found that exceeds the promised balance bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct P1Violation {
    pub function: usize,
    pub bucket: usize,
    pub size: usize,
}

/// A subset no member of the family balances.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct P2Counterexample {
    pub subset: Vec<usize>,
}

impl BalancedPartitionFamily {
    /// Structural validation only: every function maps all m elements into
    /// [k]. Balance is NOT enforced here; use `check_p1` to certify it.
    pub fn new(
        m: usize,
        k: usize,
        functions: Vec<Vec<u32>>,
        bucket_slack: Rational,
        guarantee_regime: bool,
    ) -> Result<Self> {
        if m < 1 {
            return Err(Error::bad_params("ground set must be nonempty"));
        }
        if k < 1 {
            return Err(Error::bad_params("need at least one bucket"));
        }
        if functions.is_empty() {
            return Err(Error::EmptyFamily);
        }
        for (i, f) in functions.iter().enumerate() {
            if f.len() != m {
                return Err(Error::bad_params(format!(
                    "function {i} has length {}, expected {m}",
                    f.len()
                )));
            }
            if let Some(&v) = f.iter().find(|&&v| v as usize >= k) {
                return Err(Error::bad_params(format!(
                    "function {i} takes value {v}, expected below {k}"
                )));
            }
        }
        if !crate::rational::is_positive(bucket_slack) {
            return Err(Error::bad_params("bucket slack must be positive"));
        }
        Ok(BalancedPartitionFamily {
            m,
            k,
            functions,
            bucket_slack,
            guarantee_regime,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.m
    }

    pub fn buckets(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn functions(&self) -> &[Vec<u32>] {
        &self.functions
    }

    pub fn function(&self, i: usize) -> &[u32] {
        &self.functions[i]
    }

    pub fn bucket_slack(&self) -> Rational {
        self.bucket_slack
    }

    pub fn guarantee_regime(&self) -> bool {
        self.guarantee_regime
    }

    pub fn bucket_sizes(&self, function: usize) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &v in &self.functions[function] {
            sizes[v as usize] += 1;
        }
        sizes
    }

    /// Certifies the balance promise: every bucket of every function has
    /// size at most `bucket_slack * m / k`. Returns the first violation.
    pub fn check_p1(&self) -> Option<P1Violation> {
        let bound = self.bucket_slack * Rational::from_integer(self.m as i64);
        for f in 0..self.functions.len() {
            for (bucket, &size) in self.bucket_sizes(f).iter().enumerate() {
                if Rational::from_integer((size * self.k) as i64) > bound {
                    return Some(P1Violation {
                        function: f,
                        bucket,
                        size,
                    });
                }
            }
        }
        None
    }

    /// Smallest function index balancing the given subset: every bucket
    /// receives at most (1+epsilon)*|S|/k of its elements. The subset must
    /// list distinct in-range elements.
    pub fn find_balancing_partition(&self, subset: &[usize], epsilon: Rational) -> Option<usize> {
        assert!(
            subset.iter().all(|&i| i < self.m),
            "subset element out of range"
        );
        let bound =
            (Rational::from_integer(1) + epsilon) * Rational::from_integer(subset.len() as i64);
        'functions: for (f, func) in self.functions.iter().enumerate() {
            let mut counts = vec![0usize; self.k];
            for &i in subset {
                counts[func[i] as usize] += 1;
            }
            for &c in &counts {
                if Rational::from_integer((c * self.k) as i64) > bound {
                    continue 'functions;
                }
            }
            return Some(f);
        }
        None
    }

    /// Checks subset balancing over EVERY subset of size alpha*m. alpha*m
    /// must be an integer and C(m, alpha*m) must fit the budget.
    pub fn check_p2_exhaustive(
        &self,
        alpha: Rational,
        epsilon: Rational,
        budget: u64,
    ) -> Result<Option<P2Counterexample>> {
        let size = subset_size(self.m, alpha)?;
        let required = binomial(self.m as u64, size as u64);
        if required > budget as u128 {
            return Err(Error::BudgetExceeded { required, budget });
        }
        for subset in (0..self.m).combinations(size) {
            if self.find_balancing_partition(&subset, epsilon).is_none() {
                return Ok(Some(P2Counterexample { subset }));
            }
        }
        Ok(None)
    }

    /// Checks subset balancing on seeded random subsets of size alpha*m,
    /// returning how many of the sampled subsets no member balances.
    pub fn check_p2_sampled(
        &self,
        alpha: Rational,
        epsilon: Rational,
        trials: u64,
        seed: u64,
    ) -> Result<u64> {
        let size = subset_size(self.m, alpha)?;
        let mut rng = rng_from_seed(seed);
        let mut failures = 0;
        for _ in 0..trials {
            let subset = sample_subset_sorted(&mut rng, self.m, size);
            if self.find_balancing_partition(&subset, epsilon).is_none() {
                failures += 1;
            }
        }
        Ok(failures)
    }
}

pub(crate) fn subset_size(m: usize, alpha: Rational) -> Result<usize> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if !(alpha >= zero && alpha <= one) {
        return Err(Error::bad_params(format!(
            "subset density {alpha} must lie in [0, 1]"
        )));
    }
    let exact = alpha * Rational::from_integer(m as i64);
    if !exact.is_integer() {
        return Err(Error::bad_params(format!(
            "alpha*m = {exact} is not an integer"
        )));
    }
    crate::rational::floor_to_usize(exact)
}

/// Points of [k]^d in lexicographic order, first coordinate most
/// significant.
pub fn hypercube_points(k: usize, d: usize) -> impl Iterator<Item = Vec<u32>> {
    (0..k.pow(d as u32)).map(move |p| {
        let mut coords = vec![0u32; d];
        let mut rest = p;
        for i in (0..d).rev() {
            coords[i] = (rest % k) as u32;
            rest /= k;
        }
        coords
    })
}

/// The d coordinate projections of the full hypercube [k]^d, a perfectly
/// balanced family on m = k^d points: every bucket has size exactly m/k.
pub fn hypercube_family(k: usize, d: usize, budget: u64) -> Result<BalancedPartitionFamily> {
    if k < 2 || d < 1 {
        return Err(Error::bad_params("need k >= 2 and d >= 1"));
    }
    let required = (k as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if required > budget as u128 {
        return Err(Error::TooLarge { required, budget });
    }
    let m = k.pow(d as u32);
    let mut functions = vec![vec![0u32; m]; d];
    for (p, point) in hypercube_points(k, d).enumerate() {
        for (i, &c) in point.iter().enumerate() {
            functions[i][p] = c;
        }
    }
    BalancedPartitionFamily::new(m, k, functions, Rational::from_integer(1), false)
}

/// The lexicographically smallest m points of [k]^d whose coordinate sum
/// mod k is below ceil(m / k^(d-1)). Restricting the coordinate
/// projections to this set keeps every bucket small: each full residue
/// class meets each bucket in exactly k^(d-2) points.
pub fn diagonal_universe(m: usize, k: usize, d: usize) -> Result<Vec<Vec<u32>>> {
    if k < 2 || d < 1 || m < 1 {
        return Err(Error::bad_params("need m >= 1, k >= 2 and d >= 1"));
    }
    let capacity = (k as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if (m as u128) > capacity {
        return Err(Error::bad_params(format!(
            "cannot place {m} points in a cube of {capacity}"
        )));
    }
    let classes = m.div_ceil(k.pow(d as u32 - 1));
    let points: Vec<Vec<u32>> = hypercube_points(k, d)
        .filter(|p| (p.iter().map(|&c| c as usize).sum::<usize>() % k) < classes)
        .take(m)
        .collect();
    debug_assert_eq!(points.len(), m);
    Ok(points)
}

/// Deterministic family for any ground size: the d = ceil(log_k m)
/// coordinate projections restricted to a diagonal slice of [k]^d. Every
/// bucket has size below 2m/k. `guarantee_regime` records whether m is
/// large enough (m >= k^(4k^2/(epsilon^2 * eta))) for the family to
/// provably balance every subset of density eta within slack 1+epsilon.
pub fn deterministic_family(
    m: usize,
    k: usize,
    eta: Rational,
    epsilon: Rational,
) -> Result<BalancedPartitionFamily> {
    if k < 2 || m < k {
        return Err(Error::bad_params("need k >= 2 and m >= k"));
    }
    check_density(eta)?;
    if !crate::rational::is_positive(epsilon) {
        return Err(Error::bad_params("epsilon must be positive"));
    }
    let mut d = 1usize;
    let mut power = k;
    while power < m {
        power = power
            .checked_mul(k)
            .ok_or_else(|| Error::bad_params("k^d overflows"))?;
        d += 1;
    }
    let points = diagonal_universe(m, k, d)?;
    let mut functions = vec![vec![0u32; m]; d];
    for (p, point) in points.iter().enumerate() {
        for (i, &c) in point.iter().enumerate() {
            functions[i][p] = c;
        }
    }
    let regime = in_guarantee_regime(m, k, eta, epsilon);
    BalancedPartitionFamily::new(m, k, functions, Rational::from_integer(2), regime)
}

fn check_density(eta: Rational) -> Result<()> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if !(eta > zero && eta <= one) {
        return Err(Error::bad_params(format!(
            "density {eta} must lie in (0, 1]"
        )));
    }
    Ok(())
}

/// Exact test of m >= k^E for E = 4k^2 / (epsilon^2 * eta). Sandwiches E
/// between consecutive integer exponents of k; only when E falls strictly
/// between floor(log_k m) and floor(log_k m)+1 is the fractional power
/// compared exactly, via m^r >= k^p for E = p/r in lowest terms. Exponents
/// beyond 100_000 are not evaluated; the regime is reported as unmet.
fn in_guarantee_regime(m: usize, k: usize, eta: Rational, epsilon: Rational) -> bool {
    let big = |v: i64| num_bigint::BigInt::from(v);
    let e2 = BigRational::new(big(*epsilon.numer()), big(*epsilon.denom()));
    let e2 = &e2 * &e2;
    let eta_big = BigRational::new(big(*eta.numer()), big(*eta.denom()));
    let exponent = BigRational::from_integer(big(4) * big(k as i64) * big(k as i64)) / (e2 * eta_big);
    // t = floor(log_k m): largest t with k^t <= m.
    let mut t = 0u32;
    let mut power = 1usize;
    while power <= m / k {
        power *= k;
        t += 1;
    }
    if exponent <= BigRational::from_integer(big(t as i64)) {
        return true;
    }
    if exponent >= BigRational::from_integer(big(t as i64 + 1)) {
        return false;
    }
    // t < E < t+1: decide m >= k^(p/r) via m^r >= k^p.
    let p = exponent.numer().to_u32();
    let r = exponent.denom().to_u32();
    match (p, r) {
        (Some(p), Some(r)) if p <= 100_000 && r <= 100_000 => {
            BigUint::from(m).pow(r) >= BigUint::from(k).pow(p)
        }
        _ => false,
    }
}

/// t = ceil(12k / (epsilon^2 * alpha)) seeded uniform functions, keeping
/// those whose buckets all fit (1+epsilon)*m/k. Candidates that fail the
/// balance check are discarded but still consume their draws, so the
/// retained family depends only on the seed. Errors with `EmptyFamily` if
/// nothing survives.
pub fn random_family(
    m: usize,
    k: usize,
    alpha: Rational,
    epsilon: Rational,
    seed: u64,
    budget: u64,
) -> Result<BalancedPartitionFamily> {
    if m < 1 || k < 2 {
        return Err(Error::bad_params("need m >= 1 and k >= 2"));
    }
    check_density(alpha)?;
    if !crate::rational::is_positive(epsilon) {
        return Err(Error::bad_params("epsilon must be positive"));
    }
    let t = candidate_count(k, alpha, epsilon)?;
    let required = t as u128 * m as u128;
    if required > budget as u128 {
        return Err(Error::TooLarge { required, budget });
    }
    let slack = Rational::from_integer(1) + epsilon;
    let bound = slack * Rational::from_integer(m as i64);
    let mut rng = rng_from_seed(seed);
    let mut kept = Vec::new();
    for _ in 0..t {
        let f: Vec<u32> = (0..m).map(|_| uniform_below(&mut rng, k as u32)).collect();
        let mut sizes = vec![0usize; k];
        for &v in &f {
            sizes[v as usize] += 1;
        }
        if sizes
            .iter()
            .all(|&s| Rational::from_integer((s * k) as i64) <= bound)
        {
            kept.push(f);
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyFamily);
    }
    BalancedPartitionFamily::new(m, k, kept, slack, false)
}

/// Number of random candidates drawn for the given parameters.
pub fn candidate_count(k: usize, alpha: Rational, epsilon: Rational) -> Result<usize> {
    check_density(alpha)?;
    if !crate::rational::is_positive(epsilon) {
        return Err(Error::bad_params("epsilon must be positive"));
    }
    let num = 12i128 * k as i128 * (*epsilon.denom() as i128).pow(2) * *alpha.denom() as i128;
    let den = (*epsilon.numer() as i128).pow(2) * *alpha.numer() as i128;
    let t = num.div_euclid(den) + if num.rem_euclid(den) > 0 { 1 } else { 0 };
    usize::try_from(t).map_err(|_| Error::bad_params("candidate count overflows"))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    m: usize,
    k: usize,
    bucket_slack: (i64, i64),
    functions: Vec<Vec<u32>>,
    guarantee_regime: bool,
}

/// Canonical byte encoding: compact JSON, fixed field order, trailing
/// newline.
pub fn family_to_json(family: &BalancedPartitionFamily) -> Vec<u8> {
    let raw = RawFamily {
        m: family.m,
        k: family.k,
        bucket_slack: crate::rational::to_pair(family.bucket_slack),
        functions: family.functions.clone(),
        guarantee_regime: family.guarantee_regime,
    };
    let mut bytes = serde_json::to_vec(&raw).expect("families serialize");
    bytes.push(b'\n');
    bytes
}

pub fn family_from_json(bytes: &[u8]) -> Result<BalancedPartitionFamily> {
    let raw: RawFamily =
        serde_json::from_slice(bytes).map_err(|e| Error::schema("", e.to_string()))?;
    if raw.functions.is_empty() {
        return Err(Error::schema("functions", "family is empty"));
    }
    for (i, f) in raw.functions.iter().enumerate() {
        if f.len() != raw.m {
            return Err(Error::schema(
                format!("functions[{i}]"),
                format!("expected length {}, got {}", raw.m, f.len()),
            ));
        }
        if let Some((j, &v)) = f.iter().enumerate().find(|(_, &v)| v as usize >= raw.k) {
            return Err(Error::schema(
                format!("functions[{i}][{j}]"),
                format!("bucket {v} is not below {}", raw.k),
            ));
        }
    }
    let slack = crate::rational::from_pair(raw.bucket_slack, "bucket_slack")?;
    BalancedPartitionFamily::new(raw.m, raw.k, raw.functions, slack, raw.guarantee_regime)
}

pub fn save_family(family: &BalancedPartitionFamily, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, family_to_json(family))?)
}

pub fn load_family(path: impl AsRef<Path>) -> Result<BalancedPartitionFamily> {
    family_from_json(&std::fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rational;

    #[test]
    fn hypercube_points_are_lexicographic() {
        let pts: Vec<_> = hypercube_points(2, 2).collect();
        assert_eq!(
            pts,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(hypercube_points(3, 2).count(), 9);
    }

    #[test]
    fn hypercube_family_buckets_are_exact() {
        let fam = hypercube_family(3, 2, 1_000).unwrap();
        assert_eq!(fam.ground_size(), 9);
        assert_eq!(fam.len(), 2);
        for f in 0..fam.len() {
            assert_eq!(fam.bucket_sizes(f), vec![3, 3, 3]);
        }
        assert!(fam.check_p1().is_none());
    }

    #[test]
    fn hypercube_pairwise_slices_have_size_k_to_d_minus_2() {
        for (k, d) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let fam = hypercube_family(k, d, 100_000).unwrap();
            let expect = k.pow(d as u32 - 2);
            for a in 0..d {
                for b in 0..d {
                    if a == b {
                        continue;
                    }
                    for va in 0..k as u32 {
                        for vb in 0..k as u32 {
                            let count = (0..fam.ground_size())
                                .filter(|&p| {
                                    fam.function(a)[p] == va && fam.function(b)[p] == vb
                                })
                                .count();
                            assert_eq!(count, expect);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hypercube_respects_budget() {
        assert!(matches!(
            hypercube_family(10, 10, 1_000),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn diagonal_universe_picks_filtered_lex_prefix() {
        // k=2, d=2, m=3: classes = ceil(3/2) = 2, so every point passes
        // and the universe is the lex prefix.
        let pts = diagonal_universe(3, 2, 2).unwrap();
        assert_eq!(pts, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        // k=3, d=2, m=3: classes = 1, only coordinate sums divisible by 3.
        let pts = diagonal_universe(3, 3, 2).unwrap();
        assert_eq!(pts, vec![vec![0, 0], vec![1, 2], vec![2, 1]]);
        assert!(diagonal_universe(5, 2, 2).is_err());
    }

    #[test]
    fn deterministic_family_is_balanced_within_double() {
        for (m, k) in [(9, 3), (10, 3), (17, 2), (100, 4), (6, 2)] {
            let fam =
                deterministic_family(m, k, rational(1, 2).unwrap(), rational(1, 2).unwrap())
                    .unwrap();
            assert_eq!(fam.ground_size(), m);
            assert!(fam.check_p1().is_none(), "m={m} k={k}");
            let strict = Rational::from_integer(2) * Rational::from_integer(m as i64);
            for f in 0..fam.len() {
                for &s in &fam.bucket_sizes(f) {
                    assert!(
                        Rational::from_integer((s * k) as i64) < strict,
                        "m={m} k={k} bucket {s} not strictly below 2m/k"
                    );
                }
            }
        }
    }

    #[test]
    fn deterministic_family_of_nine_is_the_full_square() {
        let fam =
            deterministic_family(9, 3, rational(1, 2).unwrap(), rational(1, 1).unwrap()).unwrap();
        assert_eq!(fam.len(), 2);
        for f in 0..fam.len() {
            assert_eq!(fam.bucket_sizes(f), vec![3, 3, 3]);
        }
    }

    #[test]
    fn guarantee_regime_small_cases() {
        // E = 4k^2/(eps^2*eta); k=2, eps=4, eta=1 -> E = 1, so m >= k
        // qualifies.
        assert!(in_guarantee_regime(
            2,
            2,
            rational(1, 1).unwrap(),
            rational(4, 1).unwrap()
        ));
        assert!(!in_guarantee_regime(
            1,
            2,
            rational(1, 1).unwrap(),
            rational(4, 1).unwrap()
        ));
        // k=2, eps=4, eta=2/3 -> E = 3/2: m >= 2^1.5 means m >= 3.
        let eta = rational(2, 3).unwrap();
        let eps = rational(4, 1).unwrap();
        assert!(!in_guarantee_regime(2, 2, eta, eps));
        assert!(in_guarantee_regime(3, 2, eta, eps));
        // Ordinary parameters sit far outside the regime.
        assert!(!in_guarantee_regime(
            512,
            4,
            rational(1, 2).unwrap(),
            rational(1, 2).unwrap()
        ));
    }

    #[test]
    fn random_family_respects_slack_and_seed() {
        let alpha = rational(1, 2).unwrap();
        let eps = rational(1, 2).unwrap();
        let f1 = random_family(16, 2, alpha, eps, 3, 100_000).unwrap();
        let f2 = random_family(16, 2, alpha, eps, 3, 100_000).unwrap();
        assert_eq!(f1, f2);
        assert!(f1.check_p1().is_none());
        // t = ceil(12*2 / ((1/4)(1/2))) = 192 candidates.
        assert_eq!(candidate_count(2, alpha, eps).unwrap(), 192);
        assert!(f1.len() <= 192);
        assert!(!f1.is_empty());
        let f3 = random_family(16, 2, alpha, eps, 4, 100_000).unwrap();
        assert_ne!(f1, f3);
    }

    #[test]
    fn random_family_respects_budget() {
        let alpha = rational(1, 2).unwrap();
        let eps = rational(1, 2).unwrap();
        assert!(matches!(
            random_family(1000, 2, alpha, eps, 0, 10),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn p1_violations_are_reported() {
        let fam = BalancedPartitionFamily::new(
            4,
            2,
            vec![vec![0, 0, 0, 1]],
            Rational::from_integer(1),
            false,
        )
        .unwrap();
        let v = fam.check_p1().unwrap();
        assert_eq!(
            v,
            P1Violation {
                function: 0,
                bucket: 0,
                size: 3
            }
        );
    }

    #[test]
    fn balancing_partition_picks_smallest_index() {
        // f0 sends {0,1} together; f1 splits them.
        let fam = BalancedPartitionFamily::new(
            4,
            2,
            vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]],
            Rational::from_integer(1),
            false,
        )
        .unwrap();
        // |S|=2, bound (1+0)*2/2 = 1 per bucket.
        let eps0 = Rational::from_integer(0);
        assert_eq!(fam.find_balancing_partition(&[0, 1], eps0), Some(1));
        assert_eq!(fam.find_balancing_partition(&[0, 2], eps0), Some(0));
        assert_eq!(fam.find_balancing_partition(&[], eps0), Some(0));
    }

    #[test]
    fn exhaustive_p2_finds_counterexamples_and_certifies() {
        // Identity-ish family on 4 elements, k=2: the pair {0,1} is split
        // by f1, {2,3} by f1? f1 = [0,1,0,1] sends 2->0, 3->1: split. All
        // pairs are balanced by one of the two functions except none?
        let fam = BalancedPartitionFamily::new(
            4,
            2,
            vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]],
            Rational::from_integer(1),
            false,
        )
        .unwrap();
        let alpha = rational(1, 2).unwrap();
        let eps0 = Rational::from_integer(0);
        // {0,3}: f0 gives buckets {0},{3} balanced. {1,2}: f0 balanced.
        assert_eq!(fam.check_p2_exhaustive(alpha, eps0, 100).unwrap(), None);
        // Single constant function cannot balance anything at eps=0.
        let constant = BalancedPartitionFamily::new(
            4,
            2,
            vec![vec![0, 0, 0, 0]],
            Rational::from_integer(2),
            false,
        )
        .unwrap();
        let ce = constant
            .check_p2_exhaustive(alpha, eps0, 100)
            .unwrap()
            .unwrap();
        assert_eq!(ce.subset, vec![0, 1]);
        assert!(matches!(
            constant.check_p2_exhaustive(alpha, eps0, 2),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(constant
            .check_p2_exhaustive(rational(1, 3).unwrap(), eps0, 100)
            .is_err());
    }

    #[test]
    fn sampled_p2_matches_exhaustive_on_good_family() {
        let fam = hypercube_family(2, 3, 1_000).unwrap();
        let alpha = rational(1, 2).unwrap();
        let eps = rational(1, 2).unwrap();
        assert_eq!(fam.check_p2_exhaustive(alpha, eps, 1_000).unwrap(), None);
        assert_eq!(fam.check_p2_sampled(alpha, eps, 200, 11).unwrap(), 0);
        let constant = BalancedPartitionFamily::new(
            4,
            2,
            vec![vec![0, 0, 0, 0]],
            Rational::from_integer(2),
            false,
        )
        .unwrap();
        let eps0 = Rational::from_integer(0);
        assert_eq!(
            constant
                .check_p2_sampled(rational(1, 2).unwrap(), eps0, 50, 5)
                .unwrap(),
            50
        );
    }

    #[test]
    fn diagonal_classes_meet_every_projection_bucket_equally() {
        for (k, d) in [(2usize, 2usize), (2, 3), (3, 2), (3, 3)] {
            let expect = k.pow(d as u32 - 2);
            for class in 0..k {
                for i in 0..d {
                    for j in 0..k as u32 {
                        let count = hypercube_points(k, d)
                            .filter(|p| {
                                p.iter().map(|&c| c as usize).sum::<usize>() % k == class
                                    && p[i] == j
                            })
                            .count();
                        assert_eq!(count, expect, "k={k} d={d} class={class}");
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_universe_of_four_in_the_cube_is_the_even_class() {
        let pts = diagonal_universe(4, 2, 3).unwrap();
        assert_eq!(
            pts,
            vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]
        );
        let full = diagonal_universe(8, 2, 3).unwrap();
        assert_eq!(full, hypercube_points(2, 3).collect::<Vec<_>>());
    }

    #[test]
    fn family_json_round_trip() {
        let fam = deterministic_family(10, 3, rational(1, 2).unwrap(), rational(1, 2).unwrap())
            .unwrap();
        let bytes = family_to_json(&fam);
        let back = family_from_json(&bytes).unwrap();
        assert_eq!(back, fam);
        assert_eq!(family_to_json(&back), bytes);
    }

    #[test]
    fn family_json_rejects_bad_buckets() {
        let fam = hypercube_family(2, 2, 100).unwrap();
        let text = String::from_utf8(family_to_json(&fam)).unwrap();
        let bad = text.replace(
            "\"functions\":[[0,0,1,1],[0,1,0,1]]",
            "\"functions\":[[0,0,1,2],[0,1,0,1]]",
        );
        assert_ne!(text, bad);
        match family_from_json(bad.as_bytes()) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "functions[0][3]"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn family_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("family.json");
        let fam = hypercube_family(2, 3, 100).unwrap();
        save_family(&fam, &path).unwrap();
        assert_eq!(load_family(&path).unwrap(), fam);
    }
}
