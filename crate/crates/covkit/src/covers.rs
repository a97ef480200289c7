//! Cover families: collections of small subsets of [0,m) such that every
//! subset of size up to alpha*m splits into exactly k pairwise-disjoint
//! members.
//!
//! Two properties drive the downstream grouping reduction:
//!
//! * C1 (small members): every member set has size at most
//!   `size_bound = (1+epsilon)*alpha*m/k`;
//! * C2 (exact k-covers): every subset of size at most alpha*m is the
//!   disjoint union of exactly k members (empty parts allowed, which is why
//!   the empty set is always a member of constructed families).
//!
//! The constructive route goes through a balanced partition family F: take
//! every subset of every bucket of every function, up to the size bound.
//! Balance (P1) keeps the enumeration small; subset balancing (P2) is
//! exactly what makes `find_exact_cover` succeed, and `check_c2_exhaustive`
//! certifies the implication at desk scale.

use std::path::Path;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::enumerate::binomial;
use crate::error::{Error, Result};
use crate::partitions::{subset_size, BalancedPartitionFamily};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoverFamily {
    m: usize,
    k: usize,
    sets: Vec<Vec<usize>>,
    size_bound: Rational,
    alpha: Rational,
    epsilon: Rational,
}

/// First member set found above the size bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct C1Violation {
    pub index: usize,
    pub size: usize,
}

/// A subset that does not split into k disjoint members.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct C2Counterexample {
    pub subset: Vec<usize>,
}

fn canonical_key(set: &[usize]) -> (usize, &[usize]) {
    (set.len(), set)
}

impl CoverFamily {
    /// Builds a family from explicit member sets. Each set must list
    /// strictly increasing indices below m; the collection is sorted into
    /// canonical (size, lexicographic) order and deduplicated. The size
    /// bound is fixed to (1+epsilon)*alpha*m/k; whether members respect it
    /// is NOT enforced here; use `check_c1`.
    pub fn new(
        m: usize,
        k: usize,
        mut sets: Vec<Vec<usize>>,
        alpha: Rational,
        epsilon: Rational,
    ) -> Result<Self> {
        if m < 1 || k < 1 {
            return Err(Error::bad_params("need m >= 1 and k >= 1"));
        }
        check_unit_interval(alpha, "alpha")?;
        if epsilon < Rational::from_integer(0) {
            return Err(Error::bad_params("epsilon must be non-negative"));
        }
        for set in &sets {
            if !set.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::bad_params(
                    "member sets must list strictly increasing indices",
                ));
            }
            if set.last().is_some_and(|&v| v >= m) {
                return Err(Error::bad_params(format!(
                    "member set index out of range, universe size {m}"
                )));
            }
        }
        sets.sort_unstable_by(|a, b| canonical_key(a).cmp(&canonical_key(b)));
        sets.dedup();
        let size_bound = derived_size_bound(m, k, alpha, epsilon);
        Ok(CoverFamily {
            m,
            k,
            sets,
            size_bound,
            alpha,
            epsilon,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.m
    }

    pub fn parts(&self) -> usize {
        self.k
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn size_bound(&self) -> Rational {
        self.size_bound
    }

    pub fn alpha(&self) -> Rational {
        self.alpha
    }

    pub fn epsilon(&self) -> Rational {
        self.epsilon
    }

    /// Canonical position of a member set, if present.
    pub fn position_of(&self, set: &[usize]) -> Option<usize> {
        self.sets
            .binary_search_by(|probe| canonical_key(probe).cmp(&canonical_key(set)))
            .ok()
    }

    pub fn contains_set(&self, set: &[usize]) -> bool {
        self.position_of(set).is_some()
    }

    /// Certifies C1: every member set within the size bound. Returns the
    /// first violation in canonical order.
    pub fn check_c1(&self) -> Option<C1Violation> {
        for (index, set) in self.sets.iter().enumerate() {
            if Rational::from_integer(set.len() as i64) > self.size_bound {
                return Some(C1Violation {
                    index,
                    size: set.len(),
                });
            }
        }
        None
    }

    /// Splits `target` (strictly increasing indices, size at most alpha*m)
    /// into exactly k pairwise-disjoint member sets whose union is target.
    ///
    /// The balancing function is found for the target PADDED to size
    /// exactly alpha*m with the smallest unused elements (subset balancing
    /// quantifies over that size only); the returned parts intersect the
    /// original target, so padding never leaks into the output. Parts can
    /// be empty.
    pub fn find_exact_cover(
        &self,
        source: &BalancedPartitionFamily,
        target: &[usize],
    ) -> Result<Vec<Vec<usize>>> {
        self.find_exact_cover_at(source, target, self.alpha, self.epsilon)
    }

    fn find_exact_cover_at(
        &self,
        source: &BalancedPartitionFamily,
        target: &[usize],
        alpha: Rational,
        epsilon: Rational,
    ) -> Result<Vec<Vec<usize>>> {
        if source.ground_size() != self.m || source.buckets() != self.k {
            return Err(Error::dims(format!(
                "partition family is {}x{}, cover family is {}x{}",
                source.ground_size(),
                source.buckets(),
                self.m,
                self.k
            )));
        }
        if !target.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::bad_params(
                "target must list strictly increasing indices",
            ));
        }
        if target.last().is_some_and(|&v| v >= self.m) {
            return Err(Error::bad_params(format!(
                "target index out of range, universe size {}",
                self.m
            )));
        }
        let padded_size = subset_size(self.m, alpha)?;
        if target.len() > padded_size {
            return Err(Error::bad_params(format!(
                "target has {} elements, covers exist only up to alpha*m = {padded_size}",
                target.len()
            )));
        }
        let mut padded = target.to_vec();
        let mut in_target = vec![false; self.m];
        for &i in target {
            in_target[i] = true;
        }
        for i in 0..self.m {
            if padded.len() == padded_size {
                break;
            }
            if !in_target[i] {
                padded.push(i);
            }
        }
        padded.sort_unstable();
        let f = source
            .find_balancing_partition(&padded, epsilon)
            .ok_or(Error::NotBalanced)?;
        let func = source.function(f);
        let mut parts = vec![Vec::new(); self.k];
        for &i in target {
            parts[func[i] as usize].push(i);
        }
        for part in &parts {
            if !self.contains_set(part) {
                return Err(Error::NotAMember(part.clone()));
            }
        }
        Ok(parts)
    }

    /// Runs `find_exact_cover` over every subset of size at most alpha*m
    /// and independently re-verifies each returned cover (exactly k parts,
    /// pairwise disjoint, union equal to the subset, every part a member).
    /// Returns the first subset, in size-then-lexicographic order, for
    /// which anything fails.
    pub fn check_c2_exhaustive(
        &self,
        source: &BalancedPartitionFamily,
        alpha: Rational,
        epsilon: Rational,
        budget: u64,
    ) -> Result<Option<C2Counterexample>> {
        let max_size = subset_size(self.m, alpha)?;
        let required: u128 = (0..=max_size)
            .map(|i| binomial(self.m as u64, i as u64))
            .sum();
        if required > budget as u128 {
            return Err(Error::BudgetExceeded { required, budget });
        }
        for size in 0..=max_size {
            for subset in (0..self.m).combinations(size) {
                match self.find_exact_cover_at(source, &subset, alpha, epsilon) {
                    Ok(parts) => {
                        if !cover_is_exact(&parts, &subset, self.k) {
                            return Ok(Some(C2Counterexample { subset }));
                        }
                    }
                    Err(Error::NotBalanced) | Err(Error::NotAMember(_)) => {
                        return Ok(Some(C2Counterexample { subset }));
                    }
                    Err(other) => return Err(other),
                }
            }
        }
        Ok(None)
    }
}

fn cover_is_exact(parts: &[Vec<usize>], target: &[usize], k: usize) -> bool {
    if parts.len() != k {
        return false;
    }
    let mut union: Vec<usize> = parts.iter().flatten().copied().collect();
    let before = union.len();
    union.sort_unstable();
    union.dedup();
    // A duplicate across parts is an intersection violation.
    before == union.len() && union == target
}

fn derived_size_bound(m: usize, k: usize, alpha: Rational, epsilon: Rational) -> Rational {
    (Rational::from_integer(1) + epsilon) * alpha * Rational::from_integer(m as i64)
        / Rational::from_integer(k as i64)
}

fn check_unit_interval(value: Rational, name: &str) -> Result<()> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if !(value >= zero && value <= one) {
        return Err(Error::bad_params(format!(
            "{name} = {value} must lie in [0, 1]"
        )));
    }
    Ok(())
}

/// Enumerates every subset (up to the size bound) of every bucket of every
/// function of the partition family, deduplicated. The empty set is always
/// a member. The caller promises the family is balanced (P1); the
/// enumeration count is predicted from the bucket sizes and checked against
/// the budget before any work.
pub fn from_partition_family(
    source: &BalancedPartitionFamily,
    alpha: Rational,
    epsilon: Rational,
    budget: u64,
) -> Result<CoverFamily> {
    let m = source.ground_size();
    let k = source.buckets();
    check_unit_interval(alpha, "alpha")?;
    if epsilon < Rational::from_integer(0) {
        return Err(Error::bad_params("epsilon must be non-negative"));
    }
    let bound = derived_size_bound(m, k, alpha, epsilon);
    let cap = crate::rational::floor_to_usize(bound.max(Rational::from_integer(0)))?;
    let mut predicted: u128 = 0;
    for f in 0..source.len() {
        for &size in &source.bucket_sizes(f) {
            for i in 0..=size.min(cap) {
                predicted = predicted.saturating_add(binomial(size as u64, i as u64));
            }
        }
    }
    if predicted > budget as u128 {
        return Err(Error::TooLarge {
            required: predicted,
            budget,
        });
    }
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for f in 0..source.len() {
        let func = source.function(f);
        for j in 0..k {
            let bucket: Vec<usize> = (0..m).filter(|&i| func[i] as usize == j).collect();
            for i in 0..=bucket.len().min(cap) {
                sets.extend(bucket.iter().copied().combinations(i));
            }
        }
    }
    let cover = CoverFamily::new(m, k, sets, alpha, epsilon)?;
    let exponent = crate::rational::ceil_to_usize(
        source.bucket_slack() * Rational::from_integer(m as i64)
            / Rational::from_integer(k as i64),
    )?;
    if exponent < 127 {
        let cap_sets = (source.len() * k) as u128 * (1u128 << exponent) + 1;
        assert!(
            cover.len() as u128 <= cap_sets,
            "enumerated {} sets, above the guaranteed {cap_sets}",
            cover.len()
        );
    }
    Ok(cover)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCover {
    m: usize,
    k: usize,
    alpha: (i64, i64),
    epsilon: (i64, i64),
    size_bound: (i64, i64),
    sets: Vec<Vec<usize>>,
}

/// Canonical byte encoding: compact JSON, fixed field order, trailing
/// newline.
pub fn cover_to_json(cover: &CoverFamily) -> Vec<u8> {
    let raw = RawCover {
        m: cover.m,
        k: cover.k,
        alpha: crate::rational::to_pair(cover.alpha),
        epsilon: crate::rational::to_pair(cover.epsilon),
        size_bound: crate::rational::to_pair(cover.size_bound),
        sets: cover.sets.clone(),
    };
    let mut bytes = serde_json::to_vec(&raw).expect("covers serialize");
    bytes.push(b'\n');
    bytes
}

pub fn cover_from_json(bytes: &[u8]) -> Result<CoverFamily> {
    let raw: RawCover =
        serde_json::from_slice(bytes).map_err(|e| Error::schema("", e.to_string()))?;
    for (i, set) in raw.sets.iter().enumerate() {
        if !set.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::schema(
                format!("sets[{i}]"),
                "indices must be strictly increasing",
            ));
        }
        if set.last().is_some_and(|&v| v >= raw.m) {
            return Err(Error::schema(
                format!("sets[{i}]"),
                format!("index out of range for universe size {}", raw.m),
            ));
        }
    }
    for w in raw.sets.windows(2) {
        if canonical_key(&w[0]) >= canonical_key(&w[1]) {
            return Err(Error::schema(
                "sets",
                "member sets must be unique and in (size, lexicographic) order",
            ));
        }
    }
    let alpha = crate::rational::from_pair(raw.alpha, "alpha")?;
    let epsilon = crate::rational::from_pair(raw.epsilon, "epsilon")?;
    let size_bound = crate::rational::from_pair(raw.size_bound, "size_bound")?;
    let cover = CoverFamily::new(raw.m, raw.k, raw.sets, alpha, epsilon)
        .map_err(|e| Error::schema("", e.to_string()))?;
    if cover.size_bound != size_bound {
        return Err(Error::schema(
            "size_bound",
            format!(
                "expected (1+epsilon)*alpha*m/k = {}, got {size_bound}",
                cover.size_bound
            ),
        ));
    }
    Ok(cover)
}

pub fn save_cover(cover: &CoverFamily, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, cover_to_json(cover))?)
}

pub fn load_cover(path: impl AsRef<Path>) -> Result<CoverFamily> {
    cover_from_json(&std::fs::read(path)?)
}
