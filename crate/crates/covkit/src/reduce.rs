//! The reduction chain: linear-equation systems to syndrome decoding, the
//! two grouping reductions that compress the weight budget into a small
//! parameter k, solution lifting in both directions, and the final step to
//! nearest-codeword form.
//!
//! Every reduction is exact: gap thresholds transform by known rational
//! factors, and the solution maps in both directions are computable, so
//! completeness and soundness can be certified by brute force on small
//! instances rather than trusted.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::covers::{self, CoverFamily};
use crate::enumerate::{binomial, count_weight_at_most, weight_ordered};
use crate::error::{Error, Result};
use crate::gfmat::{FieldMatrix, FieldVector};
use crate::instances::{ColumnLabel, KMldInstance, MaxLinInstance, MldInstance, NcpInstance};
use crate::partitions::{deterministic_family, random_family, BalancedPartitionFamily};
use crate::rational::Rational;

/// Dualizes a linear system into syndrome decoding: violating e equations
/// of A x = b is the same as writing b = A x + e with ||e||_0 = (number of
/// violations), and left-multiplying by H = parity_check(A) eliminates x.
/// The optima coincide: min_x ||Ax - b||_0 = min { ||e||_0 : H e = H b }.
///
/// Thresholds: ell = floor((1-c)m) (violation budget of the YES side) and
/// gamma = (1-s)/(1-c). Completeness 1 is rejected; it leaves gamma
/// undefined.
pub fn maxlin_to_mld(inst: &MaxLinInstance) -> Result<MldInstance> {
    let one = Rational::from_integer(1);
    if inst.completeness() == one {
        return Err(Error::bad_params(
            "completeness 1 gives an undefined gap (1-s)/(1-c)",
        ));
    }
    let h = inst.matrix().parity_check();
    let u = h.mul_vec(inst.rhs())?;
    let m = Rational::from_integer(inst.equations() as i64);
    let ell = crate::rational::floor_to_usize((one - inst.completeness()) * m)?;
    let gamma = (one - inst.soundness()) / (one - inst.completeness());
    MldInstance::new(h, u, ell, gamma)
}

/// Grouping by brute-force chunks: the columns of the output are M applied
/// to every nonzero vector of weight at most r = ceil(ell/k). A weight-ell
/// solution splits into k such chunks, so the YES threshold becomes k; a
/// weight-w grouped solution expands to weight at most w*r.
///
/// Validity demands the full parameter regime, all checked exactly:
/// k < epsilon*ell, gamma*ell < m, gamma' = gamma - epsilon > 1, and the
/// soundness bookkeeping (gamma - epsilon)*r*k <= gamma*ell (a grouped
/// solution under the new NO threshold must expand to one under the old).
pub fn mld_group_naive(
    inst: &MldInstance,
    k: usize,
    epsilon: Rational,
    budget: u64,
) -> Result<KMldInstance> {
    let ell = inst.ell();
    let m = inst.matrix().cols();
    let gamma = inst.gamma();
    if ell < 1 {
        return Err(Error::bad_params("weight budget must be at least 1"));
    }
    if k < 1 {
        return Err(Error::bad_params("k must be at least 1"));
    }
    if !crate::rational::is_positive(epsilon) {
        return Err(Error::bad_params("epsilon must be positive"));
    }
    let ell_q = Rational::from_integer(ell as i64);
    if Rational::from_integer(k as i64) >= epsilon * ell_q {
        return Err(Error::bad_params(format!(
            "need k < epsilon*ell, got k={k}, epsilon*ell={}",
            epsilon * ell_q
        )));
    }
    if gamma * ell_q >= Rational::from_integer(m as i64) {
        return Err(Error::bad_params(format!(
            "need gamma*ell < m, got gamma*ell={}, m={m}",
            gamma * ell_q
        )));
    }
    let gamma_prime = gamma - epsilon;
    if gamma_prime <= Rational::from_integer(1) {
        return Err(Error::bad_params(format!(
            "grouped gap gamma-epsilon = {gamma_prime} must exceed 1"
        )));
    }
    let r = ell.div_ceil(k);
    if gamma_prime * Rational::from_integer((r * k) as i64) > gamma * ell_q {
        return Err(Error::bad_params(format!(
            "soundness bookkeeping fails: (gamma-epsilon)*r*k = {} exceeds gamma*ell = {}",
            gamma_prime * Rational::from_integer((r * k) as i64),
            gamma * ell_q
        )));
    }
    let q = inst.field().modulus();
    let required = count_weight_at_most(m, r, q) - 1;
    if required > budget as u128 {
        return Err(Error::TooLarge { required, budget });
    }
    let labels: Vec<ColumnLabel> = weight_ordered(m, q, r)
        .skip(1)
        .map(|(support, coefs)| ColumnLabel::from_sparse(&support, &coefs))
        .collect();
    KMldInstance::from_source(inst.matrix(), labels, inst.target(), k, gamma_prime)
}

/// Label space of the cover grouping: one label per (member set, tuple of
/// nonzero coefficients on it), sets in the cover's canonical order,
/// coefficient tuples in base-(q-1) counter order. The empty member
/// contributes the single zero label.
pub(crate) struct CoverLabelSpace<'a> {
    cover: &'a CoverFamily,
    q: u32,
    prefix: Vec<u128>,
}

impl<'a> CoverLabelSpace<'a> {
    pub(crate) fn new(cover: &'a CoverFamily, q: u32) -> Self {
        let mut prefix = Vec::with_capacity(cover.len() + 1);
        let mut total = 0u128;
        prefix.push(0);
        for set in cover.sets() {
            let count = ((q - 1) as u128).saturating_pow(set.len() as u32);
            total = total.saturating_add(count);
            prefix.push(total);
        }
        CoverLabelSpace { cover, q, prefix }
    }

    pub(crate) fn total(&self) -> u128 {
        *self.prefix.last().expect("prefix nonempty")
    }

    pub(crate) fn labels(&self) -> Vec<ColumnLabel> {
        let mut labels = Vec::new();
        for set in self.cover.sets() {
            for coefs in crate::enumerate::coefficient_tuples(self.q, set.len()) {
                labels.push(ColumnLabel::from_sparse(set, &coefs));
            }
        }
        labels
    }

    /// Canonical index of the label with the given support and
    /// coefficients, if the support is a member set.
    pub(crate) fn index_of(&self, support: &[usize], coefs: &[u32]) -> Option<usize> {
        debug_assert_eq!(support.len(), coefs.len());
        let pos = self.cover.position_of(support)?;
        let base = self.q as u128 - 1;
        let mut rank = 0u128;
        for &c in coefs {
            debug_assert!(c >= 1 && c < self.q);
            rank = rank * base + (c as u128 - 1);
        }
        usize::try_from(self.prefix[pos] + rank).ok()
    }
}

/// Grouping through a cover family: the columns of the output are M
/// applied to every vector whose support is exactly a member set (the
/// empty set giving one all-zero column). Splitting a solution along an
/// exact cover of its support turns weight ell = alpha*m into weight k;
/// expanding multiplies weight by at most size_bound. The grouped gap is
/// gamma' = gamma/(1+epsilon), required to exceed 1.
pub fn mld_group_cover(
    inst: &MldInstance,
    cover: &CoverFamily,
    budget: u64,
) -> Result<KMldInstance> {
    let m = inst.matrix().cols();
    if cover.universe_size() != m {
        return Err(Error::dims(format!(
            "cover universe has size {}, matrix has {m} columns",
            cover.universe_size()
        )));
    }
    let ell_q = Rational::from_integer(inst.ell() as i64);
    let alpha_m = cover.alpha() * Rational::from_integer(m as i64);
    if ell_q != alpha_m {
        return Err(Error::bad_params(format!(
            "cover is built for weight alpha*m = {alpha_m}, instance has ell = {}",
            inst.ell()
        )));
    }
    let gamma_prime =
        inst.gamma() / (Rational::from_integer(1) + cover.epsilon());
    if gamma_prime <= Rational::from_integer(1) {
        return Err(Error::bad_params(format!(
            "grouped gap gamma/(1+epsilon) = {gamma_prime} must exceed 1"
        )));
    }
    let q = inst.field().modulus();
    let space = CoverLabelSpace::new(cover, q);
    let required = space.total();
    if required > budget as u128 {
        return Err(Error::TooLarge { required, budget });
    }
    KMldInstance::from_source(
        inst.matrix(),
        space.labels(),
        inst.target(),
        cover.parts(),
        gamma_prime,
    )
}

/// Completeness direction of the cover grouping: writes x (of weight at
/// most alpha*m) as a weight-at-most-k combination of labels by exactly
/// covering supp(x) and restricting x to each part. Parts that land on the
/// same label (only possible for the empty part) accumulate multiplicity
/// mod q, so y can even vanish when q divides k and x = 0.
pub fn split_solution(
    x: &FieldVector,
    cover: &CoverFamily,
    source: &BalancedPartitionFamily,
) -> Result<FieldVector> {
    if x.len() != cover.universe_size() {
        return Err(Error::dims(format!(
            "vector has length {}, cover universe has size {}",
            x.len(),
            cover.universe_size()
        )));
    }
    let field = x.field();
    let support = x.support();
    let parts = cover.find_exact_cover(source, &support)?;
    let space = CoverLabelSpace::new(cover, field.modulus());
    let total = usize::try_from(space.total())
        .map_err(|_| Error::bad_params("label space too large to materialize"))?;
    let mut y = FieldVector::zero(field, total);
    for part in parts {
        let coefs: Vec<u32> = part.iter().map(|&i| x.get(i).value()).collect();
        let idx = space
            .index_of(&part, &coefs)
            .ok_or_else(|| Error::NotAMember(part.clone()))?;
        y.set(idx, y.get(idx) + field.one());
    }
    Ok(y)
}

/// Soundness direction of either grouping: substitutes each label's
/// combination for its coordinate, producing x = sum y_j * label_j with
/// M x = M_k y and weight at most ||y||_0 times the largest label weight.
pub fn expand_solution(y: &FieldVector, inst: &KMldInstance) -> Result<FieldVector> {
    if y.len() != inst.matrix().cols() {
        return Err(Error::dims(format!(
            "vector has length {}, instance has {} labels",
            y.len(),
            inst.matrix().cols()
        )));
    }
    if y.field() != inst.field() {
        return Err(Error::ModulusMismatch(
            y.field().modulus(),
            inst.field().modulus(),
        ));
    }
    let field = inst.field();
    let mut x = FieldVector::zero(field, inst.source_cols());
    for j in y.support() {
        let yj = y.get(j);
        for &(i, c) in inst.labels()[j].terms() {
            x.set(i, x.get(i) + yj * field.element(c as u64));
        }
    }
    Ok(x)
}

/// Rewrites min { ||x||_0 : H x = u } as a nearest-codeword question: with
/// x0 a particular solution and G a kernel basis, the solution set is
/// x0 + im(G), so the optimum equals min_z ||G z - (-x0)||_0. Requires u
/// to be in the column space of H.
pub fn kmld_to_ncp(
    matrix: &FieldMatrix,
    target: &FieldVector,
    k: usize,
    gamma: Rational,
) -> Result<NcpInstance> {
    let x0 = matrix.solve(target)?.ok_or(Error::Infeasible)?;
    let generator = matrix.nullspace_basis();
    NcpInstance::new(generator, x0.neg(), k, gamma)
}

/// Where the pipeline gets its balanced partition family.
#[derive(Clone, Debug)]
pub enum FamilySource {
    Random { seed: u64 },
    Deterministic,
    Explicit(BalancedPartitionFamily),
}

impl FamilySource {
    fn name(&self) -> &'static str {
        match self {
            FamilySource::Random { .. } => "random",
            FamilySource::Deterministic => "deterministic",
            FamilySource::Explicit(_) => "explicit",
        }
    }
}

/// Everything the pipeline did, sized and timed. `timing_ms` is the only
/// non-deterministic field; comparisons of pipeline outputs should ignore
/// it.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineReport {
    pub q: u32,
    pub source_equations: usize,
    pub source_unknowns: usize,
    pub completeness: (i64, i64),
    pub soundness: (i64, i64),
    pub alpha: (i64, i64),
    pub epsilon: (i64, i64),
    pub k: usize,
    pub mld_rows: usize,
    pub mld_cols: usize,
    pub ell: usize,
    pub gamma: (i64, i64),
    pub family_source: String,
    pub family_size: usize,
    pub family_balance_ok: bool,
    pub subset_balance: String,
    pub cover_sets: usize,
    pub grouped_cols: usize,
    pub gamma_prime: (i64, i64),
    pub timing_ms: BTreeMap<String, u128>,
}

/// Budget for the opportunistic subset-balancing certification inside the
/// pipeline: families whose exhaustive check would enumerate more subsets
/// than this are reported "unchecked" instead.
const PIPELINE_P2_CAP: u64 = 100_000;

/// Full constructive chain from a linear-equation instance to a grouped
/// decoding instance: dualize, build (or adopt) a balanced partition
/// family at alpha = 1-c, derive the cover family, and group. The family
/// is always balance-checked; subset balancing is certified exhaustively
/// when that fits both the given budget and an internal cap, and any
/// verification failure aborts the pipeline rather than emitting an
/// instance whose gap promise is unbacked.
///
/// The emitted gap is gamma' = (1-s)/((1-c)(1+epsilon)); the report
/// carries it along with every stage size and per-stage wall-clock times.
pub fn pipeline_maxlin_to_kmld(
    inst: &MaxLinInstance,
    k: usize,
    epsilon: Rational,
    family_source: FamilySource,
    budget: u64,
) -> Result<(KMldInstance, PipelineReport)> {
    let one = Rational::from_integer(1);
    if inst.completeness() >= one {
        return Err(Error::bad_params(
            "pipeline needs completeness below 1 (alpha = 1-c must be positive)",
        ));
    }
    if !crate::rational::is_positive(epsilon) {
        return Err(Error::bad_params("epsilon must be positive"));
    }
    if k < 1 {
        return Err(Error::bad_params("k must be at least 1"));
    }
    let m = inst.equations();
    let alpha = one - inst.completeness();
    let alpha_m = alpha * Rational::from_integer(m as i64);
    if !alpha_m.is_integer() {
        return Err(Error::bad_params(format!(
            "alpha*m = {alpha_m} must be an integer (alpha = 1-c)"
        )));
    }
    let gamma_prime = (one - inst.soundness())
        / ((one - inst.completeness()) * (one + epsilon));
    if gamma_prime <= one {
        return Err(Error::bad_params(format!(
            "target gap (1-s)/((1-c)(1+epsilon)) = {gamma_prime} must exceed 1"
        )));
    }
    let mut timing = BTreeMap::new();

    let start = Instant::now();
    let mld = maxlin_to_mld(inst)?;
    timing.insert("duality".to_string(), start.elapsed().as_millis());

    let start = Instant::now();
    let family = match &family_source {
        FamilySource::Random { seed } => random_family(m, k, alpha, epsilon, *seed, budget)?,
        FamilySource::Deterministic => deterministic_family(m, k, alpha, epsilon)?,
        FamilySource::Explicit(f) => {
            if f.ground_size() != m || f.buckets() != k {
                return Err(Error::FamilyInvalid(format!(
                    "family is over {} elements with {} buckets, pipeline needs {m} and {k}",
                    f.ground_size(),
                    f.buckets()
                )));
            }
            f.clone()
        }
    };
    if let Some(v) = family.check_p1() {
        return Err(Error::FamilyInvalid(format!(
            "function {} sends {} elements to bucket {}, above the balance bound",
            v.function, v.size, v.bucket
        )));
    }
    let subset_count = binomial(m as u64, crate::rational::floor_to_usize(alpha_m)? as u64);
    let p2_budget = budget.min(PIPELINE_P2_CAP);
    let subset_balance = if subset_count <= p2_budget as u128 {
        if let Some(ce) = family.check_p2_exhaustive(alpha, epsilon, p2_budget)? {
            return Err(Error::FamilyInvalid(format!(
                "no member balances the subset {:?}",
                ce.subset
            )));
        }
        "certified"
    } else {
        "unchecked"
    };
    timing.insert("family".to_string(), start.elapsed().as_millis());

    let start = Instant::now();
    let cover = covers::from_partition_family(&family, alpha, epsilon, budget)?;
    timing.insert("cover".to_string(), start.elapsed().as_millis());

    let start = Instant::now();
    let grouped = mld_group_cover(&mld, &cover, budget)?;
    timing.insert("grouping".to_string(), start.elapsed().as_millis());

    debug_assert_eq!(grouped.gamma(), gamma_prime);
    let report = PipelineReport {
        q: inst.field().modulus(),
        source_equations: m,
        source_unknowns: inst.unknowns(),
        completeness: crate::rational::to_pair(inst.completeness()),
        soundness: crate::rational::to_pair(inst.soundness()),
        alpha: crate::rational::to_pair(alpha),
        epsilon: crate::rational::to_pair(epsilon),
        k,
        mld_rows: mld.matrix().rows(),
        mld_cols: mld.matrix().cols(),
        ell: mld.ell(),
        gamma: crate::rational::to_pair(mld.gamma()),
        family_source: family_source.name().to_string(),
        family_size: family.len(),
        family_balance_ok: true,
        subset_balance: subset_balance.to_string(),
        cover_sets: cover.len(),
        grouped_cols: grouped.matrix().cols(),
        gamma_prime: crate::rational::to_pair(gamma_prime),
        timing_ms: timing,
    };
    Ok((grouped, report))
}
