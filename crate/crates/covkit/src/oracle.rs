//! Brute-force reference solvers and the gap classifiers built on them.
//!
//! These exist to certify the reductions, not to be fast: every solver
//! enumerates its whole search space under an explicit budget and returns
//! a canonical optimal witness. Determinism matters more than speed here,
//! so ties are broken by a fixed enumeration order: full scans visit
//! assignments in lexicographic counter order (last coordinate fastest)
//! and keep the first strict improvement, and the sparse scan visits
//! vectors by ascending weight, then support, then coefficients, and
//! keeps the first hit.

use crate::enumerate::{count_weight_at_most, sparse_to_vector, weight_ordered};
use crate::error::{Error, Result};
use crate::gfmat::{FieldMatrix, FieldVector};
use crate::instances::{
    GapVerdict, KMldInstance, MaxLinInstance, MldInstance, NcpInstance, ProblemInstance, Verdict,
};
use crate::rational::Rational;

/// Advances a base-q counter (last digit fastest). Returns false once the
/// counter wraps back to zero, i.e. after the final assignment.
fn advance(digits: &mut [u32], q: u32) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

/// Minimizes the number of violated equations by trying all q^n
/// assignments. Returns the lexicographically smallest minimizer and the
/// optimum. Budget guards the q^n scan.
pub fn solve_maxlin_exact(inst: &MaxLinInstance, budget: u64) -> Result<(FieldVector, usize)> {
    let n = inst.unknowns();
    let field = inst.field();
    let q = field.modulus();
    let required = (q as u128).saturating_pow(n as u32);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let mut digits = vec![0u32; n];
    let mut best: Option<(FieldVector, usize)> = None;
    loop {
        let x = FieldVector::from_values(field, &digits.iter().map(|&d| d as u64).collect::<Vec<_>>());
        let violations = inst.violations(&x)?;
        if best.as_ref().map_or(true, |(_, b)| violations < *b) {
            best = Some((x, violations));
        }
        if !advance(&mut digits, q) {
            break;
        }
    }
    Ok(best.expect("q^n >= 1 assignments scanned"))
}

/// Finds a minimum-weight solution of H e = u among vectors of weight at
/// most w_max (capped at the dimension), or None if there is none in that
/// range. The witness is canonical: first hit in the weight-then-support-
/// then-coefficients order. A budget error is distinct from None, which
/// is a definite answer.
pub fn solve_mld_min_weight(
    h: &FieldMatrix,
    u: &FieldVector,
    w_max: usize,
    budget: u64,
) -> Result<Option<(FieldVector, usize)>> {
    if h.field() != u.field() {
        return Err(Error::ModulusMismatch(
            h.field().modulus(),
            u.field().modulus(),
        ));
    }
    if u.len() != h.rows() {
        return Err(Error::dims(format!(
            "syndrome has length {}, matrix has {} rows",
            u.len(),
            h.rows()
        )));
    }
    let n = h.cols();
    let q = h.field().modulus();
    let w_eff = w_max.min(n);
    let required = count_weight_at_most(n, w_eff, q);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    for (support, coefs) in weight_ordered(n, q, w_eff) {
        if h.combine_columns(&support, &coefs) == *u {
            let weight = support.len();
            return Ok(Some((sparse_to_vector(h.field(), n, &support, &coefs), weight)));
        }
    }
    Ok(None)
}

/// Minimizes ||G z - t||_0 by trying all q^(cols) coefficient vectors.
/// Returns the lexicographically smallest minimizer and the distance. A
/// generator with no columns has the single candidate z = (), at distance
/// ||t||_0.
pub fn solve_ncp_exact(
    generator: &FieldMatrix,
    target: &FieldVector,
    budget: u64,
) -> Result<(FieldVector, usize)> {
    if generator.field() != target.field() {
        return Err(Error::ModulusMismatch(
            generator.field().modulus(),
            target.field().modulus(),
        ));
    }
    if target.len() != generator.rows() {
        return Err(Error::dims(format!(
            "target has length {}, generator has {} rows",
            target.len(),
            generator.rows()
        )));
    }
    let d = generator.cols();
    let field = generator.field();
    let q = field.modulus();
    let required = (q as u128).saturating_pow(d as u32);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let mut digits = vec![0u32; d];
    let mut best: Option<(FieldVector, usize)> = None;
    loop {
        let z = FieldVector::from_values(field, &digits.iter().map(|&d| d as u64).collect::<Vec<_>>());
        let dist = generator.mul_vec(&z)?.sub(target)?.hamming_weight();
        if best.as_ref().map_or(true, |(_, b)| dist < *b) {
            best = Some((z, dist));
        }
        if !advance(&mut digits, q) {
            break;
        }
    }
    Ok(best.expect("q^d >= 1 assignments scanned"))
}

/// Classifies against the thresholds (1-c)m and (1-s)m on the number of
/// violated equations. The exact optimum is always attained, so the
/// witness and achieved value are always present.
pub fn classify_maxlin(inst: &MaxLinInstance, budget: u64) -> Result<GapVerdict> {
    let (x, opt) = solve_maxlin_exact(inst, budget)?;
    let one = Rational::from_integer(1);
    let m = Rational::from_integer(inst.equations() as i64);
    let opt_q = Rational::from_integer(opt as i64);
    let verdict = if opt_q <= (one - inst.completeness()) * m {
        Verdict::Yes
    } else if opt_q > (one - inst.soundness()) * m {
        Verdict::No
    } else {
        Verdict::Neither
    };
    Ok(GapVerdict {
        verdict,
        witness: Some(x),
        achieved: Some(opt),
    })
}

fn classify_syndrome(
    h: &FieldMatrix,
    u: &FieldVector,
    yes_weight: usize,
    gamma: Rational,
    budget: u64,
) -> Result<GapVerdict> {
    let cap = gamma * Rational::from_integer(yes_weight as i64);
    let w_max = crate::rational::floor_to_usize(cap)?.min(h.cols());
    match solve_mld_min_weight(h, u, w_max, budget)? {
        Some((e, w)) => Ok(GapVerdict {
            verdict: if w <= yes_weight {
                Verdict::Yes
            } else {
                Verdict::Neither
            },
            witness: Some(e),
            achieved: Some(w),
        }),
        // Nothing at weight <= floor(gamma * yes_weight): the optimum
        // lies strictly above the NO threshold.
        None => Ok(GapVerdict {
            verdict: Verdict::No,
            witness: None,
            achieved: None,
        }),
    }
}

/// Classifies against the weight thresholds ell and gamma*ell.
pub fn classify_mld(inst: &MldInstance, budget: u64) -> Result<GapVerdict> {
    classify_syndrome(inst.matrix(), inst.target(), inst.ell(), inst.gamma(), budget)
}

/// Classifies against the weight thresholds k and gamma*k over the
/// grouped columns.
pub fn classify_kmld(inst: &KMldInstance, budget: u64) -> Result<GapVerdict> {
    classify_syndrome(inst.matrix(), inst.target(), inst.k(), inst.gamma(), budget)
}

/// Classifies against the distance thresholds k and gamma*k.
pub fn classify_ncp(inst: &NcpInstance, budget: u64) -> Result<GapVerdict> {
    let (z, dist) = solve_ncp_exact(inst.generator(), inst.target(), budget)?;
    let dist_q = Rational::from_integer(dist as i64);
    let no_cap = inst.gamma() * Rational::from_integer(inst.k() as i64);
    let verdict = if dist <= inst.k() {
        Verdict::Yes
    } else if dist_q > no_cap {
        Verdict::No
    } else {
        Verdict::Neither
    };
    Ok(GapVerdict {
        verdict,
        witness: Some(z),
        achieved: Some(dist),
    })
}

/// Dispatches to the classifier for the instance kind.
pub fn classify_instance(inst: &ProblemInstance, budget: u64) -> Result<GapVerdict> {
    match inst {
        ProblemInstance::MaxLin(i) => classify_maxlin(i, budget),
        ProblemInstance::Mld(i) => classify_mld(i, budget),
        ProblemInstance::KMld(i) => classify_kmld(i, budget),
        ProblemInstance::Ncp(i) => classify_ncp(i, budget),
    }
}
