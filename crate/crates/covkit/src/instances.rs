//! Problem instances, their on-disk format, and seeded generators.
//!
//! Four instance kinds travel through the reduction chain:
//!
//! * `MaxLinInstance` - a linear system A x = b with completeness /
//!   soundness fractions (c, s): satisfy at least c*m equations vs. at most
//!   s*m.
//! * `MldInstance` - syndrome decoding H e = u with a weight budget `ell`
//!   and gap `gamma`.
//! * `KMldInstance` - decoding over a grouped column space: every column of
//!   the matrix is a known combination (its `ColumnLabel`) of columns of a
//!   source matrix, and solutions are sought with at most k nonzero
//!   coordinates.
//! * `NcpInstance` - nearest codeword: minimize the Hamming distance from
//!   A' z to t' over all z.
//!
//! Files are single JSON objects with a `kind` tag. The field set per kind
//! is fixed; unknown fields and fields from the wrong kind are rejected
//! with the offending path. Serialization is canonical (fixed field order,
//! compact encoding, trailing newline) so saving the same instance twice
//! yields identical bytes.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfmat::{FieldMatrix, FieldVector, PrimeField};
use crate::rational::{from_pair, to_pair, Rational};
use crate::sampling::{rng_from_seed, sample_prefix, uniform_below};

/// Sparse description of one grouped column: strictly increasing source
/// indices paired with nonzero coefficients. The empty label denotes the
/// zero combination.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ColumnLabel {
    terms: Vec<(usize, u32)>,
}

impl ColumnLabel {
    pub fn new(terms: Vec<(usize, u32)>) -> Result<Self> {
        for w in terms.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::bad_params(
                    "label indices must be strictly increasing",
                ));
            }
        }
        if terms.iter().any(|&(_, c)| c == 0) {
            return Err(Error::bad_params("label coefficients must be nonzero"));
        }
        Ok(ColumnLabel { terms })
    }

    pub fn zero() -> Self {
        ColumnLabel { terms: Vec::new() }
    }

    pub(crate) fn from_sparse(support: &[usize], coefs: &[u32]) -> Self {
        debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(support.len(), coefs.len());
        ColumnLabel {
            terms: support.iter().copied().zip(coefs.iter().copied()).collect(),
        }
    }

    pub fn from_vector(v: &FieldVector) -> Self {
        ColumnLabel {
            terms: v
                .residues()
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i, c))
                .collect(),
        }
    }

    pub fn terms(&self) -> &[(usize, u32)] {
        &self.terms
    }

    pub fn weight(&self) -> usize {
        self.terms.len()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().map(|&(i, _)| i)
    }

    pub fn to_vector(&self, field: PrimeField, len: usize) -> FieldVector {
        let mut v = FieldVector::zero(field, len);
        for &(i, c) in &self.terms {
            v.set(i, field.element(c as u64));
        }
        v
    }
}

/// A x = b with completeness fraction c and soundness fraction s,
/// 0 < s < c <= 1. YES: some x violates at most (1-c)*m equations.
/// NO: every x violates more than (1-s)*m.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MaxLinInstance {
    matrix: FieldMatrix,
    rhs: FieldVector,
    completeness: Rational,
    soundness: Rational,
}

impl MaxLinInstance {
    pub fn new(
        matrix: FieldMatrix,
        rhs: FieldVector,
        completeness: Rational,
        soundness: Rational,
    ) -> Result<Self> {
        if matrix.field() != rhs.field() {
            return Err(Error::ModulusMismatch(
                matrix.field().modulus(),
                rhs.field().modulus(),
            ));
        }
        if rhs.len() != matrix.rows() {
            return Err(Error::dims(format!(
                "right-hand side has length {}, matrix has {} rows",
                rhs.len(),
                matrix.rows()
            )));
        }
        check_fractions(completeness, soundness)?;
        Ok(MaxLinInstance {
            matrix,
            rhs,
            completeness,
            soundness,
        })
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &FieldVector {
        &self.rhs
    }

    pub fn completeness(&self) -> Rational {
        self.completeness
    }

    pub fn soundness(&self) -> Rational {
        self.soundness
    }

    pub fn equations(&self) -> usize {
        self.matrix.rows()
    }

    pub fn unknowns(&self) -> usize {
        self.matrix.cols()
    }

    pub fn field(&self) -> PrimeField {
        self.matrix.field()
    }

    /// Number of equations x fails to satisfy.
    pub fn violations(&self, x: &FieldVector) -> Result<usize> {
        Ok(self.matrix.mul_vec(x)?.sub(&self.rhs)?.hamming_weight())
    }
}

fn check_fractions(completeness: Rational, soundness: Rational) -> Result<()> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if !(zero < soundness && soundness < completeness && completeness <= one) {
        return Err(Error::bad_params(format!(
            "fractions must satisfy 0 < s < c <= 1, got s={soundness}, c={completeness}"
        )));
    }
    Ok(())
}

/// H e = u with weight budget ell and gap gamma > 1. YES: some solution of
/// weight at most ell. NO: none of weight at most gamma*ell.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MldInstance {
    matrix: FieldMatrix,
    target: FieldVector,
    ell: usize,
    gamma: Rational,
}

impl MldInstance {
    pub fn new(
        matrix: FieldMatrix,
        target: FieldVector,
        ell: usize,
        gamma: Rational,
    ) -> Result<Self> {
        if matrix.field() != target.field() {
            return Err(Error::ModulusMismatch(
                matrix.field().modulus(),
                target.field().modulus(),
            ));
        }
        if target.len() != matrix.rows() {
            return Err(Error::dims(format!(
                "target has length {}, matrix has {} rows",
                target.len(),
                matrix.rows()
            )));
        }
        if ell > matrix.cols() {
            return Err(Error::bad_params(format!(
                "weight budget {ell} exceeds the {} coordinates available",
                matrix.cols()
            )));
        }
        check_gamma(gamma)?;
        Ok(MldInstance {
            matrix,
            target,
            ell,
            gamma,
        })
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    pub fn target(&self) -> &FieldVector {
        &self.target
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn gamma(&self) -> Rational {
        self.gamma
    }

    pub fn field(&self) -> PrimeField {
        self.matrix.field()
    }
}

fn check_gamma(gamma: Rational) -> Result<()> {
    if gamma <= Rational::from_integer(1) {
        return Err(Error::bad_params(format!("gap {gamma} must exceed 1")));
    }
    Ok(())
}

/// Decoding over grouped columns: column j of `matrix` equals the source
/// matrix applied to `labels[j]`. Solutions y are sought with at most k
/// nonzero coordinates; the gap is gamma > 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KMldInstance {
    matrix: FieldMatrix,
    target: FieldVector,
    k: usize,
    gamma: Rational,
    labels: Vec<ColumnLabel>,
    source_cols: usize,
}

impl KMldInstance {
    /// Builds the grouped matrix from its source, guaranteeing the
    /// column/label correspondence by construction.
    pub fn from_source(
        source: &FieldMatrix,
        labels: Vec<ColumnLabel>,
        target: &FieldVector,
        k: usize,
        gamma: Rational,
    ) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::ModulusMismatch(
                source.field().modulus(),
                target.field().modulus(),
            ));
        }
        if target.len() != source.rows() {
            return Err(Error::dims(format!(
                "target has length {}, source matrix has {} rows",
                target.len(),
                source.rows()
            )));
        }
        validate_labels(&labels, source.cols(), source.field().modulus(), None)?;
        if k < 1 {
            return Err(Error::bad_params("k must be at least 1"));
        }
        check_gamma(gamma)?;
        let field = source.field();
        let mut matrix = FieldMatrix::zero(field, source.rows(), labels.len());
        for (j, label) in labels.iter().enumerate() {
            let support: Vec<usize> = label.support().collect();
            let coefs: Vec<u32> = label.terms().iter().map(|&(_, c)| c).collect();
            let col = source.combine_columns(&support, &coefs);
            for i in 0..source.rows() {
                matrix.set(i, j, col.get(i));
            }
        }
        Ok(KMldInstance {
            matrix,
            target: target.clone(),
            k,
            gamma,
            labels,
            source_cols: source.cols(),
        })
    }

    /// Rebuilds an instance from stored parts, checking that the columns are
    /// consistent with their labels. Source columns are recovered from
    /// weight-1 labels; every label whose support is fully recovered has its
    /// column verified against the described combination.
    pub fn from_parts(
        matrix: FieldMatrix,
        target: FieldVector,
        k: usize,
        gamma: Rational,
        labels: Vec<ColumnLabel>,
        source_cols: usize,
    ) -> Result<Self> {
        if matrix.field() != target.field() {
            return Err(Error::ModulusMismatch(
                matrix.field().modulus(),
                target.field().modulus(),
            ));
        }
        if target.len() != matrix.rows() {
            return Err(Error::dims(format!(
                "target has length {}, matrix has {} rows",
                target.len(),
                matrix.rows()
            )));
        }
        if labels.len() != matrix.cols() {
            return Err(Error::schema(
                "labels",
                format!(
                    "expected one label per column ({}), got {}",
                    matrix.cols(),
                    labels.len()
                ),
            ));
        }
        validate_labels(&labels, source_cols, matrix.field().modulus(), Some("labels"))?;
        if k < 1 {
            return Err(Error::bad_params("k must be at least 1"));
        }
        check_gamma(gamma)?;
        verify_label_columns(&matrix, &labels, source_cols)?;
        Ok(KMldInstance {
            matrix,
            target,
            k,
            gamma,
            labels,
            source_cols,
        })
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    pub fn target(&self) -> &FieldVector {
        &self.target
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gamma(&self) -> Rational {
        self.gamma
    }

    pub fn labels(&self) -> &[ColumnLabel] {
        &self.labels
    }

    pub fn source_cols(&self) -> usize {
        self.source_cols
    }

    pub fn field(&self) -> PrimeField {
        self.matrix.field()
    }
}

fn validate_labels(
    labels: &[ColumnLabel],
    source_cols: usize,
    q: u32,
    schema_path: Option<&str>,
) -> Result<()> {
    let fail = |j: usize, msg: String| -> Error {
        match schema_path {
            Some(base) => Error::schema(format!("{base}[{j}]"), msg),
            None => Error::bad_params(msg),
        }
    };
    let mut seen = HashSet::new();
    for (j, label) in labels.iter().enumerate() {
        for &(i, c) in label.terms() {
            if i >= source_cols {
                return Err(fail(
                    j,
                    format!("index {i} exceeds the {source_cols} source columns"),
                ));
            }
            if c == 0 || c >= q {
                return Err(fail(j, format!("coefficient {c} outside 1..{q}")));
            }
        }
        if !seen.insert(label.clone()) {
            return Err(fail(j, "duplicate label".into()));
        }
    }
    Ok(())
}

fn verify_label_columns(
    matrix: &FieldMatrix,
    labels: &[ColumnLabel],
    source_cols: usize,
) -> Result<()> {
    let field = matrix.field();
    let mut recovered: Vec<Option<FieldVector>> = vec![None; source_cols];
    for (j, label) in labels.iter().enumerate() {
        if let [(i, c)] = label.terms() {
            if recovered[*i].is_none() {
                let inv = field.element(*c as u64).inv().expect("coefficient nonzero");
                recovered[*i] = Some(matrix.column(j).scaled(inv));
            }
        }
    }
    for (j, label) in labels.iter().enumerate() {
        if !label.support().all(|i| recovered[i].is_some()) {
            continue;
        }
        let mut acc = FieldVector::zero(field, matrix.rows());
        for &(i, c) in label.terms() {
            let scaled = recovered[i]
                .as_ref()
                .expect("support recovered")
                .scaled(field.element(c as u64));
            acc = acc.add(&scaled)?;
        }
        if acc != matrix.column(j) {
            return Err(Error::schema(
                format!("labels[{j}]"),
                "column does not equal the combination its label describes",
            ));
        }
    }
    Ok(())
}

/// Minimize the Hamming distance from A' z to t' over z; YES at distance at
/// most k, NO beyond gamma*k.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NcpInstance {
    generator: FieldMatrix,
    target: FieldVector,
    k: usize,
    gamma: Rational,
}

impl NcpInstance {
    pub fn new(
        generator: FieldMatrix,
        target: FieldVector,
        k: usize,
        gamma: Rational,
    ) -> Result<Self> {
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
        if k < 1 {
            return Err(Error::bad_params("k must be at least 1"));
        }
        check_gamma(gamma)?;
        Ok(NcpInstance {
            generator,
            target,
            k,
            gamma,
        })
    }

    pub fn generator(&self) -> &FieldMatrix {
        &self.generator
    }

    pub fn target(&self) -> &FieldVector {
        &self.target
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gamma(&self) -> Rational {
        self.gamma
    }

    pub fn field(&self) -> PrimeField {
        self.generator.field()
    }

    /// Hamming distance from A' z to the target.
    pub fn distance(&self, z: &FieldVector) -> Result<usize> {
        Ok(self
            .generator
            .mul_vec(z)?
            .sub(&self.target)?
            .hamming_weight())
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Yes,
    No,
    Neither,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
            Verdict::Neither => "NEITHER",
        }
    }
}

/// Outcome of classifying an instance against its promise thresholds.
/// A YES verdict always carries a witness meeting the YES threshold;
/// NEITHER means the instance sits between the thresholds, i.e. outside
/// the promise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GapVerdict {
    pub verdict: Verdict,
    pub witness: Option<FieldVector>,
    pub achieved: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ProblemInstance {
    MaxLin(MaxLinInstance),
    Mld(MldInstance),
    KMld(KMldInstance),
    Ncp(NcpInstance),
}

impl ProblemInstance {
    pub fn kind(&self) -> &'static str {
        match self {
            ProblemInstance::MaxLin(_) => "maxlin",
            ProblemInstance::Mld(_) => "mld",
            ProblemInstance::KMld(_) => "kmld",
            ProblemInstance::Ncp(_) => "ncp",
        }
    }
}

impl From<MaxLinInstance> for ProblemInstance {
    fn from(v: MaxLinInstance) -> Self {
        ProblemInstance::MaxLin(v)
    }
}

impl From<MldInstance> for ProblemInstance {
    fn from(v: MldInstance) -> Self {
        ProblemInstance::Mld(v)
    }
}

impl From<KMldInstance> for ProblemInstance {
    fn from(v: KMldInstance) -> Self {
        ProblemInstance::KMld(v)
    }
}

impl From<NcpInstance> for ProblemInstance {
    fn from(v: NcpInstance) -> Self {
        ProblemInstance::Ncp(v)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawThresholds {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<(i64, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<(i64, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<(i64, i64)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    kind: String,
    q: u32,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
    target: Vec<u32>,
    thresholds: RawThresholds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ell: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Vec<(usize, u32)>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m_source: Option<usize>,
}

fn raw_from_instance(inst: &ProblemInstance) -> RawInstance {
    let (matrix, target) = match inst {
        ProblemInstance::MaxLin(v) => (v.matrix(), v.rhs()),
        ProblemInstance::Mld(v) => (v.matrix(), v.target()),
        ProblemInstance::KMld(v) => (v.matrix(), v.target()),
        ProblemInstance::Ncp(v) => (v.generator(), v.target()),
    };
    let thresholds = match inst {
        ProblemInstance::MaxLin(v) => RawThresholds {
            c: Some(to_pair(v.completeness())),
            s: Some(to_pair(v.soundness())),
            gamma: None,
        },
        ProblemInstance::Mld(v) => RawThresholds {
            c: None,
            s: None,
            gamma: Some(to_pair(v.gamma())),
        },
        ProblemInstance::KMld(v) => RawThresholds {
            c: None,
            s: None,
            gamma: Some(to_pair(v.gamma())),
        },
        ProblemInstance::Ncp(v) => RawThresholds {
            c: None,
            s: None,
            gamma: Some(to_pair(v.gamma())),
        },
    };
    RawInstance {
        kind: inst.kind().to_string(),
        q: matrix.field().modulus(),
        rows: matrix.rows(),
        cols: matrix.cols(),
        entries: matrix.residues().to_vec(),
        target: target.residues().to_vec(),
        thresholds,
        ell: match inst {
            ProblemInstance::Mld(v) => Some(v.ell()),
            _ => None,
        },
        k: match inst {
            ProblemInstance::KMld(v) => Some(v.k()),
            ProblemInstance::Ncp(v) => Some(v.k()),
            _ => None,
        },
        labels: match inst {
            ProblemInstance::KMld(v) => Some(
                v.labels()
                    .iter()
                    .map(|l| l.terms().to_vec())
                    .collect(),
            ),
            _ => None,
        },
        m_source: match inst {
            ProblemInstance::KMld(v) => Some(v.source_cols()),
            _ => None,
        },
    }
}

fn check_residue_range(values: &[u32], q: u32, path: &str) -> Result<()> {
    if let Some((i, &v)) = values.iter().enumerate().find(|(_, &v)| v >= q) {
        return Err(Error::schema(
            format!("{path}[{i}]"),
            format!("residue {v} is not below the modulus {q}"),
        ));
    }
    Ok(())
}

fn require<T>(opt: Option<T>, name: &str, kind: &str) -> Result<T> {
    opt.ok_or_else(|| Error::schema(name, format!("field required for kind `{kind}`")))
}

fn forbid<T>(opt: &Option<T>, name: &str, kind: &str) -> Result<()> {
    if opt.is_some() {
        return Err(Error::schema(
            name,
            format!("field not allowed for kind `{kind}`"),
        ));
    }
    Ok(())
}

fn instance_from_raw(raw: RawInstance) -> Result<ProblemInstance> {
    let field = PrimeField::new(raw.q).map_err(|e| Error::schema("q", e.to_string()))?;
    if raw.entries.len() != raw.rows * raw.cols {
        return Err(Error::schema(
            "entries",
            format!(
                "expected {} entries for a {}x{} matrix, got {}",
                raw.rows * raw.cols,
                raw.rows,
                raw.cols,
                raw.entries.len()
            ),
        ));
    }
    check_residue_range(&raw.entries, raw.q, "entries")?;
    check_residue_range(&raw.target, raw.q, "target")?;
    let matrix = FieldMatrix::from_residues(field, raw.rows, raw.cols, raw.entries)?;
    let target = FieldVector::from_residues(field, raw.target)?;
    if target.len() != raw.rows {
        return Err(Error::schema(
            "target",
            format!("expected length {}, got {}", raw.rows, target.len()),
        ));
    }
    let kind = raw.kind.as_str();
    match kind {
        "maxlin" => {
            forbid(&raw.thresholds.gamma, "thresholds.gamma", kind)?;
            forbid(&raw.ell, "ell", kind)?;
            forbid(&raw.k, "k", kind)?;
            forbid(&raw.labels, "labels", kind)?;
            forbid(&raw.m_source, "m_source", kind)?;
            let c = from_pair(require(raw.thresholds.c, "thresholds.c", kind)?, "thresholds.c")?;
            let s = from_pair(require(raw.thresholds.s, "thresholds.s", kind)?, "thresholds.s")?;
            check_fractions(c, s)
                .map_err(|e| Error::schema("thresholds", e.to_string()))?;
            Ok(MaxLinInstance::new(matrix, target, c, s)?.into())
        }
        "mld" => {
            forbid(&raw.thresholds.c, "thresholds.c", kind)?;
            forbid(&raw.thresholds.s, "thresholds.s", kind)?;
            forbid(&raw.k, "k", kind)?;
            forbid(&raw.labels, "labels", kind)?;
            forbid(&raw.m_source, "m_source", kind)?;
            let gamma = from_pair(
                require(raw.thresholds.gamma, "thresholds.gamma", kind)?,
                "thresholds.gamma",
            )?;
            check_gamma(gamma).map_err(|e| Error::schema("thresholds.gamma", e.to_string()))?;
            let ell = require(raw.ell, "ell", kind)?;
            if ell > matrix.cols() {
                return Err(Error::schema(
                    "ell",
                    format!("weight budget {ell} exceeds {} columns", matrix.cols()),
                ));
            }
            Ok(MldInstance::new(matrix, target, ell, gamma)?.into())
        }
        "kmld" => {
            forbid(&raw.thresholds.c, "thresholds.c", kind)?;
            forbid(&raw.thresholds.s, "thresholds.s", kind)?;
            forbid(&raw.ell, "ell", kind)?;
            let gamma = from_pair(
                require(raw.thresholds.gamma, "thresholds.gamma", kind)?,
                "thresholds.gamma",
            )?;
            check_gamma(gamma).map_err(|e| Error::schema("thresholds.gamma", e.to_string()))?;
            let k = require(raw.k, "k", kind)?;
            if k < 1 {
                return Err(Error::schema("k", "must be at least 1"));
            }
            let source_cols = require(raw.m_source, "m_source", kind)?;
            let raw_labels = require(raw.labels, "labels", kind)?;
            let mut labels = Vec::with_capacity(raw_labels.len());
            for (j, terms) in raw_labels.into_iter().enumerate() {
                labels.push(
                    ColumnLabel::new(terms)
                        .map_err(|e| Error::schema(format!("labels[{j}]"), e.to_string()))?,
                );
            }
            Ok(KMldInstance::from_parts(matrix, target, k, gamma, labels, source_cols)?.into())
        }
        "ncp" => {
            forbid(&raw.thresholds.c, "thresholds.c", kind)?;
            forbid(&raw.thresholds.s, "thresholds.s", kind)?;
            forbid(&raw.ell, "ell", kind)?;
            forbid(&raw.labels, "labels", kind)?;
            forbid(&raw.m_source, "m_source", kind)?;
            let gamma = from_pair(
                require(raw.thresholds.gamma, "thresholds.gamma", kind)?,
                "thresholds.gamma",
            )?;
            check_gamma(gamma).map_err(|e| Error::schema("thresholds.gamma", e.to_string()))?;
            let k = require(raw.k, "k", kind)?;
            if k < 1 {
                return Err(Error::schema("k", "must be at least 1"));
            }
            Ok(NcpInstance::new(matrix, target, k, gamma)?.into())
        }
        other => Err(Error::schema(
            "kind",
            format!("unknown kind `{other}`, expected maxlin|mld|kmld|ncp"),
        )),
    }
}

/// Canonical byte encoding: compact JSON, fixed field order, trailing
/// newline.
pub fn instance_to_json(inst: &ProblemInstance) -> Vec<u8> {
    let mut bytes = serde_json::to_vec(&raw_from_instance(inst)).expect("instances serialize");
    bytes.push(b'\n');
    bytes
}

pub fn instance_from_json(bytes: &[u8]) -> Result<ProblemInstance> {
    let raw: RawInstance = serde_json::from_slice(bytes)
        .map_err(|e| Error::schema("", e.to_string()))?;
    instance_from_raw(raw)
}

pub fn save_instance(inst: &ProblemInstance, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, instance_to_json(inst))?)
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<ProblemInstance> {
    instance_from_json(&std::fs::read(path)?)
}

/// Plants an assignment x* into a random system: rows are uniform, a seeded
/// choice of ceil(c*m) rows is forced to satisfy a_i . x* = b_i, and every
/// remaining row draws b_i uniformly from the q-1 values that x* does NOT
/// satisfy, so the planted assignment violates exactly m - ceil(c*m)
/// equations. Draw order: x*, then the matrix row by row, then the
/// satisfied-row shuffle, then the off values in row order.
pub fn gen_planted_maxlin(
    n: usize,
    m: usize,
    q: u32,
    completeness: Rational,
    soundness: Rational,
    seed: u64,
) -> Result<(MaxLinInstance, FieldVector)> {
    if m < 1 {
        return Err(Error::bad_params("need at least one equation"));
    }
    let field = PrimeField::new(q)?;
    check_fractions(completeness, soundness)?;
    let mut rng = rng_from_seed(seed);
    let mut planted = FieldVector::zero(field, n);
    for i in 0..n {
        planted.set(i, field.element(uniform_below(&mut rng, q) as u64));
    }
    let mut matrix = FieldMatrix::zero(field, m, n);
    for i in 0..m {
        for j in 0..n {
            matrix.set(i, j, field.element(uniform_below(&mut rng, q) as u64));
        }
    }
    let satisfied_count = crate::rational::ceil_to_usize(
        completeness * Rational::from_integer(m as i64),
    )?;
    let mut satisfied = vec![false; m];
    for i in sample_prefix(&mut rng, m, satisfied_count) {
        satisfied[i] = true;
    }
    let exact = matrix.mul_vec(&planted)?;
    let mut rhs = FieldVector::zero(field, m);
    for i in 0..m {
        if satisfied[i] {
            rhs.set(i, exact.get(i));
        } else {
            let off = uniform_below(&mut rng, q - 1) as u64;
            rhs.set(i, exact.get(i) + field.element(1 + off));
        }
    }
    let inst = MaxLinInstance::new(matrix, rhs, completeness, soundness)?;
    Ok((inst, planted))
}

/// Uniform syndrome-decoding input with a feasibility certificate: H is
/// uniform d x n, x uniform, u = H x. Returns (H, u, x). Draw order: H row
/// by row, then x.
pub fn gen_random_mld(
    n: usize,
    d: usize,
    q: u32,
    seed: u64,
) -> Result<(FieldMatrix, FieldVector, FieldVector)> {
    if d > n {
        return Err(Error::bad_params(format!(
            "need d <= n, got d={d}, n={n}"
        )));
    }
    let field = PrimeField::new(q)?;
    let mut rng = rng_from_seed(seed);
    let mut h = FieldMatrix::zero(field, d, n);
    for i in 0..d {
        for j in 0..n {
            h.set(i, j, field.element(uniform_below(&mut rng, q) as u64));
        }
    }
    let mut x = FieldVector::zero(field, n);
    for j in 0..n {
        x.set(j, field.element(uniform_below(&mut rng, q) as u64));
    }
    let u = h.mul_vec(&x)?;
    Ok((h, u, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rational;

    fn f(q: u32) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn sample_maxlin() -> ProblemInstance {
        let matrix = FieldMatrix::from_rows(f(2), &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let rhs = FieldVector::from_values(f(2), &[1, 0, 1]);
        MaxLinInstance::new(matrix, rhs, rational(9, 10).unwrap(), rational(1, 2).unwrap())
            .unwrap()
            .into()
    }

    fn sample_mld() -> ProblemInstance {
        let matrix = FieldMatrix::from_rows(f(3), &[vec![1, 1, 2]]).unwrap();
        let target = FieldVector::from_values(f(3), &[2]);
        MldInstance::new(matrix, target, 1, rational(5, 2).unwrap())
            .unwrap()
            .into()
    }

    fn sample_kmld() -> ProblemInstance {
        let source = FieldMatrix::from_rows(f(2), &[vec![1, 0], vec![1, 1]]).unwrap();
        let labels = vec![
            ColumnLabel::zero(),
            ColumnLabel::new(vec![(0, 1)]).unwrap(),
            ColumnLabel::new(vec![(1, 1)]).unwrap(),
            ColumnLabel::new(vec![(0, 1), (1, 1)]).unwrap(),
        ];
        let target = FieldVector::from_values(f(2), &[1, 0]);
        KMldInstance::from_source(&source, labels, &target, 2, rational(3, 2).unwrap())
            .unwrap()
            .into()
    }

    fn sample_ncp() -> ProblemInstance {
        let generator = FieldMatrix::from_rows(f(2), &[vec![1], vec![1]]).unwrap();
        let target = FieldVector::from_values(f(2), &[1, 0]);
        NcpInstance::new(generator, target, 1, rational(3, 2).unwrap())
            .unwrap()
            .into()
    }

    #[test]
    fn round_trip_is_identity_for_all_kinds() {
        for inst in [sample_maxlin(), sample_mld(), sample_kmld(), sample_ncp()] {
            let bytes = instance_to_json(&inst);
            let back = instance_from_json(&bytes).unwrap();
            assert_eq!(back, inst);
            assert_eq!(instance_to_json(&back), bytes);
        }
    }

    #[test]
    fn composite_modulus_is_rejected_with_path() {
        let mut bytes = instance_to_json(&sample_mld());
        let text = String::from_utf8(bytes.clone()).unwrap();
        let text = text.replace("\"q\":3", "\"q\":4");
        bytes = text.into_bytes();
        match instance_from_json(&bytes) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "q"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = String::from_utf8(instance_to_json(&sample_mld())).unwrap();
        let text = text.replacen('{', "{\"surprise\":1,", 1);
        assert!(matches!(
            instance_from_json(text.as_bytes()),
            Err(Error::Schema { .. })
        ));
    }

    #[test]
    fn kind_specific_fields_are_enforced() {
        // ell does not belong on a maxlin instance.
        let text = String::from_utf8(instance_to_json(&sample_maxlin())).unwrap();
        let trimmed = text.trim_end();
        let text = format!("{},\"ell\":1}}\n", &trimmed[..trimmed.len() - 1]);
        match instance_from_json(text.as_bytes()) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "ell"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn tampered_grouped_column_is_rejected() {
        let bytes = instance_to_json(&sample_kmld());
        let text = String::from_utf8(bytes).unwrap();
        // Column 3 is e0+e1 = (1,0); flip its top entry. Entries are
        // row-major for a 2x4 matrix: [c0 c1 c2 c3 / c0 c1 c2 c3].
        let text = text.replace(
            "\"entries\":[0,1,0,1,0,1,1,0]",
            "\"entries\":[0,1,0,0,0,1,1,0]",
        );
        match instance_from_json(text.as_bytes()) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "labels[3]"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn grouped_zero_label_column_must_be_zero() {
        let bytes = instance_to_json(&sample_kmld());
        let text = String::from_utf8(bytes).unwrap();
        let text = text.replace(
            "\"entries\":[0,1,0,1,0,1,1,0]",
            "\"entries\":[1,1,0,1,0,1,1,0]",
        );
        match instance_from_json(text.as_bytes()) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "labels[0]"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_labels_are_rejected() {
        let source = FieldMatrix::from_rows(f(2), &[vec![1, 0]]).unwrap();
        let labels = vec![
            ColumnLabel::new(vec![(0, 1)]).unwrap(),
            ColumnLabel::new(vec![(0, 1)]).unwrap(),
        ];
        let target = FieldVector::from_values(f(2), &[0]);
        assert!(KMldInstance::from_source(
            &source,
            labels,
            &target,
            1,
            rational(2, 1).unwrap()
        )
        .is_err());
    }

    #[test]
    fn fraction_ordering_is_validated() {
        let matrix = FieldMatrix::identity(f(2), 2);
        let rhs = FieldVector::zero(f(2), 2);
        for (c, s) in [((1, 2), (1, 2)), ((1, 2), (9, 10)), ((11, 10), (1, 2))] {
            assert!(MaxLinInstance::new(
                matrix.clone(),
                rhs.clone(),
                rational(c.0, c.1).unwrap(),
                rational(s.0, s.1).unwrap()
            )
            .is_err());
        }
    }

    #[test]
    fn planted_system_with_full_completeness_is_consistent() {
        let (inst, planted) = gen_planted_maxlin(
            3,
            10,
            2,
            rational(1, 1).unwrap(),
            rational(1, 2).unwrap(),
            7,
        )
        .unwrap();
        assert_eq!(inst.violations(&planted).unwrap(), 0);
    }

    #[test]
    fn planted_system_violates_exactly_the_leftover_rows() {
        let (inst, planted) = gen_planted_maxlin(
            3,
            10,
            2,
            rational(9, 10).unwrap(),
            rational(1, 2).unwrap(),
            7,
        )
        .unwrap();
        assert_eq!(inst.violations(&planted).unwrap(), 1);
    }

    #[test]
    fn planted_optimum_is_at_most_the_leftover_count() {
        // Independent scan of all q^n assignments.
        let (inst, _) = gen_planted_maxlin(
            2,
            4,
            3,
            rational(3, 4).unwrap(),
            rational(1, 2).unwrap(),
            1,
        )
        .unwrap();
        let field = inst.field();
        let mut best = usize::MAX;
        for a in 0..3u64 {
            for b in 0..3u64 {
                let x = FieldVector::from_values(field, &[a, b]);
                best = best.min(inst.violations(&x).unwrap());
            }
        }
        assert!(best <= 1, "best={best}");
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let args = (4usize, 6usize, 3u32);
        let c = rational(3, 4).unwrap();
        let s = rational(1, 2).unwrap();
        let (a1, x1) = gen_planted_maxlin(args.0, args.1, args.2, c, s, 42).unwrap();
        let (a2, x2) = gen_planted_maxlin(args.0, args.1, args.2, c, s, 42).unwrap();
        let (b1, _) = gen_planted_maxlin(args.0, args.1, args.2, c, s, 43).unwrap();
        assert_eq!(a1, a2);
        assert_eq!(x1, x2);
        assert_ne!(a1, b1);
        assert_eq!(
            instance_to_json(&a1.clone().into()),
            instance_to_json(&a2.into())
        );
    }

    #[test]
    fn random_mld_comes_with_certificate() {
        for seed in 0..10 {
            let (h, u, x) = gen_random_mld(5, 3, 3, seed).unwrap();
            assert_eq!(h.mul_vec(&x).unwrap(), u);
        }
        let (h, u, x) = gen_random_mld(4, 4, 3, 9).unwrap();
        assert_eq!(h.mul_vec(&x).unwrap(), u);
        assert!(gen_random_mld(3, 4, 3, 0).is_err());
    }

    #[test]
    fn save_and_load_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.json");
        let inst = sample_kmld();
        save_instance(&inst, &path).unwrap();
        assert_eq!(load_instance(&path).unwrap(), inst);
    }

    #[test]
    fn labels_reject_bad_structure() {
        assert!(ColumnLabel::new(vec![(1, 1), (0, 1)]).is_err());
        assert!(ColumnLabel::new(vec![(0, 1), (0, 2)]).is_err());
        assert!(ColumnLabel::new(vec![(0, 0)]).is_err());
        let l = ColumnLabel::new(vec![(0, 1), (3, 2)]).unwrap();
        assert_eq!(l.weight(), 2);
        let v = l.to_vector(f(5), 4);
        assert_eq!(v.residues(), &[1, 0, 0, 2]);
        assert_eq!(ColumnLabel::from_vector(&v), l);
    }
}
