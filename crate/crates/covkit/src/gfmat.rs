//! Exact dense linear algebra over prime fields F_q.
//!
//! The modulus is a runtime value, validated prime and capped at 65521 (the
//! largest 16-bit prime) so every product fits a 64-bit intermediate.
//! Vectors and matrices store raw residues with the modulus hoisted to the
//! container; elements are small copyable (value, modulus) pairs so scalar
//! arithmetic can assert field agreement.
//!
//! Row reduction is plain Gauss-Jordan elimination with the first nonzero
//! pivot in each column, which makes every derived object here canonical:
//! the same input always yields byte-identical reduced forms, nullspace
//! bases, and parity-check matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest supported modulus: the largest prime below 2^16.
pub const MAX_MODULUS: u32 = 65_521;

pub(crate) fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    if q % 2 == 0 {
        return q == 2;
    }
    let mut d = 3u32;
    while d.saturating_mul(d) <= q {
        if q % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A validated prime modulus in 2..=65521.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        if q > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(q));
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(PrimeField { q })
    }

    pub fn modulus(self) -> u32 {
        self.q
    }

    /// Reduces an arbitrary value into the field.
    pub fn element(self, value: u64) -> FieldElement {
        FieldElement {
            value: (value % self.q as u64) as u32,
            q: self.q,
        }
    }

    pub fn zero(self) -> FieldElement {
        FieldElement { value: 0, q: self.q }
    }

    pub fn one(self) -> FieldElement {
        self.element(1)
    }

    /// All field elements, 0 first.
    pub fn elements(self) -> impl Iterator<Item = FieldElement> {
        let q = self.q;
        (0..q).map(move |value| FieldElement { value, q })
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    value: u32,
    q: u32,
}

impl FieldElement {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> PrimeField {
        PrimeField { q: self.q }
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> FieldElement {
        let q = self.q as u64;
        let mut base = self.value as u64;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            exp >>= 1;
        }
        FieldElement {
            value: acc as u32,
            q: self.q,
        }
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(self) -> Result<FieldElement> {
        if self.value == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(self.q as u64 - 2))
    }

    fn assert_same_field(self, other: FieldElement) {
        assert_eq!(
            self.q, other.q,
            "field elements from different moduli ({} vs {})",
            self.q, other.q
        );
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.assert_same_field(rhs);
        let mut v = self.value + rhs.value;
        if v >= self.q {
            v -= self.q;
        }
        FieldElement { value: v, q: self.q }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.assert_same_field(rhs);
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.q - rhs.value
        };
        FieldElement { value: v, q: self.q }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.assert_same_field(rhs);
        FieldElement {
            value: (self.value as u64 * rhs.value as u64 % self.q as u64) as u32,
            q: self.q,
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: if self.value == 0 { 0 } else { self.q - self.value },
            q: self.q,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldVector {
    q: u32,
    entries: Vec<u32>,
}

impl FieldVector {
    pub fn zero(field: PrimeField, len: usize) -> Self {
        FieldVector {
            q: field.modulus(),
            entries: vec![0; len],
        }
    }

    /// Builds a vector by reducing arbitrary values.
    pub fn from_values(field: PrimeField, values: &[u64]) -> Self {
        FieldVector {
            q: field.modulus(),
            entries: values
                .iter()
                .map(|&v| (v % field.modulus() as u64) as u32)
                .collect(),
        }
    }

    /// Builds a vector from residues that must already lie in [0, q).
    pub fn from_residues(field: PrimeField, entries: Vec<u32>) -> Result<Self> {
        if let Some(&v) = entries.iter().find(|&&v| v >= field.modulus()) {
            return Err(Error::bad_params(format!(
                "residue {v} out of range for modulus {}",
                field.modulus()
            )));
        }
        Ok(FieldVector {
            q: field.modulus(),
            entries,
        })
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { q: self.q }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> FieldElement {
        FieldElement {
            value: self.entries[i],
            q: self.q,
        }
    }

    pub fn set(&mut self, i: usize, e: FieldElement) {
        assert_eq!(self.q, e.q, "element modulus differs from vector modulus");
        self.entries[i] = e.value;
    }

    pub fn residues(&self) -> &[u32] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let q = self.q;
        self.entries.iter().map(move |&value| FieldElement { value, q })
    }

    /// Number of nonzero coordinates.
    pub fn hamming_weight(&self) -> usize {
        self.entries.iter().filter(|&&v| v != 0).count()
    }

    /// Indices of nonzero coordinates, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    fn check_compat(&self, other: &FieldVector) -> Result<()> {
        if self.q != other.q {
            return Err(Error::ModulusMismatch(self.q, other.q));
        }
        if self.len() != other.len() {
            return Err(Error::dims(format!(
                "vector lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldVector) -> Result<FieldVector> {
        self.check_compat(other)?;
        Ok(FieldVector {
            q: self.q,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| (a + b) % self.q)
                .collect(),
        })
    }

    pub fn sub(&self, other: &FieldVector) -> Result<FieldVector> {
        self.check_compat(other)?;
        Ok(FieldVector {
            q: self.q,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| (a + self.q - b) % self.q)
                .collect(),
        })
    }

    pub fn neg(&self) -> FieldVector {
        FieldVector {
            q: self.q,
            entries: self
                .entries
                .iter()
                .map(|&a| if a == 0 { 0 } else { self.q - a })
                .collect(),
        }
    }

    pub fn scaled(&self, e: FieldElement) -> FieldVector {
        assert_eq!(self.q, e.q, "element modulus differs from vector modulus");
        FieldVector {
            q: self.q,
            entries: self
                .entries
                .iter()
                .map(|&a| (a as u64 * e.value as u64 % self.q as u64) as u32)
                .collect(),
        }
    }
}

/// Outcome of full Gauss-Jordan reduction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rref {
    pub matrix: FieldMatrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldMatrix {
    q: u32,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl FieldMatrix {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            q: field.modulus(),
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = FieldMatrix::zero(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1 % field.modulus();
        }
        m
    }

    /// Builds from rows of arbitrary values, reducing each mod q. Rows must
    /// all have the same length.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::dims("ragged rows"));
        }
        let q = field.modulus() as u64;
        Ok(FieldMatrix {
            q: field.modulus(),
            rows: rows.len(),
            cols,
            entries: rows
                .iter()
                .flat_map(|r| r.iter().map(|&v| (v % q) as u32))
                .collect(),
        })
    }

    /// Builds from a row-major residue buffer already in [0, q).
    pub fn from_residues(
        field: PrimeField,
        rows: usize,
        cols: usize,
        entries: Vec<u32>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::dims(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(&v) = entries.iter().find(|&&v| v >= field.modulus()) {
            return Err(Error::bad_params(format!(
                "residue {v} out of range for modulus {}",
                field.modulus()
            )));
        }
        Ok(FieldMatrix {
            q: field.modulus(),
            rows,
            cols,
            entries,
        })
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { q: self.q }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        FieldElement {
            value: self.entries[i * self.cols + j],
            q: self.q,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, e: FieldElement) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        assert_eq!(self.q, e.q, "element modulus differs from matrix modulus");
        self.entries[i * self.cols + j] = e.value;
    }

    pub fn residues(&self) -> &[u32] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> FieldVector {
        FieldVector {
            q: self.q,
            entries: self.entries[i * self.cols..(i + 1) * self.cols].to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> FieldVector {
        FieldVector {
            q: self.q,
            entries: (0..self.rows).map(|i| self.entries[i * self.cols + j]).collect(),
        }
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut entries = vec![0; self.entries.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                entries[j * self.rows + i] = self.entries[i * self.cols + j];
            }
        }
        FieldMatrix {
            q: self.q,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    pub fn mul_vec(&self, x: &FieldVector) -> Result<FieldVector> {
        if self.q != x.q {
            return Err(Error::ModulusMismatch(self.q, x.q));
        }
        if self.cols != x.len() {
            return Err(Error::dims(format!(
                "matrix has {} columns, vector has length {}",
                self.cols,
                x.len()
            )));
        }
        let q = self.q as u64;
        let entries = (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    acc += self.entries[i * self.cols + j] as u64 * x.entries[j] as u64;
                    // Partial sums stay far below 2^63 for any dimensions
                    // this crate can hold, but reduce eagerly anyway.
                    acc %= q;
                }
                acc as u32
            })
            .collect();
        Ok(FieldVector { q: self.q, entries })
    }

    pub fn mul_mat(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.q != other.q {
            return Err(Error::ModulusMismatch(self.q, other.q));
        }
        if self.cols != other.rows {
            return Err(Error::dims(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let q = self.q as u64;
        let mut entries = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for t in 0..self.cols {
                    acc += self.entries[i * self.cols + t] as u64
                        * other.entries[t * other.cols + j] as u64;
                    acc %= q;
                }
                entries[i * other.cols + j] = acc as u32;
            }
        }
        Ok(FieldMatrix {
            q: self.q,
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// M x for a sparse x given as (support, coefficients).
    pub(crate) fn combine_columns(&self, support: &[usize], coefs: &[u32]) -> FieldVector {
        debug_assert_eq!(support.len(), coefs.len());
        let q = self.q as u64;
        let mut acc = vec![0u64; self.rows];
        for (&j, &c) in support.iter().zip(coefs) {
            for i in 0..self.rows {
                acc[i] = (acc[i] + self.entries[i * self.cols + j] as u64 * c as u64) % q;
            }
        }
        FieldVector {
            q: self.q,
            entries: acc.into_iter().map(|v| v as u32).collect(),
        }
    }

    /// Reduced row echelon form with deterministic pivoting: for each column
    /// the first unused row with a nonzero entry becomes the pivot.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let q = m.q as u64;
        let mut pivot_cols = Vec::new();
        let mut r = 0usize;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pivot_row) = (r..m.rows).find(|&i| m.entries[i * m.cols + col] != 0) else {
                continue;
            };
            if pivot_row != r {
                for j in 0..m.cols {
                    m.entries.swap(pivot_row * m.cols + j, r * m.cols + j);
                }
            }
            let inv = FieldElement {
                value: m.entries[r * m.cols + col],
                q: m.q,
            }
            .inv()
            .expect("pivot is nonzero")
            .value as u64;
            for j in col..m.cols {
                let v = m.entries[r * m.cols + j] as u64 * inv % q;
                m.entries[r * m.cols + j] = v as u32;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.entries[i * m.cols + col] as u64;
                if factor == 0 {
                    continue;
                }
                for j in col..m.cols {
                    let sub = factor * m.entries[r * m.cols + j] as u64 % q;
                    let cur = m.entries[i * m.cols + j] as u64;
                    m.entries[i * m.cols + j] = ((cur + q - sub) % q) as u32;
                }
            }
            pivot_cols.push(col);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivot_cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Canonical basis of { x : M x = 0 }, returned as the columns of a
    /// cols x (cols - rank) matrix. Each free column of the reduced form
    /// contributes one basis vector carrying a 1 at its own index, so the
    /// columns are independent by construction.
    pub fn nullspace_basis(&self) -> FieldMatrix {
        let reduced = self.rref();
        let free_cols: Vec<usize> = (0..self.cols)
            .filter(|c| !reduced.pivot_cols.contains(c))
            .collect();
        let mut basis = FieldMatrix::zero(self.field(), self.cols, free_cols.len());
        for (b, &f) in free_cols.iter().enumerate() {
            basis.entries[f * free_cols.len() + b] = 1 % self.q;
            for (row, &p) in reduced.pivot_cols.iter().enumerate() {
                let v = reduced.matrix.entries[row * self.cols + f];
                basis.entries[p * free_cols.len() + b] = if v == 0 { 0 } else { self.q - v };
            }
        }
        basis
    }

    /// Canonical parity-check companion H of this matrix A: the rows of H
    /// form a reduced-echelon basis of { h : h^T A = 0 }, so H A = 0 and
    /// rank(H) = rows(A) - rank(A).
    pub fn parity_check(&self) -> FieldMatrix {
        let kernel = self.transpose().nullspace_basis();
        kernel.transpose().rref().matrix
    }

    /// Canonical particular solution of M x = rhs (free coordinates zero),
    /// or None when rhs is outside the column space.
    pub fn solve(&self, rhs: &FieldVector) -> Result<Option<FieldVector>> {
        if self.q != rhs.q {
            return Err(Error::ModulusMismatch(self.q, rhs.q));
        }
        if self.rows != rhs.len() {
            return Err(Error::dims(format!(
                "matrix has {} rows, vector has length {}",
                self.rows,
                rhs.len()
            )));
        }
        let mut augmented = FieldMatrix::zero(self.field(), self.rows, self.cols + 1);
        for i in 0..self.rows {
            augmented.entries[i * (self.cols + 1)..i * (self.cols + 1) + self.cols]
                .copy_from_slice(&self.entries[i * self.cols..(i + 1) * self.cols]);
            augmented.entries[i * (self.cols + 1) + self.cols] = rhs.entries[i];
        }
        let reduced = augmented.rref();
        if reduced.pivot_cols.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = FieldVector::zero(self.field(), self.cols);
        for (row, &p) in reduced.pivot_cols.iter().enumerate() {
            x.entries[p] = reduced.matrix.entries[row * (self.cols + 1) + self.cols];
        }
        Ok(Some(x))
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over F_{}", self.rows, self.cols, self.q)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.entries[i * self.cols + j].to_string())
                .collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
