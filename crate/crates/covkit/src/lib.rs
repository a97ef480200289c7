//! Exact gap-preserving reductions between linear-equation and decoding
//! problems over prime fields, plus the cover and partition families that
//! drive them.
//!
//! The chain runs from systems of linear equations with a
//! completeness/soundness gap, through syndrome decoding, to decoding
//! with a small solution-size parameter k, and finally to nearest-
//! codeword form. Each step transforms the gap by a known rational
//! factor, and brute-force reference solvers certify the optima on
//! instances small enough to enumerate.
//!
//! ```
//! use covkit::instances::gen_planted_maxlin;
//! use covkit::oracle::{classify_kmld, classify_maxlin};
//! use covkit::rational::rational;
//! use covkit::reduce::{pipeline_maxlin_to_kmld, FamilySource};
//!
//! let (inst, _) = gen_planted_maxlin(
//!     3, 8, 2,
//!     rational(3, 4).unwrap(),
//!     rational(1, 4).unwrap(),
//!     42,
//! ).unwrap();
//! let (grouped, report) = pipeline_maxlin_to_kmld(
//!     &inst, 2,
//!     rational(1, 2).unwrap(),
//!     FamilySource::Deterministic,
//!     1_000_000,
//! ).unwrap();
//! assert_eq!(report.gamma_prime, (2, 1));
//! // A satisfiable-side input stays on the YES side of the grouped gap.
//! let before = classify_maxlin(&inst, 1_000_000).unwrap();
//! let after = classify_kmld(&grouped, 1_000_000).unwrap();
//! assert_eq!(before.verdict, after.verdict);
//! ```

pub mod covers;
pub mod enumerate;
mod error;
pub mod gfmat;
pub mod instances;
pub mod oracle;
pub mod partitions;
pub mod rational;
pub mod reduce;
mod sampling;

pub use error::{Error, Result};
