use thiserror::Error;

use crate::gfmat::MAX_MODULUS;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} exceeds the supported maximum {MAX_MODULUS}")]
    ModulusTooLarge(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operands belong to different fields (modulus {0} vs {1})")]
    ModulusMismatch(u32, u32),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("construction would produce {required} items, budget is {budget}")]
    TooLarge { required: u128, budget: u64 },
    #[error("enumeration would visit {required} candidates, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("every sampled function violated the bucket bound")]
    EmptyFamily,
    #[error("no function in the family balances the padded target")]
    NotBalanced,
    #[error("computed part {0:?} is not a member of the cover family")]
    NotAMember(Vec<usize>),
    #[error("target vector is outside the column space")]
    Infeasible,
    #[error("partition family rejected: {0}")]
    FamilyInvalid(String),
    #[error("schema violation at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn bad_params(message: impl Into<String>) -> Self {
        Error::BadParams(message.into())
    }

    pub(crate) fn dims(message: impl Into<String>) -> Self {
        Error::DimensionMismatch(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
