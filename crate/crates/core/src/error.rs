use thiserror::Error;

use crate::graph::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsatisfiable generator spec: {0}")]
    Unsatisfiable(String),

    #[error("field size overflow: GF(2^{0}) exceeds the supported degree {1}")]
    FieldOverflow(u32, u32),

    #[error("family of {size} members exceeds the iteration budget {budget}")]
    FamilyTooLarge { size: u128, budget: u128 },

    #[error("perfect hash family construction failed: {0}")]
    PerfectFamily(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
