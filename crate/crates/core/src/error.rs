use thiserror::Error;

use crate::Coalition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("player count {0} out of range (2..=20)")]
    PlayerCount(usize),

    #[error("invalid player pair ({i}, {j})")]
    InvalidPair { i: usize, j: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("payoff is not efficient: x(N) = {total}, v(N) = {worth}")]
    NotEfficient { total: String, worth: String },

    #[error("payoff {0} is not a pre-kernel point")]
    NotPrekernel(String),

    #[error("coalition {0} is not a subset of the player set")]
    CoalitionOutOfRange(Coalition),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("direction is not in the null space of W")]
    NotInNullSpace,

    #[error("pre-kernel point lies on the boundary of its payoff class")]
    BoundaryPoint,

    #[error("E^T has rank {rank} < {n}")]
    RankDeficient { rank: usize, n: usize },

    #[error("could not replicate along null-space direction {index} after {attempts} halvings")]
    ReplicationFailed { index: usize, attempts: usize },

    #[error("pre-kernel search failed: {0}")]
    NoConvergence(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Errors caused by bad input rather than a negative verification.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidGame(_)
                | Error::PlayerCount(_)
                | Error::InvalidPair { .. }
                | Error::Dimension { .. }
                | Error::NotEfficient { .. }
                | Error::CoalitionOutOfRange(_)
                | Error::InvalidWeights(_)
                | Error::Parse(_)
                | Error::Io(_)
        )
    }
}
