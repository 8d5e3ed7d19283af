use thiserror::Error;

use crate::game::Profile;

pub type Result<T, E = LadderError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LadderError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid level pair: r={r} must exceed s={s}")]
    InvalidLevels { r: u8, s: u8 },

    #[error("enumeration of {required} items exceeds the cap of {cap}")]
    EnumerationLimit { required: u128, cap: u64 },

    #[error("game is not monotone in its declared orientation: f{lower} vs f{upper}")]
    NotMonotone { lower: Profile, upper: Profile },

    #[error("level {level} out of range 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("the game has a single output level; pivot analysis needs at least two")]
    DegenerateRange,

    #[error("relation is not complete: players {} and {} are incomparable", .p + 1, .q + 1)]
    NotLinear { p: usize, q: usize },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("no {level}-pivotal player for allocation {allocation}")]
    NoPivot { level: usize, allocation: String },

    #[error("several {level}-pivotal players {players:?} for allocation {allocation}")]
    MultiplePivots {
        level: usize,
        players: Vec<usize>,
        allocation: String,
    },

    #[error("allocation {0} is not in the domain (not pivotal for q)")]
    NotInDomain(String),

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("parse error: {0}")]
    Parse(String),
}
