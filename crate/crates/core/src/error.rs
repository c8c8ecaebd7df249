use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("generator index {gen} out of range for rank {rank}")]
    GeneratorOutOfRange { gen: usize, rank: usize },
    #[error("mode index {0} is not a creation index for this sector")]
    NotCreation(String),
    #[error("sector mismatch: {0}")]
    SectorMismatch(String),
    #[error("vector is not homogeneous in mode-weight")]
    Inhomogeneous,
    #[error("odd-parity input where a theta-invariant vector is required")]
    OddParity,
    #[error("diagonal indices ({0},{0}) are not allowed for {1}")]
    DiagonalIndex(usize, &'static str),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("delta table of degree {have} too small, need at least {need}")]
    DeltaTableTooSmall { have: u32, need: u32 },
    #[error("weight {weight} exceeds the echelon cutoff {cutoff}")]
    WeightExceedsEchelon { weight: u32, cutoff: u32 },
    #[error("sector {0} was not built into this echelon")]
    SectorNotBuilt(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
