use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An operator expression mixes input-arm and output-arm creation
    /// operators where a pure basis is required.
    #[error("operator expression mixes input and output mode operators")]
    MixedBasis,

    /// `l = 0` makes the two branches of the entangled state coincide.
    #[error("OAM index l must be >= 1 (got {0})")]
    DegenerateOam(u32),

    /// OAM weight distribution does not sum to one.
    #[error("OAM distribution not normalized: weights sum to {0}")]
    UnnormalizedDistribution(f64),

    #[error("invalid theta grid: {0}")]
    InvalidGrid(String),

    /// Every scan point had |dA/dθ| below the singular-slope threshold.
    #[error("insensitive configuration: fringe has no usable slope")]
    InsensitiveConfiguration,

    /// Total photon number exceeds the oracle's configured cap.
    #[error("photon number {0} exceeds oracle cap {1}")]
    PhotonCapExceeded(usize, usize),

    #[error("photon number required for the ideal NOON scheme")]
    MissingPhotonNumber,

    #[error("invalid detection pattern: {0}")]
    InvalidPattern(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
