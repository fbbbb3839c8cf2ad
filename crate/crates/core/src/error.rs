//! Error taxonomy shared by the samplers and estimators.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the numerical pipeline.
///
/// The distinction that matters to callers: `MalformedInput`, `Io` and `Json`
/// are problems with what was asked; the rest are numerical conditions
/// detected while computing. The command-line front end maps the former to
/// exit code 2 and the latter to exit code 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The curve passes through the sampled line's point at infinity, so the
    /// affine parametrization misses one intersection. Callers resample.
    #[error("degenerate line: curve meets the line's point at infinity")]
    DegenerateLine,

    /// Root finding did not reach the residual contract.
    #[error("root finding failed to converge: {0}")]
    ConvergenceFailure(String),

    /// Gradient of the 2-jet is zero relative to its second-order part, so
    /// curvature is undefined there (a singular point of the zero set).
    #[error("singular point: jet gradient vanishes relative to second order")]
    SingularPoint,

    /// Invalid user-supplied data (polynomial files, parameter combinations).
    #[error("malformed input: {0}")]
    MalformedInput(String),

    /// More samples were discarded than the abort policy allows; the input is
    /// effectively degenerate.
    #[error("too many discarded samples: {discarded} of {total} (limit {max_fraction:e} of total)")]
    TooManyDiscards {
        discarded: u64,
        total: u64,
        max_fraction: f64,
    },

    /// A computation whose conditioning collapsed (resultant counting,
    /// degenerate Hessians, failed chart choices).
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("polynomial JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Fraction of discarded samples above which a run aborts with
/// [`Error::TooManyDiscards`]. Discards are singular points and failed
/// branches; on non-degenerate random inputs they have probability zero, so
/// any visible rate signals a bad input.
pub const MAX_DISCARD_FRACTION: f64 = 1e-4;

/// Apply the abort policy to a discard tally.
pub fn check_discards(discarded: u64, total: u64) -> Result<()> {
    if total > 0 && (discarded as f64) > MAX_DISCARD_FRACTION * (total as f64) {
        Err(Error::TooManyDiscards {
            discarded,
            total,
            max_fraction: MAX_DISCARD_FRACTION,
        })
    } else {
        Ok(())
    }
}
