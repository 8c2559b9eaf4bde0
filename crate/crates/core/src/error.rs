use thiserror::Error;

/// Errors raised by the search simulator, the analytic model and the planners.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0} (must be at least 1)")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid target set: {0}")]
    InvalidTarget(String),

    #[error("reflection axis is not unit-norm (squared norm {norm_sqr})")]
    InvalidAxis { norm_sqr: f64 },

    #[error("state is not unit-norm (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("norm drifted to {norm_sqr} after {iterations} iterations")]
    NormDrift { norm_sqr: f64, iterations: u64 },

    #[error("averaging state has no overlap with the target subspace")]
    NoOverlap,

    /// The averaging state lies entirely inside the target subspace, so the
    /// complementary axis is undefined. The target-plane amplitude and the
    /// target residual are still well defined and are reported.
    #[error("averaging state lies in the target subspace (alpha = {alpha}, w_t = {w_t})")]
    DegenerateAPrime { alpha: f64, w_t: f64 },

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("success probability does not depend on the iteration count")]
    FlatProbability,

    #[error("rotation angle is zero")]
    NoRotation,

    #[error("success probability is zero; the restart process never terminates")]
    NeverSucceeds,

    #[error("phi = {0} is outside the small-angle regime (0, pi/2)")]
    Regime(f64),

    #[error("closed form is only valid for {0}")]
    OutOfValidity(&'static str),

    #[error("Biham mapping is undefined for r = {r}, N = {n_items}")]
    MappingUndefined { r: usize, n_items: usize },

    #[error("trial exceeded the cap of {0} rounds")]
    RoundCapExceeded(u64),

    #[error("root is not bracketed on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },

    #[error("state file: {0}")]
    StateFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_domain(
    name: &'static str,
    value: f64,
    domain: &'static str,
    ok: bool,
) -> Result<()> {
    if ok && !value.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            domain,
        })
    }
}
