use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("potential samples do not match any standard family (residual {residual:.3e})")]
    Unclassifiable { residual: f64 },
    #[error("no root of the momentum relation in the search bracket")]
    NoRoot,
    #[error("{count} roots of the momentum relation and no branch rule selects one")]
    BranchAmbiguity { count: usize },
    #[error("operation not supported for the {0} family")]
    UnsupportedFamily(&'static str),
    #[error("parameter lies on a kernel singularity: {0}")]
    Singular(String),
    #[error("denominator vanishes: {0}")]
    ZeroDenominator(String),
    #[error("stationary point is degenerate (kappa = {kappa:.3e})")]
    DegenerateStationaryPoint { kappa: f64 },
    #[error("K_iv(x) underflows for x = {0}")]
    Underflow(f64),
    #[error("Mathieu coefficients failed to converge for s = {s}, delta = {delta}")]
    ConvergenceFailure { s: i32, delta: f64 },
    #[error("modified Mathieu series did not decay by index {0}")]
    SeriesDivergence(usize),
    #[error("adaptive quadrature hit the subdivision limit (error estimate {error:.3e})")]
    MaxSubdivisions { error: f64 },
    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),
    #[error("regulated extrapolation is unstable (last correction {0:.3e})")]
    ExtrapolationUnstable(f64),
    #[error("no stationary point of the phase in the integration domain")]
    NoStationaryPoint,
    #[error("stationary point has vanishing second derivative")]
    DegenerateHessian,
    #[error("bilinear concomitant {0:.3e} exceeds the trust threshold")]
    ConcomitantTooLarge(f64),
    #[error("configuration error: {0}")]
    Config(String),
}
