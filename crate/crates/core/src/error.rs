use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("ball point has |p|^2 = {norm_sqr}, outside the open unit ball")]
    BallBoundary { norm_sqr: f64 },

    #[error("ambient vector is not negative for the hermitian form (<z,z> = {value})")]
    NotTimelike { value: f64 },

    #[error("chart tangents are numerically dependent (condition number {condition:.3e})")]
    DegenerateChart { condition: f64 },

    #[error("shape operator has eigenvalue {eigenvalue:.3e}; the hypersurface is not quadratically convex with inward normal")]
    ConvexityViolation { eigenvalue: f64 },

    #[error("point lies on the hypersurface (gap {gap:.3e})")]
    OnSurface { gap: f64 },

    #[error("point is not in the exterior of the hypersurface")]
    NotExterior,

    #[error("Newton inversion did not converge (best residual {residual:.3e})")]
    NoConvergence { residual: f64 },

    #[error("converged leaf parameter t = {t:.3e} is below t_min = {t_min:.1e}")]
    TooCloseToSurface { t: f64, t_min: f64 },

    #[error("D_(-t) is singular (|det| = {det:.3e})")]
    SingularDt { det: f64 },

    #[error("point at distance {distance} is inside the disc of radius {radius}")]
    InsideDisc { distance: f64, radius: f64 },

    #[error("no periodic orbit of period {period} found (best residual {residual:.3e})")]
    NotFound { period: usize, residual: f64 },

    #[error("period must be at least 2, got {0}")]
    InvalidPeriod(usize),

    #[error("ODE integrator failed: {0}")]
    StepFailure(String),

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("unknown tolerance key `{0}`")]
    UnknownTolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
