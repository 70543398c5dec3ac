use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("degenerate polynomial: leading coefficient is zero")]
    DegeneratePolynomial,

    #[error("length {0} is not a power of two")]
    Length(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("angle {angle_rad} rad is outside the unambiguous field of view (|angle| < pi/2)")]
    Ambiguity { angle_rad: f64 },

    #[error("degenerate covariance: noise eigenvalues vanish")]
    DegenerateCovariance,

    #[error("{sources} sources leave no noise subspace with {antennas} antennas")]
    Subspace { sources: usize, antennas: usize },

    #[error("spatial phase {phase_rad} rad aliases beyond +/-pi")]
    Aliasing { phase_rad: f64 },

    #[error("degenerate spectrum: no root near the unit circle")]
    DegenerateSpectrum,

    #[error("singular geometry: vehicle coincides with the radio head")]
    SingularGeometry,

    #[error("usage error: {0}")]
    Usage(String),

    #[error("lookup error: {0}")]
    Lookup(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
