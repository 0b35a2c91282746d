use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coefficient alpha[{index}] has modulus {modulus}, must be < 1 - 1e-12")]
    CoefficientOutOfRange { index: usize, modulus: f64 },
    #[error("last coefficient must be unimodular within 1e-12, got modulus {modulus}")]
    BoundaryNotUnimodular { modulus: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("off-diagonal entry a[{index}] = {value} is not positive")]
    NonPositiveOffDiagonal { index: usize, value: f64 },
    #[error("eigenvalues closer than the separation threshold ({separation:e})")]
    DegenerateSpectrum { separation: f64 },
    #[error("eigen-residual {residual:e} exceeds tolerance")]
    EigenResidual { residual: f64 },
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("requested degree {requested} exceeds support size {support}")]
    SupportTooSmall { requested: usize, support: usize },
    #[error("support of {0} points is too large for subset enumeration")]
    SupportTooLarge(usize),
    #[error("ill-conditioned: squared norm of degree-{degree} polynomial is {norm_sq:e}")]
    IllConditioned { degree: usize, norm_sq: f64 },
    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),
    #[error("measure is not symmetric under conjugation")]
    NotSymmetric,
    #[error("support point at theta = {theta} lies on the real axis")]
    SupportAtRealAxis { theta: f64 },
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("nu must be >= 1, got {0}")]
    InvalidNu(f64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("point outside the density's domain: {0}")]
    DomainViolation(String),
    #[error("empty sample")]
    EmptySample,
    #[error("invalid cdf: {0}")]
    InvalidCdf(String),
    #[error("rho[{index}] = {rho:e} is too small")]
    RhoTooSmall { index: usize, rho: f64 },
    #[error("entry {index} = {value} outside (-1, 1)")]
    OutOfRange { index: usize, value: f64 },
    #[error("flow generator has no nonzero coefficient")]
    EmptyHamiltonian,
    #[error("lambda values not strictly ordered (gap {gap:e})")]
    NonDistinctLambda { gap: f64 },
    #[error("observable '{name}' is not differentiable at the probe (step disagreement {disagreement:e})")]
    NonDifferentiable { name: String, disagreement: f64 },
    #[error("eigenvalue matching across the perturbation is ambiguous")]
    MatchingAmbiguous,
    #[error("arg(alpha[n-1]) = {phi} is too close to the branch cut")]
    BranchProximity { phi: f64 },
    #[error("invalid step: {0}")]
    InvalidStep(String),
}

pub type Result<T> = std::result::Result<T, Error>;
