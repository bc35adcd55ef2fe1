//! Error type shared by every module.

use thiserror::Error;

/// Axis-aligned rectangle `[re0, re1] x [im0, im1]`, carried by contour errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub re0: f64,
    pub re1: f64,
    pub im0: f64,
    pub im1: f64,
}

impl std::fmt::Display for Rect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}] x [{}, {}]", self.re0, self.re1, self.im0, self.im1)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("invalid test function: {0}")]
    InvalidTestFunction(String),
    #[error("|f(s)| = {modulus:e} below the evaluation floor at s = {s}")]
    NearZeroDivision { s: num_complex::Complex64, modulus: f64 },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("zero on or near the contour of {0}")]
    BoundaryZero(Rect),
    #[error("argument increment not resolved on {0}")]
    PhaseJump(Rect),
    #[error("Newton refinement failed in {0}")]
    RefinementFailed(Rect),
    #[error("zero cluster of multiplicity {0} exceeds the cap")]
    MultiplicityCap(u32),
    #[error("level c = 1 is not admissible")]
    InvalidLevel,
    #[error("sigma = {0} lies within the exclusion radius of a zero")]
    SigmaOnDivisor(num_complex::Complex64),
    #[error("test function supplies {available} derivatives, {needed} needed")]
    DerivativeUnavailable { needed: usize, available: usize },
    #[error("series is not real-analytic")]
    NotRealAnalytic,
    #[error("t must be positive")]
    NonpositiveT,
    #[error("regularized pairing diverges: {0}")]
    DivergentRegularization(String),
    #[error("s = {0} lies on a zero")]
    NearPole(num_complex::Complex64),
    #[error("discrepancy samples disagree by {0:e}")]
    NonConstantDiscrepancy(f64),
    #[error("shift law not available for m = {0}")]
    UnsupportedM(u32),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("pole of the Hurwitz zeta function at {0}")]
    PoleAtQ(String),
    #[error("decay hypothesis violated: {0}")]
    DecayHypothesisViolated(String),
    #[error("remainder estimates disagree: {0}")]
    NotRamanujanClass(String),
    #[error("digamma pole at z = {0}")]
    PoleAtNonPositiveInteger(num_complex::Complex64),
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),
    #[error("parse error on line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("ordinates not increasing at line {0}")]
    MonotonicityError(usize),
    #[error("first ordinate {0} outside [14.0, 14.2]")]
    SanityGateError(f64),
    #[error("sigma = {0} is a pole")]
    PoleAtSigma(num_complex::Complex64),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
