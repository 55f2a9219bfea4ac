use thiserror::Error;

/// Errors shared by the solver, the potential families and the
/// finite-difference oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Generic parameter-domain violation (invalid coefficient, bad grid, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A derived-parameter radicand went negative: the requested state is not
    /// on the real bound-state branch of the method.
    #[error("complex NU branch: alpha8 = {alpha8}, alpha9 = {alpha9}")]
    ComplexNuBranch { alpha8: f64, alpha9: f64 },

    /// The residual has the same sign at both bracket ends.
    #[error("no sign change in bracket ({lo}, {hi})")]
    NoSignChange { lo: f64, hi: f64 },

    /// Bisection failed to reach tolerance within the iteration cap.
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// The assembled wavefunction has a non-decaying exponential factor.
    #[error("non-normalizable: exponential rate {rate} >= 0")]
    NonNormalizable { rate: f64 },

    /// The effective angular momentum J0 = l - flux + 1/2 is not positive.
    #[error("flux exceeds regularity bound: J0 = {j0} <= 0")]
    FluxRegularity { j0: f64 },

    /// The wavefunction has not decayed below threshold at the integration edge.
    #[error("tail not converged: |R(r_max)| / max|R| = {tail:.3e} at r_max = {r_max}")]
    TailNotConverged { r_max: f64, tail: f64 },

    /// A requested eigenvalue sits above the continuum threshold of the grid.
    #[error("unbound level: eigenvalue {value} exceeds continuum threshold {threshold}")]
    UnboundLevel { value: f64, threshold: f64 },

    /// Inverse iteration failed to reach its residual target.
    #[error("inverse iteration stagnated on eigenvalue index {index}")]
    InverseIterationStagnated { index: usize },

    /// The oracle returned fewer bound levels than the closed-form table has rows.
    #[error("level count mismatch: table has {expected} rows, oracle returned {actual}")]
    LevelCountMismatch { expected: usize, actual: usize },

    /// Quadrature needs at least two samples.
    #[error("insufficient samples: got {count}, need at least 2")]
    InsufficientSamples { count: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
