//! Error type shared by all solver modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("director must be a unit vector, got |n| = {norm}")]
    NonUnitDirector { norm: f64 },

    #[error("kernel characterization requires s != 0")]
    ZeroOrderParameter,

    #[error("top eigenvalues nearly degenerate (gap = {gap:.3e}), director undefined")]
    DegenerateDirector { gap: f64 },

    #[error("invalid bulk parameters: need a >= 0, b >= 0, c > 0 (got a={a}, b={b}, c={c})")]
    InvalidBulkParams { a: f64, b: f64, c: f64 },

    #[error("bulk wells are unequal: b^2/(27ac) = {ratio:.12} (heteroclinic profile needs b^2 = 27ac)")]
    UnequalWells { ratio: f64 },

    #[error("profile relaxation did not converge: residual {residual:.3e} after {iterations} iterations")]
    ProfileIteration { residual: f64, iterations: usize },

    #[error("elastic constants inconsistent with solved profile: 6*L1 + L2 = {given} but profile was solved with kappa = {expected}")]
    KappaMismatch { given: f64, expected: f64 },

    #[error("grid dimensions must be powers of two, got {nx} x {ny}")]
    GridNotPowerOfTwo { nx: usize, ny: usize },

    #[error("grid spacing must be isotropic: Lx/nx = {hx} but Ly/ny = {hy}")]
    AnisotropicGrid { hx: f64, hy: f64 },

    #[error("non-finite value produced at step {step} in {context}")]
    Divergence { step: u64, context: String },

    #[error("energy increased at step {step}: relative increase {relative:.3e}")]
    EnergyIncrease { step: u64, relative: f64 },

    #[error("snapshot magic bytes mismatch")]
    SnapshotMagic,

    #[error("snapshot dimension mismatch: header says {expected} values for field {field}, payload has {actual}")]
    SnapshotDimensions {
        field: String,
        expected: usize,
        actual: usize,
    },

    #[error("snapshot payload truncated while reading field {field}")]
    SnapshotTruncated { field: String },

    #[error("snapshot metadata: {0}")]
    SnapshotMeta(#[from] serde_json::Error),

    #[error("probe of length {delta} exceeds half the box; samples would wrap onto the far phase")]
    ProbeTooLong { delta: f64 },

    #[error("time step violates the CFL bound: max|v| dt / h = {courant:.3}")]
    CflViolation { courant: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
