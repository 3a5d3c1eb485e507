use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("parameter regime violated: {0}")]
    Regime(String),

    #[error("singular control at t = {t} ns: {reason}")]
    SingularControl { t: f64, reason: String },

    #[error("phase integral is singular near t = {t} ns: path crosses the equator with a non-vanishing azimuthal rate")]
    PhaseSingular { t: f64 },

    #[error("evolution is not cyclic (overlap deficit {deficit:.3e})")]
    NonCyclic { deficit: f64 },

    #[error("calibration failed: {reason}")]
    Calibration {
        reason: String,
        /// (J in rad/ns, residual) samples of the scanned residual curve.
        curve: Vec<(f64, f64)>,
    },

    #[error("propagation failed for delta J = {delta_j:e} rad/ns: {source}")]
    Sample {
        delta_j: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid argument: {0}")]
    Usage(String),
}
