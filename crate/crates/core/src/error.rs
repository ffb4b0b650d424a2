use thiserror::Error;

/// Errors surfaced by constructors, bridges, and integrators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("component is not finite")]
    NonFinite,

    #[error("norm {norm} is outside the unit-construction tolerance")]
    NotUnit { norm: f64 },

    #[error("real part {real} too large for a pure quaternion")]
    NotPure { real: f64 },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("gate sequence is empty")]
    EmptyGateSequence,

    #[error("unknown gate token `{0}`")]
    UnknownGate(String),

    #[error("left factor ±1 encodes no rotation")]
    DegenerateLeftFactor,

    #[error("omega0 must be positive to extract the fibration axis")]
    ZeroOmega,

    #[error("state inconsistent with first-order dynamics: residual real part {real:.3e}, norm deviation {norm_dev:.3e}")]
    InconsistentState { real: f64, norm_dev: f64 },

    #[error("time {t} outside the sampled field domain [{t0}, {t1}]")]
    FieldDomain { t: f64, t0: f64, t1: f64 },

    #[error("the exact stepper needs a constant or piecewise-constant field (got {kind})")]
    MethodFieldMismatch { kind: &'static str },

    #[error("invalid field profile: {0}")]
    InvalidField(String),

    #[error("step size must be positive (got {0})")]
    BadStep(f64),
}
