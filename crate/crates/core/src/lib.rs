//! Quaternionic representation of spin-1/2 states.
//!
//! States, gates, and operators all live in the unit quaternions: the spinor
//! (a, b) maps to `q = a + b·j`, unitary gates act by right-multiplication,
//! and left-multiplications realize global phase shifts, time reversal, and
//! non-unitary transformations. The `dynamics` module integrates spin
//! precession in first- and second-order form; the `oracle` module is an
//! independent 2×2 matrix-mechanics implementation used as ground truth for
//! every equivalence claim, and `verify` packages the invariant suites the
//! CLI exposes.

pub mod bridge;
pub mod dynamics;
mod error;
pub mod gates;
pub mod leftmult;
pub mod oracle;
pub mod quat;
pub mod sample;
pub mod verify;

pub use bridge::{
    angles_to_quaternion, bloch_of_state, f_inverse, f_map, map_mi, map_mi_inverse, map_mv,
    matrix_to_right_quaternion, quaternion_to_angles, BlochAngles, BlochVector, FibrationMap,
    Spinor,
};
pub use dynamics::{
    extract_vhat, first_order_rhs, integrate, integrate_second, lagrangian_l1_quat, lagrangian_l2,
    momentum_bloch, reverse_trajectory, second_order_rhs, step_exact, FieldKind, FieldProfile,
    FirstOrderState, Method, SecondOrderState, Segment, Trajectory, TrajectorySample,
};
pub use error::Error;
pub use gates::{
    apply_gate, canonical_sign, compose, decompose, gate_matrix, gate_quaternion, GateSpec, Sign,
};
pub use leftmult::{
    axis_circle, classify_left, cone_check, effective_rotation, time_reverse_state, LeftOpClass,
};
pub use quat::{
    exp_pure, log_axis_angle, rotate_pure, AxisAngle, PureUnitQuaternion, Quaternion,
    UnitQuaternion,
};
