//! The left-multiplication sector: global phase shifts, the time-reversal
//! family, generic non-unitary operators, effective rotation axes, and the
//! cone relation.
//!
//! A left factor `q_L = e^{−n̂γ/2}` still rotates the Bloch vector by γ, but
//! about an axis `r̂ = f(q̄·n̂·q)` that depends on the entire state q, not just
//! its Bloch point. Sweeping the invisible phase of q sweeps r̂ around a cone
//! whose half-angle obeys `n̂·v̂ = q̂·r̂`.

use crate::bridge::{bloch_of_state, f_map, BlochVector};
use crate::error::Error;
use crate::quat::{exp_pure, log_axis_angle, PureUnitQuaternion, Quaternion, UnitQuaternion};

/// Classification of a left factor relative to the fibration axis v̂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeftOpClass {
    /// `q̄_L·v̂·q_L = v̂`: the Bloch vector is untouched.
    GlobalPhase { angle: f64 },
    /// `q̄_L·v̂·q_L = −v̂`: anti-unitary, negates every Bloch vector.
    TimeReversal { delta: f64 },
    /// Everything else: the Bloch action depends on the hidden phase.
    NonUnitary,
}

/// Alignment tolerance for the discrete classification; inputs come from
/// exact constructors, so this is construction-grade rather than
/// integration-grade.
const CLASSIFY_TOL: f64 = 1e-9;

/// Deterministic orthonormal basis (e₁, e₂) of the plane orthogonal to v̂,
/// with (e₁, e₂) = (j, k) when v̂ = i. δ is always reported in this basis.
fn orthogonal_basis(vhat: PureUnitQuaternion) -> (PureUnitQuaternion, PureUnitQuaternion) {
    let seed = if vhat.dot(PureUnitQuaternion::J).abs() < 0.9 {
        PureUnitQuaternion::J
    } else {
        PureUnitQuaternion::K
    };
    let d = seed.dot(vhat);
    let raw = seed.as_quat() - vhat.as_quat().scale(d);
    let n = raw.norm();
    let e1 = PureUnitQuaternion::unchecked(raw.x / n, raw.y / n, raw.z / n);
    // cross product of pure quaternions via the commutator
    let cross = (vhat.as_quat() * e1.as_quat() - e1.as_quat() * vhat.as_quat()).scale(0.5);
    let e2 = PureUnitQuaternion::unchecked(cross.x, cross.y, cross.z);
    (e1, e2)
}

/// Sorts a left factor into phase shift, time reversal, or non-unitary,
/// relative to the fibration axis `vhat`.
pub fn classify_left(q_l: UnitQuaternion, vhat: PureUnitQuaternion) -> LeftOpClass {
    let aa = log_axis_angle(q_l);
    if aa.angle < CLASSIFY_TOL {
        return LeftOpClass::GlobalPhase { angle: 0.0 };
    }
    if (std::f64::consts::PI - aa.angle) < CLASSIFY_TOL {
        // q_L = −1 = e^{v̂π} for every v̂
        return LeftOpClass::GlobalPhase {
            angle: std::f64::consts::PI,
        };
    }

    let dist_plus = (aa.axis.as_quat() - vhat.as_quat()).norm();
    let dist_minus = (aa.axis.as_quat() + vhat.as_quat()).norm();
    if dist_plus <= CLASSIFY_TOL {
        return LeftOpClass::GlobalPhase { angle: aa.angle };
    }
    if dist_minus <= CLASSIFY_TOL {
        return LeftOpClass::GlobalPhase { angle: -aa.angle };
    }

    if aa.axis.dot(vhat).abs() <= CLASSIFY_TOL
        && (aa.angle - std::f64::consts::FRAC_PI_2).abs() <= CLASSIFY_TOL
    {
        let (e1, e2) = orthogonal_basis(vhat);
        let delta = aa.axis.dot(e2).atan2(aa.axis.dot(e1));
        return LeftOpClass::TimeReversal { delta };
    }

    LeftOpClass::NonUnitary
}

/// Anti-unitary reversal `q → e^{(j·cosδ + k·sinδ)π/2}·q`. The left factor is
/// the pure quaternion `j·cosδ + k·sinδ` itself, built with an exactly zero
/// real part so that two applications give `−q` to machine rounding (and
/// bit-exactly at δ = 0, the `j·q` representative).
pub fn time_reverse_state(q: UnitQuaternion, delta: f64) -> UnitQuaternion {
    let (s, c) = delta.sin_cos();
    let axis = Quaternion::pure(0.0, c, s);
    UnitQuaternion::unchecked(axis * q.as_quat())
}

/// The rotation a left factor effects on the Bloch image of this particular
/// state: writing `q_L = e^{−n̂γ/2}`, the axis is `r̂ = f(q̄·n̂·q)` and the
/// angle is γ. Rejects `q_L = ±1`, which encodes no rotation.
pub fn effective_rotation(
    q: UnitQuaternion,
    q_l: UnitQuaternion,
    _vhat: PureUnitQuaternion,
) -> Result<(BlochVector, f64), Error> {
    let imag_norm = (q_l.x() * q_l.x() + q_l.y() * q_l.y() + q_l.z() * q_l.z()).sqrt();
    if imag_norm < 1e-12 {
        return Err(Error::DegenerateLeftFactor);
    }
    let aa = log_axis_angle(q_l);
    // q_L = e^{ŵβ} = exp_pure(n̂, −γ/2) with n̂ = −ŵ, γ = 2β
    let n_hat = -aa.axis;
    let gamma = 2.0 * aa.angle;
    let r_hat = f_map(q.conj().sandwich(n_hat));
    Ok((r_hat, gamma))
}

/// Both sides of the cone relation: `lhs = n̂·f(v̂)` (fixed by the operator),
/// `rhs = q̂·r̂` (fixed by the state and its effective axis). They agree for
/// every state and every phase of it.
pub fn cone_check(
    n_axis: BlochVector,
    q: UnitQuaternion,
    q_l: UnitQuaternion,
    vhat: PureUnitQuaternion,
) -> Result<(f64, f64), Error> {
    let lhs = n_axis.dot(f_map(vhat));
    let (r_hat, _) = effective_rotation(q, q_l, vhat)?;
    let rhs = bloch_of_state(q, vhat).dot(r_hat);
    Ok((lhs, rhs))
}

/// Sweeps the hidden phase `q → e^{v̂α}·q` over [0, 2π) and collects the
/// effective rotation axis at each phase. The axes trace a circle centered
/// on the axis through q̂.
pub fn axis_circle(
    q: UnitQuaternion,
    q_l: UnitQuaternion,
    vhat: PureUnitQuaternion,
    samples: usize,
) -> Result<Vec<BlochVector>, Error> {
    let mut out = Vec::with_capacity(samples);
    for idx in 0..samples {
        let alpha = std::f64::consts::TAU * idx as f64 / samples as f64;
        let shifted = exp_pure(vhat, alpha) * q;
        let (r_hat, _) = effective_rotation(shifted, q_l, vhat)?;
        out.push(r_hat);
    }
    Ok(out)
}
