//! Single-qubit gates as right-multiplications: catalog values, composition,
//! and axis-angle synthesis.
//!
//! A right-multiplication by `e^{−n̂γ/2}` rotates the Bloch vector by γ about
//! the axis `f(n̂)`, for any fibration in use. The named gates carry the
//! matrix prefactors of the catalog (±i, ∓i) so matrix↔quaternion comparisons
//! are phase-exact rather than merely Bloch-exact.

use num_complex::Complex64;

use crate::bridge::{f_inverse, f_map, BlochVector};
use crate::error::Error;
use crate::oracle::{pauli, rn_matrix, Matrix2, PauliAxis};
use crate::quat::{exp_pure, UnitQuaternion};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A gate: one of the named catalog entries or a general axis-angle rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateSpec {
    X(Sign),
    Y(Sign),
    Z(Sign),
    Hadamard(Sign),
    PhaseShift(f64),
    General { axis: BlochVector, angle: f64 },
}

impl GateSpec {
    /// Parses a CLI token: `X`, `X-`, `Y`, `Z`, `H` (optionally suffixed with
    /// `+`/`-`), `P(θ)` for a phase shift, `R(nx,ny,nz;γ)` for a general
    /// rotation.
    pub fn parse(token: &str) -> Result<Self, Error> {
        let bad = || Error::UnknownGate(token.to_string());
        let (head, sign) = match token {
            t if t.ends_with('+') => (&t[..t.len() - 1], Sign::Plus),
            t if t.ends_with('-') && !t.contains('(') => (&t[..t.len() - 1], Sign::Minus),
            t => (t, Sign::Plus),
        };
        match head {
            "X" => Ok(GateSpec::X(sign)),
            "Y" => Ok(GateSpec::Y(sign)),
            "Z" => Ok(GateSpec::Z(sign)),
            "H" => Ok(GateSpec::Hadamard(sign)),
            _ => {
                let inner = token
                    .strip_prefix("P(")
                    .or_else(|| token.strip_prefix("R("))
                    .and_then(|rest| rest.strip_suffix(')'))
                    .ok_or_else(bad)?;
                if token.starts_with("P(") {
                    let theta: f64 = inner.trim().parse().map_err(|_| bad())?;
                    Ok(GateSpec::PhaseShift(theta))
                } else {
                    let (axis_part, angle_part) = inner.split_once(';').ok_or_else(bad)?;
                    let comps: Vec<f64> = axis_part
                        .split(',')
                        .map(|p| p.trim().parse::<f64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| bad())?;
                    if comps.len() != 3 {
                        return Err(bad());
                    }
                    let axis = BlochVector::new(comps[0], comps[1], comps[2]).map_err(|_| bad())?;
                    let angle: f64 = angle_part.trim().parse().map_err(|_| bad())?;
                    Ok(GateSpec::General { axis, angle })
                }
            }
        }
    }
}

/// The right-multiplier realizing a gate. Catalog rows: X(±) → ±k,
/// Y(±) → ±j, Z(±) → ±i, H(±) → ±(i+k)/√2, phase shift θ → e^{−iθ/2};
/// a general (n̂, γ) rotation is `e^{−f⁻¹(n̂)·γ/2}`.
pub fn gate_quaternion(g: &GateSpec) -> UnitQuaternion {
    match *g {
        GateSpec::X(s) => scale_unit(UnitQuaternion::K, s),
        GateSpec::Y(s) => scale_unit(UnitQuaternion::J, s),
        GateSpec::Z(s) => scale_unit(UnitQuaternion::I, s),
        GateSpec::Hadamard(s) => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            let h = UnitQuaternion::new(0.0, r, 0.0, r).expect("unit by construction");
            scale_unit(h, s)
        }
        GateSpec::PhaseShift(theta) => exp_pure(crate::quat::PureUnitQuaternion::I, -0.5 * theta),
        GateSpec::General { axis, angle } => exp_pure(-f_inverse(axis), 0.5 * angle),
    }
}

fn scale_unit(q: UnitQuaternion, s: Sign) -> UnitQuaternion {
    match s {
        Sign::Plus => q,
        Sign::Minus => -q,
    }
}

/// The catalog's matrix operator for a gate, prefactors included.
pub fn gate_matrix(g: &GateSpec) -> Matrix2 {
    let i = Complex64::new(0.0, 1.0);
    match *g {
        GateSpec::X(s) => pauli(PauliAxis::X).scale(i * s.factor()),
        GateSpec::Y(s) => pauli(PauliAxis::Y).scale(-i * s.factor()),
        GateSpec::Z(s) => pauli(PauliAxis::Z).scale(i * s.factor()),
        GateSpec::Hadamard(s) => Matrix2::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
        )
        .scale(i * (s.factor() * std::f64::consts::FRAC_1_SQRT_2)),
        GateSpec::PhaseShift(theta) => Matrix2::new(
            Complex64::from_polar(1.0, -0.5 * theta),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(1.0, 0.5 * theta),
        ),
        GateSpec::General { axis, angle } => rn_matrix(axis, angle),
    }
}

/// Applies a gate to a state: `q → q · gate`.
pub fn apply_gate(q: UnitQuaternion, g: &GateSpec) -> UnitQuaternion {
    q * gate_quaternion(g)
}

/// Folds a gate sequence into one right-multiplier: applying the product
/// equals applying the gates in order.
pub fn compose(gs: &[GateSpec]) -> Result<UnitQuaternion, Error> {
    if gs.is_empty() {
        return Err(Error::EmptyGateSequence);
    }
    Ok(gs
        .iter()
        .fold(UnitQuaternion::ONE, |acc, g| acc * gate_quaternion(g)))
}

/// Inverse of [`gate_quaternion`] for the general form: recovers (axis, γ)
/// with γ ∈ [0, 2π] and the axis flipped as needed so that sin(γ/2) ≥ 0.
/// Degenerate ±1 map to (ẑ, 0) and (ẑ, 2π).
pub fn decompose(q_r: UnitQuaternion) -> GateSpec {
    let imag_norm = (q_r.x() * q_r.x() + q_r.y() * q_r.y() + q_r.z() * q_r.z()).sqrt();
    if imag_norm < 1e-12 {
        let angle = if q_r.w() >= 0.0 {
            0.0
        } else {
            std::f64::consts::TAU
        };
        return GateSpec::General {
            axis: BlochVector::Z,
            angle,
        };
    }
    let angle = 2.0 * imag_norm.atan2(q_r.w());
    let inv = -1.0 / imag_norm;
    let n_hat =
        crate::quat::PureUnitQuaternion::unchecked(q_r.x() * inv, q_r.y() * inv, q_r.z() * inv);
    GateSpec::General {
        axis: f_map(n_hat),
        angle,
    }
}

/// Sign-canonical representative of the {q, −q} double cover: the first
/// component of (w, x, y, z) larger than 1e-12 in magnitude is made positive.
pub fn canonical_sign(q: UnitQuaternion) -> UnitQuaternion {
    for comp in [q.w(), q.x(), q.y(), q.z()] {
        if comp.abs() > 1e-12 {
            return if comp < 0.0 { -q } else { q };
        }
    }
    q
}
