//! Maps between spinors, unit quaternions, fibration choices, and the Bloch
//! sphere.
//!
//! The invertible map takes the spinor (a, b) to the quaternion
//! `q = Re(a) + i·Im(a) + j·Re(b) + k·Im(b)`, i.e. `q = a + b·j` with complex
//! numbers embedded in the quaternion i-plane. The Bloch vector of a state is
//! read off from the pure unit quaternion `q̄·v̂·q`, where `v̂` fixes which
//! fibration of the 3-sphere is in use (`v̂ = i` for the plain map), followed
//! by the component shuffle `f`: x̂ from the k-component, −ŷ from j, ẑ from i.

use num_complex::Complex64;

use crate::error::Error;
use crate::oracle::Matrix2;
use crate::quat::{exp_pure, PureUnitQuaternion, Quaternion, UnitQuaternion, CONSTRUCT_TOL};

/// Normalized pair of complex amplitudes; carries the global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    pub a: Complex64,
    pub b: Complex64,
}

impl Spinor {
    /// Checked constructor: |a|² + |b|² must be 1 within 1e-9; the stored
    /// amplitudes are renormalized exactly once.
    pub fn new(a: Complex64, b: Complex64) -> Result<Self, Error> {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        if (n - 1.0).abs() > CONSTRUCT_TOL {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(Self { a: a / n, b: b / n })
    }

    pub(crate) fn unchecked(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    pub fn norm_sq(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    /// Basis state |0⟩.
    pub fn zero() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// Basis state |1⟩.
    pub fn one() -> Self {
        Self {
            a: Complex64::new(0.0, 0.0),
            b: Complex64::new(1.0, 0.0),
        }
    }
}

/// Unit 3-vector on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const X: Self = Self {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const Y: Self = Self {
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };
    pub const Z: Self = Self {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, Error> {
        let n = (x * x + y * y + z * z).sqrt();
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        if (n - 1.0).abs() > CONSTRUCT_TOL {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(Self {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub(crate) fn unchecked(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn distance(self, other: Self) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

impl std::ops::Neg for BlochVector {
    type Output = BlochVector;
    fn neg(self) -> BlochVector {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// Spherical decomposition of a state: polar θ ∈ [0, π], azimuth φ ∈ [−π, π),
/// and global phase α. On the z-axis only α − φ/2 is defined; the convention
/// φ = 0 makes the decomposition total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
    pub alpha: f64,
}

/// A choice of fibration of the 3-sphere, parameterized by a unit quaternion
/// `u`; the derived axis is `v̂ = u·i·ū`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FibrationMap {
    pub u: UnitQuaternion,
}

impl FibrationMap {
    pub fn new(u: UnitQuaternion) -> Self {
        Self { u }
    }

    /// The plain map (`u = 1`, `v̂ = i`).
    pub fn identity() -> Self {
        Self {
            u: UnitQuaternion::ONE,
        }
    }

    /// `v̂ = u·i·ū`, pure unit by the conjugation purity lemma.
    pub fn vhat(&self) -> PureUnitQuaternion {
        self.u.sandwich(PureUnitQuaternion::I)
    }
}

/// The invertible spinor→quaternion map: `q = a + b·j`.
pub fn map_mi(s: &Spinor) -> UnitQuaternion {
    UnitQuaternion::from_quaternion(Quaternion::new(s.a.re, s.a.im, s.b.re, s.b.im))
        .expect("spinor invariant guarantees unit norm")
}

/// Inverse of [`map_mi`]: `a = w + ix`, `b = y + iz`.
pub fn map_mi_inverse(q: UnitQuaternion) -> Spinor {
    Spinor::unchecked(Complex64::new(q.w(), q.x()), Complex64::new(q.y(), q.z()))
}

/// The generalized map `M_v = u·M_i`: same spinor, different fibration.
pub fn map_mv(s: &Spinor, m: &FibrationMap) -> UnitQuaternion {
    m.u * map_mi(s)
}

/// Component shuffle from pure unit quaternions to Bloch vectors:
/// `f(p) = p_k·x̂ − p_j·ŷ + p_i·ẑ`.
pub fn f_map(p: PureUnitQuaternion) -> BlochVector {
    BlochVector::unchecked(p.z(), -p.y(), p.x())
}

/// Inverse of [`f_map`].
pub fn f_inverse(v: BlochVector) -> PureUnitQuaternion {
    PureUnitQuaternion::unchecked(v.z, -v.y, v.x)
}

/// Bloch projection through the fibration axis `v̂`: `f(q̄·v̂·q)`. The global
/// phase `e^{v̂α}` cancels exactly, so all phases of a state project to the
/// same point.
pub fn bloch_of_state(q: UnitQuaternion, vhat: PureUnitQuaternion) -> BlochVector {
    f_map(q.conj().sandwich(vhat))
}

/// Builds `q = e^{iα} · e^{jθ/2} · e^{−iφ/2}`.
pub fn angles_to_quaternion(ang: &BlochAngles) -> UnitQuaternion {
    exp_pure(PureUnitQuaternion::I, ang.alpha)
        * exp_pure(PureUnitQuaternion::J, 0.5 * ang.theta)
        * exp_pure(PureUnitQuaternion::I, -0.5 * ang.phi)
}

/// Threshold below which a state counts as sitting on a z-axis pole, where
/// the azimuth is a coordinate singularity.
const POLE_EPS: f64 = 1e-12;

fn wrap_angle(a: f64) -> f64 {
    // into (−π, π]
    let mut a = a.rem_euclid(std::f64::consts::TAU);
    if a > std::f64::consts::PI {
        a -= std::f64::consts::TAU;
    }
    a
}

/// Inverts [`angles_to_quaternion`]. In the complex-pair reading the state is
/// `a = cos(θ/2)·e^{i(α−φ/2)}`, `b = sin(θ/2)·e^{i(α+φ/2)}`; at θ ∈ {0, π}
/// the convention φ = 0 is applied and α absorbs the free combination.
pub fn quaternion_to_angles(q: UnitQuaternion) -> BlochAngles {
    let a = Complex64::new(q.w(), q.x());
    let b = Complex64::new(q.y(), q.z());
    let (ca, cb) = (a.norm(), b.norm());
    let theta = 2.0 * cb.atan2(ca);

    if cb <= POLE_EPS {
        return BlochAngles {
            theta: 0.0,
            phi: 0.0,
            alpha: wrap_angle(a.arg()),
        };
    }
    if ca <= POLE_EPS {
        return BlochAngles {
            theta: std::f64::consts::PI,
            phi: 0.0,
            alpha: wrap_angle(b.arg()),
        };
    }

    let mut phi = wrap_angle(b.arg() - a.arg());
    if phi == std::f64::consts::PI {
        phi = -std::f64::consts::PI; // keep φ ∈ [−π, π)
    }
    let alpha = wrap_angle(a.arg() + 0.5 * phi);
    BlochAngles { theta, phi, alpha }
}

/// Extracts the right-multiplier of a 2×2 unitary: returns `(q_R, α)` with
/// `V = e^{−iα}·U` special-unitary and `q_R` the map of V's first column, so
/// that applying U to a spinor matches right-multiplying by `q_R` on the
/// Bloch sphere. α is taken in (−π/2, π/2] from the principal square root of
/// det U, fixing the ± branch.
pub fn matrix_to_right_quaternion(u: &Matrix2) -> Result<(UnitQuaternion, f64), Error> {
    let dev = u.unitarity_deviation();
    if dev > CONSTRUCT_TOL {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let alpha = 0.5 * u.det().arg();
    let v = u.scale(Complex64::from_polar(1.0, -alpha));
    let q = UnitQuaternion::from_quaternion(Quaternion::new(
        v.m[0][0].re,
        v.m[0][0].im,
        v.m[1][0].re,
        v.m[1][0].im,
    ))?;
    Ok((q, alpha))
}
