//! Quaternion algebra: Hamilton product, conjugation, norms, the pure-axis
//! exponential and its logarithm, and rotation of pure unit quaternions.
//!
//! Components follow the basis `q = w + x·i + y·j + z·k` with
//! `i² = j² = k² = ijk = −1`. All angles are radians.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Error;

/// Norm tolerance accepted by the checked constructors. Inputs inside this
/// band are renormalized exactly once; arithmetic never renormalizes, so
/// norm drift stays observable downstream.
pub const CONSTRUCT_TOL: f64 = 1e-9;

/// General quaternion `w + x·i + y·j + z·k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// Quaternion with no real component.
    #[inline]
    pub const fn pure(x: f64, y: f64, z: f64) -> Self {
        Self { w: 0.0, x, y, z }
    }

    /// Conjugate: same real component, all three imaginary signs flipped.
    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Euclidean inner product of the four components.
    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Exponential of a quaternion, `e^w (cos|v| + v̂ sin|v|)` with `v` the
    /// imaginary part. For the pure quaternions used in the dynamics this is
    /// the closed-form propagator factor `e^{−b·dt}`.
    pub fn exp(self) -> Self {
        let vn = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        let ew = self.w.exp();
        if vn == 0.0 {
            return Self::new(ew, 0.0, 0.0, 0.0);
        }
        let s = ew * vn.sin() / vn;
        Self::new(ew * vn.cos(), s * self.x, s * self.y, s * self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    /// Hamilton product. Noncommutative: `ij = k` but `ji = −k`.
    #[inline]
    fn mul(self, r: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z,
            self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y,
            self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x,
            self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w,
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

/// Quaternion constrained to unit norm at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub const ONE: Self = Self(Quaternion::ONE);
    pub const I: Self = Self(Quaternion::I);
    pub const J: Self = Self(Quaternion::J);
    pub const K: Self = Self(Quaternion::K);

    /// Checked constructor: the norm must sit within [`CONSTRUCT_TOL`] of 1;
    /// the stored value is renormalized exactly once.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self, Error> {
        Self::from_quaternion(Quaternion::new(w, x, y, z))
    }

    pub fn from_quaternion(q: Quaternion) -> Result<Self, Error> {
        if !q.is_finite() {
            return Err(Error::NonFinite);
        }
        let n = q.norm();
        if (n - 1.0).abs() > CONSTRUCT_TOL {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(Self(q.scale(1.0 / n)))
    }

    /// Internal constructor for values that are unit by algebra (products of
    /// units, exponentials of pure units). No check, no renormalization.
    #[inline]
    pub(crate) fn unchecked(q: Quaternion) -> Self {
        Self(q)
    }

    #[inline]
    pub fn as_quat(self) -> Quaternion {
        self.0
    }

    #[inline]
    pub fn w(self) -> f64 {
        self.0.w
    }
    #[inline]
    pub fn x(self) -> f64 {
        self.0.x
    }
    #[inline]
    pub fn y(self) -> f64 {
        self.0.y
    }
    #[inline]
    pub fn z(self) -> f64 {
        self.0.z
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self(self.0.conj())
    }

    /// `self · v · conj(self)`: a rotation of the pure unit quaternion `v`.
    /// The real part of the product vanishes identically, so it is dropped.
    pub fn sandwich(self, v: PureUnitQuaternion) -> PureUnitQuaternion {
        let r = self.0 * v.as_quat() * self.0.conj();
        PureUnitQuaternion::unchecked(r.x, r.y, r.z)
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;
    #[inline]
    fn mul(self, r: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion(self.0 * r.0)
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;
    #[inline]
    fn neg(self) -> UnitQuaternion {
        UnitQuaternion(-self.0)
    }
}

/// Unit quaternion with no real component; lives on the 2-sphere of
/// imaginary directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureUnitQuaternion {
    x: f64,
    y: f64,
    z: f64,
}

impl PureUnitQuaternion {
    pub const I: Self = Self {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const J: Self = Self {
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };
    pub const K: Self = Self {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, Error> {
        let q = Quaternion::pure(x, y, z);
        if !q.is_finite() {
            return Err(Error::NonFinite);
        }
        let n = q.norm();
        if (n - 1.0).abs() > CONSTRUCT_TOL {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(Self {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    /// Accepts a quaternion whose real part is negligible (≤ [`CONSTRUCT_TOL`]).
    pub fn from_quaternion(q: Quaternion) -> Result<Self, Error> {
        if q.w.abs() > CONSTRUCT_TOL {
            return Err(Error::NotPure { real: q.w });
        }
        Self::new(q.x, q.y, q.z)
    }

    #[inline]
    pub(crate) fn unchecked(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn as_quat(self) -> Quaternion {
        Quaternion::pure(self.x, self.y, self.z)
    }

    #[inline]
    pub fn as_unit(self) -> UnitQuaternion {
        UnitQuaternion::unchecked(self.as_quat())
    }

    #[inline]
    pub fn x(self) -> f64 {
        self.x
    }
    #[inline]
    pub fn y(self) -> f64 {
        self.y
    }
    #[inline]
    pub fn z(self) -> f64 {
        self.z
    }

    /// 3-component inner product; equals `−Re(p·q)` for pure quaternions.
    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

impl Neg for PureUnitQuaternion {
    type Output = PureUnitQuaternion;
    #[inline]
    fn neg(self) -> PureUnitQuaternion {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// Axis-angle form of a unit quaternion, `q = e^{ŵβ} = cos β + ŵ sin β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAngle {
    pub axis: PureUnitQuaternion,
    /// Radians in [0, π]; the degenerate q = ±1 maps to angle 0 or π with
    /// axis `i` by convention.
    pub angle: f64,
}

/// Generalized Euler formula: `e^{axis·angle} = cos(angle) + axis·sin(angle)`.
pub fn exp_pure(axis: PureUnitQuaternion, angle: f64) -> UnitQuaternion {
    let (s, c) = angle.sin_cos();
    UnitQuaternion::unchecked(Quaternion::new(c, s * axis.x, s * axis.y, s * axis.z))
}

/// Inverse of [`exp_pure`]. The returned angle lies in [0, π]; for q = ±1 the
/// axis is arbitrary and fixed to `i` so the map stays total and deterministic.
pub fn log_axis_angle(q: UnitQuaternion) -> AxisAngle {
    let imag_norm = (q.x() * q.x() + q.y() * q.y() + q.z() * q.z()).sqrt();
    if imag_norm < 1e-12 {
        let angle = if q.w() >= 0.0 {
            0.0
        } else {
            std::f64::consts::PI
        };
        return AxisAngle {
            axis: PureUnitQuaternion::I,
            angle,
        };
    }
    let angle = imag_norm.atan2(q.w());
    let inv = 1.0 / imag_norm;
    AxisAngle {
        axis: PureUnitQuaternion::unchecked(q.x() * inv, q.y() * inv, q.z() * inv),
        angle,
    }
}

/// Rotates `v` by `angle` about `axis` in the space of pure unit quaternions:
/// `e^{axis·angle/2} · v · e^{−axis·angle/2}`.
pub fn rotate_pure(
    v: PureUnitQuaternion,
    axis: PureUnitQuaternion,
    angle: f64,
) -> PureUnitQuaternion {
    exp_pure(axis, 0.5 * angle).sandwich(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn hamilton_basis_products() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        assert_eq!(i * j, k);
        assert_eq!(j * i, -k);
        assert_eq!(j * k, i);
        assert_eq!(k * j, -i);
        assert_eq!(k * i, j);
        assert_eq!(i * k, -j);
        assert_eq!(i * i, -Quaternion::ONE);
        assert_eq!(j * j, -Quaternion::ONE);
        assert_eq!(k * k, -Quaternion::ONE);
        // ijk = -1
        assert_eq!(i * j * k, -Quaternion::ONE);
    }

    #[test]
    fn identity_element() {
        let q = Quaternion::new(0.3, -1.2, 0.7, 2.0);
        assert_eq!(q * Quaternion::ONE, q);
        assert_eq!(Quaternion::ONE * q, q);
    }

    #[test]
    fn conjugation_and_norm() {
        let q = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(q.conj(), Quaternion::new(1.0, -1.0, 0.0, 0.0));

        let q = Quaternion::new(2.0, -3.0, 4.0, -5.0);
        let expect = (4.0_f64 + 9.0 + 16.0 + 25.0).sqrt();
        assert!((q.norm() - expect).abs() < 1e-15);
        // |q|² equals the real part of q·conj(q); the imaginary parts cancel.
        let qq = q * q.conj();
        assert!((qq.w - q.norm_sq()).abs() < 1e-12);
        assert!(qq.x.abs() < 1e-12 && qq.y.abs() < 1e-12 && qq.z.abs() < 1e-12);

        // conj(pq) = conj(q)conj(p): conj(ij) = (-j)(-i) = ji = -k
        assert_eq!((Quaternion::I * Quaternion::J).conj(), -Quaternion::K);
        let p = Quaternion::new(0.4, 0.1, -0.9, 0.3);
        assert!(close((p * q).conj(), q.conj() * p.conj(), 1e-12));
    }

    #[test]
    fn exp_pure_special_values() {
        assert!(close(
            exp_pure(PureUnitQuaternion::I, FRAC_PI_2).as_quat(),
            Quaternion::I,
            1e-15
        ));
        assert!(close(
            exp_pure(PureUnitQuaternion::J, 0.0).as_quat(),
            Quaternion::ONE,
            1e-15
        ));
        // Hadamard direction: e^{(i+k)/√2 · π/2} = (i+k)/√2
        let h = PureUnitQuaternion::new(
            std::f64::consts::FRAC_1_SQRT_2,
            0.0,
            std::f64::consts::FRAC_1_SQRT_2,
        )
        .unwrap();
        assert!(close(exp_pure(h, FRAC_PI_2).as_quat(), h.as_quat(), 1e-15));
    }

    #[test]
    fn log_special_values() {
        let aa = log_axis_angle(UnitQuaternion::K);
        assert_eq!(aa.axis, PureUnitQuaternion::K);
        assert!((aa.angle - FRAC_PI_2).abs() < 1e-15);

        let aa = log_axis_angle(UnitQuaternion::ONE);
        assert_eq!(aa.axis, PureUnitQuaternion::I);
        assert_eq!(aa.angle, 0.0);

        let aa = log_axis_angle(-UnitQuaternion::ONE);
        assert_eq!(aa.axis, PureUnitQuaternion::I);
        assert_eq!(aa.angle, PI);

        let q = exp_pure(PureUnitQuaternion::J, 0.3);
        let aa = log_axis_angle(q);
        assert!((aa.angle - 0.3).abs() < 1e-15);
        assert!(close(aa.axis.as_quat(), Quaternion::J, 1e-15));
    }

    #[test]
    fn exp_log_round_trip() {
        let n = (0.2f64 * 0.2 + 0.5 * 0.5 + 0.6 * 0.6).sqrt();
        let axis = PureUnitQuaternion::new(0.2 / n, -0.5 / n, 0.6 / n).unwrap();
        for angle in [1e-6, 0.4, 1.3, 2.9, PI - 1e-6] {
            let q = exp_pure(axis, angle);
            let aa = log_axis_angle(q);
            assert!(close(
                exp_pure(aa.axis, aa.angle).as_quat(),
                q.as_quat(),
                1e-12
            ));
        }
    }

    #[test]
    fn double_cover_is_exact() {
        let axis = PureUnitQuaternion::new(0.48, 0.6, -0.64).unwrap();
        for angle in [0.0, 0.7, 2.1, -1.3] {
            assert_eq!(exp_pure(axis, angle), exp_pure(-axis, -angle));
        }
    }

    #[test]
    fn rotate_pure_examples() {
        // half-turn about j flips i
        let r = rotate_pure(PureUnitQuaternion::I, PureUnitQuaternion::J, PI);
        assert!(close(r.as_quat(), -Quaternion::I, 1e-15));

        // rotation about itself is the identity
        let v = PureUnitQuaternion::new(0.6, 0.0, 0.8).unwrap();
        let r = rotate_pure(v, v, 1.23);
        assert!(close(r.as_quat(), v.as_quat(), 1e-15));

        // quarter turn about k takes i to j: (c+ks) i (c−ks) expands to j
        let r = rotate_pure(PureUnitQuaternion::I, PureUnitQuaternion::K, FRAC_PI_2);
        assert!(close(r.as_quat(), Quaternion::J, 1e-15));
    }

    #[test]
    fn sandwich_output_is_pure_and_unit() {
        let u = UnitQuaternion::new(0.5, 0.5, 0.5, 0.5).unwrap();
        let v = PureUnitQuaternion::new(0.0, 0.6, -0.8).unwrap();
        let s = u.sandwich(v);
        assert!((s.as_quat().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn checked_constructors_enforce_tolerance() {
        assert!(UnitQuaternion::new(1.0 + 5e-10, 0.0, 0.0, 0.0).is_ok());
        assert!(UnitQuaternion::new(1.0 + 1e-6, 0.0, 0.0, 0.0).is_err());
        assert!(PureUnitQuaternion::new(1.0 + 1e-6, 0.0, 0.0).is_err());
        assert!(PureUnitQuaternion::from_quaternion(Quaternion::new(0.1, 1.0, 0.0, 0.0)).is_err());

        // renormalization happens exactly once, at construction
        let u = UnitQuaternion::new(1.0 + 5e-10, 0.0, 0.0, 0.0).unwrap();
        assert!((u.as_quat().norm() - 1.0).abs() < 1e-15);
    }
}
