//! Matrix-mechanics reference implementation: 2×2 complex arithmetic over
//! `num_complex`, Pauli expectation values, Rodrigues rotations, and a spinor
//! RK4 integrator.
//!
//! This module deliberately shares no arithmetic with the quaternion path —
//! agreement between the two is evidence, not tautology. Quaternion values
//! enter only as plain components at explicit conversion points.

use num_complex::Complex64;
use rand::Rng;

use crate::bridge::{BlochVector, Spinor};
use crate::dynamics::FieldProfile;
use crate::quat::UnitQuaternion;

type C = Complex64;

#[inline]
fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub m: [[C; 2]; 2],
}

impl Matrix2 {
    pub fn new(m00: C, m01: C, m10: C, m11: C) -> Self {
        Self {
            m: [[m00, m01], [m10, m11]],
        }
    }

    pub fn identity() -> Self {
        Self::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))
    }

    pub fn zero() -> Self {
        Self::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))
    }

    pub fn scale(&self, s: C) -> Self {
        Self::new(
            self.m[0][0] * s,
            self.m[0][1] * s,
            self.m[1][0] * s,
            self.m[1][1] * s,
        )
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.m[0][0].conj(),
            self.m[1][0].conj(),
            self.m[0][1].conj(),
            self.m[1][1].conj(),
        )
    }

    pub fn det(&self) -> C {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn mul(&self, r: &Matrix2) -> Matrix2 {
        Matrix2::new(
            self.m[0][0] * r.m[0][0] + self.m[0][1] * r.m[1][0],
            self.m[0][0] * r.m[0][1] + self.m[0][1] * r.m[1][1],
            self.m[1][0] * r.m[0][0] + self.m[1][1] * r.m[1][0],
            self.m[1][0] * r.m[0][1] + self.m[1][1] * r.m[1][1],
        )
    }

    pub fn add(&self, r: &Matrix2) -> Matrix2 {
        Matrix2::new(
            self.m[0][0] + r.m[0][0],
            self.m[0][1] + r.m[0][1],
            self.m[1][0] + r.m[1][0],
            self.m[1][1] + r.m[1][1],
        )
    }

    pub fn sub(&self, r: &Matrix2) -> Matrix2 {
        Matrix2::new(
            self.m[0][0] - r.m[0][0],
            self.m[0][1] - r.m[0][1],
            self.m[1][0] - r.m[1][0],
            self.m[1][1] - r.m[1][1],
        )
    }

    pub fn apply(&self, s: &Spinor) -> Spinor {
        Spinor::unchecked(
            self.m[0][0] * s.a + self.m[0][1] * s.b,
            self.m[1][0] * s.a + self.m[1][1] * s.b,
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }

    /// Max entry of |U†U − I|.
    pub fn unitarity_deviation(&self) -> f64 {
        self.adjoint().mul(self).sub(&Matrix2::identity()).max_abs()
    }

    /// Max entry of |A − A†|.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

pub fn pauli(axis: PauliAxis) -> Matrix2 {
    match axis {
        PauliAxis::X => Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
        PauliAxis::Y => Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)),
        PauliAxis::Z => Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)),
    }
}

/// Zeeman Hamiltonian `H = (γ/2)·B⃗·σ⃗` (ℏ = 1), the sign for which the
/// Schrödinger evolution `i·ṡ = (H + ω₀)s` reproduces right-handed Bloch
/// precession at rate γ·|B| about B̂ — the convention the quaternion
/// dynamics realizes.
pub fn hamiltonian(b: [f64; 3], gamma: f64) -> Matrix2 {
    let g = 0.5 * gamma;
    Matrix2::new(
        c(g * b[2], 0.0),
        c(g * b[0], -g * b[1]),
        c(g * b[0], g * b[1]),
        c(-g * b[2], 0.0),
    )
}

/// Bloch rotation operator `R_n(γ) = cos(γ/2)·I − i·sin(γ/2)·n̂·σ⃗`.
pub fn rn_matrix(axis: BlochVector, gamma_angle: f64) -> Matrix2 {
    let (s, cos) = (0.5 * gamma_angle).sin_cos();
    Matrix2::new(
        c(cos, -s * axis.z),
        c(-s * axis.y, -s * axis.x),
        c(s * axis.y, -s * axis.x),
        c(cos, s * axis.z),
    )
}

/// Bloch vector from Pauli expectation values,
/// `(⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩) / ⟨1⟩`.
pub fn bloch_from_spinor(s: &Spinor) -> BlochVector {
    let n = s.a.norm_sqr() + s.b.norm_sqr();
    let ab = s.a.conj() * s.b;
    BlochVector::unchecked(
        2.0 * ab.re / n,
        2.0 * ab.im / n,
        (s.a.norm_sqr() - s.b.norm_sqr()) / n,
    )
}

/// Rodrigues rotation of `v` by `angle` about the unit `axis`:
/// `v cosγ + (k̂×v) sinγ + k̂ (k̂·v)(1−cosγ)`.
pub fn rodrigues_rotate(v: BlochVector, axis: BlochVector, angle: f64) -> BlochVector {
    let (s, cos) = angle.sin_cos();
    let kv = axis.dot(v);
    let cross = [
        axis.y * v.z - axis.z * v.y,
        axis.z * v.x - axis.x * v.z,
        axis.x * v.y - axis.y * v.x,
    ];
    BlochVector::unchecked(
        v.x * cos + cross[0] * s + axis.x * kv * (1.0 - cos),
        v.y * cos + cross[1] * s + axis.y * kv * (1.0 - cos),
        v.z * cos + cross[2] * s + axis.z * kv * (1.0 - cos),
    )
}

/// SU(2) matrix of a unit quaternion under the spinor↔quaternion embedding:
/// `[[w+ix, −y+iz], [y+iz, w−ix]]`. Inverse of the matrix→quaternion bridge.
pub fn su2_from_unit_quaternion(q: UnitQuaternion) -> Matrix2 {
    Matrix2::new(
        c(q.w(), q.x()),
        c(-q.y(), q.z()),
        c(q.y(), q.z()),
        c(q.w(), -q.x()),
    )
}

/// Random unitary from the explicit four-angle parameterization
/// `e^{iδ}·[[cosθ·e^{iα}, sinθ·e^{iβ}], [−sinθ·e^{−iβ}, cosθ·e^{−iα}]]`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Matrix2 {
    use std::f64::consts::PI;
    let theta = rng.random_range(0.0..PI / 2.0);
    let alpha = rng.random_range(-PI..PI);
    let beta = rng.random_range(-PI..PI);
    let delta = rng.random_range(-PI..PI);
    let (st, ct) = theta.sin_cos();
    Matrix2::new(
        C::from_polar(ct, alpha),
        C::from_polar(st, beta),
        -C::from_polar(st, -beta),
        C::from_polar(ct, -alpha),
    )
    .scale(C::from_polar(1.0, delta))
}

/// One sample of a spinor trajectory.
#[derive(Debug, Clone, Copy)]
pub struct SpinorSample {
    pub t: f64,
    pub spinor: Spinor,
    pub norm: f64,
}

/// RK4 on `i·ṡ = (H(t) + ω₀)·s` with `H` built from the field profile.
/// Norm drift is recorded, never repaired.
pub fn integrate_spinor(
    s0: &Spinor,
    f: &FieldProfile,
    omega0: f64,
    t_end: f64,
    h: f64,
) -> Result<Vec<SpinorSample>, crate::error::Error> {
    if h <= 0.0 {
        return Err(crate::error::Error::BadStep(h));
    }
    let deriv = |t: f64, s: [C; 2]| -> Result<[C; 2], crate::error::Error> {
        let ham = hamiltonian(f.b_vector(t)?, f.gamma);
        let minus_i = c(0.0, -1.0);
        Ok([
            minus_i * (ham.m[0][0] * s[0] + ham.m[0][1] * s[1] + omega0 * s[0]),
            minus_i * (ham.m[1][0] * s[0] + ham.m[1][1] * s[1] + omega0 * s[1]),
        ])
    };

    let mut s = [s0.a, s0.b];
    let mut t = 0.0;
    let norm = |s: &[C; 2]| (s[0].norm_sqr() + s[1].norm_sqr()).sqrt();
    let mut out = vec![SpinorSample {
        t,
        spinor: Spinor::unchecked(s[0], s[1]),
        norm: norm(&s),
    }];

    let eps = 1e-9 * h;
    while t + eps < t_end {
        let dt = h.min(t_end - t);
        let k1 = deriv(t, s)?;
        let s2 = [s[0] + 0.5 * dt * k1[0], s[1] + 0.5 * dt * k1[1]];
        let k2 = deriv(t + 0.5 * dt, s2)?;
        let s3 = [s[0] + 0.5 * dt * k2[0], s[1] + 0.5 * dt * k2[1]];
        let k3 = deriv(t + 0.5 * dt, s3)?;
        let s4 = [s[0] + dt * k3[0], s[1] + dt * k3[1]];
        let k4 = deriv(t + dt, s4)?;
        for idx in 0..2 {
            s[idx] += (dt / 6.0) * (k1[idx] + 2.0 * k2[idx] + 2.0 * k3[idx] + k4[idx]);
        }
        t += dt;
        out.push(SpinorSample {
            t,
            spinor: Spinor::unchecked(s[0], s[1]),
            norm: norm(&s),
        });
    }
    Ok(out)
}

/// Spinor-side Lagrangian `L₁ = ⟨χ|H|χ⟩ − Im⟨χ̇|χ⟩` (ℏ = 1).
pub fn lagrangian_l1_spinor(s: &Spinor, sdot: &Spinor, h: &Matrix2) -> f64 {
    let hs = h.apply(s);
    let expectation = (s.a.conj() * hs.a + s.b.conj() * hs.b).re;
    let overlap = sdot.a.conj() * s.a + sdot.b.conj() * s.b;
    expectation - overlap.im
}

/// One verified identity in an [`AlgebraReport`].
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: String,
    pub max_err: f64,
    pub tol: f64,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.max_err <= self.tol
    }
}

/// Result of [`algebra_check`]: the commutator identities of `u_n = −iσ_n`
/// and the empirically determined sign convention linking `u_n` to
/// right-multiplication by `±i, ±j, ±k`.
#[derive(Debug, Clone)]
pub struct AlgebraReport {
    pub identities: Vec<IdentityCheck>,
    /// Pairs like ("u_x", "-k"): applying `u_n` to a spinor equals
    /// right-multiplying its quaternion image by the named basis element.
    pub correspondence: Vec<(&'static str, &'static str)>,
}

impl AlgebraReport {
    pub fn all_pass(&self) -> bool {
        self.identities.iter().all(IdentityCheck::passed)
    }
}

/// Verifies that `u_n = −iσ_n` obey the imaginary-quaternion algebra and
/// determines, by direct comparison with the spinor→quaternion map on random
/// spinors, which signed basis element each `u_n` right-multiplies by.
pub fn algebra_check() -> AlgebraReport {
    let minus_i = c(0.0, -1.0);
    let ux = pauli(PauliAxis::X).scale(minus_i);
    let uy = pauli(PauliAxis::Y).scale(minus_i);
    let uz = pauli(PauliAxis::Z).scale(minus_i);

    let comm = |a: &Matrix2, b: &Matrix2| a.mul(b).sub(&b.mul(a));
    let mut identities = vec![
        IdentityCheck {
            name: "[u_x,u_y] = 2u_z".into(),
            max_err: comm(&ux, &uy).sub(&uz.scale(c(2.0, 0.0))).max_abs(),
            tol: 1e-15,
        },
        IdentityCheck {
            name: "[u_y,u_z] = 2u_x".into(),
            max_err: comm(&uy, &uz).sub(&ux.scale(c(2.0, 0.0))).max_abs(),
            tol: 1e-15,
        },
        IdentityCheck {
            name: "[u_z,u_x] = 2u_y".into(),
            max_err: comm(&uz, &ux).sub(&uy.scale(c(2.0, 0.0))).max_abs(),
            tol: 1e-15,
        },
    ];
    let neg_id = Matrix2::identity().scale(c(-1.0, 0.0));
    for (name, u) in [("u_x² = −1", &ux), ("u_y² = −1", &uy), ("u_z² = −1", &uz)] {
        identities.push(IdentityCheck {
            name: name.into(),
            max_err: u.mul(u).sub(&neg_id).max_abs(),
            tol: 1e-15,
        });
    }

    // Empirical sign convention: compare u_n·χ with q·c over random spinors
    // for each signed basis candidate c.
    let candidates: [(&'static str, UnitQuaternion); 6] = [
        ("i", UnitQuaternion::I),
        ("-i", -UnitQuaternion::I),
        ("j", UnitQuaternion::J),
        ("-j", -UnitQuaternion::J),
        ("k", UnitQuaternion::K),
        ("-k", -UnitQuaternion::K),
    ];
    let mut rng = crate::sample::rng(0xA15EB);
    let spinors: Vec<Spinor> = (0..32).map(|_| crate::sample::spinor(&mut rng)).collect();

    let mut correspondence = Vec::new();
    for (name, u) in [("u_x", &ux), ("u_y", &uy), ("u_z", &uz)] {
        let mut best: Option<(&'static str, f64)> = None;
        for (cname, cand) in &candidates {
            let err = spinors
                .iter()
                .map(|s| {
                    let lhs =
                        crate::bridge::map_mi(&Spinor::new(u.apply(s).a, u.apply(s).b).unwrap());
                    let rhs = crate::bridge::map_mi(s) * *cand;
                    (lhs.as_quat() - rhs.as_quat()).norm()
                })
                .fold(0.0, f64::max);
            if best.is_none_or(|(_, e)| err < e) {
                best = Some((cname, err));
            }
        }
        let (cname, err) = best.expect("nonempty candidate set");
        identities.push(IdentityCheck {
            name: format!("{name} ↔ right-multiplication by {cname}"),
            max_err: err,
            tol: 1e-12,
        });
        correspondence.push((name, cname));
    }

    AlgebraReport {
        identities,
        correspondence,
    }
}
