//! First- and second-order quaternionic spin dynamics in a magnetic field.
//!
//! The first-order equation is `q̇ = −q·b − v̂·ω₀·q` with the field entering
//! as a right factor `b = (γ/2)(i·B_z − j·B_y + k·B_x)` and the rest
//! frequency entering as a left factor along the fibration axis v̂.
//! Differentiating once and eliminating v̂ gives the second-order form
//! `q̈ + 2·q̇·b + q·(b² + ḃ + ω₀²) = 0`, which carries v̂ as a constant of
//! motion recoverable from (q, q̇).
//!
//! Integrators never renormalize: norm drift is a diagnostic, recorded on
//! every sample.

use crate::bridge::BlochVector;
use crate::error::Error;
use crate::quat::{exp_pure, PureUnitQuaternion, Quaternion, UnitQuaternion};

/// One segment of a piecewise-constant field: `b` applies while `t < until`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub until: f64,
    pub b: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldKind {
    Constant {
        b: [f64; 3],
    },
    /// `B(t) = (B⊥·cos Ωt, B⊥·sin Ωt, B_z)`.
    Rotating {
        b_perp: f64,
        b_z: f64,
        drive_omega: f64,
    },
    /// Right-continuous segments; the last segment's field is held for
    /// times past its boundary.
    Piecewise {
        segments: Vec<Segment>,
    },
    /// Cubic Hermite interpolation between strictly increasing samples,
    /// with node slopes from central differences; queries outside the
    /// sampled domain are errors. ḃ is the exact derivative of the
    /// interpolant, keeping (b, ḃ) mutually consistent.
    Sampled {
        times: Vec<f64>,
        values: Vec<[f64; 3]>,
    },
}

/// Time-dependent magnetic field with gyromagnetic ratio γ and rest
/// frequency ω₀ (natural units, ℏ = 1; everything enters as a rate).
#[derive(Debug, Clone, PartialEq)]
pub struct FieldProfile {
    pub kind: FieldKind,
    pub gamma: f64,
    pub omega0: f64,
}

impl FieldProfile {
    pub fn constant(b: [f64; 3], gamma: f64, omega0: f64) -> Result<Self, Error> {
        Self::build(FieldKind::Constant { b }, gamma, omega0)
    }

    pub fn rotating(
        b_perp: f64,
        b_z: f64,
        drive_omega: f64,
        gamma: f64,
        omega0: f64,
    ) -> Result<Self, Error> {
        Self::build(
            FieldKind::Rotating {
                b_perp,
                b_z,
                drive_omega,
            },
            gamma,
            omega0,
        )
    }

    pub fn piecewise(segments: Vec<Segment>, gamma: f64, omega0: f64) -> Result<Self, Error> {
        if segments.is_empty() {
            return Err(Error::InvalidField(
                "piecewise field needs at least one segment".into(),
            ));
        }
        if segments.windows(2).any(|w| w[1].until <= w[0].until) {
            return Err(Error::InvalidField(
                "segment boundaries must strictly increase".into(),
            ));
        }
        Self::build(FieldKind::Piecewise { segments }, gamma, omega0)
    }

    pub fn sampled(
        times: Vec<f64>,
        values: Vec<[f64; 3]>,
        gamma: f64,
        omega0: f64,
    ) -> Result<Self, Error> {
        if times.len() < 2 || times.len() != values.len() {
            return Err(Error::InvalidField(
                "sampled field needs matching times/values with at least two samples".into(),
            ));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidField(
                "sample times must strictly increase".into(),
            ));
        }
        Self::build(FieldKind::Sampled { times, values }, gamma, omega0)
    }

    fn build(kind: FieldKind, gamma: f64, omega0: f64) -> Result<Self, Error> {
        if !gamma.is_finite() || !omega0.is_finite() {
            return Err(Error::InvalidField(
                "gamma and omega0 must be finite".into(),
            ));
        }
        if omega0 < 0.0 {
            return Err(Error::InvalidField("omega0 must be nonnegative".into()));
        }
        Ok(Self {
            kind,
            gamma,
            omega0,
        })
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            FieldKind::Constant { .. } => "constant",
            FieldKind::Rotating { .. } => "rotating",
            FieldKind::Piecewise { .. } => "piecewise",
            FieldKind::Sampled { .. } => "sampled",
        }
    }

    /// The raw field vector `B(t)`.
    pub fn b_vector(&self, t: f64) -> Result<[f64; 3], Error> {
        match &self.kind {
            FieldKind::Constant { b } => Ok(*b),
            FieldKind::Rotating {
                b_perp,
                b_z,
                drive_omega,
            } => {
                let (s, c) = (drive_omega * t).sin_cos();
                Ok([b_perp * c, b_perp * s, *b_z])
            }
            FieldKind::Piecewise { segments } => {
                let seg = segments
                    .iter()
                    .find(|s| t < s.until)
                    .unwrap_or_else(|| segments.last().expect("nonempty"));
                Ok(seg.b)
            }
            FieldKind::Sampled { times, values } => {
                let seg = locate_segment(times, t)?;
                Ok(hermite(times, values, seg, false))
            }
        }
    }

    /// Field as the pure right-multiplier `b = (γ/2)(i·B_z − j·B_y + k·B_x)`.
    pub fn b_of_t(&self, t: f64) -> Result<Quaternion, Error> {
        let b = self.b_vector(t)?;
        let g = 0.5 * self.gamma;
        Ok(Quaternion::pure(g * b[2], -g * b[1], g * b[0]))
    }

    /// `ḃ(t)` in the same pure-quaternion encoding. Constant and piecewise
    /// fields have ḃ = 0 within segments; sampled fields differentiate the
    /// Hermite interpolant (whose node slopes are the central differences).
    pub fn bdot_of_t(&self, t: f64) -> Result<Quaternion, Error> {
        let db = match &self.kind {
            FieldKind::Constant { .. } | FieldKind::Piecewise { .. } => [0.0; 3],
            FieldKind::Rotating {
                b_perp,
                drive_omega,
                ..
            } => {
                let (s, c) = (drive_omega * t).sin_cos();
                [-b_perp * drive_omega * s, b_perp * drive_omega * c, 0.0]
            }
            FieldKind::Sampled { times, values } => {
                let seg = locate_segment(times, t)?;
                hermite(times, values, seg, true)
            }
        };
        let g = 0.5 * self.gamma;
        Ok(Quaternion::pure(g * db[2], -g * db[1], g * db[0]))
    }

    /// Next field discontinuity strictly after `t`, if any; exact stepping
    /// splits its steps there.
    fn next_discontinuity(&self, t: f64) -> Option<f64> {
        match &self.kind {
            FieldKind::Piecewise { segments } => {
                segments.iter().map(|s| s.until).find(|&u| u > t + 1e-15)
            }
            _ => None,
        }
    }

    fn supports_exact(&self) -> bool {
        matches!(
            self.kind,
            FieldKind::Constant { .. } | FieldKind::Piecewise { .. }
        )
    }

    /// Whether the field is constant between declared discontinuities, so a
    /// step confined to one segment may evaluate it once at the segment start.
    fn frozen_between_jumps(&self) -> bool {
        matches!(
            self.kind,
            FieldKind::Constant { .. } | FieldKind::Piecewise { .. }
        )
    }

    /// Splits [t, t_next] at declared field discontinuities. RK4 steps that
    /// straddle a jump lose their order; integrating each smooth piece keeps
    /// it.
    fn substeps(&self, t: f64, t_next: f64, eps: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut t_sub = t;
        while t_sub + eps < t_next {
            let t_stop = self
                .next_discontinuity(t_sub)
                .filter(|&d| d < t_next - eps)
                .unwrap_or(t_next);
            out.push((t_sub, t_stop));
            t_sub = t_stop;
        }
        if out.is_empty() {
            out.push((t, t_next));
        }
        out
    }
}

struct SegmentPos {
    lo: usize,
    hi: usize,
    s: f64,
    dt: f64,
}

fn locate_segment(times: &[f64], t: f64) -> Result<SegmentPos, Error> {
    let (t0, t1) = (times[0], *times.last().expect("nonempty"));
    if t < t0 || t > t1 {
        return Err(Error::FieldDomain { t, t0, t1 });
    }
    let idx = times.partition_point(|&s| s <= t).min(times.len() - 1);
    let (lo, hi) = (idx - 1, idx);
    let dt = times[hi] - times[lo];
    Ok(SegmentPos {
        lo,
        hi,
        s: (t - times[lo]) / dt,
        dt,
    })
}

/// Central-difference slope at a node (one-sided at the ends).
fn node_slope(times: &[f64], values: &[[f64; 3]], i: usize) -> [f64; 3] {
    let last = times.len() - 1;
    let (lo, hi) = if i == 0 {
        (0, 1)
    } else if i == last {
        (last - 1, last)
    } else {
        (i - 1, i + 1)
    };
    let dt = times[hi] - times[lo];
    [
        (values[hi][0] - values[lo][0]) / dt,
        (values[hi][1] - values[lo][1]) / dt,
        (values[hi][2] - values[lo][2]) / dt,
    ]
}

/// Cubic Hermite value (or derivative) on the located segment.
fn hermite(times: &[f64], values: &[[f64; 3]], seg: SegmentPos, derivative: bool) -> [f64; 3] {
    let s = seg.s;
    let (p0, p1) = (values[seg.lo], values[seg.hi]);
    let (m0, m1) = (
        node_slope(times, values, seg.lo),
        node_slope(times, values, seg.hi),
    );
    let mut out = [0.0; 3];
    if derivative {
        let (h00, h10, h01, h11) = (
            (6.0 * s * s - 6.0 * s) / seg.dt,
            3.0 * s * s - 4.0 * s + 1.0,
            (6.0 * s - 6.0 * s * s) / seg.dt,
            3.0 * s * s - 2.0 * s,
        );
        for k in 0..3 {
            out[k] = h00 * p0[k] + h10 * m0[k] + h01 * p1[k] + h11 * m1[k];
        }
    } else {
        let s2 = s * s;
        let s3 = s2 * s;
        let (h00, h10, h01, h11) = (
            2.0 * s3 - 3.0 * s2 + 1.0,
            (s3 - 2.0 * s2 + s) * seg.dt,
            -2.0 * s3 + 3.0 * s2,
            (s3 - s2) * seg.dt,
        );
        for k in 0..3 {
            out[k] = h00 * p0[k] + h10 * m0[k] + h01 * p1[k] + h11 * m1[k];
        }
    }
    out
}

/// State of the first-order equation: the quaternion and its fibration axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderState {
    pub q: UnitQuaternion,
    pub vhat: PureUnitQuaternion,
}

/// State of the second-order equation: (q, q̇) with the orthogonality
/// constraint `Re(q̄·q̇) = 0` that keeps |q| = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderState {
    pub q: UnitQuaternion,
    pub qdot: Quaternion,
}

impl SecondOrderState {
    /// Checked constructor: rejects states whose radial velocity exceeds 1e-9.
    pub fn new(q: UnitQuaternion, qdot: Quaternion) -> Result<Self, Error> {
        let radial = (q.as_quat().conj() * qdot).w;
        if radial.abs() > 1e-9 {
            return Err(Error::InconsistentState {
                real: radial,
                norm_dev: 0.0,
            });
        }
        Ok(Self { q, qdot })
    }
}

/// Right-hand side of `q̇ = −q·b − v̂·ω₀·q`. The result is orthogonal to q
/// (zero radial part), which is what preserves the norm.
pub fn first_order_rhs(
    q: Quaternion,
    vhat: PureUnitQuaternion,
    b: Quaternion,
    omega0: f64,
) -> Quaternion {
    -(q * b) - vhat.as_quat().scale(omega0) * q
}

/// Right-hand side of the second-order equation:
/// `q̈ = −2·q̇·b − q·(b² + ḃ + ω₀²)`.
pub fn second_order_rhs(
    q: Quaternion,
    qdot: Quaternion,
    b: Quaternion,
    bdot: Quaternion,
    omega0: f64,
) -> Quaternion {
    let paren = b * b + bdot + Quaternion::new(omega0 * omega0, 0.0, 0.0, 0.0);
    -(qdot * b).scale(2.0) - q * paren
}

/// Closed-form propagation over a step with constant b:
/// `q(t+dt) = e^{−v̂ω₀·dt} · q(t) · e^{−b·dt}`. Exact because the left factor
/// commutes with v̂ and the right factor with b; unit norm up to rounding.
pub fn step_exact(s: &FirstOrderState, b: Quaternion, omega0: f64, dt: f64) -> FirstOrderState {
    let left = exp_pure(s.vhat, -omega0 * dt);
    let right = b.scale(-dt).exp();
    FirstOrderState {
        q: UnitQuaternion::unchecked(left.as_quat() * s.q.as_quat() * right),
        vhat: s.vhat,
    }
}

/// Recovers the fibration axis from a first-order-consistent state:
/// `v̂ = −(q̇ + q·b)·q̄ / ω₀`. Errors if the result has a real part above
/// 1e-6 or misses unit norm by more than 1e-6 — the state then does not
/// solve the first-order equation for any v̂.
pub fn extract_vhat(
    q: Quaternion,
    qdot: Quaternion,
    b: Quaternion,
    omega0: f64,
) -> Result<PureUnitQuaternion, Error> {
    if omega0 <= 0.0 {
        return Err(Error::ZeroOmega);
    }
    let v = extract_vhat_raw(q, qdot, b, omega0);
    let norm = v.norm();
    let (real, norm_dev) = (v.w, (norm - 1.0).abs());
    if real.abs() > 1e-6 || norm_dev > 1e-6 {
        return Err(Error::InconsistentState { real, norm_dev });
    }
    let imag = (v.x * v.x + v.y * v.y + v.z * v.z).sqrt();
    Ok(PureUnitQuaternion::unchecked(
        v.x / imag,
        v.y / imag,
        v.z / imag,
    ))
}

/// The unchecked extraction, used for per-sample diagnostics.
fn extract_vhat_raw(q: Quaternion, qdot: Quaternion, b: Quaternion, omega0: f64) -> Quaternion {
    ((qdot + q * b) * q.conj()).scale(-1.0 / omega0)
}

/// `L₂ = ½(|q̇ + q·b|² − ω₀²|q|²)`; zero along on-shell unit trajectories.
pub fn lagrangian_l2(q: Quaternion, qdot: Quaternion, b: Quaternion, omega0: f64) -> f64 {
    0.5 * ((qdot + q * b).norm_sq() - omega0 * omega0 * q.norm_sq())
}

/// Quaternionic form of the first-order Lagrangian: the Hamiltonian
/// expectation plus `Re(q̇̄·i·q)`, which equals the spinor-side
/// `⟨H⟩ − Im⟨χ̇|χ⟩`. The i factor sits between the conjugated derivative
/// and the state; the complex embedding conjugates the j-sector, so the
/// outer placements get that sector's sign wrong.
pub fn lagrangian_l1_quat(q: Quaternion, qdot: Quaternion, h_term: f64) -> f64 {
    h_term + (qdot.conj() * Quaternion::I * q).w
}

/// The Bloch vector read from the canonical momentum `p = conj(q̇ + q·b)`:
/// `f(p·q/ω₀)`, which coincides with the Bloch projection through the
/// extracted v̂.
pub fn momentum_bloch(
    q: Quaternion,
    qdot: Quaternion,
    b: Quaternion,
    omega0: f64,
) -> Result<BlochVector, Error> {
    if omega0 <= 0.0 {
        return Err(Error::ZeroOmega);
    }
    let prod = (qdot + q * b).conj() * q.scale(1.0 / omega0);
    let norm = prod.norm();
    let (real, norm_dev) = (prod.w, (norm - 1.0).abs());
    if real.abs() > 1e-6 || norm_dev > 1e-6 {
        return Err(Error::InconsistentState { real, norm_dev });
    }
    let imag = (prod.x * prod.x + prod.y * prod.y + prod.z * prod.z).sqrt();
    Ok(BlochVector::unchecked(
        prod.z / imag,
        -prod.y / imag,
        prod.x / imag,
    ))
}

/// Integration method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Rk4First,
    Rk4Second,
    Exact,
}

impl Method {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rk4-first" => Some(Method::Rk4First),
            "rk4-second" => Some(Method::Rk4Second),
            "exact" => Some(Method::Exact),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Rk4First => "rk4-first",
            Method::Rk4Second => "rk4-second",
            Method::Exact => "exact",
        }
    }
}

/// One trajectory sample with its diagnostics. `q` is raw (never
/// renormalized); `norm` and `vhat_drift` expose integrator error.
#[derive(Debug, Clone, Copy)]
pub struct TrajectorySample {
    pub t: f64,
    pub q: Quaternion,
    pub qdot: Quaternion,
    pub bloch: BlochVector,
    pub norm: f64,
    pub l2: f64,
    /// Extracted fibration axis (raw components; the configured axis when
    /// ω₀ = 0 makes extraction undefined).
    pub vhat: Quaternion,
    pub vhat_drift: f64,
}

/// Ordered, strictly increasing samples of one integration run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub method: Method,
    pub vhat0: PureUnitQuaternion,
    pub omega0: f64,
}

impl Trajectory {
    pub fn final_sample(&self) -> &TrajectorySample {
        self.samples
            .last()
            .expect("trajectories hold at least the initial state")
    }

    pub fn max_norm_deviation(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.norm - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_vhat_drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.vhat_drift)
            .fold(0.0, f64::max)
    }

    pub fn max_abs_l2(&self) -> f64 {
        self.samples.iter().map(|s| s.l2.abs()).fold(0.0, f64::max)
    }
}

fn make_sample(
    t: f64,
    q: Quaternion,
    qdot: Quaternion,
    b: Quaternion,
    vhat_ref: PureUnitQuaternion,
    omega0: f64,
) -> TrajectorySample {
    let norm = q.norm();
    let n2 = q.norm_sq();
    let p = q.conj() * vhat_ref.as_quat() * q;
    let bloch = BlochVector::unchecked(p.z / n2, -p.y / n2, p.x / n2);
    let vhat = if omega0 > 0.0 {
        extract_vhat_raw(q, qdot, b, omega0)
    } else {
        vhat_ref.as_quat()
    };
    TrajectorySample {
        t,
        q,
        qdot,
        bloch,
        norm,
        l2: lagrangian_l2(q, qdot, b, omega0),
        vhat,
        vhat_drift: (vhat - vhat_ref.as_quat()).norm(),
    }
}

/// Integrates the spin dynamics from `s0` to `t_end` with step `h`, sampling
/// at every step boundary. The second-order method initializes
/// `q̇₀ = first_order_rhs(q₀, v̂₀, b(0))`, selecting the left-multiplication
/// branch of the double cover of solutions.
pub fn integrate(
    s0: &FirstOrderState,
    f: &FieldProfile,
    t_end: f64,
    h: f64,
    method: Method,
) -> Result<Trajectory, Error> {
    if h <= 0.0 {
        return Err(Error::BadStep(h));
    }
    let omega0 = f.omega0;
    let vhat = s0.vhat;
    match method {
        Method::Exact => {
            if !f.supports_exact() {
                return Err(Error::MethodFieldMismatch {
                    kind: f.kind_name(),
                });
            }
            let mut state = *s0;
            let mut t = 0.0;
            let b0 = f.b_of_t(0.0)?;
            let q0 = state.q.as_quat();
            let mut samples = vec![make_sample(
                0.0,
                q0,
                first_order_rhs(q0, vhat, b0, omega0),
                b0,
                vhat,
                omega0,
            )];
            let eps = 1e-9 * h;
            while t + eps < t_end {
                let t_next = (t + h).min(t_end);
                // each substep sees a constant b
                for (t0, t1) in f.substeps(t, t_next, eps) {
                    let b = f.b_of_t(t0)?;
                    state = step_exact(&state, b, omega0, t1 - t0);
                }
                t = t_next;
                let b = f.b_of_t(t)?;
                let q = state.q.as_quat();
                samples.push(make_sample(
                    t,
                    q,
                    first_order_rhs(q, vhat, b, omega0),
                    b,
                    vhat,
                    omega0,
                ));
            }
            Ok(Trajectory {
                samples,
                method,
                vhat0: vhat,
                omega0,
            })
        }
        Method::Rk4First => {
            let mut q = s0.q.as_quat();
            let mut t = 0.0;
            let b0 = f.b_of_t(0.0)?;
            let mut samples = vec![make_sample(
                0.0,
                q,
                first_order_rhs(q, vhat, b0, omega0),
                b0,
                vhat,
                omega0,
            )];
            let eps = 1e-9 * h;
            let frozen = f.frozen_between_jumps();
            while t + eps < t_end {
                let t_next = (t + h).min(t_end);
                for (t0, t1) in f.substeps(t, t_next, eps) {
                    let dt = t1 - t0;
                    let b_frozen = if frozen { Some(f.b_of_t(t0)?) } else { None };
                    let deriv = |tt: f64, qq: Quaternion| -> Result<Quaternion, Error> {
                        let b = match b_frozen {
                            Some(b) => b,
                            None => f.b_of_t(tt)?,
                        };
                        Ok(first_order_rhs(qq, vhat, b, omega0))
                    };
                    let k1 = deriv(t0, q)?;
                    let k2 = deriv(t0 + 0.5 * dt, q + k1.scale(0.5 * dt))?;
                    let k3 = deriv(t0 + 0.5 * dt, q + k2.scale(0.5 * dt))?;
                    let k4 = deriv(t0 + dt, q + k3.scale(dt))?;
                    q = q + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(dt / 6.0);
                }
                t = t_next;
                let b = f.b_of_t(t)?;
                samples.push(make_sample(
                    t,
                    q,
                    first_order_rhs(q, vhat, b, omega0),
                    b,
                    vhat,
                    omega0,
                ));
            }
            Ok(Trajectory {
                samples,
                method,
                vhat0: vhat,
                omega0,
            })
        }
        Method::Rk4Second => {
            let b0 = f.b_of_t(0.0)?;
            let q0 = s0.q.as_quat();
            let qdot0 = first_order_rhs(q0, vhat, b0, omega0);
            let s2 = SecondOrderState {
                q: s0.q,
                qdot: qdot0,
            };
            integrate_second(&s2, vhat, f, t_end, h)
        }
    }
}

/// Integrates the second-order equation from an explicit (q, q̇) pair.
/// `vhat_ref` is the fibration axis used for the Bloch projection and the
/// drift diagnostic; for consistently initialized states it equals the
/// extracted axis.
pub fn integrate_second(
    s0: &SecondOrderState,
    vhat_ref: PureUnitQuaternion,
    f: &FieldProfile,
    t_end: f64,
    h: f64,
) -> Result<Trajectory, Error> {
    if h <= 0.0 {
        return Err(Error::BadStep(h));
    }
    let omega0 = f.omega0;
    let mut q = s0.q.as_quat();
    let mut qd = s0.qdot;
    let mut t = 0.0;
    let b0 = f.b_of_t(0.0)?;
    let mut samples = vec![make_sample(0.0, q, qd, b0, vhat_ref, omega0)];
    let eps = 1e-9 * h;
    let frozen = f.frozen_between_jumps();
    while t + eps < t_end {
        let t_next = (t + h).min(t_end);
        for (t0, t1) in f.substeps(t, t_next, eps) {
            let dt = t1 - t0;
            let b_frozen = if frozen { Some(f.b_of_t(t0)?) } else { None };
            let deriv = |tt: f64,
                         qq: Quaternion,
                         qqd: Quaternion|
             -> Result<(Quaternion, Quaternion), Error> {
                let (b, bdot) = match b_frozen {
                    Some(b) => (b, Quaternion::ZERO),
                    None => (f.b_of_t(tt)?, f.bdot_of_t(tt)?),
                };
                Ok((qqd, second_order_rhs(qq, qqd, b, bdot, omega0)))
            };
            let (k1q, k1d) = deriv(t0, q, qd)?;
            let (k2q, k2d) = deriv(
                t0 + 0.5 * dt,
                q + k1q.scale(0.5 * dt),
                qd + k1d.scale(0.5 * dt),
            )?;
            let (k3q, k3d) = deriv(
                t0 + 0.5 * dt,
                q + k2q.scale(0.5 * dt),
                qd + k2d.scale(0.5 * dt),
            )?;
            let (k4q, k4d) = deriv(t0 + dt, q + k3q.scale(dt), qd + k3d.scale(dt))?;
            q = q + (k1q + k2q.scale(2.0) + k3q.scale(2.0) + k4q).scale(dt / 6.0);
            qd = qd + (k1d + k2d.scale(2.0) + k3d.scale(2.0) + k4d).scale(dt / 6.0);
        }
        t = t_next;
        samples.push(make_sample(t, q, qd, f.b_of_t(t)?, vhat_ref, omega0));
    }
    Ok(Trajectory {
        samples,
        method: Method::Rk4Second,
        vhat0: vhat_ref,
        omega0,
    })
}

/// Time-reverses a trajectory: `q′(τ) = j·q(t_end − τ)` under the reversed
/// field `b′(τ) = −b(t_end − τ)`, with derivatives `q̇′(τ) = −j·q̇(t_end − τ)`.
/// The reversed samples satisfy the first-order equation with the
/// transported axis `v̂′ = j·v̂·j`; the returned residual is the largest
/// `|q̇′ + q′·b′ + v̂′·ω₀·q′|` over the samples.
pub fn reverse_trajectory(tr: &Trajectory, f: &FieldProfile) -> Result<(Trajectory, f64), Error> {
    let omega0 = tr.omega0;
    let t_end = tr.final_sample().t;
    let j = Quaternion::J;

    // v̂′ = j·v̂·j, computed without a sign shortcut: j·v̂·j = −(j·v̂·j̄)
    let sand = UnitQuaternion::J.sandwich(tr.vhat0);
    let vhat_rev = -sand;

    let mut samples = Vec::with_capacity(tr.samples.len());
    let mut residual: f64 = 0.0;
    for s in tr.samples.iter().rev() {
        let tau = t_end - s.t;
        let q_rev = j * s.q;
        let qdot_rev = -(j * s.qdot);
        let b_rev = -f.b_of_t(s.t)?;
        let r = qdot_rev + q_rev * b_rev + vhat_rev.as_quat().scale(omega0) * q_rev;
        residual = residual.max(r.norm());
        samples.push(make_sample(tau, q_rev, qdot_rev, b_rev, vhat_rev, omega0));
    }
    Ok((
        Trajectory {
            samples,
            method: tr.method,
            vhat0: vhat_rev,
            omega0,
        },
        residual,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::{bloch_of_state, map_mi_inverse};
    use crate::oracle;
    use crate::sample;
    use rand::Rng;
    use std::f64::consts::{FRAC_PI_4, PI, TAU};

    const I: PureUnitQuaternion = PureUnitQuaternion::I;

    fn qclose(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn field_encoding() {
        let f = FieldProfile::constant([0.0, 0.0, 2.0], 0.8, 0.0).unwrap();
        let b = f.b_of_t(0.0).unwrap();
        assert!(qclose(b, Quaternion::I.scale(0.8 * 0.5 * 2.0), 1e-15));

        let f = FieldProfile::constant([0.0, 0.0, 0.0], 1.0, 0.0).unwrap();
        assert_eq!(f.b_of_t(3.0).unwrap(), Quaternion::ZERO);

        let f = FieldProfile::constant([1.5, 0.0, 0.0], 2.0, 0.0).unwrap();
        assert!(qclose(
            f.b_of_t(0.0).unwrap(),
            Quaternion::K.scale(1.5),
            1e-15
        ));

        // By is carried with a minus sign on j
        let f = FieldProfile::constant([0.0, 3.0, 0.0], 2.0, 0.0).unwrap();
        assert!(qclose(
            f.b_of_t(0.0).unwrap(),
            Quaternion::J.scale(-3.0),
            1e-15
        ));
    }

    #[test]
    fn sampled_field_domain_and_interpolation() {
        let f = FieldProfile::sampled(
            vec![0.0, 1.0, 2.0],
            vec![[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [2.0, 0.0, 2.0]],
            2.0,
            0.0,
        )
        .unwrap();
        assert!(matches!(f.b_vector(-0.1), Err(Error::FieldDomain { .. })));
        assert!(matches!(f.b_vector(2.5), Err(Error::FieldDomain { .. })));

        // interpolation passes through the samples
        for (t, want) in [
            (0.0, [0.0, 0.0, 0.0]),
            (1.0, [2.0, 0.0, 0.0]),
            (2.0, [2.0, 0.0, 2.0]),
        ] {
            let b = f.b_vector(t).unwrap();
            for k in 0..3 {
                assert!((b[k] - want[k]).abs() < 1e-14);
            }
        }

        // ḃ at the interior node is the central difference (B(2) − B(0)) / 2
        let d = f.bdot_of_t(1.0).unwrap();
        assert!(qclose(d, Quaternion::pure(1.0, 0.0, 1.0), 1e-12));

        // ḃ is the exact derivative of b everywhere in the domain
        for t in [0.2, 0.5, 0.9, 1.3, 1.8] {
            let eps = 1e-6;
            let fd = (f.b_of_t(t + eps).unwrap() - f.b_of_t(t - eps).unwrap()).scale(0.5 / eps);
            assert!(qclose(f.bdot_of_t(t).unwrap(), fd, 1e-7));
        }
    }

    #[test]
    fn rhs_examples() {
        let w0 = 1.7;
        let rhs = first_order_rhs(Quaternion::ONE, I, Quaternion::ZERO, w0);
        assert!(qclose(rhs, Quaternion::I.scale(-w0), 1e-15));

        // ω₀ = 0 reduces to q̇ = −q·b
        let mut rng = sample::rng(51);
        for _ in 0..20 {
            let q = sample::unit_quaternion(&mut rng).as_quat();
            let b = Quaternion::pure(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            assert!(qclose(first_order_rhs(q, I, b, 0.0), -(q * b), 1e-15));

            // |rhs| = |b + q̄·v̂·q·ω₀| and the rhs is orthogonal to q
            let vhat = sample::pure_unit(&mut rng);
            let rhs = first_order_rhs(q, vhat, b, w0);
            let expect = (b + (q.conj() * vhat.as_quat() * q).scale(w0)).norm();
            assert!((rhs.norm() - expect).abs() < 1e-12);
            assert!((q.conj() * rhs).w.abs() < 1e-12);
        }
    }

    #[test]
    fn second_order_rhs_examples() {
        let w0 = 0.9;
        let qddot = second_order_rhs(
            Quaternion::ONE,
            Quaternion::I.scale(-w0),
            Quaternion::ZERO,
            Quaternion::ZERO,
            w0,
        );
        assert!(qclose(qddot, Quaternion::ONE.scale(-w0 * w0), 1e-15));

        let mut rng = sample::rng(52);
        for _ in 0..20 {
            let q = sample::unit_quaternion(&mut rng).as_quat();
            let qd = sample::unit_quaternion(&mut rng).as_quat();
            let got = second_order_rhs(q, qd, Quaternion::ZERO, Quaternion::ZERO, w0);
            assert!(qclose(got, q.scale(-w0 * w0), 1e-15));
        }
    }

    #[test]
    fn exact_step_basics() {
        let s = FirstOrderState {
            q: UnitQuaternion::ONE,
            vhat: I,
        };
        let b = Quaternion::I.scale(0.4);
        let stepped = step_exact(&s, b, 1.3, 0.0);
        assert_eq!(stepped.q, s.q);

        // zero field: q(t) = e^{−v̂ω₀t}·q₀
        let q0 = sample::unit_quaternion(&mut sample::rng(53));
        let s = FirstOrderState { q: q0, vhat: I };
        let t = 0.77;
        let w0 = 2.1;
        let stepped = step_exact(&s, Quaternion::ZERO, w0, t);
        let expect = exp_pure(I, -w0 * t).as_quat() * q0.as_quat();
        assert!(qclose(stepped.q.as_quat(), expect, 1e-14));
    }

    #[test]
    fn larmor_quarter_turn() {
        // constant B_z with γB_z·t = π/2 carries +x̂ to +ŷ, any ω₀
        for w0 in [0.0, 0.5, 3.0] {
            let q0 = exp_pure(PureUnitQuaternion::J, FRAC_PI_4);
            assert!(bloch_of_state(q0, I).distance(crate::bridge::BlochVector::X) < 1e-14);
            let gamma = 2.0;
            let bz = 1.0;
            let t = (PI / 2.0) / (gamma * bz);
            let f = FieldProfile::constant([0.0, 0.0, bz], gamma, w0).unwrap();
            let s = FirstOrderState { q: q0, vhat: I };
            let stepped = step_exact(&s, f.b_of_t(0.0).unwrap(), w0, t);
            let bloch = bloch_of_state(
                UnitQuaternion::from_quaternion(stepped.q.as_quat()).unwrap(),
                I,
            );
            assert!(bloch.distance(crate::bridge::BlochVector::Y) < 1e-12);
        }
    }

    #[test]
    fn integrate_zero_duration() {
        let f = FieldProfile::constant([0.0, 0.0, 1.0], 1.0, 0.5).unwrap();
        let s = FirstOrderState {
            q: UnitQuaternion::ONE,
            vhat: I,
        };
        for method in [Method::Exact, Method::Rk4First, Method::Rk4Second] {
            let tr = integrate(&s, &f, 0.0, 0.1, method).unwrap();
            assert_eq!(tr.samples.len(), 1);
            assert_eq!(tr.samples[0].t, 0.0);
        }
    }

    #[test]
    fn exact_method_rejects_time_dependent_fields() {
        let f = FieldProfile::rotating(0.5, 1.0, 0.8, 1.0, 0.0).unwrap();
        let s = FirstOrderState {
            q: UnitQuaternion::ONE,
            vhat: I,
        };
        assert!(matches!(
            integrate(&s, &f, 1.0, 0.1, Method::Exact),
            Err(Error::MethodFieldMismatch { .. })
        ));
    }

    #[test]
    fn rk4_first_tracks_exact() {
        let f = FieldProfile::constant([0.3, -0.2, 0.9], 1.1, 0.7).unwrap();
        let q0 = sample::unit_quaternion(&mut sample::rng(54));
        let s = FirstOrderState { q: q0, vhat: I };
        let t_end = 4.0;
        let exact = integrate(&s, &f, t_end, 0.01, Method::Exact).unwrap();
        let rk4 = integrate(&s, &f, t_end, 0.01, Method::Rk4First).unwrap();
        let dev = exact
            .samples
            .iter()
            .zip(&rk4.samples)
            .map(|(a, b)| (a.q - b.q).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-8, "dev = {dev:.3e}");
    }

    #[test]
    fn second_order_matches_first_order() {
        let f = FieldProfile::constant([0.2, 0.1, 1.0], 1.0, 0.6).unwrap();
        let q0 = sample::unit_quaternion(&mut sample::rng(55));
        let s = FirstOrderState { q: q0, vhat: I };
        let t_end = TAU * 2.0;
        let h = TAU / 400.0;
        let first = integrate(&s, &f, t_end, h, Method::Rk4First).unwrap();
        let second = integrate(&s, &f, t_end, h, Method::Rk4Second).unwrap();
        let dev = first
            .samples
            .iter()
            .zip(&second.samples)
            .map(|(a, b)| (a.q - b.q).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-8, "dev = {dev:.3e}");
        assert!(second.max_vhat_drift() < 1e-9);
    }

    #[test]
    fn piecewise_exact_splits_at_boundaries() {
        let segs = vec![
            Segment {
                until: 0.95,
                b: [0.0, 0.0, 1.0],
            },
            Segment {
                until: 2.0,
                b: [1.0, 0.0, 0.0],
            },
        ];
        let f = FieldProfile::piecewise(segs, 1.0, 0.4).unwrap();
        let q0 = sample::unit_quaternion(&mut sample::rng(56));
        let s = FirstOrderState { q: q0, vhat: I };
        // coarse exact stepping must agree with fine exact stepping
        let coarse = integrate(&s, &f, 2.0, 0.5, Method::Exact).unwrap();
        let fine = integrate(&s, &f, 2.0, 0.005, Method::Exact).unwrap();
        let qa = coarse.final_sample().q;
        let qb = fine.final_sample().q;
        assert!(qclose(qa, qb, 1e-12));
        // and with a fine RK4 run, which splits at the jump as well
        let rk4 = integrate(&s, &f, 2.0, 0.0005, Method::Rk4First).unwrap();
        let dev = (qa - rk4.final_sample().q).norm();
        assert!(dev < 1e-10, "dev = {dev:.3e}");
    }

    #[test]
    fn extraction_identities() {
        let w0 = 1.9;
        // q = e^{−iω₀t}, q̇ = −iω₀q, b = 0 extracts v̂ = i
        let t = 0.37;
        let q = exp_pure(I, -w0 * t).as_quat();
        let qd = Quaternion::I.scale(-w0) * q;
        let v = extract_vhat(q, qd, Quaternion::ZERO, w0).unwrap();
        assert!(qclose(v.as_quat(), Quaternion::I, 1e-12));

        assert!(matches!(
            extract_vhat(q, qd, Quaternion::ZERO, 0.0),
            Err(Error::ZeroOmega)
        ));

        // radially moving state is inconsistent with any v̂
        let bad = extract_vhat(
            Quaternion::ONE,
            Quaternion::ONE.scale(0.3),
            Quaternion::ZERO,
            1.0,
        );
        assert!(matches!(bad, Err(Error::InconsistentState { .. })));
    }

    #[test]
    fn extraction_of_right_multiplied_solutions() {
        // q̇ = −ω₀·q·i also extracts cleanly at b = 0, but onto the
        // transported axis q·i·q̄ — the mismatch with the assumed v̂ = i is
        // the only flag that the right-multiplication branch was taken.
        let mut rng = sample::rng(57);
        let w0 = 1.0;
        for _ in 0..20 {
            let q = sample::unit_quaternion(&mut rng).as_quat();
            let qd = q.scale(-w0) * Quaternion::I;
            let v = extract_vhat(q, qd, Quaternion::ZERO, w0).unwrap();
            let transported = q * Quaternion::I * q.conj();
            assert!(qclose(v.as_quat(), transported, 1e-12));
        }
    }

    #[test]
    fn lagrangian_l2_values() {
        let w0 = 1.3;
        assert!(
            (lagrangian_l2(Quaternion::ONE, Quaternion::ZERO, Quaternion::ZERO, w0)
                + 0.5 * w0 * w0)
                .abs()
                < 1e-15
        );

        // on-shell states sit exactly on L₂ = 0
        let mut rng = sample::rng(58);
        for _ in 0..20 {
            let q = sample::unit_quaternion(&mut rng).as_quat();
            let vhat = sample::pure_unit(&mut rng);
            let b = Quaternion::pure(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            let qd = first_order_rhs(q, vhat, b, w0);
            assert!(lagrangian_l2(q, qd, b, w0).abs() < 1e-13);
        }
    }

    #[test]
    fn lagrangian_l1_matches_oracle() {
        let mut rng = sample::rng(59);
        for _ in 0..100 {
            let q = sample::unit_quaternion(&mut rng);
            let qd = sample::unit_quaternion(&mut rng)
                .as_quat()
                .scale(rng.random_range(0.1..2.0));
            let b = [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            let h = oracle::hamiltonian(b, rng.random_range(0.2..2.0));

            let s = map_mi_inverse(q);
            let sdot = crate::bridge::Spinor::unchecked(
                num_complex::Complex64::new(qd.w, qd.x),
                num_complex::Complex64::new(qd.y, qd.z),
            );
            let hs = h.apply(&s);
            let h_term = (s.a.conj() * hs.a + s.b.conj() * hs.b).re;

            let quat_side = lagrangian_l1_quat(q.as_quat(), qd, h_term);
            let spinor_side = oracle::lagrangian_l1_spinor(&s, &sdot, &h);
            assert!((quat_side - spinor_side).abs() < 1e-12);
        }
    }

    #[test]
    fn lagrangian_l1_edge_cases() {
        // q̇ = 0 leaves only the Hamiltonian term
        assert_eq!(
            lagrangian_l1_quat(Quaternion::ONE, Quaternion::ZERO, 0.42),
            0.42
        );

        // invariant under a common phase rotation of q and q̇
        let mut rng = sample::rng(60);
        for _ in 0..20 {
            let q = sample::unit_quaternion(&mut rng).as_quat();
            let qd = sample::unit_quaternion(&mut rng).as_quat();
            let alpha = rng.random_range(-PI..PI);
            let ph = exp_pure(I, alpha).as_quat();
            let before = lagrangian_l1_quat(q, qd, 0.0);
            let after = lagrangian_l1_quat(ph * q, ph * qd, 0.0);
            assert!((before - after).abs() < 1e-13);
        }
    }

    #[test]
    fn momentum_bloch_identities() {
        let w0 = 1.1;
        let b = momentum_bloch(
            Quaternion::ONE,
            Quaternion::I.scale(-w0),
            Quaternion::ZERO,
            w0,
        )
        .unwrap();
        assert!(b.distance(crate::bridge::BlochVector::Z) < 1e-15);

        let mut rng = sample::rng(61);
        for _ in 0..50 {
            let q = sample::unit_quaternion(&mut rng);
            let vhat = sample::pure_unit(&mut rng);
            let field = Quaternion::pure(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            let qd = first_order_rhs(q.as_quat(), vhat, field, w0);
            let from_p = momentum_bloch(q.as_quat(), qd, field, w0).unwrap();
            let direct = bloch_of_state(q, extract_vhat(q.as_quat(), qd, field, w0).unwrap());
            assert!(from_p.distance(direct) < 1e-12);

            // invariant under the trajectory's global phase e^{v̂α}
            let alpha = rng.random_range(-PI..PI);
            let ph = exp_pure(vhat, alpha).as_quat();
            let shifted = momentum_bloch(ph * q.as_quat(), ph * qd, field, w0).unwrap();
            assert!(shifted.distance(from_p) < 1e-12);
        }
    }

    #[test]
    fn reversal_residual_and_double_reverse() {
        let f = FieldProfile::constant([0.4, -0.3, 0.8], 1.2, 0.9).unwrap();
        let q0 = sample::unit_quaternion(&mut sample::rng(62));
        let s = FirstOrderState { q: q0, vhat: I };
        let tr = integrate(&s, &f, 3.0, 0.05, Method::Exact).unwrap();

        let (rev, residual) = reverse_trajectory(&tr, &f).unwrap();
        assert!(residual < 1e-10, "residual = {residual:.3e}");
        // j·v̂·j = i for v̂ = i: the reversed run solves the original equation
        assert!(qclose(rev.vhat0.as_quat(), Quaternion::I, 1e-15));

        // reversing the reversed trajectory (under its own field −b) gives
        // −q(t) pointwise: Bloch identical, global sign flipped
        let f_rev = FieldProfile::constant([-0.4, 0.3, -0.8], 1.2, 0.9).unwrap();
        let (twice, _) = reverse_trajectory(&rev, &f_rev).unwrap();
        for (a, b) in twice.samples.iter().zip(&tr.samples) {
            assert!((a.t - b.t).abs() < 1e-12);
            assert!(qclose(a.q, -b.q, 1e-12));
            assert!(a.bloch.distance(b.bloch) < 1e-12);
        }
    }

    #[test]
    fn zero_field_reversal_vhat_bookkeeping() {
        let w0 = 1.4;
        let f = FieldProfile::constant([0.0, 0.0, 0.0], 1.0, w0).unwrap();
        let q0 = sample::unit_quaternion(&mut sample::rng(63));
        let s = FirstOrderState { q: q0, vhat: I };
        let tr = integrate(&s, &f, 2.0, 0.05, Method::Exact).unwrap();

        // full reversal (state flip + t → −t) restores v̂ = i exactly
        let (rev, residual) = reverse_trajectory(&tr, &f).unwrap();
        assert!(residual < 1e-10);
        for smp in &rev.samples {
            let v = extract_vhat(smp.q, smp.qdot, Quaternion::ZERO, w0).unwrap();
            assert!(qclose(v.as_quat(), Quaternion::I, 1e-10));
        }

        // the state-only flip q → j·q (no time reflection) lands on v̂ = −i,
        // the sign-flipped fibration
        for smp in &tr.samples {
            let q = Quaternion::J * smp.q;
            let qd = Quaternion::J * smp.qdot;
            let v = extract_vhat(q, qd, Quaternion::ZERO, w0).unwrap();
            assert!(qclose(v.as_quat(), -Quaternion::I, 1e-10));
        }
    }

    #[test]
    fn omega0_invisible_on_bloch_sphere() {
        let q0 = sample::unit_quaternion(&mut sample::rng(64));
        let mut runs = Vec::new();
        for w0 in [0.0, 1.0, 10.0] {
            let f = FieldProfile::constant([0.1, 0.7, -0.4], 1.0, w0).unwrap();
            let s = FirstOrderState { q: q0, vhat: I };
            runs.push(integrate(&s, &f, 5.0, 0.05, Method::Exact).unwrap());
        }
        for run in &runs[1..] {
            let dev = runs[0]
                .samples
                .iter()
                .zip(&run.samples)
                .map(|(a, b)| a.bloch.distance(b.bloch))
                .fold(0.0, f64::max);
            assert!(dev < 1e-12, "dev = {dev:.3e}");
        }
    }

    #[test]
    fn rotating_field_first_second_and_oracle_agree() {
        // exercises the ḃ term of the second-order equation and the
        // time-dependent Hamiltonian handling of the oracle; a sign or
        // stage-time slip in either shows up far above these bounds
        let f = FieldProfile::rotating(0.6, 0.9, 1.3, 1.0, 0.8).unwrap();
        let q0 = sample::unit_quaternion(&mut sample::rng(70));
        let s = FirstOrderState { q: q0, vhat: I };
        let h = 0.005;

        let first = integrate(&s, &f, 6.0, h, Method::Rk4First).unwrap();
        let second = integrate(&s, &f, 6.0, h, Method::Rk4Second).unwrap();
        let pair_dev = first
            .samples
            .iter()
            .zip(&second.samples)
            .map(|(a, b)| (a.q - b.q).norm())
            .fold(0.0, f64::max);
        assert!(pair_dev < 1e-9, "first/second deviation {pair_dev:.3e}");
        assert!(second.max_vhat_drift() < 1e-9);

        let spinor0 = crate::bridge::map_mi_inverse(q0);
        let oracle_run = oracle::integrate_spinor(&spinor0, &f, f.omega0, 6.0, h).unwrap();
        let oracle_dev = first
            .samples
            .iter()
            .zip(&oracle_run)
            .map(|(a, b)| a.bloch.distance(oracle::bloch_from_spinor(&b.spinor)))
            .fold(0.0, f64::max);
        assert!(oracle_dev < 1e-11, "oracle deviation {oracle_dev:.3e}");
    }

    #[test]
    fn rk4_norm_drift_is_high_order() {
        // drift must vanish at least as fast as the method order; on these
        // norm-preserving systems it is in fact one order better (slope ≈ 5)
        let f = FieldProfile::rotating(0.7, 0.9, 1.3, 1.0, 0.8).unwrap();
        let q0 = sample::unit_quaternion(&mut sample::rng(65));
        let s = FirstOrderState { q: q0, vhat: I };
        let t_end = 2.0 * TAU;
        let mut drifts = Vec::new();
        for halvings in 0..4 {
            let h = t_end / (16.0 * (1 << halvings) as f64);
            let tr = integrate(&s, &f, t_end, h, Method::Rk4First).unwrap();
            drifts.push(tr.max_norm_deviation());
        }
        for w in drifts.windows(2) {
            let slope = (w[0] / w[1]).log2();
            assert!(slope >= 3.7, "drift slope {slope:.2} below fourth order");
        }
    }

    #[test]
    fn second_order_preserves_orthogonality() {
        // Re(q̄·q̇) stays at integrator order along second-order runs
        let f = FieldProfile::rotating(0.4, 0.8, 1.1, 1.0, 0.7).unwrap();
        let q0 = sample::unit_quaternion(&mut sample::rng(66));
        let s = FirstOrderState { q: q0, vhat: I };
        let tr = integrate(&s, &f, TAU, TAU / 500.0, Method::Rk4Second).unwrap();
        let worst = tr
            .samples
            .iter()
            .map(|smp| (smp.q.conj() * smp.qdot).w.abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "radial velocity {worst:.3e}");
    }

    #[test]
    fn second_order_state_constructor_rejects_radial_velocity() {
        assert!(SecondOrderState::new(UnitQuaternion::ONE, Quaternion::I.scale(0.3)).is_ok());
        assert!(SecondOrderState::new(UnitQuaternion::ONE, Quaternion::ONE.scale(0.3)).is_err());
    }
}
