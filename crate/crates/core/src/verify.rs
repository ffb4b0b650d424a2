//! Named invariant suites behind the CLI `verify` subcommand. Each check
//! reports the measured maximum against its pinned tolerance; a suite passes
//! iff every check does.

use rand::Rng;

use crate::bridge::{bloch_of_state, f_inverse, map_mi, BlochVector};
use crate::dynamics::{
    extract_vhat, first_order_rhs, integrate, lagrangian_l1_quat, reverse_trajectory, FieldProfile,
    FirstOrderState, Method,
};
use crate::gates::{apply_gate, gate_matrix, gate_quaternion, GateSpec, Sign};
use crate::leftmult::{cone_check, time_reverse_state};
use crate::oracle;
use crate::quat::{exp_pure, PureUnitQuaternion, Quaternion};
use crate::sample;

/// Default seed for randomized suites; override with `--seed`.
pub const DEFAULT_SEED: u64 = 42;

/// Default trial count for randomized suites; override with `--trials`.
pub const DEFAULT_TRIALS: usize = 1000;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub max_err: f64,
    pub tol: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_err <= self.tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Gates,
    Cone,
    TimeReversal,
    Dynamics,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "algebra" => Some(Suite::Algebra),
            "gates" => Some(Suite::Gates),
            "cone" => Some(Suite::Cone),
            "timereversal" => Some(Suite::TimeReversal),
            "dynamics" => Some(Suite::Dynamics),
            "all" => Some(Suite::All),
            _ => None,
        }
    }
}

/// Runs a suite and returns its checks sorted by name.
pub fn run_suite(suite: Suite, seed: u64, trials: usize) -> Vec<Check> {
    let mut checks = match suite {
        Suite::Algebra => algebra_suite(seed, trials),
        Suite::Gates => gates_suite(seed, trials),
        Suite::Cone => cone_suite(seed, trials),
        Suite::TimeReversal => time_reversal_suite(seed, trials),
        Suite::Dynamics => dynamics_suite(seed),
        Suite::All => {
            let mut all = algebra_suite(seed, trials);
            all.extend(gates_suite(seed, trials));
            all.extend(cone_suite(seed, trials));
            all.extend(time_reversal_suite(seed, trials));
            all.extend(dynamics_suite(seed));
            all
        }
    };
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    checks
}

fn check(name: &str, max_err: f64, tol: f64) -> Check {
    Check {
        name: name.to_string(),
        max_err,
        tol,
    }
}

fn algebra_suite(seed: u64, trials: usize) -> Vec<Check> {
    let mut rng = sample::rng(seed);
    let mut out = Vec::new();

    // Hamilton multiplication table
    let mut table_err: f64 = 0.0;
    let cases = [
        (Quaternion::I * Quaternion::J, Quaternion::K),
        (Quaternion::J * Quaternion::I, -Quaternion::K),
        (Quaternion::J * Quaternion::K, Quaternion::I),
        (Quaternion::K * Quaternion::J, -Quaternion::I),
        (Quaternion::K * Quaternion::I, Quaternion::J),
        (Quaternion::I * Quaternion::K, -Quaternion::J),
        (Quaternion::I * Quaternion::I, -Quaternion::ONE),
        (Quaternion::J * Quaternion::J, -Quaternion::ONE),
        (Quaternion::K * Quaternion::K, -Quaternion::ONE),
        (
            Quaternion::I * Quaternion::J * Quaternion::K,
            -Quaternion::ONE,
        ),
    ];
    for (got, want) in cases {
        table_err = table_err.max((got - want).norm());
    }
    out.push(check("algebra/multiplication-table", table_err, 1e-15));

    let mut assoc: f64 = 0.0;
    let mut norm_mult: f64 = 0.0;
    let mut conj_rev: f64 = 0.0;
    let mut purity: f64 = 0.0;
    for _ in 0..trials {
        let p = sample::unit_quaternion(&mut rng)
            .as_quat()
            .scale(rng.random_range(0.2..2.0));
        let q = sample::unit_quaternion(&mut rng)
            .as_quat()
            .scale(rng.random_range(0.2..2.0));
        let r = sample::unit_quaternion(&mut rng)
            .as_quat()
            .scale(rng.random_range(0.2..2.0));
        assoc = assoc.max((((p * q) * r) - (p * (q * r))).norm());
        norm_mult = norm_mult.max(((p * q).norm() - p.norm() * q.norm()).abs());
        conj_rev = conj_rev.max(((p * q).conj() - q.conj() * p.conj()).norm());

        let u = sample::unit_quaternion(&mut rng);
        let v = sample::pure_unit(&mut rng);
        purity = purity.max((u.as_quat() * v.as_quat() * u.conj().as_quat()).w.abs());
    }
    out.push(check("algebra/associativity", assoc, 1e-12));
    out.push(check("algebra/norm-multiplicativity", norm_mult, 1e-12));
    out.push(check("algebra/conjugation-reversal", conj_rev, 1e-12));
    out.push(check("algebra/conjugation-purity", purity, 1e-12));

    // exp/log round trip away from ±1
    let mut round: f64 = 0.0;
    for _ in 0..trials {
        let axis = sample::pure_unit(&mut rng);
        let angle = rng.random_range(0.05..std::f64::consts::PI - 0.05);
        let q = exp_pure(axis, angle);
        let aa = crate::quat::log_axis_angle(q);
        round = round.max((exp_pure(aa.axis, aa.angle).as_quat() - q.as_quat()).norm());
    }
    out.push(check("algebra/exp-log-round-trip", round, 1e-12));

    for identity in oracle::algebra_check().identities {
        out.push(check(
            &format!("algebra/pauli/{}", identity.name),
            identity.max_err,
            identity.tol,
        ));
    }
    out
}

fn gates_suite(seed: u64, trials: usize) -> Vec<Check> {
    let mut rng = sample::rng(seed);
    let mut out = Vec::new();

    let catalog = [
        ("X", GateSpec::X(Sign::Plus)),
        ("Y", GateSpec::Y(Sign::Plus)),
        ("Z", GateSpec::Z(Sign::Plus)),
        ("H", GateSpec::Hadamard(Sign::Plus)),
        ("P", GateSpec::PhaseShift(0.37)),
    ];
    let per_gate = (trials / catalog.len()).max(1);
    let mut oracle_dev: f64 = 0.0;
    for (_, g) in &catalog {
        for _ in 0..per_gate {
            let s = sample::spinor(&mut rng);
            let quat_side = bloch_of_state(apply_gate(map_mi(&s), g), PureUnitQuaternion::I);
            let mat_side = oracle::bloch_from_spinor(&gate_matrix(g).apply(&s));
            oracle_dev = oracle_dev.max(quat_side.distance(mat_side));
        }
    }
    out.push(check("gates/oracle-equivalence", oracle_dev, 1e-12));

    let mut rot_dev: f64 = 0.0;
    for _ in 0..trials {
        let axis = sample::bloch_vector(&mut rng);
        let angle = rng.random_range(-std::f64::consts::TAU..std::f64::consts::TAU);
        let q = sample::unit_quaternion(&mut rng);
        let before = bloch_of_state(q, PureUnitQuaternion::I);
        let after = bloch_of_state(
            apply_gate(q, &GateSpec::General { axis, angle }),
            PureUnitQuaternion::I,
        );
        rot_dev = rot_dev.max(after.distance(oracle::rodrigues_rotate(before, axis, angle)));
    }
    out.push(check("gates/rotation-law", rot_dev, 1e-12));

    let mut decomp_dev: f64 = 0.0;
    for _ in 0..trials {
        let q = sample::unit_quaternion(&mut rng);
        let g = crate::gates::decompose(q);
        decomp_dev = decomp_dev.max((gate_quaternion(&g).as_quat() - q.as_quat()).norm());
    }
    out.push(check("gates/decompose-round-trip", decomp_dev, 1e-12));
    out
}

fn cone_suite(seed: u64, trials: usize) -> Vec<Check> {
    let mut rng = sample::rng(seed);
    let vhat = PureUnitQuaternion::I;

    let mut cone_dev: f64 = 0.0;
    for _ in 0..trials {
        let q = sample::unit_quaternion(&mut rng);
        let n = sample::bloch_vector(&mut rng);
        let gamma = rng.random_range(0.05..std::f64::consts::PI);
        let q_l = exp_pure(f_inverse(n), -0.5 * gamma);
        let (lhs, rhs) = cone_check(n, q, q_l, vhat).expect("q_l is not ±1");
        cone_dev = cone_dev.max((lhs - rhs).abs());
    }

    let mut zero_cone: f64 = 0.0;
    let mut equator: f64 = 0.0;
    for _ in 0..trials.min(200) {
        let q = sample::unit_quaternion(&mut rng);
        let q_l = exp_pure(f_inverse(BlochVector::Z), -0.35);
        let (lhs, rhs) = cone_check(BlochVector::Z, q, q_l, vhat).expect("valid factor");
        zero_cone = zero_cone.max((lhs - 1.0).abs().max((rhs - 1.0).abs()));

        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        let n = BlochVector::new(phi.cos(), phi.sin(), 0.0).expect("unit");
        let q_l = exp_pure(f_inverse(n), -0.8);
        let (lhs, rhs) = cone_check(n, q, q_l, vhat).expect("valid factor");
        equator = equator.max(lhs.abs().max(rhs.abs()));
    }

    vec![
        check("cone/relation", cone_dev, 1e-12),
        check("cone/zero-angle-at-vhat", zero_cone, 1e-12),
        check("cone/great-circle-at-equator", equator, 1e-12),
    ]
}

fn time_reversal_suite(seed: u64, trials: usize) -> Vec<Check> {
    let mut rng = sample::rng(seed);
    let vhat = PureUnitQuaternion::I;

    let mut negation: f64 = 0.0;
    let mut involution: f64 = 0.0;
    for _ in 0..trials {
        let q = sample::unit_quaternion(&mut rng);
        let delta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let reversed = time_reverse_state(q, delta);
        negation = negation.max(bloch_of_state(reversed, vhat).distance(-bloch_of_state(q, vhat)));
        let twice = time_reverse_state(reversed, delta);
        involution = involution.max((twice.as_quat() + q.as_quat()).norm());
    }

    // Eq-(19)-style trajectory reversal with the exact stepper
    let f = FieldProfile::constant([0.4, -0.3, 0.8], 1.2, 0.9).expect("valid field");
    let q0 = sample::unit_quaternion(&mut rng);
    let tr = integrate(
        &FirstOrderState { q: q0, vhat },
        &f,
        3.0,
        0.05,
        Method::Exact,
    )
    .expect("exact integration");
    let (_, residual) = reverse_trajectory(&tr, &f).expect("reversal");

    vec![
        check("timereversal/bloch-negation", negation, 1e-12),
        check("timereversal/t-squared-is-minus-one", involution, 1e-13),
        check("timereversal/trajectory-residual", residual, 1e-10),
    ]
}

fn dynamics_suite(seed: u64) -> Vec<Check> {
    let mut rng = sample::rng(seed);
    let mut out = Vec::new();
    let vhat = PureUnitQuaternion::I;

    // fibration invariance: same initial Bloch point, ten random fibrations
    let f = FieldProfile::constant([0.2, 0.5, 0.8], 1.0, 0.7).expect("valid field");
    let base_q = crate::bridge::angles_to_quaternion(&crate::bridge::BlochAngles {
        theta: 1.1,
        phi: 0.6,
        alpha: 0.0,
    });
    let reference = integrate(
        &FirstOrderState { q: base_q, vhat },
        &f,
        4.0,
        0.01,
        Method::Rk4First,
    )
    .expect("integration");
    let mut fib_dev: f64 = 0.0;
    for _ in 0..10 {
        let u = sample::unit_quaternion(&mut rng);
        let run = integrate(
            &FirstOrderState {
                q: u * base_q,
                vhat: u.sandwich(vhat),
            },
            &f,
            4.0,
            0.01,
            Method::Rk4First,
        )
        .expect("integration");
        for (a, b) in reference.samples.iter().zip(&run.samples) {
            fib_dev = fib_dev.max(a.bloch.distance(b.bloch));
        }
    }
    out.push(check("dynamics/fibration-invariance", fib_dev, 1e-8));

    // RK4 order vs the exact stepper over step halvings
    let t_end = std::f64::consts::TAU;
    let exact_end = integrate(
        &FirstOrderState { q: base_q, vhat },
        &f,
        t_end,
        t_end / 64.0,
        Method::Exact,
    )
    .expect("integration")
    .final_sample()
    .q;
    let mut errs = Vec::new();
    for halvings in 0..4 {
        let h = t_end / (16.0 * (1 << halvings) as f64);
        let run = integrate(
            &FirstOrderState { q: base_q, vhat },
            &f,
            t_end,
            h,
            Method::Rk4First,
        )
        .expect("integration");
        errs.push((run.final_sample().q - exact_end).norm());
    }
    let mut slope_dev: f64 = 0.0;
    for w in errs.windows(2) {
        let slope = (w[0] / w[1]).log2();
        slope_dev = slope_dev.max((slope - 4.0).abs());
    }
    out.push(check("dynamics/rk4-order-slope-minus-4", slope_dev, 0.3));

    // exact stepper norm preservation, per step
    let run = integrate(
        &FirstOrderState { q: base_q, vhat },
        &f,
        t_end,
        t_end / 400.0,
        Method::Exact,
    )
    .expect("integration");
    let mut per_step: f64 = 0.0;
    for w in run.samples.windows(2) {
        per_step = per_step.max((w[1].norm - w[0].norm).abs());
    }
    out.push(check("dynamics/exact-norm-per-step", per_step, 1e-13));

    // first/second order agreement and v̂ conservation over 10 periods
    let period = std::f64::consts::TAU;
    let h = period / 1000.0;
    let first = integrate(
        &FirstOrderState { q: base_q, vhat },
        &f,
        10.0 * period,
        h,
        Method::Rk4First,
    )
    .expect("integration");
    let second = integrate(
        &FirstOrderState { q: base_q, vhat },
        &f,
        10.0 * period,
        h,
        Method::Rk4Second,
    )
    .expect("integration");
    let pair_dev = first
        .samples
        .iter()
        .zip(&second.samples)
        .map(|(a, b)| (a.q - b.q).norm())
        .fold(0.0, f64::max);
    out.push(check("dynamics/first-second-agreement", pair_dev, 1e-8));
    out.push(check("dynamics/vhat-drift", second.max_vhat_drift(), 1e-8));
    out.push(check("dynamics/l2-on-shell", second.max_abs_l2(), 1e-8));

    // quaternion vs spinor-oracle Bloch trajectories under identical steps
    let spinor0 = crate::bridge::map_mi_inverse(base_q);
    let oracle_run =
        oracle::integrate_spinor(&spinor0, &f, f.omega0, 4.0, 0.01).expect("oracle RK4");
    let quat_run = integrate(
        &FirstOrderState { q: base_q, vhat },
        &f,
        4.0,
        0.01,
        Method::Rk4First,
    )
    .expect("integration");
    let mut oracle_dev: f64 = 0.0;
    for (a, b) in quat_run.samples.iter().zip(&oracle_run) {
        oracle_dev = oracle_dev.max(a.bloch.distance(oracle::bloch_from_spinor(&b.spinor)));
    }
    out.push(check("dynamics/oracle-equivalence", oracle_dev, 1e-8));

    // Larmor precession angle and ω₀ invisibility
    let gamma = 1.0;
    let bz = 1.0;
    let larmor = FieldProfile::constant([0.0, 0.0, bz], gamma, 0.5).expect("valid field");
    let x_start = crate::bridge::angles_to_quaternion(&crate::bridge::BlochAngles {
        theta: std::f64::consts::FRAC_PI_2,
        phi: 0.0,
        alpha: 0.0,
    });
    let run = integrate(
        &FirstOrderState { q: x_start, vhat },
        &larmor,
        period,
        period / 256.0,
        Method::Exact,
    )
    .expect("integration");
    let mut angle_dev: f64 = 0.0;
    let mut prev = 0.0_f64;
    let mut unwrapped = 0.0_f64;
    for s in &run.samples {
        let angle = s.bloch.y.atan2(s.bloch.x);
        let mut delta = angle - prev;
        while delta > std::f64::consts::PI {
            delta -= std::f64::consts::TAU;
        }
        while delta < -std::f64::consts::PI {
            delta += std::f64::consts::TAU;
        }
        unwrapped += delta;
        prev = angle;
        angle_dev = angle_dev.max((unwrapped - gamma * bz * s.t).abs());
    }
    out.push(check("dynamics/larmor-angle", angle_dev, 1e-10));

    let mut w0_dev: f64 = 0.0;
    let reference_run = integrate(
        &FirstOrderState { q: x_start, vhat },
        &FieldProfile::constant([0.0, 0.0, bz], gamma, 0.0).expect("valid field"),
        period,
        period / 256.0,
        Method::Exact,
    )
    .expect("integration");
    for w0 in [1.0, 10.0] {
        let other = integrate(
            &FirstOrderState { q: x_start, vhat },
            &FieldProfile::constant([0.0, 0.0, bz], gamma, w0).expect("valid field"),
            period,
            period / 256.0,
            Method::Exact,
        )
        .expect("integration");
        for (a, b) in reference_run.samples.iter().zip(&other.samples) {
            w0_dev = w0_dev.max(a.bloch.distance(b.bloch));
        }
    }
    out.push(check("dynamics/omega0-invisibility", w0_dev, 1e-12));

    // canonical momentum identity on consistent random states
    let mut momentum_dev: f64 = 0.0;
    for _ in 0..100 {
        let q = sample::unit_quaternion(&mut rng);
        let vh = sample::pure_unit(&mut rng);
        let b = Quaternion::pure(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let w0 = rng.random_range(0.3..2.0);
        let qd = first_order_rhs(q.as_quat(), vh, b, w0);
        let from_p = crate::dynamics::momentum_bloch(q.as_quat(), qd, b, w0).expect("consistent");
        let direct = bloch_of_state(q, extract_vhat(q.as_quat(), qd, b, w0).expect("consistent"));
        momentum_dev = momentum_dev.max(from_p.distance(direct));
    }
    out.push(check(
        "dynamics/momentum-bloch-identity",
        momentum_dev,
        1e-12,
    ));

    // quaternionic L1 against the spinor oracle
    let mut l1_dev: f64 = 0.0;
    for _ in 0..100 {
        let q = sample::unit_quaternion(&mut rng);
        let qd = sample::unit_quaternion(&mut rng).as_quat();
        let bvec = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let h = oracle::hamiltonian(bvec, rng.random_range(0.2..2.0));
        let s = crate::bridge::map_mi_inverse(q);
        let sdot = spinor_components(qd);
        let hs = h.apply(&s);
        let h_term = (s.a.conj() * hs.a + s.b.conj() * hs.b).re;
        let lhs = lagrangian_l1_quat(q.as_quat(), qd, h_term);
        let rhs = oracle::lagrangian_l1_spinor(&s, &sdot, &h);
        l1_dev = l1_dev.max((lhs - rhs).abs());
    }
    out.push(check("dynamics/l1-oracle-equality", l1_dev, 1e-12));

    out
}

fn spinor_components(q: Quaternion) -> crate::bridge::Spinor {
    crate::bridge::Spinor::unchecked(
        num_complex::Complex64::new(q.w, q.x),
        num_complex::Complex64::new(q.y, q.z),
    )
}
