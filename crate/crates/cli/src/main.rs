//! `qspin` — quaternionic spin-1/2 toolbox.
//!
//! Subcommands: `simulate` (integrate a configured run and export the
//! trajectory), `gate` (apply a gate sequence and cross-check against the
//! matrix oracle), `reverse` (time-reverse a configured run and report the
//! equation residual), `cone` (left-multiplication rotation-axis geometry),
//! and `verify` (named invariant suites).
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration or usage
//! error, 3 integrator inconsistency.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use qspin_core::{
    axis_circle, bloch_of_state, classify_left, compose, cone_check, decompose, effective_rotation,
    gate_matrix, map_mi_inverse, matrix_to_right_quaternion, reverse_trajectory, verify,
    BlochAngles, BlochVector, GateSpec, LeftOpClass, PureUnitQuaternion, Trajectory,
    UnitQuaternion,
};

#[derive(Parser)]
#[command(
    name = "qspin",
    about = "Quaternionic spin-1/2 states: simulation, gates, and verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate a configured run and write the trajectory (csv or json).
    Simulate {
        /// TOML run configuration
        #[arg(long)]
        config: PathBuf,
        /// Output path (defaults to the config's `out`, else stdout)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format override: csv | json
        #[arg(long)]
        format: Option<String>,
        /// Integrator override: rk4-first | rk4-second | exact
        #[arg(long)]
        method: Option<String>,
        /// Step size override
        #[arg(long)]
        step: Option<f64>,
        /// End time override
        #[arg(long)]
        t_end: Option<f64>,
        /// Seed override (recorded in the config; randomized suites only)
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Apply a gate sequence to a state and cross-check with the oracle.
    Gate {
        /// Initial state as "w,x,y,z" (unit quaternion)
        #[arg(long)]
        state: Option<String>,
        /// Initial state as Bloch angles "theta,phi,alpha"
        #[arg(long)]
        angles: Option<String>,
        /// Gate tokens: X Y Z H (with optional +/- suffix), P(θ), R(nx,ny,nz;γ)
        #[arg(required = false)]
        gates: Vec<String>,
    },
    /// Time-reverse a configured run and report the first-order residual.
    Reverse {
        #[arg(long)]
        config: PathBuf,
        /// Write the reversed trajectory here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<String>,
    },
    /// Cone relation and effective-axis geometry of a left factor.
    Cone {
        /// State quaternion "w,x,y,z"
        #[arg(long)]
        q: Option<String>,
        /// Left factor "w,x,y,z"
        #[arg(long)]
        left: Option<String>,
        /// Fibration axis "x,y,z" (default i)
        #[arg(long)]
        vhat: Option<String>,
        /// Phase samples for the axis circle
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// Random sweep mode: number of (q, q_L) trials
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run invariant suites: algebra | gates | cone | timereversal | dynamics | all.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = verify::DEFAULT_TRIALS)]
        trials: usize,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    msg: String,
}

fn usage_err(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        msg: msg.into(),
    }
}

fn inconsistency(msg: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        msg: msg.into(),
    }
}

fn main() -> ExitCode {
    // die quietly when a downstream pipe closes instead of panicking
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Simulate {
            config,
            out,
            format,
            method,
            step,
            t_end,
            seed,
        } => cmd_simulate(config, out, format, method, step, t_end, seed),
        Cmd::Gate {
            state,
            angles,
            gates,
        } => cmd_gate(state, angles, gates),
        Cmd::Reverse {
            config,
            out,
            format,
        } => cmd_reverse(config, out, format),
        Cmd::Cone {
            q,
            left,
            vhat,
            samples,
            trials,
            seed,
        } => cmd_cone(q, left, vhat, samples, trials, seed),
        Cmd::Verify {
            suite,
            seed,
            trials,
        } => cmd_verify(suite, seed, trials),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn load_config(
    path: &PathBuf,
    format: Option<String>,
    method: Option<String>,
    step: Option<f64>,
    t_end: Option<f64>,
    seed: Option<u64>,
) -> Result<RunConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage_err(format!("cannot read {}: {e}", path.display())))?;
    let mut cfg = RunConfig::parse(&text).map_err(usage_err)?;
    if let Some(f) = format {
        cfg.format = f;
    }
    if let Some(m) = method {
        cfg.method = m;
    }
    if let Some(s) = step {
        cfg.step = s;
    }
    if let Some(t) = t_end {
        cfg.t_end = t;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    // re-validate after overrides
    RunConfig::parse(&toml::to_string(&cfg).map_err(|e| usage_err(e.to_string()))?)
        .map_err(usage_err)
}

fn run_configured(cfg: &RunConfig) -> Result<Trajectory, Failure> {
    let field = cfg.field_profile().map_err(usage_err)?;
    let initial = cfg.initial_state().map_err(usage_err)?;
    let method = cfg.resolve_method().map_err(usage_err)?;
    let tr =
        qspin_core::integrate(&initial, &field, cfg.t_end, cfg.step, method).map_err(
            |e| match e {
                qspin_core::Error::InconsistentState { .. } | qspin_core::Error::ZeroOmega => {
                    inconsistency(e.to_string())
                }
                other => usage_err(other.to_string()),
            },
        )?;
    // extraction consistency gate: every sample's fibration axis must stay
    // pure and unit when ω₀ > 0
    if field.omega0 > 0.0 {
        for s in &tr.samples {
            let norm_dev = (s.vhat.norm() - 1.0).abs();
            if s.vhat.w.abs() > 1e-6 || norm_dev > 1e-6 {
                return Err(inconsistency(format!(
                    "fibration-axis extraction failed at t = {} (real part {:.3e}, norm deviation {:.3e})",
                    s.t, s.vhat.w, norm_dev
                )));
            }
        }
    }
    Ok(tr)
}

fn write_trajectory(
    tr: &Trajectory,
    out: Option<PathBuf>,
    cfg_out: &Option<String>,
    format: &str,
) -> Result<(), Failure> {
    let rendered = match format {
        "json" => output::to_json(tr),
        _ => output::to_csv(tr),
    };
    let path = out.or_else(|| cfg_out.as_ref().map(PathBuf::from));
    match path {
        Some(p) => {
            std::fs::write(&p, rendered)
                .map_err(|e| usage_err(format!("cannot write {}: {e}", p.display())))?;
            println!("wrote {} samples to {}", tr.samples.len(), p.display());
        }
        None => print!("{rendered}"),
    }
    Ok(())
}

fn cmd_simulate(
    config: PathBuf,
    out: Option<PathBuf>,
    format: Option<String>,
    method: Option<String>,
    step: Option<f64>,
    t_end: Option<f64>,
    seed: Option<u64>,
) -> Result<u8, Failure> {
    let cfg = load_config(&config, format, method, step, t_end, seed)?;
    let tr = run_configured(&cfg)?;
    write_trajectory(&tr, out, &cfg.out, &cfg.format)?;
    Ok(0)
}

fn parse_floats(text: &str, n: usize, what: &str) -> Result<Vec<f64>, Failure> {
    let parts: Result<Vec<f64>, _> = text.split(',').map(|p| p.trim().parse::<f64>()).collect();
    match parts {
        Ok(v) if v.len() == n => Ok(v),
        _ => Err(usage_err(format!(
            "{what} must be {n} comma-separated numbers (got `{text}`)"
        ))),
    }
}

fn parse_state(state: Option<String>, angles: Option<String>) -> Result<UnitQuaternion, Failure> {
    match (state, angles) {
        (Some(_), Some(_)) => Err(usage_err("provide --state or --angles, not both")),
        (Some(s), None) => {
            let v = parse_floats(&s, 4, "--state")?;
            UnitQuaternion::new(v[0], v[1], v[2], v[3]).map_err(|e| usage_err(e.to_string()))
        }
        (None, Some(a)) => {
            let v = parse_floats(&a, 3, "--angles")?;
            Ok(qspin_core::angles_to_quaternion(&BlochAngles {
                theta: v[0],
                phi: v[1],
                alpha: v[2],
            }))
        }
        (None, None) => Ok(UnitQuaternion::ONE),
    }
}

fn fmt_quat(q: qspin_core::Quaternion) -> String {
    format!("{:+.12e} {:+.12e}i {:+.12e}j {:+.12e}k", q.w, q.x, q.y, q.z)
}

fn fmt_bloch(b: BlochVector) -> String {
    format!("({:+.12e}, {:+.12e}, {:+.12e})", b.x, b.y, b.z)
}

fn cmd_gate(
    state: Option<String>,
    angles: Option<String>,
    tokens: Vec<String>,
) -> Result<u8, Failure> {
    if tokens.is_empty() {
        return Err(usage_err("empty gate sequence"));
    }
    let q0 = parse_state(state, angles)?;
    let gates: Result<Vec<GateSpec>, _> = tokens.iter().map(|t| GateSpec::parse(t)).collect();
    let gates = gates.map_err(|e| usage_err(e.to_string()))?;

    let composed = compose(&gates).map_err(|e| usage_err(e.to_string()))?;
    let final_q = q0 * composed;
    let vhat = PureUnitQuaternion::I;
    let bloch_before = bloch_of_state(q0, vhat);
    let bloch_after = bloch_of_state(final_q, vhat);

    // oracle path: apply the catalog matrices to the spinor image in order
    let mut spinor = map_mi_inverse(q0);
    for g in &gates {
        spinor = gate_matrix(g).apply(&spinor);
    }
    let oracle_bloch = qspin_core::oracle::bloch_from_spinor(&spinor);
    let bloch_dev = bloch_after.distance(oracle_bloch);

    // matrix product folded back to a right factor, compared up to sign
    let u_total = gates
        .iter()
        .rev()
        .map(gate_matrix)
        .reduce(|acc, m| acc.mul(&m))
        .expect("nonempty");
    let (q_mat, _) = matrix_to_right_quaternion(&u_total).map_err(|e| usage_err(e.to_string()))?;
    let quat_dev = (qspin_core::canonical_sign(q_mat).as_quat()
        - qspin_core::canonical_sign(composed).as_quat())
    .norm();

    println!("composed right factor: {}", fmt_quat(composed.as_quat()));
    match decompose(composed) {
        GateSpec::General { axis, angle } => {
            println!("axis-angle: axis {} angle {:+.12e}", fmt_bloch(axis), angle);
        }
        _ => unreachable!("decompose always returns the general form"),
    }
    println!("initial state: {}", fmt_quat(q0.as_quat()));
    println!("final state:   {}", fmt_quat(final_q.as_quat()));
    println!("bloch before:  {}", fmt_bloch(bloch_before));
    println!("bloch after:   {}", fmt_bloch(bloch_after));
    println!("oracle bloch:  {}", fmt_bloch(oracle_bloch));
    println!(
        "max deviation: bloch {:.3e}, right-factor {:.3e}",
        bloch_dev, quat_dev
    );
    Ok(0)
}

fn cmd_reverse(
    config: PathBuf,
    out: Option<PathBuf>,
    format: Option<String>,
) -> Result<u8, Failure> {
    let cfg = load_config(&config, format, None, None, None, None)?;
    let field = cfg.field_profile().map_err(usage_err)?;
    let tr = run_configured(&cfg)?;
    let (reversed, residual) =
        reverse_trajectory(&tr, &field).map_err(|e| usage_err(e.to_string()))?;
    println!("samples: {}", reversed.samples.len());
    println!(
        "max first-order residual of the reversed run: {:.6e}",
        residual
    );
    if out.is_some() || cfg.out.is_some() {
        write_trajectory(&reversed, out, &cfg.out, &cfg.format)?;
    }
    Ok(0)
}

fn cmd_cone(
    q: Option<String>,
    left: Option<String>,
    vhat: Option<String>,
    samples: usize,
    trials: Option<usize>,
    seed: Option<u64>,
) -> Result<u8, Failure> {
    let vhat = match vhat {
        Some(v) => {
            let p = parse_floats(&v, 3, "--vhat")?;
            PureUnitQuaternion::new(p[0], p[1], p[2]).map_err(|e| usage_err(e.to_string()))?
        }
        None => PureUnitQuaternion::I,
    };
    if samples == 0 {
        return Err(usage_err("--samples must be positive"));
    }

    match (q, left) {
        (Some(qs), Some(ls)) => {
            let qv = parse_floats(&qs, 4, "--q")?;
            let lv = parse_floats(&ls, 4, "--left")?;
            let q = UnitQuaternion::new(qv[0], qv[1], qv[2], qv[3])
                .map_err(|e| usage_err(e.to_string()))?;
            let q_l = UnitQuaternion::new(lv[0], lv[1], lv[2], lv[3])
                .map_err(|e| usage_err(e.to_string()))?;

            match classify_left(q_l, vhat) {
                LeftOpClass::GlobalPhase { angle } => {
                    println!("class: global phase (angle {:+.12e})", angle)
                }
                LeftOpClass::TimeReversal { delta } => {
                    println!("class: time reversal (delta {:+.12e})", delta)
                }
                LeftOpClass::NonUnitary => println!("class: non-unitary"),
            }

            let (axis, angle) =
                effective_rotation(q, q_l, vhat).map_err(|e| usage_err(e.to_string()))?;
            println!(
                "effective rotation: axis {} angle {:+.12e}",
                fmt_bloch(axis),
                angle
            );

            let aa = qspin_core::log_axis_angle(q_l);
            let n_axis = qspin_core::f_map(-aa.axis);
            let (lhs, rhs) =
                cone_check(n_axis, q, q_l, vhat).map_err(|e| usage_err(e.to_string()))?;
            println!(
                "cone relation: n·v = {:+.12e}, q·r = {:+.12e}, |diff| = {:.3e}",
                lhs,
                rhs,
                (lhs - rhs).abs()
            );

            let circle =
                axis_circle(q, q_l, vhat, samples).map_err(|e| usage_err(e.to_string()))?;
            let qhat = bloch_of_state(q, vhat);
            let dots: Vec<f64> = circle.iter().map(|r| r.dot(qhat)).collect();
            let mean = dots.iter().sum::<f64>() / dots.len() as f64;
            let var = dots.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / dots.len() as f64;
            for (idx, r) in circle.iter().enumerate() {
                println!("axis[{idx:02}]: {}", fmt_bloch(*r));
            }
            println!(
                "axis-circle dot with q̂: mean {:+.12e}, variance {:.3e}",
                mean, var
            );
            Ok(0)
        }
        (None, None) => {
            let trials = trials.unwrap_or(verify::DEFAULT_TRIALS);
            let seed = seed.unwrap_or(verify::DEFAULT_SEED);
            let checks = verify::run_suite(verify::Suite::Cone, seed, trials);
            let mut all_pass = true;
            for c in &checks {
                let status = if c.passed() { "PASS" } else { "FAIL" };
                all_pass &= c.passed();
                println!(
                    "{status} {} max={:.3e} tol={:.3e}",
                    c.name, c.max_err, c.tol
                );
            }
            Ok(if all_pass { 0 } else { 1 })
        }
        _ => Err(usage_err(
            "provide both --q and --left for a single check, or neither for a sweep",
        )),
    }
}

fn cmd_verify(suite: String, seed: u64, trials: usize) -> Result<u8, Failure> {
    let suite = verify::Suite::parse(&suite)
        .ok_or_else(|| usage_err(format!("unknown suite `{suite}`")))?;
    let checks = verify::run_suite(suite, seed, trials);
    let mut failures = 0usize;
    for c in &checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        if !c.passed() {
            failures += 1;
        }
        println!(
            "{status} {} max={:.3e} tol={:.3e}",
            c.name, c.max_err, c.tol
        );
    }
    println!("{} checks, {} failed", checks.len(), failures);
    Ok(if failures == 0 { 0 } else { 1 })
}
