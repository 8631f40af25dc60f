//! `curved2b` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use curved2b::barycenter::{
    center_of_mass, fmt_sci, rule_residual, sweep_rows, write_sweep_csv, SweepRow,
};
use curved2b::dynamics::{
    integrate, momentum_map, momentum_pairing, write_trajectory_csv, IntegratorOptions,
};
use curved2b::scenarios::{
    equilibrium_report, equilibrium_residual, make_equilibrium, make_hyperbolic_re,
    run_collision_with, setup_collision, CollisionOptions, FIT_WINDOW,
};
use curved2b::{Branch, ComRule, Error, Potential, Space64, State64, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "curved2b",
    version,
    about = "Two bodies on surfaces of constant curvature"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PotentialKind {
    /// -G mu1 mu2 k cot(k r) and its hyperbolic and flat analogues
    Cotangent,
    /// G mu1 mu2 r^2 / 2
    Spring,
}

#[derive(clap::Args, Debug, Clone)]
struct Common {
    #[arg(long, allow_hyphen_values = true)]
    kappa: f64,
    #[arg(long, default_value_t = 1.0)]
    mu1: f64,
    #[arg(long, default_value_t = 1.0)]
    mu2: f64,
    /// Distance between the masses.
    #[arg(long)]
    r: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(clap::Args, Debug, Clone)]
struct Physics {
    #[arg(long, value_enum, default_value_t = PotentialKind::Cotangent)]
    potential: PotentialKind,
    /// Coupling constant of the potential.
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    /// Local error tolerance of the integrator.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Centres of mass of two points `r` apart, placed symmetrically about the pole.
    Com {
        #[command(flatten)]
        common: Common,
        /// lever, collision, rotation, variational or all
        #[arg(long, default_value = "all")]
        rule: String,
        #[arg(long)]
        branch: Option<Branch>,
    },
    /// Partner distance r2 against curvature for fixed r1.
    Sweep {
        #[arg(long, default_value_t = 2.0)]
        mu_ratio: f64,
        #[arg(long, default_value_t = 1.0)]
        r1: f64,
        #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
        kappa_min: f64,
        #[arg(long, default_value_t = 2.2, allow_hyphen_values = true)]
        kappa_max: f64,
        /// Number of grid intervals; the grid has steps + 1 points.
        #[arg(long, default_value_t = 400)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Release both masses from rest and locate the collision.
    Collide {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        physics: Physics,
        /// Stop when the masses are this close (default 1e-3 r).
        #[arg(long)]
        r_stop: Option<f64>,
        #[arg(long, default_value_t = FIT_WINDOW)]
        fit_window: usize,
        /// Also write the trajectory as CSV.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Integrate a steady rotation about the pole.
    Rotate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        physics: Physics,
        #[arg(long)]
        branch: Option<Branch>,
        #[arg(long, default_value_t = 1.0)]
        periods: f64,
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Integrate a hyperbolic relative equilibrium (kappa < 0).
    Boost {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        physics: Physics,
        #[arg(long, default_value_t = 2.0)]
        duration: f64,
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Consistency checks on seeded random states and the given configuration.
    Check {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        physics: Physics,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Model(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Model(e) if e.is_numerical() => 3,
            CliError::Model(_) | CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
        }
    }

    fn record(&self) -> serde_json::Value {
        let (kind, message) = match self {
            CliError::Model(e) => (e.kind(), e.to_string()),
            CliError::Usage(m) => ("UsageError", m.clone()),
            CliError::Io(m) => ("IoError", m.clone()),
        };
        json!({ "error": kind, "message": message, "exit_code": self.exit_code() })
    }
}

type CliResult<T> = Result<T, CliError>;

fn open_output(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, path: &Option<PathBuf>) -> CliResult<()> {
    let mut out = open_output(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn write_csv(header: &[&str], rows: &[Vec<String>], path: &Option<PathBuf>) -> CliResult<()> {
    let out = open_output(path)?;
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Flatten a JSON object into a single CSV record, numbers at full precision.
fn flat_record(value: &serde_json::Value) -> (Vec<String>, Vec<String>) {
    fn walk(prefix: &str, v: &serde_json::Value, keys: &mut Vec<String>, vals: &mut Vec<String>) {
        match v {
            serde_json::Value::Object(m) => {
                for (k, x) in m {
                    let name = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&name, x, keys, vals);
                }
            }
            serde_json::Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), x, keys, vals);
                }
            }
            serde_json::Value::Number(n) => {
                keys.push(prefix.to_string());
                vals.push(match n.as_f64() {
                    Some(f) if !n.is_u64() && !n.is_i64() => fmt_sci(f),
                    _ => n.to_string(),
                });
            }
            serde_json::Value::Null => {
                keys.push(prefix.to_string());
                vals.push(String::new());
            }
            serde_json::Value::String(s) => {
                keys.push(prefix.to_string());
                vals.push(s.clone());
            }
            serde_json::Value::Bool(b) => {
                keys.push(prefix.to_string());
                vals.push(b.to_string());
            }
        }
    }
    let (mut keys, mut vals) = (Vec::new(), Vec::new());
    walk("", value, &mut keys, &mut vals);
    (keys, vals)
}

fn emit_record(value: serde_json::Value, format: Format, path: &Option<PathBuf>) -> CliResult<()> {
    match format {
        Format::Json => write_json(&value, path),
        Format::Csv => {
            let (keys, vals) = flat_record(&value);
            let header: Vec<&str> = keys.iter().map(String::as_str).collect();
            write_csv(&header, &[vals], path)
        }
    }
}

fn validate(c: &Common) -> CliResult<Space64> {
    for (name, x) in [
        ("kappa", c.kappa),
        ("mu1", c.mu1),
        ("mu2", c.mu2),
        ("r", c.r),
    ] {
        if !x.is_finite() {
            return Err(CliError::Usage(format!("{name} must be finite")));
        }
    }
    if !(c.mu1 > 0.0 && c.mu2 > 0.0) {
        return Err(CliError::Usage("masses must be positive".into()));
    }
    let space = Space64::new(c.kappa)?;
    if !Potential::in_domain(&space, c.r) {
        return Err(CliError::Usage(format!(
            "r = {} outside the admissible interval",
            c.r
        )));
    }
    Ok(space)
}

fn potential(p: &Physics, mu1: f64, mu2: f64) -> CliResult<Potential<f64>> {
    if !(p.g > 0.0 && p.g.is_finite()) {
        return Err(CliError::Usage("g must be positive".into()));
    }
    if !(p.tol > 0.0 && p.tol.is_finite()) {
        return Err(CliError::Usage("tol must be positive".into()));
    }
    Ok(match p.potential {
        PotentialKind::Cotangent => Potential::cotangent(p.g),
        PotentialKind::Spring => {
            let c = p.g * mu1 * mu2;
            Potential::custom(move |r: f64| 0.5 * c * r * r, move |r: f64| c * r)
        }
    })
}

fn com(common: &Common, rule: &str, branch: Option<Branch>) -> CliResult<()> {
    let space = validate(common)?;
    let rules: Vec<ComRule> = if rule == "all" {
        ComRule::ALL.to_vec()
    } else {
        vec![rule
            .parse()
            .map_err(|e: Error| CliError::Usage(e.to_string()))?]
    };
    let st = setup_collision(
        &space,
        common.mu1,
        common.mu2,
        common.r,
        &Potential::default(),
    )?;
    let (q1, q2) = (st.point(0), st.point(1));
    let mut entries = Vec::new();
    for rule in rules {
        let branches: Vec<Option<Branch>> = match (rule, branch) {
            (ComRule::Rotation, Some(b)) => vec![Some(b)],
            (ComRule::Rotation, None) if common.kappa > 0.0 => {
                vec![Some(Branch::Acute), Some(Branch::Obtuse)]
            }
            _ => vec![None],
        };
        for b in branches {
            let entry = match center_of_mass(&space, rule, common.mu1, &q1, common.mu2, &q2, b) {
                Ok(c) => json!({
                    "rule": rule.name(),
                    "branch": b.or(c.branch).map(Branch::name),
                    "status": "ok",
                    "r1": c.r1,
                    "r2": c.r2,
                    "center": c.center.coords().0,
                    "residual": rule_residual(&space, rule, common.mu1, common.mu2, c.r1, c.r2),
                }),
                Err(e) if e.is_numerical() || rule == ComRule::Rotation => json!({
                    "rule": rule.name(),
                    "branch": b.map(Branch::name),
                    "status": e.kind(),
                    "r1": null,
                    "r2": null,
                    "center": [null, null, null],
                    "residual": null,
                }),
                Err(e) => return Err(e.into()),
            };
            entries.push(entry);
        }
    }
    match common.format {
        Format::Json => write_json(
            &json!({
                "kappa": common.kappa, "mu1": common.mu1, "mu2": common.mu2, "r": common.r,
                "q1": q1.coords().0, "q2": q2.coords().0, "centers": entries,
            }),
            &common.output,
        ),
        Format::Csv => {
            let header = [
                "rule", "branch", "status", "r1", "r2", "x", "y", "z", "residual",
            ];
            let cell = |v: &serde_json::Value| match v {
                serde_json::Value::Number(n) => fmt_sci(n.as_f64().unwrap()),
                serde_json::Value::String(s) => s.clone(),
                _ => String::new(),
            };
            let rows: Vec<Vec<String>> = entries
                .iter()
                .map(|e| {
                    let mut r: Vec<String> = ["rule", "branch", "status", "r1", "r2"]
                        .iter()
                        .map(|k| cell(&e[k]))
                        .collect();
                    r.extend((0..3).map(|i| cell(&e["center"][i])));
                    r.push(cell(&e["residual"]));
                    r
                })
                .collect();
            write_csv(&header, &rows, &common.output)
        }
    }
}

fn thread_count() -> CliResult<Option<usize>> {
    match std::env::var("CURVED2B_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "CURVED2B_THREADS must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn sweep(
    mu_ratio: f64,
    r1: f64,
    kappa_min: f64,
    kappa_max: f64,
    steps: usize,
    format: Format,
    output: &Option<PathBuf>,
) -> CliResult<()> {
    if !(kappa_min.is_finite() && kappa_max.is_finite() && kappa_min < kappa_max) {
        return Err(CliError::Usage("need finite kappa-min < kappa-max".into()));
    }
    if steps == 0 {
        return Err(CliError::Usage("steps must be at least 1".into()));
    }
    if !(mu_ratio > 0.0 && r1 > 0.0 && mu_ratio.is_finite() && r1.is_finite()) {
        return Err(CliError::Usage("mu-ratio and r1 must be positive".into()));
    }
    let grid: Vec<f64> = (0..=steps)
        .map(|i| kappa_min + (kappa_max - kappa_min) * i as f64 / steps as f64)
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Io(e.to_string()))?;
    let per_kappa: Vec<Result<Vec<SweepRow<f64>>, Error>> = pool.install(|| {
        grid.par_iter()
            .map(|&k| sweep_rows(k, mu_ratio, r1))
            .collect()
    });
    let mut rows = Vec::new();
    for r in per_kappa {
        rows.extend(r?);
    }
    match format {
        Format::Json => write_json(&rows, output),
        Format::Csv => {
            let out = open_output(output)?;
            write_sweep_csv(&rows, out)?;
            Ok(())
        }
    }
}

fn save_trajectory(
    traj: &curved2b::dynamics::Trajectory<f64>,
    path: &Option<PathBuf>,
) -> CliResult<()> {
    if let Some(p) = path {
        write_trajectory_csv(traj, BufWriter::new(File::create(p)?))?;
    }
    Ok(())
}

fn collide(
    common: &Common,
    physics: &Physics,
    r_stop: Option<f64>,
    fit_window: usize,
    trajectory: &Option<PathBuf>,
) -> CliResult<()> {
    let space = validate(common)?;
    let pot = potential(physics, common.mu1, common.mu2)?;
    let st = setup_collision(&space, common.mu1, common.mu2, common.r, &pot)?;
    let opts = CollisionOptions {
        fit_window,
        tol: physics.tol,
        ..CollisionOptions::new(r_stop.unwrap_or(1e-3 * common.r))
    };
    let rep = run_collision_with(&space, &pot, &st, &opts)?;
    if trajectory.is_some() {
        let traj = curved2b::dynamics::integrate_until(
            &space,
            &pot,
            &st,
            opts.t_max,
            &IntegratorOptions::with_tol(physics.tol),
            |s| s.separation(&space) < opts.r_stop,
        )?;
        save_trajectory(&traj, trajectory)?;
    }
    emit_record(
        json!({ "kappa": common.kappa, "mu1": common.mu1, "mu2": common.mu2, "r": common.r, "report": rep }),
        common.format,
        &common.output,
    )
}

fn rotate(
    common: &Common,
    physics: &Physics,
    branch: Option<Branch>,
    periods: f64,
    trajectory: &Option<PathBuf>,
) -> CliResult<()> {
    let space = validate(common)?;
    if !(periods > 0.0 && periods.is_finite()) {
        return Err(CliError::Usage("periods must be positive".into()));
    }
    let pot = potential(physics, common.mu1, common.mu2)?;
    let (st, spec) = make_equilibrium(&space, common.mu1, common.mu2, common.r, &pot, branch)?;
    let t_end = periods * std::f64::consts::TAU / spec.omega;
    let traj = integrate(
        &space,
        &pot,
        &st,
        t_end,
        &IntegratorOptions::with_tol(physics.tol),
    )?;
    save_trajectory(&traj, trajectory)?;
    let rep = equilibrium_report(&space, &pot, &traj, &spec);
    let residual = equilibrium_residual(&space, &pot, &st, &spec)?;
    emit_record(
        json!({ "kappa": common.kappa, "mu1": common.mu1, "mu2": common.mu2, "r": common.r,
                "spec": spec, "ansatz_residual": residual, "report": rep }),
        common.format,
        &common.output,
    )
}

fn boost(
    common: &Common,
    physics: &Physics,
    duration: f64,
    trajectory: &Option<PathBuf>,
) -> CliResult<()> {
    let space = validate(common)?;
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(CliError::Usage("duration must be positive".into()));
    }
    let pot = potential(physics, common.mu1, common.mu2)?;
    let (st, spec) = make_hyperbolic_re(&space, common.mu1, common.mu2, common.r, &pot)?;
    let traj = integrate(
        &space,
        &pot,
        &st,
        duration,
        &IntegratorOptions::with_tol(physics.tol),
    )?;
    save_trajectory(&traj, trajectory)?;
    let rep = equilibrium_report(&space, &pot, &traj, &spec);
    let residual = equilibrium_residual(&space, &pot, &st, &spec)?;
    emit_record(
        json!({ "kappa": common.kappa, "mu1": common.mu1, "mu2": common.mu2, "r": common.r,
                "spec": spec, "ansatz_residual": residual, "report": rep }),
        common.format,
        &common.output,
    )
}

fn check(common: &Common, physics: &Physics, seed: u64, samples: usize) -> CliResult<()> {
    let space = validate(common)?;
    let pot = potential(physics, common.mu1, common.mu2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairing: f64 = 0.0;
    for _ in 0..samples {
        let st = State64::random(&space, &mut rng, 1.0, 1.0);
        let xi = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let lhs = momentum_map(&space, &st).0.dot(&xi);
        pairing = pairing.max((lhs - momentum_pairing(&space, &st, &xi)).abs());
    }
    let st = setup_collision(&space, common.mu1, common.mu2, common.r, &pot)?;
    let (q1, q2) = (st.point(0), st.point(1));
    let mut residuals = serde_json::Map::new();
    for rule in ComRule::ALL {
        let v = match center_of_mass(&space, rule, common.mu1, &q1, common.mu2, &q2, None) {
            Ok(c) => json!(rule_residual(&space, rule, common.mu1, common.mu2, c.r1, c.r2).abs()),
            Err(e) => json!(e.kind()),
        };
        residuals.insert(rule.name().to_string(), v);
    }
    let equilibrium = if common.kappa != 0.0 {
        match make_equilibrium(&space, common.mu1, common.mu2, common.r, &pot, None) {
            Ok((st, spec)) => json!(equilibrium_residual(&space, &pot, &st, &spec)?),
            Err(e) => json!(e.kind()),
        }
    } else {
        serde_json::Value::Null
    };
    let ok = pairing < 1e-12
        && residuals
            .values()
            .all(|v| v.as_f64().is_none_or(|x| x < 1e-10))
        && equilibrium.as_f64().is_none_or(|x| x < 1e-10);
    emit_record(
        json!({ "kappa": common.kappa, "seed": seed, "samples": samples,
                "momentum_pairing_error": pairing, "rule_residuals": residuals,
                "equilibrium_residual": equilibrium, "ok": ok }),
        common.format,
        &common.output,
    )?;
    if ok {
        Ok(())
    } else {
        Err(Error::ConstraintViolation("consistency checks failed".into()).into())
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Com {
            common,
            rule,
            branch,
        } => com(&common, &rule, branch),
        Command::Sweep {
            mu_ratio,
            r1,
            kappa_min,
            kappa_max,
            steps,
            format,
            output,
        } => sweep(mu_ratio, r1, kappa_min, kappa_max, steps, format, &output),
        Command::Collide {
            common,
            physics,
            r_stop,
            fit_window,
            trajectory,
        } => collide(&common, &physics, r_stop, fit_window, &trajectory),
        Command::Rotate {
            common,
            physics,
            branch,
            periods,
            trajectory,
        } => rotate(&common, &physics, branch, periods, &trajectory),
        Command::Boost {
            common,
            physics,
            duration,
            trajectory,
        } => boost(&common, &physics, duration, &trajectory),
        Command::Check {
            common,
            physics,
            seed,
            samples,
        } => check(&common, &physics, seed, samples),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string());
            eprintln!("{}", err.record());
            return ExitCode::from(err.exit_code());
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code())
        }
    }
}
