//! Front end for the `rdlab` binary: configuration loading, the five
//! subcommands and their output files.
//!
//! Exit codes: 0 pass, 1 condition or margin failure, 2 configuration error,
//! 3 I/O error, 4 suspected blowup (partial outputs are kept).

pub mod config;
pub mod svg;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rdlab::benchmark::{self, bump};
use rdlab::field_io;
use rdlab::lemma2::{self, Resolution};
use rdlab::network::{structure_report, SearchOptions};
use rdlab::network::{builtin, ReactionNetwork, BUILTIN_NAMES};
use rdlab::proof::{self, ProofDiagnostics};
use rdlab::simulator::{DomainKind, SolverConfig};
use rdlab::{simulate, Error, Field, Grid, Trajectory};
use serde::Serialize;
use serde_json::json;

use config::{InitialKind, RunConfig, SnapshotFormat, SnapshotMode};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_BLOWUP: i32 = 4;

/// Why a command could not produce a verdict.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Io(String),
    Blowup(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Io(_) => EXIT_IO,
            Failure::Blowup(_) => EXIT_BLOWUP,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Io(m) | Failure::Blowup(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Io(e.to_string()),
            Error::BlowupSuspected { .. } | Error::NonFinite { .. } => Failure::Blowup(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

/// Command-line values that take precedence over the configuration file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub resolution: Option<usize>,
    pub t_end: Option<f64>,
    pub network: Option<String>,
    pub amplitude: Option<f64>,
    pub k_scale: Option<f64>,
    pub amplitudes: Option<Vec<f64>>,
}

pub fn load_config(path: Option<&Path>, ov: &Overrides) -> Result<RunConfig, Failure> {
    let mut cfg = match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            RunConfig::from_toml(&text).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(s) = ov.seed {
        cfg.seed = s;
    }
    if let Some(o) = &ov.out {
        cfg.out = o.clone();
    }
    if let Some(n) = ov.resolution {
        let dim = cfg.solver.points.len().max(1);
        cfg.solver.points = vec![n; dim];
    }
    if let Some(t) = ov.t_end {
        cfg.solver.t_end = t;
    }
    if let Some(n) = &ov.network {
        cfg.network = n.clone();
    }
    if let Some(a) = ov.amplitude {
        cfg.initial.amplitude = a;
    }
    if let Some(k) = ov.k_scale {
        cfg.proof.k_scale = k;
    }
    if let Some(a) = &ov.amplitudes {
        cfg.sweep.amplitudes = a.clone();
    }
    Ok(cfg)
}

/// A built-in name, or else a path to a network file.
pub fn resolve_network(spec: &str) -> Result<ReactionNetwork, Failure> {
    if let Some(net) = builtin(spec) {
        return Ok(net);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Failure::Config(format!(
            "'{spec}' is neither a built-in network ({}) nor a file",
            BUILTIN_NAMES.join(", ")
        )));
    }
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    ReactionNetwork::from_toml(&text).map_err(|e| Failure::Config(format!("{spec}: {e}")))
}

fn initial_data(cfg: &RunConfig, grid: &Grid, m: usize) -> Result<Vec<Field>, Failure> {
    let a = cfg.initial.amplitude;
    match cfg.initial.kind {
        InitialKind::Bumps => Ok((0..m).map(|i| bump(grid, i % 4, a)).collect()),
        InitialKind::Constant => {
            if cfg.initial.values.len() != m {
                return Err(Failure::Config(format!(
                    "initial.values has {} entries for {m} species",
                    cfg.initial.values.len()
                )));
            }
            Ok(cfg.initial.values.iter().map(|&c| Field::constant(grid, a * c)).collect())
        }
        InitialKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            Ok((0..m)
                .map(|_| {
                    let values = (0..grid.len()).map(|_| a * (0.5 + rng.gen::<f64>())).collect();
                    Field::new(grid.clone(), values).expect("sizes match")
                })
                .collect())
        }
    }
}

pub fn build_solver_config(cfg: &RunConfig, net: ReactionNetwork) -> Result<SolverConfig, Failure> {
    let m = net.species_count();
    if m == 0 {
        return Err(Failure::Config("network has no species".into()));
    }
    let s = &cfg.solver;
    let extent = if s.extent.len() == s.points.len() {
        s.extent.clone()
    } else if s.extent.len() == 1 {
        vec![s.extent[0]; s.points.len()]
    } else {
        return Err(Failure::Config("solver.extent must have one entry or one per axis".into()));
    };
    let grid = Grid::new(extent, s.points.clone())?;
    let diffusivities = match &s.diffusivities {
        Some(d) => d.clone(),
        None if m == 4 => benchmark::DIFFUSIVITIES.to_vec(),
        None => vec![1.0; m],
    };
    let sc = SolverConfig {
        initial_data: initial_data(cfg, &grid, m)?,
        network: net,
        diffusivities,
        grid,
        t_end: s.t_end,
        dt_init: s.dt_init,
        dt_min: s.dt_min,
        dt_max: s.dt_max,
        snapshot_interval: s.snapshot_interval,
        domain: DomainKind::Bounded,
    };
    sc.validate()?;
    Ok(sc)
}

fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    write(path, &(text + "\n"))
}

// ---------------------------------------------------------------- check

pub fn run_check(cfg: &RunConfig) -> Result<i32, Failure> {
    let net = resolve_network(&cfg.network)?;
    let opts = SearchOptions {
        budget: cfg.check.budget,
        u_max: cfg.check.u_max,
        seed: cfg.seed,
        ..SearchOptions::default()
    };
    let report = structure_report(&net, &opts);
    println!("network {} ({} species)", report.network, report.species_count);
    println!("{:<24} {:<6} {:>14}  witness", "condition", "holds", "worst margin");
    for r in report.results() {
        println!(
            "{:<24} {:<6} {:>14.6e}  {:?}",
            r.condition.label(),
            if r.holds { "yes" } else { "NO" },
            r.worst_margin,
            r.witness
        );
    }
    if let Some(m) = report.gradient_growth.fitted_constant {
        println!("fitted growth constant M = {m:.12}");
    }
    println!("entropy alternative constant C = {:.6e}", report.entropy_alt_constant.value);
    let pass = report.theorem_conditions_hold();
    println!("theorem conditions: {}", if pass { "hold" } else { "FAIL" });
    ensure_dir(&cfg.out)?;
    write_json(&cfg.out.join("check.json"), &report)?;
    Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
}

// ------------------------------------------------------------- simulate

pub fn diagnostics_csv(traj: &Trajectory, species: &[String]) -> String {
    let mut s = String::from("time,mass,entropy");
    for name in species {
        let _ = write!(s, ",c0_{name},c1_{name}");
    }
    s.push_str(",min\n");
    for d in &traj.diagnostics {
        let _ = write!(s, "{:.16e},{:.16e},{:.16e}", d.time, d.mass, d.entropy);
        for n in &d.norms {
            let _ = write!(s, ",{:.16e},{:.16e}", n.c0, n.c1);
        }
        let _ = writeln!(s, ",{:.16e}", d.min_value);
    }
    s
}

fn summary_json(traj: &Trajectory, species: &[String], wall: f64) -> serde_json::Value {
    let first = &traj.diagnostics[0];
    let last = traj.diagnostics.last().expect("at least one snapshot");
    let final_norms: Vec<_> = species
        .iter()
        .zip(&last.norms)
        .map(|(s, n)| json!({"species": s, "c0": n.c0, "c1": n.c1, "c2": n.c2}))
        .collect();
    json!({
        "network": traj.network,
        "points": traj.grid.points(),
        "t_final": traj.t_final(),
        "completed": traj.completed,
        "accepted_steps": traj.accepted_steps,
        "rejected_steps": traj.rejected_steps,
        "mass_initial": first.mass,
        "mass_final": last.mass,
        "mass_drift_rel": traj.mass_drift_rel(),
        "entropy_initial": first.entropy,
        "entropy_final": last.entropy,
        "entropy_drift_rel": (last.entropy - first.entropy) / first.entropy,
        "sup_norm": traj.sup_norm(),
        "min_value": traj.min_value(),
        "final_norms": final_norms,
        "wall_clock_s": wall,
    })
}

fn write_snapshots(cfg: &RunConfig, traj: &Trajectory) -> Result<(), Failure> {
    let n = traj.times.len();
    let picks: Vec<usize> = match cfg.output.snapshots {
        SnapshotMode::None => return Ok(()),
        SnapshotMode::Ends if n > 1 => vec![0, n - 1],
        SnapshotMode::Ends => vec![0],
        SnapshotMode::All => (0..n).collect(),
    };
    let dir = cfg.out.join("snapshots");
    ensure_dir(&dir)?;
    for k in picks {
        for (i, f) in traj.states[k].iter().enumerate() {
            let (ext, bytes) = match cfg.output.snapshot_format {
                SnapshotFormat::Csv => {
                    let mut buf = Vec::new();
                    field_io::write_csv(f, &mut buf)?;
                    ("csv", buf)
                }
                SnapshotFormat::Binary => {
                    let mut buf = Vec::new();
                    field_io::write_binary(f, &mut buf)?;
                    ("rdlf", buf)
                }
            };
            let path = dir.join(format!("u{}_{k:05}.{ext}", i + 1));
            fs::write(&path, bytes).map_err(|e| io_err(&path, e))?;
        }
    }
    Ok(())
}

fn write_plots(cfg: &RunConfig, traj: &Trajectory) -> Result<(), Failure> {
    if !cfg.output.plots {
        return Ok(());
    }
    let series = |f: &dyn Fn(&rdlab::simulator::DiagnosticRecord) -> f64| -> Vec<(f64, f64)> {
        traj.diagnostics.iter().map(|d| (d.time, f(d))).collect()
    };
    let plots = [
        ("mass.svg", "total mass", series(&|d| d.mass)),
        ("entropy.svg", "entropy", series(&|d| d.entropy)),
        (
            "sup_norm.svg",
            "sup norm",
            series(&|d| d.norms.iter().map(|n| n.c0).fold(0.0, f64::max)),
        ),
    ];
    for (file, label, points) in plots {
        let svg = svg::line_plot(label, "t", &[svg::Series { label, points }]);
        write(&cfg.out.join(file), &svg)?;
    }
    Ok(())
}

fn write_run_outputs(cfg: &RunConfig, traj: &Trajectory, species: &[String], wall: f64) -> Result<(), Failure> {
    ensure_dir(&cfg.out)?;
    write(&cfg.out.join("diagnostics.csv"), &diagnostics_csv(traj, species))?;
    write_json(&cfg.out.join("summary.json"), &summary_json(traj, species, wall))?;
    write_snapshots(cfg, traj)?;
    write_plots(cfg, traj)
}

/// Runs the simulation, writing outputs even for a partial trajectory.
fn simulate_with_outputs(cfg: &RunConfig) -> Result<Trajectory, Failure> {
    let net = resolve_network(&cfg.network)?;
    let species = net.species().to_vec();
    let sc = build_solver_config(cfg, net)?;
    let start = Instant::now();
    match simulate(sc) {
        Ok(traj) => {
            write_run_outputs(cfg, &traj, &species, start.elapsed().as_secs_f64())?;
            Ok(traj)
        }
        Err(Error::BlowupSuspected { time, dt, partial }) => {
            write_run_outputs(cfg, &partial, &species, start.elapsed().as_secs_f64())?;
            Err(Failure::Blowup(format!("step size fell to {dt:e} at t = {time}")))
        }
        Err(Error::NonFinite { time, partial }) => {
            write_run_outputs(cfg, &partial, &species, start.elapsed().as_secs_f64())?;
            Err(Failure::Blowup(format!("non-finite values at t = {time}")))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn run_simulate(cfg: &RunConfig) -> Result<i32, Failure> {
    let traj = simulate_with_outputs(cfg)?;
    println!(
        "completed t = {} in {} steps ({} rejected); mass drift {:.3e}; sup norm {:.6}",
        traj.t_final(),
        traj.accepted_steps,
        traj.rejected_steps,
        traj.mass_drift_rel(),
        traj.sup_norm()
    );
    Ok(EXIT_PASS)
}

// --------------------------------------------------------- verify-proof

pub fn run_verify_proof(cfg: &RunConfig) -> Result<i32, Failure> {
    let net = resolve_network(&cfg.network)?;
    let traj = simulate_with_outputs(cfg)?;
    let k_nominal = proof::compute_k(&net);
    let k = cfg.proof.k_scale * k_nominal;
    let diag = ProofDiagnostics::with_k(&traj, k)?;
    let k_critical = proof::critical_k(&traj, &net);
    let holds = diag.holds();
    let r = &diag.residual;
    println!("K = {k} (scale {} of {k_nominal}); reaction needs K > {k_critical:.6}", cfg.proof.k_scale);
    println!(
        "subsolution residual: worst {:.6e}, excess over tolerance {:.6e}, {:.4}% of samples above tolerance",
        r.residual.worst,
        r.excess.worst,
        100.0 * r.exceed_fraction
    );
    for (name, m) in diag.step2.margins() {
        println!("{name:<14} worst margin {:.6e} (tolerance {:.3e})", m.worst, m.tolerance);
    }
    println!(
        "feedback: max ratio {:.6}, closing ratio {:.6}",
        diag.feedback.max_ratio, diag.feedback.closing_ratio
    );
    println!("verdict: {}", if holds { "all margins within tolerance" } else { "VIOLATED" });
    write_json(
        &cfg.out.join("proof.json"),
        &json!({
            "k": k,
            "k_nominal": k_nominal,
            "k_scale": cfg.proof.k_scale,
            "k_critical": k_critical,
            "d_aux": diag.d_aux,
            "c1": diag.c1,
            "residual": diag.residual,
            "step2": diag.step2,
            "feedback": diag.feedback,
            "holds": holds,
        }),
    )?;
    Ok(if holds { EXIT_PASS } else { EXIT_FAIL })
}

// -------------------------------------------------------- verify-lemma2

/// Outcome of the lemma2 battery with the thresholds it was judged by.
#[derive(Debug, Serialize)]
pub struct Lemma2Summary {
    pub family_id: &'static str,
    pub base: lemma2::SweepMaxima,
    pub doubled: lemma2::SweepMaxima,
    /// Largest relative gap between base and doubled maxima.
    pub refinement_gap: f64,
    /// Largest max/min of the zero-data constant across amplitudes.
    pub amplitude_spread: f64,
    pub smoothing: Vec<(Vec<usize>, lemma2::SmoothingTable, f64)>,
    pub identity: lemma2::IdentityReport,
    pub passes: bool,
}

pub fn lemma2_summary(base: Resolution) -> Result<Lemma2Summary, Failure> {
    let a = lemma2::sweep_maxima(&lemma2::family_sweep(base)?);
    let b = lemma2::sweep_maxima(&lemma2::family_sweep(base.doubled())?);
    let gap = [
        (a.c_first, b.c_first),
        (a.c_second, b.c_second),
        (a.c_composed, b.c_composed),
    ]
    .iter()
    .map(|(x, y)| (x - y).abs() / x.max(*y))
    .fold(0.0, f64::max);

    let family = lemma2::standard_family();
    let mut spread: f64 = 1.0;
    for m in &family {
        for &d in &lemma2::DIFFUSIVITIES {
            for &t in &lemma2::HORIZONS {
                let s = lemma2::amplitude_sweep(m, base, d, t)?;
                let hi = s.iter().map(|x| x.1).fold(0.0, f64::max);
                let lo = s.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
                spread = spread.max(hi / lo);
            }
        }
    }

    let times = lemma2::log_times(1e-4, 1.0, 17);
    let mut smoothing = Vec::new();
    for grid in [Grid::line(1.0, 256)?, Grid::rect(1.0, 1.0, 64, 64)?] {
        let fam = lemma2::smoothing_family(&grid, 7);
        let table = lemma2::estimate_smoothing_constants(&grid, 1.0, &times, &fam)?;
        let band = table.band();
        smoothing.push((grid.points().to_vec(), table, band));
    }

    let p = lemma2::Problem::from_member(&family[0], base, 1.0, 1.0, 10.0)?;
    let identity = lemma2::optimal_k_identity(&p)?;

    let passes = a.all_finite
        && b.all_finite
        && a.composition_consistent
        && b.composition_consistent
        && gap <= 0.25
        && spread < 2.0
        && smoothing.iter().all(|(_, t, band)| *band <= 3.0 && t.c1_to_c1 <= 1.0 + 1e-9)
        && identity.max_discrepancy <= 1e-8
        && identity.max_kernel_error <= 1e-6;
    Ok(Lemma2Summary {
        family_id: lemma2::FAMILY_ID,
        base: a,
        doubled: b,
        refinement_gap: gap,
        amplitude_spread: spread,
        smoothing,
        identity,
        passes,
    })
}

pub fn run_verify_lemma2(cfg: &RunConfig, resolution: Option<usize>) -> Result<i32, Failure> {
    let base = match resolution {
        Some(n) => Resolution { points: n, steps: 2 * n },
        None => Resolution::BASE,
    };
    let s = lemma2_summary(base)?;
    println!("family {} at N = {}, {} steps", s.family_id, base.points, base.steps);
    println!(
        "max constants (base):    C1 {:.6}  C2 {:.6}  composed {:.6}",
        s.base.c_first, s.base.c_second, s.base.c_composed
    );
    println!(
        "max constants (doubled): C1 {:.6}  C2 {:.6}  composed {:.6}",
        s.doubled.c_first, s.doubled.c_second, s.doubled.c_composed
    );
    println!("refinement gap {:.4}, amplitude spread {:.6}", s.refinement_gap, s.amplitude_spread);
    for (pts, t, band) in &s.smoothing {
        println!("smoothing on {pts:?}: band {band:.4}, C1->C1 constant {:.12}", t.c1_to_c1);
    }
    println!(
        "shift identity discrepancy {:.3e}, kernel error {:.3e}",
        s.identity.max_discrepancy, s.identity.max_kernel_error
    );
    println!("verdict: {}", if s.passes { "pass" } else { "FAIL" });
    ensure_dir(&cfg.out)?;
    write_json(&cfg.out.join("lemma2.json"), &s)?;
    Ok(if s.passes { EXIT_PASS } else { EXIT_FAIL })
}

// ---------------------------------------------------------------- sweep

/// One row of the sweep table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub network: String,
    pub amplitude: f64,
    pub points: usize,
    pub t_end: f64,
    pub ok: bool,
    pub mass_drift_rel: f64,
    pub sup_norm: f64,
    pub entropy_drift_rel: f64,
    pub feedback_ratio: f64,
    pub message: String,
}

pub fn sweep_configs(cfg: &RunConfig) -> Vec<RunConfig> {
    let mut out: Vec<RunConfig> = cfg
        .sweep
        .amplitudes
        .iter()
        .map(|&a| {
            let mut c = cfg.clone();
            c.initial.amplitude = a;
            c
        })
        .collect();
    for r in &cfg.sweep.runs {
        let mut c = cfg.clone();
        if let Some(a) = r.amplitude {
            c.initial.amplitude = a;
        }
        if let Some(n) = r.points {
            c.solver.points = vec![n; c.solver.points.len().max(1)];
        }
        if let Some(t) = r.t_end {
            c.solver.t_end = t;
        }
        if let Some(n) = &r.network {
            c.network = n.clone();
        }
        out.push(c);
    }
    out
}

fn sweep_one(index: usize, cfg: &RunConfig) -> SweepRow {
    let mut row = SweepRow {
        index,
        network: cfg.network.clone(),
        amplitude: cfg.initial.amplitude,
        points: cfg.solver.points.first().copied().unwrap_or(0),
        t_end: cfg.solver.t_end,
        ok: false,
        mass_drift_rel: f64::NAN,
        sup_norm: f64::NAN,
        entropy_drift_rel: f64::NAN,
        feedback_ratio: f64::NAN,
        message: String::new(),
    };
    let result = resolve_network(&cfg.network)
        .and_then(|net| build_solver_config(cfg, net))
        .and_then(|sc| simulate(sc).map_err(Failure::from));
    match result {
        Ok(traj) => {
            let (_, w) = proof::entropy_variables(&traj, 0.0);
            let first = &traj.diagnostics[0];
            let last = traj.diagnostics.last().expect("snapshots");
            row.ok = true;
            row.mass_drift_rel = traj.mass_drift_rel();
            row.sup_norm = traj.sup_norm();
            row.entropy_drift_rel = (last.entropy - first.entropy) / first.entropy;
            row.feedback_ratio = proof::verify_feedback_19(&traj, &w).max_ratio;
        }
        Err(f) => row.message = f.message().replace([',', '\n'], ";"),
    }
    row
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(
        "index,network,amplitude,points,t_end,status,mass_drift_rel,sup_norm,entropy_drift_rel,feedback_ratio,message\n",
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{:.16e},{},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            r.index,
            r.network,
            r.amplitude,
            r.points,
            r.t_end,
            if r.ok { "ok" } else { "failed" },
            r.mass_drift_rel,
            r.sup_norm,
            r.entropy_drift_rel,
            r.feedback_ratio,
            r.message
        );
    }
    s
}

/// Runs every configuration in parallel and returns rows in input order.
pub fn run_sweep_rows(configs: &[RunConfig]) -> Vec<SweepRow> {
    configs
        .par_iter()
        .enumerate()
        .map(|(i, c)| sweep_one(i, c))
        .collect()
}

pub fn run_sweep(cfg: &RunConfig) -> Result<i32, Failure> {
    let rows = run_sweep_rows(&sweep_configs(cfg));
    ensure_dir(&cfg.out)?;
    write(&cfg.out.join("sweep.csv"), &sweep_csv(&rows))?;
    let failed = rows.iter().filter(|r| !r.ok).count();
    println!("{} runs, {} failed", rows.len(), failed);
    for r in &rows {
        println!(
            "  #{:<3} amplitude {:<8} {}",
            r.index,
            r.amplitude,
            if r.ok {
                format!("sup {:.6} feedback {:.6}", r.sup_norm, r.feedback_ratio)
            } else {
                format!("failed: {}", r.message)
            }
        );
    }
    Ok(if failed == 0 { EXIT_PASS } else { EXIT_FAIL })
}
