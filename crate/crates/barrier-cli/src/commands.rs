//! Implementations of the four subcommands.
//!
//! Every command returns `Ok(exit_code)` once it has printed its output;
//! hard errors propagate as `Err` and the caller maps them to the
//! process exit code (2 for configuration mistakes, 1 otherwise).

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use barrier_times::checks::run_all;
use barrier_times::delay::DelayTimes;
use barrier_times::scattering::{continuity_residual, transfer_matrix_amplitudes, Side};
use barrier_times::tdse::{self, SimConfig};
use barrier_times::{BarrierSpec, Error, Result, ScatteringSet};

use crate::config::parse_run_file;

/// First line of every sweep CSV; bump the trailing number when the column
/// set changes.
pub const CSV_SCHEMA: &str = "# schema: barrier-times sweep v1";

/// Column order of the sweep CSV.
pub const CSV_HEADER: &str =
    "n,alpha,tau_k,tT_std,tT_plus,tT_minus,tD_plus,tD_minus,tI_plus,tI_minus";

/// Environment variable capping the sweep worker count.
pub const THREADS_ENV: &str = "BARRIER_TIMES_THREADS";

/// Delay-time sweep over an energy-fraction grid, written as CSV.
pub fn times(
    wl: f64,
    n_min: f64,
    n_max: f64,
    steps: usize,
    normalize: bool,
    out: Option<&Path>,
) -> Result<i32> {
    if !(n_min.is_finite() && n_max.is_finite() && 0.0 < n_min && n_min < n_max && n_max < 1.0) {
        return Err(Error::Config(format!(
            "energy-fraction range must satisfy 0 < n-min < n-max < 1, got [{n_min}, {n_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::Config(format!("steps must be at least 2, got {steps}")));
    }
    let barrier = BarrierSpec::from_strength(wl)?;

    let fractions: Vec<f64> = (0..steps)
        .map(|j| n_min + (n_max - n_min) * j as f64 / (steps - 1) as f64)
        .collect();

    // A local pool, so the cap applies to this sweep without touching the
    // global one; row order is fixed by the collect, so the byte output is
    // independent of the worker count.
    let pool = build_pool()?;
    let rows: Result<Vec<DelayTimes>> = pool.install(|| {
        fractions
            .par_iter()
            .map(|&n| {
                let times = DelayTimes::compute(&barrier, barrier.momentum_for_fraction(n))?;
                Ok(if normalize { times.normalized() } else { times })
            })
            .collect()
    });
    let rows = rows?;

    let mut text = String::new();
    text.push_str(CSV_SCHEMA);
    text.push('\n');
    text.push_str(CSV_HEADER);
    text.push('\n');
    for t in &rows {
        text.push_str(&format!(
            "{:.14e},{:.14e},{:.14e},{:.14e},{:.14e},{:.14e},{:.14e},{:.14e},{:.14e},{:.14e}\n",
            t.energy_fraction,
            t.opacity,
            t.traversal_time,
            t.phase_standard,
            t.phase_plus,
            t.phase_minus,
            t.dwell_plus,
            t.dwell_minus,
            t.interference_plus,
            t.interference_minus,
        ));
    }

    match out {
        Some(path) => write_atomically(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(0)
}

/// Scattering amplitudes and phases at one grid point, as key=value lines.
pub fn amplitudes(wl: f64, n: f64, oracle: bool) -> Result<i32> {
    if !(n.is_finite() && 0.0 < n && n < 1.0) {
        return Err(Error::Config(format!(
            "energy fraction must lie strictly between 0 and 1, got {n}"
        )));
    }
    let barrier = BarrierSpec::from_strength(wl)?;
    let k = barrier.momentum_for_fraction(n);
    let kin = barrier.kinematics(k)?;
    let set = ScatteringSet::compute(&barrier, k)?;

    println!("wL = {wl:.17e}");
    println!("n = {n:.17e}");
    println!("k = {:.17e}", set.momentum);
    println!("rho = {:.17e}", kin.decay_constant);
    println!("alpha = {:.17e}", kin.opacity);
    println!("R_re = {:.17e}", set.reflection.re);
    println!("R_im = {:.17e}", set.reflection.im);
    println!("T_re = {:.17e}", set.transmission.re);
    println!("T_im = {:.17e}", set.transmission.im);
    println!("R_abs = {:.17e}", set.reflection.norm());
    println!("T_abs = {:.17e}", set.transmission.norm());
    let unitarity_gap =
        (set.reflection.norm_sqr() + set.transmission.norm_sqr() - 1.0).abs();
    println!("unitarity_gap = {unitarity_gap:.3e}");
    println!("phase_T = {:.17e}", set.transmission_phase);
    println!("phase_plus = {:.17e}", set.combined_phase_plus);
    println!("phase_minus = {:.17e}", set.combined_phase_minus);

    if oracle {
        // Independent routes to the same amplitudes: the interface transfer
        // matrix, and the piecewise solution's matching residuals.
        let (r_tm, t_tm) = transfer_matrix_amplitudes(&barrier, k)?;
        println!("transfer_R_gap = {:.3e}", (r_tm - set.reflection).norm());
        println!("transfer_T_gap = {:.3e}", (t_tm - set.transmission).norm());
        println!(
            "continuity_left = {:.3e}",
            continuity_residual(&barrier, k, Side::Left)?
        );
        println!(
            "continuity_right = {:.3e}",
            continuity_residual(&barrier, k, Side::Right)?
        );
    }
    Ok(0)
}

/// Propagate a wave packet described by a JSON config file and report the
/// measured delay against the stationary predictions.
pub fn simulate(config_path: &Path, out: Option<&Path>) -> Result<i32> {
    let text = std::fs::read_to_string(config_path).map_err(|e| {
        Error::Config(format!("cannot read {}: {e}", config_path.display()))
    })?;
    let mut file = parse_run_file(&text)?;
    // Snapshots are pay-for-use: only record them when they will be kept.
    if out.is_some() && file.snapshot_every.is_none() {
        file.snapshot_every = Some(file.sample_every);
    }
    let config: SimConfig = file.into_sim_config()?;

    let output = tdse::run(&config)?;
    let report = tdse::analyze(&config, &output)?;

    println!("crossing_time = {:.6}", report.crossing_time);
    println!("outgoing_velocity = {:.6}", report.outgoing_velocity);
    println!("free_flight_reference = {:.6}", report.free_flight_reference);
    println!("measured_delay = {:.6}", report.measured_delay);
    println!("dynamic_dwell = {:.6}", report.dynamic_dwell);
    println!("norm_drift = {:.3e}", report.norm_drift);
    println!("max_parity_deviation = {:.3e}", report.max_parity_deviation);
    if let Some(p) = &report.predicted {
        println!("predicted_phase_time = {:.6}", p.phase_time);
        println!("predicted_dwell_time = {:.6}", p.dwell_time);
        println!("traversal_time = {:.6}", p.traversal_time);
        println!(
            "delay_rel_deviation = {:.4}",
            (report.measured_delay / p.phase_time - 1.0).abs()
        );
        println!(
            "dwell_rel_deviation = {:.4}",
            (report.dynamic_dwell / p.dwell_time - 1.0).abs()
        );
    }

    if let Some(path) = out {
        let mut bytes = Vec::new();
        output.snapshots.write_to(&mut bytes)?;
        write_atomically(path, &bytes)?;
        println!("snapshots = {}", path.display());
    }
    Ok(0)
}

/// Run the internal consistency checks and print one line per check.
pub fn check(fast: bool) -> Result<i32> {
    let results = run_all(fast)?;
    let mut failures = Vec::new();
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {:<28} worst {:.3e}  tol {:.1e}  {:>8.1} ms  at {}",
            r.name, r.worst, r.tolerance, r.elapsed_ms, r.detail
        );
        if !r.passed {
            failures.push(r.name);
        }
    }
    if failures.is_empty() {
        println!("all {} checks passed", results.len());
        Ok(0)
    } else {
        println!("{} of {} checks failed, first: {}", failures.len(), results.len(), failures[0]);
        Ok(1)
    }
}

/// Local rayon pool sized by `BARRIER_TIMES_THREADS` when set.
fn build_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let count: usize = raw.parse().map_err(|_| {
            Error::Config(format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))
        })?;
        if count == 0 {
            return Err(Error::Config(format!("{THREADS_ENV} must be at least 1")));
        }
        builder = builder.num_threads(count);
    }
    builder
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))
}

/// Write through a temporary file in the destination directory, then rename,
/// so a crash never leaves a half-written file behind.
fn write_atomically(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir: PathBuf = match path.parent() {
        Some(p) if p.as_os_str().is_empty() => PathBuf::from("."),
        Some(p) => p.to_path_buf(),
        None => PathBuf::from("."),
    };
    let io = |e: std::io::Error| Error::Config(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path)
        .map_err(|e| Error::Config(format!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}
