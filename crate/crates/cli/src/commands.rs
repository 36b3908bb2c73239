//! Command implementations. Workers run over immutable inputs and the
//! orchestrator writes every output file once, after the parallel phase
//! completes, so outputs do not depend on the worker count.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use thetapress_core::classical::{classical_pressure, sup_spanning};
use thetapress_core::config::{ConfigError, MeasureSpec, RunConfig};
use thetapress_core::harness::{built_in_battery, run_suite, CheckParams, ALL_CHECKS};
use thetapress_core::measure::{
    measure_pressure_profile, variational_inf_check, variational_sup_check, DiscreteMeasure,
};
use thetapress_core::{
    pressure_profile, sweep_cap, CoverError, NdsSystem, PointSet, PressureProfile, ProfileParams,
    Theta,
};

use crate::emit;

/// Process exit classification: 1 = a hard assertion failed, 2 = bad
/// configuration, 3 = infeasible or exploding computation.
#[derive(Debug)]
pub enum AppError {
    Config(String),
    Compute(String),
    ChecksFailed,
}

impl AppError {
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::ChecksFailed => 1,
            AppError::Config(_) => 2,
            AppError::Compute(_) => 3,
        }
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Config(m) => write!(f, "configuration error: {m}"),
            AppError::Compute(m) => write!(f, "computation failed: {m}"),
            AppError::ChecksFailed => write!(f, "hard assertions failed"),
        }
    }
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        AppError::Config(e.to_string())
    }
}

impl From<CoverError> for AppError {
    fn from(e: CoverError) -> Self {
        AppError::Compute(e.to_string())
    }
}

impl From<thetapress_core::SystemError> for AppError {
    fn from(e: thetapress_core::SystemError) -> Self {
        AppError::Config(e.to_string())
    }
}

fn io_err(path: &Path, e: std::io::Error) -> AppError {
    AppError::Config(format!("cannot write {}: {e}", path.display()))
}

/// Values of the global flags after merging with the config file.
pub struct Overrides {
    pub out: PathBuf,
    pub solver: Option<thetapress_core::SolverKind>,
    pub tol: Option<f64>,
    pub jobs: usize,
    pub seed: Option<u64>,
}

pub struct Run {
    pub config: RunConfig,
    pub base_dir: PathBuf,
    pub out: PathBuf,
    pub jobs: usize,
}

pub fn prepare(config_path: &Path, ov: Overrides) -> Result<Run, AppError> {
    let (mut config, base_dir) = RunConfig::load(config_path)?;
    if let Some(solver) = ov.solver {
        config.solver = match solver {
            thetapress_core::SolverKind::Exact => thetapress_core::config::SolverSpec::Exact,
            thetapress_core::SolverKind::Greedy => thetapress_core::config::SolverSpec::Greedy,
            thetapress_core::SolverKind::Auto => thetapress_core::config::SolverSpec::Auto,
        };
    }
    if let Some(tol) = ov.tol {
        if !(tol >= 0.0) {
            return Err(AppError::Config("tol must be non-negative".to_string()));
        }
        config.tol = tol;
    }
    if let Some(seed) = ov.seed {
        config.seed = seed;
    }
    Ok(Run { config, base_dir, out: ov.out, jobs: ov.jobs.max(1) })
}

fn profile_params(config: &RunConfig, theta: Theta) -> ProfileParams {
    ProfileParams {
        theta,
        n_lo: config.n_window[0],
        n_hi: config.n_window[1],
        theta_zero_cap: config.theta_zero_cap,
        solver: config.solver.into(),
        tol: config.tol,
        mode: config.mode.into(),
        candidate_limit: thetapress_core::DEFAULT_CANDIDATE_LIMIT,
    }
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool construction");
    pool.install(f)
}

/// Sweep profiles for every `(epsilon, theta)` cell, in ladder-major
/// order. Cells are independent pure functions; the worker count cannot
/// change any bit of the result.
fn all_profiles(
    run: &Run,
    sys: &NdsSystem,
    z: &PointSet,
) -> Result<Vec<(f64, PressureProfile)>, AppError> {
    let grid = run.config.theta_grid.clone();
    let base = profile_params(&run.config, Theta::one());
    let cap = sweep_cap(&grid, &base);
    let mut cells: Vec<(f64, Theta)> = Vec::new();
    for &eps in &run.config.epsilons {
        for &theta in &grid {
            cells.push((eps, theta));
        }
    }
    let results: Result<Vec<(f64, PressureProfile)>, CoverError> = with_pool(run.jobs, || {
        cells
            .par_iter()
            .map(|&(eps, theta)| {
                let params = ProfileParams {
                    theta,
                    theta_zero_cap: Some(cap),
                    ..profile_params(&run.config, theta)
                };
                pressure_profile(sys, z, eps, &params).map(|p| (eps, p))
            })
            .collect()
    });
    Ok(results?)
}

pub fn cmd_pressure(run: &Run) -> Result<(), AppError> {
    let sys = run.config.build_system(&run.base_dir)?;
    let z = run.config.z.build(sys.points())?;
    log::info!(
        "pressure: {} points, |Z| = {}, {} thetas, {} epsilons, window [{}, {}]",
        sys.points(),
        z.len(),
        run.config.theta_grid.len(),
        run.config.epsilons.len(),
        run.config.n_window[0],
        run.config.n_window[1]
    );
    let profiles = all_profiles(run, &sys, &z)?;

    let ladder = emit::csv_document(emit::ALPHA_LADDER_HEADER, &emit::alpha_ladder_rows(&profiles));
    let ladder_path = run.out.join("alpha_ladder.csv");
    emit::write_text(&ladder_path, &ladder).map_err(|e| io_err(&ladder_path, e))?;

    // the summary and the plot use the finest (last, smallest) epsilon
    let finest = *run.config.epsilons.last().expect("validated nonempty");
    let finest_profiles: Vec<PressureProfile> = profiles
        .iter()
        .filter(|(e, _)| *e == finest)
        .map(|(_, p)| p.clone())
        .collect();
    let summary = emit::csv_document(
        emit::PROFILES_HEADER,
        &emit::profile_summary_rows(&finest_profiles),
    );
    let summary_path = run.out.join("profiles.csv");
    emit::write_text(&summary_path, &summary).map_err(|e| io_err(&summary_path, e))?;

    let thetas: Vec<Theta> = finest_profiles.iter().map(|p| p.theta).collect();
    let lowers: Vec<f64> = finest_profiles.iter().map(|p| p.lower()).collect();
    let uppers: Vec<f64> = finest_profiles.iter().map(|p| p.upper()).collect();
    let svg = emit::pressure_svg(&thetas, &lowers, &uppers);
    let svg_path = run.out.join("pressure_vs_theta.svg");
    emit::write_text(&svg_path, &svg).map_err(|e| io_err(&svg_path, e))?;

    println!(
        "wrote {}, {}, {}",
        ladder_path.display(),
        summary_path.display(),
        svg_path.display()
    );
    Ok(())
}

pub fn cmd_classical(run: &Run) -> Result<(), AppError> {
    let sys = run.config.build_system(&run.base_dir)?;
    let z = run.config.z.build(sys.points())?;
    let [n_lo, n_hi] = run.config.n_window;
    let solver = run.config.solver.into();
    let report = classical_pressure(&sys, &z, &run.config.epsilons, n_lo, n_hi, solver)?;
    let mut sup_rows = Vec::new();
    for &eps in &run.config.epsilons {
        for n in n_lo..=n_hi {
            let r = sup_spanning(&sys, &z, n, eps, solver)?;
            sup_rows.push((n, eps, r.value, r.witness.len()));
        }
    }
    let doc = emit::csv_document(emit::CLASSICAL_HEADER, &emit::classical_rows(&report, &sup_rows));
    let path = run.out.join("classical.csv");
    emit::write_text(&path, &doc).map_err(|e| io_err(&path, e))?;
    for (eps, q, p) in &report.surrogates {
        println!("epsilon {eps}: limsup (1/n) log Q = {q}, limsup (1/n) log P = {p}");
    }
    println!("wrote {}", path.display());
    Ok(())
}

pub fn cmd_measure(run: &Run) -> Result<(), AppError> {
    let sys = run.config.build_system(&run.base_dir)?;
    let z = run.config.z.build(sys.points())?;
    let spec = run.config.measure.clone().unwrap_or(MeasureSpec::Uniform);
    let measures: Vec<(String, DiscreteMeasure)> = vec![
        ("configured".to_string(), spec.build(sys.points(), &z)?),
        ("uniform".to_string(), DiscreteMeasure::uniform_on(sys.points(), &z)?),
        ("geometric".to_string(), DiscreteMeasure::geometric_on(sys.points(), &z)?),
    ];

    let mut rows = Vec::new();
    for &eps in &run.config.epsilons {
        for &theta in &run.config.theta_grid {
            let params = profile_params(&run.config, theta);
            for (label, mu) in &measures {
                let profile = measure_pressure_profile(&sys, mu, eps, &params)?;
                for s in &profile.scales {
                    rows.push(format!(
                        "{label},{theta},{eps},{},{},{},{}",
                        s.scale,
                        s.alpha,
                        profile.lower(),
                        profile.upper()
                    ));
                }
            }
        }
    }
    let doc = emit::csv_document(emit::MEASURE_HEADER, &rows);
    let path = run.out.join("measure.csv");
    emit::write_text(&path, &doc).map_err(|e| io_err(&path, e))?;
    println!("wrote {}", path.display());

    // variational checks at the mid-grid theta and finest epsilon
    let theta = run.config.theta_grid[run.config.theta_grid.len() / 2];
    let eps = *run.config.epsilons.last().expect("validated nonempty");
    let params = profile_params(&run.config, theta);
    let mut failed = false;
    let sup = variational_sup_check(&sys, &z, eps, &params, run.config.random_measures, run.config.seed)?;
    println!(
        "variational sup check: worst gap {:.3e} (allowed {:.3e}) over {} measures -> {}",
        sup.worst_gap,
        sup.allowed,
        sup.cases,
        if sup.pass { "pass" } else { "FAIL" }
    );
    failed |= !sup.pass;
    let mu = spec.build(sys.points(), &z)?;
    let inf = variational_inf_check(&sys, &mu, eps, &params, 256, run.config.seed)?;
    println!(
        "variational inf check: worst gap {:.3e} (allowed {:.3e}) over {} supersets -> {}",
        inf.worst_gap,
        inf.allowed,
        inf.cases,
        if inf.pass { "pass" } else { "FAIL" }
    );
    failed |= !inf.pass;
    if failed {
        return Err(AppError::ChecksFailed);
    }
    Ok(())
}

pub fn cmd_verify(run: &Run) -> Result<(), AppError> {
    let suite = run.config.suite.clone().unwrap_or_else(|| thetapress_core::config::SuiteSpec {
        instances: Vec::new(),
        checks: None,
        theta: None,
    });
    let mut battery = Vec::new();
    if suite.instances.is_empty() {
        battery = built_in_battery();
    } else {
        for spec in &suite.instances {
            battery.extend(spec.build(&run.base_dir)?);
        }
    }
    let checks = suite.checks.unwrap_or_else(|| ALL_CHECKS.to_vec());
    let params = CheckParams {
        theta: suite.theta.unwrap_or(Theta::new(1, 2)),
        theta_grid: run.config.theta_grid.clone(),
        n_lo: run.config.n_window[0],
        n_hi: run.config.n_window[1],
        tol: run.config.tol,
        solver: run.config.solver.into(),
        seed: run.config.seed,
    };
    log::info!("verify: {} instances, {} checks", battery.len(), checks.len());
    let report = with_pool(run.jobs, || run_suite(&battery, &checks, &params));

    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| AppError::Compute(format!("report serialization: {e}")))?;
    let path = run.out.join("verify_report.json");
    emit::write_text(&path, &json).map_err(|e| io_err(&path, e))?;

    println!("{:<24} {:>9} {:>7} {:>13}  worst gap", "check", "instances", "passes", "fails");
    for r in &report.reports {
        println!(
            "{:<24} {:>9} {:>7} {:>13}  {:.3e}",
            r.name,
            r.instances,
            r.passes,
            r.failures(),
            r.worst_gap
        );
        for d in &r.details {
            if !d.pass {
                println!("    FAIL {} on {}: gap {:.6e} > allowed {:.6e} {}", d.name, d.instance, d.gap, d.allowed, d.note);
            }
        }
    }
    println!("wrote {}", path.display());
    if report.pass {
        println!("suite: PASS");
        Ok(())
    } else {
        println!("suite: FAIL");
        Err(AppError::ChecksFailed)
    }
}

pub fn cmd_schema() {
    println!("{}", thetapress_core::config::SCHEMA_TEXT);
}
