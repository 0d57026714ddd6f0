use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use cylbif_core::bifurcation::{
    bifurcate_with, domain_profile, find_sigma_zeros_batched, select_t_star, sigma_fn, BifurcationOptions, ZeroSearchOptions,
};
use cylbif_core::dispersion::{log_grid, DispersionCurve, DispersionSample};
use cylbif_core::oracle::fd_dtn_matrix;
use cylbif_core::spectral::{ground_state, GroundState};
use cylbif_core::verify::{run_task, tasks, Check, Status, DEFAULT_CASES};
use cylbif_core::{Error, Result as CoreResult, SpaceForm};

use crate::cli::Format;
use crate::config::{CliError, RunConfig, Task};
use crate::format;

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    match cfg.task {
        Task::Eigen => cmd_eigen(cfg),
        Task::Scan => cmd_scan(cfg),
        Task::Bifurcate => cmd_bifurcate(cfg),
        Task::Profile => cmd_profile(cfg),
        Task::Verify => cmd_verify(cfg),
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn space(cfg: &RunConfig) -> &SpaceForm {
    cfg.space.as_ref().expect("validated config carries a space form")
}

fn setup(cfg: &RunConfig) -> Result<(SpaceForm, GroundState), CliError> {
    let sf = *space(cfg);
    let gs = ground_state(&sf)?;
    Ok((sf, gs))
}

/// Evaluate `f` on every period in parallel, keeping input order.
fn parallel_eval<F: Fn(f64) -> CoreResult<f64> + Sync>(f: F) -> impl FnMut(&[f64]) -> Vec<CoreResult<f64>> {
    move |ts: &[f64]| ts.par_iter().map(|&t| f(t)).collect()
}

fn search_options(cfg: &RunConfig) -> ZeroSearchOptions {
    ZeroSearchOptions { initial_points: cfg.search_points, ..ZeroSearchOptions::default() }
}

pub fn cmd_eigen(cfg: &RunConfig) -> Result<(), CliError> {
    let (_, gs) = setup(cfg)?;
    emit(cfg.out.as_deref(), &format::json(&format::EigenSummary::from(&gs)))
}

pub fn cmd_scan(cfg: &RunConfig) -> Result<(), CliError> {
    let (sf, gs) = setup(cfg)?;
    let grid = log_grid(cfg.t_lo, cfg.t_hi, cfg.points)?;
    let samples: Vec<DispersionSample> = grid.par_iter().map(|&t| DispersionSample::evaluate(&gs, &sf, t, cfg.j)).collect();
    let curve = DispersionCurve { n: sf.n(), k: sf.k(), j: cfg.j, samples };
    emit(cfg.out.as_deref(), &format::scan_csv(&curve))?;
    for p in curve.samples.iter().filter(|p| p.error.is_some()) {
        eprintln!("T = {}: {}", p.t, p.error.as_deref().unwrap_or_default());
    }
    let bad = curve.samples.iter().filter(|p| !p.agree).count();
    if bad > 0 {
        return Err(CliError::Numerical(format!("routes disagree at {bad} of {} periods", curve.samples.len())));
    }
    Ok(())
}

pub fn cmd_bifurcate(cfg: &RunConfig) -> Result<(), CliError> {
    let (sf, gs) = setup(cfg)?;
    let opts = BifurcationOptions {
        t_lo: cfg.t_lo,
        t_hi: cfg.t_hi,
        j_max: cfg.j_max,
        kernel_rel_tol: cfg.kernel_tol,
        search: search_options(cfg),
    };
    let mut many = parallel_eval(sigma_fn(&gs, &sf));
    let report = bifurcate_with(&gs, &sf, &opts, &mut many)?;
    let profile = domain_profile(&sf, report.t_star, cfg.epsilon, cfg.samples)?;
    if let Some(path) = &cfg.profile {
        emit(Some(path), &format::profile_csv(&profile))?;
    }
    if let Some(d) = &cfg.dtn {
        let m = fd_dtn_matrix(&gs, &sf, report.t_star, d.m, d.m_t, d.method)?;
        emit(Some(&d.path), &format::dtn_csv(&m))?;
    }
    emit(cfg.out.as_deref(), &format::json(&format::ReportRecord::new(&report, &profile)))
}

pub fn cmd_profile(cfg: &RunConfig) -> Result<(), CliError> {
    let sf = *space(cfg);
    let t_star = match cfg.t_star {
        Some(t) => t,
        None => {
            let gs = ground_state(&sf)?;
            let mut many = parallel_eval(sigma_fn(&gs, &sf));
            let search = find_sigma_zeros_batched(&mut many, cfg.t_lo, cfg.t_hi, &search_options(cfg))?;
            select_t_star(&search.zeros).ok_or(Error::NoSignChange { what: "sigma", lo: search.t_lo, hi: search.t_hi })?
        }
    };
    let profile = domain_profile(&sf, t_star, cfg.epsilon, cfg.samples)?;
    emit(cfg.out.as_deref(), &format::profile_csv(&profile))
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<(), CliError> {
    let work = tasks(&cfg.suites, &DEFAULT_CASES);
    let checks: Vec<Check> = work.par_iter().map(run_task).collect::<Vec<_>>().into_iter().flatten().collect();
    let text = match cfg.format {
        Format::Json => format::checks_json(&checks),
        Format::Table => format::checks_table(&checks),
    };
    emit(cfg.out.as_deref(), &text)?;
    let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
    if failed > 0 {
        return Err(CliError::Numerical(format!("{failed} of {} checks failed", checks.len())));
    }
    Ok(())
}
