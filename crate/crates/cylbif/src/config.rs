//! Run configuration: flags layered over a TOML file layered over defaults.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use cylbif_core::oracle::DtnMethod;
use cylbif_core::verify::Suite;
use cylbif_core::SpaceForm;

use crate::cli::{Cli, Command, DtnMethodArg, Format, SearchArgs, SpaceArgs, WindowArgs};

pub const OUT_DIR_ENV: &str = "CYLBIF_OUT_DIR";

pub const DEFAULT_T_LO: f64 = 0.5;
pub const DEFAULT_T_HI: f64 = 200.0;
pub const DEFAULT_POINTS: usize = 200;
pub const DEFAULT_SEARCH_POINTS: usize = 512;
pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_SAMPLES: usize = 256;
pub const DEFAULT_KERNEL_TOL: f64 = 1e-8;
pub const DEFAULT_DTN_GRID: usize = 64;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<cylbif_core::Error> for CliError {
    fn from(e: cylbif_core::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// One source of settings. Both the config file and the parsed flags fill
/// this shape; keys a subcommand does not use are ignored.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub n: Option<u32>,
    pub k: Option<f64>,
    pub tlo: Option<f64>,
    pub thi: Option<f64>,
    pub points: Option<usize>,
    pub j: Option<u32>,
    pub search_points: Option<usize>,
    pub epsilon: Option<f64>,
    pub samples: Option<usize>,
    pub j_max: Option<u32>,
    pub kernel_tol: Option<f64>,
    pub t_star: Option<f64>,
    pub dtn_m: Option<usize>,
    pub dtn_mt: Option<usize>,
    pub dtn_method: Option<DtnMethodArg>,
    pub only: Option<Vec<String>>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub profile: Option<PathBuf>,
    pub dtn_csv: Option<PathBuf>,
}

macro_rules! overlay {
    ($top:expr, $bottom:expr; $($f:ident),*) => {
        Layer { $($f: $top.$f.or($bottom.$f)),* }
    };
}

impl Layer {
    pub fn from_file(path: &Path) -> Result<Layer, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| usage(format!("bad config {}: {e}", path.display())))
    }

    fn over(self, bottom: Layer) -> Layer {
        overlay!(self, bottom; n, k, tlo, thi, points, j, search_points, epsilon, samples, j_max, kernel_tol,
            t_star, dtn_m, dtn_mt, dtn_method, only, format, threads, out_dir, out, report, profile, dtn_csv)
    }

    fn space(&mut self, a: SpaceArgs) {
        self.n = a.n;
        self.k = a.k;
    }

    fn window(&mut self, a: WindowArgs) {
        self.tlo = a.tlo;
        self.thi = a.thi;
    }

    fn search(&mut self, a: SearchArgs) {
        self.search_points = a.search_points;
        self.epsilon = a.epsilon;
        self.samples = a.samples;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Eigen,
    Scan,
    Bifurcate,
    Profile,
    Verify,
}

#[derive(Debug, Clone)]
pub struct DtnDump {
    pub path: PathBuf,
    pub m: usize,
    pub m_t: usize,
    pub method: DtnMethod,
}

/// Fully resolved and validated settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub task: Task,
    pub threads: Option<usize>,
    /// `None` only for `verify`.
    pub space: Option<SpaceForm>,
    pub t_lo: f64,
    pub t_hi: f64,
    pub points: usize,
    pub j: u32,
    pub search_points: usize,
    pub epsilon: f64,
    pub samples: usize,
    pub j_max: u32,
    pub kernel_tol: f64,
    pub t_star: Option<f64>,
    pub suites: Vec<Suite>,
    pub format: Format,
    /// Primary output; `None` means stdout.
    pub out: Option<PathBuf>,
    /// Profile CSV written by `bifurcate`.
    pub profile: Option<PathBuf>,
    pub dtn: Option<DtnDump>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<RunConfig, CliError> {
        let file = match &cli.config {
            Some(p) => Layer::from_file(p)?,
            None => Layer::default(),
        };
        let env_dir = std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
        Self::resolve(cli, file, env_dir)
    }

    pub fn resolve(cli: Cli, file: Layer, env_dir: Option<PathBuf>) -> Result<RunConfig, CliError> {
        let mut flags = Layer { threads: cli.threads, out_dir: cli.out_dir, ..Layer::default() };
        let task = match cli.command {
            Command::Eigen { space, out } => {
                flags.space(space);
                flags.out = out;
                Task::Eigen
            }
            Command::Scan { space, window, points, j, out } => {
                flags.space(space);
                flags.window(window);
                flags.points = points;
                flags.j = j;
                flags.out = out;
                Task::Scan
            }
            Command::Bifurcate {
                space,
                window,
                search,
                j_max,
                kernel_tol,
                report,
                profile,
                dtn_csv,
                dtn_m,
                dtn_mt,
                dtn_method,
            } => {
                flags.space(space);
                flags.window(window);
                flags.search(search);
                flags.j_max = j_max;
                flags.kernel_tol = kernel_tol;
                flags.report = report;
                flags.profile = profile;
                flags.dtn_csv = dtn_csv;
                flags.dtn_m = dtn_m;
                flags.dtn_mt = dtn_mt;
                flags.dtn_method = dtn_method;
                Task::Bifurcate
            }
            Command::Profile { space, window, search, t_star, out } => {
                flags.space(space);
                flags.window(window);
                flags.search(search);
                flags.t_star = t_star;
                flags.out = out;
                Task::Profile
            }
            Command::Verify { only, format, out } => {
                flags.only = (!only.is_empty()).then_some(only);
                flags.format = format;
                flags.out = out;
                Task::Verify
            }
        };
        let flag_dir = flags.out_dir.take();
        let l = flags.over(file);
        let out_dir = flag_dir.or(env_dir).or(l.out_dir.clone()).unwrap_or_else(|| PathBuf::from("."));
        Self::validate(task, l, out_dir)
    }

    fn validate(task: Task, l: Layer, out_dir: PathBuf) -> Result<RunConfig, CliError> {
        if l.threads == Some(0) {
            return Err(usage("--threads must be at least 1"));
        }
        let space = if task == Task::Verify {
            None
        } else {
            let n = l.n.ok_or_else(|| usage("missing --n"))?;
            let k = l.k.ok_or_else(|| usage("missing --k"))?;
            Some(SpaceForm::new(n, k).map_err(|e| usage(e.to_string()))?)
        };

        let t_lo = l.tlo.unwrap_or(DEFAULT_T_LO);
        let t_hi = l.thi.unwrap_or(DEFAULT_T_HI);
        if !(t_lo > 0.0 && t_hi > t_lo && t_hi.is_finite()) {
            return Err(usage(format!("need 0 < tlo < thi < inf, got tlo = {t_lo}, thi = {t_hi}")));
        }
        let points = l.points.unwrap_or(DEFAULT_POINTS);
        if points < 2 {
            return Err(usage(format!("--points must be at least 2, got {points}")));
        }
        let j = l.j.unwrap_or(1);
        let j_max = l.j_max.unwrap_or(cylbif_core::bifurcation::DEFAULT_J_MAX);
        if j == 0 || j_max == 0 {
            return Err(usage("mode indices start at 1"));
        }
        let search_points = l.search_points.unwrap_or(DEFAULT_SEARCH_POINTS);
        if search_points < 8 {
            return Err(usage(format!("--search-points must be at least 8, got {search_points}")));
        }
        let epsilon = l.epsilon.unwrap_or(DEFAULT_EPSILON);
        if !(0.0..0.5).contains(&epsilon) {
            return Err(usage(format!("--epsilon must lie in [0, 0.5), got {epsilon}")));
        }
        let samples = l.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples < 8 {
            return Err(usage(format!("--samples must be at least 8, got {samples}")));
        }
        let kernel_tol = l.kernel_tol.unwrap_or(DEFAULT_KERNEL_TOL);
        if !(kernel_tol > 0.0 && kernel_tol.is_finite()) {
            return Err(usage(format!("--kernel-tol must be positive, got {kernel_tol}")));
        }
        if let Some(t) = l.t_star {
            if !(t > 0.0 && t.is_finite()) {
                return Err(usage(format!("--t-star must be positive, got {t}")));
            }
        }

        let suites = match &l.only {
            None => Suite::ALL.to_vec(),
            Some(names) => names
                .iter()
                .map(|s| {
                    Suite::from_name(s.trim()).ok_or_else(|| {
                        let known: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                        usage(format!("unknown suite '{s}'; known: {}", known.join(", ")))
                    })
                })
                .collect::<Result<_, _>>()?,
        };

        let dtn_m = l.dtn_m.unwrap_or(DEFAULT_DTN_GRID);
        let dtn_mt = l.dtn_mt.unwrap_or(DEFAULT_DTN_GRID);
        let method = match l.dtn_method.unwrap_or(DtnMethodArg::PerMode) {
            DtnMethodArg::PerMode => DtnMethod::PerMode,
            DtnMethodArg::Coupled => DtnMethod::Coupled,
        };

        let wants_files = l.out.is_some() || (task == Task::Bifurcate);
        if wants_files && !out_dir.exists() {
            std::fs::create_dir_all(&out_dir)
                .map_err(|e| usage(format!("cannot create output directory {}: {e}", out_dir.display())))?;
        }
        let out_key = if task == Task::Bifurcate { l.report } else { l.out };
        let out = out_key.map(|p| output_path(&out_dir, p)).transpose()?;
        let (profile, dtn) = if task == Task::Bifurcate {
            let sf = space.as_ref().expect("bifurcate has a space form");
            let name = PathBuf::from(format!("profile_n{}_k{}.csv", sf.n(), sf.k()));
            let profile = output_path(&out_dir, l.profile.unwrap_or(name))?;
            let dtn = match l.dtn_csv {
                Some(p) => {
                    if dtn_m < 16 || dtn_mt < 16 || !dtn_mt.is_multiple_of(2) {
                        return Err(usage(format!("DtN grid needs m >= 16 and even m_t >= 16, got {dtn_m} x {dtn_mt}")));
                    }
                    Some(DtnDump { path: output_path(&out_dir, p)?, m: dtn_m, m_t: dtn_mt, method })
                }
                None => None,
            };
            (Some(profile), dtn)
        } else {
            (None, None)
        };

        Ok(RunConfig {
            task,
            threads: l.threads,
            space,
            t_lo,
            t_hi,
            points,
            j,
            search_points,
            epsilon,
            samples,
            j_max,
            kernel_tol,
            t_star: l.t_star,
            suites,
            format: l.format.unwrap_or(Format::Table),
            out,
            profile,
            dtn,
        })
    }
}

/// Resolve `p` against `dir` and check that it can be written.
fn output_path(dir: &Path, p: PathBuf) -> Result<PathBuf, CliError> {
    let path = if p.is_absolute() { p } else { dir.join(p) };
    if path.is_dir() {
        return Err(usage(format!("output path {} is a directory", path.display())));
    }
    let parent = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let meta = std::fs::metadata(&parent)
        .map_err(|e| usage(format!("output directory {} is not accessible: {e}", parent.display())))?;
    if !meta.is_dir() || meta.permissions().readonly() {
        return Err(usage(format!("output directory {} is not writable", parent.display())));
    }
    Ok(path)
}
