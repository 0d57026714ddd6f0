//! JSON and CSV encodings of core results.

use std::fmt::Write as _;

use serde::ser::Serializer;
use serde::Serialize;

use cylbif_core::bifurcation::{BifurcationReport, DomainProfile, Parity};
use cylbif_core::dispersion::DispersionCurve;
use cylbif_core::oracle::DtnMatrix;
use cylbif_core::spectral::GroundState;
use cylbif_core::verify::Check;

/// Round-trip float text for CSV: 17 significant digits, '.' decimal.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Serialize)]
pub struct EigenSummary {
    pub n: u32,
    pub k: f64,
    pub lambda1: f64,
    pub s: f64,
    pub dphi1: f64,
    pub ddphi1: f64,
    pub norm_residual: f64,
}

impl From<&GroundState> for EigenSummary {
    fn from(g: &GroundState) -> Self {
        EigenSummary {
            n: g.n,
            k: g.k,
            lambda1: g.lambda1,
            s: g.s,
            dphi1: g.dphi1,
            ddphi1: g.ddphi1,
            norm_residual: g.norm_residual,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ZeroRecord {
    pub t: f64,
    /// `sign-change` or `suspected-tangential`.
    pub kind: &'static str,
    pub width: f64,
    pub residual: f64,
}

#[derive(Debug, Serialize)]
pub struct KernelRecord {
    pub j_max: u32,
    pub positive_at_j_max: bool,
    pub sigma: Vec<f64>,
    pub tolerance: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct ProfileSummary {
    pub order: &'static str,
    pub epsilon: f64,
    pub samples: usize,
    pub mean_deviation: f64,
    pub evenness_defect: f64,
}

#[derive(Debug, Serialize)]
pub struct ReportRecord {
    pub n: u32,
    pub k: f64,
    pub lambda1: f64,
    #[serde(rename = "T_star")]
    pub t_star: f64,
    pub window: [f64; 2],
    pub zeros: Vec<ZeroRecord>,
    pub kernel_modes: Vec<u32>,
    pub kernel: KernelRecord,
    #[serde(serialize_with = "ordered_map")]
    pub parity: Vec<(String, &'static str)>,
    pub profile: ProfileSummary,
}

fn ordered_map<S: Serializer>(pairs: &[(String, &'static str)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(pairs.iter().map(|(k, v)| (k, v)))
}

pub fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Changes => "changes",
        Parity::DoesNotChange => "does-not-change",
        Parity::Indeterminate => "indeterminate",
    }
}

impl ReportRecord {
    pub fn new(r: &BifurcationReport, profile: &DomainProfile) -> Self {
        ReportRecord {
            n: r.n,
            k: r.k,
            lambda1: r.lambda1,
            t_star: r.t_star,
            window: [r.search.t_lo, r.search.t_hi],
            zeros: r
                .search
                .zeros
                .iter()
                .map(|z| ZeroRecord {
                    t: z.t,
                    kind: if z.sign_change { "sign-change" } else { "suspected-tangential" },
                    width: z.width,
                    residual: z.residual,
                })
                .collect(),
            kernel_modes: r.kernel.modes.clone(),
            kernel: KernelRecord {
                j_max: r.kernel.j_max,
                positive_at_j_max: r.kernel.positive_at_j_max,
                sigma: r.kernel.values.clone(),
                tolerance: r.kernel.tolerances.clone(),
            },
            parity: r.parity.iter().map(|&(j, p)| (j.to_string(), parity_name(p))).collect(),
            profile: ProfileSummary {
                order: "linear",
                epsilon: profile.epsilon,
                samples: profile.samples.len(),
                mean_deviation: profile.mean_deviation(),
                evenness_defect: profile.evenness_defect(),
            },
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain records serialize");
    s.push('\n');
    s
}

pub const SCAN_HEADER: &str = "n,k,j,T,sigma_ode,sigma_cf,sigma_reduced,nu_star_re,nu_star_im,agree_flag";

pub fn scan_csv(c: &DispersionCurve) -> String {
    let mut s = String::from(SCAN_HEADER);
    s.push('\n');
    for p in &c.samples {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            c.n,
            c.k,
            p.j,
            num(p.t),
            num(p.sigma_ode),
            num(p.sigma_cf),
            num(p.sigma_reduced),
            num(p.nu_star.re),
            num(p.nu_star.im),
            p.agree
        );
    }
    s
}

pub fn profile_csv(p: &DomainProfile) -> String {
    let mut s = String::from("t,rho\n");
    for &(t, r) in &p.samples {
        let _ = writeln!(s, "{},{}", num(t), num(r));
    }
    s
}

/// Long format: one row per entry, indexed by cosine mode.
pub fn dtn_csv(d: &DtnMatrix) -> String {
    let mut s = String::from("row_mode,col_mode,value\n");
    for (i, &ji) in d.modes.iter().enumerate() {
        for (c, &jc) in d.modes.iter().enumerate() {
            let _ = writeln!(s, "{ji},{jc},{}", num(d.matrix[(i, c)]));
        }
    }
    s
}

#[derive(Debug, Serialize)]
pub struct CheckRecord<'a> {
    pub suite: &'static str,
    pub name: &'a str,
    pub status: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub note: Option<&'a str>,
}

impl<'a> From<&'a Check> for CheckRecord<'a> {
    fn from(c: &'a Check) -> Self {
        CheckRecord {
            suite: c.suite,
            name: &c.name,
            status: c.status.as_str(),
            measured: c.measured,
            tolerance: c.tolerance,
            note: c.note.as_deref(),
        }
    }
}

pub fn checks_json(checks: &[Check]) -> String {
    json(&checks.iter().map(CheckRecord::from).collect::<Vec<_>>())
}

pub fn checks_table(checks: &[Check]) -> String {
    let suite_w = checks.iter().map(|c| c.suite.len()).max().unwrap_or(5).max(5);
    let name_w = checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
    let mut s = format!("{:<6}{:<suite_w$}  {:<name_w$}  {:>12}  {:>12}  note\n", "", "suite", "check", "measured", "tolerance");
    for c in checks {
        let _ = writeln!(
            s,
            "{:<6}{:<suite_w$}  {:<name_w$}  {:>12.3e}  {:>12.3e}  {}",
            c.status.as_str(),
            c.suite,
            c.name,
            c.measured,
            c.tolerance,
            c.note.as_deref().unwrap_or("")
        );
    }
    s
}
