//! Zeros of the dispersion relation, the bifurcation period `T_*`, kernel
//! modes and crossing parity, and first-order domain profiles.
//!
//! The root finder is generic over the evaluated function so it can be
//! exercised on synthetic curves and driven by a parallel evaluator.

use core::f64::consts::PI;

use alloc::format;
use alloc::vec::Vec;
use num_traits::Float;

use crate::dispersion::{log_grid, sigma_reduced, sigma_reduced_with};
use crate::error::{Error, Result};
use crate::geometry::SpaceForm;
use crate::radial::RadialOptions;
use crate::spectral::GroundState;

pub const DEFAULT_J_MAX: u32 = 64;
pub const WIDEN_LIMITS: (f64, f64) = (1e-3, 1e4);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroSearchOptions {
    pub initial_points: usize,
    /// Local minima of `|σ|` below this are reported as suspected tangential zeros.
    pub tangential_threshold: f64,
    /// Brackets are bisected down to `polish_rel · T₀`.
    pub polish_rel: f64,
    pub widen_limits: (f64, f64),
}

impl Default for ZeroSearchOptions {
    fn default() -> Self {
        ZeroSearchOptions {
            initial_points: 512,
            tangential_threshold: 1e-8,
            polish_rel: 1e-11,
            widen_limits: WIDEN_LIMITS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub t: f64,
    pub sign_change: bool,
    /// Final bracket width (sign change) or ternary-search interval (tangential).
    pub width: f64,
    /// `|σ|` at the reported point.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSearch {
    pub t_lo: f64,
    pub t_hi: f64,
    pub zeros: Vec<Zero>,
}

/// Sequential form of [`find_sigma_zeros_batched`].
pub fn find_sigma_zeros(
    mut f: impl FnMut(f64) -> Result<f64>,
    t_lo: f64,
    t_hi: f64,
    opts: &ZeroSearchOptions,
) -> Result<ZeroSearch> {
    let mut many = |ts: &[f64]| ts.iter().map(|&t| f(t)).collect::<Vec<_>>();
    find_sigma_zeros_batched(&mut many, t_lo, t_hi, opts)
}

/// All zeros of `σ` in a window with `σ(T_lo) > 0 > σ(T_hi)`, widening the
/// window geometrically up to `widen_limits` when needed. `eval_many` maps a
/// slice of periods to values in the same order.
pub fn find_sigma_zeros_batched(
    eval_many: &mut dyn FnMut(&[f64]) -> Vec<Result<f64>>,
    mut t_lo: f64,
    mut t_hi: f64,
    opts: &ZeroSearchOptions,
) -> Result<ZeroSearch> {
    if !(t_lo > 0.0 && t_hi > t_lo) {
        return Err(Error::invalid(format!("need 0 < T_lo < T_hi, got [{t_lo}, {t_hi}]")));
    }
    if opts.initial_points < 3 {
        return Err(Error::invalid("zero search needs at least 3 grid points"));
    }
    let (wlo, whi) = opts.widen_limits;
    while eval_one(eval_many, t_lo)? <= 0.0 {
        if t_lo <= wlo {
            return Err(Error::NoSignChange { what: "sigma (no positive value at small T)", lo: wlo, hi: whi });
        }
        t_lo = (t_lo / 4.0).max(wlo);
    }
    while eval_one(eval_many, t_hi)? >= 0.0 {
        if t_hi >= whi {
            return Err(Error::NoSignChange { what: "sigma (no negative value at large T)", lo: wlo, hi: whi });
        }
        t_hi = (t_hi * 4.0).min(whi);
    }

    let grid = log_grid(t_lo, t_hi, opts.initial_points)?;
    let values: Vec<f64> = eval_many(&grid).into_iter().collect::<Result<_>>()?;
    let mut eval1 = |t: f64| eval_one(eval_many, t);

    let mut zeros = Vec::new();
    for i in 0..grid.len() - 1 {
        let (a, b) = (values[i], values[i + 1]);
        if a == 0.0 {
            continue;
        }
        if a.signum() != b.signum() || b == 0.0 {
            zeros.push(bisect(&mut eval1, grid[i], grid[i + 1], a, opts.polish_rel)?);
        }
    }
    // Tangential candidates: interior minima of |σ| without a sign change on
    // either side.
    for i in 1..grid.len() - 1 {
        let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
        if a.signum() != b.signum() || b.signum() != c.signum() {
            continue;
        }
        if b.abs() < a.abs() && b.abs() <= c.abs() {
            zeros.extend(trisect(&mut eval1, grid[i - 1], grid[i + 1], b.signum(), opts)?);
        }
    }
    zeros.sort_by(|x, y| x.t.partial_cmp(&y.t).unwrap());
    Ok(ZeroSearch { t_lo, t_hi, zeros })
}

fn eval_one(eval_many: &mut dyn FnMut(&[f64]) -> Vec<Result<f64>>, t: f64) -> Result<f64> {
    eval_many(&[t]).pop().unwrap_or(Err(Error::invalid("evaluator returned no value")))
}

fn bisect(f: &mut impl FnMut(f64) -> Result<f64>, mut lo: f64, mut hi: f64, f_lo: f64, rel: f64) -> Result<Zero> {
    let s_lo = f_lo.signum();
    let mut last = f_lo;
    for _ in 0..200 {
        if hi - lo <= rel * 0.5 * (lo + hi) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let v = f(mid)?;
        last = v;
        if v == 0.0 {
            return Ok(Zero { t: mid, sign_change: true, width: 0.0, residual: 0.0 });
        }
        if v.signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Zero { t: 0.5 * (lo + hi), sign_change: true, width: hi - lo, residual: last.abs() })
}

/// Ternary search for the minimum of `|σ|` on `[lo, hi]`. A value of the
/// opposite sign turns the candidate into a pair of sign changes.
fn trisect(
    f: &mut impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    sign: f64,
    opts: &ZeroSearchOptions,
) -> Result<Vec<Zero>> {
    let (a0, b0) = (lo, hi);
    let mut best = (0.5 * (lo + hi), f64::INFINITY);
    for _ in 0..80 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        let (v1, v2) = (f(m1)?, f(m2)?);
        for (m, v) in [(m1, v1), (m2, v2)] {
            if v.signum() != sign {
                let va = f(a0)?;
                return Ok(alloc::vec![
                    bisect(f, a0, m, va, opts.polish_rel)?,
                    bisect(f, m, b0, v, opts.polish_rel)?,
                ]);
            }
        }
        if v1.abs() < best.1 {
            best = (m1, v1.abs());
        }
        if v2.abs() < best.1 {
            best = (m2, v2.abs());
        }
        if v1.abs() < v2.abs() {
            hi = m2;
        } else {
            lo = m1;
        }
        if hi - lo <= opts.polish_rel * lo {
            break;
        }
    }
    if best.1 < opts.tangential_threshold {
        Ok(alloc::vec![Zero { t: best.0, sign_change: false, width: hi - lo, residual: best.1 }])
    } else {
        Ok(Vec::new())
    }
}

/// Smallest sign-changing zero.
pub fn select_t_star(zeros: &[Zero]) -> Option<f64> {
    zeros.iter().filter(|z| z.sign_change).map(|z| z.t).fold(None, |m, t| match m {
        None => Some(t),
        Some(x) => Some(x.min(t)),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelModes {
    pub modes: Vec<u32>,
    /// `σ(T_*/j)` for `j = 1..=J_max`.
    pub values: Vec<f64>,
    pub tolerances: Vec<f64>,
    pub j_max: u32,
    /// `σ(T_*/J_max) > 0`.
    pub positive_at_j_max: bool,
}

/// Modes `j ≤ j_max` with `|σ(T_*/j)| < tol(j)`. Candidates beyond `j = 1`
/// are confirmed with `sigma_tight`, a more accurate evaluation.
pub fn kernel_modes(
    mut sigma: impl FnMut(f64) -> Result<f64>,
    mut sigma_tight: impl FnMut(f64) -> Result<f64>,
    t_star: f64,
    j_max: u32,
    tol: impl Fn(u32) -> f64,
) -> Result<KernelModes> {
    if j_max == 0 {
        return Err(Error::invalid("J_max must be >= 1"));
    }
    let mut modes = alloc::vec![1];
    let mut values = Vec::with_capacity(j_max as usize);
    let mut tolerances = Vec::with_capacity(j_max as usize);
    for j in 1..=j_max {
        let v = sigma(t_star / j as f64)?;
        values.push(v);
        tolerances.push(tol(j));
        if j > 1 && v.abs() < tol(j) && sigma_tight(t_star / j as f64)?.abs() < tol(j) {
            modes.push(j);
        }
    }
    let positive_at_j_max = *values.last().unwrap() > 0.0;
    Ok(KernelModes { modes, values, tolerances, j_max, positive_at_j_max })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Changes,
    DoesNotChange,
    /// The two probe offsets disagree.
    Indeterminate,
}

pub const PARITY_OFFSETS: [f64; 2] = [1e-4, 1e-5];

/// Whether `σ_j` changes sign across `T_*`, probed at `T_*(1 ± h)`.
pub fn crossing_parity(mut sigma_j: impl FnMut(f64) -> Result<f64>, t_star: f64) -> Result<Parity> {
    let mut flags = [false; 2];
    for (i, h) in PARITY_OFFSETS.iter().enumerate() {
        let a = sigma_j(t_star * (1.0 - h))?;
        let b = sigma_j(t_star * (1.0 + h))?;
        flags[i] = a.signum() != b.signum();
    }
    Ok(match flags {
        [true, true] => Parity::Changes,
        [false, false] => Parity::DoesNotChange,
        _ => Parity::Indeterminate,
    })
}

/// One period of `ρ(t) = 1 + ε cos(2πt/T_*)` on `N` equispaced points
/// `t_i = i T_*/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainProfile {
    pub n: u32,
    pub k: f64,
    pub t_star: f64,
    pub epsilon: f64,
    pub samples: Vec<(f64, f64)>,
}

pub fn domain_profile(sf: &SpaceForm, t_star: f64, epsilon: f64, samples: usize) -> Result<DomainProfile> {
    if !(t_star > 0.0) || !t_star.is_finite() {
        return Err(Error::invalid(format!("T_star = {t_star} must be positive")));
    }
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::invalid(format!(
            "epsilon = {epsilon} outside [0, 0.5): profiles are first order only"
        )));
    }
    if samples < 8 {
        return Err(Error::invalid(format!("profile needs at least 8 samples, got {samples}")));
    }
    let pts = (0..samples)
        .map(|i| {
            let t = t_star * i as f64 / samples as f64;
            (t, profile_radius(t_star, epsilon, t))
        })
        .collect();
    Ok(DomainProfile { n: sf.n(), k: sf.k(), t_star, epsilon, samples: pts })
}

pub fn profile_radius(t_star: f64, epsilon: f64, t: f64) -> f64 {
    1.0 + epsilon * (2.0 * PI * t / t_star).cos()
}

impl DomainProfile {
    pub fn mean_deviation(&self) -> f64 {
        self.samples.iter().map(|(_, r)| r - 1.0).sum::<f64>() / self.samples.len() as f64
    }

    /// `max |ρ(t_i) − ρ(−t_i)|`, using periodicity `−t_i ≡ t_{N−i}`.
    pub fn evenness_defect(&self) -> f64 {
        let n = self.samples.len();
        (1..n).map(|i| (self.samples[i].1 - self.samples[n - i].1).abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationOptions {
    pub t_lo: f64,
    pub t_hi: f64,
    pub j_max: u32,
    /// Kernel tolerance factor applied to the scale `|φ''(1)| + |φ'(1)|·2πj/T_*`.
    pub kernel_rel_tol: f64,
    pub search: ZeroSearchOptions,
}

impl Default for BifurcationOptions {
    fn default() -> Self {
        BifurcationOptions { t_lo: 0.5, t_hi: 100.0, j_max: DEFAULT_J_MAX, kernel_rel_tol: 1e-8, search: ZeroSearchOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationReport {
    pub n: u32,
    pub k: f64,
    pub lambda1: f64,
    pub search: ZeroSearch,
    pub t_star: f64,
    pub kernel: KernelModes,
    pub parity: Vec<(u32, Parity)>,
}

/// `σ = −φ'(1) · σ_reduced` at mode 1.
pub fn sigma_fn<'a>(gs: &'a GroundState, sf: &'a SpaceForm) -> impl Fn(f64) -> Result<f64> + 'a {
    move |t| Ok(-gs.dphi1 * sigma_reduced(gs, sf, t, 1)?)
}

/// Full pipeline, evaluating `σ` by shooting. `eval_many` evaluates `σ` on a
/// batch of periods and may run in parallel.
pub fn bifurcate_with(
    gs: &GroundState,
    sf: &SpaceForm,
    opts: &BifurcationOptions,
    eval_many: &mut dyn FnMut(&[f64]) -> Vec<Result<f64>>,
) -> Result<BifurcationReport> {
    let search = find_sigma_zeros_batched(eval_many, opts.t_lo, opts.t_hi, &opts.search)?;
    let t_star = select_t_star(&search.zeros)
        .ok_or(Error::NoSignChange { what: "sigma", lo: search.t_lo, hi: search.t_hi })?;
    let sigma = sigma_fn(gs, sf);
    let tight_opts = RadialOptions { rtol: 1e-13, atol: 1e-15, keep_profile: false, ..Default::default() };
    let sigma_tight = |t: f64| Ok(-gs.dphi1 * sigma_reduced_with(gs, sf, t, 1, &tight_opts)?);
    let scale = |j: u32| gs.ddphi1.abs() + gs.dphi1.abs() * 2.0 * PI * j as f64 / t_star;
    let kernel = kernel_modes(&sigma, sigma_tight, t_star, opts.j_max, |j| opts.kernel_rel_tol * scale(j))?;
    let mut parity = Vec::new();
    for &j in &kernel.modes {
        let p = crossing_parity(|t| sigma(t / j as f64), t_star)?;
        parity.push((j, p));
    }
    Ok(BifurcationReport { n: sf.n(), k: sf.k(), lambda1: gs.lambda1, search, t_star, kernel, parity })
}

pub fn bifurcate(gs: &GroundState, sf: &SpaceForm, opts: &BifurcationOptions) -> Result<BifurcationReport> {
    let sigma = sigma_fn(gs, sf);
    let mut many = |ts: &[f64]| ts.iter().map(|&t| sigma(t)).collect::<Vec<_>>();
    bifurcate_with(gs, sf, opts, &mut many)
}
