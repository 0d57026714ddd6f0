//! The dispersion relation `σ_j(T) = c_j'(1) + φ''(1)`.
//!
//! `c_j` is the regular solution of the radial equation with
//! `Λ = λ₁ − (2πj/T)²` and boundary value `c_j(1) = −φ'(1)`. Since
//! `Λ < λ₁`, the regular solution `w` has no zero on `(0, 1]` and
//! `σ = −φ'(1) · [w'(1)/w(1) + (n−1) C_k(1)/S_k(1)]`.
//!
//! Two routes evaluate `w'(1)/w(1)`: numerical shooting, and the closed form
//! `w(r) ∝ S_k(r)^{1−n/2} P^{m₀}_{ν*}(C_k(r))` with `P = 𝒫` for `k < 0`,
//! Ferrers `P` for `k > 0`, `m₀ = μ` for integer and `m₀ = −μ` for
//! half-integer `μ = (n−2)/2`.

use core::f64::consts::PI;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::SpaceForm;
use crate::radial::{solve_regular_with, RadialOptions};
use crate::specfun::gamma::rgamma;
use crate::specfun::legendre::{ferrers_p, legendre_p, Degree};
use crate::spectral::GroundState;

/// Route agreement bound: `|σ_ode − σ_cf| ≤ AGREE_TOL · (1 + |σ|)`.
pub const AGREE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Ode,
    ClosedForm,
}

/// `Λ = λ₁ − (2πj/T)²`.
pub fn shifted_parameter(lambda1: f64, t: f64, j: u32) -> f64 {
    let w = 2.0 * PI * j as f64 / t;
    lambda1 - w * w
}

fn check_args(t: f64, j: u32) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("period T = {t} must be positive and finite")));
    }
    if j == 0 {
        return Err(Error::invalid("mode index j must be >= 1"));
    }
    Ok(())
}

/// `w'(1)/w(1) + (n−1) C_k(1)/S_k(1)` by shooting; zeros coincide with `σ`'s.
pub fn sigma_reduced(gs: &GroundState, sf: &SpaceForm, t: f64, j: u32) -> Result<f64> {
    sigma_reduced_with(gs, sf, t, j, &RadialOptions { keep_profile: false, ..Default::default() })
}

pub fn sigma_reduced_with(
    gs: &GroundState,
    sf: &SpaceForm,
    t: f64,
    j: u32,
    opts: &RadialOptions,
) -> Result<f64> {
    check_args(t, j)?;
    let lam = shifted_parameter(gs.lambda1, t, j);
    let w = solve_regular_with(sf, lam, 1.0, opts)?;
    if w.u1.abs() < 1e-12 * w.du1.abs() {
        return Err(Error::Degenerate(format!("w(1) vanishes at T = {t}, j = {j}")));
    }
    Ok(w.log_derivative() + sf.drift(1.0))
}

/// `σ_j(T)` by shooting.
pub fn sigma_ode(gs: &GroundState, sf: &SpaceForm, t: f64, j: u32) -> Result<f64> {
    Ok(-gs.dphi1 * sigma_reduced(gs, sf, t, j)?)
}

/// Which function family and order enter the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormCase {
    /// `k < 0`, integer `μ`: `𝒫^μ`, `𝒫^{μ+1}`.
    LegendreInteger,
    /// `k < 0`, half-integer `μ`: `𝒫^{−μ}`, `𝒫^{−μ+1}`.
    LegendreHalfInteger,
    /// `k > 0`, integer `μ`: Ferrers `P^μ`, `P^{μ+1}`.
    FerrersInteger,
    /// `k > 0`, half-integer `μ`: Ferrers `P^{−μ}`, `P^{−μ+1}`.
    FerrersHalfInteger,
}

impl ClosedFormCase {
    pub fn of(sf: &SpaceForm) -> Self {
        match (sf.k() < 0.0, sf.mu_is_integer()) {
            (true, true) => ClosedFormCase::LegendreInteger,
            (true, false) => ClosedFormCase::LegendreHalfInteger,
            (false, true) => ClosedFormCase::FerrersInteger,
            (false, false) => ClosedFormCase::FerrersHalfInteger,
        }
    }

    /// The order `m₀` of the represented regular solution.
    pub fn order(&self, mu: f64) -> f64 {
        match self {
            ClosedFormCase::LegendreInteger | ClosedFormCase::FerrersInteger => mu,
            ClosedFormCase::LegendreHalfInteger | ClosedFormCase::FerrersHalfInteger => -mu,
        }
    }

    /// `P^m_ν(x)` of the case's family.
    pub fn eval(&self, m: f64, nu: Degree, x: f64) -> Result<f64> {
        match self {
            ClosedFormCase::LegendreInteger | ClosedFormCase::LegendreHalfInteger => legendre_p(m, nu, x),
            ClosedFormCase::FerrersInteger | ClosedFormCase::FerrersHalfInteger => ferrers_p(m, nu, x),
        }
    }
}

/// `ρ = lim_{r→0} S_k(r)^{1−n/2} P^{m}_ν(C_k(r))` for `m = ±μ`, so that
/// `S_k^{1−n/2} P^{m}_ν(C_k)/ρ` equals 1 at the origin.
pub fn origin_value(sf: &SpaceForm, m: f64, nu: Degree) -> f64 {
    let mu = sf.mu();
    let q = sf.sqrt_abs_k() / 2.0;
    if m < 0.0 {
        return q.powf(mu) * rgamma(Complex64::new(1.0 + mu, 0.0)).re;
    }
    // integer m = μ: (ν+1)_μ (−ν)_μ / μ!, real for real and conical ν
    let v = nu.value();
    let mi = mu as u32;
    let mut p = Complex64::new(1.0, 0.0);
    for i in 0..mi {
        p *= (v + 1.0 + i as f64) * (-v + i as f64) / (i as f64 + 1.0);
    }
    let sign = if sf.k() < 0.0 && mi % 2 == 1 { -1.0 } else { 1.0 };
    sign * p.re * q.powi(mi as i32)
}

/// Order and origin value of the represented regular solution. For integer
/// `μ` the function `P^{μ}_ν` vanishes identically when `ν ∈ {0, …, μ−1}`;
/// there the proportional `P^{−μ}_ν` is used instead.
fn representation(sf: &SpaceForm, case: ClosedFormCase, nu: Degree) -> (f64, f64) {
    let m0 = case.order(sf.mu());
    let rho = origin_value(sf, m0, nu);
    if rho == 0.0 {
        let m = -sf.mu();
        (m, origin_value(sf, m, nu))
    } else {
        (m0, rho)
    }
}

/// Closed-form regular solution `u(r)` with `u(0) = 1`.
pub fn closed_form_solution(sf: &SpaceForm, lambda: f64, r: f64) -> Result<f64> {
    let nu = Degree::from_eigenvalue(sf.n(), lambda, sf.k())?;
    let case = ClosedFormCase::of(sf);
    let (m0, rho) = representation(sf, case, nu);
    if r == 0.0 {
        return Ok(1.0);
    }
    let p = case.eval(m0, nu, sf.c_k(r)?)?;
    Ok(sf.s(r).powf(-sf.mu()) * p / rho)
}

/// `w'(1)/w(1)` from the closed form:
/// `[√|k| P^{m₀+1}_ν + (m₀ − μ) (C/S) P^{m₀}_ν] / P^{m₀}_ν` at `C_k(1)`.
fn closed_form_log_derivative(sf: &SpaceForm, case: ClosedFormCase, nu: Degree) -> Result<f64> {
    let (mu, x1) = (sf.mu(), sf.c(1.0));
    let (m0, _) = representation(sf, case, nu);
    let d = case.eval(m0, nu, x1)?;
    let r = case.eval(m0 + 1.0, nu, x1)?;
    let extra = (m0 - mu) * x1 / sf.s(1.0);
    let num = sf.sqrt_abs_k() * r + extra * d;
    if d.abs() < 1e-12 * num.abs() {
        return Err(Error::Degenerate(format!("denominator P^{m0} vanishes at C_k(1) for nu = {}", nu.value())));
    }
    Ok(num / d)
}

/// `φ'(1) = s √|k| S_k(1)^{1−n/2} P^{m₀+1}_{ν}(C_k(1)) / ρ`, with `ν` at `λ₁`
/// (the `P^{m₀}` term drops out since `φ(1) = 0`).
pub fn closed_form_dphi1(gs: &GroundState, sf: &SpaceForm) -> Result<f64> {
    let case = ClosedFormCase::of(sf);
    let nu = Degree::from_eigenvalue(sf.n(), gs.lambda1, sf.k())?;
    let (m0, rho) = representation(sf, case, nu);
    let r = case.eval(m0 + 1.0, nu, sf.c(1.0))?;
    let s_cf = gs.s / rho;
    Ok(s_cf * sf.sqrt_abs_k() * sf.s(1.0).powf(-sf.mu()) * r)
}

/// `σ_j(T)` from the closed form, with `s` and `λ₁` from the ground state.
pub fn sigma_closed(gs: &GroundState, sf: &SpaceForm, t: f64, j: u32) -> Result<f64> {
    Ok(sigma_closed_detail(gs, sf, t, j)?.0)
}

/// `σ_j(T)` and the degree `ν*` used.
pub fn sigma_closed_detail(gs: &GroundState, sf: &SpaceForm, t: f64, j: u32) -> Result<(f64, Degree)> {
    check_args(t, j)?;
    let lam = shifted_parameter(gs.lambda1, t, j);
    let nu_star = Degree::from_eigenvalue(sf.n(), lam, sf.k())?;
    let dphi1 = closed_form_dphi1(gs, sf)?;
    let ddphi1 = -sf.drift(1.0) * dphi1;
    let case = ClosedFormCase::of(sf);
    let ld = closed_form_log_derivative(sf, case, nu_star)?;
    Ok((-dphi1 * ld + ddphi1, nu_star))
}

pub fn sigma(gs: &GroundState, sf: &SpaceForm, t: f64, j: u32, route: Route) -> Result<f64> {
    match route {
        Route::Ode => sigma_ode(gs, sf, t, j),
        Route::ClosedForm => sigma_closed(gs, sf, t, j),
    }
}

/// One point of a scan, carrying both routes.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionSample {
    pub t: f64,
    pub j: u32,
    pub sigma_ode: f64,
    pub sigma_cf: f64,
    pub sigma_reduced: f64,
    pub nu_star: Complex64,
    pub agree: bool,
    /// Failure of either route, recorded instead of aborting the scan.
    pub error: Option<String>,
}

impl DispersionSample {
    pub fn evaluate(gs: &GroundState, sf: &SpaceForm, t: f64, j: u32) -> Self {
        let lam = shifted_parameter(gs.lambda1, t, j);
        let nu = Degree::from_eigenvalue(sf.n(), lam, sf.k()).map(|d| d.value());
        let red = sigma_reduced(gs, sf, t, j);
        let cf = sigma_closed(gs, sf, t, j);
        let mut error = None;
        let sigma_reduced = red.as_ref().copied().unwrap_or_else(|e| {
            error = Some(e.to_string());
            f64::NAN
        });
        let sigma_ode = -gs.dphi1 * sigma_reduced;
        let sigma_cf = match cf {
            Ok(v) => v,
            Err(e) => {
                error.get_or_insert(e.to_string());
                f64::NAN
            }
        };
        let agree = (sigma_ode - sigma_cf).abs() <= AGREE_TOL * (1.0 + sigma_ode.abs());
        DispersionSample {
            t,
            j,
            sigma_ode,
            sigma_cf,
            sigma_reduced,
            nu_star: nu.unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
            agree,
            error,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispersionCurve {
    pub n: u32,
    pub k: f64,
    pub j: u32,
    pub samples: Vec<DispersionSample>,
}

/// `points` log-spaced periods from `t_lo` to `t_hi`, endpoints exact.
pub fn log_grid(t_lo: f64, t_hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(t_lo > 0.0 && t_hi > t_lo && t_hi.is_finite()) {
        return Err(Error::invalid(format!("need 0 < T_lo < T_hi, got [{t_lo}, {t_hi}]")));
    }
    if points < 2 {
        return Err(Error::invalid(format!("scan needs at least 2 points, got {points}")));
    }
    let (a, b) = (t_lo.ln(), t_hi.ln());
    Ok((0..points)
        .map(|i| match i {
            0 => t_lo,
            i if i == points - 1 => t_hi,
            i => (a + (b - a) * i as f64 / (points - 1) as f64).exp(),
        })
        .collect())
}

pub fn scan(gs: &GroundState, sf: &SpaceForm, t_lo: f64, t_hi: f64, points: usize, j: u32) -> Result<DispersionCurve> {
    check_args(t_lo, j)?;
    let samples = log_grid(t_lo, t_hi, points)?
        .into_iter()
        .map(|t| DispersionSample::evaluate(gs, sf, t, j))
        .collect();
    Ok(DispersionCurve { n: sf.n(), k: sf.k(), j, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::ground_state;

    fn setup(n: u32, k: f64) -> (SpaceForm, GroundState) {
        let sf = SpaceForm::new(n, k).unwrap();
        let gs = ground_state(&sf).unwrap();
        (sf, gs)
    }

    #[test]
    fn closed_form_solution_matches_shooting() {
        for (n, k) in [(2, -1.0), (3, -1.0), (2, 1.0), (3, 1.0), (4, -1.0), (5, 1.0)] {
            let sf = SpaceForm::new(n, k).unwrap();
            for lam in [-40.0, 2.0, 9.0] {
                let sol = solve_regular_with(&sf, lam, 1.0, &RadialOptions::default()).unwrap();
                for r in [0.2, 0.6, 1.0] {
                    let cf = closed_form_solution(&sf, lam, r).unwrap();
                    let ode = sol.value_at(r).unwrap().0 * sol.scale();
                    assert!((cf - ode).abs() < 1e-9 * (1.0 + ode.abs()), "n={n} k={k} lam={lam} r={r}: {cf} vs {ode}");
                }
            }
        }
    }

    #[test]
    fn closed_form_dphi1_matches_ground_state() {
        for (n, k) in [(2, -1.0), (3, -1.0), (2, 1.0), (3, 1.0)] {
            let (sf, gs) = setup(n, k);
            let cf = closed_form_dphi1(&gs, &sf).unwrap();
            assert!((cf - gs.dphi1).abs() < 1e-9 * gs.dphi1.abs(), "n={n} k={k}");
        }
    }

    #[test]
    fn routes_agree_including_conical() {
        for (n, k) in [(2, -1.0), (3, -1.0), (2, 1.0), (3, 1.0)] {
            let (sf, gs) = setup(n, k);
            let mut saw_conical = false;
            for t in [0.1, 0.7, 2.0, 5.0, 30.0, 100.0] {
                let s = DispersionSample::evaluate(&gs, &sf, t, 1);
                assert!(s.error.is_none(), "{:?}", s.error);
                assert!(s.agree, "n={n} k={k} t={t}: {} vs {}", s.sigma_ode, s.sigma_cf);
                saw_conical |= s.nu_star.im != 0.0;
            }
            assert!(saw_conical, "n={n} k={k}");
        }
    }

    #[test]
    fn mode_identity() {
        let (sf, gs) = setup(3, 1.0);
        for j in 1..=4 {
            let a = sigma_ode(&gs, &sf, 3.0, j).unwrap();
            let b = sigma_ode(&gs, &sf, 3.0 / j as f64, 1).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs());
        }
    }

    #[test]
    fn scan_plumbing() {
        let (sf, gs) = setup(2, 1.0);
        let c = scan(&gs, &sf, 0.5, 50.0, 2, 1).unwrap();
        assert_eq!(c.samples.len(), 2);
        assert_eq!(c.samples[0].t, 0.5);
        assert_eq!(c.samples[1].t, 50.0);
        assert!(c.samples[0].sigma_ode > 0.0);
        assert!(c.samples[1].sigma_ode < 0.0);
        assert!(scan(&gs, &sf, 0.5, 50.0, 1, 1).is_err());
        assert!(scan(&gs, &sf, 5.0, 1.0, 3, 1).is_err());
        assert!(sigma_ode(&gs, &sf, 1.0, 0).is_err());
    }

    #[test]
    fn sigma_is_linear_in_s() {
        let (sf, gs) = setup(2, -1.0);
        let g2 = gs.rescaled(2.0);
        for t in [0.5, 3.0, 20.0] {
            let a = sigma_ode(&gs, &sf, t, 1).unwrap();
            let b = sigma_ode(&g2, &sf, t, 1).unwrap();
            assert!((b - 2.0 * a).abs() < 1e-14 * a.abs().max(1.0));
            let c = sigma_closed(&g2, &sf, t, 1).unwrap();
            assert!((c - 2.0 * sigma_closed(&gs, &sf, t, 1).unwrap()).abs() < 1e-12 * c.abs().max(1.0));
        }
    }
}
