//! First Dirichlet eigenpair of the unit geodesic ball, normalized so that
//! `2π · Vol(S^{n−1}) · ∫₀¹ φ² S_k^{n−1} dr = 1`.

use core::f64::consts::PI;

use alloc::format;
use alloc::vec::Vec;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{sphere_volume, SpaceForm};
use crate::quadrature::GaussLegendre;
use crate::radial::{
    interpolate_profile, solve_regular, solve_regular_with, ProfilePoint, RadialOptions,
    RadialSolution, PROFILE_POINTS,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    pub scan_start: f64,
    pub scan_step: f64,
    pub lambda_cap: f64,
    pub radial: RadialOptions,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { scan_start: 0.05, scan_step: 0.25, lambda_cap: 500.0, radial: RadialOptions::default() }
    }
}

fn u_at_one(sf: &SpaceForm, lambda: f64, opts: &RadialOptions) -> Result<f64> {
    let o = RadialOptions { keep_profile: false, ..*opts };
    let s = solve_regular_with(sf, lambda, 1.0, &o)?;
    Ok(s.u1 * s.scale())
}

pub fn find_lambda1(sf: &SpaceForm) -> Result<f64> {
    find_lambda1_with(sf, &EigenOptions::default())
}

/// Smallest `Λ > 0` with `u(1; Λ) = 0`: a coarse scan for the first sign
/// change, then safeguarded secant steps (Illinois variant) inside the bracket.
pub fn find_lambda1_with(sf: &SpaceForm, opts: &EigenOptions) -> Result<f64> {
    let mut lo = opts.scan_start;
    let mut f_lo = u_at_one(sf, lo, &opts.radial)?;
    if f_lo <= 0.0 {
        return Err(Error::Degenerate(format!("u(1) <= 0 already at Lambda = {lo}")));
    }
    let mut hi = lo;
    let mut f_hi = f_lo;
    while f_hi > 0.0 {
        lo = hi;
        f_lo = f_hi;
        hi += opts.scan_step;
        if hi > opts.lambda_cap {
            return Err(Error::NoSignChange { what: "u(1; Lambda)", lo: opts.scan_start, hi: opts.lambda_cap });
        }
        f_hi = u_at_one(sf, hi, &opts.radial)?;
    }

    let mut side = 0i8;
    for _ in 0..200 {
        let mut x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = u_at_one(sf, x, &opts.radial)?;
        if fx.abs() < 1e-12 || hi - lo < 1e-14 * hi {
            return verified_ground(sf, x, opts);
        }
        if fx > 0.0 {
            lo = x;
            f_lo = fx;
            if side == 1 {
                f_hi *= 0.5;
            }
            side = 1;
        } else {
            hi = x;
            f_hi = fx;
            if side == -1 {
                f_lo *= 0.5;
            }
            side = -1;
        }
    }
    Err(Error::EigenNoConvergence { iterations: 200 })
}

/// Reject an eigenvalue whose solution vanishes inside `(0, 1)`.
fn verified_ground(sf: &SpaceForm, lambda: f64, opts: &EigenOptions) -> Result<f64> {
    let sol = solve_regular_with(sf, lambda, 1.0, &opts.radial)?;
    if let Some(z) = sol.first_zero() {
        if z < 1.0 - 1e-6 {
            return Err(Error::Degenerate(format!(
                "eigenfunction at Lambda = {lambda} vanishes at r = {z} < 1"
            )));
        }
    }
    Ok(lambda)
}

/// The normalized ground state `φ = s·u`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub n: u32,
    pub k: f64,
    pub lambda1: f64,
    /// Normalization constant, positive because `u(0) = 1`.
    pub s: f64,
    pub dphi1: f64,
    pub ddphi1: f64,
    /// `|2π Vol(S^{n−1}) ∫ φ² S^{n−1} − 1|` with the integral taken from the
    /// augmented ODE rather than from quadrature.
    pub norm_residual: f64,
    /// `u` (not yet multiplied by `s`), true scale.
    pub u: RadialSolution,
    /// `φ` on a uniform grid of `PROFILE_POINTS` radii.
    pub profile: Vec<ProfilePoint>,
}

/// `∫₀¹ f² S^{n−1}` on a resampled profile: 8-point Gauss–Legendre on every
/// panel with the integrand taken from the quintic Hermite interpolant.
pub fn profile_weighted_l2(sf: &SpaceForm, profile: &[ProfilePoint]) -> f64 {
    let gl = GaussLegendre::new(8);
    let n1 = sf.n() as f64 - 1.0;
    profile
        .windows(2)
        .map(|w| {
            gl.integrate(w[0].r, w[1].r, |r| {
                let u = interpolate_profile(profile, r);
                u * u * sf.s(r).powf(n1)
            })
        })
        .sum()
}

pub fn ground_state(sf: &SpaceForm) -> Result<GroundState> {
    ground_state_with(sf, &EigenOptions::default())
}

pub fn ground_state_with(sf: &SpaceForm, opts: &EigenOptions) -> Result<GroundState> {
    let lambda1 = find_lambda1_with(sf, opts)?;
    let u = solve_regular_with(sf, lambda1, 1.0, &opts.radial)?;
    let raw = u.resample(sf, PROFILE_POINTS)?;
    let vol = 2.0 * PI * sphere_volume(sf.n());
    let integral = profile_weighted_l2(sf, &raw);
    if !(integral > 0.0) {
        return Err(Error::Degenerate(format!("nonpositive norm integral {integral}")));
    }
    let s = 1.0 / (vol * integral).sqrt();
    let norm_residual = (vol * s * s * u.weighted_l2 - 1.0).abs();
    let dphi1 = s * u.du1;
    let ddphi1 = -sf.drift(1.0) * dphi1;
    let profile = raw
        .into_iter()
        .map(|p| ProfilePoint { r: p.r, u: s * p.u, du: s * p.du, ddu: s * p.ddu })
        .collect();
    Ok(GroundState { n: sf.n(), k: sf.k(), lambda1, s, dphi1, ddphi1, norm_residual, u, profile })
}

impl GroundState {
    /// The same eigenfunction with `s` multiplied by `factor`; the result
    /// violates the normalization unless `factor = 1`.
    pub fn rescaled(&self, factor: f64) -> GroundState {
        let mut g = self.clone();
        g.s *= factor;
        g.dphi1 *= factor;
        g.ddphi1 *= factor;
        for p in g.profile.iter_mut() {
            p.u *= factor;
            p.du *= factor;
            p.ddu *= factor;
        }
        g
    }

    /// `2π Vol(S^{n−1}) ∫₀¹ φ² S^{n−1}` by quadrature on the stored profile.
    pub fn norm_value(&self, sf: &SpaceForm) -> f64 {
        2.0 * PI * sphere_volume(sf.n()) * profile_weighted_l2(sf, &self.profile)
    }

    /// The unique positive `s` restoring the normalization for this profile's `u`.
    pub fn normalizing_scale(&self, sf: &SpaceForm) -> f64 {
        self.s / self.norm_value(sf).sqrt()
    }
}

/// `u(1; Λ)` with `u(0) = 1`, exposed for bracketing diagnostics.
pub fn boundary_value(sf: &SpaceForm, lambda: f64) -> Result<f64> {
    let s = solve_regular(sf, lambda)?;
    Ok(s.u1 * s.scale())
}
