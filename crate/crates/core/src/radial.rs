//! Regular solution of `u'' + (n−1)(C_k/S_k) u' + Λ u = 0` with `u(0) = 1`.
//!
//! The solution is started at `r = δ` from its Frobenius expansion and carried
//! to the end radius by an adaptive Dormand–Prince 5(4) pair. For very
//! negative `Λ` the solution grows like `e^{√|Λ| r}`; the state is rescaled
//! on the fly and the accumulated factor kept in `log_scale`.

use alloc::format;
use alloc::vec::Vec;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::SpaceForm;

pub const DEFAULT_DELTA: f64 = 1e-6;
pub const DEFAULT_RTOL: f64 = 1e-12;
pub const DEFAULT_ATOL: f64 = 1e-14;
pub const PROFILE_POINTS: usize = 512;

const RESCALE_AT: f64 = 1e100;
const MAX_STEPS: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOptions {
    pub delta: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Record integrator nodes for later interpolation.
    pub keep_profile: bool,
}

impl Default for RadialOptions {
    fn default() -> Self {
        RadialOptions { delta: DEFAULT_DELTA, rtol: DEFAULT_RTOL, atol: DEFAULT_ATOL, keep_profile: true }
    }
}

/// A sample `(r, u, u', u'')` of the solution, in units of `e^{log_scale}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub r: f64,
    pub u: f64,
    pub du: f64,
    pub ddu: f64,
}

/// Regular solution on `[0, r_end]`. True values are the stored ones times
/// `e^{log_scale}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub lambda: f64,
    pub r_end: f64,
    pub u1: f64,
    pub du1: f64,
    pub log_scale: f64,
    /// `∫₀^{r_end} u² S_k^{n−1} dr`, in units of `e^{2 log_scale}`.
    pub weighted_l2: f64,
    pub steps: usize,
    pub nodes: Vec<ProfilePoint>,
}

/// `(u(δ), u'(δ))` from `u = 1 + a₂r² + a₄r⁴` with `a₂ = −Λ/(2n)` and
/// `a₄ = a₂ (2(n−1)k/3 − Λ) / (4(n+2))`.
pub fn frobenius_start(sf: &SpaceForm, lambda: f64, delta: f64) -> Result<(f64, f64)> {
    if !(delta > 0.0 && delta <= 1e-3) {
        return Err(Error::invalid(format!("Frobenius radius delta = {delta} must lie in (0, 1e-3]")));
    }
    let (a2, a4) = frobenius_coeffs(sf, lambda);
    let d2 = delta * delta;
    Ok((1.0 + a2 * d2 + a4 * d2 * d2, 2.0 * a2 * delta + 4.0 * a4 * d2 * delta))
}

fn frobenius_coeffs(sf: &SpaceForm, lambda: f64) -> (f64, f64) {
    let n = sf.n() as f64;
    let a2 = -lambda / (2.0 * n);
    let a4 = a2 * (2.0 * (n - 1.0) * sf.k() / 3.0 - lambda) / (4.0 * (n + 2.0));
    (a2, a4)
}

pub fn solve_regular(sf: &SpaceForm, lambda: f64) -> Result<RadialSolution> {
    solve_regular_with(sf, lambda, 1.0, &RadialOptions::default())
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

type State = [f64; 3];

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..3 {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Solve on `[0, r_end]` with explicit options.
pub fn solve_regular_with(
    sf: &SpaceForm,
    lambda: f64,
    r_end: f64,
    opts: &RadialOptions,
) -> Result<RadialSolution> {
    if !lambda.is_finite() {
        return Err(Error::invalid("spectral parameter must be finite"));
    }
    if !(r_end > opts.delta) || r_end >= sf.radial_limit() {
        return Err(Error::invalid(format!(
            "end radius {r_end} must exceed delta and stay below pi/sqrt(k)"
        )));
    }
    let n1 = sf.n() as f64 - 1.0;
    let rhs = |r: f64, y: &State| -> State {
        let s = sf.s(r);
        [y[1], -n1 * sf.c(r) / s * y[1] - lambda * y[0], y[0] * y[0] * s.powf(n1)]
    };

    let delta = opts.delta;
    let (u0, du0) = frobenius_start(sf, lambda, delta)?;
    // ∫₀^δ u² S^{n−1} ≈ δⁿ/n for small δ
    let mut y: State = [u0, du0, delta.powf(n1 + 1.0) / (n1 + 1.0)];
    let mut r = delta;
    let mut log_scale = 0.0;
    let mut nodes = Vec::new();
    if opts.keep_profile {
        nodes.push(ProfilePoint { r: 0.0, u: 1.0, du: 0.0, ddu: -lambda / sf.n() as f64 });
        let k0 = rhs(r, &y);
        nodes.push(ProfilePoint { r, u: y[0], du: y[1], ddu: k0[1] });
    }

    let growth = (-lambda).max(1.0).sqrt();
    let mut h = (1e-2 / growth).min(r_end - r);
    let mut k1 = rhs(r, &y);
    let mut steps = 0;
    while r < r_end {
        if steps >= MAX_STEPS {
            return Err(Error::StepUnderflow { r, h });
        }
        if r + h > r_end {
            h = r_end - r;
        }
        let k2 = rhs(r + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(r + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(r + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(r + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = rhs(
            r + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = rhs(r + h, &y_new);

        let mut err: f64 = 0.0;
        for i in 0..3 {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() {
            return Err(Error::Overflow("radial integration"));
        }

        if err <= 1.0 {
            r = if r_end - (r + h) < 1e-15 * r_end { r_end } else { r + h };
            y = y_new;
            k1 = k7;
            steps += 1;
            let mag = y[0].abs().max(y[1].abs());
            if mag > RESCALE_AT {
                let f = 1.0 / mag;
                y[0] *= f;
                y[1] *= f;
                y[2] *= f * f;
                k1 = rhs(r, &y);
                log_scale += mag.ln();
                for p in nodes.iter_mut() {
                    p.u *= f;
                    p.du *= f;
                    p.ddu *= f;
                }
            }
            if opts.keep_profile {
                nodes.push(ProfilePoint { r, u: y[0], du: y[1], ddu: k1[1] });
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < 1e-14 * r.max(1e-300) {
            return Err(Error::StepUnderflow { r, h });
        }
    }

    Ok(RadialSolution {
        lambda,
        r_end,
        u1: y[0],
        du1: y[1],
        log_scale,
        weighted_l2: y[2],
        steps,
        nodes,
    })
}

/// Quintic Hermite interpolant through two `(u, u', u'')` samples.
fn hermite5(a: &ProfilePoint, b: &ProfilePoint, r: f64) -> (f64, f64) {
    let h = b.r - a.r;
    let t = (r - a.r) / h;
    let (t2, t3) = (t * t, t * t * t);
    let (t4, t5) = (t3 * t, t3 * t2);
    let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    let h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    let h20 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    let h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    let h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    let h21 = 0.5 * t3 - t4 + 0.5 * t5;
    let d00 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
    let d10 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
    let d20 = t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4;
    let d01 = -d00;
    let d11 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
    let d21 = 1.5 * t2 - 4.0 * t3 + 2.5 * t4;
    let u = h00 * a.u + h10 * h * a.du + h20 * h * h * a.ddu + h01 * b.u + h11 * h * b.du + h21 * h * h * b.ddu;
    let du = (d00 * a.u + d01 * b.u) / h + d10 * a.du + d20 * h * a.ddu + d11 * b.du + d21 * h * b.ddu;
    (u, du)
}

impl RadialSolution {
    /// `u'(r_end)/u(r_end)`, independent of the scale.
    pub fn log_derivative(&self) -> f64 {
        self.du1 / self.u1
    }

    /// `(u(r), u'(r))` in units of `e^{log_scale}`, from the stored nodes.
    pub fn value_at(&self, r: f64) -> Result<(f64, f64)> {
        if self.nodes.len() < 2 {
            return Err(Error::invalid("solution was computed without a profile"));
        }
        if !(r >= 0.0 && r <= self.r_end) {
            return Err(Error::invalid(format!("r = {r} outside [0, {}]", self.r_end)));
        }
        let i = match self.nodes.binary_search_by(|p| p.r.partial_cmp(&r).unwrap()) {
            Ok(i) => {
                let p = &self.nodes[i];
                return Ok((p.u, p.du));
            }
            Err(i) => i.clamp(1, self.nodes.len() - 1),
        };
        Ok(hermite5(&self.nodes[i - 1], &self.nodes[i], r))
    }

    /// Uniform resampling at `points` radii from 0 to `r_end`, with `u''`
    /// recovered from the equation (and `−Λ/n` at the origin).
    pub fn resample(&self, sf: &SpaceForm, points: usize) -> Result<Vec<ProfilePoint>> {
        if points < 2 {
            return Err(Error::invalid("resampling needs at least 2 points"));
        }
        let n1 = sf.n() as f64 - 1.0;
        (0..points)
            .map(|i| {
                let r = self.r_end * i as f64 / (points - 1) as f64;
                let (u, du) = self.value_at(r)?;
                let ddu = if r == 0.0 {
                    -self.lambda * u / sf.n() as f64
                } else {
                    -n1 * sf.c(r) / sf.s(r) * du - self.lambda * u
                };
                Ok(ProfilePoint { r, u, du, ddu })
            })
            .collect()
    }

    /// The same solution multiplied by `factor > 0`.
    pub fn scaled(mut self, factor: f64) -> Self {
        self.log_scale += factor.ln();
        self
    }

    /// Value factor `e^{log_scale}`; may overflow for very negative `Λ`.
    pub fn scale(&self) -> f64 {
        self.log_scale.exp()
    }

    /// First zero of `u` on `(0, r_end]`, located by bisection on the
    /// interpolant.
    pub fn first_zero(&self) -> Option<f64> {
        let w = self.nodes.windows(2).find(|w| w[0].u > 0.0 && w[1].u <= 0.0)?;
        let (mut lo, mut hi) = (w[0].r, w[1].r);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.value_at(mid).ok()?.0 > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

/// Interpolate a resampled profile (uniform or not) at `r`.
pub fn interpolate_profile(profile: &[ProfilePoint], r: f64) -> f64 {
    let i = profile.partition_point(|p| p.r < r).clamp(1, profile.len() - 1);
    hermite5(&profile[i - 1], &profile[i], r).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sf(n: u32, k: f64) -> SpaceForm {
        SpaceForm::new(n, k).unwrap()
    }

    /// Classical RK4 with a fixed step, started at r0 from the series.
    fn rk4_oracle(sf: &SpaceForm, lambda: f64, steps: usize) -> (f64, f64) {
        let r0 = 1e-2;
        let (a2, a4) = frobenius_coeffs(sf, lambda);
        let mut y = [1.0 + a2 * r0 * r0 + a4 * r0.powi(4), 2.0 * a2 * r0 + 4.0 * a4 * r0.powi(3)];
        let n1 = sf.n() as f64 - 1.0;
        let f = |r: f64, y: [f64; 2]| [y[1], -n1 * sf.c(r) / sf.s(r) * y[1] - lambda * y[0]];
        let h = (1.0 - r0) / steps as f64;
        for i in 0..steps {
            let r = r0 + i as f64 * h;
            let k1 = f(r, y);
            let k2 = f(r + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
            let k3 = f(r + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
            let k4 = f(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            for j in 0..2 {
                y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
        }
        (y[0], y[1])
    }

    #[test]
    fn frobenius_examples() {
        let s2 = sf(2, 1.0);
        let (u, du) = frobenius_start(&s2, 0.0, 1e-4).unwrap();
        assert_eq!((u, du), (1.0, 0.0));
        let (u, _) = frobenius_start(&s2, 1.0, 1e-4).unwrap();
        assert!((u - (1.0 - 1e-8 / 4.0)).abs() < 1e-15);
        assert!(frobenius_start(&s2, 1.0, 0.0).is_err());
        assert!(frobenius_start(&s2, 1.0, 2e-3).is_err());
    }

    #[test]
    fn frobenius_radius_is_immaterial() {
        for (n, k, lam) in [(2, 1.0, 4.0), (3, -1.0, 12.0), (4, -1.0, -30.0), (5, 1.0, 20.0)] {
            let s = sf(n, k);
            let a = RadialOptions { delta: 1e-4, ..Default::default() };
            let b = RadialOptions { delta: 5e-5, ..Default::default() };
            let x = solve_regular_with(&s, lam, 0.5, &a).unwrap();
            let y = solve_regular_with(&s, lam, 0.5, &b).unwrap();
            assert!((x.u1 - y.u1).abs() < 1e-9 * x.u1.abs());
            assert!((x.du1 - y.du1).abs() < 1e-9 * x.du1.abs().max(1e-12));
        }
    }

    #[test]
    fn constant_solution_for_zero_lambda() {
        for k in [-1.0, 1.0] {
            let s = solve_regular(&sf(3, k), 0.0).unwrap();
            assert!((s.u1 - 1.0).abs() < 1e-14);
            assert!(s.du1.abs() < 1e-14);
        }
    }

    #[test]
    fn dual_integrator_agreement() {
        let s = sf(2, -1.0);
        let a = solve_regular(&s, 5.0).unwrap();
        let (u, du) = rk4_oracle(&s, 5.0, 20_000);
        assert!((a.u1 - u).abs() < 1e-8 * u.abs(), "{} {}", a.u1, u);
        assert!((a.du1 - du).abs() < 1e-8 * du.abs(), "{} {}", a.du1, du);
    }

    #[test]
    fn half_tolerance_resolve_is_stable() {
        let s = sf(3, 1.0);
        let a = solve_regular(&s, 7.3).unwrap();
        let opts = RadialOptions { rtol: DEFAULT_RTOL / 2.0, atol: DEFAULT_ATOL / 2.0, ..Default::default() };
        let b = solve_regular_with(&s, 7.3, 1.0, &opts).unwrap();
        assert!((a.u1 - b.u1).abs() < 1e-10 * a.u1.abs());
        assert!((a.du1 - b.du1).abs() < 1e-10 * a.du1.abs());
    }

    #[test]
    fn rescaling_for_large_negative_lambda() {
        let s = sf(3, -1.0);
        let a = solve_regular(&s, -1e6).unwrap();
        assert!(a.log_scale > 100.0);
        // y = u'/u tends to √|Λ| − (n−1)/2·coth-type correction
        let y = a.log_derivative();
        assert!((y - 1000.0).abs() < 5.0, "{y}");
        // n = 3, k = −1: u = sinh(√(1−Λ) r)/(√(1−Λ) sinh r)
        let q = (1.0f64 + 1e6).sqrt();
        let exact = q / q.tanh() - 1.0 / 1f64.tanh();
        assert!((y - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn profile_interpolation() {
        // n = 3, k = 1: u = sin(√(Λ+1) r) / (√(Λ+1) sin r)
        let s = sf(3, 1.0);
        let lam = 6.0;
        let sol = solve_regular(&s, lam).unwrap();
        let q = (lam + 1.0f64).sqrt();
        for r in [0.0, 1e-7, 0.013, 0.37, 0.81, 1.0] {
            let exact = if r == 0.0 { 1.0 } else { (q * r).sin() / (q * r.sin()) };
            let (u, _) = sol.value_at(r).unwrap();
            assert!((u - exact).abs() < 1e-10, "r={r}");
        }
        let prof = sol.resample(&s, PROFILE_POINTS).unwrap();
        assert_eq!(prof.len(), PROFILE_POINTS);
        assert_eq!(prof[0].r, 0.0);
        assert_eq!(prof[PROFILE_POINTS - 1].r, 1.0);
        let mid = interpolate_profile(&prof, 0.5005);
        assert!((mid - (q * 0.5005).sin() / (q * 0.5005f64.sin())).abs() < 1e-11);
    }

    #[test]
    fn weighted_integral_matches_closed_form() {
        // n = 3, k = 1, Λ = 6: ∫ u² sin² r dr = ∫ sin²(q r)/q² dr
        let s = sf(3, 1.0);
        let sol = solve_regular(&s, 6.0).unwrap();
        let q = 7.0f64.sqrt();
        let exact = (0.5 - (2.0 * q).sin() / (4.0 * q)) / (q * q);
        assert!((sol.weighted_l2 - exact).abs() < 1e-11);
    }

    #[test]
    fn sturm_comparison() {
        let s = sf(2, -1.0);
        let mut prev = f64::INFINITY;
        for lam in [20.0, 30.0, 45.0, 70.0] {
            let z = solve_regular(&s, lam).unwrap().first_zero().unwrap();
            assert!(z < prev);
            prev = z;
        }
    }

    #[test]
    fn linear_scaling() {
        let s = sf(4, 1.0);
        let a = solve_regular(&s, 3.0).unwrap();
        let b = a.clone().scaled(2.0);
        assert!((b.scale() * b.u1 - 2.0 * a.u1).abs() < 1e-15);
        assert_eq!(a, solve_regular(&s, 3.0).unwrap());
    }
}
