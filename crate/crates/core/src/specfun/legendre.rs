//! Associated Legendre functions `𝒫^m_ν` on `(1, ∞)`, `𝐐^μ_ν` on `(3, ∞)`,
//! and Ferrers functions `P^m_ν` on `(−1, 1)`, all through Olver's `𝐅`.
//!
//! Degrees are either real or conical (`ν = −1/2 + iτ`). For both kinds the
//! functions `𝒫` and Ferrers `P` are real, so the real-valued entry points
//! return the real part of the complex evaluation; the `_complex` variants
//! expose the full value.

use core::f64::consts::PI;

use alloc::format;
use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::specfun::gamma::{ln_gamma, rgamma};
use crate::specfun::hyper::olver_hyp;

/// Above this argument `𝒫` is summed after a Pfaff transformation, since the
/// defining series in `(1 − x)/2` diverges for `x > 3`.
pub const PFAFF_SWITCH: f64 = 2.0;

/// Conical degrees leave the series in `(1 − x)/2` once `τ √((x−1)/2)`
/// exceeds this; its terms then grow like `exp(2τ√((x−1)/2))` before cancelling.
pub const CONICAL_SWITCH: f64 = 3.0;

/// Legendre/Ferrers degree: real, or conical `−1/2 + iτ` with `τ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Degree(Complex64);

impl Degree {
    pub fn new(nu: Complex64) -> Result<Self> {
        if !(nu.re.is_finite() && nu.im.is_finite()) {
            return Err(Error::invalid("degree must be finite"));
        }
        if nu.im == 0.0 || (nu.re == -0.5 && nu.im > 0.0) {
            Ok(Degree(nu))
        } else {
            Err(Error::invalid(format!(
                "degree {nu} is neither real nor conical (-1/2 + i tau, tau > 0)"
            )))
        }
    }

    pub fn real(nu: f64) -> Result<Self> {
        Self::new(Complex64::new(nu, 0.0))
    }

    pub fn conical(tau: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::invalid(format!("conical degree needs tau > 0, got {tau}")));
        }
        Self::new(Complex64::new(-0.5, tau))
    }

    /// `ν = −1/2 + √((n−1)²/4 + Λ/k)`, taking the root with nonnegative
    /// imaginary part.
    pub fn from_eigenvalue(n: u32, lambda: f64, k: f64) -> Result<Self> {
        if k == 0.0 || !k.is_finite() || !lambda.is_finite() {
            return Err(Error::invalid("degree needs finite lambda and nonzero k"));
        }
        let h = (n as f64 - 1.0) / 2.0;
        let d = h * h + lambda / k;
        if d >= 0.0 {
            Self::real(-0.5 + d.sqrt())
        } else {
            Self::conical((-d).sqrt())
        }
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn is_conical(&self) -> bool {
        self.0.im != 0.0
    }

    /// `τ` for a conical degree.
    pub fn tau(&self) -> Option<f64> {
        self.is_conical().then_some(self.0.im)
    }
}

/// Order `μ = (n − 2)/2`, stored as `2μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Order {
    twice: u32,
}

impl Order {
    pub fn new(mu: f64) -> Result<Self> {
        let t = 2.0 * mu;
        if !(t >= 0.0) || t != t.round() || t > u32::MAX as f64 {
            return Err(Error::invalid(format!("order {mu} must be a nonnegative multiple of 1/2")));
        }
        Ok(Order { twice: t as u32 })
    }

    pub fn from_dimension(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("dimension n = {n} must be >= 2")));
        }
        Ok(Order { twice: n - 2 })
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn is_integer(&self) -> bool {
        self.twice.is_multiple_of(2)
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check_legendre_arg(x: f64) -> Result<()> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::invalid(format!("Legendre argument x = {x} must be > 1")));
    }
    Ok(())
}

fn check_ferrers_arg(x: f64) -> Result<()> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::invalid(format!("Ferrers argument x = {x} must lie in (-1, 1)")));
    }
    Ok(())
}

/// `𝒫^m_ν(x)` for `x > 1`.
pub fn legendre_p_complex(m: f64, nu: Degree, x: f64) -> Result<Complex64> {
    check_legendre_arg(x)?;
    if let Some(tau) = nu.tau() {
        if x >= PFAFF_SWITCH || tau * ((x - 1.0) / 2.0).sqrt() > CONICAL_SWITCH {
            return conical_large_x(m, tau, x);
        }
    }
    let nu = nu.value();
    let pre = ((x + 1.0) / (x - 1.0)).powf(m / 2.0);
    if x < PFAFF_SWITCH {
        Ok(olver_hyp(nu + 1.0, -nu, re(1.0 - m), re((1.0 - x) / 2.0))? * pre)
    } else {
        let damp = ((-nu - 1.0) * ((x + 1.0) / 2.0).ln()).exp();
        let f = olver_hyp(nu + 1.0, nu + 1.0 - m, re(1.0 - m), re((x - 1.0) / (x + 1.0)))?;
        Ok(f * damp * pre)
    }
}

/// Conical `𝒫^m_{−1/2+iτ}(x)` as `2 Re T`, where
/// `T = 2^ν Γ(ν+1/2)/(√π Γ(ν−m+1)) x^{ν+m} (x²−1)^{−m/2} F(−(ν+m)/2, (1−ν−m)/2; 1/2−ν; 1/x²)`
/// and the companion term with `ν → −ν−1` is its conjugate.
fn conical_large_x(m: f64, tau: f64, x: f64) -> Result<Complex64> {
    let nu = Complex64::new(-0.5, tau);
    // Γ(ν+1/2) Γ(1/2−ν) = π / (i sinh πτ), folded into the log prefactor
    // together with 1/Γ(1/2−ν) from the regularized 𝐅.
    let log_sinh_inv = 2f64.ln() - PI * tau - (-(-2.0 * PI * tau).exp()).ln_1p();
    let log_t = nu * 2f64.ln() + (nu + m) * x.ln() - re(0.5 * m * (x * x - 1.0).ln())
        + re(0.5 * PI.ln() + log_sinh_inv)
        - Complex64::new(0.0, PI / 2.0)
        - ln_gamma(nu - m + 1.0)?;
    let f = olver_hyp(-(nu + m) / 2.0, (-nu - m + 1.0) / 2.0, -nu + 0.5, re(1.0 / (x * x)))?;
    Ok(re(2.0 * (log_t.exp() * f).re))
}

pub fn legendre_p(m: f64, nu: Degree, x: f64) -> Result<f64> {
    legendre_p_complex(m, nu, x).map(|v| v.re)
}

/// Ferrers `P^m_ν(x)` for `|x| < 1`.
pub fn ferrers_p_complex(m: f64, nu: Degree, x: f64) -> Result<Complex64> {
    check_ferrers_arg(x)?;
    let nu = nu.value();
    let pre = ((1.0 + x) / (1.0 - x)).powf(m / 2.0);
    Ok(olver_hyp(nu + 1.0, -nu, re(1.0 - m), re((1.0 - x) / 2.0))? * pre)
}

pub fn ferrers_p(m: f64, nu: Degree, x: f64) -> Result<f64> {
    ferrers_p_complex(m, nu, x).map(|v| v.re)
}

/// `𝐐^μ_ν(x)` for `x > 3`, where the series in `2/(1 − x)` converges.
pub fn legendre_q_complex(mu: f64, nu: Degree, x: f64) -> Result<Complex64> {
    if !(x > 3.0) || !x.is_finite() {
        return Err(Error::invalid(format!(
            "legendre_q needs x > 3 for its series; got x = {x}"
        )));
    }
    let nu = nu.value();
    let log_pre = nu * 2f64.ln() + ln_gamma(nu + 1.0)? + (mu / 2.0 - nu - 1.0) * (x - 1.0).ln()
        - re(mu / 2.0 * (x + 1.0).ln());
    let f = olver_hyp(nu + 1.0, nu - mu + 1.0, nu * 2.0 + 2.0, re(2.0 / (1.0 - x)))?;
    Ok(log_pre.exp() * f)
}

/// Real `𝐐^μ_ν(x)`; conical degrees give complex values and are refused.
pub fn legendre_q(mu: f64, nu: Degree, x: f64) -> Result<f64> {
    if nu.is_conical() {
        return Err(Error::invalid("legendre_q is complex for conical degree; use legendre_q_complex"));
    }
    legendre_q_complex(mu, nu, x).map(|v| v.re)
}

/// `𝐐^μ_ν(x)` for non-integer `μ` and any `x > 1`, through
/// `𝐐 = π/(2 sin μπ) [𝒫^μ/Γ(ν+μ+1) − 𝒫^{−μ}/Γ(ν−μ+1)]`.
pub fn legendre_q_connection(mu: f64, nu: Degree, x: f64) -> Result<Complex64> {
    let s = (mu * PI).sin();
    if s.abs() < 1e-12 {
        return Err(Error::invalid(format!("connection form of Q needs non-integer mu, got {mu}")));
    }
    let v = nu.value();
    let plus = legendre_p_complex(mu, nu, x)? * rgamma(v + mu + 1.0);
    let minus = legendre_p_complex(-mu, nu, x)? * rgamma(v - mu + 1.0);
    Ok((plus - minus) * (PI / (2.0 * s)))
}

/// `d/dx 𝒫^m_ν(x) = [√(x²−1) 𝒫^{m+1}_ν + m x 𝒫^m_ν] / (x² − 1)`.
pub fn legendre_p_deriv(m: f64, nu: Degree, x: f64) -> Result<f64> {
    check_legendre_arg(x)?;
    let q = x * x - 1.0;
    Ok((q.sqrt() * legendre_p(m + 1.0, nu, x)? + m * x * legendre_p(m, nu, x)?) / q)
}

/// `d/dx P^m_ν(x) = [√(1−x²) P^{m+1}_ν + m x P^m_ν] / (x² − 1)`.
pub fn ferrers_p_deriv(m: f64, nu: Degree, x: f64) -> Result<f64> {
    check_ferrers_arg(x)?;
    let q = 1.0 - x * x;
    Ok((q.sqrt() * ferrers_p(m + 1.0, nu, x)? + m * x * ferrers_p(m, nu, x)?) / -q)
}
