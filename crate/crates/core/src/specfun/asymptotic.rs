//! Leading-order asymptotic forms of `𝒫`, `𝐐`, Ferrers `P` and `I_μ`.
//!
//! The forms near `x = 1` hold as `x → 1`; the large-degree forms hold as
//! `ν → ∞` (or `τ → ∞` for conical degree) at fixed `x = cosh ξ` or `cos θ`.

use core::f64::consts::PI;

use alloc::format;
use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::specfun::bessel::bessel_i;
use crate::specfun::gamma::{gamma_real, rgamma};
use crate::specfun::legendre::Degree;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticForm {
    /// `𝒫^μ_ν(x) ~ (2/(x−1))^{μ/2} / Γ(1−μ)` as `x → 1⁺`, `μ ∉ ℕ*`.
    LegendreUnbounded,
    /// `𝒫^μ_ν(x) ~ Γ(ν+μ+1)/(Γ(ν−μ+1) μ!) ((x−1)/2)^{μ/2}` as `x → 1⁺`, `μ ∈ ℕ*`.
    LegendreBounded,
    /// `𝐐^μ_ν(x) ~ Γ(μ)/(2Γ(ν+μ+1)) (2/(x−1))^{μ/2}` as `x → 1⁺`, `μ > 0`.
    LegendreQUnbounded,
    /// `P^μ_ν(x) ~ (2/(1−x))^{μ/2} / Γ(1−μ)` as `x → 1⁻`, `μ ∉ ℕ*`.
    FerrersUnbounded,
    /// `P^μ_ν(x) ~ (−1)^μ Γ(ν+μ+1)/(Γ(ν−μ+1) μ!) ((1−x)/2)^{μ/2}`, `μ ∈ ℕ*`.
    FerrersBounded,
    /// `𝒫^{−μ}_ν(cosh ξ) ~ ν^{−μ} (ξ/sinh ξ)^{1/2} I_μ((ν+1/2)ξ)` as `ν → ∞`.
    LegendreLargeDegree,
    /// `𝒫^{μ}_ν(cosh ξ) ~ ν^{μ} (ξ/sinh ξ)^{1/2} I_μ((ν+1/2)ξ)`, integer `μ`.
    LegendreLargeDegreeInteger,
    /// `I_μ(ν+1/2) ~ e^{ν+1/2} / √(π(2ν+1))`; `x` is unused.
    BesselLargeArgument,
    /// `P^{−μ}_{−1/2+iτ}(cos θ) ~ τ^{−μ} (θ/sin θ)^{1/2} I_μ(τθ)` as `τ → ∞`.
    ConicalLargeTau,
}

impl AsymptoticForm {
    pub const ALL: [AsymptoticForm; 9] = [
        AsymptoticForm::LegendreUnbounded,
        AsymptoticForm::LegendreBounded,
        AsymptoticForm::LegendreQUnbounded,
        AsymptoticForm::FerrersUnbounded,
        AsymptoticForm::FerrersBounded,
        AsymptoticForm::LegendreLargeDegree,
        AsymptoticForm::LegendreLargeDegreeInteger,
        AsymptoticForm::BesselLargeArgument,
        AsymptoticForm::ConicalLargeTau,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AsymptoticForm::LegendreUnbounded => "legendre-unbounded",
            AsymptoticForm::LegendreBounded => "legendre-bounded",
            AsymptoticForm::LegendreQUnbounded => "legendre-q-unbounded",
            AsymptoticForm::FerrersUnbounded => "ferrers-unbounded",
            AsymptoticForm::FerrersBounded => "ferrers-bounded",
            AsymptoticForm::LegendreLargeDegree => "legendre-large-degree",
            AsymptoticForm::LegendreLargeDegreeInteger => "legendre-large-degree-integer",
            AsymptoticForm::BesselLargeArgument => "bessel-large-argument",
            AsymptoticForm::ConicalLargeTau => "conical-large-tau",
        }
    }
}

fn positive_integer(v: f64) -> bool {
    v >= 1.0 && v == v.round()
}

fn reject(form: AsymptoticForm, why: &str) -> Error {
    Error::invalid(format!("{}: side condition violated: {why}", form.name()))
}

/// `Γ(ν+μ+1)/Γ(ν−μ+1)` for integer `μ ≥ 0`, as the finite product
/// `(ν−μ+1)(ν−μ+2)⋯(ν+μ)`; real for real and conical `ν`.
fn gamma_ratio_integer(nu: Complex64, mu: u32) -> f64 {
    let mut p = Complex64::new(1.0, 0.0);
    for j in 0..2 * mu {
        p *= nu - mu as f64 + 1.0 + j as f64;
    }
    p.re
}

fn factorial(m: u32) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

fn real_degree(form: AsymptoticForm, nu: Degree) -> Result<f64> {
    if nu.is_conical() || !(nu.value().re > 0.0) {
        return Err(reject(form, "needs a real degree nu > 0"));
    }
    Ok(nu.value().re)
}

/// Leading-order value of `form` at `(μ, ν, x)`.
pub fn asymptotic_form(form: AsymptoticForm, mu: f64, nu: Degree, x: f64) -> Result<f64> {
    use AsymptoticForm::*;
    let v = nu.value();
    match form {
        LegendreUnbounded | FerrersUnbounded => {
            if positive_integer(mu) {
                return Err(reject(form, "mu must not be a positive integer"));
            }
            let d = if form == LegendreUnbounded {
                if !(x > 1.0) {
                    return Err(reject(form, "x must be > 1"));
                }
                x - 1.0
            } else {
                if !(x > -1.0 && x < 1.0) {
                    return Err(reject(form, "x must lie in (-1, 1)"));
                }
                1.0 - x
            };
            Ok((2.0 / d).powf(mu / 2.0) * rgamma(Complex64::new(1.0 - mu, 0.0)).re)
        }
        LegendreBounded | FerrersBounded => {
            if !positive_integer(mu) {
                return Err(reject(form, "mu must be a positive integer"));
            }
            let m = mu as u32;
            if !nu.is_conical() {
                // The Gamma ratio must not vanish: ν ∉ {μ−1, …, −μ}.
                let r = v.re;
                if r == r.round() && r <= mu - 1.0 && r >= -mu {
                    return Err(reject(form, "nu must avoid mu-1, mu-2, ..., -mu"));
                }
            }
            let ratio = gamma_ratio_integer(v, m) / factorial(m);
            if form == LegendreBounded {
                if !(x > 1.0) {
                    return Err(reject(form, "x must be > 1"));
                }
                Ok(ratio * ((x - 1.0) / 2.0).powf(mu / 2.0))
            } else {
                if !(x > -1.0 && x < 1.0) {
                    return Err(reject(form, "x must lie in (-1, 1)"));
                }
                let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
                Ok(sign * ratio * ((1.0 - x) / 2.0).powf(mu / 2.0))
            }
        }
        LegendreQUnbounded => {
            if !(mu > 0.0) {
                return Err(reject(form, "Re(mu) must be > 0"));
            }
            if nu.is_conical() {
                return Err(reject(form, "conical Q is complex-valued"));
            }
            if positive_integer(-(v.re + mu)) {
                return Err(reject(form, "-(nu + mu) must not be a positive integer"));
            }
            if !(x > 1.0) {
                return Err(reject(form, "x must be > 1"));
            }
            let g = gamma_real(mu) * rgamma(v + mu + 1.0).re;
            Ok(g / 2.0 * (2.0 / (x - 1.0)).powf(mu / 2.0))
        }
        LegendreLargeDegree | LegendreLargeDegreeInteger => {
            let r = real_degree(form, nu)?;
            if form == LegendreLargeDegreeInteger && mu != mu.round() {
                return Err(reject(form, "mu must be an integer"));
            }
            if !(mu >= 0.0) || !(x > 1.0) {
                return Err(reject(form, "needs mu >= 0 and x > 1"));
            }
            let xi = x.acosh();
            let i = bessel_i(mu, (r + 0.5) * xi)?;
            let p = if form == LegendreLargeDegree { r.powf(-mu) } else { r.powf(mu) };
            Ok(p * (xi / xi.sinh()).sqrt() * i)
        }
        BesselLargeArgument => {
            let r = real_degree(form, nu)?;
            Ok((r + 0.5).exp() / (PI * (2.0 * r + 1.0)).sqrt())
        }
        ConicalLargeTau => {
            let tau = nu.tau().ok_or_else(|| reject(form, "needs a conical degree"))?;
            if !(mu >= 0.0) || !(x > -1.0 && x < 1.0) {
                return Err(reject(form, "needs mu >= 0 and x in (-1, 1)"));
            }
            let th = x.acos();
            Ok(tau.powf(-mu) * (th / th.sin()).sqrt() * bessel_i(mu, tau * th)?)
        }
    }
}
