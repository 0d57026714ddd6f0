//! Modified Bessel function of the first kind by its ascending series.

use alloc::format;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::specfun::gamma::rgamma_real;

const TERM_CAP: usize = 10_000;

/// `I_μ(x) = Σ (x/2)^{2s+μ} / (s! Γ(s+μ+1))` for `μ ≥ 0`, `x ≥ 0`.
pub fn bessel_i(mu: f64, x: f64) -> Result<f64> {
    if !(mu >= 0.0) || !(x >= 0.0) || !x.is_finite() || !mu.is_finite() {
        return Err(Error::invalid(format!("bessel_i needs mu >= 0 and x >= 0, got mu = {mu}, x = {x}")));
    }
    if x == 0.0 {
        return Ok(if mu == 0.0 { 1.0 } else { 0.0 });
    }
    // All terms are positive; the sum is accurate to rounding.
    let half = x / 2.0;
    let mut term = half.powf(mu) * rgamma_real(mu + 1.0);
    let q = half * half;
    let mut sum = 0.0;
    for s in 0..TERM_CAP {
        sum += term;
        if !sum.is_finite() {
            return Err(Error::Overflow("bessel_i"));
        }
        let next = term * q / ((s as f64 + 1.0) * (s as f64 + 1.0 + mu));
        if next <= 1e-17 * sum && (s as f64) > half {
            return Ok(sum);
        }
        term = next;
    }
    Err(Error::SeriesDivergence { terms: TERM_CAP, residual: term })
}
