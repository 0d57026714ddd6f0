//! Complex log-gamma on the principal branch, `Γ` and `1/Γ`.
//!
//! Stirling's series is used for `Re w ≥ 17`; smaller arguments are shifted up
//! by the recurrence `ln Γ(z) = ln Γ(z + N) − Σ ln(z + i)`. Every `ln(z + i)`
//! is a principal logarithm whose cut lies on `(−∞, −i]`, so the sum is
//! continuous on `ℂ \ (−∞, 0]` and real on the positive axis: it is the
//! principal branch of `ln Γ` everywhere off the cut.

use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};

const STIRLING_MIN: f64 = 17.0;

// B_{2k} / (2k (2k − 1)) for k = 1..=8
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// True if `z` is `0, −1, −2, …`.
pub fn is_gamma_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn stirling(w: Complex64) -> Complex64 {
    let ln_w = w.ln();
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING_COEFFS {
        corr += p * c;
        p *= inv2;
    }
    (w - 0.5) * ln_w - w + 0.5 * (2.0 * PI).ln() + corr
}

/// Principal branch of `ln Γ(z)`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::invalid("ln_gamma argument must be finite"));
    }
    if is_gamma_pole(z) {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    let shift = if z.re < STIRLING_MIN {
        (STIRLING_MIN - z.re).ceil() as usize
    } else {
        0
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..shift {
        acc += (z + i as f64).ln();
    }
    Ok(stirling(z + shift as f64) - acc)
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

/// `1/Γ(z)`, entire: exactly zero at the poles of `Γ`.
pub fn rgamma(z: Complex64) -> Complex64 {
    match ln_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

/// Real `Γ(x)`; infinite at the poles.
pub fn gamma_real(x: f64) -> f64 {
    match gamma(Complex64::new(x, 0.0)) {
        Ok(g) => g.re,
        Err(_) => f64::INFINITY,
    }
}

pub fn rgamma_real(x: f64) -> f64 {
    rgamma(Complex64::new(x, 0.0)).re
}
