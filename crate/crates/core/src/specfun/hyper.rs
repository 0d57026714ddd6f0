//! Olver's regularized hypergeometric function
//! `𝐅(a, b; c; z) = Σ (a)_s (b)_s / Γ(c + s) · z^s / s!`, summed directly.
//!
//! Terms with `c + s ∈ {0, −1, …}` vanish. When `c = −N` the series starts at
//! `s = N + 1` with coefficient `(a)_{N+1} (b)_{N+1} / (N+1)!`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::gamma::{is_gamma_pole, rgamma};

pub const DEFAULT_TERM_CAP: usize = 10_000;
const STOP_RATIO: f64 = 1e-17;
const STOP_RUN: usize = 3;

/// Value of a summed series together with the largest partial-sum modulus
/// encountered, which bounds the rounding error of the sum.
#[derive(Debug, Clone, Copy)]
pub struct SeriesSum {
    pub value: Complex64,
    pub scale: f64,
    pub terms: usize,
}

pub fn olver_hyp(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    olver_series(a, b, c, z, DEFAULT_TERM_CAP).map(|s| s.value)
}

pub fn olver_series(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: Complex64,
    cap: usize,
) -> Result<SeriesSum> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::invalid("hypergeometric argument must be finite"));
    }

    // First nonzero index and its term.
    let (start, mut term) = if is_gamma_pole(c) {
        let n = (-c.re) as usize + 1;
        let mut t = Complex64::new(1.0, 0.0);
        for s in 0..n {
            t *= (a + s as f64) * (b + s as f64) * z / (s as f64 + 1.0);
        }
        (n, t)
    } else {
        (0, rgamma(c))
    };

    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale: f64 = 0.0;
    let mut small_run = 0;
    let mut s = start;
    loop {
        sum += term;
        let mag = sum.norm();
        if !mag.is_finite() {
            return Err(Error::Overflow("hypergeometric series"));
        }
        scale = scale.max(mag);
        if term.norm() <= STOP_RATIO * scale {
            small_run += 1;
            if small_run >= STOP_RUN {
                return Ok(SeriesSum { value: sum, scale, terms: s + 1 - start });
            }
        } else {
            small_run = 0;
        }
        if s + 1 - start >= cap {
            return Err(Error::SeriesDivergence { terms: cap, residual: term.norm() });
        }
        let sf = s as f64;
        term *= (a + sf) * (b + sf) * z / ((c + sf) * (sf + 1.0));
        s += 1;
    }
}
