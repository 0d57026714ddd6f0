//! Space-form primitives: the warping functions `S_k`, `C_k`, the drift
//! coefficient of the radial Laplacian, and unit-sphere volumes.

use core::f64::consts::PI;

use alloc::format;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::specfun::gamma::gamma_real;

/// Ambient geometry `𝕄ⁿ(k)` with the geodesic ball of radius 1 at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceForm {
    n: u32,
    k: f64,
}

impl SpaceForm {
    pub fn new(n: u32, k: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("dimension n = {n} must be >= 2")));
        }
        if !k.is_finite() || k == 0.0 {
            return Err(Error::invalid(format!("curvature k = {k} must be finite and nonzero")));
        }
        if k > 0.0 && PI / k.sqrt() <= 1.0 {
            return Err(Error::invalid(format!(
                "curvature k = {k} too large: the unit ball needs 1 < pi/sqrt(k)"
            )));
        }
        Ok(SpaceForm { n, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `√|k|`.
    pub fn sqrt_abs_k(&self) -> f64 {
        self.k.abs().sqrt()
    }

    /// Legendre order `μ = (n − 2)/2`.
    pub fn mu(&self) -> f64 {
        (self.n as f64 - 2.0) / 2.0
    }

    /// True when `μ` is an integer (n even).
    pub fn mu_is_integer(&self) -> bool {
        self.n.is_multiple_of(2)
    }

    /// Upper end of the radial coordinate: `π/√k` for `k > 0`, unbounded otherwise.
    pub fn radial_limit(&self) -> f64 {
        if self.k > 0.0 {
            PI / self.k.sqrt()
        } else {
            f64::INFINITY
        }
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if !(r >= 0.0) {
            return Err(Error::invalid(format!("radius r = {r} must be >= 0")));
        }
        if r >= self.radial_limit() {
            return Err(Error::invalid(format!(
                "radius r = {r} must be < pi/sqrt(k) = {}",
                self.radial_limit()
            )));
        }
        Ok(())
    }

    /// Unchecked `S_k(r)`; callers guarantee the domain.
    pub(crate) fn s(&self, r: f64) -> f64 {
        let q = self.sqrt_abs_k();
        if self.k < 0.0 {
            (q * r).sinh() / q
        } else {
            (q * r).sin() / q
        }
    }

    /// Unchecked `C_k(r)`.
    pub(crate) fn c(&self, r: f64) -> f64 {
        let q = self.sqrt_abs_k();
        if self.k < 0.0 {
            (q * r).cosh()
        } else {
            (q * r).cos()
        }
    }

    /// Unchecked `(n − 1) C_k(r)/S_k(r)` for `r > 0`.
    pub(crate) fn drift(&self, r: f64) -> f64 {
        (self.n as f64 - 1.0) * self.c(r) / self.s(r)
    }

    pub fn s_k(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        Ok(self.s(r))
    }

    pub fn c_k(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        Ok(self.c(r))
    }

    /// Drift coefficient of `Δ_g = ∂_r² + (n−1) C_k/S_k ∂_r` on radial functions.
    ///
    /// `r = 0` is the regular singular point and is refused; the radial solver
    /// starts from a Frobenius expansion instead.
    pub fn radial_drift(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        if r == 0.0 {
            return Err(Error::invalid("radial_drift is singular at r = 0"));
        }
        Ok(self.drift(r))
    }
}

/// `Vol(S^{n−1}) = 2 π^{n/2} / Γ(n/2)`.
pub fn sphere_volume(n: u32) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * PI.powf(h) / gamma_real(h)
}
