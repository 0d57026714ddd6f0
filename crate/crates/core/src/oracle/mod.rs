//! Finite-difference cross-checks, independent of the shooting integrator and
//! of the hypergeometric closed forms.
//!
//! The radial operator `−(S^{n−1} u')' / S^{n−1}` is discretized by finite
//! volumes on `r_i = i/m`: cell 0 is the half cell `[0, h/2]` with zero flux
//! through the origin (the ghost reflection `u_{−1} = u_1`), interior cells are
//! centred on the nodes, and `u_m = 0` or a prescribed boundary value closes
//! the system.

mod dtn;

pub use dtn::{discrete_shift, fd_dtn_matrix, DtnMatrix, DtnMethod};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::dispersion::shifted_parameter;
use crate::error::{Error, Result};
use crate::geometry::SpaceForm;
use crate::linalg::solve_tridiagonal;
use crate::quadrature::GaussLegendre;
use crate::spectral::GroundState;

pub const MIN_INTERVALS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FDGrid {
    pub m: usize,
    pub m_t: Option<usize>,
}

impl FDGrid {
    pub fn radial(m: usize) -> Result<Self> {
        if m < MIN_INTERVALS {
            return Err(Error::invalid(format!("need m >= {MIN_INTERVALS}, got {m}")));
        }
        Ok(FDGrid { m, m_t: None })
    }

    pub fn cylinder(m: usize, m_t: usize) -> Result<Self> {
        let g = Self::radial(m)?;
        if m_t < MIN_INTERVALS || !m_t.is_multiple_of(2) {
            return Err(Error::invalid(format!("need even m_t >= {MIN_INTERVALS}, got {m_t}")));
        }
        Ok(FDGrid { m_t: Some(m_t), ..g })
    }

    pub fn h(&self) -> f64 {
        1.0 / self.m as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.h()
    }
}

/// Finite-volume coefficients for unknowns `u_0..u_{m−1}`: the row for cell
/// `i` reads `(flux[i]·(u_i − u_{i+1}) + flux[i−1]·(u_i − u_{i−1})) / (h² mass[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialStencil {
    pub h: f64,
    /// `S^{n−1}` at `r_{i+1/2}`, `i = 0..m−1`.
    pub flux: Vec<f64>,
    /// Cell average of `S^{n−1}` (per unit `h`), `i = 0..m−1`.
    pub mass: Vec<f64>,
}

impl RadialStencil {
    pub fn new(sf: &SpaceForm, grid: &FDGrid) -> Self {
        let (m, h) = (grid.m, grid.h());
        let n1 = sf.n() as f64 - 1.0;
        let w = |r: f64| sf.s(r).powf(n1);
        let gl = GaussLegendre::new(8);
        let flux = (0..m).map(|i| w((i as f64 + 0.5) * h)).collect();
        let mass = (0..m)
            .map(|i| {
                let a = if i == 0 { 0.0 } else { (i as f64 - 0.5) * h };
                gl.integrate(a, (i as f64 + 0.5) * h, w) / h
            })
            .collect();
        RadialStencil { h, flux, mass }
    }

    /// Bands of `−Δ_r − Λ` on the unknowns, with the coupling to `u_m`
    /// returned separately.
    fn bands(&self, lambda: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>, f64) {
        let m = self.flux.len();
        let h2 = self.h * self.h;
        let mut sub = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut sup = vec![0.0; m];
        for i in 0..m {
            let left = if i == 0 { 0.0 } else { self.flux[i - 1] };
            let right = self.flux[i];
            let s = h2 * self.mass[i];
            diag[i] = (left + right) / s - lambda;
            if i > 0 {
                sub[i] = -left / s;
            }
            if i + 1 < m {
                sup[i] = -right / s;
            }
        }
        let boundary = self.flux[m - 1] / (h2 * self.mass[m - 1]);
        (sub, diag, sup, boundary)
    }

    /// Symmetric form `B^{−1/2} A B^{−1/2}` of the Dirichlet operator.
    pub fn symmetric(&self) -> SymTridiagonal {
        let m = self.flux.len();
        let h2 = self.h * self.h;
        let diag = (0..m)
            .map(|i| (if i == 0 { 0.0 } else { self.flux[i - 1] } + self.flux[i]) / (h2 * self.mass[i]))
            .collect();
        let off = (0..m - 1).map(|i| -self.flux[i] / (h2 * (self.mass[i] * self.mass[i + 1]).sqrt())).collect();
        SymTridiagonal { diag, off }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    /// `L Lᵀ` factorization; fails unless the matrix is positive definite.
    pub fn cholesky(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.diag.len();
        let mut d = vec![0.0; n];
        let mut l = vec![0.0; n.saturating_sub(1)];
        for i in 0..n {
            let p = self.diag[i] - if i > 0 { l[i - 1] * l[i - 1] } else { 0.0 };
            if !(p > 0.0) {
                return Err(Error::Singular { estimate: p });
            }
            d[i] = p.sqrt();
            if i + 1 < n {
                l[i] = self.off[i] / d[i];
            }
        }
        Ok((d, l))
    }

    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.diag.len();
        let sub: Vec<f64> = (0..n).map(|i| if i == 0 { 0.0 } else { self.off[i - 1] }).collect();
        let sup: Vec<f64> = (0..n).map(|i| if i + 1 < n { self.off[i] } else { 0.0 }).collect();
        let diag: Vec<f64> = self.diag.iter().map(|d| d - shift).collect();
        solve_tridiagonal(&sub, &diag, &sup, rhs)
    }

    fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Smallest eigenvalue by inverse iteration, switching to a Rayleigh
    /// shift once the estimate settles.
    pub fn smallest_eigenvalue(&self) -> Result<f64> {
        const MAX_ITER: usize = 500;
        let n = self.diag.len();
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 - 0.5 * i as f64 / n as f64).collect();
        let mut shift = 0.0;
        let mut prev = f64::INFINITY;
        let norm_a = (0..n)
            .map(|i| {
                self.diag[i].abs()
                    + if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                    + if i + 1 < n { self.off[i].abs() } else { 0.0 }
            })
            .fold(0.0, f64::max);
        for it in 0..MAX_ITER {
            let y = self.solve_shifted(shift, &x)?;
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            x = y.into_iter().map(|v| v / norm).collect();
            let ax = self.mul_vec(&x);
            let rq: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
            let resid = ax.iter().zip(&x).map(|(a, b)| (a - rq * b).powi(2)).sum::<f64>().sqrt();
            if resid <= 1e-12 * rq.abs() || (resid <= 1e-10 * norm_a && (rq - prev).abs() <= 1e-14 * rq.abs()) {
                return Ok(rq);
            }
            if it >= 8 && (rq - prev).abs() < 1e-3 * rq.abs() {
                shift = rq * (1.0 - 1e-6);
            }
            prev = rq;
        }
        Err(Error::EigenNoConvergence { iterations: MAX_ITER })
    }
}

/// Oracle value with a refinement-based error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdEstimate {
    /// Richardson value `(4 v_{2m} − v_m)/3`.
    pub value: f64,
    /// `|v_{2m} − v_m| / 3`.
    pub error: f64,
    pub coarse: f64,
    pub fine: f64,
}

impl FdEstimate {
    pub fn richardson(coarse: f64, fine: f64) -> Self {
        FdEstimate { value: (4.0 * fine - coarse) / 3.0, error: (fine - coarse).abs() / 3.0, coarse, fine }
    }
}

/// Discrete `λ₁` on `m` intervals without extrapolation.
pub fn fd_lambda1_raw(sf: &SpaceForm, m: usize) -> Result<f64> {
    let grid = FDGrid::radial(m)?;
    RadialStencil::new(sf, &grid).symmetric().smallest_eigenvalue()
}

/// `λ₁` from grids `m` and `2m`, Richardson-extrapolated.
pub fn fd_lambda1(sf: &SpaceForm, m: usize) -> Result<FdEstimate> {
    Ok(FdEstimate::richardson(fd_lambda1_raw(sf, m)?, fd_lambda1_raw(sf, 2 * m)?))
}

/// One-sided fourth-order derivative at the last node.
pub fn boundary_derivative(u: &[f64], h: f64) -> f64 {
    let k = u.len();
    (25.0 * u[k - 1] - 48.0 * u[k - 2] + 36.0 * u[k - 3] - 16.0 * u[k - 4] + 3.0 * u[k - 5]) / (12.0 * h)
}

/// Nodal solution of `u'' + (n−1)(C/S) u' + Λ u = 0`, `u(1) = boundary`,
/// including the boundary node.
pub fn fd_radial_solve(st: &RadialStencil, lambda: f64, boundary: f64) -> Result<Vec<f64>> {
    let (sub, diag, sup, coupling) = st.bands(lambda);
    let mut rhs = vec![0.0; diag.len()];
    *rhs.last_mut().unwrap() = coupling * boundary;
    let mut u = solve_tridiagonal(&sub, &diag, &sup, &rhs)
        .map_err(|e| Error::Degenerate(format!("FD boundary-value problem at Lambda = {lambda}: {e}")))?;
    u.push(boundary);
    Ok(u)
}

/// `σ` at an arbitrary shifted parameter `Λ` on `m` intervals.
pub fn fd_sigma_at(gs: &GroundState, sf: &SpaceForm, lambda: f64, m: usize) -> Result<f64> {
    let grid = FDGrid::radial(m)?;
    let st = RadialStencil::new(sf, &grid);
    let c = fd_radial_solve(&st, lambda, -gs.dphi1)?;
    Ok(boundary_derivative(&c, grid.h()) + gs.ddphi1)
}

/// FD value of `σ_j(T)` on `m` intervals.
pub fn fd_sigma(gs: &GroundState, sf: &SpaceForm, t: f64, j: u32, m: usize) -> Result<f64> {
    fd_sigma_at(gs, sf, shifted_parameter(gs.lambda1, t, j), m)
}

/// `fd_sigma` on `m` and `2m`, Richardson-extrapolated.
pub fn fd_sigma_estimate(gs: &GroundState, sf: &SpaceForm, t: f64, j: u32, m: usize) -> Result<FdEstimate> {
    Ok(FdEstimate::richardson(fd_sigma(gs, sf, t, j, m)?, fd_sigma(gs, sf, t, j, 2 * m)?))
}

/// Observed orders `log₂(|e_m| / |e_{2m}|)` against a reference value over
/// successive grid doublings.
pub fn observed_orders(values: &[f64], reference: f64) -> Vec<f64> {
    values.windows(2).map(|w| ((w[0] - reference).abs() / (w[1] - reference).abs()).log2()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::sigma_ode;
    use crate::spectral::ground_state;
    use core::f64::consts::PI;

    fn sf(n: u32, k: f64) -> SpaceForm {
        SpaceForm::new(n, k).unwrap()
    }

    #[test]
    fn grid_bounds() {
        assert!(FDGrid::radial(8).is_err());
        assert!(FDGrid::cylinder(32, 17).is_err());
        assert_eq!(FDGrid::cylinder(32, 16).unwrap().m_t, Some(16));
    }

    #[test]
    fn three_dimensional_eigenvalue() {
        for k in [-1.0, 1.0] {
            let e = fd_lambda1(&sf(3, k), 64).unwrap();
            let exact = PI * PI - k;
            assert!((e.value - exact).abs() <= e.error, "k={k} {e:?}");
            assert!((e.fine - exact).abs() < (e.coarse - exact).abs());
        }
    }

    #[test]
    fn operator_is_positive_definite() {
        for (n, k) in [(2, 1.0), (4, -1.0), (7, 1.0)] {
            let st = RadialStencil::new(&sf(n, k), &FDGrid::radial(32).unwrap());
            st.symmetric().cholesky().unwrap();
        }
        let bad = SymTridiagonal { diag: vec![1.0, -1.0], off: vec![0.0] };
        assert!(bad.cholesky().is_err());
    }

    #[test]
    fn disk_eigenvalues_match_shooting() {
        for k in [-1.0, 1.0] {
            let s = sf(2, k);
            let gs = ground_state(&s).unwrap();
            let e = fd_lambda1(&s, 256).unwrap();
            assert!((e.value - gs.lambda1).abs() < 1e-6 * gs.lambda1, "k={k} {e:?} {}", gs.lambda1);
        }
    }

    #[test]
    fn sigma_converges_at_second_order() {
        let s = sf(2, 1.0);
        let gs = ground_state(&s).unwrap();
        let (t, j) = (3.0, 1);
        let exact = sigma_ode(&gs, &s, t, j).unwrap();
        let vals: Vec<f64> = [64, 128, 256, 512].iter().map(|&m| fd_sigma(&gs, &s, t, j, m).unwrap()).collect();
        for p in observed_orders(&vals, exact) {
            assert!((1.8..=2.2).contains(&p), "{p} {vals:?} {exact}");
        }
    }

    #[test]
    fn sigma_mode_scaling() {
        let s = sf(3, -1.0);
        let gs = ground_state(&s).unwrap();
        for j in [2, 5] {
            let a = fd_sigma(&gs, &s, 4.0, j, 128).unwrap();
            let b = fd_sigma(&gs, &s, 4.0 / j as f64, 1, 128).unwrap();
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }
}
