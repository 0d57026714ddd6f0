//! Discrete Dirichlet-to-Neumann map `v ↦ (∂_r ψ + φ''(1) v)|_{r=1}` on the
//! cylinder section `[0,1] × ℝ/Tℤ`, where `Δψ + λ₁ψ = 0` and `ψ = −φ'(1) v`
//! on the boundary.

use core::f64::consts::PI;

use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use super::{boundary_derivative, fd_sigma_at, FDGrid, RadialStencil};
use crate::error::{Error, Result};
use crate::geometry::SpaceForm;
use crate::linalg::{solve_block_tridiagonal, Matrix};
use crate::spectral::GroundState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtnMethod {
    /// One radial solve per discrete Fourier mode.
    PerMode,
    /// One block-tridiagonal solve of the full 2D system.
    Coupled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DtnMatrix {
    pub t: f64,
    pub m: usize,
    pub m_t: usize,
    pub method: DtnMethod,
    /// Basis indices `j = 1..m_t/2 − 1` of `cos(2πjt/T)`.
    pub modes: Vec<u32>,
    pub matrix: Matrix,
}

/// Shifted parameter seen by mode `j` under the periodic second difference.
pub fn discrete_shift(lambda1: f64, t: f64, m_t: usize, j: u32) -> f64 {
    let dt = t / m_t as f64;
    let s = (PI * j as f64 / m_t as f64).sin();
    lambda1 - 4.0 * s * s / (dt * dt)
}

fn cos_mode(j: u32, l: usize, m_t: usize) -> f64 {
    (2.0 * PI * (j as u64 * l as u64 % m_t as u64) as f64 / m_t as f64).cos()
}

pub fn fd_dtn_matrix(gs: &GroundState, sf: &SpaceForm, t: f64, m: usize, m_t: usize, method: DtnMethod) -> Result<DtnMatrix> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid("period must be positive"));
    }
    let grid = FDGrid::cylinder(m, m_t)?;
    let modes: Vec<u32> = (1..(m_t / 2) as u32).collect();
    // outputs[c][l]: image of cos_{c+1} sampled at t_l
    let outputs = match method {
        DtnMethod::PerMode => per_mode(gs, sf, t, &grid, &modes)?,
        DtnMethod::Coupled => coupled(gs, sf, t, &grid, &modes)?,
    };
    let nm = modes.len();
    let mut matrix = Matrix::zeros(nm);
    for (c, out) in outputs.iter().enumerate() {
        for (i, &ji) in modes.iter().enumerate() {
            let p: f64 = out.iter().enumerate().map(|(l, v)| v * cos_mode(ji, l, m_t)).sum();
            matrix[(i, c)] = 2.0 * p / m_t as f64;
        }
    }
    Ok(DtnMatrix { t, m, m_t, method, modes, matrix })
}

fn per_mode(gs: &GroundState, sf: &SpaceForm, t: f64, grid: &FDGrid, modes: &[u32]) -> Result<Vec<Vec<f64>>> {
    let m_t = grid.m_t.unwrap();
    modes
        .iter()
        .map(|&j| {
            let s = fd_sigma_at(gs, sf, discrete_shift(gs.lambda1, t, m_t, j), grid.m)?;
            Ok((0..m_t).map(|l| s * cos_mode(j, l, m_t)).collect())
        })
        .collect()
}

fn coupled(gs: &GroundState, sf: &SpaceForm, t: f64, grid: &FDGrid, modes: &[u32]) -> Result<Vec<Vec<f64>>> {
    let m_t = grid.m_t.unwrap();
    let m = grid.m;
    let st = RadialStencil::new(sf, grid);
    let (sub, diag, sup, coupling) = st.bands(gs.lambda1);
    let dt = t / m_t as f64;
    let tt = 1.0 / (dt * dt);

    let scaled_identity = |a: f64| {
        let mut b = Matrix::zeros(m_t);
        for l in 0..m_t {
            b[(l, l)] = a;
        }
        b
    };
    let lower: Vec<Matrix> = sub.iter().map(|&a| scaled_identity(a)).collect();
    let upper: Vec<Matrix> = sup.iter().map(|&a| scaled_identity(a)).collect();
    let blocks: Vec<Matrix> = diag
        .iter()
        .map(|&a| {
            let mut b = scaled_identity(a + 2.0 * tt);
            for l in 0..m_t {
                b[(l, (l + 1) % m_t)] -= tt;
                b[(l, (l + m_t - 1) % m_t)] -= tt;
            }
            b
        })
        .collect();
    let boundary = |j: u32, l: usize| -gs.dphi1 * cos_mode(j, l, m_t);
    let mut rhs = vec![Matrix::zeros(m_t); m];
    for (c, &j) in modes.iter().enumerate() {
        for l in 0..m_t {
            rhs[m - 1][(l, c)] = coupling * boundary(j, l);
        }
    }
    let psi = solve_block_tridiagonal(&lower, &blocks, &upper, &rhs).map_err(|e| match e {
        Error::Singular { estimate } => Error::Degenerate(alloc::format!(
            "coupled DtN system near-singular (pivot {estimate:e}); check for lambda1 resonance"
        )),
        e => e,
    })?;
    let h = grid.h();
    Ok(modes
        .iter()
        .enumerate()
        .map(|(c, &j)| {
            (0..m_t)
                .map(|l| {
                    let mut col: Vec<f64> = psi[m - 5..].iter().map(|b| b[(l, c)]).collect();
                    col.push(boundary(j, l));
                    boundary_derivative(&col, h) + gs.ddphi1 * cos_mode(j, l, m_t)
                })
                .collect()
        })
        .collect())
}

fn frobenius(data: impl Iterator<Item = f64>) -> f64 {
    data.map(|v| v * v).sum::<f64>().sqrt()
}

impl DtnMatrix {
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.matrix.n).map(|i| self.matrix[(i, i)]).collect()
    }

    /// `‖M − Mᵀ‖_F / ‖M‖_F`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.matrix.n;
        let num = frobenius((0..n * n).map(|q| self.matrix[(q / n, q % n)] - self.matrix[(q % n, q / n)]));
        num / frobenius(self.matrix.data.iter().copied())
    }

    /// `‖M − diag(M)‖_F / ‖M‖_F`.
    pub fn offdiagonal_defect(&self) -> f64 {
        let n = self.matrix.n;
        let num = frobenius((0..n * n).filter(|q| q / n != q % n).map(|q| self.matrix.data[q]));
        num / frobenius(self.matrix.data.iter().copied())
    }
}
