//! Small direct solvers: tridiagonal, block-tridiagonal and dense LU.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

const PIVOT_FLOOR: f64 = 1e-300;

/// Solve `sub[i] x[i−1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`
/// (`sub[0]` and `sup[n−1]` are ignored) without pivoting.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if sub.len() != n || sup.len() != n || rhs.len() != n {
        return Err(Error::invalid("tridiagonal bands must have equal length"));
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut smallest = f64::INFINITY;
    for i in 0..n {
        let denom = diag[i] - if i > 0 { sub[i] * c[i - 1] } else { 0.0 };
        smallest = smallest.min(denom.abs());
        if denom.abs() < PIVOT_FLOOR || !denom.is_finite() {
            return Err(Error::Singular { estimate: denom.abs() });
        }
        c[i] = if i + 1 < n { sup[i] / denom } else { 0.0 };
        d[i] = (rhs[i] - if i > 0 { sub[i] * d[i - 1] } else { 0.0 }) / denom;
    }
    for i in (0..n.saturating_sub(1)).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(mut a: Matrix) -> Result<Self> {
        let n = a.n;
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.data.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(PIVOT_FLOOR);
        for col in 0..n {
            let (p, best) = (col..n)
                .map(|r| (r, a[(r, col)].abs()))
                .fold((col, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
            if best <= 1e-14 * scale {
                return Err(Error::Singular { estimate: best });
            }
            if p != col {
                for j in 0..n {
                    a.data.swap(p * n + j, col * n + j);
                }
                perm.swap(p, col);
            }
            let piv = a[(col, col)];
            for r in col + 1..n {
                let f = a[(r, col)] / piv;
                a[(r, col)] = f;
                if f != 0.0 {
                    for j in col + 1..n {
                        let v = a[(col, j)];
                        a[(r, j)] -= f * v;
                    }
                }
            }
        }
        Ok(Lu { lu: a, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    /// `A⁻¹ B` column by column.
    pub fn solve_matrix(&self, b: &Matrix) -> Matrix {
        let n = b.n;
        let mut out = Matrix::zeros(n);
        let mut col = vec![0.0; n];
        for j in 0..n {
            for i in 0..n {
                col[i] = b[(i, j)];
            }
            let x = self.solve(&col);
            for i in 0..n {
                out[(i, j)] = x[i];
            }
        }
        out
    }
}

/// Block-tridiagonal solve by block Thomas elimination:
/// `L[i] X[i−1] + D[i] X[i] + U[i] X[i+1] = R[i]`, with `R[i]` given as a
/// matrix of right-hand-side columns.
pub fn solve_block_tridiagonal(
    lower: &[Matrix],
    diag: &[Matrix],
    upper: &[Matrix],
    rhs: &[Matrix],
) -> Result<Vec<Matrix>> {
    let nb = diag.len();
    if lower.len() != nb || upper.len() != nb || rhs.len() != nb {
        return Err(Error::invalid("block bands must have equal length"));
    }
    let mut c: Vec<Matrix> = Vec::with_capacity(nb);
    let mut d: Vec<Matrix> = Vec::with_capacity(nb);
    for i in 0..nb {
        let mut a = diag[i].clone();
        let mut r = rhs[i].clone();
        if i > 0 {
            let lc = lower[i].mul(&c[i - 1]);
            let ld = lower[i].mul(&d[i - 1]);
            for (x, y) in a.data.iter_mut().zip(&lc.data) {
                *x -= y;
            }
            for (x, y) in r.data.iter_mut().zip(&ld.data) {
                *x -= y;
            }
        }
        let lu = Lu::new(a)?;
        c.push(if i + 1 < nb { lu.solve_matrix(&upper[i]) } else { Matrix::zeros(diag[i].n) });
        d.push(lu.solve_matrix(&r));
    }
    for i in (0..nb.saturating_sub(1)).rev() {
        let cx = c[i].mul(&d[i + 1]);
        for (x, y) in d[i].data.iter_mut().zip(&cx.data) {
            *x -= y;
        }
    }
    Ok(d)
}
