use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Row source for regression. Implementors write one row into `out`
/// (length [`cols`](DesignMatrix::cols)).
pub trait DesignMatrix {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn fill_row(&self, r: usize, out: &mut [f64]);
}

/// Plain row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::input(
                "dense_matrix",
                format!("{} values for {rows}x{cols}", data.len()),
            ));
        }
        Ok(Self { rows, cols, data })
    }
}

impl DesignMatrix for DenseMatrix {
    fn rows(&self) -> usize {
        self.rows
    }
    fn cols(&self) -> usize {
        self.cols
    }
    fn fill_row(&self, r: usize, out: &mut [f64]) {
        out.copy_from_slice(&self.data[r * self.cols..(r + 1) * self.cols]);
    }
}

const BLOCK: usize = 64;

/// Accumulated `XᵀX` and `Xᵀy` over a set of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalEquations {
    pub cols: usize,
    /// Full symmetric Gram matrix, row-major.
    pub gram: Vec<f64>,
    pub xty: Vec<f64>,
    pub rows: usize,
}

impl NormalEquations {
    pub fn zeros(cols: usize) -> Self {
        Self {
            cols,
            gram: vec![0.0; cols * cols],
            xty: vec![0.0; cols],
            rows: 0,
        }
    }

    /// Accumulates the rows `range` of `x` with targets `y[r]`.
    pub fn accumulate<X: DesignMatrix + ?Sized>(x: &X, y: &[f64], range: core::ops::Range<usize>) -> Self {
        let c = x.cols();
        let mut ne = Self::zeros(c);
        let mut row = vec![0.0; c];
        // Column-major block: colblock[j * BLOCK + b] = x[r0 + b][j].
        let mut colblock = vec![0.0; c * BLOCK];
        let mut ys = [0.0; BLOCK];
        let mut r0 = range.start;
        while r0 < range.end {
            let nb = BLOCK.min(range.end - r0);
            for b in 0..nb {
                x.fill_row(r0 + b, &mut row);
                for (j, &v) in row.iter().enumerate() {
                    colblock[j * BLOCK + b] = v;
                }
                ys[b] = y[r0 + b];
            }
            for i in 0..c {
                let ci = &colblock[i * BLOCK..i * BLOCK + nb];
                ne.xty[i] += dot(ci, &ys[..nb]);
                for j in i..c {
                    ne.gram[i * c + j] += dot(ci, &colblock[j * BLOCK..j * BLOCK + nb]);
                }
            }
            r0 += nb;
        }
        for i in 0..c {
            for j in 0..i {
                ne.gram[i * c + j] = ne.gram[j * c + i];
            }
        }
        ne.rows = range.len();
        ne
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            cols: self.cols,
            gram: self.gram.iter().zip(&other.gram).map(|(a, b)| a + b).collect(),
            xty: self.xty.iter().zip(&other.xty).map(|(a, b)| a + b).collect(),
            rows: self.rows + other.rows,
        }
    }

    /// `‖(XᵀX + λI) w − Xᵀy‖`.
    pub fn residual_norm(&self, w: &[f64], lambda: f64) -> f64 {
        let r = self.residual(w, lambda);
        r.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn residual(&self, w: &[f64], lambda: f64) -> Vec<f64> {
        let c = self.cols;
        (0..c)
            .map(|i| dot(&self.gram[i * c..(i + 1) * c], w) + lambda * w[i] - self.xty[i])
            .collect()
    }

    /// Solves the ridge system and checks the relative residual against
    /// `tol`. Two rounds of iterative refinement are applied.
    pub fn solve(&self, lambda: f64, tol: f64) -> Result<Vec<f64>> {
        let c = self.cols;
        let mut a = self.gram.clone();
        for i in 0..c {
            a[i * c + i] += lambda;
        }
        let l = cholesky(&mut a, c)?;
        let mut w = self.xty.clone();
        chol_substitute(l, c, &mut w);
        for _ in 0..2 {
            let mut r: Vec<f64> = self.residual(&w, lambda).iter().map(|v| -v).collect();
            chol_substitute(l, c, &mut r);
            w.iter_mut().zip(&r).for_each(|(wi, ri)| *wi += ri);
        }
        let bnorm = self.xty.iter().map(|v| v * v).sum::<f64>().sqrt();
        let res = self.residual_norm(&w, lambda);
        if !w.iter().all(|v| v.is_finite()) || res > tol * bnorm.max(f64::MIN_POSITIVE) {
            return Err(Error::numerical(
                "train_ridge",
                format!("normal-equation residual {res:e} exceeds {tol:e} x {bnorm:e} at lambda {lambda:e}"),
            ));
        }
        Ok(w)
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (ca, ra) = a.split_at(a.len() / 4 * 4);
    let (cb, rb) = b.split_at(ca.len());
    for (x, y) in ca.chunks_exact(4).zip(cb.chunks_exact(4)) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    let tail: f64 = ra.iter().zip(rb).map(|(x, y)| x * y).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// In-place lower Cholesky factor of the symmetric positive-definite `a`.
fn cholesky(a: &mut [f64], n: usize) -> Result<&[f64]> {
    for j in 0..n {
        let s = a[j * n + j] - dot(&a[j * n..j * n + j], &a[j * n..j * n + j]);
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::numerical(
                "train_ridge",
                format!("matrix not positive definite at pivot {j}"),
            ));
        }
        let d = s.sqrt();
        a[j * n + j] = d;
        for i in j + 1..n {
            let (upper, lower) = a.split_at_mut(i * n);
            let v = lower[j] - dot(&upper[j * n..j * n + j], &lower[..j]);
            lower[j] = v / d;
        }
    }
    Ok(a)
}

/// Solves `L Lᵀ x = b` in place.
fn chol_substitute(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let s = b[i] - dot(&l[i * n..i * n + i], &b[..i]);
        b[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

/// Solves a symmetric positive-definite system `a x = b`.
pub fn cholesky_solve(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    if a.len() != n * n {
        return Err(Error::input("cholesky_solve", "shape mismatch"));
    }
    let mut f = a.to_vec();
    let l = cholesky(&mut f, n)?;
    let mut x = b.to_vec();
    chol_substitute(l, n, &mut x);
    Ok(x)
}
