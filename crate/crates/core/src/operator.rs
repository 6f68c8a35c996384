use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    dim: usize,
    data: Vec<C64>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for k in 0..dim {
            op.data[k * dim + k] = C64::new(1.0, 0.0);
        }
        op
    }

    /// Builds from row-major data; length must be a perfect square.
    pub fn from_rows(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: data.len() });
        }
        Ok(Self { dim, data })
    }

    /// Builds the map sending basis vector `col` to `sum amp |row>` over the
    /// `(row, amp)` pairs returned by `f(col)`.
    pub fn from_columns<F>(dim: usize, mut f: F) -> Self
    where
        F: FnMut(usize) -> Vec<(usize, C64)>,
    {
        let mut op = Self::zeros(dim);
        for col in 0..dim {
            for (row, amp) in f(col) {
                op.data[row * dim + col] += amp;
            }
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits this operator acts on.
    pub fn qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: C64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn add_outer(&mut self, ket: &[C64], bra: &[C64], scale: C64) {
        for (r, &k) in ket.iter().enumerate() {
            if k == C64::new(0.0, 0.0) {
                continue;
            }
            for (c, &b) in bra.iter().enumerate() {
                self.data[r * self.dim + c] += scale * k * b.conj();
            }
        }
    }

    pub fn mul(&self, other: &Operator) -> Operator {
        let n = self.dim;
        let mut out = Operator::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Operator {
        let n = self.dim;
        let mut out = Operator::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        (0..n)
            .map(|r| (0..n).map(|c| self.data[r * n + c] * v[c]).sum())
            .collect()
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm of `self - other`; an upper bound on the operator-norm distance.
    pub fn frobenius_distance(&self, other: &Operator) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().mul(self).max_abs_diff(&Operator::identity(self.dim)) <= tol
    }
}
