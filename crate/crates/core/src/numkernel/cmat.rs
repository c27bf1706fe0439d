//! Small dense complex matrices for projectors and observables.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{param, Result};

pub type C64 = Complex64;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    d: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(d: usize) -> Self {
        CMat {
            d,
            data: vec![C64::new(0.0, 0.0); d * d],
        }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = CMat::zeros(d);
        for i in 0..d {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return param("matrix must be square");
        }
        Ok(CMat::from_fn(d, |i, j| c(rows[i][j], 0.0)))
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return param("matrix must be square");
        }
        Ok(CMat::from_fn(d, |i, j| rows[i][j]))
    }

    pub fn pauli_x() -> Self {
        CMat::from_fn(2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    pub fn pauli_y() -> Self {
        let mut m = CMat::zeros(2);
        m[(0, 1)] = c(0.0, -1.0);
        m[(1, 0)] = c(0.0, 1.0);
        m
    }

    pub fn pauli_z() -> Self {
        let mut m = CMat::identity(2);
        m[(1, 1)] = c(-1.0, 0.0);
        m
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Result<Self> {
        if u.len() != v.len() {
            return param(format!(
                "outer product of lengths {} and {}",
                u.len(),
                v.len()
            ));
        }
        Ok(CMat::from_fn(u.len(), |i, j| u[i] * v[j].conj()))
    }

    /// Projector onto the span of `v` (normalized first).
    pub fn projector(v: &[C64]) -> Result<Self> {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return param("cannot project onto the zero vector");
        }
        let u: Vec<C64> = v.iter().map(|z| z / norm).collect();
        CMat::outer(&u, &u)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn same_dim(&self, other: &CMat, what: &str) -> Result<()> {
        if self.d != other.d {
            return param(format!(
                "{what}: dimensions {} and {} differ",
                self.d, other.d
            ));
        }
        Ok(())
    }

    pub fn mul(&self, other: &CMat) -> Result<CMat> {
        self.same_dim(other, "multiply")?;
        let d = self.d;
        let mut out = CMat::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &CMat) -> Result<CMat> {
        self.same_dim(other, "add")?;
        Ok(CMat {
            d: self.d,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &CMat) -> Result<CMat> {
        self.same_dim(other, "subtract")?;
        Ok(CMat {
            d: self.d,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, s: C64) -> CMat {
        CMat {
            d: self.d,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.d, |i, j| self[(j, i)].conj())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn tensor(&self, other: &CMat) -> CMat {
        let (a, b) = (self.d, other.d);
        CMat::from_fn(a * b, |i, j| self[(i / b, j / b)] * other[(i % b, j % b)])
    }

    pub fn trace(&self) -> C64 {
        (0..self.d).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        if self.d != other.d {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, a| m.max(a.norm()))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Hermitian and idempotent within `tol`.
    pub fn is_projector(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.mul(self).is_ok_and(|sq| sq.max_abs_diff(self) <= tol)
    }

    /// `Tr(ρ A)`.
    pub fn expectation(&self, rho: &CMat) -> Result<C64> {
        Ok(rho.mul(self)?.trace())
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.d {
            return param(format!(
                "vector of length {} for dimension {}",
                v.len(),
                self.d
            ));
        }
        Ok((0..self.d)
            .map(|i| (0..self.d).map(|j| self[(i, j)] * v[j]).sum())
            .collect())
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.d + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.d + j]
    }
}

/// `⟨u|v⟩`, conjugating the first argument.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}
