//! Primal-dual interior-point method for small dense SDPs: infeasible start,
//! HKM search direction, Mehrotra predictor-corrector.
//!
//! Same problem as the ADMM solver: `max ⟨C, X⟩ s.t. ⟨A_k, X⟩ = b_k, X ⪰ 0`
//! with dual `min bᵀy s.t. Z = Σ y_k A_k − C ⪰ 0`.

use super::eig::eig_sym;
use super::mat::{cholesky, cholesky_solve};
use super::sdp::SemidefiniteProgram;
use super::Mat;
use crate::error::{Error, Result};

pub(crate) const MAX_IPM_ITERATIONS: usize = 100;
const STEP_FRACTION: f64 = 0.95;

/// Iterate of the interior-point method.
pub(crate) struct Ipm {
    n: usize,
    c: Mat,
    /// Full symmetric entry lists (both triangles).
    a: Vec<Vec<(usize, usize, f64)>>,
    b: Vec<f64>,
    /// Cholesky factor of the Gram matrix `⟨A_k, A_l⟩`, when it is definite.
    gram: Option<Mat>,
    pub x: Mat,
    pub z: Mat,
    pub y: Vec<f64>,
    pub iterations: usize,
    pub pinf: f64,
    pub dinf: f64,
    pub gap: f64,
}

fn lower_inverse(l: &Mat) -> Mat {
    let n = l.rows();
    let mut inv = Mat::zeros(n, n);
    for col in 0..n {
        for i in col..n {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for k in col..i {
                s -= l[(i, k)] * inv[(k, col)];
            }
            inv[(i, col)] = s / l[(i, i)];
        }
    }
    inv
}

/// Largest `α` with `X + α D ⪰ 0`, given the Cholesky factor of `X`.
fn max_step(lx: &Mat, d: &Mat) -> Result<f64> {
    let li = lower_inverse(lx);
    let mut s = li.matmul(d)?.matmul(&li.transpose())?;
    s.symmetrize();
    let lmin = eig_sym(&s)?.min();
    Ok(if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    })
}

fn spd_inverse(l: &Mat) -> Result<Mat> {
    let li = lower_inverse(l);
    li.transpose().matmul(&li)
}

impl Ipm {
    pub fn new(sdp: &SemidefiniteProgram) -> Self {
        let n = sdp.order;
        let a: Vec<Vec<(usize, usize, f64)>> = sdp
            .constraints
            .iter()
            .map(|c| {
                let mut full = Vec::with_capacity(2 * c.entries.len());
                for &(i, j, v) in &c.entries {
                    full.push((i, j, v));
                    if i != j {
                        full.push((j, i, v));
                    }
                }
                full
            })
            .collect();
        let mut c = sdp.objective.clone();
        c.symmetrize();
        let b: Vec<f64> = sdp.constraints.iter().map(|k| k.rhs).collect();
        let nf = n as f64;
        let a_norm = |k: &Vec<(usize, usize, f64)>| k.iter().map(|e| e.2 * e.2).sum::<f64>().sqrt();
        let xi = a
            .iter()
            .zip(&b)
            .map(|(k, bk)| nf * (1.0 + bk.abs()) / (1.0 + a_norm(k)))
            .fold(10f64.max(nf.sqrt()), f64::max);
        let eta = a
            .iter()
            .map(a_norm)
            .fold(10f64.max(nf.sqrt()).max(c.frobenius()), f64::max);
        let mut x = Mat::identity(n);
        x.scale(xi);
        let mut z = Mat::identity(n);
        z.scale(eta);
        let m = a.len();
        let gram = Self::gram_factor(n, &a);
        Ipm {
            n,
            c,
            a,
            b,
            gram,
            x,
            z,
            y: vec![0.0; m],
            iterations: 0,
            pinf: f64::INFINITY,
            dinf: f64::INFINITY,
            gap: f64::INFINITY,
        }
    }

    fn gram_factor(n: usize, a: &[Vec<(usize, usize, f64)>]) -> Option<Mat> {
        let m = a.len();
        let mut at: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n * n];
        for (k, entries) in a.iter().enumerate() {
            for &(i, j, v) in entries {
                at[i * n + j].push((k, v));
            }
        }
        let mut g = Mat::zeros(m, m);
        for cell in &at {
            for &(k, u) in cell {
                for &(l, v) in cell {
                    g[(k, l)] += u * v;
                }
            }
        }
        cholesky(&g)
    }

    fn a_of(&self, x: &Mat) -> Vec<f64> {
        self.a
            .iter()
            .map(|k| k.iter().map(|&(i, j, v)| v * x[(i, j)]).sum())
            .collect()
    }

    fn a_star(&self, y: &[f64]) -> Mat {
        let mut out = Mat::zeros(self.n, self.n);
        for (k, &v) in self.a.iter().zip(y) {
            for &(i, j, a) in k {
                out[(i, j)] += v * a;
            }
        }
        out
    }

    pub fn value(&self) -> f64 {
        self.c.dot(&self.x)
    }

    pub fn dual_value(&self) -> f64 {
        self.b.iter().zip(&self.y).map(|(b, y)| b * y).sum()
    }

    /// Residuals: `rp = b − A(X)`, `Rd = C − Aᵀy + Z`.
    fn residuals(&self) -> (Vec<f64>, Mat) {
        let ax = self.a_of(&self.x);
        let rp: Vec<f64> = self.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let mut rd = self.c.clone();
        rd.axpy(-1.0, &self.a_star(&self.y));
        rd.axpy(1.0, &self.z);
        (rp, rd)
    }

    fn update_measures(&mut self) {
        let (rp, rd) = self.residuals();
        let bnorm = self.b.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.pinf = rp.iter().map(|v| v * v).sum::<f64>().sqrt() / (1.0 + bnorm);
        self.dinf = rd.frobenius() / (1.0 + self.c.frobenius());
        let pobj = self.value();
        let dobj = self.dual_value();
        self.gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
    }

    pub fn converged(&self, tol: f64) -> bool {
        self.pinf < tol && self.dinf < tol && self.gap < tol
    }

    /// Solves the HKM system for complementarity target `r`:
    /// `dX Z + X dZ = r`, `A(dX) = rp`, `Aᵀdy − dZ = Rd`.
    fn direction(
        &self,
        chol_m: &Mat,
        zi: &Mat,
        r: &Mat,
        rp: &[f64],
        rd: &Mat,
    ) -> Result<(Mat, Vec<f64>, Mat)> {
        let mut w = r.clone();
        w.axpy(1.0, &self.x.matmul(rd)?);
        let wz = w.matmul(zi)?;
        let aw = self.a_of(&wz);
        let h: Vec<f64> = aw.iter().zip(rp).map(|(a, p)| a - p).collect();
        let dy = cholesky_solve(chol_m, &h);
        let mut dz = self.a_star(&dy);
        dz.axpy(-1.0, rd);
        dz.symmetrize();
        let mut dx = r.clone();
        dx.axpy(-1.0, &self.x.matmul(&dz)?);
        let mut dx = dx.matmul(zi)?;
        dx.symmetrize();
        // the Schur solve loses accuracy near the optimum; restore A(dX) = rp
        // by a least-squares correction so primal feasibility does not drift
        if let Some(g) = &self.gram {
            let adx = self.a_of(&dx);
            let r: Vec<f64> = rp.iter().zip(&adx).map(|(p, a)| p - a).collect();
            dx.axpy(1.0, &self.a_star(&cholesky_solve(g, &r)));
        }
        Ok((dx, dy, dz))
    }

    /// One predictor-corrector step. Returns false once no progress is possible.
    pub fn step(&mut self) -> Result<bool> {
        let n = self.n;
        let nf = n as f64;
        let lz = cholesky(&self.z)
            .ok_or_else(|| Error::Precondition("dual slack lost definiteness".into()))?;
        let lx = cholesky(&self.x)
            .ok_or_else(|| Error::Precondition("primal iterate lost definiteness".into()))?;
        let zi = spd_inverse(&lz)?;
        let m = self.a.len();
        // Schur complement M_kl = tr(A_k X A_l Z⁻¹)
        let mut schur = Mat::zeros(m, m);
        for k in 0..m {
            // T = Z⁻¹ A_k X, then M_kl = Σ (A_l)_rs T_sr
            let mut t = Mat::zeros(n, n);
            for &(p, q, v) in &self.a[k] {
                for s in 0..n {
                    let zsp = zi[(s, p)] * v;
                    if zsp == 0.0 {
                        continue;
                    }
                    for rr in 0..n {
                        t[(s, rr)] += zsp * self.x[(q, rr)];
                    }
                }
            }
            for l in k..m {
                let v: f64 = self.a[l].iter().map(|&(r, s, w)| w * t[(s, r)]).sum();
                schur[(k, l)] = v;
                schur[(l, k)] = v;
            }
        }
        let mut chol_m = cholesky(&schur);
        if chol_m.is_none() {
            let bump = 1e-13 * (0..m).map(|i| schur[(i, i)]).fold(1.0, f64::max);
            for i in 0..m {
                schur[(i, i)] += bump;
            }
            chol_m = cholesky(&schur);
        }
        let chol_m =
            chol_m.ok_or_else(|| Error::Precondition("Schur complement is singular".into()))?;
        let (rp, rd) = self.residuals();
        let xz = self.x.matmul(&self.z)?;
        let mu = self.x.dot(&self.z) / nf;

        // predictor
        let mut r = xz.clone();
        r.scale(-1.0);
        let (dxa, _, dza) = self.direction(&chol_m, &zi, &r, &rp, &rd)?;
        let ap = (STEP_FRACTION * max_step(&lx, &dxa)?).min(1.0);
        let ad = (STEP_FRACTION * max_step(&lz, &dza)?).min(1.0);
        let mut xa = self.x.clone();
        xa.axpy(ap, &dxa);
        let mut za = self.z.clone();
        za.axpy(ad, &dza);
        let mu_aff = xa.dot(&za) / nf;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // corrector
        let mut r = Mat::identity(n);
        r.scale(sigma * mu);
        r.axpy(-1.0, &xz);
        r.axpy(-1.0, &dxa.matmul(&dza)?);
        let (dx, dy, dz) = self.direction(&chol_m, &zi, &r, &rp, &rd)?;
        let ap = (STEP_FRACTION * max_step(&lx, &dx)?).min(1.0);
        let ad = (STEP_FRACTION * max_step(&lz, &dz)?).min(1.0);
        if ap < 1e-10 && ad < 1e-10 {
            return Ok(false);
        }
        self.x.axpy(ap, &dx);
        self.x.symmetrize();
        self.z.axpy(ad, &dz);
        self.z.symmetrize();
        for (y, d) in self.y.iter_mut().zip(&dy) {
            *y += ad * d;
        }
        self.iterations += 1;
        self.update_measures();
        Ok(true)
    }
}
