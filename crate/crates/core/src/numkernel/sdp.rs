//! Dense SDP: `max ⟨C, X⟩  s.t.  ⟨A_k, X⟩ = b_k,  X ⪰ 0`.
//!
//! The primary solver is the interior-point method in [`super::ipm`]. If it
//! breaks down (singular Schur complement, stalled steps) the problem is
//! handed to an ADMM on the dual: per iteration one least-squares solve for
//! the multipliers, one eigendecomposition for the PSD projection and an
//! over-relaxed multiplier step.

use super::eig::eig_sym;
use super::ipm::{Ipm, MAX_IPM_ITERATIONS};
use super::mat::{cholesky, cholesky_solve};
use super::Mat;
use crate::error::{param, Error, Result};

pub const MAX_ITERATIONS: usize = 200_000;
const RELAX: f64 = 1.6;

/// Symmetric sparse constraint matrix: entry `(i, j, v)` sets both `A_ij`
/// and `A_ji` to `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpConstraint {
    pub entries: Vec<(usize, usize, f64)>,
    pub rhs: f64,
}

#[derive(Clone, Debug)]
pub struct SemidefiniteProgram {
    pub order: usize,
    pub objective: Mat,
    pub constraints: Vec<SdpConstraint>,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub value: f64,
    pub x: Mat,
    /// Multipliers of the equality constraints, in constraint order, for the
    /// dual `min bᵀy  s.t.  Σ y_k A_k ⪰ C`.
    pub y: Vec<f64>,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

impl SdpConstraint {
    fn dense(&self, m: usize) -> Mat {
        let mut a = Mat::zeros(m, m);
        for &(i, j, v) in &self.entries {
            a[(i, j)] += v;
            if i != j {
                a[(j, i)] += v;
            }
        }
        a
    }
}

impl SemidefiniteProgram {
    fn validate(&self) -> Result<()> {
        let m = self.order;
        if m == 0 {
            return param("SDP order must be positive");
        }
        if self.objective.rows() != m || !self.objective.is_square() {
            return param("objective has the wrong shape");
        }
        if !self
            .objective
            .is_symmetric(1e-12 * self.objective.max_abs().max(1.0))
        {
            return Err(Error::Precondition("objective is not symmetric".into()));
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if c.entries.iter().any(|&(i, j, _)| i >= m || j >= m) {
                return param(format!("constraint {k} indexes outside the matrix"));
            }
            if c.entries.iter().any(|e| !e.2.is_finite()) || !c.rhs.is_finite() {
                return param(format!("constraint {k} has non-finite data"));
            }
        }
        Ok(())
    }
}

/// Iteration state. Exposed so callers can attach their own stopping test.
pub(crate) struct Admm {
    m: usize,
    neg_c: Mat,
    dense: Vec<Mat>,
    rhs: Vec<f64>,
    chol: Mat,
    pub x: Mat,
    pub s: Mat,
    pub y: Vec<f64>,
    mu: f64,
    pub iterations: usize,
    pub pinf: f64,
    pub dinf: f64,
    pub gap: f64,
    balance: i32,
}

impl Admm {
    pub fn new(sdp: &SemidefiniteProgram) -> Result<Self> {
        sdp.validate()?;
        let m = sdp.order;
        let dense: Vec<Mat> = sdp.constraints.iter().map(|c| c.dense(m)).collect();
        let k = dense.len();
        let mut gram = Mat::zeros(k, k);
        for a in 0..k {
            for b in a..k {
                let v = dense[a].dot(&dense[b]);
                gram[(a, b)] = v;
                gram[(b, a)] = v;
            }
        }
        let chol = if k == 0 {
            Mat::zeros(0, 0)
        } else {
            cholesky(&gram).ok_or_else(|| {
                Error::Precondition("constraint matrices are linearly dependent".into())
            })?
        };
        let mut neg_c = sdp.objective.clone();
        neg_c.symmetrize();
        neg_c.scale(-1.0);
        let mut x = Mat::identity(m);
        x.scale(1.0 / m as f64);
        Ok(Admm {
            m,
            neg_c,
            dense,
            rhs: sdp.constraints.iter().map(|c| c.rhs).collect(),
            chol,
            x,
            s: Mat::zeros(m, m),
            y: vec![0.0; k],
            mu: 1.0,
            iterations: 0,
            pinf: f64::INFINITY,
            dinf: f64::INFINITY,
            gap: f64::INFINITY,
            balance: 0,
        })
    }

    fn a_of(&self, x: &Mat) -> Vec<f64> {
        self.dense.iter().map(|a| a.dot(x)).collect()
    }

    fn a_star(&self, y: &[f64]) -> Mat {
        let mut out = Mat::zeros(self.m, self.m);
        for (a, &v) in self.dense.iter().zip(y) {
            if v != 0.0 {
                out.axpy(v, a);
            }
        }
        out
    }

    pub fn step(&mut self) -> Result<()> {
        // y = -(AA*)^{-1} (mu (A(X) - b) + A(S - C))
        if !self.dense.is_empty() {
            let ax = self.a_of(&self.x);
            let mut s_minus_c = self.s.clone();
            s_minus_c.axpy(-1.0, &self.neg_c);
            let asc = self.a_of(&s_minus_c);
            let r: Vec<f64> = (0..self.rhs.len())
                .map(|k| -(self.mu * (ax[k] - self.rhs[k]) + asc[k]))
                .collect();
            self.y = cholesky_solve(&self.chol, &r);
        }
        let aty = self.a_star(&self.y);
        let mut v = self.neg_c.clone();
        v.axpy(-1.0, &aty);
        v.axpy(-self.mu, &self.x);
        v.symmetrize();
        let e = eig_sym(&v)?;
        self.s = e.reconstruct(|l| l.max(0.0));
        let mu = self.mu;
        let x_new = e.reconstruct(|l| if l < 0.0 { -l / mu } else { 0.0 });
        let mut x = self.x.clone();
        x.scale(1.0 - RELAX);
        x.axpy(RELAX, &x_new);
        self.x = x;
        self.iterations += 1;

        // residuals on the unrelaxed iterate
        let ax = self.a_of(&x_new);
        let bnorm = self.rhs.iter().map(|b| b * b).sum::<f64>().sqrt();
        self.pinf = ax
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
            / (1.0 + bnorm);
        let mut dres = self.neg_c.clone();
        dres.axpy(-1.0, &aty);
        dres.axpy(-1.0, &self.s);
        self.dinf = dres.frobenius() / (1.0 + self.neg_c.frobenius());
        let pobj = self.neg_c.dot(&x_new);
        let dobj: f64 = self.rhs.iter().zip(&self.y).map(|(b, y)| b * y).sum();
        self.gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());

        // residual balancing for the penalty
        if self.pinf > 5.0 * self.dinf {
            self.balance += 1;
        } else if self.dinf > 5.0 * self.pinf {
            self.balance -= 1;
        } else {
            self.balance = 0;
        }
        if self.balance >= 10 {
            self.mu = (self.mu * 1.6).min(1e4);
            self.balance = 0;
        } else if self.balance <= -10 {
            self.mu = (self.mu / 1.6).max(1e-4);
            self.balance = 0;
        }
        Ok(())
    }

    /// Objective of the caller's maximization at the current iterate.
    pub fn value(&self) -> f64 {
        -self.neg_c.dot(&self.x)
    }

    /// Dual multipliers in the caller's sign convention.
    pub fn dual(&self) -> Vec<f64> {
        self.y.iter().map(|v| -v).collect()
    }

    fn solution(&self, value: f64) -> SdpSolution {
        SdpSolution {
            value,
            x: self.x.clone(),
            y: self.dual(),
            iterations: self.iterations,
            primal_residual: self.pinf,
            dual_residual: self.dinf,
        }
    }
}

enum Flow {
    Continue,
    Done,
    /// Give up on the interior-point method.
    Abandon,
}

/// Runs the interior-point method until `done` says stop. `None` means it
/// broke down, was abandoned or ran out of iterations.
fn ipm_run(
    sdp: &SemidefiniteProgram,
    mut done: impl FnMut(&Ipm) -> Result<Flow>,
) -> Result<Option<Ipm>> {
    let mut ipm = Ipm::new(sdp);
    while ipm.iterations < MAX_IPM_ITERATIONS {
        match ipm.step() {
            Ok(true) => {}
            Ok(false) | Err(Error::Precondition(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
        match done(&ipm)? {
            Flow::Continue => {}
            Flow::Done => return Ok(Some(ipm)),
            Flow::Abandon => return Ok(None),
        }
    }
    Ok(None)
}

fn ipm_solution(ipm: &Ipm, value: f64) -> SdpSolution {
    SdpSolution {
        value,
        x: ipm.x.clone(),
        y: ipm.y.clone(),
        iterations: ipm.iterations,
        primal_residual: ipm.pinf,
        dual_residual: ipm.dinf,
    }
}

/// Solve to relative primal/dual residuals and duality gap below `tol`.
pub fn sdp_solve(sdp: &SemidefiniteProgram, tol: f64) -> Result<SdpSolution> {
    sdp.validate()?;
    let found = ipm_run(sdp, |it| {
        Ok(if it.converged(tol) {
            Flow::Done
        } else {
            Flow::Continue
        })
    })?;
    if let Some(ipm) = found {
        return Ok(ipm_solution(&ipm, ipm.value()));
    }
    admm_solve(sdp, tol)
}

fn admm_solve(sdp: &SemidefiniteProgram, tol: f64) -> Result<SdpSolution> {
    let mut admm = Admm::new(sdp)?;
    while admm.iterations < MAX_ITERATIONS {
        admm.step()?;
        if admm.pinf < tol && admm.dinf < tol && admm.gap < tol {
            return Ok(admm.solution(admm.value()));
        }
    }
    let lower = admm.value();
    let upper = admm.rhs.iter().zip(&admm.y).map(|(b, y)| -b * y).sum();
    Err(Error::SdpNoConvergence {
        iterations: admm.iterations,
        lower,
        upper,
    })
}

/// Bracket test: width at most `tol` relative to the magnitude of the optimum
/// (absolute below 1).
fn bracket_closed(lo: f64, hi: f64, tol: f64) -> bool {
    hi - lo <= tol * hi.abs().max(1.0)
}

/// Checks without the bracket shrinking by a tenth before the interior-point
/// method is judged stalled.
const STALL_CHECKS: usize = 8;

/// Solve until a caller-supplied certified bracket `(lower, upper)` on the
/// optimum is narrower than `tol · max(1, |upper|)`. The bracket is evaluated
/// from the current primal iterate and dual multipliers (caller's sign
/// convention). The reported value lies inside the bracket.
pub fn sdp_solve_bracketed(
    sdp: &SemidefiniteProgram,
    tol: f64,
    mut bracket: impl FnMut(&Mat, &[f64]) -> Result<(f64, f64)>,
) -> Result<(SdpSolution, f64, f64)> {
    sdp.validate()?;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let mut best_width = f64::INFINITY;
    let mut stalled = 0;
    let found = ipm_run(sdp, |it| {
        // the bracket is only meaningful once the iterate is nearly feasible
        if it.pinf > 1e-3 || it.dinf > 1e-3 {
            return Ok(Flow::Continue);
        }
        let (l, h) = bracket(&it.x, &it.y)?;
        lo = lo.max(l);
        hi = hi.min(h);
        if bracket_closed(lo, hi, tol) {
            return Ok(Flow::Done);
        }
        if hi - lo < 0.9 * best_width {
            best_width = hi - lo;
            stalled = 0;
        } else {
            stalled += 1;
        }
        Ok(if stalled >= STALL_CHECKS {
            Flow::Abandon
        } else {
            Flow::Continue
        })
    })?;
    if let Some(ipm) = found {
        // primal and dual objectives converge faster than the bracket
        let estimate = 0.5 * (ipm.value() + ipm.dual_value());
        return Ok((ipm_solution(&ipm, estimate.clamp(lo, hi)), lo, hi));
    }
    admm_solve_bracketed(sdp, tol, bracket)
}

fn admm_solve_bracketed(
    sdp: &SemidefiniteProgram,
    tol: f64,
    mut bracket: impl FnMut(&Mat, &[f64]) -> Result<(f64, f64)>,
) -> Result<(SdpSolution, f64, f64)> {
    let mut admm = Admm::new(sdp)?;
    let mut best_lo = f64::NEG_INFINITY;
    let mut best_hi = f64::INFINITY;
    let mut next_check = 20usize;
    while admm.iterations < MAX_ITERATIONS {
        admm.step()?;
        let converging = admm.pinf < tol && admm.dinf < tol;
        if admm.iterations >= next_check || converging {
            let (lo, hi) = bracket(&admm.x, &admm.dual())?;
            best_lo = best_lo.max(lo);
            best_hi = best_hi.min(hi);
            if bracket_closed(best_lo, best_hi, tol) {
                let sol = admm.solution(0.5 * (best_lo + best_hi));
                return Ok((sol, best_lo, best_hi));
            }
            // sparse checks while far away; the bracket costs two cold eigendecompositions
            next_check = admm.iterations
                + if converging {
                    5
                } else {
                    (admm.iterations / 8).max(20)
                };
        }
    }
    Err(Error::SdpNoConvergence {
        iterations: admm.iterations,
        lower: best_lo,
        upper: best_hi,
    })
}
