//! Dense two-phase revised simplex.
//!
//! The basis inverse is kept explicitly and refactored periodically. Pricing
//! is Dantzig's rule until a run of degenerate pivots, then Bland's rule
//! until the objective moves again.

use serde::Serialize;

use super::Mat;
use crate::error::{param, Error, Result};

const FEAS_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_RUN: usize = 50;
const REFACTOR_EVERY: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// `maximize cᵀx` (or minimize) subject to row constraints and variable bounds.
///
/// Variables default to `[0, +inf)`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub minimize: bool,
    pub rows: Vec<Vec<f64>>,
    pub senses: Vec<Sense>,
    pub rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective in the caller's sense; meaningless unless optimal.
    pub objective: f64,
    pub x: Vec<f64>,
    /// Row multipliers: the rate of change of the optimum with each right-hand side.
    pub duals: Vec<f64>,
    /// For infeasible problems whose variables are all `[0, +inf)`: a vector `y`
    /// over the rows with `yᵀA ≤ 0` column-wise and `yᵀb > 0`, adjusted for
    /// row senses (`y_i ≤ 0` on `≤` rows, `y_i ≥ 0` on `≥` rows).
    pub farkas: Option<Vec<f64>>,
    pub iterations: usize,
}

impl LinearProgram {
    pub fn maximize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            minimize: false,
            rows: Vec::new(),
            senses: Vec::new(),
            rhs: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn minimize(objective: Vec<f64>) -> Self {
        let mut lp = LinearProgram::maximize(objective);
        lp.minimize = true;
        lp
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, sense: Sense, rhs: f64) -> &mut Self {
        self.rows.push(coeffs);
        self.senses.push(sense);
        self.rhs.push(rhs);
        self
    }

    pub fn set_bounds(&mut self, j: usize, lower: f64, upper: f64) -> &mut Self {
        self.lower[j] = lower;
        self.upper[j] = upper;
        self
    }

    /// Mark every variable free.
    pub fn free_all(&mut self) -> &mut Self {
        self.lower.iter_mut().for_each(|l| *l = f64::NEG_INFINITY);
        self.upper.iter_mut().for_each(|u| *u = f64::INFINITY);
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.rows.len() != self.senses.len() || self.rows.len() != self.rhs.len() {
            return param("row, sense and rhs counts differ");
        }
        if self.lower.len() != n || self.upper.len() != n {
            return param("bound vectors do not match the variable count");
        }
        if let Some(i) = self.rows.iter().position(|r| r.len() != n) {
            return param(format!("row {i} has the wrong length"));
        }
        let finite = self
            .objective
            .iter()
            .chain(self.rhs.iter())
            .chain(self.rows.iter().flatten());
        if finite.into_iter().any(|x| !x.is_finite()) {
            return param("non-finite coefficient");
        }
        for j in 0..n {
            if self.lower[j].is_nan() || self.upper[j].is_nan() || self.lower[j] > self.upper[j] {
                return param(format!("variable {j} has empty bounds"));
            }
            if self.lower[j] == f64::INFINITY || self.upper[j] == f64::NEG_INFINITY {
                return param(format!(
                    "variable {j} has an infinite bound on the wrong side"
                ));
            }
        }
        Ok(())
    }
}

/// Standard form `A x = b, x ≥ 0, b ≥ 0` with a record of how to map back.
struct Standard {
    cols: Vec<Vec<f64>>,
    b: Vec<f64>,
    /// Cost for `min` in phase 2.
    cost: Vec<f64>,
    artificial: Vec<bool>,
    basis: Vec<usize>,
    /// Original variable j = offset[j] + Σ sign * x[k].
    var_map: Vec<Vec<(usize, f64)>>,
    offset: Vec<f64>,
    flip: Vec<f64>,
    original_rows: usize,
}

fn standardize(lp: &LinearProgram) -> Standard {
    let n = lp.num_vars();
    let sign_obj = if lp.minimize { 1.0 } else { -1.0 };
    let mut var_map = Vec::with_capacity(n);
    let mut offset = Vec::with_capacity(n);
    let mut struct_cols = 0usize;
    // (var, bound) rows for finite upper bounds on shifted variables
    let mut bound_rows: Vec<(usize, f64)> = Vec::new();
    for j in 0..n {
        let (l, u) = (lp.lower[j], lp.upper[j]);
        if l.is_finite() {
            var_map.push(vec![(struct_cols, 1.0)]);
            offset.push(l);
            if u.is_finite() {
                bound_rows.push((struct_cols, u - l));
            }
            struct_cols += 1;
        } else if u.is_finite() {
            var_map.push(vec![(struct_cols, -1.0)]);
            offset.push(u);
            struct_cols += 1;
        } else {
            var_map.push(vec![(struct_cols, 1.0), (struct_cols + 1, -1.0)]);
            offset.push(0.0);
            struct_cols += 2;
        }
    }
    let m0 = lp.rows.len();
    let m = m0 + bound_rows.len();
    let mut cols = vec![vec![0.0; m]; struct_cols];
    let mut cost = vec![0.0; struct_cols];
    let mut b = vec![0.0; m];
    for j in 0..n {
        for &(k, s) in &var_map[j] {
            cost[k] = sign_obj * lp.objective[j] * s;
            for i in 0..m0 {
                cols[k][i] = lp.rows[i][j] * s;
            }
        }
    }
    let mut senses: Vec<Sense> = lp.senses.clone();
    for i in 0..m0 {
        b[i] = lp.rhs[i]
            - (0..n)
                .filter(|&j| offset[j] != 0.0)
                .map(|j| lp.rows[i][j] * offset[j])
                .sum::<f64>();
    }
    for (r, &(k, ub)) in bound_rows.iter().enumerate() {
        cols[k][m0 + r] = 1.0;
        b[m0 + r] = ub;
        senses.push(Sense::Le);
    }
    let mut flip = vec![1.0; m];
    for i in 0..m {
        if b[i] < 0.0 {
            flip[i] = -1.0;
            b[i] = -b[i];
            for col in cols.iter_mut() {
                col[i] = -col[i];
            }
        }
    }
    let mut artificial = vec![false; cols.len()];
    let mut basis = vec![usize::MAX; m];
    for i in 0..m {
        let coef = match senses[i] {
            Sense::Le => 1.0,
            Sense::Ge => -1.0,
            Sense::Eq => continue,
        } * flip[i];
        let mut col = vec![0.0; m];
        col[i] = coef;
        cols.push(col);
        cost.push(0.0);
        artificial.push(false);
        if coef > 0.0 {
            basis[i] = cols.len() - 1;
        }
    }
    for i in 0..m {
        if basis[i] == usize::MAX {
            let mut col = vec![0.0; m];
            col[i] = 1.0;
            cols.push(col);
            cost.push(0.0);
            artificial.push(true);
            basis[i] = cols.len() - 1;
        }
    }
    Standard {
        cols,
        b,
        cost,
        artificial,
        basis,
        var_map,
        offset,
        flip,
        original_rows: m0,
    }
}

enum Outcome {
    Optimal,
    Unbounded,
}

struct Simplex<'a> {
    sf: &'a Standard,
    m: usize,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Mat,
    xb: Vec<f64>,
    iterations: usize,
    cap: usize,
}

impl<'a> Simplex<'a> {
    fn new(sf: &'a Standard) -> Self {
        let m = sf.b.len();
        let mut in_basis = vec![false; sf.cols.len()];
        for &k in &sf.basis {
            in_basis[k] = true;
        }
        let mut s = Simplex {
            sf,
            m,
            basis: sf.basis.clone(),
            in_basis,
            binv: Mat::identity(m),
            xb: sf.b.clone(),
            iterations: 0,
            cap: 20_000 + 50 * (m + sf.cols.len()),
        };
        s.refactor();
        s
    }

    /// Recompute the basis inverse from scratch (Gauss-Jordan, partial pivoting).
    fn refactor(&mut self) {
        let m = self.m;
        let mut a = Mat::from_fn(m, m, |i, j| self.sf.cols[self.basis[j]][i]);
        let mut inv = Mat::identity(m);
        for col in 0..m {
            let p = (col..m)
                .max_by(|&x, &y| a[(x, col)].abs().total_cmp(&a[(y, col)].abs()))
                .unwrap();
            if a[(p, col)].abs() < 1e-14 {
                // Singular basis should not happen; keep the running inverse.
                return;
            }
            if p != col {
                for j in 0..m {
                    let t = a[(p, j)];
                    a[(p, j)] = a[(col, j)];
                    a[(col, j)] = t;
                    let t = inv[(p, j)];
                    inv[(p, j)] = inv[(col, j)];
                    inv[(col, j)] = t;
                }
            }
            let d = a[(col, col)];
            for j in 0..m {
                a[(col, j)] /= d;
                inv[(col, j)] /= d;
            }
            for i in 0..m {
                if i != col {
                    let f = a[(i, col)];
                    if f != 0.0 {
                        for j in 0..m {
                            a[(i, j)] -= f * a[(col, j)];
                            inv[(i, j)] -= f * inv[(col, j)];
                        }
                    }
                }
            }
        }
        self.binv = inv;
        self.xb = self.times_binv(&self.sf.b);
        for x in self.xb.iter_mut() {
            if *x < 0.0 && *x > -FEAS_TOL {
                *x = 0.0;
            }
        }
    }

    fn times_binv(&self, v: &[f64]) -> Vec<f64> {
        (0..self.m)
            .map(|i| (0..self.m).map(|k| self.binv[(i, k)] * v[k]).sum())
            .collect()
    }

    fn duals(&self, cost: &[f64]) -> Vec<f64> {
        let mut pi = vec![0.0; self.m];
        for (i, &k) in self.basis.iter().enumerate() {
            let cb = cost[k];
            if cb != 0.0 {
                for j in 0..self.m {
                    pi[j] += cb * self.binv[(i, j)];
                }
            }
        }
        pi
    }

    fn pivot(&mut self, r: usize, enter: usize, u: &[f64]) {
        let m = self.m;
        let ur = u[r];
        for j in 0..m {
            self.binv[(r, j)] /= ur;
        }
        for i in 0..m {
            if i != r && u[i] != 0.0 {
                let f = u[i];
                for j in 0..m {
                    let v = self.binv[(r, j)];
                    self.binv[(i, j)] -= f * v;
                }
            }
        }
        let theta = self.xb[r] / ur;
        for i in 0..m {
            if i != r {
                self.xb[i] -= theta * u[i];
                if self.xb[i] < 0.0 && self.xb[i] > -FEAS_TOL {
                    self.xb[i] = 0.0;
                }
            }
        }
        self.xb[r] = theta;
        self.in_basis[self.basis[r]] = false;
        self.in_basis[enter] = true;
        self.basis[r] = enter;
        self.iterations += 1;
        if self.iterations.is_multiple_of(REFACTOR_EVERY) {
            self.refactor();
        }
    }

    fn run(&mut self, cost: &[f64], allow_artificial: bool) -> Result<Outcome> {
        let ncols = self.sf.cols.len();
        let mut degenerate = 0usize;
        loop {
            if self.iterations >= self.cap {
                return Err(Error::DegeneratePivotLimit {
                    iterations: self.iterations,
                });
            }
            let bland = degenerate >= DEGENERATE_RUN;
            let pi = self.duals(cost);
            let mut enter = None;
            let mut best = -COST_TOL;
            for j in 0..ncols {
                if self.in_basis[j] || (!allow_artificial && self.sf.artificial[j]) {
                    continue;
                }
                let col = &self.sf.cols[j];
                let d = cost[j] - pi.iter().zip(col).map(|(p, a)| p * a).sum::<f64>();
                if d < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(enter) = enter else {
                return Ok(Outcome::Optimal);
            };
            let u = self.times_binv(&self.sf.cols[enter]);
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let basic_art = !allow_artificial && self.sf.artificial[self.basis[i]];
                let ratio = if basic_art && u[i].abs() > PIVOT_TOL {
                    0.0
                } else if u[i] > PIVOT_TOL {
                    self.xb[i].max(0.0) / u[i]
                } else {
                    continue;
                };
                let better = match leave {
                    None => true,
                    Some((r, t)) => {
                        if ratio < t - 1e-12 {
                            true
                        } else if ratio <= t + 1e-12 {
                            if bland {
                                self.basis[i] < self.basis[r]
                            } else {
                                u[i].abs() > u[r].abs()
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, theta)) = leave else {
                return Ok(Outcome::Unbounded);
            };
            if theta <= FEAS_TOL {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, enter, &u);
        }
    }

    /// Pivot zero-level artificials out of the basis where possible.
    fn expel_artificials(&mut self) {
        for r in 0..self.m {
            if !self.sf.artificial[self.basis[r]] {
                continue;
            }
            let row: Vec<f64> = (0..self.m).map(|j| self.binv[(r, j)]).collect();
            let candidate = (0..self.sf.cols.len())
                .filter(|&j| !self.in_basis[j] && !self.sf.artificial[j])
                .map(|j| {
                    let v: f64 = row.iter().zip(&self.sf.cols[j]).map(|(a, b)| a * b).sum();
                    (j, v)
                })
                .filter(|&(_, v)| v.abs() > 1e-7)
                .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()));
            if let Some((j, _)) = candidate {
                let u = self.times_binv(&self.sf.cols[j]);
                self.pivot(r, j, &u);
            }
        }
    }

    fn primal(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.sf.cols.len()];
        for (i, &k) in self.basis.iter().enumerate() {
            x[k] = self.xb[i].max(0.0);
        }
        x
    }
}

pub fn lp_solve(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let sf = standardize(lp);
    let n = lp.num_vars();
    let m0 = sf.original_rows;
    let mut sx = Simplex::new(&sf);

    let phase1_cost: Vec<f64> = sf
        .artificial
        .iter()
        .map(|&a| if a { 1.0 } else { 0.0 })
        .collect();
    if sf.artificial.iter().any(|&a| a) {
        sx.run(&phase1_cost, true)?;
        let w: f64 = sx
            .basis
            .iter()
            .zip(&sx.xb)
            .filter(|(&k, _)| sf.artificial[k])
            .map(|(_, &v)| v)
            .sum();
        let scale = 1.0 + sf.b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if w > FEAS_TOL * scale {
            let pi = sx.duals(&phase1_cost);
            let only_nonneg = (0..n).all(|j| lp.lower[j] == 0.0 && lp.upper[j] == f64::INFINITY);
            let farkas = only_nonneg.then(|| (0..m0).map(|i| sf.flip[i] * pi[i]).collect());
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                objective: f64::NAN,
                x: vec![f64::NAN; n],
                duals: vec![0.0; m0],
                farkas,
                iterations: sx.iterations,
            });
        }
        sx.expel_artificials();
    }

    let outcome = sx.run(&sf.cost, false)?;
    let xs = sx.primal();
    let x: Vec<f64> = (0..n)
        .map(|j| sf.offset[j] + sf.var_map[j].iter().map(|&(k, s)| s * xs[k]).sum::<f64>())
        .collect();
    let pi = sx.duals(&sf.cost);
    let sense = if lp.minimize { 1.0 } else { -1.0 };
    let duals = (0..m0).map(|i| sense * sf.flip[i] * pi[i]).collect();
    match outcome {
        Outcome::Optimal => Ok(LpSolution {
            status: LpStatus::Optimal,
            objective: lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum(),
            x,
            duals,
            farkas: None,
            iterations: sx.iterations,
        }),
        Outcome::Unbounded => Ok(LpSolution {
            status: LpStatus::Unbounded,
            objective: if lp.minimize {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            },
            x,
            duals,
            farkas: None,
            iterations: sx.iterations,
        }),
    }
}
