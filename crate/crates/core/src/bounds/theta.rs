//! Lovász number, weighted and unweighted, with a certified bracket.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::graph::{Graph, GraphFamilySpec};
use crate::numkernel::eig::eig_sym;
use crate::numkernel::sdp::sdp_solve_bracketed;
use crate::numkernel::{
    lp_solve, LinearProgram, LpStatus, Mat, SdpConstraint, SemidefiniteProgram, Sense,
};

/// Default width of the certified bracket around ϑ, relative to `max(1, ϑ)`.
pub const THETA_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct ThetaResult {
    pub value: f64,
    /// A feasible primal point achieves at least this.
    pub lower: f64,
    /// A dual certificate shows ϑ is at most this.
    pub upper: f64,
    pub iterations: usize,
}

fn weight_matrix(n: usize, weights: Option<&[f64]>) -> Result<Mat> {
    match weights {
        None => Ok(Mat::from_fn(n, n, |_, _| 1.0)),
        Some(w) => {
            if w.len() != n {
                return param(format!("{} weights for {n} vertices", w.len()));
            }
            if let Some(i) = w.iter().position(|&x| !(x >= 0.0) || !x.is_finite()) {
                return param(format!("weight {i} is negative or not finite"));
            }
            let r: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
            Ok(Mat::from_fn(n, n, |i, j| r[i] * r[j]))
        }
    }
}

/// ϑ(G, w) = max ⟨B_w, X⟩ over PSD X with unit trace and zero on edges.
pub fn lovasz_theta_detailed(g: &Graph, weights: Option<&[f64]>, tol: f64) -> Result<ThetaResult> {
    let n = g.n();
    let b = weight_matrix(n, weights)?;
    let edges = g.edges();
    if b.max_abs() == 0.0 {
        return Ok(ThetaResult {
            value: 0.0,
            lower: 0.0,
            upper: 0.0,
            iterations: 0,
        });
    }
    let mut constraints = vec![SdpConstraint {
        entries: (0..n).map(|i| (i, i, 1.0)).collect(),
        rhs: 1.0,
    }];
    constraints.extend(edges.iter().map(|&(i, j)| SdpConstraint {
        entries: vec![(i, j, 1.0)],
        rhs: 0.0,
    }));
    let sdp = SemidefiniteProgram {
        order: n,
        objective: b.clone(),
        constraints,
    };
    let bracket = |x: &Mat, y: &[f64]| -> Result<(f64, f64)> {
        // upper: λ_max(B − Σ y_e E_e) bounds ϑ for any edge multipliers
        let mut z = b.clone();
        for (k, &(i, j)) in edges.iter().enumerate() {
            z[(i, j)] -= y[k + 1];
            z[(j, i)] -= y[k + 1];
        }
        let upper = eig_sym(&z)?.max();
        // lower: project X onto the feasible set
        let mut p = x.clone();
        p.symmetrize();
        for &(i, j) in &edges {
            p[(i, j)] = 0.0;
            p[(j, i)] = 0.0;
        }
        let lmin = eig_sym(&p)?.min();
        if lmin < 0.0 {
            for i in 0..n {
                p[(i, i)] -= lmin;
            }
        }
        let tr = p.trace();
        let lower = if tr > 0.0 {
            b.dot(&p) / tr
        } else {
            f64::NEG_INFINITY
        };
        Ok((lower, upper))
    };
    let (sol, lower, upper) = sdp_solve_bracketed(&sdp, tol, bracket)?;
    Ok(ThetaResult {
        value: sol.value,
        lower,
        upper,
        iterations: sol.iterations,
    })
}

pub fn lovasz_theta(g: &Graph, weights: Option<&[f64]>) -> Result<f64> {
    Ok(lovasz_theta_detailed(g, weights, THETA_TOL)?.value)
}

/// ϑ of a circulant graph by an LP over the Fourier coefficients of a
/// circulant primal matrix. Independent of the SDP solver.
pub fn theta_circulant_oracle(spec: &GraphFamilySpec) -> Result<f64> {
    let (n, offsets) = match spec {
        GraphFamilySpec::Circulant { n, offsets } => (*n, offsets.clone()),
        GraphFamilySpec::Cycle { n } => (*n, vec![1]),
        GraphFamilySpec::Complete { n } => (*n, (1..=n / 2).collect()),
        GraphFamilySpec::Moebius { n } => {
            if *n == 2 {
                (4, vec![1, 2])
            } else {
                (2 * n, vec![1, *n])
            }
        }
        other => {
            return Err(Error::Parameter(format!(
                "{} is not a circulant family",
                other.name()
            )))
        }
    };
    spec.build()?; // validates the offsets
    let half = n / 2;
    // variables x_k for k in 1..=half not in the connection set; x_0 = 1/n
    let free: Vec<usize> = (1..=half).filter(|k| !offsets.contains(k)).collect();
    let mult = |k: usize| if 2 * k == n { 1.0 } else { 2.0 };
    let x0 = 1.0 / n as f64;
    let obj: Vec<f64> = free.iter().map(|&k| n as f64 * mult(k)).collect();
    let mut lp = LinearProgram::maximize(obj);
    lp.free_all();
    for j in 0..=half {
        // eigenvalue j: x0 + Σ mult(k) x_k cos(2π j k / n) ≥ 0
        let row: Vec<f64> = free
            .iter()
            .map(|&k| mult(k) * (2.0 * PI * (j * k) as f64 / n as f64).cos())
            .collect();
        lp.add_row(row, Sense::Ge, -x0);
    }
    let sol = lp_solve(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Precondition(format!(
            "circulant LP ended {:?}",
            sol.status
        )));
    }
    Ok(sol.objective + n as f64 * x0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(s: GraphFamilySpec) -> Graph {
        s.build().unwrap()
    }

    #[test]
    fn pentagon_and_trivial_graphs() {
        let c5 = fam(GraphFamilySpec::Cycle { n: 5 });
        let t = lovasz_theta_detailed(&c5, None, 1e-9).unwrap();
        assert!((t.value - 5f64.sqrt()).abs() < 1e-8);
        assert!(t.lower <= 5f64.sqrt() + 1e-12 && t.upper >= 5f64.sqrt() - 1e-12);
        let k = fam(GraphFamilySpec::Complete { n: 6 });
        assert!((lovasz_theta(&k, None).unwrap() - 1.0).abs() < 1e-7);
        let e = Graph::empty(7).unwrap();
        assert!((lovasz_theta(&e, None).unwrap() - 7.0).abs() < 1e-7);
    }

    #[test]
    fn odd_cycle_formula() {
        for n in [7usize, 9] {
            let g = fam(GraphFamilySpec::Cycle { n });
            let c = (PI / n as f64).cos();
            let want = n as f64 * c / (1.0 + c);
            assert!((lovasz_theta(&g, None).unwrap() - want).abs() < 1e-7);
        }
    }

    #[test]
    fn weighted_all_ones_matches() {
        let g = fam(GraphFamilySpec::Circulant {
            n: 8,
            offsets: vec![1, 3],
        });
        let a = lovasz_theta(&g, None).unwrap();
        let b = lovasz_theta(&g, Some(&[1.0; 8])).unwrap();
        assert!((a - b).abs() < 1e-7);
        assert!(lovasz_theta(&g, Some(&[-1.0; 8])).is_err());
        assert!(lovasz_theta(&g, Some(&[1.0; 3])).is_err());
    }

    #[test]
    fn weighted_single_vertex_weight() {
        // only one vertex weighted: ϑ = its weight
        let g = fam(GraphFamilySpec::Cycle { n: 5 });
        let v = lovasz_theta(&g, Some(&[0.7, 0.0, 0.0, 0.0, 0.0])).unwrap();
        assert!((v - 0.7).abs() < 1e-7);
    }

    #[test]
    fn oracle_examples() {
        let s5 = 5f64.sqrt();
        let v = theta_circulant_oracle(&GraphFamilySpec::Circulant {
            n: 5,
            offsets: vec![1],
        })
        .unwrap();
        assert!((v - s5).abs() < 1e-9);
        let v = theta_circulant_oracle(&GraphFamilySpec::Circulant {
            n: 4,
            offsets: vec![1],
        })
        .unwrap();
        assert!((v - 2.0).abs() < 1e-9);
        let v = theta_circulant_oracle(&GraphFamilySpec::Circulant {
            n: 10,
            offsets: vec![1, 4],
        })
        .unwrap();
        assert!((v - 2.0 * s5).abs() < 1e-9);
        assert!(theta_circulant_oracle(&GraphFamilySpec::Path { n: 4 }).is_err());
    }

    #[test]
    fn oracle_agrees_with_sdp() {
        for (n, s) in [
            (7usize, vec![1usize]),
            (9, vec![1, 2]),
            (12, vec![1, 4, 6]),
            (10, vec![2, 5]),
        ] {
            let spec = GraphFamilySpec::Circulant { n, offsets: s };
            let a = theta_circulant_oracle(&spec).unwrap();
            let b = lovasz_theta(&spec.build().unwrap(), None).unwrap();
            assert!((a - b).abs() < 1e-6, "{}: {a} vs {b}", spec.name());
        }
    }
}
