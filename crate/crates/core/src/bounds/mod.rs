//! The α ≤ ϑ ≤ α* hierarchy and the STAB / TH / QSTAB membership tests.

mod alpha;
mod cliques;
mod membership;
mod theta;

use std::ops::Deref;

use serde::{Deserialize, Serialize};

pub use alpha::{independence_number, max_weight_independent_set};
pub use cliques::{clique_number, maximal_cliques};
pub use membership::{
    qstab_membership, stab_membership, th_membership, QstabVerdict, StabVerdict, ThVerdict,
    MEMBERSHIP_TOL,
};
pub use theta::{
    lovasz_theta, lovasz_theta_detailed, theta_circulant_oracle, ThetaResult, THETA_TOL,
};

use crate::error::{param, Error, Result};
use crate::graph::Graph;
use crate::numkernel::{lp_solve, LinearProgram, LpStatus, Sense};

/// One probability per vertex, each in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbabilityAssignment(Vec<f64>);

impl ProbabilityAssignment {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if let Some(i) = p.iter().position(|x| !(0.0..=1.0).contains(x)) {
            return param(format!("probability {i} = {} outside [0, 1]", p[i]));
        }
        Ok(ProbabilityAssignment(p))
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        ProbabilityAssignment::new(vec![value; n])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for ProbabilityAssignment {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for ProbabilityAssignment {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        ProbabilityAssignment::new(v)
    }
}

impl From<ProbabilityAssignment> for Vec<f64> {
    fn from(p: ProbabilityAssignment) -> Vec<f64> {
        p.0
    }
}

/// Optimum and optimizer of the fractional packing LP.
#[derive(Clone, Debug, Serialize)]
pub struct FractionalPacking {
    pub value: f64,
    pub p: Vec<f64>,
}

/// α*(G, w): max Σ w_i p_i over `p ∈ [0,1]^n` with every maximal clique summing to at most 1.
pub fn fractional_packing(g: &Graph, weights: Option<&[f64]>) -> Result<FractionalPacking> {
    let n = g.n();
    let w = match weights {
        Some(w) if w.len() != n => return param(format!("{} weights for {n} vertices", w.len())),
        Some(w) => w.to_vec(),
        None => vec![1.0; n],
    };
    let mut lp = LinearProgram::maximize(w);
    for j in 0..n {
        lp.set_bounds(j, 0.0, 1.0);
    }
    for c in maximal_cliques(g) {
        if c.len() < 2 {
            continue;
        }
        let mut row = vec![0.0; n];
        for &i in &c {
            row[i] = 1.0;
        }
        lp.add_row(row, Sense::Le, 1.0);
    }
    let sol = lp_solve(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Precondition(format!(
            "packing LP ended {:?}",
            sol.status
        )));
    }
    Ok(FractionalPacking {
        value: sol.objective,
        p: sol.x,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub alpha: usize,
    pub theta: f64,
    pub alpha_star: f64,
    pub ratio: f64,
    pub witness_independent_set: Vec<usize>,
    pub maximal_cliques: Vec<Vec<usize>>,
}

impl BoundsReport {
    /// α ≤ ϑ + 1e-6 ≤ α* + 2e-6.
    pub fn sandwich_holds(&self) -> bool {
        self.alpha as f64 <= self.theta + 1e-6 && self.theta + 1e-6 <= self.alpha_star + 2e-6
    }
}

pub fn bounds_report(g: &Graph) -> Result<BoundsReport> {
    let (alpha, witness) = independence_number(g);
    let theta = lovasz_theta(g, None)?;
    let alpha_star = fractional_packing(g, None)?.value;
    Ok(BoundsReport {
        alpha,
        theta,
        alpha_star,
        ratio: theta / alpha as f64,
        witness_independent_set: witness,
        maximal_cliques: maximal_cliques(g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamilySpec;

    #[test]
    fn packing_examples() {
        for n in [5usize, 7, 9] {
            let g = GraphFamilySpec::Cycle { n }.build().unwrap();
            assert!((fractional_packing(&g, None).unwrap().value - n as f64 / 2.0).abs() < 1e-9);
        }
        let k = GraphFamilySpec::Complete { n: 5 }.build().unwrap();
        assert!((fractional_packing(&k, None).unwrap().value - 1.0).abs() < 1e-9);
        let e = Graph::empty(3).unwrap();
        assert!((fractional_packing(&e, None).unwrap().value - 3.0).abs() < 1e-9);
    }

    #[test]
    fn pentagon_report() {
        let g = GraphFamilySpec::Cycle { n: 5 }.build().unwrap();
        let r = bounds_report(&g).unwrap();
        assert_eq!(r.alpha, 2);
        assert!((r.theta - 5f64.sqrt()).abs() < 1e-6);
        assert!((r.alpha_star - 2.5).abs() < 1e-9);
        assert!(r.sandwich_holds());
    }

    #[test]
    fn assignment_validation() {
        assert!(ProbabilityAssignment::new(vec![0.2, 1.1]).is_err());
        let p: ProbabilityAssignment = serde_json::from_str("[0.5, 0.25]").unwrap();
        assert_eq!(p.len(), 2);
        assert!(serde_json::from_str::<ProbabilityAssignment>("[-0.5]").is_err());
    }
}
