//! Membership in STAB(G) ⊆ TH(G) ⊆ QSTAB(G).

use serde::Serialize;

use super::alpha::max_weight_independent_set;
use super::cliques::maximal_cliques;
use super::theta::{lovasz_theta_detailed, THETA_TOL};
use crate::error::{param, Error, Result};
use crate::graph::Graph;
use crate::numkernel::{lp_solve, LinearProgram, LpStatus, Sense};

/// Default membership tolerance.
pub const MEMBERSHIP_TOL: f64 = 1e-6;

fn check_len(g: &Graph, p: &[f64]) -> Result<()> {
    if p.len() != g.n() {
        return param(format!("{} probabilities for {} vertices", p.len(), g.n()));
    }
    if p.iter().any(|x| !x.is_finite()) {
        return param("probabilities must be finite");
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct StabVerdict {
    pub member: bool,
    /// Convex combination of independent sets reproducing `p` (the empty set
    /// carries the remaining weight). Empty when not a member.
    pub combination: Vec<(Vec<usize>, f64)>,
    /// Valid inequality `a·x ≤ b` for STAB(G) violated by `p`.
    pub separating: Option<(Vec<f64>, f64)>,
}

/// Column generation over independent sets. The restricted master minimizes
/// the total deviation between `p` and a sub-convex combination of the
/// current sets; pricing is a maximum-weight independent set.
pub fn stab_membership(g: &Graph, p: &[f64]) -> Result<StabVerdict> {
    check_len(g, p)?;
    let n = g.n();
    if p.iter().any(|&x| x < -1e-12) {
        // negative coordinates are separated by -x_i ≤ 0
        let i = p.iter().position(|&x| x < -1e-12).unwrap();
        let mut a = vec![0.0; n];
        a[i] = -1.0;
        return Ok(StabVerdict {
            member: false,
            combination: vec![],
            separating: Some((a, 0.0)),
        });
    }
    let mut pool: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let (_, heavy) = max_weight_independent_set(g, p);
    if heavy.len() > 1 {
        pool.push(heavy);
    }
    for _round in 0..10_000 {
        let k = pool.len();
        // variables: λ_S (k), s⁺ (n), s⁻ (n)
        let mut obj = vec![0.0; k];
        obj.extend(std::iter::repeat_n(1.0, 2 * n));
        let mut lp = LinearProgram::minimize(obj);
        for i in 0..n {
            let mut row = vec![0.0; k + 2 * n];
            for (s, set) in pool.iter().enumerate() {
                if set.contains(&i) {
                    row[s] = 1.0;
                }
            }
            row[k + i] = 1.0;
            row[k + n + i] = -1.0;
            lp.add_row(row, Sense::Eq, p[i]);
        }
        let mut row = vec![0.0; k + 2 * n];
        row[..k].iter_mut().for_each(|x| *x = 1.0);
        lp.add_row(row, Sense::Le, 1.0);
        let sol = lp_solve(&lp)?;
        if sol.status != LpStatus::Optimal {
            return Err(Error::Precondition(format!(
                "master LP ended {:?}",
                sol.status
            )));
        }
        let u = &sol.duals[..n];
        let v = sol.duals[n];
        let (best, set) = max_weight_independent_set(g, u);
        if sol.objective <= 1e-9 {
            let combination = pool
                .iter()
                .zip(&sol.x)
                .filter(|(_, &l)| l > 1e-12)
                .map(|(s, &l)| (s.clone(), l))
                .collect();
            return Ok(StabVerdict {
                member: true,
                combination,
                separating: None,
            });
        }
        if best + v <= 1e-9 || pool.contains(&set) {
            // no improving column: u·x ≤ max(u over independent sets) separates p
            let rhs = best.max(0.0);
            return Ok(StabVerdict {
                member: false,
                combination: vec![],
                separating: Some((u.to_vec(), rhs)),
            });
        }
        pool.push(set);
    }
    Err(Error::Precondition(
        "column generation did not terminate".into(),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct ThVerdict {
    pub member: bool,
    /// ϑ(Ḡ, p); `None` when a coordinate is negative.
    pub theta_complement: Option<f64>,
}

/// `p ∈ TH(G)` iff `p ≥ 0` and ϑ(Ḡ, p) ≤ 1.
pub fn th_membership(g: &Graph, p: &[f64], tol: f64) -> Result<ThVerdict> {
    check_len(g, p)?;
    if p.iter().any(|&x| x < -tol) {
        return Ok(ThVerdict {
            member: false,
            theta_complement: None,
        });
    }
    let w: Vec<f64> = p.iter().map(|&x| x.max(0.0)).collect();
    let t = lovasz_theta_detailed(&g.complement(), Some(&w), THETA_TOL.min(tol * 1e-2))?;
    Ok(ThVerdict {
        member: t.value <= 1.0 + tol,
        theta_complement: Some(t.value),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct QstabVerdict {
    pub member: bool,
    pub max_clique_sum: f64,
    /// A maximal clique whose probabilities sum above `1 + tol`.
    pub violated_clique: Option<Vec<usize>>,
    /// A vertex with a negative coordinate below `-tol`.
    pub negative_vertex: Option<usize>,
}

/// `p ∈ QSTAB(G)` iff `p ≥ 0` and every maximal clique sums to at most 1.
pub fn qstab_membership(g: &Graph, p: &[f64], tol: f64) -> Result<QstabVerdict> {
    check_len(g, p)?;
    let negative_vertex = p.iter().position(|&x| x < -tol);
    let mut max_sum = f64::NEG_INFINITY;
    let mut worst = None;
    for c in maximal_cliques(g) {
        let s: f64 = c.iter().map(|&i| p[i]).sum();
        if s > max_sum {
            max_sum = s;
            worst = Some(c);
        }
    }
    let violated = if max_sum > 1.0 + tol { worst } else { None };
    Ok(QstabVerdict {
        member: negative_vertex.is_none() && violated.is_none(),
        max_clique_sum: max_sum,
        violated_clique: violated,
        negative_vertex,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamilySpec;

    fn c5() -> Graph {
        GraphFamilySpec::Cycle { n: 5 }.build().unwrap()
    }

    #[test]
    fn stab_examples() {
        let g = c5();
        let v = stab_membership(&g, &[1.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(v.member);
        let total: f64 = v.combination.iter().map(|c| c.1).sum();
        assert!(total <= 1.0 + 1e-9);
        assert!(stab_membership(&g, &[0.0; 5]).unwrap().member);
        let s = 1.0 / 5f64.sqrt();
        let v = stab_membership(&g, &[s; 5]).unwrap();
        assert!(!v.member);
        let (a, b) = v.separating.unwrap();
        let ap: f64 = a.iter().map(|x| x * s).sum();
        assert!(ap > b + 1e-9);
        // valid on every independent set
        for m in 0u64..32 {
            let set: Vec<usize> = (0..5).filter(|i| m >> i & 1 == 1).collect();
            if g.is_independent(&set) {
                let val: f64 = set.iter().map(|&i| a[i]).sum();
                assert!(val <= b + 1e-9);
            }
        }
    }

    #[test]
    fn stab_reconstructs_mixture() {
        let g = c5();
        // 0.4·{0,2} + 0.3·{1,3} + 0.3·{4}
        let p = [0.4, 0.3, 0.4, 0.3, 0.3];
        let v = stab_membership(&g, &p).unwrap();
        assert!(v.member);
        let mut recon = [0.0; 5];
        for (set, l) in &v.combination {
            assert!(g.is_independent(set));
            for &i in set {
                recon[i] += l;
            }
        }
        for i in 0..5 {
            assert!((recon[i] - p[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn th_boundary() {
        let g = c5();
        let s = 1.0 / 5f64.sqrt();
        let v = th_membership(&g, &[s; 5], MEMBERSHIP_TOL).unwrap();
        assert!(v.member);
        assert!((v.theta_complement.unwrap() - 1.0).abs() < 1e-6);
        let v = th_membership(&g, &[0.5; 5], MEMBERSHIP_TOL).unwrap();
        assert!(!v.member);
        assert!((v.theta_complement.unwrap() - 5f64.sqrt() / 2.0).abs() < 1e-6);
        assert!(
            th_membership(&g, &[1.0, 0.0, 1.0, 0.0, 0.0], MEMBERSHIP_TOL)
                .unwrap()
                .member
        );
    }

    #[test]
    fn qstab_examples() {
        let g = c5();
        assert!(
            qstab_membership(&g, &[0.5; 5], MEMBERSHIP_TOL)
                .unwrap()
                .member
        );
        let v = qstab_membership(&g, &[0.51; 5], MEMBERSHIP_TOL).unwrap();
        assert!(!v.member);
        let e = v.violated_clique.unwrap();
        assert!(e.len() == 2 && g.has_edge(e[0], e[1]));
        let k3 = GraphFamilySpec::Complete { n: 3 }.build().unwrap();
        assert!(
            !qstab_membership(&k3, &[0.5, 0.5, 0.1], MEMBERSHIP_TOL)
                .unwrap()
                .member
        );
    }
}
