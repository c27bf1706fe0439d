//! Exclusivity-principle bounds: product arguments, complement duality and
//! vertex-transitive maxima.

mod suites;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use suites::{
    circulant10_suite, op_propagation_suite, plot_row, plot_rows_csv, Circulant10Report,
    Circulant10Row, OpRow, PlotRow,
};

use crate::bounds::{clique_number, lovasz_theta, qstab_membership, th_membership};
use crate::error::{param, Result};
use crate::graph::{is_isomorphic, is_vertex_transitive, Graph};
use crate::numkernel::{sdp_solve, Mat, SdpConstraint, SemidefiniteProgram};

/// Outcome of `Σ p_i p̄_i ≤ 1 + tol`.
#[derive(Clone, Debug, Serialize)]
pub struct PairVerdict {
    pub passes: bool,
    pub sum: f64,
}

/// `p` lives on G, `pbar` on Ḡ over the same vertex set.
pub fn eprinciple_pair_test(g: &Graph, p: &[f64], pbar: &[f64], tol: f64) -> Result<PairVerdict> {
    if p.len() != g.n() || pbar.len() != g.n() {
        return param(format!(
            "assignments of length {} and {} for {} vertices",
            p.len(),
            pbar.len(),
            g.n()
        ));
    }
    let sum: f64 = p.iter().zip(pbar).map(|(a, b)| a * b).sum();
    Ok(PairVerdict {
        passes: sum <= 1.0 + tol,
        sum,
    })
}

/// One round of the product argument with a symmetric assignment.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetricEBound {
    pub n: usize,
    pub clique_number: usize,
    /// Common vertex probability `min(1/ω, 1/√n)`.
    pub p: f64,
    /// `n · p`.
    pub value: f64,
    /// Largest clique sum of the product assignment `p²` on G·Ḡ (OR product).
    pub product_max_clique_sum: f64,
    pub product_feasible: bool,
}

/// Symmetric bound from `Σ p_i ≤ 1` on cliques of G and `n p² ≤ 1` on the
/// pair events `(i, i)` of G·Ḡ, which form a clique of size n.
pub fn eprinciple_symmetric_bound(g: &Graph) -> Result<SymmetricEBound> {
    let n = g.n();
    if n == 0 {
        return param("graph has no vertices");
    }
    let omega = clique_number(g);
    let p = (1.0 / omega as f64).min(1.0 / (n as f64).sqrt());
    let prod = g.or_product(&g.complement())?;
    let q = qstab_membership(&prod, &vec![p * p; prod.n()], 1e-9)?;
    Ok(SymmetricEBound {
        n,
        clique_number: omega,
        p,
        value: n as f64 * p,
        product_max_clique_sum: q.max_clique_sum,
        product_feasible: q.member,
    })
}

/// The pentagon: `5P² ≤ 1` gives Σp ≤ √5.
pub fn pentagon_eprinciple_bound() -> Result<SymmetricEBound> {
    let c5 = crate::graph::GraphFamilySpec::Cycle { n: 5 }.build()?;
    eprinciple_symmetric_bound(&c5)
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: String) -> Self {
        Check {
            name: name.into(),
            pass,
            detail,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub graph: String,
    pub n: usize,
    pub theta: f64,
    pub theta_complement: f64,
    pub product: f64,
    pub vertex_transitive: bool,
    pub self_complementary: bool,
    /// `n / ϑ(Ḡ)`; reported only for vertex-transitive graphs.
    pub e_principle_max: Option<f64>,
    pub checks: Vec<Check>,
}

impl DualityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn self_complementary(g: &Graph) -> Result<bool> {
    let n = g.n();
    if 4 * g.edge_count() != n * (n - 1) {
        return Ok(false);
    }
    is_isomorphic(g, &g.complement())
}

const DUALITY_SLACK: f64 = 1e-5;

pub fn duality_suite(g: &Graph) -> Result<DualityReport> {
    let n = g.n();
    if n == 0 {
        return param("graph has no vertices");
    }
    let theta = lovasz_theta(g, None)?;
    let theta_c = lovasz_theta(&g.complement(), None)?;
    let product = theta * theta_c;
    let vt = is_vertex_transitive(g)?;
    let sc = self_complementary(g)?;
    let nf = n as f64;
    let mut checks = vec![Check::new(
        "product_at_least_n",
        product >= nf - DUALITY_SLACK,
        format!("ϑ(G)ϑ(Ḡ) = {product:.9}, n = {n}"),
    )];
    let mut e_max = None;
    if vt {
        let ceiling = nf / theta_c;
        e_max = Some(ceiling);
        checks.push(Check::new(
            "product_equals_n",
            (product - nf).abs() <= DUALITY_SLACK,
            format!("|ϑ(G)ϑ(Ḡ) − n| = {:.2e}", (product - nf).abs()),
        ));
        checks.push(Check::new(
            "e_ceiling_reaches_theta",
            ceiling >= theta - DUALITY_SLACK,
            format!("n/ϑ(Ḡ) = {ceiling:.9}, ϑ(G) = {theta:.9}"),
        ));
        let c = theta / nf;
        let th = th_membership(g, &vec![c; n], DUALITY_SLACK)?;
        checks.push(Check::new(
            "constant_point_quantum",
            th.member,
            format!(
                "ϑ(Ḡ, ϑ/n·1) = {:.9}",
                th.theta_complement.unwrap_or(f64::NAN)
            ),
        ));
        if sc {
            checks.push(Check::new(
                "self_complementary_sqrt_n",
                (theta - nf.sqrt()).abs() <= DUALITY_SLACK,
                format!("ϑ = {theta:.9}, √n = {:.9}", nf.sqrt()),
            ));
        }
    }
    Ok(DualityReport {
        graph: format!("n={n},m={}", g.edge_count()),
        n,
        theta,
        theta_complement: theta_c,
        product,
        vertex_transitive: vt,
        self_complementary: sc,
        e_principle_max: e_max,
        checks,
    })
}

/// Point of TH(h) maximizing `w·x`, from the lifted order-(n+1) SDP
/// `Y ⪰ 0, Y_00 = 1, Y_ii = Y_0i, Y_ij = 0 on edges of h`.
pub fn th_maximizer(h: &Graph, w: &[f64], tol: f64) -> Result<Vec<f64>> {
    let n = h.n();
    if w.len() != n {
        return param(format!("{} weights for {n} vertices", w.len()));
    }
    let m = n + 1;
    let mut c = Mat::zeros(m, m);
    for i in 0..n {
        c[(i + 1, i + 1)] = w[i];
    }
    let mut constraints = vec![SdpConstraint {
        entries: vec![(0, 0, 1.0)],
        rhs: 1.0,
    }];
    for i in 1..m {
        constraints.push(SdpConstraint {
            entries: vec![(i, i, 1.0), (0, i, -0.5)],
            rhs: 0.0,
        });
    }
    for (i, j) in h.edges() {
        constraints.push(SdpConstraint {
            entries: vec![(i + 1, j + 1, 1.0)],
            rhs: 0.0,
        });
    }
    let sol = sdp_solve(
        &SemidefiniteProgram {
            order: m,
            objective: c,
            constraints,
        },
        tol,
    )?;
    Ok((1..m).map(|i| sol.x[(i, i)].clamp(0.0, 1.0)).collect())
}

/// One exterior point of TH(G) and the dual witness found for it.
#[derive(Clone, Debug, Serialize)]
pub struct ExteriorWitness {
    pub p: Vec<f64>,
    pub epsilon: f64,
    /// ϑ(Ḡ, p) > 1 certifies `p ∉ TH(G)`.
    pub theta_complement: f64,
    pub pbar: Vec<f64>,
    /// ϑ(G, p̄) ≤ 1 certifies `p̄ ∈ TH(Ḡ)`.
    pub pbar_theta: f64,
    pub pair_sum: f64,
    pub pass: bool,
}

/// Samples `p = (1+ε)·b` for boundary points `b` of TH(G) along seeded
/// directions and, for each, looks for `p̄ ∈ TH(Ḡ)` with `Σ p_i p̄_i > 1`.
pub fn exterior_duality_check(
    g: &Graph,
    directions: usize,
    epsilons: &[f64],
    seed: u64,
) -> Result<Vec<ExteriorWitness>> {
    let n = g.n();
    let gc = g.complement();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..directions {
        let d: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
        let scale = 1.0 / lovasz_theta(&gc, Some(&d))?;
        for &eps in epsilons {
            let p: Vec<f64> = d
                .iter()
                .map(|x| ((1.0 + eps) * scale * x).min(1.0))
                .collect();
            let th = th_membership(g, &p, 1e-9)?;
            let tc = th.theta_complement.unwrap_or(f64::NAN);
            let raw = th_maximizer(&gc, &p, 1e-9)?;
            // pull p̄ back onto TH(Ḡ) if solver error put it slightly outside
            let pt = lovasz_theta(g, Some(&raw))?;
            let pbar: Vec<f64> = if pt > 1.0 {
                raw.iter().map(|x| x / pt).collect()
            } else {
                raw
            };
            let pbar_theta = lovasz_theta(g, Some(&pbar))?;
            let pair_sum: f64 = p.iter().zip(&pbar).map(|(a, b)| a * b).sum();
            out.push(ExteriorWitness {
                pass: !th.member && pbar_theta <= 1.0 + 1e-7 && pair_sum > 1.0,
                p,
                epsilon: eps,
                theta_complement: tc,
                pbar,
                pbar_theta,
                pair_sum,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::maximal_cliques;
    use crate::graph::GraphFamilySpec;

    fn fam(s: GraphFamilySpec) -> Graph {
        s.build().unwrap()
    }

    #[test]
    fn pair_test_examples() {
        let c5 = fam(GraphFamilySpec::Cycle { n: 5 });
        let s = 1.0 / 5f64.sqrt();
        let v = eprinciple_pair_test(&c5, &[s; 5], &[s; 5], 1e-9).unwrap();
        assert!(v.passes && (v.sum - 1.0).abs() < 1e-12);
        let v = eprinciple_pair_test(&c5, &[0.5; 5], &[0.5; 5], 1e-9).unwrap();
        assert!(!v.passes && (v.sum - 1.25).abs() < 1e-12);
        assert!(
            eprinciple_pair_test(&c5, &[0.0; 5], &[1.0; 5], 0.0)
                .unwrap()
                .passes
        );
        assert!(eprinciple_pair_test(&c5, &[0.0; 4], &[1.0; 5], 0.0).is_err());
    }

    #[test]
    fn symmetric_bounds() {
        let b = pentagon_eprinciple_bound().unwrap();
        assert!((b.value - 5f64.sqrt()).abs() < 1e-12);
        assert!(b.product_feasible);
        assert!((b.product_max_clique_sum - 1.0).abs() < 1e-9);
        let k3 = eprinciple_symmetric_bound(&fam(GraphFamilySpec::Cycle { n: 3 })).unwrap();
        assert!((k3.value - 1.0).abs() < 1e-12);
        let c7 = eprinciple_symmetric_bound(&fam(GraphFamilySpec::Cycle { n: 7 })).unwrap();
        assert!((c7.value - 7f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn duality_examples() {
        let s5 = 5f64.sqrt();
        let r = duality_suite(&fam(GraphFamilySpec::Cycle { n: 5 })).unwrap();
        assert!(r.vertex_transitive && r.self_complementary);
        assert!((r.theta - s5).abs() < 1e-6 && (r.theta_complement - s5).abs() < 1e-6);
        assert!((r.e_principle_max.unwrap() - s5).abs() < 1e-6);
        assert!(r.all_pass(), "{:?}", r.checks);
        let r = duality_suite(&fam(GraphFamilySpec::Circulant {
            n: 10,
            offsets: vec![1, 4],
        }))
        .unwrap();
        assert!((r.theta - 2.0 * s5).abs() < 1e-6);
        assert!((r.theta_complement - s5).abs() < 1e-6);
        assert!((r.product - 10.0).abs() < 1e-5);
        assert!(r.all_pass());
        let r = duality_suite(&fam(GraphFamilySpec::Complete { n: 5 })).unwrap();
        assert!((r.theta - 1.0).abs() < 1e-6 && (r.theta_complement - 5.0).abs() < 1e-6);
        assert!(!r.self_complementary);
        assert!(r.all_pass());
        // a non-transitive graph gets no ceiling
        let r = duality_suite(&fam(GraphFamilySpec::Path { n: 4 })).unwrap();
        assert!(!r.vertex_transitive && r.e_principle_max.is_none());
        assert!(r.all_pass());
    }

    #[test]
    fn duality_on_large_transitive_graph() {
        let r = duality_suite(&fam(GraphFamilySpec::JohnsonGqs { q: 3, s: 1 })).unwrap();
        assert_eq!(r.n, 20);
        assert!(r.vertex_transitive);
        assert!(r.all_pass(), "{:?}", r.checks);
    }

    #[test]
    fn pentagon_exterior_points_have_witnesses() {
        let c5 = fam(GraphFamilySpec::Cycle { n: 5 });
        let w = exterior_duality_check(&c5, 10, &[0.01, 0.05], 2024).unwrap();
        assert_eq!(w.len(), 20);
        for x in &w {
            assert!(x.pass, "{x:?}");
        }
    }

    #[test]
    fn integral_pair_tests_match_qstab() {
        // integral points of QSTAB(Ḡ) are indicators of cliques of G
        let mut state = 0x9e3779b97f4a7c15u64;
        for trial in 0..40usize {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let s = state;
            let n = 3 + trial % 5;
            let g = Graph::from_fn(n, |i, j| (s >> ((i * 9 + j * 5) % 60)) & 1 == 1).unwrap();
            let p: Vec<f64> = (0..n).map(|i| ((s >> (i * 3)) & 7) as f64 / 10.0).collect();
            let all_pass = maximal_cliques(&g).iter().all(|c| {
                let ind: Vec<f64> = (0..n)
                    .map(|v| if c.contains(&v) { 1.0 } else { 0.0 })
                    .collect();
                eprinciple_pair_test(&g, &p, &ind, 1e-12).unwrap().passes
            });
            assert_eq!(
                all_pass,
                qstab_membership(&g, &p, 1e-12).unwrap().member,
                "trial {trial}"
            );
        }
    }
}
