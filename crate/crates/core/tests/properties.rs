//! Randomized invariants across modules.

use ctxgraph::bounds::{
    clique_number, fractional_packing, independence_number, lovasz_theta, qstab_membership,
    stab_membership, th_membership,
};
use ctxgraph::boxes::{
    chsh_value, is_local, is_nosignaling, pr_box, BellScenario, BoxDistribution,
};
use ctxgraph::graph::is_isomorphic;
use ctxgraph::numkernel::round_significant;
use ctxgraph::{Graph, GraphJson};
use proptest::prelude::*;

/// Graph on `n` vertices from a bit string over the upper triangle.
fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut k = 0;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if bits[k] {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)
            .prop_map(move |bits| graph_from_bits(n, &bits))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sandwich_and_complement_duality(g in small_graph(9)) {
        let n = g.n() as f64;
        let (alpha, set) = independence_number(&g);
        prop_assert!(g.is_independent(&set));
        prop_assert_eq!(set.len(), alpha);
        let theta = lovasz_theta(&g, None).unwrap();
        let alpha_star = fractional_packing(&g, None).unwrap().value;
        prop_assert!(alpha as f64 <= theta + 1e-6, "alpha {} theta {}", alpha, theta);
        prop_assert!(theta <= alpha_star + 1e-6, "theta {} alpha* {}", theta, alpha_star);
        let gc = g.complement();
        prop_assert_eq!(clique_number(&gc), alpha);
        let theta_c = lovasz_theta(&gc, None).unwrap();
        prop_assert!(theta * theta_c >= n - 1e-6, "{} * {} < {}", theta, theta_c, n);
    }

    #[test]
    fn theta_is_additive_on_unions_and_maximal_on_cosums(g in small_graph(5), h in small_graph(5)) {
        let (tg, th) = (lovasz_theta(&g, None).unwrap(), lovasz_theta(&h, None).unwrap());
        let union = lovasz_theta(&g.disjoint_union(&h).unwrap(), None).unwrap();
        prop_assert!((union - (tg + th)).abs() < 1e-6, "{} vs {}", union, tg + th);
        let cosum = lovasz_theta(&g.direct_cosum(&h).unwrap(), None).unwrap();
        prop_assert!((cosum - tg.max(th)).abs() < 1e-6, "{} vs {}", cosum, tg.max(th));
    }

    #[test]
    fn relabeling_preserves_everything(g in small_graph(8), seed in any::<u64>()) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = Graph::from_fn(n, |i, j| g.has_edge(perm[i], perm[j])).unwrap();
        prop_assert!(is_isomorphic(&g, &h).unwrap());
        prop_assert_eq!(independence_number(&g).0, independence_number(&h).0);
        let (a, b) = (lovasz_theta(&g, None).unwrap(), lovasz_theta(&h, None).unwrap());
        prop_assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn graph_json_round_trip(g in small_graph(12)) {
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back = Graph::from_json(&serde_json::from_str::<GraphJson>(&text).unwrap()).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(g.complement().complement().edges(), g.edges());
    }

    #[test]
    fn membership_chain(g in small_graph(7), raw in proptest::collection::vec(0.0f64..1.0, 7), scale in 0.2f64..1.2) {
        let n = g.n();
        // scale to the clique load so that points land on both sides of the bodies
        let load = ctxgraph::bounds::maximal_cliques(&g)
            .iter()
            .map(|c| c.iter().map(|&i| raw[i]).sum::<f64>())
            .fold(0.0f64, f64::max)
            .max(1e-9);
        let p: Vec<f64> = raw[..n].iter().map(|x| x * scale / load).collect();
        let stab = stab_membership(&g, &p).unwrap().member;
        let th = th_membership(&g, &p, 1e-7).unwrap().member;
        let qstab = qstab_membership(&g, &p, 1e-7).unwrap().member;
        prop_assert!(!stab || th, "in STAB but not TH: {:?}", p);
        prop_assert!(!th || qstab, "in TH but not QSTAB: {:?}", p);
    }

    #[test]
    fn local_mixtures(weights in proptest::collection::vec(0.0f64..1.0, 1..6), picks in proptest::collection::vec(0u32..256, 6)) {
        // convex mixtures of deterministic (2,2,2) strategies
        let s = BellScenario::uniform(2, 2, 2).unwrap();
        let total: f64 = weights.iter().sum::<f64>().max(1e-12);
        let parts: Vec<BoxDistribution> = weights
            .iter()
            .zip(&picks)
            .map(|(_, &code)| BoxDistribution::deterministic(s.clone(), |party, x| (code >> (2 * party + x) & 1) as usize).unwrap())
            .collect();
        let table: Vec<f64> = (0..parts[0].table().len())
            .map(|i| parts.iter().zip(&weights).map(|(b, w)| w * b.table()[i]).sum::<f64>() / total)
            .collect();
        let b = BoxDistribution::new(s, table).unwrap();
        prop_assert!(is_nosignaling(&b, 1e-9).nosignaling);
        prop_assert!(is_local(&b, 1e-7).unwrap().local);
        prop_assert!(chsh_value(&b).unwrap().abs() <= 2.0 + 1e-9);
    }

    #[test]
    fn noisy_pr_boxes(e in 0.0f64..=1.0, d in 2usize..5) {
        let b = pr_box(d, e).unwrap();
        prop_assert!(is_nosignaling(&b, 1e-12).nosignaling);
        if d == 2 {
            let v = chsh_value(&b).unwrap();
            prop_assert!((v - 4.0 * e).abs() < 1e-12);
            // local exactly when the CHSH value is classical
            let local = is_local(&b, 1e-8).unwrap().local;
            if v > 2.0 + 1e-6 {
                prop_assert!(!local);
            } else if v < 2.0 - 1e-6 {
                prop_assert!(local);
            }
        }
    }

    #[test]
    fn rounding_is_idempotent(x in -1e12f64..1e12, digits in 1usize..16) {
        let r = round_significant(x, digits);
        prop_assert_eq!(round_significant(r, digits), r);
        prop_assert!((r - x).abs() <= x.abs() * 10f64.powi(1 - digits as i32));
    }
}
