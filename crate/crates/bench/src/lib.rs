//! Fixtures shared by the solver benchmarks.

use ctxgraph::numkernel::Mat;
use ctxgraph::{Graph, GraphFamilySpec};

/// Graphs used for the ϑ and α* timings, small to mid-sized.
pub fn theta_graphs() -> Vec<(String, Graph)> {
    [
        GraphFamilySpec::Cycle { n: 5 },
        GraphFamilySpec::Cycle { n: 7 },
        GraphFamilySpec::JohnsonGqs { q: 3, s: 1 },
        GraphFamilySpec::Moebius { n: 12 },
        GraphFamilySpec::Circulant {
            n: 13,
            offsets: vec![1, 5],
        },
    ]
    .into_iter()
    .map(|spec| (spec.name(), spec.build().expect("fixture family builds")))
    .collect()
}

/// Deterministic symmetric test matrix of order `n`.
pub fn symmetric_matrix(n: usize) -> Mat {
    Mat::from_fn(n, n, |i, j| {
        let (a, b) = (i.min(j) as f64, i.max(j) as f64);
        ((a + 1.0) * (b + 2.0)).sin() + if i == j { n as f64 } else { 0.0 }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_well_formed() {
        assert_eq!(theta_graphs().len(), 5);
        let m = symmetric_matrix(6);
        assert_eq!(m.to_rows()[1][4], m.to_rows()[4][1]);
    }
}
