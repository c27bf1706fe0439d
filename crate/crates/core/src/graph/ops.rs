//! Graph operations that preserve or combine exclusivity structure.

use super::Graph;
use crate::error::{param, Result};

fn suffixed(g: &Graph, suffix: &str) -> Vec<String> {
    (0..g.n())
        .map(|v| format!("{}{suffix}", g.label(v)))
        .collect()
}

fn prefixed(g: &Graph, prefix: &str) -> Vec<String> {
    (0..g.n())
        .map(|v| format!("{prefix}{}", g.label(v)))
        .collect()
}

impl Graph {
    /// Complement on the same vertex set. Labels are kept.
    pub fn complement(&self) -> Graph {
        let full = self.vertex_mask();
        let mut g = self.clone();
        for v in 0..self.n {
            g.rows[v] = !self.rows[v] & full & !(1u64 << v);
        }
        g
    }

    /// Direct cosum: disjoint union plus every edge between the two parts.
    /// Vertices of `self` come first, labelled `L.*`; those of `other` are `R.*`.
    pub fn direct_cosum(&self, other: &Graph) -> Result<Graph> {
        let n1 = self.n;
        let mut g = Graph::from_fn(n1 + other.n, |i, j| {
            if i < n1 && j < n1 {
                self.has_edge(i, j)
            } else if i >= n1 && j >= n1 {
                other.has_edge(i - n1, j - n1)
            } else {
                true
            }
        })?;
        let mut labels = prefixed(self, "L.");
        labels.extend(prefixed(other, "R."));
        g.labels = Some(labels);
        Ok(g)
    }

    /// Disjoint union with no edges across.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let n1 = self.n;
        let mut g = Graph::from_fn(n1 + other.n, |i, j| {
            if i < n1 && j < n1 {
                self.has_edge(i, j)
            } else if i >= n1 && j >= n1 {
                other.has_edge(i - n1, j - n1)
            } else {
                false
            }
        })?;
        let mut labels = prefixed(self, "L.");
        labels.extend(prefixed(other, "R."));
        g.labels = Some(labels);
        Ok(g)
    }

    /// Two copies of the graph; copy `c` of vertex `u` is vertex `c*n + u`.
    fn two_copies(&self, cross: impl Fn(usize, usize) -> bool) -> Result<Graph> {
        let n = self.n;
        let mut g = Graph::from_fn(2 * n, |i, j| {
            let (u, v) = (i % n, j % n);
            if i / n == j / n {
                self.has_edge(u, v)
            } else {
                cross(u, v)
            }
        })?;
        let mut labels = suffixed(self, ".0");
        labels.extend(suffixed(self, ".1"));
        g.labels = Some(labels);
        Ok(g)
    }

    /// Twinning: copy `u.0` is adjacent to `v.1` iff `u ~ v`.
    pub fn twinning(&self) -> Result<Graph> {
        self.two_copies(|u, v| self.has_edge(u, v))
    }

    /// Duplication: two copies with no edges between them.
    pub fn duplication(&self) -> Result<Graph> {
        self.two_copies(|_, _| false)
    }

    /// Twinning keeping only the listed cross edges.
    ///
    /// Each kept edge is a pair of vertex indices of the twinned graph, one in
    /// each copy, whose base vertices are adjacent.
    pub fn partial_twinning(&self, kept_cross_edges: &[(usize, usize)]) -> Result<Graph> {
        let n = self.n;
        let mut cross = vec![0u64; n];
        for &(a, b) in kept_cross_edges {
            if a >= 2 * n || b >= 2 * n {
                return param(format!(
                    "cross edge ({a},{b}) out of range for {} vertices",
                    2 * n
                ));
            }
            if a / n == b / n {
                return param(format!("edge ({a},{b}) lies within one copy"));
            }
            let (u, v) = if a < n { (a, b - n) } else { (b, a - n) };
            if !self.has_edge(u, v) {
                return param(format!(
                    "edge ({a},{b}) is not a twinning cross edge: base vertices {u} and {v} are not adjacent"
                ));
            }
            cross[u] |= 1 << v;
        }
        self.two_copies(|u, v| {
            // (u, v) with u in copy 0 when i < j; the predicate is called with i < j
            cross[u] >> v & 1 == 1
        })
    }

    /// OR (co-normal) product: `(a,b) ~ (c,d)` iff `a ~ c` or `b ~ d`.
    /// Vertex `(a, b)` has index `a * other.n + b`.
    pub fn or_product(&self, other: &Graph) -> Result<Graph> {
        let m = other.n;
        let mut g = Graph::from_fn(self.n * m, |i, j| {
            self.has_edge(i / m, j / m) || other.has_edge(i % m, j % m)
        })?;
        let labels = (0..self.n * m)
            .map(|i| format!("({},{})", self.label(i / m), other.label(i % m)))
            .collect();
        g.labels = Some(labels);
        Ok(g)
    }

    /// Graph with the same edges and labels removed.
    pub fn unlabeled(&self) -> Graph {
        let mut g = self.clone();
        g.labels = None;
        g
    }
}

#[cfg(test)]
mod tests {
    use super::super::{is_isomorphic, GraphFamilySpec};
    use super::*;

    fn ci(n: usize, s: &[usize]) -> Graph {
        GraphFamilySpec::Circulant {
            n,
            offsets: s.to_vec(),
        }
        .build()
        .unwrap()
    }

    fn c5() -> Graph {
        GraphFamilySpec::Cycle { n: 5 }.build().unwrap()
    }

    #[test]
    fn complement_basics() {
        let k = GraphFamilySpec::Complete { n: 6 }.build().unwrap();
        assert_eq!(k.complement().edge_count(), 0);
        let g = ci(10, &[1, 4]);
        assert_eq!(g.complement().complement(), g);
        assert!(is_isomorphic(&g.complement(), &ci(10, &[2, 3, 5])).unwrap());
        assert!(is_isomorphic(&c5(), &c5().complement()).unwrap());
    }

    #[test]
    fn cosum_counts_and_identity() {
        let a = c5();
        let b = GraphFamilySpec::Path { n: 3 }.build().unwrap();
        let s = a.direct_cosum(&b).unwrap();
        assert_eq!(s.edge_count(), 5 + 2 + 15);
        assert_eq!(s.label(0), "L.0");
        assert_eq!(s.label(5), "R.0");
        assert_eq!(s.induced_subgraph(&[5, 6, 7]).unwrap().unlabeled(), b);
        assert!(is_isomorphic(&a.direct_cosum(&a).unwrap(), &ci(10, &[1, 2, 3, 5])).unwrap());
        let k1 = Graph::empty(1).unwrap();
        let k2 = k1.direct_cosum(&k1).unwrap();
        assert_eq!(k2.edges(), vec![(0, 1)]);
        assert!(is_isomorphic(&s, &b.direct_cosum(&a).unwrap()).unwrap());
    }

    #[test]
    fn twinning_family() {
        let c = c5();
        let t = c.twinning().unwrap();
        assert_eq!(t.n(), 10);
        assert_eq!(t.label(7), "2.1");
        assert!(is_isomorphic(&t, &ci(10, &[2, 3])).unwrap());
        assert!(is_isomorphic(&t, &ci(10, &[1, 4])).unwrap());
        assert!(is_isomorphic(&c.duplication().unwrap(), &ci(10, &[2])).unwrap());
        for copy in [0usize, 5] {
            let idx: Vec<usize> = (copy..copy + 5).collect();
            assert_eq!(t.induced_subgraph(&idx).unwrap().unlabeled(), c);
        }
    }

    #[test]
    fn partial_twinning_interpolates() {
        let c = c5();
        let all: Vec<(usize, usize)> = c
            .edges()
            .into_iter()
            .flat_map(|(u, v)| [(u, v + 5), (v, u + 5)])
            .collect();
        assert_eq!(c.partial_twinning(&all).unwrap(), c.twinning().unwrap());
        assert_eq!(c.partial_twinning(&[]).unwrap(), c.duplication().unwrap());
        let one = c.partial_twinning(&[(6, 0)]).unwrap();
        assert!(one.has_edge(0, 6) && !one.has_edge(1, 5));
        assert!(c.partial_twinning(&[(0, 7)]).is_err());
        assert!(c.partial_twinning(&[(0, 1)]).is_err());
    }

    #[test]
    fn or_product_size() {
        let c = c5();
        let p = c.or_product(&c.complement()).unwrap();
        assert_eq!(p.n(), 25);
        // (a,b) ~ (c,d) iff a~c or b~d
        assert!(p.has_edge(0, 5));
        assert!(!p.has_edge(0, 10));
    }
}
