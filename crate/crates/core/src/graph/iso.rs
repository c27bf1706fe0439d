//! Isomorphism and vertex-transitivity for small graphs.
//!
//! Joint colour refinement on both graphs, then backtracking over colour
//! classes with adjacency checks against the partial map.

use std::collections::BTreeMap;

use super::Graph;
use crate::error::{Error, Result};

/// Largest vertex count accepted by the exhaustive searches.
pub const ISO_MAX_VERTICES: usize = 16;

fn too_big(n: usize) -> Error {
    Error::UnsupportedSize(format!(
        "exhaustive isomorphism search is limited to {ISO_MAX_VERTICES} vertices (got {n})"
    ))
}

/// Refine the initial colouring of both graphs jointly until stable.
/// Colours are comparable across the two graphs.
fn refine(
    g1: &Graph,
    g2: &Graph,
    mut c1: Vec<usize>,
    mut c2: Vec<usize>,
) -> (Vec<usize>, Vec<usize>) {
    let mut classes = 0;
    loop {
        let sig = |g: &Graph, c: &[usize], v: usize| {
            let mut nb: Vec<usize> = super::bits(g.neighbors(v)).map(|u| c[u]).collect();
            nb.sort_unstable();
            (c[v], nb)
        };
        let s1: Vec<_> = (0..g1.n()).map(|v| sig(g1, &c1, v)).collect();
        let s2: Vec<_> = (0..g2.n()).map(|v| sig(g2, &c2, v)).collect();
        let mut index = BTreeMap::new();
        for s in s1.iter().chain(s2.iter()) {
            let k = index.len();
            index.entry(s.clone()).or_insert(k);
        }
        // re-number in sorted signature order so colours are canonical
        for (i, v) in index.values_mut().enumerate() {
            *v = i;
        }
        c1 = s1.iter().map(|s| index[s]).collect();
        c2 = s2.iter().map(|s| index[s]).collect();
        if index.len() == classes {
            return (c1, c2);
        }
        classes = index.len();
    }
}

fn histogram(c: &[usize]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &x in c {
        *h.entry(x).or_insert(0) += 1;
    }
    h
}

struct Search<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
    c1: Vec<usize>,
    c2: Vec<usize>,
    order: Vec<usize>,
    map: Vec<usize>,
    used: u64,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let u = self.order[depth];
        for w in 0..self.g2.n() {
            if self.used >> w & 1 == 1 || self.c2[w] != self.c1[u] {
                continue;
            }
            let ok = self.order[..depth]
                .iter()
                .all(|&x| self.g1.has_edge(u, x) == self.g2.has_edge(w, self.map[x]));
            if !ok {
                continue;
            }
            self.map[u] = w;
            self.used |= 1 << w;
            if self.run(depth + 1) {
                return true;
            }
            self.used &= !(1 << w);
        }
        false
    }
}

fn search(g1: &Graph, g2: &Graph, pin: Option<(usize, usize)>) -> Option<Vec<usize>> {
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let n = g1.n();
    let mut c1 = vec![0; n];
    let mut c2 = vec![0; n];
    if let Some((a, b)) = pin {
        c1[a] = 1;
        c2[b] = 1;
    }
    let (c1, c2) = refine(g1, g2, c1, c2);
    if histogram(&c1) != histogram(&c2) {
        return None;
    }
    // Visit small colour classes first, then prefer vertices adjacent to
    // already ordered ones so adjacency checks prune early.
    let sizes = histogram(&c1);
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| placed >> v & 1 == 0)
            .min_by_key(|&v| {
                let links = (g1.neighbors(v) & placed).count_ones() as usize;
                (sizes[&c1[v]], std::cmp::Reverse(links), v)
            })
            .unwrap();
        order.push(next);
        placed |= 1 << next;
    }
    let mut s = Search {
        g1,
        g2,
        c1,
        c2,
        order,
        map: vec![usize::MAX; n],
        used: 0,
    };
    if s.run(0) {
        Some(s.map)
    } else {
        None
    }
}

/// An isomorphism `g1 -> g2` as a vertex map, if one exists.
/// Graphs of different orders are simply non-isomorphic.
pub fn find_isomorphism(g1: &Graph, g2: &Graph) -> Result<Option<Vec<usize>>> {
    if g1.n() != g2.n() {
        return Ok(None);
    }
    if g1.n() > ISO_MAX_VERTICES {
        return Err(too_big(g1.n()));
    }
    Ok(search(g1, g2, None))
}

pub fn is_isomorphic(g1: &Graph, g2: &Graph) -> Result<bool> {
    Ok(find_isomorphism(g1, g2)?.is_some())
}

/// True iff the automorphism group acts transitively on the vertices.
///
/// Graphs built as circulants or Johnson-type graphs answer immediately;
/// anything else must have at most [`ISO_MAX_VERTICES`] vertices.
pub fn is_vertex_transitive(g: &Graph) -> Result<bool> {
    if g.is_transitive_by_construction() {
        return Ok(true);
    }
    let n = g.n();
    if n > ISO_MAX_VERTICES {
        return Err(too_big(n));
    }
    if !g.is_regular() {
        return Ok(false);
    }
    // Orbit of vertex 0, grown by every automorphism found.
    let mut orbit = 1u64;
    for v in 1..n {
        if orbit >> v & 1 == 1 {
            continue;
        }
        match search(g, g, Some((0, v))) {
            Some(map) => {
                // the map sends 0 to v; close the orbit under it
                let mut changed = true;
                orbit |= 1 << v;
                while changed {
                    changed = false;
                    for u in super::bits(orbit) {
                        if orbit >> map[u] & 1 == 0 {
                            orbit |= 1 << map[u];
                            changed = true;
                        }
                    }
                }
            }
            None => return Ok(false),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::super::GraphFamilySpec;
    use super::*;

    fn build(s: GraphFamilySpec) -> Graph {
        s.build().unwrap()
    }

    fn check_map(g1: &Graph, g2: &Graph, m: &[usize]) {
        for i in 0..g1.n() {
            for j in 0..g1.n() {
                assert_eq!(g1.has_edge(i, j), g2.has_edge(m[i], m[j]));
            }
        }
    }

    #[test]
    fn c5_self_complementary() {
        let c = build(GraphFamilySpec::Cycle { n: 5 });
        let m = find_isomorphism(&c, &c.complement()).unwrap().unwrap();
        check_map(&c, &c.complement(), &m);
    }

    #[test]
    fn c4_not_k4_and_size_mismatch() {
        let c4 = build(GraphFamilySpec::Cycle { n: 4 });
        let k4 = build(GraphFamilySpec::Complete { n: 4 });
        assert!(!is_isomorphic(&c4, &k4).unwrap());
        let k5 = build(GraphFamilySpec::Complete { n: 5 });
        assert!(!is_isomorphic(&c4, &k5).unwrap());
    }

    #[test]
    fn regular_non_isomorphic_pair() {
        // C6 against two disjoint triangles: same degree sequence.
        let c6 = build(GraphFamilySpec::Cycle { n: 6 });
        let tt = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!is_isomorphic(&c6, &tt).unwrap());
        // Prism Y3 against K_{3,3}: both 3-regular on 6 vertices.
        let y3 = build(GraphFamilySpec::Prism { n: 3 });
        let k33 = Graph::from_fn(6, |i, j| (i < 3) != (j < 3)).unwrap();
        assert!(!is_isomorphic(&y3, &k33).unwrap());
    }

    #[test]
    fn oversize_is_error() {
        let a = Graph::from_fn(17, |i, j| j == i + 1).unwrap();
        assert!(matches!(
            is_isomorphic(&a, &a),
            Err(Error::UnsupportedSize(_))
        ));
        assert!(is_vertex_transitive(&a).is_err());
        let gqs = build(GraphFamilySpec::JohnsonGqs { q: 3, s: 1 });
        assert!(is_vertex_transitive(&gqs).unwrap());
    }

    #[test]
    fn transitivity() {
        let p3 = build(GraphFamilySpec::Path { n: 3 });
        assert!(!is_vertex_transitive(&p3).unwrap());
        // Circulant rebuilt from its edge list loses the hint and is searched.
        let ci = build(GraphFamilySpec::Circulant {
            n: 10,
            offsets: vec![1, 4],
        });
        let plain = Graph::from_edges(10, &ci.edges()).unwrap();
        assert!(!plain.is_transitive_by_construction());
        assert!(is_vertex_transitive(&plain).unwrap());
        let y5 = build(GraphFamilySpec::Prism { n: 5 });
        assert!(is_vertex_transitive(&y5).unwrap());
        let petersen = build(GraphFamilySpec::Johnson { n: 5, k: 2 }).complement();
        let plain = Graph::from_edges(10, &petersen.edges()).unwrap();
        assert!(is_vertex_transitive(&plain).unwrap());
    }

    #[test]
    fn regular_but_not_transitive() {
        // Disjoint union of C3 and C4 is 2-regular but not transitive.
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 3)])
            .unwrap();
        assert!(g.is_regular());
        assert!(!is_vertex_transitive(&g).unwrap());
    }
}
