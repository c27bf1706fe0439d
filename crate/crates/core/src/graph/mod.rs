//! Simple undirected graphs on at most 64 vertices.
//!
//! Adjacency is a row of bits per vertex. Everything downstream (exclusivity
//! graphs, orthogonality graphs, compatibility structures) is expressed with
//! this type.

mod family;
mod iso;
mod ops;

pub use family::GraphFamilySpec;
pub use iso::{find_isomorphism, is_isomorphic, is_vertex_transitive, ISO_MAX_VERTICES};

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

/// Iterate over the indices of the set bits of `mask`, lowest first.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Bit mask with the given vertices set.
pub fn mask_of(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0u64, |m, &v| m | (1u64 << v))
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    rows: Vec<u64>,
    labels: Option<Vec<String>>,
    // Set by constructors whose output is vertex-transitive by construction
    // (circulants, Johnson-type graphs). Not part of equality.
    transitive_hint: bool,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rows == other.rows && self.labels == other.labels
    }
}

impl Eq for Graph {}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return param("graph must have at least one vertex");
        }
        if n > MAX_VERTICES {
            return Err(Error::UnsupportedSize(format!(
                "{n} vertices (maximum {MAX_VERTICES})"
            )));
        }
        Ok(Graph {
            n,
            rows: vec![0; n],
            labels: None,
            transitive_hint: false,
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    /// Build from a symmetric predicate on vertex pairs.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for i in 0..n {
            for j in (i + 1)..n {
                if adjacent(i, j) {
                    g.rows[i] |= 1 << j;
                    g.rows[j] |= 1 << i;
                }
            }
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i >= self.n || j >= self.n {
            return param(format!(
                "edge ({i},{j}) out of range for {} vertices",
                self.n
            ));
        }
        if i == j {
            return param(format!("self-loop at vertex {i}"));
        }
        self.rows[i] |= 1 << j;
        self.rows[j] |= 1 << i;
        Ok(())
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        if i < self.n && j < self.n {
            self.rows[i] &= !(1 << j);
            self.rows[j] &= !(1 << i);
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return param(format!(
                "{} labels given for {} vertices",
                labels.len(),
                self.n
            ));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub(crate) fn mark_transitive(mut self) -> Self {
        self.transitive_hint = true;
        self
    }

    /// True when the constructor guarantees vertex-transitivity.
    pub fn is_transitive_by_construction(&self) -> bool {
        self.transitive_hint
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    /// Neighbourhood of `v` as a bit mask.
    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Edge list with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for j in bits(self.rows[i] & !full_mask(i + 1)) {
                out.push((i, j));
            }
        }
        out
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of `v`, falling back to its index.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn vertex_mask(&self) -> u64 {
        full_mask(self.n)
    }

    pub fn is_independent(&self, vertices: &[usize]) -> bool {
        let m = mask_of(vertices);
        vertices.iter().all(|&v| self.rows[v] & m == 0)
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        let m = mask_of(vertices);
        vertices.iter().all(|&v| (self.rows[v] | (1 << v)) & m == m)
    }

    pub fn is_regular(&self) -> bool {
        let d = self.degree(0);
        (1..self.n).all(|v| self.degree(v) == d)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            for v in bits(frontier) {
                next |= self.rows[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == self.vertex_mask()
    }

    /// Dense 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| if self.has_edge(i, j) { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect()
    }

    /// Subgraph induced by `vertices`, in the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        if let Some(&bad) = vertices.iter().find(|&&v| v >= self.n) {
            return param(format!("vertex {bad} out of range"));
        }
        let mut g = Graph::from_fn(vertices.len(), |a, b| {
            self.has_edge(vertices[a], vertices[b])
        })?;
        if let Some(l) = &self.labels {
            g.labels = Some(vertices.iter().map(|&v| l[v].clone()).collect());
        }
        Ok(g)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n,
            edges: self.edges().into_iter().map(|(i, j)| [i, j]).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(doc: &GraphJson) -> Result<Graph> {
        let mut g = Graph::empty(doc.n)?;
        for &[i, j] in &doc.edges {
            g.add_edge(i, j)?;
        }
        match &doc.labels {
            Some(l) => g.with_labels(l.clone()),
            None => Ok(g),
        }
    }
}

/// Serialized graph: `{"n": int, "edges": [[i,j],...], "labels": [...]?}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_empty() {
        assert!(Graph::empty(0).is_err());
        assert!(Graph::empty(65).is_err());
        let mut g = Graph::empty(3).unwrap();
        assert!(g.add_edge(1, 1).is_err());
        assert!(g.add_edge(0, 3).is_err());
    }

    #[test]
    fn edges_sorted_and_symmetric() {
        let g = Graph::from_edges(4, &[(3, 0), (2, 1), (0, 1)]).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (0, 3), (1, 2)]);
        assert!(g.has_edge(3, 0) && g.has_edge(0, 3));
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::from_edges(3, &[(0, 2)])
            .unwrap()
            .with_labels(vec!["a".into(), "b".into(), "c".into()])
            .unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(text, r#"{"n":3,"edges":[[0,2]],"labels":["a","b","c"]}"#);
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Graph::from_json(&back).unwrap(), g);
    }

    #[test]
    fn sixty_four_vertices_work() {
        let g = Graph::from_fn(64, |i, j| j == i + 1).unwrap();
        assert_eq!(g.edge_count(), 63);
        assert!(g.is_connected());
        assert!(g.has_edge(63, 62));
    }
}
