//! Maximal clique enumeration: Bron–Kerbosch with Tomita pivoting.

use crate::graph::{bits, Graph};

fn expand(g: &Graph, r: u64, mut p: u64, mut x: u64, out: &mut Vec<Vec<usize>>) {
    if p == 0 && x == 0 {
        out.push(bits(r).collect());
        return;
    }
    // pivot maximizing |P ∩ N(u)|
    let u = bits(p | x)
        .max_by_key(|&u| (g.neighbors(u) & p).count_ones())
        .unwrap();
    for v in bits(p & !g.neighbors(u)) {
        let nv = g.neighbors(v);
        expand(g, r | (1 << v), p & nv, x & nv, out);
        p &= !(1u64 << v);
        x |= 1 << v;
    }
}

/// All maximal cliques, each sorted, listed in lexicographic order.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    expand(g, 0, g.vertex_mask(), 0, &mut out);
    out.sort();
    out
}

/// Size of a largest clique.
pub fn clique_number(g: &Graph) -> usize {
    maximal_cliques(g).iter().map(Vec::len).max().unwrap_or(0)
}
