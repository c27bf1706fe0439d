//! Maximum (weight) independent set by branch and bound on bit masks.

use crate::graph::{bits, Graph};

/// Greedy clique cover of `cand`; returns the sum over cliques of the
/// largest weight in each, an upper bound on any independent set in `cand`.
fn clique_cover_bound(g: &Graph, cand: u64, w: &[f64]) -> f64 {
    let mut rest = cand;
    let mut bound = 0.0;
    while rest != 0 {
        // start from the heaviest remaining vertex
        let v = bits(rest).max_by(|&a, &b| w[a].total_cmp(&w[b])).unwrap();
        let mut clique_cand = g.neighbors(v) & rest;
        rest &= !(1u64 << v);
        let mut top = w[v];
        while clique_cand != 0 {
            let u = clique_cand.trailing_zeros() as usize;
            clique_cand &= g.neighbors(u);
            rest &= !(1u64 << u);
            top = top.max(w[u]);
        }
        bound += top;
    }
    bound
}

struct Bnb<'a> {
    g: &'a Graph,
    w: &'a [f64],
    best: f64,
    best_set: u64,
}

impl Bnb<'_> {
    fn go(&mut self, cand: u64, chosen: u64, value: f64) {
        if cand == 0 {
            if value > self.best {
                self.best = value;
                self.best_set = chosen;
            }
            return;
        }
        if value + clique_cover_bound(self.g, cand, self.w) <= self.best + 1e-12 {
            return;
        }
        // isolated candidates are always taken
        let mut cand = cand;
        let mut chosen = chosen;
        let mut value = value;
        loop {
            let free = bits(cand).find(|&v| self.g.neighbors(v) & cand == 0);
            match free {
                Some(v) => {
                    cand &= !(1u64 << v);
                    chosen |= 1 << v;
                    value += self.w[v];
                }
                None => break,
            }
        }
        if cand == 0 {
            self.go(0, chosen, value);
            return;
        }
        let v = bits(cand)
            .max_by_key(|&v| {
                (
                    (self.g.neighbors(v) & cand).count_ones(),
                    std::cmp::Reverse(v),
                )
            })
            .unwrap();
        let with = cand & !(1u64 << v) & !self.g.neighbors(v);
        self.go(with, chosen | (1 << v), value + self.w[v]);
        self.go(cand & !(1u64 << v), chosen, value);
    }
}

/// Maximum-weight independent set. Vertices of non-positive weight are ignored.
/// Returns the weight and the set (sorted).
pub fn max_weight_independent_set(g: &Graph, w: &[f64]) -> (f64, Vec<usize>) {
    assert_eq!(w.len(), g.n(), "one weight per vertex");
    let cand = bits(g.vertex_mask())
        .filter(|&v| w[v] > 0.0)
        .fold(0u64, |m, v| m | (1 << v));
    let mut b = Bnb {
        g,
        w,
        best: 0.0,
        best_set: 0,
    };
    b.go(cand, 0, 0.0);
    (b.best, bits(b.best_set).collect())
}

/// Independence number `α(G)` with a maximum independent set.
pub fn independence_number(g: &Graph) -> (usize, Vec<usize>) {
    let w = vec![1.0; g.n()];
    let (_, set) = max_weight_independent_set(g, &w);
    (set.len(), set)
}
