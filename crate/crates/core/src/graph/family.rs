use serde::{Deserialize, Serialize};

use super::{Graph, MAX_VERTICES};
use crate::error::{param, Error, Result};

/// Named graph families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GraphFamilySpec {
    /// Cycle `C_n`, `n >= 3`.
    Cycle { n: usize },
    /// Path `P_n` on `n` vertices.
    Path { n: usize },
    /// Complete graph `K_n`.
    Complete { n: usize },
    /// Prism `Y_n`: two `n`-cycles joined by a perfect matching (2n vertices).
    Prism { n: usize },
    /// Moebius ladder `M_2n` on 2n vertices, i.e. `Ci_2n(1, n)`.
    Moebius { n: usize },
    /// Circulant `Ci_n(S)`: `i ~ j` iff `|i - j| mod n` lies in `S ∪ (n - S)`.
    Circulant { n: usize, offsets: Vec<usize> },
    /// `G(q, s)`: q-subsets of `{1..2q}`, adjacent iff they share exactly `s` elements.
    JohnsonGqs { q: usize, s: usize },
    /// Johnson graph `J(n, k)`: k-subsets of `{1..n}`, adjacent iff they share `k - 1` elements.
    Johnson { n: usize, k: usize },
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `0..n` as bit masks, in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u64, |m, &i| m | (1 << i)));
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in (i + 1)..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn subset_label(mask: u64) -> String {
    super::bits(mask)
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join("")
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        Err(Error::UnsupportedSize(format!(
            "family has {n} vertices (maximum {MAX_VERTICES})"
        )))
    } else {
        Ok(())
    }
}

fn circulant(n: usize, offsets: &[usize]) -> Result<Graph> {
    if n < 1 {
        return param("circulant requires n >= 1");
    }
    check_size(n)?;
    let mut seen = Vec::new();
    for &s in offsets {
        if s == 0 || s > n / 2 {
            return param(format!("circulant offset {s} outside 1..={}", n / 2));
        }
        if seen.contains(&s) {
            return param(format!("circulant offset {s} repeated"));
        }
        seen.push(s);
    }
    let g = Graph::from_fn(n, |i, j| {
        let d = (j + n - i) % n;
        offsets.iter().any(|&s| d == s || d == n - s)
    })?;
    Ok(g.mark_transitive())
}

fn subset_graph(ground: usize, size: usize, shared: usize) -> Result<Graph> {
    check_size(binomial(ground, size))?;
    let verts = subsets(ground, size);
    let g = Graph::from_fn(verts.len(), |a, b| {
        (verts[a] & verts[b]).count_ones() as usize == shared
    })?;
    let labels = verts.iter().map(|&m| subset_label(m)).collect();
    Ok(g.with_labels(labels)?.mark_transitive())
}

impl GraphFamilySpec {
    pub fn build(&self) -> Result<Graph> {
        use GraphFamilySpec::*;
        match self {
            Cycle { n } => {
                if *n < 3 {
                    return param("cycle requires n >= 3");
                }
                circulant(*n, &[1])
            }
            Path { n } => {
                if *n < 1 {
                    return param("path requires n >= 1");
                }
                Graph::from_fn(*n, |i, j| j == i + 1)
            }
            Complete { n } => {
                let g = Graph::from_fn(*n, |_, _| true)?;
                Ok(g.mark_transitive())
            }
            Prism { n } => {
                if *n < 3 {
                    return param("prism requires n >= 3");
                }
                check_size(2 * n)?;
                let n = *n;
                Graph::from_fn(2 * n, |i, j| {
                    let (ci, cj) = (i / n, j / n);
                    let (ui, uj) = (i % n, j % n);
                    if ci == cj {
                        (uj + n - ui) % n == 1 || (ui + n - uj) % n == 1
                    } else {
                        ui == uj
                    }
                })
            }
            Moebius { n } => {
                if *n < 2 {
                    return param("Moebius ladder requires n >= 2");
                }
                check_size(2 * n)?;
                if *n == 2 {
                    // Ci_4(1, 2) is K4.
                    return circulant(4, &[1, 2]);
                }
                circulant(2 * n, &[1, *n])
            }
            Circulant { n, offsets } => circulant(*n, offsets),
            JohnsonGqs { q, s } => {
                if !(0 < *s && s < q) {
                    return param(format!("G(q,s) requires 0 < s < q (got q={q}, s={s})"));
                }
                subset_graph(2 * q, *q, *s)
            }
            Johnson { n, k } => {
                if !(1 <= *k && k < n) {
                    return param(format!("J(n,k) requires 1 <= k < n (got n={n}, k={k})"));
                }
                subset_graph(*n, *k, k - 1)
            }
        }
    }

    /// Short display name, e.g. `Ci_10(1,4)`.
    pub fn name(&self) -> String {
        use GraphFamilySpec::*;
        match self {
            Cycle { n } => format!("C{n}"),
            Path { n } => format!("P{n}"),
            Complete { n } => format!("K{n}"),
            Prism { n } => format!("Y{n}"),
            Moebius { n } => format!("M{}", 2 * n),
            Circulant { n, offsets } => format!(
                "Ci_{n}({})",
                offsets
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            JohnsonGqs { q, s } => format!("G({q},{s})"),
            Johnson { n, k } => format!("J({n},{k})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use GraphFamilySpec::*;

    #[test]
    fn cycle_five() {
        let g = Cycle { n: 5 }.build().unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 5);
        assert!(g.degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn gqs_three_one_has_twenty_vertices() {
        let g = JohnsonGqs { q: 3, s: 1 }.build().unwrap();
        assert_eq!(g.n(), 20);
        // 3 choices kept inside, 3 choices of two from the complement
        assert!(g.degrees().iter().all(|&d| d == 9));
    }

    #[test]
    fn circulant_ten_one_four() {
        let g = Circulant {
            n: 10,
            offsets: vec![1, 4],
        }
        .build()
        .unwrap();
        assert!(g.is_regular());
        assert_eq!(g.degree(0), 4);
        assert_eq!(g.edge_count(), 20);
        let mut brute = 0;
        for i in 0..10usize {
            for j in (i + 1)..10 {
                let d = (j - i) % 10;
                if [1, 4, 6, 9].contains(&d) {
                    brute += 1;
                    assert!(g.has_edge(i, j));
                }
            }
        }
        assert_eq!(brute, 20);
    }

    #[test]
    fn circulant_with_half_offset() {
        let g = Circulant {
            n: 10,
            offsets: vec![5],
        }
        .build()
        .unwrap();
        assert_eq!(g.edge_count(), 5);
    }

    #[test]
    fn invalid_parameters() {
        assert!(Circulant {
            n: 10,
            offsets: vec![6]
        }
        .build()
        .is_err());
        assert!(Circulant {
            n: 10,
            offsets: vec![2, 2]
        }
        .build()
        .is_err());
        assert!(Circulant {
            n: 10,
            offsets: vec![0]
        }
        .build()
        .is_err());
        assert!(JohnsonGqs { q: 3, s: 3 }.build().is_err());
        assert!(Cycle { n: 2 }.build().is_err());
        assert!(matches!(
            JohnsonGqs { q: 4, s: 1 }.build(),
            Err(Error::UnsupportedSize(_))
        ));
    }

    #[test]
    fn prism_and_moebius() {
        let y = Prism { n: 5 }.build().unwrap();
        assert_eq!((y.n(), y.edge_count()), (10, 15));
        assert!(y.degrees().iter().all(|&d| d == 3));
        let m = Moebius { n: 4 }.build().unwrap();
        assert_eq!((m.n(), m.edge_count()), (8, 12));
    }

    #[test]
    fn johnson_five_two() {
        let g = Johnson { n: 5, k: 2 }.build().unwrap();
        assert_eq!((g.n(), g.edge_count()), (10, 30));
        assert_eq!(g.label(0), "12");
    }

    #[test]
    fn handshake_for_all_families() {
        let specs = vec![
            Cycle { n: 7 },
            Path { n: 4 },
            Complete { n: 6 },
            Prism { n: 7 },
            Moebius { n: 6 },
            Circulant {
                n: 12,
                offsets: vec![1, 3, 6],
            },
            JohnsonGqs { q: 3, s: 2 },
            Johnson { n: 6, k: 3 },
        ];
        for s in specs {
            let g = s.build().unwrap();
            assert_eq!(
                g.degrees().iter().sum::<usize>(),
                2 * g.edge_count(),
                "{}",
                s.name()
            );
        }
    }
}
