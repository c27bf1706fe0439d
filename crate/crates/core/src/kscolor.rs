//! Kochen–Specker sets: vector systems, orthogonality graphs, {0,1}-colorability
//! and multiplicative (operator-product) proofs.

use serde::{Deserialize, Serialize};

use crate::bounds::maximal_cliques;
use crate::error::{param, Error, Result};
use crate::graph::{bits, Graph};
use crate::numkernel::{c, CMat, C64};
use crate::quantum::Entry;

/// Default orthogonality tolerance.
pub const ORTHO_TOL: f64 = 1e-9;

/// Distinct rays in real `d`-space, normalized on ingest.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorSystem {
    d: usize,
    vectors: Vec<Vec<f64>>,
    labels: Vec<String>,
    tol: f64,
}

/// Scale to unit length with the first nonzero coordinate positive.
fn canonical_ray(v: &[f64]) -> Option<Vec<f64>> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(n > 1e-12) || !n.is_finite() {
        return None;
    }
    let lead = v.iter().find(|x| x.abs() > 1e-12 * n).copied()?;
    let s = lead.signum() / n;
    Some(v.iter().map(|x| x * s).collect())
}

impl VectorSystem {
    pub fn new(d: usize, vectors: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        let labels = (0..vectors.len()).map(|i| i.to_string()).collect();
        VectorSystem::with_labels(d, vectors, labels, tol)
    }

    pub fn with_labels(
        d: usize,
        vectors: Vec<Vec<f64>>,
        labels: Vec<String>,
        tol: f64,
    ) -> Result<Self> {
        if d == 0 {
            return param("dimension must be positive");
        }
        if labels.len() != vectors.len() {
            return param("one label per vector required");
        }
        if vectors.len() > 64 {
            return Err(Error::UnsupportedSize(format!(
                "{} vectors exceed 64",
                vectors.len()
            )));
        }
        if !(tol >= 0.0) {
            return param("tolerance must be nonnegative");
        }
        let mut rays: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != d {
                return param(format!(
                    "vector {i} has dimension {}, expected {d}",
                    v.len()
                ));
            }
            let r =
                canonical_ray(v).ok_or_else(|| Error::Parameter(format!("vector {i} is zero")))?;
            if let Some(j) = rays
                .iter()
                .position(|u| u.iter().zip(&r).all(|(a, b)| (a - b).abs() < 1e-9))
            {
                return Err(Error::DuplicateRay(j, i));
            }
            rays.push(r);
        }
        Ok(VectorSystem {
            d,
            vectors: rays,
            labels,
            tol,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Index of the ray through `v`, if present.
    pub fn find_ray(&self, v: &[f64]) -> Option<usize> {
        let r = canonical_ray(v)?;
        self.vectors
            .iter()
            .position(|u| u.len() == r.len() && u.iter().zip(&r).all(|(a, b)| (a - b).abs() < 1e-9))
    }

    /// Subsystem keeping the listed vectors, in that order.
    pub fn subset(&self, idx: &[usize]) -> Result<Self> {
        if let Some(&i) = idx.iter().find(|&&i| i >= self.len()) {
            return param(format!("vector index {i} out of range"));
        }
        VectorSystem::with_labels(
            self.d,
            idx.iter().map(|&i| self.vectors[i].clone()).collect(),
            idx.iter().map(|&i| self.labels[i].clone()).collect(),
            self.tol,
        )
    }

    pub fn to_json(&self) -> VectorSystemJson {
        VectorSystemJson {
            d: self.d,
            vectors: self.vectors.clone(),
            tol: Some(self.tol),
            labels: Some(self.labels.clone()),
        }
    }

    pub fn from_json(doc: &VectorSystemJson) -> Result<Self> {
        let tol = doc.tol.unwrap_or(ORTHO_TOL);
        match &doc.labels {
            Some(l) => VectorSystem::with_labels(doc.d, doc.vectors.clone(), l.clone(), tol),
            None => VectorSystem::new(doc.d, doc.vectors.clone(), tol),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorSystemJson {
    pub d: usize,
    pub vectors: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// Edge iff the rays are orthogonal within the system's tolerance.
pub fn orthogonality_graph(vs: &VectorSystem) -> Graph {
    let v = &vs.vectors;
    let g = Graph::from_fn(v.len(), |i, j| {
        let dot: f64 = v[i].iter().zip(&v[j]).map(|(a, b)| a * b).sum();
        dot.abs() <= vs.tol
    })
    .expect("at most 64 vectors");
    g.with_labels(vs.labels.clone())
        .expect("one label per vector")
}

/// Orthogonality graph, full bases (cliques of size d) and pinned values.
#[derive(Clone, Debug)]
pub struct ColoringProblem {
    graph: Graph,
    d: usize,
    bases: Vec<Vec<usize>>,
    pins: Vec<(usize, bool)>,
}

impl ColoringProblem {
    pub fn new(graph: Graph, d: usize) -> Result<Self> {
        if d == 0 {
            return param("dimension must be positive");
        }
        let bases = maximal_cliques(&graph)
            .into_iter()
            .filter(|k| k.len() == d)
            .collect();
        Ok(ColoringProblem {
            graph,
            d,
            bases,
            pins: vec![],
        })
    }

    pub fn from_vectors(vs: &VectorSystem) -> Self {
        ColoringProblem::new(orthogonality_graph(vs), vs.d).expect("positive dimension")
    }

    pub fn pin(mut self, vertex: usize, value: bool) -> Result<Self> {
        if vertex >= self.graph.n() {
            return param(format!("pinned vertex {vertex} out of range"));
        }
        self.pins.push((vertex, value));
        Ok(self)
    }

    /// Pin by vertex label.
    pub fn pin_label(self, label: &str, value: bool) -> Result<Self> {
        let v = (0..self.graph.n())
            .find(|&i| self.graph.label(i) == label)
            .ok_or_else(|| Error::Parameter(format!("no vertex labelled {label:?}")))?;
        self.pin(v, value)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn bases(&self) -> &[Vec<usize>] {
        &self.bases
    }

    pub fn pins(&self) -> &[(usize, bool)] {
        &self.pins
    }

    /// At most one 1 per edge, exactly one per basis, pins respected.
    pub fn is_valid_coloring(&self, colors: &[bool]) -> bool {
        colors.len() == self.graph.n()
            && self
                .graph
                .edges()
                .iter()
                .all(|&(i, j)| !(colors[i] && colors[j]))
            && self
                .bases
                .iter()
                .all(|b| b.iter().filter(|&&v| colors[v]).count() == 1)
            && self.pins.iter().all(|&(v, x)| colors[v] == x)
    }
}

/// Largest number of trace events kept for a refutation.
pub const TRACE_LIMIT: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    Pin {
        vertex: usize,
        value: u8,
    },
    Decide {
        vertex: usize,
        value: u8,
        depth: usize,
    },
    Propagate {
        vertex: usize,
        value: u8,
        reason: String,
    },
    Conflict {
        reason: String,
    },
    Backtrack {
        vertex: usize,
        depth: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Colorability {
    Colorable {
        witness: Vec<u8>,
    },
    Uncolorable {
        trace: Vec<TraceEvent>,
        trace_truncated: bool,
    },
}

impl Colorability {
    pub fn is_colorable(&self) -> bool {
        matches!(self, Colorability::Colorable { .. })
    }
}

struct Search<'a> {
    cp: &'a ColoringProblem,
    basis_masks: Vec<u64>,
    trace: Vec<TraceEvent>,
    truncated: bool,
}

impl Search<'_> {
    fn log(&mut self, e: TraceEvent) {
        if self.trace.len() < TRACE_LIMIT {
            self.trace.push(e);
        } else {
            self.truncated = true;
        }
    }

    fn name(&self, v: usize) -> String {
        self.cp.graph.label(v).to_string()
    }

    /// Unit propagation to a fixpoint; `None` on conflict.
    fn propagate(&mut self, mut ones: u64, mut zeros: u64) -> Option<(u64, u64)> {
        let g = &self.cp.graph;
        loop {
            let mut changed = false;
            if ones & zeros != 0 {
                let v = (ones & zeros).trailing_zeros() as usize;
                self.log(TraceEvent::Conflict {
                    reason: format!("{} forced to both 0 and 1", self.name(v)),
                });
                return None;
            }
            for v in bits(ones) {
                let clash = g.neighbors(v) & ones;
                if clash != 0 {
                    let u = clash.trailing_zeros() as usize;
                    self.log(TraceEvent::Conflict {
                        reason: format!("orthogonal {} and {} both 1", self.name(v), self.name(u)),
                    });
                    return None;
                }
                let fresh = g.neighbors(v) & !zeros;
                for u in bits(fresh) {
                    self.log(TraceEvent::Propagate {
                        vertex: u,
                        value: 0,
                        reason: format!("orthogonal to {}", self.name(v)),
                    });
                    changed = true;
                }
                zeros |= fresh;
            }
            for k in 0..self.basis_masks.len() {
                let b = self.basis_masks[k];
                if b & ones != 0 {
                    continue;
                }
                let open = b & !zeros;
                if open == 0 {
                    let names: Vec<String> = bits(b).map(|v| self.name(v)).collect();
                    self.log(TraceEvent::Conflict {
                        reason: format!("basis {{{}}} all 0", names.join(", ")),
                    });
                    return None;
                }
                if open.count_ones() == 1 {
                    let u = open.trailing_zeros() as usize;
                    let names: Vec<String> = bits(b).map(|v| self.name(v)).collect();
                    self.log(TraceEvent::Propagate {
                        vertex: u,
                        value: 1,
                        reason: format!("last open vector of basis {{{}}}", names.join(", ")),
                    });
                    ones |= open;
                    changed = true;
                }
            }
            if !changed {
                return Some((ones, zeros));
            }
        }
    }

    fn pick(&self, free: u64) -> usize {
        let g = &self.cp.graph;
        bits(free)
            .max_by_key(|&v| {
                let nb = self
                    .basis_masks
                    .iter()
                    .filter(|&&b| b >> v & 1 == 1)
                    .count();
                (nb, (g.neighbors(v) & free).count_ones())
            })
            .expect("nonempty")
    }

    fn solve(&mut self, ones: u64, zeros: u64, depth: usize) -> Option<u64> {
        let (ones, zeros) = self.propagate(ones, zeros)?;
        let free = self.cp.graph.vertex_mask() & !(ones | zeros);
        if free == 0 {
            return Some(ones);
        }
        let v = self.pick(free);
        for value in [1u8, 0] {
            self.log(TraceEvent::Decide {
                vertex: v,
                value,
                depth,
            });
            let (o, z) = if value == 1 {
                (ones | 1 << v, zeros)
            } else {
                (ones, zeros | 1 << v)
            };
            if let Some(w) = self.solve(o, z, depth + 1) {
                return Some(w);
            }
            self.log(TraceEvent::Backtrack { vertex: v, depth });
        }
        None
    }
}

/// Backtracking with unit propagation over the orthogonality and basis rules.
pub fn classify_colorability(cp: &ColoringProblem) -> Colorability {
    let mut s = Search {
        cp,
        basis_masks: cp.bases.iter().map(|b| crate::graph::mask_of(b)).collect(),
        trace: vec![],
        truncated: false,
    };
    let (mut ones, mut zeros) = (0u64, 0u64);
    for &(v, x) in &cp.pins {
        s.log(TraceEvent::Pin {
            vertex: v,
            value: x as u8,
        });
        if x {
            ones |= 1 << v;
        } else {
            zeros |= 1 << v;
        }
    }
    match s.solve(ones, zeros, 0) {
        Some(w) => Colorability::Colorable {
            witness: (0..cp.graph.n()).map(|v| (w >> v & 1) as u8).collect(),
        },
        None => Colorability::Uncolorable {
            trace: s.trace,
            trace_truncated: s.truncated,
        },
    }
}

const S2: f64 = std::f64::consts::SQRT_2;

fn coord_symbol(x: f64) -> Option<char> {
    [(0.0, '0'), (1.0, '1'), (-1.0, 'm'), (S2, 's')]
        .iter()
        .find(|(v, _)| (x - v).abs() < 1e-9)
        .map(|&(_, ch)| ch)
}

/// `abc` notation with m = −1 and s = √2; parses the inverse of [`p33_label`].
pub fn parse_p33_label(label: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = label
        .chars()
        .map(|ch| match ch {
            '0' => Ok(0.0),
            '1' => Ok(1.0),
            'm' => Ok(-1.0),
            's' => Ok(S2),
            _ => Err(Error::Parameter(format!("bad symbol {ch:?} in {label:?}"))),
        })
        .collect::<Result<_>>()?;
    if v.len() != 3 {
        return param(format!("{label:?} is not a 3-vector"));
    }
    Ok(v)
}

/// Label of a ray in `abc` notation, using whichever sign has no −√2 entry.
fn p33_label(v: &[f64]) -> String {
    for sign in [1.0, -1.0] {
        let s: Option<String> = v.iter().map(|&x| coord_symbol(sign * x)).collect();
        if let Some(s) = s {
            return s;
        }
    }
    format!("{v:?}")
}

/// Peres' 33 rays: the eight base vectors under all coordinate permutations.
pub fn p33_vectors() -> VectorSystem {
    let (m, s) = (-1.0, S2);
    let base = [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 1.0],
        [0.0, 1.0, s],
        [s, 1.0, 1.0],
        [0.0, m, 1.0],
        [0.0, m, s],
        [s, m, 1.0],
        [s, m, m],
    ];
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut rays: Vec<Vec<f64>> = Vec::new();
    for b in &base {
        for p in &perms {
            let r = canonical_ray(&[b[p[0]], b[p[1]], b[p[2]]]).expect("nonzero");
            if !rays
                .iter()
                .any(|u| u.iter().zip(&r).all(|(a, b)| (a - b).abs() < 1e-9))
            {
                rays.push(r);
            }
        }
    }
    assert_eq!(rays.len(), 33, "P-33 expansion must yield 33 rays");
    // the smallest nonzero |coordinate| of every base vector is 1
    let labels = rays
        .iter()
        .map(|r| {
            let small = r
                .iter()
                .filter(|x| x.abs() > 1e-9)
                .fold(f64::INFINITY, |a, x| a.min(x.abs()));
            p33_label(&r.iter().map(|x| x / small).collect::<Vec<_>>())
        })
        .collect();
    VectorSystem::with_labels(3, rays, labels, ORTHO_TOL).expect("distinct rays")
}

/// The 25 vectors appearing in the P-33 refutation table.
pub const P33_TABLE_VECTORS: [&str; 25] = [
    "001", "100", "010", "110", "1m0", "101", "m01", "011", "0m1", "1ms", "m1s", "s0m", "0s1",
    "10s", "smm", "s11", "m0s", "s01", "mms", "11s", "0sm", "01s", "msm", "1s1", "0ms",
];

pub fn p33_table_subset() -> Result<VectorSystem> {
    let full = p33_vectors();
    let idx = P33_TABLE_VECTORS
        .iter()
        .map(|l| {
            full.find_ray(&parse_p33_label(l)?)
                .ok_or_else(|| Error::Parameter(format!("{l} is not a P-33 ray")))
        })
        .collect::<Result<Vec<_>>>()?;
    full.subset(&idx)
}

/// Angles of the KS-8 construction: α = π/4, β = −π/8 and φ with
/// tan²φ = −sin α sin β cos(α − β), which makes D ⊥ G.
pub fn ks8_parameters() -> (f64, f64, f64) {
    let a = std::f64::consts::FRAC_PI_4;
    let b = -std::f64::consts::FRAC_PI_8;
    let t2 = -a.sin() * b.sin() * (a - b).cos();
    (a, b, t2.sqrt().atan())
}

fn ks8_raw() -> Vec<(&'static str, Vec<f64>)> {
    let (a, b, f) = ks8_parameters();
    let cot = |x: f64| 1.0 / x.tan();
    vec![
        ("A", vec![1.0, 0.0, 0.0]),
        ("B", vec![0.0, a.cos(), a.sin()]),
        ("C", vec![cot(f), 1.0, -cot(a)]),
        ("D", vec![f.tan() / a.sin(), -a.sin(), a.cos()]),
        ("E", vec![0.0, b.cos(), b.sin()]),
        ("F", vec![cot(f), 1.0, -cot(b)]),
        ("G", vec![f.tan() / b.sin(), -b.sin(), b.cos()]),
        ("H", vec![f.sin(), -f.cos(), 0.0]),
    ]
}

fn named(raw: Vec<(&'static str, Vec<f64>)>) -> VectorSystem {
    let (labels, vectors): (Vec<String>, Vec<Vec<f64>>) =
        raw.into_iter().map(|(l, v)| (l.to_string(), v)).unzip();
    VectorSystem::with_labels(3, vectors, labels, 1e-9).expect("distinct rays")
}

/// Eight vectors A..H on which A = 1 forces H = 0.
pub fn ks8_vectors() -> VectorSystem {
    named(ks8_raw())
}

/// KS-8 plus I = (0,0,1) and J = (cos φ, sin φ, 0); A = 1 forces J = 1.
pub fn ks10_vectors() -> VectorSystem {
    let (_, _, f) = ks8_parameters();
    let mut raw = ks8_raw();
    raw.push(("I", vec![0.0, 0.0, 1.0]));
    raw.push(("J", vec![f.cos(), f.sin(), 0.0]));
    named(raw)
}

/// Operators, lines of mutually compatible operators and the sign of each line product.
#[derive(Clone, Debug)]
pub struct OperatorProofSpec {
    pub operators: Vec<CMat>,
    pub lines: Vec<Vec<usize>>,
    pub signs: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicativeVerdict {
    /// Every operator is Hermitian and squares to the identity.
    pub operators_ok: bool,
    pub lines_commute: bool,
    pub products_match: bool,
    /// A ±1 assignment reproducing every line sign.
    pub assignment_exists: bool,
    pub assignment: Option<Vec<i8>>,
}

impl MultiplicativeVerdict {
    pub fn is_proof(&self) -> bool {
        self.operators_ok && self.lines_commute && self.products_match && !self.assignment_exists
    }
}

/// Largest operator count searched exhaustively.
pub const MULTIPLICATIVE_LIMIT: usize = 12;

pub fn verify_multiplicative_proof(spec: &OperatorProofSpec) -> Result<MultiplicativeVerdict> {
    let k = spec.operators.len();
    if k == 0 {
        return param("no operators");
    }
    if k > MULTIPLICATIVE_LIMIT {
        return Err(Error::UnsupportedSize(format!(
            "{k} operators exceed {MULTIPLICATIVE_LIMIT}"
        )));
    }
    if spec.lines.len() != spec.signs.len() {
        return param("one sign per line required");
    }
    if spec.signs.iter().any(|&s| s != 1 && s != -1) {
        return param("line signs must be ±1");
    }
    let d = spec.operators[0].dim();
    if spec.operators.iter().any(|o| o.dim() != d) {
        return param("operators have different dimensions");
    }
    if let Some(line) = spec
        .lines
        .iter()
        .find(|l| l.is_empty() || l.iter().any(|&i| i >= k))
    {
        return param(format!(
            "line {line:?} is empty or names an unknown operator"
        ));
    }
    let id = CMat::identity(d);
    let tol = 1e-9;
    let operators_ok = spec.operators.iter().all(|o| {
        o.is_hermitian(tol)
            && o.mul(o)
                .map(|sq| sq.max_abs_diff(&id) <= tol)
                .unwrap_or(false)
    });
    let mut lines_commute = true;
    let mut products_match = true;
    for (line, &sign) in spec.lines.iter().zip(&spec.signs) {
        for (a, &i) in line.iter().enumerate() {
            for &j in &line[a + 1..] {
                let (x, y) = (&spec.operators[i], &spec.operators[j]);
                if x.mul(y)?.max_abs_diff(&y.mul(x)?) > tol {
                    lines_commute = false;
                }
            }
        }
        let mut prod = id.clone();
        for &i in line {
            prod = prod.mul(&spec.operators[i])?;
        }
        if prod.max_abs_diff(&id.scale(c(sign as f64, 0.0))) > tol {
            products_match = false;
        }
    }
    let assignment = (0u32..1 << k).find_map(|m| {
        let v: Vec<i8> = (0..k)
            .map(|i| if m >> i & 1 == 1 { -1 } else { 1 })
            .collect();
        let ok = spec
            .lines
            .iter()
            .zip(&spec.signs)
            .all(|(l, &s)| l.iter().map(|&i| v[i]).product::<i8>() == s);
        ok.then_some(v)
    });
    Ok(MultiplicativeVerdict {
        operators_ok,
        lines_commute,
        products_match,
        assignment_exists: assignment.is_some(),
        assignment,
    })
}

fn tensor_all(ops: &[&CMat]) -> CMat {
    ops[1..].iter().fold(ops[0].clone(), |acc, o| acc.tensor(o))
}

/// Peres–Mermin square: rows then columns, the last column multiplying to −I.
pub fn peres_mermin_square() -> OperatorProofSpec {
    let (i, x, y, z) = (
        CMat::identity(2),
        CMat::pauli_x(),
        CMat::pauli_y(),
        CMat::pauli_z(),
    );
    let operators = vec![
        tensor_all(&[&x, &i]),
        tensor_all(&[&i, &x]),
        tensor_all(&[&x, &x]),
        tensor_all(&[&i, &y]),
        tensor_all(&[&y, &i]),
        tensor_all(&[&y, &y]),
        tensor_all(&[&x, &y]),
        tensor_all(&[&y, &x]),
        tensor_all(&[&z, &z]),
    ];
    OperatorProofSpec {
        operators,
        lines: vec![
            vec![0, 1, 2],
            vec![3, 4, 5],
            vec![6, 7, 8],
            vec![0, 3, 6],
            vec![1, 4, 7],
            vec![2, 5, 8],
        ],
        signs: vec![1, 1, 1, 1, 1, -1],
    }
}

/// Ten three-qubit observables on a five-line star; the line A2A3A4A5 multiplies to −I.
pub fn mermin_star() -> OperatorProofSpec {
    let (i, x, y) = (CMat::identity(2), CMat::pauli_x(), CMat::pauli_y());
    let operators = vec![
        tensor_all(&[&y, &i, &i]),
        tensor_all(&[&x, &x, &x]),
        tensor_all(&[&y, &y, &x]),
        tensor_all(&[&y, &x, &y]),
        tensor_all(&[&x, &y, &y]),
        tensor_all(&[&i, &i, &x]),
        tensor_all(&[&i, &i, &y]),
        tensor_all(&[&x, &i, &i]),
        tensor_all(&[&i, &y, &i]),
        tensor_all(&[&i, &x, &i]),
    ];
    OperatorProofSpec {
        operators,
        lines: vec![
            vec![0, 2, 5, 8],
            vec![0, 3, 6, 9],
            vec![1, 5, 7, 9],
            vec![4, 6, 7, 8],
            vec![1, 2, 3, 4],
        ],
        signs: vec![1, 1, 1, 1, -1],
    }
}

/// An operator given as a Pauli string (`"XZ"`, `"IYI"`) or as a square
/// matrix of real numbers or `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorJson {
    Pauli(String),
    Matrix(Vec<Vec<Entry>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorProofJson {
    pub operators: Vec<OperatorJson>,
    pub lines: Vec<Vec<usize>>,
    pub signs: Vec<i8>,
}

fn pauli_string(s: &str) -> Result<CMat> {
    if s.is_empty() {
        return Err(Error::Input("empty Pauli string".into()));
    }
    let mut ops = Vec::with_capacity(s.len());
    for ch in s.chars() {
        ops.push(match ch.to_ascii_uppercase() {
            'I' => CMat::identity(2),
            'X' => CMat::pauli_x(),
            'Y' => CMat::pauli_y(),
            'Z' => CMat::pauli_z(),
            other => {
                return Err(Error::Input(format!(
                    "unknown Pauli letter {other:?} in {s:?}"
                )))
            }
        });
    }
    let refs: Vec<&CMat> = ops.iter().collect();
    Ok(tensor_all(&refs))
}

impl OperatorProofSpec {
    pub fn from_json(doc: &OperatorProofJson) -> Result<Self> {
        let mut operators = Vec::with_capacity(doc.operators.len());
        for (k, op) in doc.operators.iter().enumerate() {
            let m = match op {
                OperatorJson::Pauli(s) => pauli_string(s),
                OperatorJson::Matrix(rows) => {
                    let rows: Vec<Vec<_>> = rows
                        .iter()
                        .map(|r| r.iter().map(|e| e.to_c64()).collect())
                        .collect();
                    CMat::from_rows(&rows)
                }
            }
            .map_err(|e| Error::Input(format!("operators[{k}]: {e}")))?;
            operators.push(m);
        }
        if let Some(d) = operators.first().map(CMat::dim) {
            if let Some(k) = operators.iter().position(|o| o.dim() != d) {
                return Err(Error::Input(format!(
                    "operators[{k}]: dimension differs from operators[0]"
                )));
            }
        }
        for (l, line) in doc.lines.iter().enumerate() {
            if let Some(&i) = line.iter().find(|&&i| i >= operators.len()) {
                return Err(Error::Input(format!(
                    "lines[{l}]: operator {i} out of range"
                )));
            }
        }
        if let Some(k) = doc.signs.iter().position(|s| s.abs() != 1) {
            return Err(Error::Input(format!("signs[{k}]: must be 1 or -1")));
        }
        Ok(OperatorProofSpec {
            operators,
            lines: doc.lines.clone(),
            signs: doc.signs.clone(),
        })
    }

    pub fn to_json(&self) -> OperatorProofJson {
        let entry = |z: C64| {
            if z.im == 0.0 {
                Entry::Real(z.re)
            } else {
                Entry::Complex([z.re, z.im])
            }
        };
        OperatorProofJson {
            operators: self
                .operators
                .iter()
                .map(|o| {
                    let d = o.dim();
                    OperatorJson::Matrix(
                        (0..d)
                            .map(|i| (0..d).map(|j| entry(o[(i, j)])).collect())
                            .collect(),
                    )
                })
                .collect(),
            lines: self.lines.clone(),
            signs: self.signs.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_json_pauli_and_matrix() {
        let doc: OperatorProofJson = serde_json::from_str(
            r#"{"operators":["XI","IX","XX","IY","YI","YY","XY","YX","ZZ"],
                "lines":[[0,1,2],[3,4,5],[6,7,8],[0,3,6],[1,4,7],[2,5,8]],
                "signs":[1,1,1,1,1,-1]}"#,
        )
        .unwrap();
        let spec = OperatorProofSpec::from_json(&doc).unwrap();
        assert_eq!(spec.operators, peres_mermin_square().operators);
        assert!(verify_multiplicative_proof(&spec).unwrap().is_proof());
        let back = OperatorProofSpec::from_json(&peres_mermin_square().to_json()).unwrap();
        assert_eq!(back.operators, peres_mermin_square().operators);
        let bad: OperatorProofJson =
            serde_json::from_str(r#"{"operators":["XQ"],"lines":[[0]],"signs":[1]}"#).unwrap();
        let e = OperatorProofSpec::from_json(&bad).unwrap_err();
        assert!(e.to_string().contains("operators[0]"), "{e}");
        let bad: OperatorProofJson =
            serde_json::from_str(r#"{"operators":["X","XX"],"lines":[[0,1]],"signs":[1]}"#)
                .unwrap();
        assert!(OperatorProofSpec::from_json(&bad).is_err());
    }

    fn brute_colorable(cp: &ColoringProblem) -> bool {
        let n = cp.graph().n();
        (0u64..1 << n).any(|m| {
            let colors: Vec<bool> = (0..n).map(|v| m >> v & 1 == 1).collect();
            cp.is_valid_coloring(&colors)
        })
    }

    fn check_witness(cp: &ColoringProblem, r: &Colorability) {
        if let Colorability::Colorable { witness } = r {
            let colors: Vec<bool> = witness.iter().map(|&x| x == 1).collect();
            assert!(cp.is_valid_coloring(&colors));
        }
    }

    #[test]
    fn standard_basis_triangle() {
        let vs = VectorSystem::new(
            3,
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 2.0, 0.0],
                vec![0.0, 0.0, -3.0],
            ],
            1e-9,
        )
        .unwrap();
        let g = orthogonality_graph(&vs);
        assert_eq!(g.edge_count(), 3);
        let cp = ColoringProblem::from_vectors(&vs);
        assert_eq!(cp.bases().len(), 1);
        let r = classify_colorability(&cp);
        assert!(r.is_colorable());
        check_witness(&cp, &r);
    }

    #[test]
    fn duplicate_rays_rejected() {
        let e = VectorSystem::new(
            2,
            vec![vec![1.0, 1.0], vec![0.0, 1.0], vec![-2.0, -2.0]],
            1e-9,
        )
        .unwrap_err();
        assert!(matches!(e, Error::DuplicateRay(0, 2)));
        assert!(VectorSystem::new(2, vec![vec![0.0, 0.0]], 1e-9).is_err());
    }

    #[test]
    fn rescaling_invariance() {
        let vs = p33_vectors();
        let scaled: Vec<Vec<f64>> = vs
            .vectors()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.iter()
                    .map(|x| x * if i % 2 == 0 { -3.5 } else { 0.25 })
                    .collect()
            })
            .collect();
        let other = VectorSystem::new(3, scaled, ORTHO_TOL).unwrap();
        assert_eq!(
            orthogonality_graph(&other).unlabeled(),
            orthogonality_graph(&vs).unlabeled()
        );
    }

    #[test]
    fn p33_is_totally_noncolorable() {
        let vs = p33_vectors();
        assert_eq!(vs.len(), 33);
        let cp = ColoringProblem::from_vectors(&vs);
        // every ray lies in some orthogonal basis
        for v in 0..33 {
            assert!(
                cp.bases().iter().any(|b| b.contains(&v)),
                "{}",
                vs.labels()[v]
            );
        }
        let r = classify_colorability(&cp);
        assert!(!r.is_colorable());
        if let Colorability::Uncolorable { trace, .. } = &r {
            assert!(trace
                .iter()
                .any(|e| matches!(e, TraceEvent::Conflict { .. })));
        }
        // first table rows are bases
        for row in [
            ["001", "100", "010"],
            ["101", "m01", "010"],
            ["011", "0m1", "100"],
            ["1ms", "m1s", "110"],
        ] {
            let idx: Vec<usize> = row
                .iter()
                .map(|l| vs.find_ray(&parse_p33_label(l).unwrap()).unwrap())
                .collect();
            let mut sorted = idx.clone();
            sorted.sort();
            assert!(cp.bases().contains(&sorted), "{row:?}");
        }
    }

    #[test]
    fn p33_table_subset_is_colorable() {
        let vs = p33_table_subset().unwrap();
        assert_eq!(vs.len(), 25);
        let cp = ColoringProblem::from_vectors(&vs);
        let r = classify_colorability(&cp);
        assert!(r.is_colorable());
        check_witness(&cp, &r);
    }

    #[test]
    fn ks8_forces_h_zero() {
        let vs = ks8_vectors();
        let g = orthogonality_graph(&vs);
        let id = |l: &str| vs.index_of(l).unwrap();
        for (a, b) in [
            ("A", "B"),
            ("A", "E"),
            ("H", "C"),
            ("H", "F"),
            ("D", "G"),
            ("B", "C"),
            ("C", "D"),
            ("E", "F"),
            ("F", "G"),
        ] {
            assert!(g.has_edge(id(a), id(b)), "{a}-{b}");
        }
        assert!(!g.has_edge(id("A"), id("H")));
        let cp = ColoringProblem::from_vectors(&vs);
        assert_eq!(cp.bases().len(), 2);
        assert!(classify_colorability(&cp).is_colorable());
        let pinned = cp.clone().pin_label("A", true).unwrap();
        let r = classify_colorability(&pinned);
        assert!(r.is_colorable());
        if let Colorability::Colorable { witness } = r {
            assert_eq!(witness[id("H")], 0);
        }
        let both = pinned.pin_label("H", true).unwrap();
        assert!(!classify_colorability(&both).is_colorable());
        assert!(!brute_colorable(&both));
    }

    #[test]
    fn ks10_forces_j() {
        let vs = ks10_vectors();
        let cp = ColoringProblem::from_vectors(&vs);
        let p = cp
            .pin_label("A", true)
            .unwrap()
            .pin_label("J", false)
            .unwrap();
        assert!(!classify_colorability(&p).is_colorable());
    }

    #[test]
    fn agrees_with_exhaustive_search() {
        let mut state = 0x2545f4914f6cdd1du64;
        for trial in 0..60 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let s = state;
            let n = 5 + trial % 10;
            let g = Graph::from_fn(n, |i, j| {
                (s >> ((i * 7 + j * 3) % 61)) & 1 == 1 || (i + j + trial) % 5 == 0
            })
            .unwrap();
            let d = 2 + trial % 3;
            let mut cp = ColoringProblem::new(g, d).unwrap();
            if trial % 4 == 0 {
                cp = cp.pin(0, true).unwrap();
            }
            let r = classify_colorability(&cp);
            assert_eq!(r.is_colorable(), brute_colorable(&cp), "trial {trial}");
            check_witness(&cp, &r);
        }
    }

    #[test]
    fn multiplicative_proofs() {
        let pm = verify_multiplicative_proof(&peres_mermin_square()).unwrap();
        assert!(pm.operators_ok && pm.lines_commute && pm.products_match);
        assert!(!pm.assignment_exists);
        assert!(pm.is_proof());
        let star = verify_multiplicative_proof(&mermin_star()).unwrap();
        assert!(star.is_proof(), "{star:?}");
        let mut flipped = peres_mermin_square();
        flipped.signs[5] = 1;
        let v = verify_multiplicative_proof(&flipped).unwrap();
        assert!(v.assignment_exists);
        assert_eq!(v.assignment, Some(vec![1; 9]));
        assert!(!v.products_match);
        let mut bad = peres_mermin_square();
        bad.operators[0] = CMat::identity(2);
        assert!(verify_multiplicative_proof(&bad).is_err());
    }

    #[test]
    fn json_round_trip() {
        let vs = ks8_vectors();
        let text = serde_json::to_string(&vs.to_json()).unwrap();
        let back = VectorSystem::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.labels(), vs.labels());
        for (a, b) in back.vectors().iter().zip(vs.vectors()) {
            assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15));
        }
        let doc: VectorSystemJson =
            serde_json::from_str(r#"{"d":2,"vectors":[[1,0],[0,1]]}"#).unwrap();
        assert_eq!(VectorSystem::from_json(&doc).unwrap().len(), 2);
    }
}
