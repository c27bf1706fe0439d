//! Compatibility scenarios, empirical models, non-disturbance, global
//! sections and noncontextuality inequalities.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::graph::Graph;
use crate::numkernel::{lp_solve, LinearProgram, LpStatus, Sense};

/// Largest number of global assignments the global-section LP enumerates.
pub const GLOBAL_SECTION_LIMIT: usize = 1 << 20;

/// Measurements, contexts (maximal compatible sets) and a common outcome set.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    measurements: Vec<String>,
    contexts: Vec<Vec<usize>>,
    outcomes: Vec<String>,
}

impl Scenario {
    pub fn new(
        measurements: Vec<String>,
        contexts: Vec<Vec<usize>>,
        outcomes: Vec<String>,
    ) -> Result<Self> {
        let nm = measurements.len();
        if nm == 0 {
            return param("scenario needs at least one measurement");
        }
        if outcomes.len() < 2 {
            return param("scenario needs at least two outcomes");
        }
        let mut covered = vec![false; nm];
        for (k, c) in contexts.iter().enumerate() {
            if c.is_empty() {
                return param(format!("context {k} is empty"));
            }
            for (a, &m) in c.iter().enumerate() {
                if m >= nm {
                    return param(format!("context {k} names unknown measurement {m}"));
                }
                if c[..a].contains(&m) {
                    return param(format!("context {k} repeats measurement {m}"));
                }
                covered[m] = true;
            }
        }
        if let Some(m) = covered.iter().position(|&c| !c) {
            return param(format!(
                "measurement {} lies in no context",
                measurements[m]
            ));
        }
        for (a, ca) in contexts.iter().enumerate() {
            for (b, cb) in contexts.iter().enumerate() {
                if a != b && ca.iter().all(|m| cb.contains(m)) {
                    return param(format!("context {a} is contained in context {b}"));
                }
            }
        }
        Ok(Scenario {
            measurements,
            contexts,
            outcomes,
        })
    }

    /// The n-cycle scenario: `M_0..M_{n-1}`, contexts `{M_i, M_{i+1}}`, outcomes ±1.
    pub fn ncycle(n: usize) -> Result<Self> {
        if n < 3 {
            return param("n-cycle scenario requires n >= 3");
        }
        Scenario::new(
            (0..n).map(|i| format!("M{i}")).collect(),
            (0..n).map(|i| vec![i, (i + 1) % n]).collect(),
            pm_outcomes(),
        )
    }

    pub fn measurements(&self) -> &[String] {
        &self.measurements
    }

    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    fn table_len(&self, k: usize) -> usize {
        self.outcomes.len().pow(self.contexts[k].len() as u32)
    }

    /// Outcome tuple of table entry `idx` for context `k` (first measurement most significant).
    fn decode(&self, k: usize, mut idx: usize) -> Vec<usize> {
        let o = self.outcomes.len();
        let len = self.contexts[k].len();
        let mut t = vec![0; len];
        for j in (0..len).rev() {
            t[j] = idx % o;
            idx /= o;
        }
        t
    }

    fn encode(&self, outcomes: &[usize]) -> usize {
        outcomes
            .iter()
            .fold(0, |acc, &a| acc * self.outcomes.len() + a)
    }

    fn context_key(&self, k: usize) -> String {
        self.contexts[k]
            .iter()
            .map(|&m| self.measurements[m].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Outcome labels `["1", "-1"]`: index 0 is +1, index 1 is −1.
pub fn pm_outcomes() -> Vec<String> {
    vec!["1".into(), "-1".into()]
}

/// ±1 value of a canonical outcome index.
pub fn pm_value(idx: usize) -> f64 {
    if idx == 0 {
        1.0
    } else {
        -1.0
    }
}

/// One outcome distribution per context.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalModel {
    scenario: Scenario,
    tables: Vec<Vec<f64>>,
}

impl EmpiricalModel {
    pub fn new(scenario: Scenario, tables: Vec<Vec<f64>>) -> Result<Self> {
        if tables.len() != scenario.contexts.len() {
            return param(format!(
                "{} tables for {} contexts",
                tables.len(),
                scenario.contexts.len()
            ));
        }
        for (k, t) in tables.iter().enumerate() {
            if t.len() != scenario.table_len(k) {
                return param(format!(
                    "table {k} has {} entries, expected {}",
                    t.len(),
                    scenario.table_len(k)
                ));
            }
            if t.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return param(format!("table {k} has a negative or non-finite entry"));
            }
            let s: f64 = t.iter().sum();
            if (s - 1.0).abs() > 1e-9 {
                return param(format!("table {k} sums to {s}, not 1"));
            }
        }
        Ok(EmpiricalModel { scenario, tables })
    }

    /// Uniform distribution in every context.
    pub fn uniform(scenario: Scenario) -> Self {
        let tables = (0..scenario.contexts.len())
            .map(|k| {
                let len = scenario.table_len(k);
                vec![1.0 / len as f64; len]
            })
            .collect();
        EmpiricalModel { scenario, tables }
    }

    /// Model induced by a distribution over global assignments `O^X`.
    pub fn from_global(scenario: Scenario, global: &[(Vec<usize>, f64)]) -> Result<Self> {
        let mut tables: Vec<Vec<f64>> = (0..scenario.contexts.len())
            .map(|k| vec![0.0; scenario.table_len(k)])
            .collect();
        for (assign, w) in global {
            if assign.len() != scenario.measurements.len() {
                return param("global assignment has the wrong length");
            }
            for (k, c) in scenario.contexts.iter().enumerate() {
                let local: Vec<usize> = c.iter().map(|&m| assign[m]).collect();
                tables[k][scenario.encode(&local)] += w;
            }
        }
        EmpiricalModel::new(scenario, tables)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn tables(&self) -> &[Vec<f64>] {
        &self.tables
    }

    /// Probability of `outcomes` on `measurements` (an ordered subset of some context).
    pub fn probability(&self, measurements: &[usize], outcomes: &[usize]) -> Result<f64> {
        if measurements.len() != outcomes.len() {
            return param("event has mismatched measurement and outcome lists");
        }
        let k = self
            .scenario
            .contexts
            .iter()
            .position(|c| measurements.iter().all(|m| c.contains(m)))
            .ok_or_else(|| {
                Error::Parameter(format!("no context contains measurements {measurements:?}"))
            })?;
        let ctx = &self.scenario.contexts[k];
        let pos: Vec<usize> = measurements
            .iter()
            .map(|m| ctx.iter().position(|x| x == m).unwrap())
            .collect();
        Ok(self.tables[k]
            .iter()
            .enumerate()
            .filter(|&(idx, _)| {
                let t = self.scenario.decode(k, idx);
                pos.iter().zip(outcomes).all(|(&p, &o)| t[p] == o)
            })
            .map(|(_, &v)| v)
            .sum())
    }

    /// Marginal of context `k` on the measurements `subset` (in the given order).
    fn marginal(&self, k: usize, subset: &[usize]) -> Vec<f64> {
        let ctx = &self.scenario.contexts[k];
        let pos: Vec<usize> = subset
            .iter()
            .map(|m| ctx.iter().position(|x| x == m).unwrap())
            .collect();
        let o = self.scenario.outcomes.len();
        let mut out = vec![0.0; o.pow(subset.len() as u32)];
        for (idx, &v) in self.tables[k].iter().enumerate() {
            let t = self.scenario.decode(k, idx);
            let key = pos.iter().fold(0, |acc, &p| acc * o + t[p]);
            out[key] += v;
        }
        out
    }

    pub fn to_json(&self) -> EmpiricalModelJson {
        let s = &self.scenario;
        let mut tables = BTreeMap::new();
        for k in 0..s.contexts.len() {
            let mut row = BTreeMap::new();
            for (idx, &v) in self.tables[k].iter().enumerate() {
                let key = s
                    .decode(k, idx)
                    .iter()
                    .map(|&o| s.outcomes[o].as_str())
                    .collect::<Vec<_>>()
                    .join(",");
                row.insert(key, v);
            }
            tables.insert(s.context_key(k), row);
        }
        EmpiricalModelJson {
            measurements: s.measurements.clone(),
            outcomes: s.outcomes.clone(),
            contexts: s
                .contexts
                .iter()
                .map(|c| c.iter().map(|&m| s.measurements[m].clone()).collect())
                .collect(),
            tables,
        }
    }

    pub fn from_json(doc: &EmpiricalModelJson) -> Result<Self> {
        let index = |name: &str| {
            doc.measurements
                .iter()
                .position(|m| m == name)
                .ok_or_else(|| Error::Input(format!("unknown measurement {name:?}")))
        };
        let contexts = doc
            .contexts
            .iter()
            .map(|c| c.iter().map(|m| index(m)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let scenario = Scenario::new(doc.measurements.clone(), contexts, doc.outcomes.clone())?;
        let mut tables = Vec::new();
        for k in 0..scenario.contexts.len() {
            let key = scenario.context_key(k);
            let row = doc
                .tables
                .get(&key)
                .ok_or_else(|| Error::Input(format!("missing table for context {key:?}")))?;
            let mut t = vec![0.0; scenario.table_len(k)];
            for (ok, &v) in row {
                let labels: Vec<&str> = ok.split(',').map(str::trim).collect();
                if labels.len() != scenario.contexts[k].len() {
                    return Err(Error::Input(format!(
                        "outcome key {ok:?} in context {key:?} has the wrong arity"
                    )));
                }
                let idx = labels
                    .iter()
                    .map(|l| {
                        scenario
                            .outcomes
                            .iter()
                            .position(|o| o == l)
                            .ok_or_else(|| Error::Input(format!("unknown outcome {l:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                t[scenario.encode(&idx)] = v;
            }
            tables.push(t);
        }
        EmpiricalModel::new(scenario, tables)
    }
}

/// Serialized model. Context keys are comma-joined measurement names,
/// outcome keys comma-joined outcome labels; missing outcomes have probability 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalModelJson {
    pub measurements: Vec<String>,
    pub outcomes: Vec<String>,
    pub contexts: Vec<Vec<String>>,
    pub tables: BTreeMap<String, BTreeMap<String, f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NondisturbanceVerdict {
    pub nondisturbing: bool,
    pub max_deviation: f64,
    /// First pair of contexts whose marginals on the overlap differ by more than the tolerance.
    pub offending: Option<(usize, usize)>,
}

pub fn check_nondisturbance(m: &EmpiricalModel, tol: f64) -> NondisturbanceVerdict {
    let ctx = &m.scenario.contexts;
    let mut max_dev: f64 = 0.0;
    let mut offending = None;
    for a in 0..ctx.len() {
        for b in (a + 1)..ctx.len() {
            let overlap: Vec<usize> = ctx[a]
                .iter()
                .copied()
                .filter(|x| ctx[b].contains(x))
                .collect();
            if overlap.is_empty() {
                continue;
            }
            let ma = m.marginal(a, &overlap);
            let mb = m.marginal(b, &overlap);
            let dev = ma
                .iter()
                .zip(&mb)
                .fold(0.0f64, |d, (x, y)| d.max((x - y).abs()));
            max_dev = max_dev.max(dev);
            if dev > tol && offending.is_none() {
                offending = Some((a, b));
            }
        }
    }
    NondisturbanceVerdict {
        nondisturbing: offending.is_none(),
        max_deviation: max_dev,
        offending,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GlobalSectionVerdict {
    pub has_global_section: bool,
    /// Smallest total deviation between the model and any global-section model.
    pub distance: f64,
    /// Global assignments (one outcome index per measurement) with their weights.
    pub witness: Option<Vec<(Vec<usize>, f64)>>,
    /// Coefficients `y[k][o]` per context entry such that every global
    /// assignment scores at most 0 while the model scores `distance > 0`.
    pub certificate: Option<Vec<Vec<f64>>>,
}

/// LP over distributions on `O^X` minimizing the L1 distance of their
/// marginals to the model's tables.
pub fn has_global_section(m: &EmpiricalModel, tol: f64) -> Result<GlobalSectionVerdict> {
    let s = &m.scenario;
    let o = s.outcomes.len();
    let nx = s.measurements.len();
    let atoms = (o as f64).powi(nx as i32);
    if atoms > GLOBAL_SECTION_LIMIT as f64 {
        return Err(Error::UnsupportedSize(format!(
            "{o}^{nx} global assignments exceed the limit of {GLOBAL_SECTION_LIMIT}"
        )));
    }
    let atoms = atoms as usize;
    let decode_global = |mut a: usize| {
        let mut t = vec![0; nx];
        for j in (0..nx).rev() {
            t[j] = a % o;
            a /= o;
        }
        t
    };
    let rows: Vec<(usize, usize)> = (0..s.contexts.len())
        .flat_map(|k| (0..s.table_len(k)).map(move |i| (k, i)))
        .collect();
    let r = rows.len();
    let mut obj = vec![0.0; atoms];
    obj.extend(std::iter::repeat_n(1.0, 2 * r));
    let mut lp = LinearProgram::minimize(obj);
    let mut a = vec![vec![0.0; atoms + 2 * r]; r];
    let row_of = |k: usize, i: usize| rows.iter().position(|&x| x == (k, i)).unwrap();
    let offsets: Vec<usize> = (0..s.contexts.len()).map(|k| row_of(k, 0)).collect();
    for atom in 0..atoms {
        let g = decode_global(atom);
        for (k, c) in s.contexts.iter().enumerate() {
            let local: Vec<usize> = c.iter().map(|&x| g[x]).collect();
            a[offsets[k] + s.encode(&local)][atom] = 1.0;
        }
    }
    for (i, row) in a.iter_mut().enumerate() {
        row[atoms + i] = 1.0;
        row[atoms + r + i] = -1.0;
    }
    for (i, row) in a.into_iter().enumerate() {
        let (k, idx) = rows[i];
        lp.add_row(row, Sense::Eq, m.tables[k][idx]);
    }
    let sol = lp_solve(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Precondition(format!(
            "global-section LP ended {:?}",
            sol.status
        )));
    }
    let distance = sol.objective.max(0.0);
    if distance <= tol {
        let witness = (0..atoms)
            .filter(|&a| sol.x[a] > 1e-12)
            .map(|a| (decode_global(a), sol.x[a]))
            .collect();
        Ok(GlobalSectionVerdict {
            has_global_section: true,
            distance,
            witness: Some(witness),
            certificate: None,
        })
    } else {
        let cert = (0..s.contexts.len())
            .map(|k| {
                (0..s.table_len(k))
                    .map(|i| sol.duals[offsets[k] + i])
                    .collect()
            })
            .collect();
        Ok(GlobalSectionVerdict {
            has_global_section: false,
            distance,
            witness: None,
            certificate: Some(cert),
        })
    }
}

/// An event: outcomes of a set of compatible measurements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub measurements: Vec<usize>,
    pub outcomes: Vec<usize>,
}

impl Event {
    /// Different outcomes for some shared measurement.
    pub fn exclusive_with(&self, other: &Event) -> bool {
        self.measurements.iter().zip(&self.outcomes).any(|(m, a)| {
            other
                .measurements
                .iter()
                .zip(&other.outcomes)
                .any(|(m2, b)| m == m2 && a != b)
        })
    }
}

/// `offset + Σ coeff · p(event) ≤ bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub terms: Vec<(Event, f64)>,
    pub offset: f64,
    pub bound: f64,
    /// Correlator signs for n-cycle inequalities.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<i8>>,
}

/// `Σ γ_i ⟨M_i M_{i+1}⟩ ≤ n − 2` in probability form.
pub fn ncycle_inequality(gamma: &[i8]) -> Result<Inequality> {
    let n = gamma.len();
    if n < 3 {
        return param("n-cycle inequality requires n >= 3");
    }
    if gamma.iter().any(|&g| g != 1 && g != -1) {
        return param("gamma entries must be ±1");
    }
    let mut terms = Vec::with_capacity(2 * n);
    for (i, &g) in gamma.iter().enumerate() {
        let ms = vec![i, (i + 1) % n];
        // ⟨M_iM_j⟩ = 2(p(11)+p(-1-1)) - 1 ; -⟨M_iM_j⟩ = 2(p(1-1)+p(-11)) - 1
        let pairs: [[usize; 2]; 2] = if g == 1 {
            [[0, 0], [1, 1]]
        } else {
            [[0, 1], [1, 0]]
        };
        for p in pairs {
            terms.push((
                Event {
                    measurements: ms.clone(),
                    outcomes: p.to_vec(),
                },
                2.0,
            ));
        }
    }
    Ok(Inequality {
        terms,
        offset: -(n as f64),
        bound: n as f64 - 2.0,
        gamma: Some(gamma.to_vec()),
    })
}

/// All `2^{n-1}` n-cycle inequalities (odd number of γ = −1), ordered by the
/// bit pattern of the negative signs.
pub fn ncycle_inequalities(n: usize) -> Result<Vec<Inequality>> {
    if !(3..=20).contains(&n) {
        return param("n-cycle inequalities are generated for 3 <= n <= 20");
    }
    (0u32..1 << n)
        .filter(|m| m.count_ones() % 2 == 1)
        .map(|m| {
            let gamma: Vec<i8> = (0..n)
                .map(|i| if m >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            ncycle_inequality(&gamma)
        })
        .collect()
}

pub fn evaluate_inequality(ineq: &Inequality, m: &EmpiricalModel) -> Result<f64> {
    let mut v = ineq.offset;
    for (e, c) in &ineq.terms {
        v += c * m.probability(&e.measurements, &e.outcomes)?;
    }
    Ok(v)
}

/// Vertices are the inequality's events; edges join exclusive events.
pub fn inequality_exclusivity_graph(ineq: &Inequality) -> Result<Graph> {
    let ev: Vec<&Event> = ineq.terms.iter().map(|(e, _)| e).collect();
    let g = Graph::from_fn(ev.len(), |i, j| ev[i].exclusive_with(ev[j]))?;
    let labels = ev
        .iter()
        .map(|e| {
            let o: Vec<String> = e.outcomes.iter().map(|&a| a.to_string()).collect();
            let ms: Vec<String> = e.measurements.iter().map(|&x| format!("M{x}")).collect();
            format!("{}|{}", o.join(","), ms.join(","))
        })
        .collect();
    g.with_labels(labels)
}

/// Specker's triangle: perfectly correlated on two edges, anticorrelated on the third.
pub fn specker_triangle() -> EmpiricalModel {
    let s = Scenario::new(
        vec!["M1".into(), "M2".into(), "M3".into()],
        vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        pm_outcomes(),
    )
    .expect("valid scenario");
    let eq = vec![0.5, 0.0, 0.0, 0.5];
    let ne = vec![0.0, 0.5, 0.5, 0.0];
    EmpiricalModel::new(s, vec![eq.clone(), eq, ne]).expect("valid tables")
}

/// Non-disturbing KCBS model reaching 5 on the inequality with γ = (1,1,1,1,−1).
pub fn kcbs_extremal_model() -> EmpiricalModel {
    let s = Scenario::ncycle(5).expect("valid scenario");
    let eq = vec![0.5, 0.0, 0.0, 0.5];
    let ne = vec![0.0, 0.5, 0.5, 0.0];
    EmpiricalModel::new(s, vec![eq.clone(), eq.clone(), eq.clone(), eq, ne]).expect("valid tables")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::independence_number;
    use crate::graph::{is_isomorphic, GraphFamilySpec};

    #[test]
    fn specker_triangle_is_contextual() {
        let m = specker_triangle();
        assert!(check_nondisturbance(&m, 1e-9).nondisturbing);
        let g = has_global_section(&m, 1e-9).unwrap();
        assert!(!g.has_global_section);
        // certificate: every deterministic assignment scores ≤ 0, the model scores > 0
        let cert = g.certificate.unwrap();
        let s = m.scenario().clone();
        for a in 0..8usize {
            let assign = vec![a >> 2 & 1, a >> 1 & 1, a & 1];
            let det = EmpiricalModel::from_global(s.clone(), &[(assign, 1.0)]).unwrap();
            let score: f64 = det
                .tables()
                .iter()
                .zip(&cert)
                .flat_map(|(t, y)| t.iter().zip(y).map(|(p, y)| p * y))
                .sum();
            assert!(score <= 1e-9);
        }
        let score: f64 = m
            .tables()
            .iter()
            .zip(&cert)
            .flat_map(|(t, y)| t.iter().zip(y).map(|(p, y)| p * y))
            .sum();
        assert!(score > 1e-6);
    }

    #[test]
    fn disturbing_model_reports_pair() {
        let s = Scenario::new(
            vec!["M1".into(), "M2".into(), "M3".into()],
            vec![vec![0, 1], vec![1, 2]],
            pm_outcomes(),
        )
        .unwrap();
        // C1 puts M2 = 1 surely, C2 puts M2 = -1 surely
        let m = EmpiricalModel::new(s, vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 0.0]])
            .unwrap();
        let v = check_nondisturbance(&m, 1e-9);
        assert!(!v.nondisturbing);
        assert_eq!(v.offending, Some((0, 1)));
    }

    #[test]
    fn uniform_is_noncontextual() {
        let m = EmpiricalModel::uniform(Scenario::ncycle(5).unwrap());
        assert!(check_nondisturbance(&m, 1e-12).nondisturbing);
        let g = has_global_section(&m, 1e-9).unwrap();
        assert!(g.has_global_section);
        let total: f64 = g.witness.unwrap().iter().map(|w| w.1).sum();
        assert!((total - 1.0).abs() < 1e-9);
        for ineq in ncycle_inequalities(5).unwrap() {
            assert!(evaluate_inequality(&ineq, &m).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn kcbs_extremal() {
        let m = kcbs_extremal_model();
        assert!(check_nondisturbance(&m, 1e-12).nondisturbing);
        let ineq = ncycle_inequality(&[1, 1, 1, 1, -1]).unwrap();
        assert_eq!(evaluate_inequality(&ineq, &m).unwrap(), 5.0);
        assert!(!has_global_section(&m, 1e-9).unwrap().has_global_section);
        let all_neg = ncycle_inequality(&[-1; 5]).unwrap();
        assert_eq!(evaluate_inequality(&all_neg, &m).unwrap(), -3.0);
    }

    #[test]
    fn ncycle_counts() {
        let five = ncycle_inequalities(5).unwrap();
        assert_eq!(five.len(), 16);
        assert!(five.iter().all(|i| i.bound == 3.0));
        let four = ncycle_inequalities(4).unwrap();
        assert_eq!(four.len(), 8);
        assert!(four.iter().all(|i| i.bound == 2.0));
        for i in five.iter().chain(&four) {
            let neg = i
                .gamma
                .as_ref()
                .unwrap()
                .iter()
                .filter(|&&g| g == -1)
                .count();
            assert_eq!(neg % 2, 1);
        }
    }

    #[test]
    fn tight_at_classical_bound() {
        for n in [4usize, 5, 6] {
            let s = Scenario::ncycle(n).unwrap();
            for ineq in ncycle_inequalities(n).unwrap() {
                let mut best = f64::NEG_INFINITY;
                for a in 0..1usize << n {
                    let assign: Vec<usize> = (0..n).map(|i| a >> i & 1).collect();
                    let det = EmpiricalModel::from_global(s.clone(), &[(assign, 1.0)]).unwrap();
                    let v = evaluate_inequality(&ineq, &det).unwrap();
                    assert!(v <= ineq.bound + 1e-12);
                    best = best.max(v);
                }
                assert_eq!(best, ineq.bound);
            }
        }
    }

    #[test]
    fn exclusivity_graphs() {
        let y5 = GraphFamilySpec::Prism { n: 5 }.build().unwrap();
        let g = inequality_exclusivity_graph(&ncycle_inequality(&[-1; 5]).unwrap()).unwrap();
        assert_eq!(g.n(), 10);
        assert!(is_isomorphic(&g, &y5).unwrap());
        let m8 = GraphFamilySpec::Circulant {
            n: 8,
            offsets: vec![1, 4],
        }
        .build()
        .unwrap();
        for ineq in ncycle_inequalities(4).unwrap() {
            let g = inequality_exclusivity_graph(&ineq).unwrap();
            assert!(is_isomorphic(&g, &m8).unwrap());
        }
        // α of the exclusivity graph matches the classical bound: (n + bound) / 2
        for n in [4usize, 5, 6, 7] {
            let ineq = &ncycle_inequalities(n).unwrap()[0];
            let (a, _) = independence_number(&inequality_exclusivity_graph(ineq).unwrap());
            assert_eq!(2.0 * a as f64 - n as f64, ineq.bound);
        }
        let e1 = Event {
            measurements: vec![0],
            outcomes: vec![0],
        };
        let e2 = Event {
            measurements: vec![1],
            outcomes: vec![1],
        };
        assert!(!e1.exclusive_with(&e2));
    }

    #[test]
    fn json_round_trip() {
        let m = specker_triangle();
        let text = serde_json::to_string(&m.to_json()).unwrap();
        let back: EmpiricalModelJson = serde_json::from_str(&text).unwrap();
        assert_eq!(EmpiricalModel::from_json(&back).unwrap(), m);
    }

    #[test]
    fn scenario_validation() {
        let names = || vec!["A".to_string(), "B".to_string()];
        assert!(Scenario::new(names(), vec![vec![0]], pm_outcomes()).is_err());
        assert!(Scenario::new(names(), vec![vec![0, 1], vec![0]], pm_outcomes()).is_err());
        assert!(Scenario::new(names(), vec![vec![0, 1]], vec!["x".into()]).is_err());
        let s = Scenario::new(names(), vec![vec![0, 1]], pm_outcomes()).unwrap();
        assert!(EmpiricalModel::new(s, vec![vec![0.5, 0.5, 0.5, 0.0]]).is_err());
    }
}
