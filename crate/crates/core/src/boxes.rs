//! Bell-scenario boxes: dense tables `p(a⃗|x⃗)`, no-signaling and locality
//! tests, the CHSH/GYNI functionals, PR boxes and the communication
//! protocols built from them.
//!
//! Outcome and setting tuples are encoded in mixed radix with the first party
//! most significant. Binary outcome 0 stands for the ±1 value +1.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::numkernel::{lp_solve, CMat, LinearProgram, LpStatus, Sense};
use crate::quantum::{singlet_chsh_settings, singlet_state, spectral};

/// Tables larger than this are refused.
pub const TABLE_LIMIT: usize = 1 << 24;
/// Cap on deterministic local strategies.
pub const STRATEGY_LIMIT: usize = 1 << 20;
/// Cap on the dense locality LP (strategies × table entries).
pub const LOCAL_LP_LIMIT: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellScenario {
    settings: Vec<usize>,
    outcomes: usize,
}

impl BellScenario {
    /// `settings[i]` is the number of measurements available to party `i`.
    pub fn new(settings: Vec<usize>, outcomes: usize) -> Result<Self> {
        if settings.is_empty() {
            return param("a Bell scenario needs at least one party");
        }
        if settings.contains(&0) || outcomes == 0 {
            return param("settings and outcomes must be at least 1");
        }
        let s = BellScenario { settings, outcomes };
        let size = (s.settings_count() as f64) * (outcomes as f64).powi(s.parties() as i32);
        if size > TABLE_LIMIT as f64 {
            return Err(Error::UnsupportedSize(format!(
                "box table of {size} entries exceeds {TABLE_LIMIT}"
            )));
        }
        Ok(s)
    }

    /// `(n, m, o)`: every party has `m` settings.
    pub fn uniform(parties: usize, settings: usize, outcomes: usize) -> Result<Self> {
        Self::new(vec![settings; parties], outcomes)
    }

    pub fn parties(&self) -> usize {
        self.settings.len()
    }

    pub fn settings(&self) -> &[usize] {
        &self.settings
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn settings_count(&self) -> usize {
        self.settings.iter().product()
    }

    pub fn outcomes_count(&self) -> usize {
        self.outcomes.pow(self.parties() as u32)
    }

    fn is(&self, settings: &[usize], outcomes: usize) -> bool {
        self.settings == settings && self.outcomes == outcomes
    }

    pub fn encode_settings(&self, x: &[usize]) -> usize {
        x.iter()
            .zip(&self.settings)
            .fold(0, |acc, (&v, &m)| acc * m + v)
    }

    pub fn decode_settings(&self, mut idx: usize) -> Vec<usize> {
        let mut x = vec![0; self.parties()];
        for i in (0..self.parties()).rev() {
            x[i] = idx % self.settings[i];
            idx /= self.settings[i];
        }
        x
    }

    pub fn encode_outcomes(&self, a: &[usize]) -> usize {
        a.iter().fold(0, |acc, &v| acc * self.outcomes + v)
    }

    pub fn decode_outcomes(&self, mut idx: usize) -> Vec<usize> {
        let mut a = vec![0; self.parties()];
        for i in (0..self.parties()).rev() {
            a[i] = idx % self.outcomes;
            idx /= self.outcomes;
        }
        a
    }

    fn check_tuple(&self, a: &[usize], x: &[usize]) -> Result<()> {
        if a.len() != self.parties() || x.len() != self.parties() {
            return param(format!("tuples must have {} entries", self.parties()));
        }
        for i in 0..self.parties() {
            if x[i] >= self.settings[i] || a[i] >= self.outcomes {
                return param(format!("party {i}: setting or outcome out of range"));
            }
        }
        Ok(())
    }
}

/// A conditional distribution `p(a⃗|x⃗)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDistribution {
    scenario: BellScenario,
    /// Row `x⃗`, column `a⃗`, flattened row-major.
    table: Vec<f64>,
}

impl BoxDistribution {
    pub fn new(scenario: BellScenario, table: Vec<f64>) -> Result<Self> {
        let rows = scenario.settings_count();
        let cols = scenario.outcomes_count();
        if table.len() != rows * cols {
            return param(format!(
                "box table needs {} entries, got {}",
                rows * cols,
                table.len()
            ));
        }
        for x in 0..rows {
            let row = &table[x * cols..(x + 1) * cols];
            if row.iter().any(|p| !p.is_finite() || *p < -1e-12) {
                return param(format!(
                    "settings {:?}: negative or non-finite entry",
                    scenario.decode_settings(x)
                ));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > 1e-9 {
                return param(format!(
                    "settings {:?}: probabilities sum to {s}",
                    scenario.decode_settings(x)
                ));
            }
        }
        Ok(BoxDistribution { scenario, table })
    }

    /// Builds the table from `f(a⃗, x⃗)`.
    pub fn from_fn(scenario: BellScenario, f: impl Fn(&[usize], &[usize]) -> f64) -> Result<Self> {
        let cols = scenario.outcomes_count();
        let mut table = Vec::with_capacity(scenario.settings_count() * cols);
        for xi in 0..scenario.settings_count() {
            let x = scenario.decode_settings(xi);
            for ai in 0..cols {
                table.push(f(&scenario.decode_outcomes(ai), &x));
            }
        }
        Self::new(scenario, table)
    }

    pub fn uniform(scenario: BellScenario) -> Self {
        let cols = scenario.outcomes_count();
        let table = vec![1.0 / cols as f64; scenario.settings_count() * cols];
        BoxDistribution { scenario, table }
    }

    /// Local deterministic box: party `i` answers `f(i, x_i)`.
    pub fn deterministic(
        scenario: BellScenario,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        Self::from_fn(scenario, |a, x| {
            let hit = a
                .iter()
                .zip(x)
                .enumerate()
                .all(|(i, (&ai, &xi))| f(i, xi) == ai);
            if hit {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn scenario(&self) -> &BellScenario {
        &self.scenario
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn prob(&self, a: &[usize], x: &[usize]) -> Result<f64> {
        self.scenario.check_tuple(a, x)?;
        Ok(self.at(a, x))
    }

    fn at(&self, a: &[usize], x: &[usize]) -> f64 {
        let s = &self.scenario;
        self.table[s.encode_settings(x) * s.outcomes_count() + s.encode_outcomes(a)]
    }

    fn row(&self, xi: usize) -> &[f64] {
        let cols = self.scenario.outcomes_count();
        &self.table[xi * cols..(xi + 1) * cols]
    }

    /// Draws an outcome tuple for settings `x`.
    pub fn sample<R: Rng>(&self, x: &[usize], rng: &mut R) -> Vec<usize> {
        let row = self.row(self.scenario.encode_settings(x));
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last = 0;
        for (ai, &p) in row.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            acc += p;
            last = ai;
            if u < acc {
                break;
            }
        }
        self.scenario.decode_outcomes(last)
    }

    /// Parties of `self` followed by parties of `other`, independent.
    pub fn product(&self, other: &BoxDistribution) -> Result<Self> {
        if self.scenario.outcomes != other.scenario.outcomes {
            return param("product boxes must share the outcome alphabet");
        }
        let n1 = self.scenario.parties();
        let mut settings = self.scenario.settings.clone();
        settings.extend_from_slice(&other.scenario.settings);
        let s = BellScenario::new(settings, self.scenario.outcomes)?;
        Self::from_fn(s, |a, x| {
            self.at(&a[..n1], &x[..n1]) * other.at(&a[n1..], &x[n1..])
        })
    }

    pub fn to_json(&self) -> BoxJson {
        let s = &self.scenario;
        let settings = if s.settings.iter().all(|&m| m == s.settings[0]) {
            SettingsJson::Same(s.settings[0])
        } else {
            SettingsJson::PerParty(s.settings.clone())
        };
        let mut table = BTreeMap::new();
        for xi in 0..s.settings_count() {
            let row: BTreeMap<String, f64> = self
                .row(xi)
                .iter()
                .enumerate()
                .map(|(ai, &p)| (join(&s.decode_outcomes(ai)), p))
                .collect();
            table.insert(join(&s.decode_settings(xi)), row);
        }
        BoxJson {
            parties: s.parties(),
            settings,
            outcomes: s.outcomes,
            table,
        }
    }

    /// Missing outcome entries count as 0; every settings tuple must appear.
    pub fn from_json(j: &BoxJson) -> Result<Self> {
        let settings = match &j.settings {
            SettingsJson::Same(m) => vec![*m; j.parties],
            SettingsJson::PerParty(v) => {
                if v.len() != j.parties {
                    return Err(Error::Input(format!(
                        "settings: {} entries for {} parties",
                        v.len(),
                        j.parties
                    )));
                }
                v.clone()
            }
        };
        let s = BellScenario::new(settings, j.outcomes).map_err(|e| Error::Input(e.to_string()))?;
        let cols = s.outcomes_count();
        let mut table = vec![0.0; s.settings_count() * cols];
        let mut seen = vec![false; s.settings_count()];
        for (xk, row) in &j.table {
            let x = parse_key(xk, &s.settings)
                .map_err(|m| Error::Input(format!("table[\"{xk}\"]: {m}")))?;
            let xi = s.encode_settings(&x);
            if std::mem::replace(&mut seen[xi], true) {
                return Err(Error::Input(format!("table[\"{xk}\"]: duplicate settings")));
            }
            for (ak, &p) in row {
                let a = parse_key(ak, &vec![s.outcomes; s.parties()])
                    .map_err(|m| Error::Input(format!("table[\"{xk}\"][\"{ak}\"]: {m}")))?;
                table[xi * cols + s.encode_outcomes(&a)] += p;
            }
        }
        if let Some(xi) = seen.iter().position(|&b| !b) {
            return Err(Error::Input(format!(
                "table: settings \"{}\" missing",
                join(&s.decode_settings(xi))
            )));
        }
        Self::new(s, table).map_err(|e| Error::Input(e.to_string()))
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_key(key: &str, radix: &[usize]) -> std::result::Result<Vec<usize>, String> {
    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
    if parts.len() != radix.len() {
        return Err(format!("expected {} comma-separated integers", radix.len()));
    }
    parts
        .iter()
        .zip(radix)
        .map(|(p, &r)| match p.parse::<usize>() {
            Ok(v) if v < r => Ok(v),
            Ok(v) => Err(format!("{v} is out of range (< {r})")),
            Err(_) => Err(format!("\"{p}\" is not a nonnegative integer")),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SettingsJson {
    Same(usize),
    PerParty(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxJson {
    pub parties: usize,
    pub settings: SettingsJson,
    pub outcomes: usize,
    pub table: BTreeMap<String, BTreeMap<String, f64>>,
}

/// Settings pair showing that the marginal of `parties` moves when only the
/// other parties change their settings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignalingWitness {
    pub parties: Vec<usize>,
    pub settings: Vec<usize>,
    pub reference_settings: Vec<usize>,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignalingVerdict {
    pub nosignaling: bool,
    pub max_deviation: f64,
    pub offending: Option<SignalingWitness>,
}

/// Checks the marginal of every proper subset of parties.
pub fn is_nosignaling(b: &BoxDistribution, tol: f64) -> SignalingVerdict {
    let s = &b.scenario;
    let n = s.parties();
    let mut worst: Option<SignalingWitness> = None;
    for mask in 1usize..(1 << n) - 1 {
        let inside: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        for xi in 0..s.settings_count() {
            let x = s.decode_settings(xi);
            let mut reference = x.clone();
            for i in (0..n).filter(|i| mask >> i & 1 == 0) {
                reference[i] = 0;
            }
            if reference == x {
                continue;
            }
            let m1 = marginal(b, &inside, &x);
            let m2 = marginal(b, &inside, &reference);
            let dev = m1
                .iter()
                .zip(&m2)
                .map(|(p, q)| (p - q).abs())
                .fold(0.0, f64::max);
            if worst.as_ref().is_none_or(|w| dev > w.deviation) {
                worst = Some(SignalingWitness {
                    parties: inside.clone(),
                    settings: x,
                    reference_settings: reference,
                    deviation: dev,
                });
            }
        }
    }
    let max_deviation = worst.as_ref().map_or(0.0, |w| w.deviation);
    let nosignaling = max_deviation <= tol;
    SignalingVerdict {
        nosignaling,
        max_deviation,
        offending: worst.filter(|_| !nosignaling),
    }
}

fn marginal(b: &BoxDistribution, parties: &[usize], x: &[usize]) -> Vec<f64> {
    let s = &b.scenario;
    let o = s.outcomes;
    let mut out = vec![0.0; o.pow(parties.len() as u32)];
    for (ai, &p) in b.row(s.encode_settings(x)).iter().enumerate() {
        let a = s.decode_outcomes(ai);
        let k = parties.iter().fold(0, |acc, &i| acc * o + a[i]);
        out[k] += p;
    }
    out
}

/// Linear functional `Σ coeff(a⃗,x⃗) p(a⃗|x⃗)` separating a box from the local set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BellFunctional {
    /// Indexed like the box table.
    pub coefficients: Vec<f64>,
    /// Maximum over deterministic strategies.
    pub local_bound: f64,
    pub value: f64,
}

/// One deterministic strategy of a local model: `responses[i][x_i]` is party
/// `i`'s answer.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalComponent {
    pub responses: Vec<Vec<usize>>,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalityVerdict {
    pub local: bool,
    /// L1 distance from the box to the local polytope (as the LP measures it).
    pub distance: f64,
    pub model: Option<Vec<LocalComponent>>,
    pub certificate: Option<BellFunctional>,
}

fn strategy_count(s: &BellScenario) -> f64 {
    s.settings
        .iter()
        .map(|&m| (s.outcomes as f64).powi(m as i32))
        .product()
}

fn decode_strategy(s: &BellScenario, mut idx: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); s.parties()];
    for i in (0..s.parties()).rev() {
        let mut r = vec![0; s.settings[i]];
        for x in (0..s.settings[i]).rev() {
            r[x] = idx % s.outcomes;
            idx /= s.outcomes;
        }
        out[i] = r;
    }
    out
}

/// Table column hit by a deterministic strategy under settings `x`.
fn strategy_outcome(s: &BellScenario, strat: &[Vec<usize>], x: &[usize]) -> usize {
    let a: Vec<usize> = strat.iter().zip(x).map(|(r, &xi)| r[xi]).collect();
    s.encode_outcomes(&a)
}

/// Membership in the local polytope by an L1-projection LP over the
/// deterministic strategies. Nonlocal boxes come with the LP dual as a Bell
/// functional, re-evaluated exactly on every strategy.
pub fn is_local(b: &BoxDistribution, tol: f64) -> Result<LocalityVerdict> {
    let s = &b.scenario;
    let count = strategy_count(s);
    if count > STRATEGY_LIMIT as f64 {
        return Err(Error::UnsupportedSize(format!(
            "{count} deterministic strategies exceed {STRATEGY_LIMIT}"
        )));
    }
    let strategies = count as usize;
    let r = b.table.len();
    if strategies * r > LOCAL_LP_LIMIT {
        return Err(Error::UnsupportedSize(format!(
            "locality LP with {strategies} strategies and {r} rows is too large"
        )));
    }
    let cols = s.outcomes_count();
    let width = strategies + 2 * r;
    let mut obj = vec![0.0; strategies];
    obj.extend(std::iter::repeat_n(1.0, 2 * r));
    let mut lp = LinearProgram::minimize(obj);
    let mut rows = vec![vec![0.0; width]; r];
    for lam in 0..strategies {
        let strat = decode_strategy(s, lam);
        for xi in 0..s.settings_count() {
            let x = s.decode_settings(xi);
            rows[xi * cols + strategy_outcome(s, &strat, &x)][lam] = 1.0;
        }
    }
    for (i, mut row) in rows.into_iter().enumerate() {
        row[strategies + i] = 1.0;
        row[strategies + r + i] = -1.0;
        lp.add_row(row, Sense::Eq, b.table[i]);
    }
    let mut norm = vec![1.0; strategies];
    norm.extend(std::iter::repeat_n(0.0, 2 * r));
    lp.add_row(norm, Sense::Eq, 1.0);
    let sol = lp_solve(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Precondition(format!(
            "locality LP ended {:?}",
            sol.status
        )));
    }
    let distance = sol.objective.max(0.0);
    if distance <= tol {
        let model = (0..strategies)
            .filter(|&l| sol.x[l] > 1e-12)
            .map(|l| LocalComponent {
                responses: decode_strategy(s, l),
                weight: sol.x[l],
            })
            .collect();
        return Ok(LocalityVerdict {
            local: true,
            distance,
            model: Some(model),
            certificate: None,
        });
    }
    let coefficients: Vec<f64> = sol.duals[..r].to_vec();
    let local_bound = (0..strategies)
        .map(|lam| {
            let strat = decode_strategy(s, lam);
            (0..s.settings_count())
                .map(|xi| {
                    coefficients[xi * cols + strategy_outcome(s, &strat, &s.decode_settings(xi))]
                })
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let value = coefficients.iter().zip(&b.table).map(|(y, p)| y * p).sum();
    Ok(LocalityVerdict {
        local: false,
        distance,
        model: None,
        certificate: Some(BellFunctional {
            coefficients,
            local_bound,
            value,
        }),
    })
}

fn sign(a: usize) -> f64 {
    if a == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `E00 + E01 + E10 − E11` on a (2,2,2) box; local bound 2.
pub fn chsh_value(b: &BoxDistribution) -> Result<f64> {
    if !b.scenario.is(&[2, 2], 2) {
        return param("CHSH needs the (2,2,2) scenario");
    }
    let corr = |x: usize, y: usize| -> f64 {
        let mut e = 0.0;
        for a in 0..2 {
            for bb in 0..2 {
                e += sign(a) * sign(bb) * b.at(&[a, bb], &[x, y]);
            }
        }
        e
    };
    Ok(corr(0, 0) + corr(0, 1) + corr(1, 0) - corr(1, 1))
}

/// `p(000|000) + p(110|011) + p(011|101) + p(101|110)` on a (3,2,2) box.
pub fn gyni_value(b: &BoxDistribution) -> Result<f64> {
    if !b.scenario.is(&[2, 2, 2], 2) {
        return param("GYNI needs the (3,2,2) scenario");
    }
    Ok(b.at(&[0, 0, 0], &[0, 0, 0])
        + b.at(&[1, 1, 0], &[0, 1, 1])
        + b.at(&[0, 1, 1], &[1, 0, 1])
        + b.at(&[1, 0, 1], &[1, 1, 0]))
}

/// `E·PR_d + (1−E)·uniform`, where `PR_d(ab|xy) = 1/d` iff `b − a ≡ xy (mod d)`.
/// Alice has `d` settings and Bob 2; both have `d` outcomes.
pub fn pr_box(d: usize, e: f64) -> Result<BoxDistribution> {
    if d < 2 {
        return param("PR_d needs d >= 2");
    }
    if !(0.0..=1.0).contains(&e) {
        return param(format!("noise parameter E = {e} is outside [0, 1]"));
    }
    let s = BellScenario::new(vec![d, 2], d)?;
    let df = d as f64;
    BoxDistribution::from_fn(s, |a, x| {
        let hit = (a[1] + d - a[0]) % d == (x[0] * x[1]) % d;
        e * if hit { 1.0 / df } else { 0.0 } + (1.0 - e) / (df * df)
    })
}

/// Two-party box of a state measured with ±1 observables.
pub fn quantum_box(rho: &CMat, alice: &[CMat], bob: &[CMat]) -> Result<BoxDistribution> {
    if alice.is_empty() || bob.is_empty() {
        return param("each party needs at least one observable");
    }
    let s = BellScenario::new(vec![alice.len(), bob.len()], 2)?;
    let mut table = Vec::with_capacity(s.settings_count() * 4);
    for xa in alice {
        for yb in bob {
            for a in 0..2 {
                for bb in 0..2 {
                    let p = spectral(xa, a)
                        .tensor(&spectral(yb, bb))
                        .expectation(rho)?
                        .re;
                    table.push(p.max(0.0));
                }
            }
        }
    }
    BoxDistribution::new(s, table)
}

/// The singlet with the CHSH-optimal settings.
pub fn singlet_chsh_box() -> BoxDistribution {
    let (a, b) = singlet_chsh_settings();
    quantum_box(&singlet_state(), &a, &b).expect("two-qubit observables")
}

/// Event `(a⃗|x⃗)` of a Bell scenario.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BellEvent {
    pub outcomes: Vec<usize>,
    pub settings: Vec<usize>,
}

impl BellEvent {
    /// Parses `"0110|0011"`: one digit per party.
    pub fn parse(text: &str) -> Result<Self> {
        let (a, x) = text
            .split_once('|')
            .ok_or_else(|| Error::Parameter(format!("event \"{text}\" lacks '|'")))?;
        let digits = |t: &str| -> Result<Vec<usize>> {
            t.chars()
                .map(|ch| {
                    ch.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parameter(format!("bad digit in \"{text}\"")))
                })
                .collect()
        };
        let (outcomes, settings) = (digits(a)?, digits(x)?);
        if outcomes.len() != settings.len() {
            return param(format!(
                "event \"{text}\": outcome and setting strings differ in length"
            ));
        }
        Ok(BellEvent { outcomes, settings })
    }

    /// Some party measures the same setting and sees different outcomes.
    pub fn locally_orthogonal(&self, other: &BellEvent) -> bool {
        (0..self.settings.len().min(other.settings.len()))
            .any(|i| self.settings[i] == other.settings[i] && self.outcomes[i] != other.outcomes[i])
    }

    pub fn label(&self) -> String {
        let s = |v: &[usize]| v.iter().map(|d| d.to_string()).collect::<String>();
        format!("{}|{}", s(&self.outcomes), s(&self.settings))
    }
}

/// The five four-party events of the two-copy PR activation.
pub const LO_EVENTS: [&str; 5] = [
    "0000|0000",
    "1110|0011",
    "0011|0110",
    "1101|1011",
    "0111|1101",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoReport {
    pub value: f64,
    pub events: Vec<String>,
    pub probabilities: Vec<f64>,
    pub pairwise_orthogonal: bool,
}

/// Evaluates the LO sum on two independent copies of a (2,2,2) box, parties
/// 1,2 holding the first copy and 3,4 the second.
pub fn local_orthogonality_two_copies(b: &BoxDistribution) -> Result<LoReport> {
    if !b.scenario.is(&[2, 2], 2) {
        return param("the two-copy LO test needs a (2,2,2) box");
    }
    let four = b.product(b)?;
    let events: Vec<BellEvent> = LO_EVENTS
        .iter()
        .map(|t| BellEvent::parse(t))
        .collect::<Result<_>>()?;
    let pairwise_orthogonal = events
        .iter()
        .enumerate()
        .all(|(i, e)| events[i + 1..].iter().all(|f| e.locally_orthogonal(f)));
    let probabilities: Vec<f64> = events
        .iter()
        .map(|e| four.prob(&e.outcomes, &e.settings))
        .collect::<Result<_>>()?;
    Ok(LoReport {
        value: probabilities.iter().sum(),
        events: events.iter().map(BellEvent::label).collect(),
        probabilities,
        pairwise_orthogonal,
    })
}

pub fn local_orthogonality_two_pr() -> LoReport {
    local_orthogonality_two_copies(&pr_box(2, 1.0).expect("valid PR box")).expect("(2,2,2) box")
}

/// Result of a seeded protocol simulation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolResult {
    /// Empirical frequency of a correct guess.
    pub success: f64,
    /// Success probability from the exact joint distribution.
    pub exact_success: f64,
    /// `Σ_k I(a_k : guess | k)` in bits, exact.
    pub mutual_information: f64,
    /// Message length in bits.
    pub message_length: usize,
    pub trials: usize,
    pub seed: u64,
}

/// Mutual information in bits of a joint table `p[u][v]`.
pub fn mutual_information_bits(joint: &[Vec<f64>]) -> f64 {
    let total: f64 = joint.iter().flatten().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let cols = joint.first().map_or(0, Vec::len);
    let pu: Vec<f64> = joint
        .iter()
        .map(|r| r.iter().sum::<f64>() / total)
        .collect();
    let pv: Vec<f64> = (0..cols)
        .map(|j| joint.iter().map(|r| r[j]).sum::<f64>() / total)
        .collect();
    let mut info = 0.0;
    for (i, row) in joint.iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            let p = p / total;
            if p > 0.0 {
                info += p * (p / (pu[i] * pv[j])).log2();
            }
        }
    }
    info.max(0.0)
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64))
}

/// van Dam's one-bit protocol on a (2,2,2) box: Alice holds `(a₀, a₁)`,
/// inputs `a₀ ⊕ a₁`, sends `a₀ ⊕ A`; Bob inputs `k` and guesses `B ⊕ m`.
pub fn van_dam_ic(b: &BoxDistribution, seed: u64, trials: usize) -> Result<ProtocolResult> {
    if !b.scenario.is(&[2, 2], 2) {
        return param("van Dam's protocol needs a (2,2,2) box");
    }
    if trials == 0 {
        return param("trials must be at least 1");
    }
    // joint[k][a_k][guess]
    let mut joint = [[[0.0f64; 2]; 2]; 2];
    for k in 0..2 {
        for a0 in 0..2 {
            for a1 in 0..2 {
                let x = a0 ^ a1;
                for ao in 0..2 {
                    for bo in 0..2 {
                        let g = bo ^ a0 ^ ao;
                        let target = if k == 0 { a0 } else { a1 };
                        joint[k][target][g] += 0.25 * b.at(&[ao, bo], &[x, k]);
                    }
                }
            }
        }
    }
    let mutual_information = joint
        .iter()
        .map(|t| mutual_information_bits(&t.iter().map(|r| r.to_vec()).collect::<Vec<_>>()))
        .sum();
    let exact_success = 0.5 * joint.iter().map(|t| t[0][0] + t[1][1]).sum::<f64>();
    let mut hits = 0usize;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let (a0, a1, k) = (
            rng.random_range(0..2),
            rng.random_range(0..2),
            rng.random_range(0..2usize),
        );
        let out = b.sample(&[a0 ^ a1, k], &mut rng);
        let m = a0 ^ out[0];
        let g = out[1] ^ m;
        hits += usize::from(g == if k == 0 { a0 } else { a1 });
    }
    Ok(ProtocolResult {
        success: hits as f64 / trials as f64,
        exact_success,
        mutual_information,
        message_length: 1,
        trials,
        seed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NestedIcResult {
    pub d: usize,
    pub e: f64,
    pub levels: usize,
    /// Exact success probability from propagating the box errors.
    pub success: f64,
    /// `((d−1)Eⁿ + 1)/d`.
    pub closed_form: f64,
    /// `2E² > 1`, the binary violation condition for large `n`.
    pub violation_condition: bool,
}

/// Distribution of `(B − A − xy) mod d` for a (2,[d,2],d) box, averaged over
/// uniform inputs.
fn box_error_distribution(b: &BoxDistribution, d: usize) -> Vec<f64> {
    let mut err = vec![0.0; d];
    for x in 0..d {
        for y in 0..2 {
            for a in 0..d {
                for bo in 0..d {
                    let e = (bo + 2 * d - a - (x * y) % d) % d;
                    err[e] += b.at(&[a, bo], &[x, y]) / (2 * d) as f64;
                }
            }
        }
    }
    err
}

/// Nested d-ary protocol over `levels` layers of PR_d(E) boxes. Bob's guess
/// is right iff the errors of the boxes on his path sum to 0 mod d; those
/// errors are independent, so the success probability is the weight at 0 of
/// their cyclic convolution.
pub fn nested_ic(d: usize, e: f64, levels: usize) -> Result<NestedIcResult> {
    if levels == 0 {
        return param("the nested protocol needs at least one level");
    }
    let b = pr_box(d, e)?;
    let err = box_error_distribution(&b, d);
    let mut acc = vec![0.0; d];
    acc[0] = 1.0;
    for _ in 0..levels {
        let mut next = vec![0.0; d];
        for (i, &p) in acc.iter().enumerate() {
            for (j, &q) in err.iter().enumerate() {
                next[(i + j) % d] += p * q;
            }
        }
        acc = next;
    }
    let df = d as f64;
    Ok(NestedIcResult {
        d,
        e,
        levels,
        success: acc[0],
        closed_form: ((df - 1.0) * e.powi(levels as i32) + 1.0) / df,
        violation_condition: 2.0 * e * e > 1.0,
    })
}

/// Monte-Carlo run of the nested protocol with sampled boxes: Alice holds
/// `2^levels` dits, Bob an index. Returns the empirical success frequency.
pub fn nested_ic_simulate(
    d: usize,
    e: f64,
    levels: usize,
    seed: u64,
    trials: usize,
) -> Result<f64> {
    if levels == 0 || levels > 16 {
        return param("levels must be in 1..=16");
    }
    if trials == 0 {
        return param("trials must be at least 1");
    }
    let b = pr_box(d, e)?;
    let mut hits = 0usize;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let data: Vec<usize> = (0..1usize << levels)
            .map(|_| rng.random_range(0..d))
            .collect();
        let k = rng.random_range(0..1usize << levels);
        // Alice folds pairs level by level; Bob keeps his output on his path.
        let mut layer = data.clone();
        let mut bob = Vec::with_capacity(levels);
        for l in 1..=levels {
            let y = (k >> (l - 1)) & 1;
            let path = k >> l;
            let mut next = Vec::with_capacity(layer.len() / 2);
            for j in 0..layer.len() / 2 {
                let x = (layer[2 * j + 1] + d - layer[2 * j]) % d;
                let out = b.sample(&[x, y], &mut rng);
                next.push((out[0] + d - layer[2 * j]) % d);
                if j == path {
                    bob.push(out[1]);
                }
            }
            layer = next;
        }
        let mut guess = layer[0];
        for l in (1..=levels).rev() {
            guess = (bob[l - 1] + d - guess) % d;
        }
        hits += usize::from(guess == data[k]);
    }
    Ok(hits as f64 / trials as f64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IpOutcome {
    pub result: u8,
    pub bits_communicated: usize,
}

/// Inner product mod 2 with one bit of communication: box `i` gets inputs
/// `x_i, y_i`; Alice sends the parity of her outputs.
pub fn ip_one_bit_protocol(x: &[u8], y: &[u8], seed: u64) -> Result<IpOutcome> {
    if x.len() != y.len() {
        return param("x and y must have the same length");
    }
    if x.iter().chain(y).any(|&v| v > 1) {
        return param("x and y must be bit strings");
    }
    let pr = pr_box(2, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut alice, mut bob) = (0usize, 0usize);
    for (&xi, &yi) in x.iter().zip(y) {
        let out = pr.sample(&[xi as usize, yi as usize], &mut rng);
        alice ^= out[0];
        bob ^= out[1];
    }
    Ok(IpOutcome {
        result: (alice ^ bob) as u8,
        bits_communicated: 1,
    })
}

/// Bits of `s`, most significant first: "1011" → [1,0,1,1].
pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|ch| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => param(format!("\"{s}\" is not a bit string")),
        })
        .collect()
}
