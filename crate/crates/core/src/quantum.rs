//! Explicit quantum realizations: orthonormal representations, n-cycle
//! states and observables, singlet CHSH and a qubit hidden-variable model.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::graph::Graph;
use crate::numkernel::{c, eig_sym, inner, CMat, Mat, C64};
use crate::scenarios::{
    evaluate_inequality, inequality_exclusivity_graph, ncycle_inequality, EmpiricalModel,
    Inequality, Scenario,
};

/// Handle ψ and one unit vector per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthoRep {
    psi: Vec<C64>,
    vectors: Vec<Vec<C64>>,
}

fn norm(v: &[C64]) -> f64 {
    inner(v, v).re.sqrt()
}

impl OrthoRep {
    pub fn new(psi: Vec<C64>, vectors: Vec<Vec<C64>>) -> Result<Self> {
        let d = psi.len();
        if d == 0 {
            return param("handle vector is empty");
        }
        if (norm(&psi) - 1.0).abs() > 1e-9 {
            return param("handle vector is not unit");
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != d {
                return param(format!(
                    "vector {i} has dimension {}, handle has {d}",
                    v.len()
                ));
            }
            if (norm(v) - 1.0).abs() > 1e-9 {
                return param(format!("vector {i} is not unit"));
            }
        }
        Ok(OrthoRep { psi, vectors })
    }

    pub fn from_real(psi: &[f64], vectors: &[Vec<f64>]) -> Result<Self> {
        let lift = |v: &[f64]| v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>();
        OrthoRep::new(lift(psi), vectors.iter().map(|v| lift(v)).collect())
    }

    pub fn psi(&self) -> &[C64] {
        &self.psi
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.psi.len()
    }

    pub fn to_json(&self) -> OrthoRepJson {
        let complex = self
            .psi
            .iter()
            .chain(self.vectors.iter().flatten())
            .any(|z| z.im != 0.0);
        let enc = |v: &[C64]| {
            v.iter()
                .map(|z| {
                    if complex {
                        Entry::Complex([z.re, z.im])
                    } else {
                        Entry::Real(z.re)
                    }
                })
                .collect()
        };
        OrthoRepJson {
            psi: enc(&self.psi),
            vectors: self.vectors.iter().map(|v| enc(v)).collect(),
            complex,
        }
    }

    pub fn from_json(doc: &OrthoRepJson) -> Result<Self> {
        let dec = |v: &[Entry]| -> Result<Vec<C64>> {
            v.iter()
                .map(|e| match *e {
                    Entry::Real(x) => Ok(c(x, 0.0)),
                    Entry::Complex([re, im]) if doc.complex => Ok(c(re, im)),
                    Entry::Complex(_) => Err(Error::Input(
                        "complex entry in a representation marked real".into(),
                    )),
                })
                .collect()
        };
        OrthoRep::new(
            dec(&doc.psi)?,
            doc.vectors
                .iter()
                .map(|v| dec(v))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn to_c64(self) -> C64 {
        match self {
            Entry::Real(x) => c(x, 0.0),
            Entry::Complex([re, im]) => c(re, im),
        }
    }
}

/// Complex entries are `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthoRepJson {
    pub psi: Vec<Entry>,
    pub vectors: Vec<Vec<Entry>>,
    #[serde(default)]
    pub complex: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthoVerdict {
    pub valid: bool,
    /// Σ |⟨ψ|v_i⟩|².
    pub value: f64,
    pub max_edge_overlap: f64,
    pub worst_edge: Option<(usize, usize)>,
}

/// Adjacent vertices must carry orthogonal vectors.
pub fn verify_orthorep(g: &Graph, rep: &OrthoRep, tol: f64) -> Result<OrthoVerdict> {
    if rep.vectors.len() != g.n() {
        return param(format!(
            "{} vectors for {} vertices",
            rep.vectors.len(),
            g.n()
        ));
    }
    let value = rep
        .vectors
        .iter()
        .map(|v| inner(&rep.psi, v).norm_sqr())
        .sum();
    let mut worst = 0.0;
    let mut worst_edge = None;
    for (i, j) in g.edges() {
        let o = inner(&rep.vectors[i], &rep.vectors[j]).norm();
        if o > worst {
            worst = o;
            worst_edge = Some((i, j));
        }
    }
    Ok(OrthoVerdict {
        valid: worst <= tol,
        value,
        max_edge_overlap: worst,
        worst_edge: if worst > tol { worst_edge } else { None },
    })
}

/// KCBS representation of C5 with handle (1,0,0).
pub fn kcbs_orthorep() -> OrthoRep {
    let cp = (PI / 5.0).cos();
    let ct = (cp / (1.0 + cp)).sqrt();
    let st = (1.0 - ct * ct).sqrt();
    let vectors: Vec<Vec<f64>> = (0..5)
        .map(|i| {
            let a = 4.0 * i as f64 * PI / 5.0;
            vec![ct, st * a.cos(), st * a.sin()]
        })
        .collect();
    OrthoRep::from_real(&[1.0, 0.0, 0.0], &vectors).expect("unit vectors")
}

/// State and one projector per event.
#[derive(Clone, Debug)]
pub struct QuantumRealization {
    pub rho: CMat,
    pub projectors: Vec<CMat>,
}

impl QuantumRealization {
    pub fn new(rho: CMat, projectors: Vec<CMat>) -> Result<Self> {
        if !is_psd(&rho, 1e-9)? {
            return param("density matrix is not positive semidefinite");
        }
        if rho.trace().re > 1.0 + 1e-9 {
            return param("density matrix has trace above 1");
        }
        for (i, p) in projectors.iter().enumerate() {
            if p.dim() != rho.dim() {
                return param(format!("projector {i} has the wrong dimension"));
            }
            if !p.is_projector(1e-9) {
                return param(format!("operator {i} is not a projector"));
            }
        }
        Ok(QuantumRealization { rho, projectors })
    }

    /// Tr(ρ P_i) for every event.
    pub fn probabilities(&self) -> Vec<f64> {
        self.projectors
            .iter()
            .map(|p| p.expectation(&self.rho).expect("dimensions checked").re)
            .collect()
    }

    /// Largest entry of P_iP_j over the edges of `g`.
    pub fn max_edge_product(&self, g: &Graph) -> Result<f64> {
        if g.n() != self.projectors.len() {
            return param("graph and realization sizes differ");
        }
        let mut worst: f64 = 0.0;
        for (i, j) in g.edges() {
            worst = worst.max(self.projectors[i].mul(&self.projectors[j])?.max_abs());
        }
        Ok(worst)
    }
}

/// Hermitian PSD test through the real symmetric embedding [[A, −B], [B, A]].
fn is_psd(m: &CMat, tol: f64) -> Result<bool> {
    if !m.is_hermitian(tol) {
        return Ok(false);
    }
    let d = m.dim();
    let e = Mat::from_fn(2 * d, 2 * d, |i, j| {
        let z = m[(i % d, j % d)];
        match (i < d, j < d) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut e = e;
    e.symmetrize();
    Ok(eig_sym(&e)?.min() >= -tol)
}

/// Projector onto the eigenvalue-`a` space of a ±1 observable.
pub(crate) fn spectral(obs: &CMat, a: usize) -> CMat {
    let d = obs.dim();
    let s = if a == 0 { 0.5 } else { -0.5 };
    CMat::identity(d)
        .scale(c(0.5, 0.0))
        .add(&obs.scale(c(s, 0.0)))
        .expect("same dimension")
}

/// Everything built for one n-cycle: observables, the joint model they
/// induce, the inequality and the value reached on it.
#[derive(Clone, Debug)]
pub struct NcycleRealization {
    pub observables: Vec<CMat>,
    pub realization: QuantumRealization,
    pub model: EmpiricalModel,
    pub inequality: Inequality,
    pub value: f64,
}

/// Quantum maximum of the n-cycle inequality.
pub fn ncycle_quantum_value(n: usize) -> f64 {
    let cp = (PI / n as f64).cos();
    let nf = n as f64;
    if n % 2 == 1 {
        (3.0 * nf * cp - nf) / (1.0 + cp)
    } else {
        nf * cp
    }
}

pub fn ncycle_quantum_realization(n: usize) -> Result<NcycleRealization> {
    if n < 4 {
        return param("n-cycle realization requires n >= 4");
    }
    let nf = n as f64;
    let (rho, observables, gamma) = if n % 2 == 1 {
        let cp = (PI / nf).cos();
        let ct = (cp / (1.0 + cp)).sqrt();
        let st = (1.0 - ct * ct).sqrt();
        let obs: Vec<CMat> = (0..n)
            .map(|i| {
                let a = i as f64 * PI * (nf - 1.0) / nf;
                let v = [c(ct, 0.0), c(st * a.cos(), 0.0), c(st * a.sin(), 0.0)];
                let p = CMat::projector(&v).expect("nonzero vector");
                p.scale(c(2.0, 0.0))
                    .sub(&CMat::identity(3))
                    .expect("same dimension")
            })
            .collect();
        let psi = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        (CMat::projector(&psi)?, obs, vec![-1i8; n])
    } else {
        let h = 1.0 / 2f64.sqrt();
        let psi = [c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)];
        let id = CMat::identity(2);
        let obs: Vec<CMat> = (0..n)
            .map(|i| {
                let a = i as f64 * PI / nf;
                let x = CMat::pauli_x()
                    .scale(c(a.cos(), 0.0))
                    .add(&CMat::pauli_z().scale(c(a.sin(), 0.0)))
                    .expect("same dimension");
                if i % 2 == 1 {
                    x.tensor(&id)
                } else {
                    id.tensor(&x)
                }
            })
            .collect();
        let mut gamma = vec![-1i8; n];
        gamma[n - 1] = 1;
        (CMat::projector(&psi)?, obs, gamma)
    };
    let scenario = Scenario::ncycle(n)?;
    let tables = (0..n)
        .map(|i| {
            let (a, b) = (&observables[i], &observables[(i + 1) % n]);
            let mut t = Vec::with_capacity(4);
            for x in 0..2 {
                for y in 0..2 {
                    let p = spectral(a, x).mul(&spectral(b, y))?;
                    t.push(p.expectation(&rho)?.re.max(0.0));
                }
            }
            let s: f64 = t.iter().sum();
            Ok(t.into_iter().map(|x| x / s).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let model = EmpiricalModel::new(scenario, tables)?;
    let inequality = ncycle_inequality(&gamma)?;
    let projectors = inequality
        .terms
        .iter()
        .map(|(e, _)| {
            let (i, j) = (e.measurements[0], e.measurements[1]);
            spectral(&observables[i], e.outcomes[0]).mul(&spectral(&observables[j], e.outcomes[1]))
        })
        .collect::<Result<Vec<_>>>()?;
    let realization = QuantumRealization::new(rho, projectors)?;
    let value = evaluate_inequality(&inequality, &model)?;
    Ok(NcycleRealization {
        observables,
        realization,
        model,
        inequality,
        value,
    })
}

/// Exclusivity graph of the realized inequality (Y_n for odd n, M_2n for even n).
pub fn ncycle_realization_graph(r: &NcycleRealization) -> Result<Graph> {
    inequality_exclusivity_graph(&r.inequality)
}

/// S = E11 + E12 + E21 − E22 with E_xy = Tr(ρ A_x ⊗ B_y).
pub fn chsh_for_state(rho: &CMat, a: [&CMat; 2], b: [&CMat; 2]) -> Result<f64> {
    let e = |x: usize, y: usize| -> Result<f64> { Ok(a[x].tensor(b[y]).expectation(rho)?.re) };
    Ok(e(0, 0)? + e(0, 1)? + e(1, 0)? - e(1, 1)?)
}

pub fn singlet_state() -> CMat {
    let h = 1.0 / 2f64.sqrt();
    CMat::projector(&[c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]).expect("nonzero vector")
}

/// Bob's settings B₁ = (−σx − σz)/√2, B₂ = (σx − σz)/√2.
pub fn singlet_chsh_settings() -> ([CMat; 2], [CMat; 2]) {
    let h = 1.0 / 2f64.sqrt();
    let (x, z) = (CMat::pauli_x(), CMat::pauli_z());
    let b1 = x.add(&z).expect("2x2").scale(c(-h, 0.0));
    let b2 = x.sub(&z).expect("2x2").scale(c(h, 0.0));
    ([z, x], [b1, b2])
}

/// CHSH value of the singlet with Alice measuring σz, σx.
pub fn singlet_chsh() -> f64 {
    let (a, b) = singlet_chsh_settings();
    chsh_for_state(&singlet_state(), [&a[0], &a[1]], [&b[0], &b[1]]).expect("2-qubit dimensions")
}

/// Monte-Carlo average of the hidden-variable value
/// `v = a0 ± ‖a‖` (sign of `(m + n)·a`) over uniform `m` on the sphere.
pub fn bell_qubit_hv_expectation(
    a0: f64,
    a: [f64; 3],
    n: [f64; 3],
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return param("samples must be at least 1");
    }
    let nn = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (nn - 1.0).abs() > 1e-9 {
        return param("state direction must be a unit vector");
    }
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 {
        return Ok(a0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut plus = 0usize;
    let mut drawn = 0usize;
    while drawn < samples {
        let m: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let r = m.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r == 0.0 {
            continue;
        }
        drawn += 1;
        let dot: f64 = (0..3).map(|k| (m[k] / r + n[k]) * a[k]).sum();
        if dot >= 0.0 {
            plus += 1;
        }
    }
    let frac = plus as f64 / samples as f64;
    Ok(a0 + na * (2.0 * frac - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::lovasz_theta;
    use crate::graph::{is_isomorphic, GraphFamilySpec};

    #[test]
    fn kcbs_rep() {
        let c5 = GraphFamilySpec::Cycle { n: 5 }.build().unwrap();
        let rep = kcbs_orthorep();
        let v = verify_orthorep(&c5, &rep, 1e-9).unwrap();
        assert!(v.valid);
        assert!((v.value - 5f64.sqrt()).abs() < 1e-6);
        assert!(v.value <= lovasz_theta(&c5, None).unwrap() + 1e-5);
        // rotate one vector by 0.1 in the (y, z) plane
        let mut vs = rep.vectors().to_vec();
        let (y, z) = (vs[2][1].re, vs[2][2].re);
        let (s, co) = 0.1f64.sin_cos();
        vs[2][1] = c(co * y - s * z, 0.0);
        vs[2][2] = c(s * y + co * z, 0.0);
        let bad = OrthoRep::new(rep.psi().to_vec(), vs).unwrap();
        assert!(!verify_orthorep(&c5, &bad, 1e-6).unwrap().valid);
        assert!(verify_orthorep(
            &GraphFamilySpec::Cycle { n: 4 }.build().unwrap(),
            &rep,
            1e-6
        )
        .is_err());
    }

    #[test]
    fn standard_basis_on_complete_graph() {
        let k = GraphFamilySpec::Complete { n: 4 }.build().unwrap();
        let basis: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let rep = OrthoRep::from_real(&[1.0, 0.0, 0.0, 0.0], &basis).unwrap();
        let v = verify_orthorep(&k, &rep, 1e-12).unwrap();
        assert!(v.valid);
        assert!((v.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthorep_json() {
        let rep = kcbs_orthorep();
        let text = serde_json::to_string(&rep.to_json()).unwrap();
        let back = OrthoRep::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, rep);
        let doc: OrthoRepJson = serde_json::from_str(
            r#"{"psi":[[1,0],[0,0]],"vectors":[[[0,1],[0,0]]],"complex":true}"#,
        )
        .unwrap();
        let rep = OrthoRep::from_json(&doc).unwrap();
        assert_eq!(rep.vectors()[0][0], c(0.0, 1.0));
        assert!(OrthoRep::from_real(&[1.0, 1.0], &[]).is_err());
    }

    #[test]
    fn ncycle_values() {
        let s5 = 5f64.sqrt();
        for (n, want) in [
            (4usize, 2.0 * 2f64.sqrt()),
            (5, 4.0 * s5 - 5.0),
            (6, 3.0 * 3f64.sqrt()),
            (7, ncycle_quantum_value(7)),
            (8, ncycle_quantum_value(8)),
        ] {
            let r = ncycle_quantum_realization(n).unwrap();
            assert!((r.value - want).abs() < 1e-9, "n = {n}: {}", r.value);
            assert!(r.value > r.inequality.bound);
            let g = ncycle_realization_graph(&r).unwrap();
            assert!(r.realization.max_edge_product(&g).unwrap() <= 1e-8);
            let expect = if n % 2 == 1 {
                GraphFamilySpec::Prism { n }
            } else {
                GraphFamilySpec::Moebius { n }
            };
            assert!(is_isomorphic(&g, &expect.build().unwrap()).unwrap());
            // Σ p over events relates to S by S = 2Σp − n
            let sp: f64 = r.realization.probabilities().iter().sum();
            assert!((2.0 * sp - n as f64 - r.value).abs() < 1e-9);
        }
        assert!(ncycle_quantum_realization(3).is_err());
    }

    #[test]
    fn chsh_examples() {
        assert!((singlet_chsh() - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        let (a, _) = singlet_chsh_settings();
        // Bob measures in Alice's bases: B_y = A_y cancels to 0, swapped order gives |S| = 2
        let same = chsh_for_state(&singlet_state(), [&a[0], &a[1]], [&a[0], &a[1]]).unwrap();
        assert!(same.abs() < 1e-9);
        let aligned = chsh_for_state(&singlet_state(), [&a[0], &a[1]], [&a[1], &a[0]]).unwrap();
        assert!((aligned.abs() - 2.0).abs() < 1e-9);
        let (a, b) = singlet_chsh_settings();
        let zero = CMat::projector(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let v = chsh_for_state(&zero, [&a[0], &a[1]], [&b[0], &b[1]]).unwrap();
        assert!(v <= 2.0);
        assert!((v + 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn hv_model() {
        let samples = 200_000;
        let v =
            bell_qubit_hv_expectation(0.0, [0.0, 0.0, 1.0], [0.0, 0.0, 1.0], samples, 7).unwrap();
        assert!((v - 1.0).abs() < 1e-12); // (m + n)·n ≥ 0 always
        let v =
            bell_qubit_hv_expectation(0.0, [1.0, 0.0, 0.0], [0.0, 0.0, 1.0], samples, 7).unwrap();
        assert!(v.abs() < 3.0 / (samples as f64).sqrt() * 2.0);
        assert_eq!(
            bell_qubit_hv_expectation(0.3, [0.0; 3], [0.0, 0.0, 1.0], 10, 1).unwrap(),
            0.3
        );
        assert!(bell_qubit_hv_expectation(0.0, [1.0, 0.0, 0.0], [0.0, 0.0, 1.0], 0, 1).is_err());
        let a = bell_qubit_hv_expectation(0.0, [0.3, 0.2, 0.1], [0.0, 0.6, 0.8], 1000, 42).unwrap();
        let b = bell_qubit_hv_expectation(0.0, [0.3, 0.2, 0.1], [0.0, 0.6, 0.8], 1000, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hv_model_random_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples = 40_000;
        for trial in 0..10 {
            let a: [f64; 3] = [
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            ];
            let mut n: [f64; 3] = [
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            ];
            let r = n.iter().map(|x| x * x).sum::<f64>().sqrt();
            n.iter_mut().for_each(|x| *x /= r);
            let a0 = rng.random_range(-1.0..1.0);
            let want = a0 + (0..3).map(|k| a[k] * n[k]).sum::<f64>();
            let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            let got = bell_qubit_hv_expectation(a0, a, n, samples, trial).unwrap();
            assert!(
                (got - want).abs() <= 4.0 * na / (samples as f64).sqrt(),
                "{got} vs {want}"
            );
        }
    }

    #[test]
    fn psd_check() {
        assert!(is_psd(&singlet_state(), 1e-12).unwrap());
        assert!(!is_psd(&CMat::pauli_z(), 1e-12).unwrap());
        assert!(is_psd(&CMat::identity(2).add(&CMat::pauli_y()).unwrap(), 1e-12).unwrap());
        assert!(QuantumRealization::new(CMat::pauli_z(), vec![]).is_err());
    }
}
