//! Reading inputs: JSON files, family flags and built-in instances.

use std::fmt;
use std::path::{Path, PathBuf};

use ctxgraph::boxes::{pr_box, singlet_chsh_box, BoxDistribution, BoxJson};
use ctxgraph::kscolor::{
    ks10_vectors, ks8_vectors, mermin_star, p33_table_subset, p33_vectors, peres_mermin_square,
    OperatorProofJson, OperatorProofSpec, VectorSystem, VectorSystemJson,
};
use ctxgraph::scenarios::{
    kcbs_extremal_model, specker_triangle, EmpiricalModel, EmpiricalModelJson,
};
use ctxgraph::{Error, Graph, GraphFamilySpec, GraphJson};
use serde::de::DeserializeOwned;

use crate::{
    AssignmentArgs, BoxArgs, BoxFamily, GraphArgs, GraphFamily, KsFamily, ProofFamily,
    ScenarioFamily, SourceArgs,
};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input. Exit status 2.
    Input(String),
    /// The computation itself failed. Exit status 1.
    Compute(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Compute(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_)
            | Error::UnsupportedSize(_)
            | Error::DuplicateRay(..)
            | Error::Input(_) => CliError::Input(e.to_string()),
            Error::Precondition(_)
            | Error::DegeneratePivotLimit { .. }
            | Error::SdpNoConvergence { .. } => CliError::Compute(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn input_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Input(msg.into()))
}

/// Parses a JSON file; parse errors carry the file name, line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Wraps library input errors with the file they came from.
fn in_file<T>(path: &Path, r: ctxgraph::Result<T>) -> CliResult<T> {
    r.map_err(|e| match CliError::from(e) {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn one_path(file: &Option<PathBuf>, input: &Option<PathBuf>) -> Option<PathBuf> {
    file.clone().or_else(|| input.clone())
}

fn need(v: Option<usize>, flag: &str, family: &str) -> CliResult<usize> {
    v.ok_or_else(|| CliError::Input(format!("--family {family} needs {flag}")))
}

pub fn family_spec(
    family: GraphFamily,
    n: Option<usize>,
    offsets: &[usize],
    k: Option<usize>,
    q: Option<usize>,
    s: Option<usize>,
) -> CliResult<GraphFamilySpec> {
    use GraphFamily::*;
    Ok(match family {
        Cycle => GraphFamilySpec::Cycle {
            n: need(n, "--n", "cycle")?,
        },
        Path => GraphFamilySpec::Path {
            n: need(n, "--n", "path")?,
        },
        Complete => GraphFamilySpec::Complete {
            n: need(n, "--n", "complete")?,
        },
        Prism => GraphFamilySpec::Prism {
            n: need(n, "--n", "prism")?,
        },
        Moebius => GraphFamilySpec::Moebius {
            n: need(n, "--n", "moebius")?,
        },
        Circulant => {
            if offsets.is_empty() {
                return input_err("--family circulant needs --offsets");
            }
            GraphFamilySpec::Circulant {
                n: need(n, "--n", "circulant")?,
                offsets: offsets.to_vec(),
            }
        }
        Johnson => GraphFamilySpec::Johnson {
            n: need(n, "--n", "johnson")?,
            k: need(k, "--k", "johnson")?,
        },
        JohnsonGqs => GraphFamilySpec::JohnsonGqs {
            q: need(q, "--q", "johnson-gqs")?,
            s: need(s, "--s", "johnson-gqs")?,
        },
    })
}

/// The graph and a display name.
pub fn graph(args: &GraphArgs) -> CliResult<(String, Graph)> {
    if let Some(path) = one_path(&args.file, &args.input) {
        let doc: GraphJson = read_json(&path)?;
        let g = in_file(&path, Graph::from_json(&doc))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        return Ok((name, g));
    }
    let Some(family) = args.family else {
        return input_err("give a graph file, --input or --family");
    };
    let spec = family_spec(family, args.n, &args.offsets, args.k, args.q, args.s)?;
    Ok((spec.name(), spec.build()?))
}

pub fn assignment(args: &AssignmentArgs, n: usize) -> CliResult<Vec<f64>> {
    let p = if let Some(p) = &args.p {
        p.clone()
    } else if let Some(path) = &args.p_file {
        read_json::<Vec<f64>>(path)?
    } else if let Some(c) = args.constant {
        vec![c; n]
    } else {
        return input_err("give --p, --p-file or --constant");
    };
    if p.len() != n {
        return input_err(format!(
            "assignment has {} entries for {n} vertices",
            p.len()
        ));
    }
    if let Some(i) = p.iter().position(|x| !x.is_finite()) {
        return input_err(format!("assignment entry {i} is not finite"));
    }
    Ok(p)
}

fn source_path<F: clap::ValueEnum + Clone + Send + Sync + 'static>(
    s: &SourceArgs<F>,
) -> Option<PathBuf> {
    one_path(&s.file, &s.input)
}

pub fn vectors(s: &SourceArgs<KsFamily>) -> CliResult<VectorSystem> {
    if let Some(path) = source_path(s) {
        let doc: VectorSystemJson = read_json(&path)?;
        return in_file(&path, VectorSystem::from_json(&doc));
    }
    Ok(match s.family {
        Some(KsFamily::P33) => p33_vectors(),
        Some(KsFamily::P33Table) => p33_table_subset()?,
        Some(KsFamily::Ks8) => ks8_vectors(),
        Some(KsFamily::Ks10) => ks10_vectors(),
        None => return input_err("give a vector-system file, --input or --family"),
    })
}

pub fn proof(s: &SourceArgs<ProofFamily>) -> CliResult<OperatorProofSpec> {
    if let Some(path) = source_path(s) {
        let doc: OperatorProofJson = read_json(&path)?;
        return in_file(&path, OperatorProofSpec::from_json(&doc));
    }
    Ok(match s.family {
        Some(ProofFamily::PeresMermin) => peres_mermin_square(),
        Some(ProofFamily::MerminStar) => mermin_star(),
        None => return input_err("give an operator-proof file, --input or --family"),
    })
}

pub fn model(s: &SourceArgs<ScenarioFamily>) -> CliResult<EmpiricalModel> {
    if let Some(path) = source_path(s) {
        let doc: EmpiricalModelJson = read_json(&path)?;
        return in_file(&path, EmpiricalModel::from_json(&doc));
    }
    Ok(match s.family {
        Some(ScenarioFamily::Specker) => specker_triangle(),
        Some(ScenarioFamily::Kcbs) => kcbs_extremal_model(),
        None => return input_err("give a model file, --input or --family"),
    })
}

/// The box from a file or `--family`; without either, the PR box when
/// `default_pr` is set.
pub fn bell_box(a: &BoxArgs, default_pr: bool) -> CliResult<BoxDistribution> {
    if let Some(path) = source_path(&a.source) {
        let doc: BoxJson = read_json(&path)?;
        return in_file(&path, BoxDistribution::from_json(&doc));
    }
    match a.source.family {
        Some(BoxFamily::Pr) => Ok(pr_box(a.d, a.strength)?),
        Some(BoxFamily::Singlet) => Ok(singlet_chsh_box()),
        None if default_pr => Ok(pr_box(a.d, a.strength)?),
        None => input_err("give a box file, --input or --family"),
    }
}

/// `5,7,9` or `4-12` or a mix.
pub fn size_list(text: &str) -> CliResult<Vec<usize>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Input(format!("--n: {t:?} is not a size")))
        };
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return input_err(format!("--n: empty range {part}"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return input_err("--n: no sizes given");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(size_list("5,7,9").unwrap(), vec![5, 7, 9]);
        assert_eq!(size_list("4-6, 9").unwrap(), vec![4, 5, 6, 9]);
        assert!(size_list("6-4").is_err());
        assert!(size_list("x").is_err());
        assert!(size_list("").is_err());
    }

    #[test]
    fn error_classes() {
        assert_eq!(CliError::from(Error::Input("x".into())).code(), 2);
        assert_eq!(CliError::from(Error::UnsupportedSize("x".into())).code(), 2);
        let e = Error::SdpNoConvergence {
            iterations: 1,
            lower: 0.0,
            upper: 1.0,
        };
        assert_eq!(CliError::from(e).code(), 1);
    }
}
