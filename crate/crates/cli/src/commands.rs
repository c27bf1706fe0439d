use ctxgraph::acceptance::{run_all, run_criterion, CRITERIA};
use ctxgraph::bounds::{bounds_report, qstab_membership, stab_membership, th_membership};
use ctxgraph::boxes::{
    chsh_value, gyni_value, ip_one_bit_protocol, is_local, is_nosignaling,
    local_orthogonality_two_copies, nested_ic, nested_ic_simulate, parse_bits, van_dam_ic,
};
use ctxgraph::excl::{
    circulant10_suite, duality_suite, op_propagation_suite, plot_row, plot_rows_csv,
};
use ctxgraph::kscolor::{classify_colorability, verify_multiplicative_proof, ColoringProblem};
use ctxgraph::scenarios::{
    check_nondisturbance, evaluate_inequality, has_global_section, ncycle_inequality, Inequality,
};
use serde_json::{json, Value};

use crate::input::{self, input_err, read_json, CliError, CliResult};
use crate::output::{to_json, Output};
use crate::{
    BoxCommand, Cli, Command, GraphFamily, KsCommand, PlotCommand, ScenarioCommand, SuiteCommand,
};

const MEMBERSHIP_TOL: f64 = 1e-6;
const MODEL_TOL: f64 = 1e-9;

pub fn run(cli: &Cli) -> CliResult<Output> {
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return input_err("--tol must be a positive number");
        }
    }
    match &cli.command {
        Command::Bounds(g) => {
            let (_, g) = input::graph(g)?;
            Output::json(&bounds_report(&g)?)
        }
        Command::Membership { graph, assignment } => {
            let (_, g) = input::graph(graph)?;
            let p = input::assignment(assignment, g.n())?;
            let tol = cli.tol.unwrap_or(MEMBERSHIP_TOL);
            Output::json(&json!({
                "stab": to_json(&stab_membership(&g, &p)?)?,
                "th": to_json(&th_membership(&g, &p, tol)?)?,
                "qstab": to_json(&qstab_membership(&g, &p, tol)?)?,
            }))
        }
        Command::Duality(g) => {
            let (name, g) = input::graph(g)?;
            let mut report = duality_suite(&g)?;
            report.graph = name;
            Output::json(&report)
        }
        Command::Suite(s) => suite(s),
        Command::Ks(k) => ks(k),
        Command::Scenario(s) => scenario(s, cli.tol.unwrap_or(MODEL_TOL)),
        Command::Box(b) => bell_box(b, cli.tol.unwrap_or(MODEL_TOL)),
        Command::Plotdata(p) => plot(p),
    }
}

fn suite(s: &SuiteCommand) -> CliResult<Output> {
    match s {
        SuiteCommand::Ops { seed } => {
            let rows = op_propagation_suite(*seed)?;
            let pass = rows.iter().all(|r| r.pass);
            Ok(Output::json(&json!({"pass": pass, "rows": to_json(&rows)?}))?.failed_if(!pass))
        }
        SuiteCommand::Circulant10 => {
            let r = circulant10_suite()?;
            let pass = r.all_pass();
            let mut v = json!({"pass": pass});
            if let (Value::Object(head), Value::Object(body)) = (&mut v, to_json(&r)?) {
                head.extend(body);
            }
            Ok(Output::json(&v)?.failed_if(!pass))
        }
        SuiteCommand::Acceptance { criterion, table } => {
            let reports = match criterion {
                Some(id) if (1..=CRITERIA).contains(id) => vec![run_criterion(*id)],
                Some(id) => {
                    return input_err(format!("--criterion must lie in 1..={CRITERIA}, got {id}"))
                }
                None => run_all(),
            };
            let pass = reports.iter().all(|r| r.pass);
            let out = if *table {
                let mut text = String::new();
                for r in &reports {
                    text.push_str(&r.line());
                    text.push('\n');
                    for c in r.failed_checks() {
                        text.push_str(&format!("    failed: {}: {}\n", c.name, c.detail));
                    }
                }
                let ok = reports.iter().filter(|r| r.pass).count();
                text.push_str(&format!("{ok}/{} criteria pass\n", reports.len()));
                Output::Text {
                    text,
                    failed: false,
                }
            } else {
                Output::json(&json!({"pass": pass, "criteria": to_json(&reports)?}))?
            };
            Ok(out.failed_if(!pass))
        }
    }
}

fn parse_pin(text: &str) -> CliResult<(&str, bool)> {
    match text.rsplit_once('=') {
        Some((label, "1")) if !label.is_empty() => Ok((label, true)),
        Some((label, "0")) if !label.is_empty() => Ok((label, false)),
        _ => input_err(format!("--pin expects LABEL=0 or LABEL=1, got {text:?}")),
    }
}

fn ks(k: &KsCommand) -> CliResult<Output> {
    match k {
        KsCommand::Check { source, pin } => {
            let vs = input::vectors(source)?;
            let mut cp = ColoringProblem::from_vectors(&vs);
            for p in pin {
                let (label, value) = parse_pin(p)?;
                cp = cp.pin_label(label, value)?;
            }
            let verdict = classify_colorability(&cp);
            let mut v = to_json(&verdict)?;
            if let Value::Object(map) = &mut v {
                map.insert("vectors".into(), json!(vs.len()));
                map.insert("bases".into(), json!(cp.bases().len()));
            }
            Ok(Output::Json {
                value: v,
                failed: false,
            })
        }
        KsCommand::Multiplicative { source } => {
            let spec = input::proof(source)?;
            let verdict = verify_multiplicative_proof(&spec)?;
            let mut v = json!({"proof": verdict.is_proof()});
            if let (Value::Object(head), Value::Object(body)) = (&mut v, to_json(&verdict)?) {
                head.extend(body);
            }
            Ok(Output::Json {
                value: v,
                failed: false,
            })
        }
    }
}

fn scenario(s: &ScenarioCommand, tol: f64) -> CliResult<Output> {
    match s {
        ScenarioCommand::Check { source } => {
            Output::json(&check_nondisturbance(&input::model(source)?, tol))
        }
        ScenarioCommand::GlobalSection { source } => {
            Output::json(&has_global_section(&input::model(source)?, tol)?)
        }
        ScenarioCommand::Evaluate {
            source,
            gamma,
            inequality,
        } => {
            let m = input::model(source)?;
            let ineq: Inequality = match inequality {
                Some(path) => read_json(path)?,
                None if !gamma.is_empty() => ncycle_inequality(gamma)?,
                None => return input_err("give --gamma or --inequality"),
            };
            let value = evaluate_inequality(&ineq, &m)?;
            Output::json(&json!({
                "value": value,
                "bound": ineq.bound,
                "violated": value > ineq.bound + tol,
            }))
        }
    }
}

fn bell_box(b: &BoxCommand, tol: f64) -> CliResult<Output> {
    match b {
        BoxCommand::Check(a) => {
            let bx = input::bell_box(a, false)?;
            Output::json(&json!({
                "nosignaling": to_json(&is_nosignaling(&bx, tol))?,
                "locality": to_json(&is_local(&bx, tol)?)?,
            }))
        }
        BoxCommand::Chsh(a) => {
            Output::json(&json!({"value": chsh_value(&input::bell_box(a, false)?)?}))
        }
        BoxCommand::Gyni(a) => {
            Output::json(&json!({"value": gyni_value(&input::bell_box(a, false)?)?}))
        }
        BoxCommand::Lo(a) => {
            Output::json(&local_orthogonality_two_copies(&input::bell_box(a, true)?)?)
        }
        BoxCommand::IcVandam {
            box_args,
            seed,
            trials,
        } => {
            if *trials == 0 {
                return input_err("--trials must be positive");
            }
            Output::json(&van_dam_ic(
                &input::bell_box(box_args, true)?,
                *seed,
                *trials,
            )?)
        }
        BoxCommand::IcNested {
            d,
            strength,
            levels,
            trials,
            seed,
        } => {
            let r = nested_ic(*d, *strength, *levels)?;
            let simulated = match (trials, seed) {
                (Some(0), _) => return input_err("--trials must be positive"),
                (Some(t), Some(s)) => Some(nested_ic_simulate(*d, *strength, *levels, *s, *t)?),
                _ => None,
            };
            let mut v = to_json(&r)?;
            if let Value::Object(map) = &mut v {
                map.insert("simulated".into(), to_json(&simulated)?);
            }
            Ok(Output::Json {
                value: v,
                failed: false,
            })
        }
        BoxCommand::IpProtocol { x, y, seed } => {
            let (xb, yb) = (parse_bits(x)?, parse_bits(y)?);
            let r = ip_one_bit_protocol(&xb, &yb, *seed)?;
            let direct = xb.iter().zip(&yb).fold(0u8, |acc, (a, b)| acc ^ (a & b));
            Output::json(&json!({
                "result": r.result,
                "bits_communicated": r.bits_communicated,
                "direct": direct,
                "agrees": r.result == direct,
            }))
        }
    }
}

fn plot(p: &PlotCommand) -> CliResult<Output> {
    let PlotCommand::ThetaAlpha {
        family,
        n,
        offsets,
        k,
    } = p;
    let mut rows = Vec::new();
    for size in input::size_list(n)? {
        // the sweep variable is q for G(q, s); --k then gives s
        let spec = if *family == GraphFamily::JohnsonGqs {
            input::family_spec(*family, None, offsets, None, Some(size), *k)?
        } else {
            input::family_spec(*family, Some(size), offsets, *k, None, None)?
        };
        let g = spec.build()?;
        rows.push(plot_row(&spec.name(), &g).map_err(CliError::from)?);
    }
    Ok(Output::Text {
        text: plot_rows_csv(&rows),
        failed: false,
    })
}
