//! Result rendering: JSON with floats at 12 significant digits, or CSV text.

use std::io::Write;
use std::path::Path;

use ctxgraph::numkernel::round_significant;
use serde::Serialize;
use serde_json::Value;

use crate::input::{CliError, CliResult};

pub const DIGITS: usize = 12;

pub enum Output {
    Json { value: Value, failed: bool },
    Text { text: String, failed: bool },
}

impl Output {
    pub fn json<T: Serialize>(v: &T) -> CliResult<Output> {
        Ok(Output::Json {
            value: to_json(v)?,
            failed: false,
        })
    }

    /// Marks a completed run whose checks did not all pass.
    pub fn failed_if(mut self, cond: bool) -> Output {
        match &mut self {
            Output::Json { failed, .. } | Output::Text { failed, .. } => *failed |= cond,
        }
        self
    }

    pub fn status(&self) -> u8 {
        match self {
            Output::Json { failed, .. } | Output::Text { failed, .. } => u8::from(*failed),
        }
    }
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().unwrap_or(f64::NAN), DIGITS);
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn to_json<T: Serialize>(v: &T) -> CliResult<Value> {
    let mut value = serde_json::to_value(v)
        .map_err(|e| CliError::Compute(format!("serializing the result: {e}")))?;
    round_floats(&mut value);
    Ok(value)
}

pub fn emit(out: &Output, path: Option<&Path>) -> std::io::Result<()> {
    let text = match out {
        Output::Json { value, .. } => {
            let mut s = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
            s.push('\n');
            s
        }
        Output::Text { text, .. } => text.clone(),
    };
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_rounded_integers_kept() {
        let v = to_json(&json!({"alpha": 2, "theta": 5f64.sqrt(), "xs": [1.0 / 3.0, f64::NAN]}))
            .unwrap();
        assert_eq!(v["alpha"], json!(2));
        assert_eq!(v["theta"], json!(2.2360679775));
        assert_eq!(v["xs"][0], json!(0.333333333333));
        assert_eq!(v["xs"][1], Value::Null);
    }

    #[test]
    fn failure_flag() {
        let o = Output::json(&json!({})).unwrap();
        assert_eq!(o.status(), 0);
        assert_eq!(o.failed_if(true).status(), 1);
    }
}
