use std::io::Write;

use anyhow::{bail, Context, Result};
use schubert_core::{Partition, PivotSet};
use serde_json::{json, Value};

use crate::args::{Format, OutputArgs};

pub const SCHEMA_VERSION: u32 = 1;

/// Wraps a JSON body with the schema version and command name.
pub fn envelope(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Some(dst), Value::Object(src)) = (v.as_object_mut(), body) {
        dst.extend(src);
    }
    v
}

pub fn emit(out: &OutputArgs, text: String) -> Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn reject_csv(format: Format, command: &str) -> Result<()> {
    if format == Format::Csv {
        bail!("`{command}` has no flat table; use --format text or json");
    }
    Ok(())
}

/// The `--alpha` syntax, `2,4;4,3`.
pub fn alpha_arg(a: &PivotSet) -> String {
    a.iter().map(|p| format!("{},{}", p.row, p.col)).collect::<Vec<_>>().join(";")
}

/// The `--lambda` syntax, `4,3,1`.
pub fn lambda_arg(l: &Partition) -> String {
    l.parts().iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("4,3,1"), "\"4,3,1\"");
        assert_eq!(csv_field("ab"), "ab");
        assert_eq!(csv_field("a\"b"), "\"a\"\"b\"");
    }

    #[test]
    fn envelope_carries_version() {
        let v = envelope("x", json!({"a": 1}));
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["a"], 1);
    }
}
