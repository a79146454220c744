//! Report assembly and canonical JSON emission.
//!
//! Canonical form: object keys sorted, every float printed with 17
//! significant digits in scientific notation, two-space indentation. Two
//! runs with the same config produce byte-identical files except for the
//! `generated_at_ms` field.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

/// One executed check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub group: String,
    pub check: String,
    /// Stable statement key this check verifies.
    pub anchor: String,
    /// FNV-1a digest of the seeded inputs, hex.
    pub inputs_digest: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub report_version: String,
    pub generated_at_ms: u64,
    pub config: Value,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn assemble(config: Value, mut checks: Vec<CheckRecord>) -> Report {
        // Stable output order regardless of execution order.
        checks.sort_by(|a, b| {
            (&a.suite, &a.group, &a.check).cmp(&(&b.suite, &b.group, &b.check))
        });
        let total = checks.len();
        let passed = checks.iter().filter(|c| c.pass).count();
        let failed = total - passed;
        Report {
            report_version: "1".to_string(),
            generated_at_ms: now_ms(),
            config,
            checks,
            summary: Summary {
                total,
                passed,
                failed,
                pass: failed == 0,
            },
        }
    }

    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        write_canonical(&value, 0, &mut out);
        out.push('\n');
        out
    }
}

fn now_ms() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

/// Write the report to `path` in canonical form.
pub fn emit_report(report: &Report, path: &Path) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(report.to_canonical_json().as_bytes())?;
    file.flush()
}

fn write_canonical(value: &Value, indent: usize, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                let f = n.as_f64().expect("finite float");
                out.push_str(&format_float(f));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string escapes"));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(indent + 1, out);
                write_canonical(item, indent + 1, out);
            }
            out.push('\n');
            push_indent(indent, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, key) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(indent + 1, out);
                out.push_str(&serde_json::to_string(key).expect("string escapes"));
                out.push_str(": ");
                write_canonical(&map[*key], indent + 1, out);
            }
            out.push('\n');
            push_indent(indent, out);
            out.push('}');
        }
    }
}

fn push_indent(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// 17 significant digits, scientific notation; enough to round-trip any
/// finite f64 bit pattern.
fn format_float(f: f64) -> String {
    debug_assert!(f.is_finite(), "reports never contain non-finite numbers");
    format!("{f:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(check: &str, pass: bool) -> CheckRecord {
        CheckRecord {
            suite: "weil".to_string(),
            group: "Z[4]/<(2)>".to_string(),
            check: check.to_string(),
            anchor: "total-mass".to_string(),
            inputs_digest: "00ff".to_string(),
            lhs: 1.0,
            rhs: 1.0,
            residual: 1.2345678901234567e-13,
            tolerance: 1e-12,
            pass,
        }
    }

    #[test]
    fn canonical_output_sorts_keys_and_pins_floats() {
        let report = Report::assemble(
            serde_json::json!({"b": 1, "a": 2}),
            vec![record("case1", true)],
        );
        let text = report.to_canonical_json();
        let a = text.find("\"a\"").unwrap();
        let b = text.find("\"b\"").unwrap();
        assert!(a < b, "keys must be sorted");
        // floats appear in 17-significant-digit scientific form and
        // round-trip bit-exactly
        assert!(text.contains(&format_float(1.2345678901234567e-13)));
        let back: Value = serde_json::from_str(&text).unwrap();
        let residual = back["checks"][0]["residual"].as_f64().unwrap();
        assert_eq!(residual.to_bits(), 1.2345678901234567e-13_f64.to_bits());
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn float_roundtrip_is_exact() {
        for x in [std::f64::consts::PI, 1.0 / 3.0, 1e-300, -2.5e17] {
            let s = format_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn summary_counts_failures() {
        let report = Report::assemble(
            serde_json::json!({}),
            vec![record("a", true), record("b", false)],
        );
        assert_eq!(report.summary.total, 2);
        assert_eq!(report.summary.failed, 1);
        assert!(!report.summary.pass);
    }

    #[test]
    fn checks_are_sorted_by_key() {
        let report = Report::assemble(
            serde_json::json!({}),
            vec![record("z", true), record("a", true)],
        );
        assert_eq!(report.checks[0].check, "a");
        assert_eq!(report.checks[1].check, "z");
    }
}
