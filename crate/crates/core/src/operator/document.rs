//! JSON operator description documents.
//!
//! ```json
//! {
//!   "domain": "bi",
//!   "diagonals": [
//!     { "offset": 0,  "kind": "periodic", "values": [[-1.5, 0], [1, 0], [1, 0]] },
//!     { "offset": 1,  "kind": "periodic", "values": [[1, 0], [2, 0], [1, 0]] }
//!   ]
//! }
//! ```
//!
//! Diagonal data is column-indexed: for offset `d`, the value listed for
//! index `j` is the entry `A[j - d, j]`. Periodic tuples start at index 0;
//! explicit lists start at `start`; override keys are column indices.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{Map, Value};

use super::{BandOperator, Diagonal, IndexDomain};
use crate::error::{Error, Result};

fn doc_err(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Document {
        field: field.into(),
        message: message.into(),
    }
}

fn complex(value: &Value, field: &str) -> Result<Complex64> {
    let pair = value
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| doc_err(field, "expected a two-element [re, im] array"))?;
    let part = |v: &Value, which: &str| {
        v.as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| doc_err(field, format!("{which} part must be a finite number")))
    };
    Ok(Complex64::new(part(&pair[0], "real")?, part(&pair[1], "imaginary")?))
}

fn complex_list(obj: &Map<String, Value>, field: &str) -> Result<Vec<Complex64>> {
    let list = obj
        .get("values")
        .ok_or_else(|| doc_err(format!("{field}.values"), "missing"))?
        .as_array()
        .ok_or_else(|| doc_err(format!("{field}.values"), "expected an array"))?;
    list.iter()
        .enumerate()
        .map(|(t, v)| complex(v, &format!("{field}.values[{t}]")))
        .collect()
}

fn integer(value: &Value, field: &str) -> Result<i64> {
    value
        .as_i64()
        .ok_or_else(|| doc_err(field, "expected an integer"))
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], field: &str) -> Result<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            let path = if field.is_empty() { key.clone() } else { format!("{field}.{key}") };
            return Err(doc_err(path, "unknown field"));
        }
    }
    Ok(())
}

fn parse_diagonal(value: &Value, field: &str, domain: IndexDomain) -> Result<(i64, Diagonal)> {
    let obj = value
        .as_object()
        .ok_or_else(|| doc_err(field, "expected an object"))?;
    check_keys(obj, &["offset", "kind", "values", "overrides", "start"], field)?;
    let offset = integer(
        obj.get("offset").ok_or_else(|| doc_err(format!("{field}.offset"), "missing"))?,
        &format!("{field}.offset"),
    )?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| doc_err(format!("{field}.kind"), "missing or not a string"))?;
    let forbid = |key: &str| -> Result<()> {
        if obj.contains_key(key) {
            Err(doc_err(format!("{field}.{key}"), format!("not allowed for kind \"{kind}\"")))
        } else {
            Ok(())
        }
    };
    let values = complex_list(obj, field)?;
    let column_indexed = match kind {
        "constant" => {
            forbid("overrides")?;
            forbid("start")?;
            if values.len() != 1 {
                return Err(doc_err(format!("{field}.values"), "constant diagonal takes exactly one value"));
            }
            Diagonal::Constant(values[0])
        }
        "periodic" => {
            forbid("overrides")?;
            forbid("start")?;
            if values.is_empty() {
                return Err(doc_err(format!("{field}.values"), "periodic diagonal needs at least one value"));
            }
            Diagonal::Periodic(values)
        }
        "explicit" => {
            forbid("overrides")?;
            if !matches!(domain, IndexDomain::Finite(_)) {
                return Err(doc_err(format!("{field}.kind"), "explicit diagonals need a finite domain"));
            }
            let start = match obj.get("start") {
                Some(v) => integer(v, &format!("{field}.start"))?,
                None => 1.max(1 + offset),
            };
            Diagonal::Explicit { start, values }
        }
        "perturbed_periodic" => {
            forbid("start")?;
            if values.is_empty() {
                return Err(doc_err(format!("{field}.values"), "background needs at least one value"));
            }
            let raw = obj
                .get("overrides")
                .ok_or_else(|| doc_err(format!("{field}.overrides"), "missing"))?
                .as_object()
                .ok_or_else(|| doc_err(format!("{field}.overrides"), "expected an object"))?;
            let mut overrides = BTreeMap::new();
            for (key, v) in raw {
                let path = format!("{field}.overrides.{key}");
                let index: i64 = key
                    .trim()
                    .parse()
                    .map_err(|_| doc_err(&path, "key must be an integer index"))?;
                overrides.insert(index, complex(v, &path)?);
            }
            Diagonal::PerturbedPeriodic {
                background: values,
                overrides,
            }
        }
        other => {
            return Err(doc_err(
                format!("{field}.kind"),
                format!("unknown kind \"{other}\" (expected constant, periodic, explicit or perturbed_periodic)"),
            ))
        }
    };
    // Column j of diagonal d sits in row j - d.
    Ok((offset, column_indexed.shifted(offset)))
}

/// Parses and validates an operator description document.
pub fn parse_operator(text: &str) -> Result<BandOperator> {
    let root: Value = serde_json::from_str(text).map_err(|e| {
        doc_err(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    })?;
    let obj = root
        .as_object()
        .ok_or_else(|| doc_err("document", "expected a JSON object"))?;
    check_keys(obj, &["domain", "N", "bandwidth", "diagonals", "name", "description"], "")?;

    let domain = match obj.get("domain").and_then(Value::as_str) {
        Some("finite") => {
            let n = obj
                .get("N")
                .ok_or_else(|| doc_err("N", "required for a finite domain"))?
                .as_u64()
                .filter(|&n| n >= 1)
                .ok_or_else(|| doc_err("N", "must be a positive integer"))?;
            IndexDomain::Finite(n as usize)
        }
        Some("semi") | Some("bi") if obj.contains_key("N") => {
            return Err(doc_err("N", "only allowed for a finite domain"))
        }
        Some("semi") => IndexDomain::SemiInfinite,
        Some("bi") => IndexDomain::BiInfinite,
        Some(other) => {
            return Err(doc_err("domain", format!("unknown domain \"{other}\" (expected finite, semi or bi)")))
        }
        None => return Err(doc_err("domain", "missing or not a string")),
    };

    let declared = match obj.get("bandwidth") {
        Some(v) => Some(
            v.as_u64()
                .ok_or_else(|| doc_err("bandwidth", "must be a nonnegative integer"))?,
        ),
        None => None,
    };

    let list = obj
        .get("diagonals")
        .ok_or_else(|| doc_err("diagonals", "missing"))?
        .as_array()
        .ok_or_else(|| doc_err("diagonals", "expected an array"))?;
    let mut diagonals = Vec::with_capacity(list.len());
    let mut seen = BTreeMap::new();
    for (t, item) in list.iter().enumerate() {
        let field = format!("diagonals[{t}]");
        let (offset, diag) = parse_diagonal(item, &field, domain)?;
        if let Some(bw) = declared {
            if offset.unsigned_abs() > bw {
                return Err(doc_err(
                    format!("{field}.offset"),
                    format!("offset {offset} exceeds the declared bandwidth {bw}"),
                ));
            }
        }
        if let Some(prev) = seen.insert(offset, t) {
            return Err(doc_err(
                format!("{field}.offset"),
                format!("offset {offset} already given by diagonals[{prev}]"),
            ));
        }
        diagonals.push((offset, diag));
    }
    BandOperator::new(domain, diagonals).map_err(|e| doc_err("diagonals", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_B: &str = r#"{
        "domain": "bi",
        "diagonals": [
            {"offset": -1, "kind": "constant", "values": [[0, 0]]},
            {"offset": 0, "kind": "periodic", "values": [[-1.5, 0], [1, 0], [1, 0]]},
            {"offset": 1, "kind": "periodic", "values": [[1, 0], [2, 0], [1, 0]]}
        ]
    }"#;

    #[test]
    fn shift_document() {
        let op = parse_operator(
            r#"{"domain": "bi", "diagonals": [{"offset": -1, "kind": "constant", "values": [[1, 0]]}]}"#,
        )
        .unwrap();
        assert_eq!(op.bandwidth(), 1);
        assert_eq!(op.entry(2, 1).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(op.entry(1, 2).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn example_b_phase() {
        let op = parse_operator(EXAMPLE_B).unwrap();
        assert_eq!(op.entry(0, 0).unwrap(), Complex64::new(-1.5, 0.0));
        // γ_j = A[j-1, j] with γ_0 = 1, γ_1 = 2.
        assert_eq!(op.entry(-1, 0).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(op.entry(0, 1).unwrap(), Complex64::new(2.0, 0.0));
        let sup = op.sup_norms();
        assert_eq!(sup.get(&-1), None);
        assert_eq!((sup[&0], sup[&1]), (1.5, 2.0));
    }

    #[test]
    fn bandwidth_violation() {
        let err = parse_operator(
            r#"{"domain": "bi", "bandwidth": 1, "diagonals": [{"offset": 3, "kind": "constant", "values": [[1, 0]]}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("diagonals[0].offset"), "{err}");
    }

    #[test]
    fn malformed_pair() {
        let err = parse_operator(
            r#"{"domain": "bi", "diagonals": [{"offset": 0, "kind": "periodic", "values": [[1, 0], [2]]}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("diagonals[0].values[1]"), "{err}");
    }

    #[test]
    fn explicit_on_infinite_domain() {
        let err = parse_operator(
            r#"{"domain": "semi", "diagonals": [{"offset": 0, "kind": "explicit", "values": [[1, 0]]}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("finite"), "{err}");
    }

    #[test]
    fn syntax_error_reports_line() {
        let err = parse_operator("{\n \"domain\": \"bi\",\n oops }").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn explicit_and_overrides_are_column_indexed() {
        let op = parse_operator(
            r#"{"domain": "finite", "N": 4, "diagonals": [
                {"offset": 1, "kind": "explicit", "start": 2, "values": [[1, 0], [2, 0], [3, 0]]},
                {"offset": -1, "kind": "perturbed_periodic", "values": [[1, 0]], "overrides": {"2": [7, 0]}}
            ]}"#,
        )
        .unwrap();
        assert_eq!(op.entry(1, 2).unwrap().re, 1.0);
        assert_eq!(op.entry(3, 4).unwrap().re, 3.0);
        assert_eq!(op.entry(3, 2).unwrap().re, 7.0);
        assert_eq!(op.entry(2, 1).unwrap().re, 1.0);
    }
}
