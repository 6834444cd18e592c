//! Report envelopes. Keys come out sorted because `serde_json::Map` is a
//! `BTreeMap` here; every number is an integer and every rational lives
//! inside a polynomial string.

use detkit_core::groebner::ModuleElement;
use detkit_core::ring::{Polynomial, Ring};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: u64 = 1;

pub fn tool_version() -> String {
    format!("detkit {}", env!("CARGO_PKG_VERSION"))
}

pub fn poly(ring: &Ring, p: &Polynomial) -> Value {
    Value::String(ring.render(p))
}

pub fn polys(ring: &Ring, ps: &[Polynomial]) -> Value {
    Value::Array(ps.iter().map(|p| poly(ring, p)).collect())
}

pub fn matrix(ring: &Ring, rows: &[Vec<Polynomial>]) -> Value {
    Value::Array(rows.iter().map(|r| polys(ring, r)).collect())
}

pub fn elements(ring: &Ring, v: &[ModuleElement]) -> Value {
    Value::Array(v.iter().map(|e| polys(ring, &e.components)).collect())
}

/// Hex SHA-256 of the compact serialisation of results and certificates.
pub fn run_hash(results: &Value, certificates: &Value) -> String {
    let body = json!({ "certificates": certificates, "results": results });
    hex::encode(Sha256::digest(body.to_string().as_bytes()))
}

pub fn envelope(command: &str, inputs: Value, results: Value, certificates: Value) -> Value {
    json!({
        "certificates": certificates,
        "command": command,
        "inputs": inputs,
        "results": results,
        "run_hash": run_hash(&results, &certificates),
        "schema": SCHEMA,
        "tool_version": tool_version(),
    })
}

/// Parses a polynomial array back.
pub fn read_polys(ring: &Ring, v: &Value, what: &str) -> Result<Vec<Polynomial>, crate::CliError> {
    let arr = v
        .as_array()
        .ok_or_else(|| crate::CliError::Certificate(format!("`{what}` is not an array")))?;
    arr.iter()
        .map(|x| {
            let s = x
                .as_str()
                .ok_or_else(|| crate::CliError::Certificate(format!("`{what}` holds a non-string entry")))?;
            ring.parse(s)
                .map_err(|e| crate::CliError::Certificate(format!("`{what}`: {e}")))
        })
        .collect()
}

pub fn read_matrix(ring: &Ring, v: &Value, what: &str) -> Result<Vec<Vec<Polynomial>>, crate::CliError> {
    let arr = v
        .as_array()
        .ok_or_else(|| crate::CliError::Certificate(format!("`{what}` is not an array")))?;
    arr.iter().map(|row| read_polys(ring, row, what)).collect()
}

/// `key: value` lines for the human summary.
pub fn summary(results: &Value) -> Vec<String> {
    let Some(obj) = results.as_object() else {
        return vec![results.to_string()];
    };
    obj.iter()
        .map(|(k, v)| {
            let text = match v {
                Value::String(s) => s.clone(),
                Value::Array(items) if items.iter().all(Value::is_string) => {
                    items.iter().filter_map(Value::as_str).collect::<Vec<_>>().join(", ")
                }
                other => other.to_string(),
            };
            format!("{k}: {text}")
        })
        .collect()
}
