//! Line-oriented problem files:
//!
//! ```text
//! # normal crossing
//! vars: x y
//! ideal: x*y - t^2
//! perturbed: x*y - t^2 - t^9
//! k: 9
//! ```
//!
//! Keys are `vars`, `ideal`, `perturbed`, `k`, `divisor`, `r`, `cap`,
//! `order` and `box` (`L,d`). Each key appears at most once.

use detkit_core::ring::{Polynomial, Ring};
use detkit_core::Error as CoreError;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub vars: Vec<String>,
    pub ideal: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbed: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub bx: Option<(u32, u32)>,
}

const KEYS: [&str; 9] = ["vars", "ideal", "perturbed", "k", "divisor", "r", "cap", "order", "box"];

fn syntax(line: usize, column: usize, message: impl Into<String>) -> CliError {
    CliError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn parse_u32(value: &str, line: usize, column: usize, key: &str) -> Result<u32, CliError> {
    value.parse().map_err(|_| {
        syntax(
            line,
            column,
            format!("`{key}` expects a non-negative integer, found `{value}`"),
        )
    })
}

/// Splits a comma-separated polynomial list at top-level commas.
fn split_list(value: &str) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let chars: Vec<char> = value.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, chars[start..i].iter().collect()));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, chars[start..].iter().collect()));
    out.into_iter()
        .map(|(s, text)| {
            let lead = text.chars().take_while(|c| c.is_whitespace()).count();
            (s + lead, text.trim().to_string())
        })
        .filter(|(_, t)| !t.is_empty())
        .collect()
}

pub fn parse_problem(text: &str) -> Result<ProblemSpec, CliError> {
    let mut spec = ProblemSpec::default();
    let mut seen: Vec<&str> = Vec::new();
    let mut lists: Vec<(&str, usize, usize, String)> = Vec::new();
    let mut divisor_at = (0, 0);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(colon) = content.find(':') else {
            let col = content.chars().take_while(|c| c.is_whitespace()).count() + 1;
            return Err(syntax(line, col, "expected `key: value`"));
        };
        let key_text = &content[..colon];
        let key = key_text.trim();
        let key_col = key_text.chars().take_while(|c| c.is_whitespace()).count() + 1;
        let Some(&key) = KEYS.iter().find(|k| **k == key) else {
            return Err(syntax(line, key_col, format!("unknown key `{key}`")));
        };
        if seen.contains(&key) {
            return Err(syntax(line, key_col, format!("key `{key}` given twice")));
        }
        seen.push(key);
        let after = &content[colon + 1..];
        let value = after.trim();
        let value_col =
            content[..colon + 1].chars().count() + after.chars().take_while(|c| c.is_whitespace()).count() + 1;
        match key {
            "vars" => {
                spec.vars = value
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect();
                Ring::new(spec.vars.iter().cloned()).map_err(|e| syntax(line, value_col, e.to_string()))?;
            }
            "ideal" | "perturbed" => lists.push((key, line, value_col, value.to_string())),
            "k" => spec.k = Some(parse_u32(value, line, value_col, key)?),
            "r" => spec.r = Some(parse_u32(value, line, value_col, key)?),
            "cap" => spec.cap = Some(parse_u32(value, line, value_col, key)?),
            "order" => spec.order = Some(parse_u32(value, line, value_col, key)?),
            "divisor" => {
                spec.divisor = Some(value.to_string());
                divisor_at = (line, value_col);
            }
            "box" => spec.bx = Some(parse_box(value).map_err(|m| syntax(line, value_col, m))?),
            _ => unreachable!(),
        }
    }
    let ring = Ring::new(spec.vars.iter().cloned()).map_err(|e| syntax(1, 1, e.to_string()))?;
    for (key, line, col, value) in lists {
        let mut items = Vec::new();
        for (offset, item) in split_list(&value) {
            ring.parse(&item).map_err(|e| match e {
                CoreError::Parse { column, message } => syntax(line, col + offset + column - 1, message),
                other => syntax(line, col + offset, other.to_string()),
            })?;
            items.push(item);
        }
        if key == "ideal" {
            spec.ideal = items;
        } else {
            spec.perturbed = Some(items);
        }
    }
    if !seen.contains(&"ideal") {
        return Err(syntax(1, 1, "missing `ideal:`"));
    }
    if spec.perturbed.is_some() && spec.k.is_none() {
        return Err(syntax(1, 1, "`perturbed:` requires `k:`"));
    }
    if let Some(d) = &spec.divisor {
        if ring.index_of(d).is_none() {
            return Err(syntax(
                divisor_at.0,
                divisor_at.1,
                format!("divisor `{d}` is not a declared variable"),
            ));
        }
    }
    if spec.r.is_some() && spec.divisor.is_none() {
        return Err(syntax(1, 1, "`r:` requires `divisor:`"));
    }
    Ok(spec)
}

/// Parses `L,d`.
pub fn parse_box(value: &str) -> Result<(u32, u32), String> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [l, d] => match (l.parse(), d.parse()) {
            (Ok(l), Ok(d)) if l >= 1 => Ok((l, d)),
            _ => Err(format!("box expects `L,d` with L >= 1, found `{value}`")),
        },
        _ => Err(format!("box expects `L,d`, found `{value}`")),
    }
}

impl ProblemSpec {
    pub fn ring(&self) -> Result<Ring, CliError> {
        Ok(Ring::new(self.vars.iter().cloned())?)
    }

    pub fn ideal_polys(&self, ring: &Ring) -> Result<Vec<Polynomial>, CliError> {
        parse_items(ring, &self.ideal)
    }

    pub fn perturbed_polys(&self, ring: &Ring) -> Result<Option<Vec<Polynomial>>, CliError> {
        self.perturbed.as_ref().map(|p| parse_items(ring, p)).transpose()
    }

    /// Problem-file text that parses back to `self`.
    pub fn render(&self) -> String {
        let mut out = format!("vars: {}\nideal: {}\n", self.vars.join(" "), self.ideal.join(", "));
        if let Some(p) = &self.perturbed {
            out.push_str(&format!("perturbed: {}\n", p.join(", ")));
        }
        let mut num = |key: &str, v: Option<u32>| {
            if let Some(v) = v {
                out.push_str(&format!("{key}: {v}\n"));
            }
        };
        num("k", self.k);
        num("r", self.r);
        num("cap", self.cap);
        num("order", self.order);
        if let Some(d) = &self.divisor {
            out.push_str(&format!("divisor: {d}\n"));
        }
        if let Some((l, d)) = self.bx {
            out.push_str(&format!("box: {l},{d}\n"));
        }
        out
    }
}

fn parse_items(ring: &Ring, items: &[String]) -> Result<Vec<Polynomial>, CliError> {
    items.iter().map(|s| Ok(ring.parse(s)?)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let spec = parse_problem("vars: x y\nideal: x*y - t^2\n").unwrap();
        assert_eq!(spec.vars, ["x", "y"]);
        assert_eq!(spec.ideal, ["x*y - t^2"]);
    }

    #[test]
    fn perturbed_needs_k() {
        assert!(matches!(
            parse_problem("vars: x y\nideal: x*y\nperturbed: x*y - t^3\n"),
            Err(CliError::Syntax { .. })
        ));
    }

    #[test]
    fn undeclared_variable_is_located() {
        match parse_problem("vars: x y\n# comment\nideal: x*y, x*u - t\n") {
            Err(CliError::Syntax { line, column, .. }) => assert_eq!((line, column), (3, 15)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_key_and_duplicates() {
        assert!(matches!(
            parse_problem("vars: x\nideal: x\nfoo: 1\n"),
            Err(CliError::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            parse_problem("vars: x\nideal: x\nideal: x\n"),
            Err(CliError::Syntax { line: 3, .. })
        ));
    }

    #[test]
    fn render_round_trips() {
        let text = "vars: x y w\nideal: x*y - w^2*t, (x + y)*(x - y)\nperturbed: x*y - w^2*t - t^5*w^5, x^2 - y^2\nk: 5\ndivisor: w\nr: 5\nbox: 4,3\norder: 8 # target\n";
        let spec = parse_problem(text).unwrap();
        assert_eq!(spec.ideal.len(), 2);
        assert_eq!(parse_problem(&spec.render()).unwrap(), spec);
    }
}
