//! Plain-text instance format.
//!
//! ```text
//! # comment
//! p csp <n> <m>
//! c <r> <v1> ... <vr> <hex truth table>
//! x <k> <v1> ... <vk> <+1|-1>
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{CspError, Instance, Predicate};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Constraint { line: usize, source: CspError },
    #[error("missing `p csp <n> <m>` header")]
    MissingHeader,
    #[error("header declares {declared} constraints, found {found}")]
    CountMismatch { declared: usize, found: usize },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

fn number<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T, ParseError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| syntax(line, format!("bad {what} {tok:?}")))
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut inst: Option<Instance> = None;
    let mut declared = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut toks = body.split_whitespace();
        let tag = toks.next().unwrap_or_default();
        if tag == "p" {
            if inst.is_some() {
                return Err(syntax(line, "duplicate header"));
            }
            if toks.next() != Some("csp") {
                return Err(syntax(line, "expected `p csp <n> <m>`"));
            }
            let n: usize = number(line, toks.next(), "variable count")?;
            declared = number(line, toks.next(), "constraint count")?;
            if toks.next().is_some() {
                return Err(syntax(line, "trailing tokens after header"));
            }
            inst = Some(Instance::new(n));
            continue;
        }
        let target = inst.as_mut().ok_or(ParseError::MissingHeader)?;
        let arity: usize = number(line, toks.next(), "arity")?;
        if arity == 0 || arity > super::MAX_ARITY {
            return Err(ParseError::Constraint { line, source: CspError::BadArity(arity) });
        }
        let scope = (0..arity).map(|_| number::<u32>(line, toks.next(), "variable")).collect::<Result<Vec<_>, _>>()?;
        let last = toks.next().ok_or_else(|| syntax(line, "missing predicate"))?;
        if toks.next().is_some() {
            return Err(syntax(line, "trailing tokens after constraint"));
        }
        let predicate = match tag {
            "c" => Predicate::from_hex(arity, last),
            "x" => match last {
                "+1" | "1" => Predicate::parity(arity, 1),
                "-1" => Predicate::parity(arity, -1),
                _ => return Err(syntax(line, format!("bad parity sign {last:?}"))),
            },
            _ => return Err(syntax(line, format!("unknown line type {tag:?}"))),
        }
        .map_err(|source| ParseError::Constraint { line, source })?;
        target.push(predicate, scope).map_err(|source| ParseError::Constraint { line, source })?;
    }
    let inst = inst.ok_or(ParseError::MissingHeader)?;
    if inst.m() != declared {
        return Err(ParseError::CountMismatch { declared, found: inst.m() });
    }
    Ok(inst)
}

/// Serializes `inst`, writing each comment as a `#` line before the header.
/// Parity predicates use the `x` shortcut.
pub fn write_instance(inst: &Instance, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "p csp {} {}", inst.n(), inst.m());
    for (l, c) in inst.constraints().iter().enumerate() {
        let p = inst.predicate_of(l);
        let vars: Vec<String> = c.scope.iter().map(u32::to_string).collect();
        match p.parity_sign() {
            Some(s) => {
                let _ = writeln!(out, "x {} {} {}", p.arity(), vars.join(" "), if s > 0 { "+1" } else { "-1" });
            }
            None => {
                let _ = writeln!(out, "c {} {} {}", p.arity(), vars.join(" "), p.to_hex());
            }
        }
    }
    out
}
