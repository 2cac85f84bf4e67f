//! Ideal files.
//!
//! ```text
//! vars: 6
//! # generators are minimalized on input
//! I1: x1*x2, x2*x3, x3*x4
//! I2: x4*x5, x5*x6
//! split I = I1 + I2
//! ```

use std::collections::BTreeMap;
use std::fmt;

use monres::{minimalize, MonomialIdeal, Multidegree};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("expected `vars: n` before any ideal")]
    MissingHeader,
    #[error("`vars` declared twice")]
    DuplicateHeader,
    #[error("invalid variable count `{0}`")]
    BadVarCount(String),
    #[error("expected `NAME: monomials` or `split NAME = A + B`")]
    BadLine,
    #[error("invalid name `{0}`")]
    BadName(String),
    #[error("`{0}` is defined twice")]
    Duplicate(String),
    #[error("ideal `{0}` has no generators")]
    Empty(String),
    #[error("invalid monomial `{0}`")]
    BadMonomial(String),
    #[error("variable x{index} is not declared (vars: {n})")]
    UndeclaredVariable { index: usize, n: usize },
    #[error("exponent overflow in `{0}`")]
    ExponentOverflow(String),
    #[error("unknown ideal `{0}`")]
    UnknownIdeal(String),
    #[error("splitting `{name}` does not add up to the ideal of the same name")]
    SplitMismatch { name: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealFile {
    pub n: usize,
    pub ideals: BTreeMap<String, MonomialIdeal>,
    pub splits: BTreeMap<String, Vec<String>>,
    /// Notes about the input that are not errors, such as redundant generators.
    pub warnings: Vec<String>,
}

impl IdealFile {
    pub fn ideal(&self, name: &str) -> Option<&MonomialIdeal> {
        self.ideals.get(name)
    }

    pub fn split(&self, name: &str) -> Option<Vec<&MonomialIdeal>> {
        self.splits
            .get(name)
            .map(|parts| parts.iter().map(|p| &self.ideals[p]).collect())
    }
}

impl fmt::Display for IdealFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.n)?;
        for (name, i) in &self.ideals {
            let gens: Vec<String> = i.gens().iter().map(|g| g.to_string()).collect();
            writeln!(f, "{name}: {}", gens.join(", "))?;
        }
        for (name, parts) in &self.splits {
            writeln!(f, "split {name} = {}", parts.join(" + "))?;
        }
        Ok(())
    }
}

fn err(line: usize, col: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, col, kind }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Splits on `sep`, yielding trimmed pieces with their 1-based columns.
fn pieces(text: &str, start_col: usize, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for raw in text.split(sep) {
        let lead = raw.len() - raw.trim_start().len();
        out.push((start_col + offset + lead, raw.trim()));
        offset += raw.len() + sep.len_utf8();
    }
    out
}

fn parse_monomial(text: &str, n: usize, line: usize, col: usize) -> Result<Multidegree, ParseError> {
    let bad = |c: usize, f: &str| err(line, c, ParseErrorKind::BadMonomial(f.to_string()));
    let mut e = vec![0u32; n];
    if text == "1" {
        return Ok(Multidegree::new(e));
    }
    for (c, factor) in pieces(text, col, '*') {
        let (var, exp) = match factor.split_once('^') {
            Some((v, x)) => (v.trim(), Some(x.trim())),
            None => (factor, None),
        };
        let digits = var.strip_prefix('x').ok_or_else(|| bad(c, factor))?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad(c, factor));
        }
        let index: usize = digits
            .parse()
            .map_err(|_| err(line, c, ParseErrorKind::UndeclaredVariable { index: usize::MAX, n }))?;
        if index == 0 || index > n {
            return Err(err(line, c, ParseErrorKind::UndeclaredVariable { index, n }));
        }
        let k: u32 = match exp {
            None => 1,
            Some(x) if !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit()) => x
                .parse()
                .map_err(|_| err(line, c, ParseErrorKind::ExponentOverflow(factor.to_string())))?,
            Some(_) => return Err(bad(c, factor)),
        };
        e[index - 1] = e[index - 1]
            .checked_add(k)
            .ok_or_else(|| err(line, c, ParseErrorKind::ExponentOverflow(text.to_string())))?;
    }
    Ok(Multidegree::new(e))
}

pub fn parse_ideal_file(text: &str) -> Result<IdealFile, ParseError> {
    let mut n: Option<usize> = None;
    let mut ideals = BTreeMap::new();
    let mut splits: BTreeMap<String, (usize, Vec<String>)> = BTreeMap::new();
    let mut split_cols: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut warnings = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let lead = body.len() - body.trim_start().len();
        let body = body.trim();
        let col0 = lead + 1;

        if let Some(rest) = body.strip_prefix("split").filter(|r| r.starts_with(char::is_whitespace)) {
            let rest_col = col0 + "split".len();
            let (name_part, parts) = rest.split_once('=').ok_or_else(|| err(line, col0, ParseErrorKind::BadLine))?;
            let name = name_part.trim();
            let name_col = rest_col + name_part.len() - name_part.trim_start().len();
            if !valid_name(name) {
                return Err(err(line, name_col, ParseErrorKind::BadName(name.to_string())));
            }
            if splits.contains_key(name) {
                return Err(err(line, name_col, ParseErrorKind::Duplicate(name.to_string())));
            }
            let parts_col = rest_col + name_part.len() + 1;
            let mut names = Vec::new();
            let mut cols = Vec::new();
            for (c, p) in pieces(parts, parts_col, '+') {
                if !valid_name(p) {
                    return Err(err(line, c, ParseErrorKind::BadName(p.to_string())));
                }
                names.push(p.to_string());
                cols.push(c);
            }
            split_cols.insert(name.to_string(), cols);
            splits.insert(name.to_string(), (line, names));
            continue;
        }

        let (head, tail) = body.split_once(':').ok_or_else(|| err(line, col0, ParseErrorKind::BadLine))?;
        let name = head.trim();
        let tail_col = col0 + head.len() + 1;
        if name == "vars" {
            if n.is_some() {
                return Err(err(line, col0, ParseErrorKind::DuplicateHeader));
            }
            let t = tail.trim();
            let c = tail_col + tail.len() - tail.trim_start().len();
            match t.parse::<usize>() {
                Ok(v) if v > 0 => n = Some(v),
                _ => return Err(err(line, c, ParseErrorKind::BadVarCount(t.to_string()))),
            }
            continue;
        }
        let nv = n.ok_or_else(|| err(line, col0, ParseErrorKind::MissingHeader))?;
        if !valid_name(name) {
            return Err(err(line, col0, ParseErrorKind::BadName(name.to_string())));
        }
        if ideals.contains_key(name) {
            return Err(err(line, col0, ParseErrorKind::Duplicate(name.to_string())));
        }
        let mut gens = Vec::new();
        for (c, m) in pieces(tail, tail_col, ',') {
            if m.is_empty() {
                if tail.trim().is_empty() {
                    return Err(err(line, col0, ParseErrorKind::Empty(name.to_string())));
                }
                return Err(err(line, c, ParseErrorKind::BadMonomial(String::new())));
            }
            gens.push(parse_monomial(m, nv, line, c)?);
        }
        let given = gens.len();
        let ideal = minimalize(nv, gens);
        if ideal.len() < given {
            let kept: Vec<String> = ideal.gens().iter().map(|g| g.to_string()).collect();
            warnings.push(format!(
                "line {line}: {name} minimalized from {given} to {} generators ({})",
                ideal.len(),
                kept.join(", ")
            ));
        }
        ideals.insert(name.to_string(), ideal);
    }

    let n = n.ok_or_else(|| err(1, 1, ParseErrorKind::MissingHeader))?;
    let mut out_splits = BTreeMap::new();
    for (name, (line, parts)) in splits {
        for (p, c) in parts.iter().zip(&split_cols[&name]) {
            if !ideals.contains_key(p) {
                return Err(err(line, *c, ParseErrorKind::UnknownIdeal(p.clone())));
            }
        }
        if let Some(whole) = ideals.get(&name) {
            let sum = parts
                .iter()
                .skip(1)
                .try_fold(ideals[&parts[0]].clone(), |acc, p| acc.sum(&ideals[p]))
                .map_err(|_| err(line, 1, ParseErrorKind::SplitMismatch { name: name.clone() }))?;
            if sum != *whole {
                return Err(err(line, 1, ParseErrorKind::SplitMismatch { name: name.clone() }));
            }
        }
        out_splits.insert(name, parts);
    }
    Ok(IdealFile {
        n,
        ideals,
        splits: out_splits,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let f = parse_ideal_file("vars: 2\nI: x1, x2").unwrap();
        assert_eq!(f.n, 2);
        assert_eq!(f.ideals["I"].len(), 2);
        assert!(f.warnings.is_empty());
    }

    #[test]
    fn redundant_generators_warn() {
        let f = parse_ideal_file("vars: 2\nI: x1, x1*x2").unwrap();
        assert_eq!(f.ideals["I"].gens(), &[Multidegree::new(vec![1, 0])]);
        assert_eq!(f.warnings.len(), 1);
    }

    #[test]
    fn powers_and_comments() {
        let f = parse_ideal_file("# header\nvars: 5   # five\nJ: x2^2*x5 , x3 # tail\n").unwrap();
        assert!(f.ideals["J"].contains(&Multidegree::new(vec![0, 2, 0, 0, 1])));
    }

    #[test]
    fn error_positions() {
        let e = parse_ideal_file("vars: 3\nI: x1, x4").unwrap_err();
        assert_eq!((e.line, e.col), (2, 8));
        assert!(matches!(e.kind, ParseErrorKind::UndeclaredVariable { index: 4, n: 3 }));
        let e = parse_ideal_file("vars: 3\nI: x1*y2").unwrap_err();
        assert_eq!((e.line, e.col), (2, 7));
        let e = parse_ideal_file("vars: 3\nI: x1^99999999999").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::ExponentOverflow(_)));
        let e = parse_ideal_file("I: x1").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingHeader);
        let e = parse_ideal_file("vars: 2\nI: x1\nsplit S = I + K").unwrap_err();
        assert_eq!((e.line, e.col), (3, 15));
    }

    #[test]
    fn splits_must_add_up() {
        let text = "vars: 3\nI: x1*x2, x2*x3\nA: x1*x2\nB: x2*x3\nsplit I = A + B\n";
        let f = parse_ideal_file(text).unwrap();
        assert_eq!(f.split("I").unwrap().len(), 2);
        let bad = "vars: 3\nI: x1*x2\nA: x1*x2\nB: x2*x3\nsplit I = A + B\n";
        assert!(matches!(
            parse_ideal_file(bad).unwrap_err().kind,
            ParseErrorKind::SplitMismatch { .. }
        ));
    }
}
