//! Lossless JSON form of a multigraded complex.

use monres::complex::Frame;
use monres::{BasisElement, Field, Label, MultigradedComplex, Multidegree};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDto {
    pub n: usize,
    pub field: String,
    pub modules: Vec<ModuleDto>,
    pub diff: Vec<DiffDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDto {
    pub hdeg: usize,
    pub basis: Vec<BasisDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDto {
    pub id: usize,
    pub mdeg: Vec<u32>,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffDto {
    pub hdeg: usize,
    pub entries: Vec<EntryDto>,
}

/// `row` and `col` are basis ids of the target and the source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDto {
    pub row: usize,
    pub col: usize,
    pub coeff: String,
}

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{0}")]
    Field(#[from] monres::field::FieldError),
    #[error("invalid label `{0}`")]
    Label(String),
    #[error("unknown basis id {0}")]
    UnknownId(usize),
    #[error("entry {row} <- {col} does not lower the degree by one")]
    Degree { row: usize, col: usize },
    #[error("{0}")]
    Complex(#[from] monres::Error),
}

/// Same text as `Display` except that the empty subset and free labels are
/// marked, so that every label reads back unambiguously.
pub fn encode_label(l: &Label) -> String {
    match l {
        Label::Subset(s) if s.is_empty() => "e{}".into(),
        Label::Free(t) => format!("[{t}]"),
        Label::Star(parts) => parts.iter().map(encode_label).collect::<Vec<_>>().join("*"),
        other => other.to_string(),
    }
}

fn decode_one(s: &str) -> Option<Label> {
    if s == "1" {
        return Some(Label::Unit);
    }
    if let Some(t) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        return Some(Label::Free(t.to_string()));
    }
    if let Some(k) = s.strip_prefix('g') {
        let k: usize = k.parse().ok()?;
        return k.checked_sub(1).map(Label::Gen);
    }
    let inner = s.strip_prefix("e{")?.strip_suffix('}')?;
    if inner.is_empty() {
        return Some(Label::Subset(Vec::new()));
    }
    inner
        .split(',')
        .map(|x| x.trim().parse::<usize>().ok()?.checked_sub(1))
        .collect::<Option<Vec<_>>>()
        .map(Label::Subset)
}

/// Splits on `*` outside brackets.
fn top_level_parts(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            '*' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

pub fn decode_label(s: &str) -> Result<Label, JsonError> {
    let parts = top_level_parts(s);
    let bad = || JsonError::Label(s.to_string());
    if parts.len() == 1 {
        return decode_one(s).ok_or_else(bad);
    }
    parts
        .into_iter()
        .map(|p| decode_one(p).ok_or_else(bad))
        .collect::<Result<Vec<_>, _>>()
        .map(Label::Star)
}

pub fn to_dto(c: &MultigradedComplex) -> ComplexDto {
    let modules = c
        .modules()
        .iter()
        .enumerate()
        .map(|(h, b)| ModuleDto {
            hdeg: h,
            basis: b
                .iter()
                .map(|e| BasisDto {
                    id: e.id,
                    mdeg: e.mdeg.exps().to_vec(),
                    label: encode_label(&e.label),
                })
                .collect(),
        })
        .collect();
    let diff = (1..c.len())
        .map(|h| {
            let frame = c.frame(h).expect("frame in range");
            let mut entries: Vec<EntryDto> = frame
                .entries()
                .map(|(r, col, v)| EntryDto {
                    row: c.basis(h - 1)[r].id,
                    col: c.basis(h)[col].id,
                    coeff: v.to_string(),
                })
                .collect();
            entries.sort_by_key(|e| (e.col, e.row));
            DiffDto { hdeg: h, entries }
        })
        .collect();
    ComplexDto {
        n: c.nvars(),
        field: c.field().to_string(),
        modules,
        diff,
    }
}

pub fn from_dto(d: &ComplexDto) -> Result<MultigradedComplex, JsonError> {
    let field: Field = d.field.parse()?;
    let mut modules: Vec<Vec<BasisElement>> = Vec::new();
    let mut place = std::collections::HashMap::new();
    for m in &d.modules {
        while modules.len() <= m.hdeg {
            modules.push(Vec::new());
        }
        for b in &m.basis {
            place.insert(b.id, (m.hdeg, modules[m.hdeg].len()));
            modules[m.hdeg].push(BasisElement {
                id: b.id,
                hdeg: m.hdeg,
                mdeg: Multidegree::new(b.mdeg.clone()),
                label: decode_label(&b.label)?,
            });
        }
    }
    let mut diffs: Vec<Frame> = (0..modules.len())
        .map(|h| Frame::new(if h == 0 { 0 } else { modules[h - 1].len() }, modules[h].len()))
        .collect();
    for dd in &d.diff {
        for e in &dd.entries {
            let &(th, tp) = place.get(&e.row).ok_or(JsonError::UnknownId(e.row))?;
            let &(sh, sp) = place.get(&e.col).ok_or(JsonError::UnknownId(e.col))?;
            if th + 1 != sh || sh != dd.hdeg {
                return Err(JsonError::Degree { row: e.row, col: e.col });
            }
            diffs[sh].set(tp, sp, field.parse_scalar(&e.coeff)?);
        }
    }
    Ok(MultigradedComplex::from_parts(d.n, field, modules, diffs)?)
}

pub fn export(c: &MultigradedComplex) -> String {
    serde_json::to_string_pretty(&to_dto(c)).expect("complex serializes")
}

pub fn import(text: &str) -> Result<MultigradedComplex, JsonError> {
    from_dto(&serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        let cases = [
            Label::Unit,
            Label::Gen(3),
            Label::Subset(vec![]),
            Label::Subset(vec![0, 4]),
            Label::Free("h*k".into()),
            Label::Star(vec![Label::Subset(vec![1]), Label::Unit, Label::Free("x".into())]),
        ];
        for l in cases {
            assert_eq!(decode_label(&encode_label(&l)).unwrap(), l);
        }
        assert!(decode_label("e{0}").is_err());
        assert!(decode_label("zz").is_err());
    }
}
