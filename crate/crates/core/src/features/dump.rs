//! Line format for labeled vectors: `label idx:value idx:value ...`.

use thiserror::Error;

use super::SparseVector;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledVector {
    pub label: String,
    pub vector: SparseVector,
}

#[derive(Debug, Error, PartialEq)]
pub enum DumpError {
    #[error("line {0}: missing label")]
    MissingLabel(usize),
    #[error("line {line}: bad entry `{entry}`")]
    BadEntry { line: usize, entry: String },
    #[error("line {line}: indices must be strictly increasing")]
    Unsorted { line: usize },
}

pub fn write_labeled_vectors(rows: &[LabeledVector]) -> String {
    let mut out = String::new();
    for r in rows {
        out.push_str(&r.label);
        for (i, v) in r.vector.entries() {
            out.push_str(&format!(" {i}:{v}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_labeled_vectors(text: &str) -> Result<Vec<LabeledVector>, DumpError> {
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let label = parts.next().ok_or(DumpError::MissingLabel(line_no))?.to_string();
        let mut entries = Vec::new();
        for p in parts {
            let bad = || DumpError::BadEntry { line: line_no, entry: p.to_string() };
            let (i, v) = p.split_once(':').ok_or_else(bad)?;
            let i: u32 = i.parse().map_err(|_| bad())?;
            let v: f64 = v.parse().map_err(|_| bad())?;
            if !v.is_finite() {
                return Err(bad());
            }
            if entries.last().is_some_and(|&(j, _)| j >= i) {
                return Err(DumpError::Unsorted { line: line_no });
            }
            entries.push((i, v));
        }
        rows.push(LabeledVector { label, vector: SparseVector::from_pairs(entries) });
    }
    Ok(rows)
}
