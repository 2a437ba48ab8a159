use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

/// Ordered `(fact, score)` list, best first.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ranking {
    items: Vec<(String, f64)>,
}

impl Ranking {
    /// Wraps an already ordered list. Names must be unique.
    pub fn from_ordered(items: Vec<(String, f64)>) -> Ranking {
        debug_assert!({
            let mut seen = HashSet::new();
            items.iter().all(|(n, _)| seen.insert(n.as_str()))
        });
        Ranking { items }
    }

    /// Sorts by score (descending when `higher_is_better`), ties by serial.
    pub fn sorted_by_score(mut items: Vec<(String, f64)>, serial: impl Fn(&str) -> usize, higher_is_better: bool) -> Ranking {
        items.sort_by(|a, b| {
            let ord = if higher_is_better { b.1.total_cmp(&a.1) } else { a.1.total_cmp(&b.1) };
            ord.then_with(|| serial(&a.0).cmp(&serial(&b.0))).then_with(|| a.0.cmp(&b.0))
        });
        Ranking::from_ordered(items)
    }

    pub fn items(&self) -> &[(String, f64)] {
        &self.items
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|(n, _)| n.as_str())
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn truncate(&mut self, n: usize) {
        self.items.truncate(n);
    }

    pub fn top(&self, n: usize) -> Ranking {
        Ranking { items: self.items.iter().take(n).cloned().collect() }
    }

    /// 1-based positions of every ranked fact.
    pub fn positions(&self) -> HashMap<&str, usize> {
        self.items.iter().enumerate().map(|(i, (n, _))| (n.as_str(), i + 1)).collect()
    }

    pub fn filter(&self, keep: impl Fn(&str, f64) -> bool) -> Ranking {
        Ranking { items: self.items.iter().filter(|(n, s)| keep(n, *s)).cloned().collect() }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RankingFileError {
    #[error("line {0}: missing `:` after conjecture name")]
    MissingColon(usize),
    #[error("line {line}: bad score in `{item}`")]
    BadScore { line: usize, item: String },
    #[error("line {line}: duplicate fact `{name}`")]
    Duplicate { line: usize, name: String },
}

/// `conjecture: fact1 fact2 ...`, or `fact=score` items when `with_scores`.
pub fn write_rankings(rankings: &BTreeMap<String, Ranking>, with_scores: bool) -> String {
    let mut out = String::new();
    for (conj, r) in rankings {
        out.push_str(conj);
        out.push(':');
        for (n, s) in r.items() {
            out.push(' ');
            out.push_str(n);
            if with_scores {
                out.push_str(&format!("={s}"));
            }
        }
        out.push('\n');
    }
    out
}

/// Reads a ranking file. Items without scores get descending placeholder scores
/// (`-position`) so that order is preserved.
pub fn parse_rankings(text: &str) -> Result<BTreeMap<String, Ranking>, RankingFileError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (conj, rest) = line.split_once(':').ok_or(RankingFileError::MissingColon(line_no))?;
        let mut seen = HashSet::new();
        let mut items = Vec::new();
        for (pos, item) in rest.split_whitespace().enumerate() {
            let (name, score) = match item.rsplit_once('=') {
                Some((n, s)) => {
                    let s: f64 = s.parse().map_err(|_| RankingFileError::BadScore { line: line_no, item: item.to_string() })?;
                    (n, s)
                }
                None => (item, -((pos + 1) as f64)),
            };
            if !seen.insert(name.to_string()) {
                return Err(RankingFileError::Duplicate { line: line_no, name: name.to_string() });
            }
            items.push((name.to_string(), score));
        }
        out.insert(conj.trim().to_string(), Ranking::from_ordered(items));
    }
    Ok(out)
}
