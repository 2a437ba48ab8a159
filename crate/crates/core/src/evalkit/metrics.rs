//! Ranking quality against reference dependencies.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::corpus::DependencyDb;
use crate::selectors::Ranking;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("no ranking for conjecture `{0}`")]
    MissingRanking(String),
    #[error("conjecture `{0}` has no dependencies")]
    NoDependencies(String),
    #[error("nothing to evaluate")]
    Empty,
    #[error("metrics table line {0} is malformed")]
    Malformed(usize),
}

/// Metrics of one ranking, or their means over many.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Metrics {
    /// Percentage of the dependencies found in the top `n`.
    pub cover: f64,
    /// Number of dependencies found in the top `n`.
    pub prec: f64,
    /// Smallest prefix containing every dependency, capped.
    pub full_recall_rank: f64,
    /// Percentage of correctly ordered (dependency, non-dependency) pairs.
    pub auc: f64,
    /// Mean position of the dependencies; missing ones count as the cap.
    pub avg_rank: f64,
}

/// Default cap of the full-recall rank.
pub const RECALL_CAP: usize = 1024;

/// Metrics of one ranking against the dependency set `deps`.
pub fn ranking_metrics(ranking: &Ranking, deps: &BTreeSet<String>, n: usize, cap: usize) -> Metrics {
    let pos = ranking.positions();
    let in_top = deps.iter().filter(|d| pos.get(d.as_str()).is_some_and(|&p| p <= n)).count();
    let ranks: Vec<Option<usize>> = deps.iter().map(|d| pos.get(d.as_str()).copied()).collect();
    let full = if ranks.iter().all(Option::is_some) { ranks.iter().flatten().max().copied().unwrap_or(0) } else { cap };
    let avg = ranks.iter().map(|r| r.unwrap_or(cap) as f64).sum::<f64>() / deps.len().max(1) as f64;
    Metrics {
        cover: 100.0 * in_top as f64 / deps.len().max(1) as f64,
        prec: in_top as f64,
        full_recall_rank: full.min(cap) as f64,
        auc: auc(ranking, deps),
        avg_rank: avg,
    }
}

/// Pairs `(d, x)` with `d` a dependency and `x` a ranked non-dependency;
/// a pair is correct when `d` is ranked above `x`. Unranked dependencies
/// lose every pair. Without pairs the value is 100.
pub fn auc(ranking: &Ranking, deps: &BTreeSet<String>) -> f64 {
    let names: Vec<&str> = ranking.names().collect();
    let negatives = names.iter().filter(|n| !deps.contains(**n)).count();
    let total = deps.len() * negatives;
    if total == 0 {
        return 100.0;
    }
    // scan top-down, counting for each dependency the negatives ranked below it
    let mut seen_neg = 0usize;
    let mut correct = 0usize;
    for n in &names {
        if deps.contains(*n) {
            correct += negatives - seen_neg;
        } else {
            seen_neg += 1;
        }
    }
    100.0 * correct as f64 / total as f64
}

/// Mean metrics over `conjectures`, each judged against its smallest recorded proof.
pub fn compute_metrics<'a>(
    rankings: &BTreeMap<String, Ranking>,
    db: &DependencyDb,
    conjectures: impl IntoIterator<Item = &'a str>,
    n: usize,
    cap: usize,
) -> Result<Metrics, MetricsError> {
    let mut sum = Metrics::default();
    let mut count = 0usize;
    for c in conjectures {
        let r = rankings.get(c).ok_or_else(|| MetricsError::MissingRanking(c.to_string()))?;
        let deps = db.minimal_proof(c).map(|p| &p.premises).filter(|p| !p.is_empty()).ok_or_else(|| MetricsError::NoDependencies(c.to_string()))?;
        let m = ranking_metrics(r, deps, n, cap);
        sum.cover += m.cover;
        sum.prec += m.prec;
        sum.full_recall_rank += m.full_recall_rank;
        sum.auc += m.auc;
        sum.avg_rank += m.avg_rank;
        count += 1;
    }
    if count == 0 {
        return Err(MetricsError::Empty);
    }
    let k = count as f64;
    Ok(Metrics {
        cover: sum.cover / k,
        prec: sum.prec / k,
        full_recall_rank: sum.full_recall_rank / k,
        auc: sum.auc / k,
        avg_rank: sum.avg_rank / k,
    })
}

/// Named rows (method and split) of a metrics table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsReport {
    pub n: usize,
    pub rows: Vec<(String, Metrics)>,
}

impl MetricsReport {
    pub fn to_tsv(&self) -> String {
        let n = self.n;
        let mut s = format!("row\t{n}-cover\t{n}-prec\trecall\tauc\tavg_rank\n");
        for (name, m) in &self.rows {
            let _ = writeln!(s, "{name}\t{:?}\t{:?}\t{:?}\t{:?}\t{:?}", m.cover, m.prec, m.full_recall_rank, m.auc, m.avg_rank);
        }
        s
    }

    pub fn from_tsv(text: &str) -> Result<MetricsReport, MetricsError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(MetricsError::Malformed(1))?;
        let n: usize = header
            .split('\t')
            .nth(1)
            .and_then(|h| h.strip_suffix("-cover"))
            .and_then(|x| x.parse().ok())
            .ok_or(MetricsError::Malformed(1))?;
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            let nums: Option<Vec<f64>> = f.get(1..6).map(|xs| xs.iter().filter_map(|x| x.parse().ok()).collect());
            match (f.len(), nums) {
                (6, Some(v)) if v.len() == 5 => rows.push((
                    f[0].to_string(),
                    Metrics { cover: v[0], prec: v[1], full_recall_rank: v[2], auc: v[3], avg_rank: v[4] },
                )),
                _ => return Err(MetricsError::Malformed(i + 2)),
            }
        }
        Ok(MetricsReport { n, rows })
    }
}
