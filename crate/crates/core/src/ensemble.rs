//! Weighted rank aggregation of several premise rankings.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::selectors::Ranking;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mean {
    Harmonic,
    Geometric,
    Arithmetic,
    Minimum,
}

impl Mean {
    fn tag(self) -> &'static str {
        match self {
            Mean::Harmonic => "har",
            Mean::Geometric => "geo",
            Mean::Arithmetic => "avg",
            Mean::Minimum => "min",
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum EnsembleError {
    #[error("ensemble has {members} members but {rankings} rankings were given")]
    MemberMismatch { members: usize, rankings: usize },
    #[error("bad ensemble spec `{spec}`: {msg}")]
    Spec { spec: String, msg: String },
}

/// Members with positive weights and the mean used to combine their ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub members: Vec<(String, f64)>,
    pub mean: Mean,
}

impl FromStr for EnsembleSpec {
    type Err = EnsembleError;

    /// `har:N=.5,K=.2,L=.2,G=.1`; the mean prefix is one of `har`, `geo`, `avg`, `min`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |msg: &str| EnsembleError::Spec { spec: s.to_string(), msg: msg.to_string() };
        let (mean, rest) = s.split_once(':').ok_or_else(|| err("missing `<mean>:` prefix"))?;
        let mean = match mean.trim() {
            "har" => Mean::Harmonic,
            "geo" => Mean::Geometric,
            "avg" | "ari" => Mean::Arithmetic,
            "min" => Mean::Minimum,
            _ => return Err(err("mean must be har, geo, avg or min")),
        };
        let mut members = Vec::new();
        for part in rest.split(',') {
            let (id, w) = part.split_once('=').ok_or_else(|| err("members look like `ID=weight`"))?;
            let w: f64 = w.trim().parse().map_err(|_| err("weight is not a number"))?;
            if !(w > 0.0 && w.is_finite()) {
                return Err(err("weights must be positive"));
            }
            members.push((id.trim().to_string(), w));
        }
        if members.is_empty() || members.iter().any(|m| m.0.is_empty()) {
            return Err(err("at least one named member is required"));
        }
        Ok(EnsembleSpec { members, mean })
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.mean.tag())?;
        for (i, (id, w)) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{id}={w}")?;
        }
        Ok(())
    }
}

/// Aggregated score of one fact from its 1-based ranks; smaller is better.
pub fn combine(mean: Mean, ranks: &[f64], weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    match mean {
        Mean::Harmonic => 1.0 / ranks.iter().zip(weights).map(|(r, w)| w / r).sum::<f64>(),
        Mean::Arithmetic => ranks.iter().zip(weights).map(|(r, w)| w * r).sum::<f64>() / total,
        Mean::Geometric => ranks.iter().zip(weights).map(|(r, w)| (w / total) * r.ln()).sum::<f64>().exp(),
        Mean::Minimum => ranks.iter().zip(weights).map(|(r, w)| r / w).fold(f64::INFINITY, f64::min),
    }
}

/// Fuses member rankings (in `spec.members` order). A fact missing from a member
/// gets rank `|universe| + 1`; ties are broken by position in `universe`.
pub fn fuse(rankings: &[Ranking], spec: &EnsembleSpec, universe: &[String]) -> Result<Ranking, EnsembleError> {
    if rankings.len() != spec.members.len() {
        return Err(EnsembleError::MemberMismatch { members: spec.members.len(), rankings: rankings.len() });
    }
    let missing = (universe.len() + 1) as f64;
    let order: HashMap<&str, usize> = universe.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let positions: Vec<HashMap<&str, usize>> = rankings.iter().map(Ranking::positions).collect();
    let weights: Vec<f64> = spec.members.iter().map(|m| m.1).collect();

    let mut facts: Vec<&str> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for r in rankings {
        for n in r.names() {
            if seen.insert(n) {
                facts.push(n);
            }
        }
    }
    let mut scored: Vec<(String, f64)> = facts
        .into_iter()
        .map(|n| {
            let ranks: Vec<f64> = positions.iter().map(|p| p.get(n).map_or(missing, |&r| r as f64)).collect();
            (n.to_string(), combine(spec.mean, &ranks, &weights))
        })
        .collect();
    scored.sort_by(|a, b| {
        a.1.total_cmp(&b.1)
            .then_with(|| order.get(a.0.as_str()).unwrap_or(&usize::MAX).cmp(order.get(b.0.as_str()).unwrap_or(&usize::MAX)))
            .then_with(|| a.0.cmp(&b.0))
    });
    Ok(Ranking::from_ordered(scored))
}
