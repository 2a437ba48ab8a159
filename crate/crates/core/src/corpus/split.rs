//! Seeded train/devel/holdout partitioning and the split manifest format.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SplitError {
    #[error("cannot split an empty name list")]
    Empty,
    #[error("ratios must be non-negative and sum to 1 (got {0:?})")]
    BadRatios((f64, f64, f64)),
    #[error("malformed split manifest: {0}")]
    Manifest(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub seed: u64,
    pub ratios: (u32, u32, u32),
    pub train: Vec<String>,
    pub devel: Vec<String>,
    pub holdout: Vec<String>,
}

pub const DEFAULT_RATIOS: (f64, f64, f64) = (0.90, 0.05, 0.05);

/// Sizes for `n` names: devel and holdout are floored, the remainder goes to train.
pub fn split_sizes(n: usize, ratios: (f64, f64, f64)) -> (usize, usize, usize) {
    let devel = (n as f64 * ratios.1 + 1e-9).floor() as usize;
    let holdout = (n as f64 * ratios.2 + 1e-9).floor() as usize;
    (n - devel - holdout, devel, holdout)
}

pub fn split_corpus(names: &[String], ratios: (f64, f64, f64), seed: u64) -> Result<Split, SplitError> {
    if names.is_empty() {
        return Err(SplitError::Empty);
    }
    let (a, b, c) = ratios;
    if a < 0.0 || b < 0.0 || c < 0.0 || ((a + b + c) - 1.0).abs() > 1e-9 {
        return Err(SplitError::BadRatios(ratios));
    }
    let (_, nd, nh) = split_sizes(names.len(), ratios);
    let mut shuffled = names.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let holdout = shuffled.split_off(shuffled.len() - nh);
    let devel = shuffled.split_off(shuffled.len() - nd);
    let pct = |x: f64| (x * 100.0).round() as u32;
    Ok(Split { seed, ratios: (pct(a), pct(b), pct(c)), train: shuffled, devel, holdout })
}

impl Split {
    /// Header line, then the three lists separated by blank lines.
    pub fn to_manifest(&self) -> String {
        let mut s = format!("seed={} ratios={}:{}:{}\n", self.seed, self.ratios.0, self.ratios.1, self.ratios.2);
        for (i, part) in [&self.train, &self.devel, &self.holdout].into_iter().enumerate() {
            if i > 0 {
                s.push('\n');
            }
            for n in part {
                s.push_str(n);
                s.push('\n');
            }
        }
        s
    }

    pub fn from_manifest(text: &str) -> Result<Split, SplitError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| SplitError::Manifest("empty file".into()))?;
        let mut seed = None;
        let mut ratios = None;
        for field in header.split_whitespace() {
            if let Some(v) = field.strip_prefix("seed=") {
                seed = Some(v.parse::<u64>().map_err(|e| SplitError::Manifest(format!("seed: {e}")))?);
            } else if let Some(v) = field.strip_prefix("ratios=") {
                let parts: Vec<u32> = v
                    .split(':')
                    .map(|p| p.parse::<u32>().map_err(|e| SplitError::Manifest(format!("ratios: {e}"))))
                    .collect::<Result<_, _>>()?;
                if parts.len() != 3 {
                    return Err(SplitError::Manifest("ratios need three parts".into()));
                }
                ratios = Some((parts[0], parts[1], parts[2]));
            }
        }
        let mut parts: Vec<Vec<String>> = vec![Vec::new()];
        for l in lines {
            if l.trim().is_empty() {
                parts.push(Vec::new());
            } else {
                parts.last_mut().unwrap().push(l.trim().to_string());
            }
        }
        if parts.len() != 3 {
            return Err(SplitError::Manifest(format!("expected 3 name lists, found {}", parts.len())));
        }
        let holdout = parts.pop().unwrap();
        let devel = parts.pop().unwrap();
        let train = parts.pop().unwrap();
        Ok(Split {
            seed: seed.ok_or_else(|| SplitError::Manifest("missing seed".into()))?,
            ratios: ratios.ok_or_else(|| SplitError::Manifest("missing ratios".into()))?,
            train,
            devel,
            holdout,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("t{i}")).collect()
    }

    #[test]
    fn hundred_names() {
        let s = split_corpus(&names(100), DEFAULT_RATIOS, 1).unwrap();
        assert_eq!((s.train.len(), s.devel.len(), s.holdout.len()), (90, 5, 5));
    }

    #[test]
    fn mizar_scale_sizes() {
        // 52125 + 2896 + 2896 problems in the original split; flooring moves one
        // name from each small part to train.
        let n = 52125 + 2896 + 2896;
        let (t, d, h) = split_sizes(n, DEFAULT_RATIOS);
        assert_eq!((t, d, h), (52127, 2895, 2895));
        assert!(t.abs_diff(52125) <= 2 && d.abs_diff(2896) <= 1 && h.abs_diff(2896) <= 1);
    }

    #[test]
    fn partition_and_determinism() {
        let all = names(257);
        let a = split_corpus(&all, DEFAULT_RATIOS, 7).unwrap();
        let b = split_corpus(&all, DEFAULT_RATIOS, 7).unwrap();
        assert_eq!(a, b);
        let mut seen = HashSet::new();
        for n in a.train.iter().chain(&a.devel).chain(&a.holdout) {
            assert!(seen.insert(n.clone()));
        }
        assert_eq!(seen.len(), all.len());
        let c = split_corpus(&all, DEFAULT_RATIOS, 8).unwrap();
        assert_ne!(a.devel, c.devel);
    }

    #[test]
    fn errors() {
        assert_eq!(split_corpus(&[], DEFAULT_RATIOS, 1), Err(SplitError::Empty));
        assert!(split_corpus(&names(3), (0.5, 0.5, 0.5), 1).is_err());
    }

    #[test]
    fn manifest_round_trip() {
        let s = split_corpus(&names(40), DEFAULT_RATIOS, 3).unwrap();
        let text = s.to_manifest();
        assert!(text.starts_with("seed=3 ratios=90:5:5\n"));
        assert_eq!(Split::from_manifest(&text).unwrap(), s);
    }
}
