//! Sparse clause and formula features: vertical symbol paths, horizontal term
//! shapes, count statistics, conjecture and parent blocks, all hashed into a
//! fixed-size index space.

mod dump;
mod extract;

pub use dump::{parse_labeled_vectors, write_labeled_vectors, DumpError, LabeledVector};
pub use extract::{clause_feature_strings, featurize_clause, featurize_formula, featurize_literals, pair_vector, FeatureStrings};

use std::collections::BTreeSet;

use thiserror::Error;

/// Number of un-hashed count statistics appended after the hashed band.
pub const COUNT_SLOTS: u32 = 5;

/// Names of the count slots in slot order.
pub const COUNT_SLOT_NAMES: [&str; COUNT_SLOTS as usize] = ["symbols", "literals", "positive", "negative", "depth"];

pub const VARIABLE_LABEL: &str = "⊙";
pub const SKOLEM_LABEL: &str = "⊛";
pub const PAD_LABEL: &str = "⊥";
pub const POSITIVE_LABEL: &str = "⊕";
pub const NEGATIVE_LABEL: &str = "⊖";

const FNV_OFFSET: u64 = 14695981039346656037;
const FNV_PRIME: u64 = 1099511628211;

/// FNV-1a (64 bit) of the UTF-8 bytes, reduced modulo `base`.
pub fn hash_feature(feature: &str, base: u64) -> u64 {
    let mut h = FNV_OFFSET;
    for b in feature.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h % base
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FeatureKind {
    Vertical,
    Horizontal,
    Count,
    Conjecture,
    Parent,
}

impl FeatureKind {
    pub fn parse(s: &str) -> Option<FeatureKind> {
        Some(match s {
            "vertical" | "v" => FeatureKind::Vertical,
            "horizontal" | "h" => FeatureKind::Horizontal,
            "count" | "c" => FeatureKind::Count,
            "conjecture" | "conj" => FeatureKind::Conjecture,
            "parent" | "p" => FeatureKind::Parent,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParentMode {
    Concat,
    Sum,
}

#[derive(Debug, Error, PartialEq)]
pub enum FeatureConfigError {
    #[error("hash base must be a power of two >= 256, got {0}")]
    HashBase(u32),
    #[error("at least one feature kind is required")]
    NoKinds,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeatureConfig {
    pub kinds: BTreeSet<FeatureKind>,
    pub anonymize: bool,
    pub hash_base: u32,
    pub parent_mode: ParentMode,
    /// Function symbols starting with this prefix are treated as Skolem symbols.
    pub skolem_prefix: String,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            kinds: [FeatureKind::Vertical, FeatureKind::Horizontal, FeatureKind::Count, FeatureKind::Conjecture].into(),
            anonymize: false,
            hash_base: 1 << 15,
            parent_mode: ParentMode::Sum,
            skolem_prefix: "esk".to_string(),
        }
    }
}

impl FeatureConfig {
    pub fn validate(&self) -> Result<(), FeatureConfigError> {
        if self.hash_base < 256 || !self.hash_base.is_power_of_two() {
            return Err(FeatureConfigError::HashBase(self.hash_base));
        }
        if self.kinds.is_empty() {
            return Err(FeatureConfigError::NoKinds);
        }
        Ok(())
    }

    pub fn has(&self, kind: FeatureKind) -> bool {
        self.kinds.contains(&kind)
    }

    pub fn with_kinds(mut self, kinds: &[FeatureKind]) -> Self {
        self.kinds = kinds.iter().copied().collect();
        self
    }

    /// Number of hashed bands in a pair vector: clause, conjecture and one
    /// (sum) or two (concat) parent bands.
    pub fn pair_bands(&self) -> u32 {
        match self.parent_mode {
            ParentMode::Sum => 3,
            ParentMode::Concat => 4,
        }
    }

    /// First count slot of a pair vector.
    pub fn pair_count_offset(&self) -> u32 {
        self.pair_bands() * self.hash_base
    }

    /// Exclusive upper bound on pair-vector indices.
    pub fn pair_dimension(&self) -> u32 {
        self.pair_count_offset() + COUNT_SLOTS
    }

    /// Exclusive upper bound on single clause/formula vector indices.
    pub fn single_dimension(&self) -> u32 {
        self.hash_base + COUNT_SLOTS
    }
}

/// Sorted `(index, value)` pairs with strictly increasing indices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    entries: Vec<(u32, f64)>,
}

impl SparseVector {
    pub fn new() -> SparseVector {
        SparseVector::default()
    }

    /// Builds a vector from arbitrary pairs; duplicate indices are summed and
    /// zero values dropped.
    pub fn from_pairs(mut pairs: Vec<(u32, f64)>) -> SparseVector {
        pairs.sort_by_key(|p| p.0);
        let mut entries: Vec<(u32, f64)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some(last) if last.0 == i => last.1 += v,
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|e| e.1 != 0.0);
        SparseVector { entries }
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: u32) -> f64 {
        match self.entries.binary_search_by_key(&index, |e| e.0) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0.0,
        }
    }

    pub fn max_index(&self) -> Option<u32> {
        self.entries.last().map(|e| e.0)
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += a[i].1 * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|e| e.1 * e.1).sum::<f64>().sqrt()
    }

    /// Element-wise sum.
    pub fn add(&self, other: &SparseVector) -> SparseVector {
        let mut pairs = self.entries.clone();
        pairs.extend_from_slice(&other.entries);
        SparseVector::from_pairs(pairs)
    }

    pub fn scale(&self, k: f64) -> SparseVector {
        SparseVector::from_pairs(self.entries.iter().map(|&(i, v)| (i, v * k)).collect())
    }

    /// Entries with index in `[lo, hi)`, shifted by `offset`.
    pub fn band(&self, lo: u32, hi: u32, offset: u32) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.entries.iter().filter(move |e| e.0 >= lo && e.0 < hi).map(move |&(i, v)| (i - lo + offset, v))
    }

    /// Indices of the hashed (non-count) part of a single vector.
    pub fn hashed_indices(&self, hash_base: u32) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().filter(move |e| e.0 < hash_base).map(|e| e.0)
    }

    /// Restriction to the hashed band `[0, hash_base)`.
    pub fn hashed_part(&self, hash_base: u32) -> SparseVector {
        SparseVector { entries: self.entries.iter().copied().filter(|e| e.0 < hash_base).collect() }
    }
}
