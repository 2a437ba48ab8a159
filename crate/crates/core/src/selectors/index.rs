use std::collections::HashMap;

use crate::corpus::{Corpus, Fact};
use crate::features::{featurize_formula, FeatureConfig, SparseVector};
use crate::par::{self, Exec};

/// Featurized corpus shared by the selectors.
#[derive(Debug, Clone)]
pub struct FactIndex {
    pub cfg: FeatureConfig,
    names: Vec<String>,
    by_name: HashMap<String, usize>,
    /// Full formula vectors (hashed band plus count slots).
    vectors: Vec<SparseVector>,
    /// Hashed band only; the selectors ignore count statistics.
    hashed: Vec<SparseVector>,
}

impl FactIndex {
    pub fn build(corpus: &Corpus, cfg: &FeatureConfig, exec: Exec) -> FactIndex {
        let vectors = par::map(exec, corpus.facts(), |f| featurize_formula(&f.formula, cfg));
        let hashed = vectors.iter().map(|v| v.hashed_part(cfg.hash_base)).collect();
        let names: Vec<String> = corpus.facts().iter().map(|f| f.name.clone()).collect();
        let by_name = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        FactIndex { cfg: cfg.clone(), names, by_name, vectors, hashed }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, serial: usize) -> &str {
        &self.names[serial]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn serial(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    /// Serial for ordering; names outside the corpus sort last.
    pub fn order_key(&self, name: &str) -> usize {
        self.serial(name).unwrap_or(usize::MAX)
    }

    pub fn vector(&self, serial: usize) -> &SparseVector {
        &self.vectors[serial]
    }

    pub fn hashed(&self, serial: usize) -> &SparseVector {
        &self.hashed[serial]
    }

    /// Full vector of an arbitrary fact: reused when the fact is in the corpus.
    pub fn vector_for(&self, fact: &Fact) -> SparseVector {
        match self.serial(&fact.name) {
            Some(s) if self.names[s] == fact.name => self.vectors[s].clone(),
            _ => featurize_formula(&fact.formula, &self.cfg),
        }
    }

    pub fn hashed_for(&self, fact: &Fact) -> SparseVector {
        self.vector_for(fact).hashed_part(self.cfg.hash_base)
    }
}
