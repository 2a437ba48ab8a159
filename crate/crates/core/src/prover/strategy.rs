use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::binsel::GbdtModel;
use crate::features::{FeatureConfig, SparseVector};

/// Probability-like clause score in `[0, 1]`; higher is better.
pub trait ClauseScorer: Send + Sync {
    fn score(&self, v: &SparseVector) -> f64;
}

impl ClauseScorer for GbdtModel {
    fn score(&self, v: &SparseVector) -> f64 {
        self.predict(v)
    }
}

/// Scores every clause with the same value.
#[derive(Debug, Clone, Copy)]
pub struct ConstantScorer(pub f64);

impl ClauseScorer for ConstantScorer {
    fn score(&self, _: &SparseVector) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueueKind {
    AgeFifo,
    SymbolWeight { fweight: u32, vweight: u32 },
}

#[derive(Debug, Error, PartialEq)]
pub enum StrategyError {
    #[error("queue mix is empty")]
    EmptyMix,
    #[error("pick ratios must be positive")]
    ZeroRatio,
    #[error("{0} must lie in [0, 1]")]
    OutOfRange(&'static str),
}

#[derive(Clone)]
pub struct Strategy {
    pub name: String,
    /// Standard queues and their round-robin pick ratios.
    pub queue_mix: Vec<(QueueKind, u32)>,
    /// Model of the ML queue; the queue exists only when a model is set.
    pub enigma: Option<Arc<dyn ClauseScorer>>,
    /// Fraction of picks taken from the ML queue.
    pub coop_ratio: f64,
    pub given_clause_budget: usize,
    pub soft_time_s: Option<f64>,
    /// Model scoring the parents of a new clause, and the freezing threshold.
    pub parental: Option<(Arc<dyn ClauseScorer>, f64)>,
    /// Filters applied in order; a clause scoring below a threshold is set aside.
    pub phases: Vec<(Arc<dyn ClauseScorer>, f64)>,
    pub aggressive_fwd_subsumption: bool,
    /// Feature configuration shared by every model of the strategy.
    pub features: FeatureConfig,
}

impl fmt::Debug for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Strategy")
            .field("name", &self.name)
            .field("queue_mix", &self.queue_mix)
            .field("enigma", &self.enigma.is_some())
            .field("coop_ratio", &self.coop_ratio)
            .field("given_clause_budget", &self.given_clause_budget)
            .field("soft_time_s", &self.soft_time_s)
            .field("parental", &self.parental.as_ref().map(|p| p.1))
            .field("phases", &self.phases.iter().map(|p| p.1).collect::<Vec<_>>())
            .field("aggressive_fwd_subsumption", &self.aggressive_fwd_subsumption)
            .finish()
    }
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            name: "default".into(),
            queue_mix: vec![(QueueKind::AgeFifo, 1), (QueueKind::SymbolWeight { fweight: 2, vweight: 1 }, 4)],
            enigma: None,
            coop_ratio: 0.5,
            given_clause_budget: 2000,
            soft_time_s: None,
            parental: None,
            phases: Vec::new(),
            aggressive_fwd_subsumption: false,
            features: FeatureConfig::default(),
        }
    }
}

impl Strategy {
    pub fn validate(&self) -> Result<(), StrategyError> {
        if self.queue_mix.is_empty() {
            return Err(StrategyError::EmptyMix);
        }
        if self.queue_mix.iter().any(|q| q.1 == 0) {
            return Err(StrategyError::ZeroRatio);
        }
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if !unit(self.coop_ratio) {
            return Err(StrategyError::OutOfRange("coop_ratio"));
        }
        if self.parental.as_ref().is_some_and(|p| !unit(p.1)) {
            return Err(StrategyError::OutOfRange("parental threshold"));
        }
        if self.phases.iter().any(|p| !unit(p.1)) {
            return Err(StrategyError::OutOfRange("phase threshold"));
        }
        Ok(())
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.given_clause_budget = budget;
        self
    }

    pub fn with_enigma(mut self, model: Arc<dyn ClauseScorer>) -> Self {
        self.enigma = Some(model);
        self
    }
}
