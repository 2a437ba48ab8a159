//! Declarative run configuration and the workspace it describes.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use lgp_core::corpus::{load_dependency_db, parse_tptp_file, split_corpus, Corpus, DependencyDb, ParseOptions, Provenance, Role, Split};
use lgp_core::ensemble::EnsembleSpec;
use lgp_core::features::{FeatureConfig, FeatureKind, ParentMode};
use lgp_core::prover::{QueueKind, Strategy};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: CorpusSection,
    #[serde(default)]
    pub features: FeatureSection,
    #[serde(default)]
    pub split: SplitSection,
    #[serde(default, rename = "selector")]
    pub selectors: Vec<SelectorSpec>,
    #[serde(default, rename = "strategy")]
    pub strategies: Vec<StrategySpec>,
    #[serde(default, rename = "slice")]
    pub slices: Vec<SliceSpec>,
    #[serde(default, rename = "loop")]
    pub looping: LoopSection,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSection {
    /// Problem files concatenated in order into the corpus.
    pub files: Vec<PathBuf>,
    #[serde(default)]
    pub deps: Vec<PathBuf>,
    pub include_root: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FeatureSection {
    pub hash_bits: u32,
    pub anonymize: bool,
    pub kinds: Vec<String>,
    pub parent_mode: String,
}

impl Default for FeatureSection {
    fn default() -> Self {
        FeatureSection {
            hash_bits: 15,
            anonymize: false,
            kinds: ["vertical", "horizontal", "count", "conjecture"].map(String::from).to_vec(),
            parent_mode: "sum".into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SplitSection {
    pub seed: u64,
    pub ratios: [f64; 3],
}

impl Default for SplitSection {
    fn default() -> Self {
        SplitSection { seed: 0, ratios: [0.90, 0.05, 0.05] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectorKind {
    Knn,
    Nb,
    NbExt,
    Ensemble,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectorSpec {
    pub id: String,
    pub kind: SelectorKind,
    /// Fixed neighbourhood size for k-NN; omitted means the doubling schedule.
    pub k: Option<usize>,
    /// Fusion spec over other selector ids, e.g. `har:knn=.5,nb=.5`.
    pub spec: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategySpec {
    pub id: String,
    /// Use the learned clause model once one exists.
    #[serde(default)]
    pub guided: bool,
    #[serde(default = "half")]
    pub coop_ratio: f64,
    /// Freezing threshold of the parental filter (guided runs only).
    pub parental: Option<f64>,
    #[serde(default = "one")]
    pub age_ratio: u32,
    #[serde(default = "four")]
    pub weight_ratio: u32,
    pub budget_gc: Option<usize>,
}

fn half() -> f64 {
    0.5
}

fn one() -> u32 {
    1
}

fn four() -> u32 {
    4
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceSpec {
    /// Defaults to `strategy@selector-cutoff`.
    pub id: Option<String>,
    pub selector: String,
    pub cutoff: usize,
    pub strategy: String,
}

impl SliceSpec {
    pub fn id(&self) -> String {
        self.id.clone().unwrap_or_else(|| format!("{}@{}-{}", self.strategy, self.selector, self.cutoff))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LoopSection {
    pub rounds: usize,
    pub budget_gc: usize,
    pub gbdt_trees: usize,
    pub gbdt_leaves: usize,
    /// Fewest examples of each class before a clause model is trained.
    pub min_examples: usize,
}

impl Default for LoopSection {
    fn default() -> Self {
        LoopSection { rounds: 1, budget_gc: 500, gbdt_trees: 40, gbdt_leaves: 16, min_examples: 5 }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: RunConfig = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(!self.corpus.files.is_empty(), "corpus.files is empty");
        for f in self.corpus.files.iter().chain(&self.corpus.deps) {
            let p = self.resolve(f);
            ensure!(p.is_file(), "referenced file {} does not exist", p.display());
        }
        self.feature_config()?;
        let selector_ids = unique(self.selectors.iter().map(|s| s.id.as_str()), "selector")?;
        let strategy_ids = unique(self.strategies.iter().map(|s| s.id.as_str()), "strategy")?;
        unique(self.slices.iter().map(SliceSpec::id).collect::<Vec<_>>().iter().map(String::as_str), "slice")?;
        for s in &self.selectors {
            if s.kind == SelectorKind::Ensemble {
                let spec = self.ensemble_spec(s)?;
                for (member, _) in &spec.members {
                    let m = self.selectors.iter().find(|x| &x.id == member);
                    ensure!(
                        m.is_some_and(|m| m.kind != SelectorKind::Ensemble),
                        "ensemble `{}` refers to `{member}`, which is not a plain selector",
                        s.id
                    );
                }
            }
            ensure!(s.k != Some(0), "selector `{}` has k = 0", s.id);
        }
        for s in &self.strategies {
            ensure!((0.0..=1.0).contains(&s.coop_ratio), "strategy `{}`: coop_ratio outside [0, 1]", s.id);
            ensure!(s.parental.map_or(true, |t| (0.0..=1.0).contains(&t)), "strategy `{}`: parental outside [0, 1]", s.id);
            ensure!(s.age_ratio + s.weight_ratio > 0, "strategy `{}` picks from no queue", s.id);
        }
        for s in &self.slices {
            ensure!(selector_ids.contains(s.selector.as_str()), "slice `{}`: unknown selector `{}`", s.id(), s.selector);
            ensure!(strategy_ids.contains(s.strategy.as_str()), "slice `{}`: unknown strategy `{}`", s.id(), s.strategy);
            ensure!(s.cutoff > 0, "slice `{}` has cutoff 0", s.id());
        }
        Ok(())
    }

    pub fn ensemble_spec(&self, s: &SelectorSpec) -> Result<EnsembleSpec> {
        let Some(text) = &s.spec else { bail!("ensemble `{}` has no spec", s.id) };
        Ok(text.parse()?)
    }

    pub fn feature_config(&self) -> Result<FeatureConfig> {
        let f = &self.features;
        ensure!((8..=24).contains(&f.hash_bits), "features.hash_bits must lie in 8..=24");
        let mut kinds = BTreeSet::new();
        for k in &f.kinds {
            kinds.insert(FeatureKind::parse(k).with_context(|| format!("unknown feature kind `{k}`"))?);
        }
        let parent_mode = match f.parent_mode.as_str() {
            "sum" => ParentMode::Sum,
            "concat" => ParentMode::Concat,
            other => bail!("unknown parent_mode `{other}`"),
        };
        let cfg = FeatureConfig { kinds, anonymize: f.anonymize, hash_base: 1 << f.hash_bits, parent_mode, ..FeatureConfig::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn strategy(&self, id: &str) -> Option<&StrategySpec> {
        self.strategies.iter().find(|s| s.id == id)
    }
}

fn unique<'a>(ids: impl Iterator<Item = &'a str>, what: &str) -> Result<BTreeSet<&'a str>> {
    let mut seen = BTreeSet::new();
    for id in ids {
        ensure!(seen.insert(id), "duplicate {what} id `{id}`");
    }
    Ok(seen)
}

/// Base strategy for proof attempts, before any learned model is attached.
pub fn base_strategy(spec: Option<&StrategySpec>, budget: usize, time_s: Option<f64>, features: &FeatureConfig) -> Strategy {
    let mut s = Strategy::default().with_budget(budget);
    if let Some(spec) = spec {
        s.name = spec.id.clone();
        s.coop_ratio = spec.coop_ratio;
        s.queue_mix = [(QueueKind::AgeFifo, spec.age_ratio), (QueueKind::SymbolWeight { fweight: 2, vweight: 1 }, spec.weight_ratio)]
            .into_iter()
            .filter(|q| q.1 > 0)
            .collect();
    }
    s.soft_time_s = time_s;
    s.features = features.clone();
    s
}

/// Corpus, recorded proofs and split loaded from a config.
pub struct Workspace {
    pub cfg: RunConfig,
    pub corpus: Arc<Corpus>,
    pub deps: DependencyDb,
    pub features: FeatureConfig,
    pub split: Split,
}

impl Workspace {
    pub fn load(cfg: RunConfig, include_root: Option<&Path>, seed: Option<u64>) -> Result<Workspace> {
        let root = include_root.map(Path::to_path_buf).or_else(|| cfg.corpus.include_root.as_ref().map(|p| cfg.resolve(p)));
        let mut statements = Vec::new();
        for f in &cfg.corpus.files {
            let path = cfg.resolve(f);
            let opts = ParseOptions { include_root: root.clone().or_else(|| path.parent().map(Path::to_path_buf)), file_label: None };
            statements.extend(parse_tptp_file(&path, &opts)?);
        }
        let corpus = Corpus::from_statements(statements)?;
        let mut deps = DependencyDb::new();
        for d in &cfg.corpus.deps {
            deps.merge(&load_dependency_db(&cfg.resolve(d), &corpus, Provenance::Human)?);
        }
        let theorems: Vec<String> =
            corpus.facts().iter().filter(|f| matches!(f.role, Role::Theorem | Role::Conjecture)).map(|f| f.name.clone()).collect();
        let [a, b, c] = cfg.split.ratios;
        let split = split_corpus(&theorems, (a, b, c), seed.unwrap_or(cfg.split.seed))?;
        let features = cfg.feature_config()?;
        Ok(Workspace { cfg, corpus: Arc::new(corpus), deps, features, split })
    }

    /// Theorems of one split part, in corpus order.
    pub fn part(&self, part: Part) -> Vec<String> {
        let names: BTreeSet<&String> = match part {
            Part::Train => self.split.train.iter().collect(),
            Part::Devel => self.split.devel.iter().collect(),
            Part::Holdout => self.split.holdout.iter().collect(),
        };
        self.corpus.names().filter(|n| names.contains(&n.to_string())).map(String::from).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Part {
    Train,
    Devel,
    Holdout,
}
