//! Single-stage commands.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use lgp_core::binsel::{train_gbdt_with, GbdtModel, GbdtParams, Growth, PairExample};
use lgp_core::corpus::{parse_tptp_file, Corpus, ParseOptions};
use lgp_core::evalkit::{compute_metrics, greedy_cover, robust_portfolio, EvalMatrix, MetricsReport, RobustParams, Schedule, RECALL_CAP};
use lgp_core::features::{featurize_clause, featurize_formula, parse_labeled_vectors, write_labeled_vectors, FeatureConfig, LabeledVector};
use lgp_core::par::Exec;
use lgp_core::prover::{clausify, extract_training, print_derivation, saturate, ClausifyOptions, Status, Strategy, TrainingView};
use lgp_core::selectors::{parse_rankings, write_rankings, Ranking};

use crate::config::{Part, Workspace};
use crate::select::{build_index, Selectors};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn problem_facts(path: &Path, include_root: Option<&Path>) -> Result<Corpus> {
    let opts = ParseOptions { include_root: include_root.or(path.parent()).map(Path::to_path_buf), file_label: None };
    Ok(Corpus::from_statements(parse_tptp_file(path, &opts)?)?)
}

/// One labeled vector per formula, or per clause with `clauses`.
pub fn featurize(input: &Path, clauses: bool, include_root: Option<&Path>, cfg: &FeatureConfig) -> Result<Vec<LabeledVector>> {
    let corpus = problem_facts(input, include_root)?;
    let rows = if clauses {
        clausify(corpus.facts(), &ClausifyOptions::default())
            .iter()
            .map(|c| LabeledVector { label: format!("c{}", c.id), vector: featurize_clause(c, cfg) })
            .collect()
    } else {
        corpus.facts().iter().map(|f| LabeledVector { label: f.name.clone(), vector: featurize_formula(&f.formula, cfg) }).collect()
    };
    Ok(rows)
}

pub struct TrainOptions {
    pub trees: usize,
    pub learning_rate: f64,
    pub leaves: usize,
    pub level_wise: bool,
}

/// Trains a clause model on `+1`/`-1` labeled vectors.
pub fn train(data: &Path, opts: &TrainOptions, exec: Exec) -> Result<GbdtModel> {
    let rows = parse_labeled_vectors(&read(data)?)?;
    let mut examples = Vec::with_capacity(rows.len());
    for r in rows {
        let positive = match r.label.as_str() {
            "+1" | "1" => true,
            "-1" | "0" => false,
            other => bail!("label `{other}` is not +1 or -1"),
        };
        examples.push(PairExample { vector: r.vector, positive });
    }
    let growth = if opts.level_wise { Growth::LevelWise } else { Growth::LeafWise };
    let params = GbdtParams { n_trees: opts.trees, learning_rate: opts.learning_rate, max_leaves: opts.leaves, growth, ..GbdtParams::default() };
    let (model, log) = train_gbdt_with(&examples, &params, exec)?;
    log::info!("trained {} trees, final loss {:.6}", model.trees.len(), log.loss.last().copied().unwrap_or(f64::NAN));
    Ok(model)
}

/// Chronological rankings for the theorems of `part`, trained on the proofs of the train part.
pub fn select(ws: &Workspace, selector: &str, part: Part, n: usize, exec: Exec) -> Result<BTreeMap<String, Ranking>> {
    let db = ws.deps.restrict(ws.split.train.iter().map(String::as_str));
    let selectors = Selectors::train(ws, &build_index(ws, exec), &db)?;
    if !selectors.ids().any(|id| id == selector) {
        bail!("unknown selector `{selector}`");
    }
    let universe: Vec<String> = ws.corpus.names().map(String::from).collect();
    let mut out = BTreeMap::new();
    for t in ws.part(part) {
        let fact = ws.corpus.get(&t).expect("theorem from corpus");
        out.insert(t, selectors.rank(selector, fact, n, &universe)?);
    }
    Ok(out)
}

pub struct ProveOutcome {
    pub status: Status,
    pub picks: usize,
    pub proof: Option<String>,
    pub training: Option<Vec<LabeledVector>>,
}

pub fn prove(problem: &Path, include_root: Option<&Path>, strategy: Strategy, model: Option<&Path>, with_training: bool) -> Result<ProveOutcome> {
    let corpus = problem_facts(problem, include_root)?;
    let strategy = match model {
        Some(p) => strategy.with_enigma(Arc::new(GbdtModel::from_text(&read(p)?)?)),
        None => strategy,
    };
    strategy.validate()?;
    let clauses = clausify(corpus.facts(), &ClausifyOptions::default());
    let r = saturate(&clauses, &strategy);
    let proof = r.proof.as_deref().map(print_derivation);
    let training = match (with_training, r.status) {
        (true, Status::Unsat) => Some(extract_training(&r, &strategy.features, TrainingView::Clause)?.labeled()),
        _ => None,
    };
    Ok(ProveOutcome { status: r.status, picks: r.stats.picks, proof, training })
}

/// Averages ranking metrics over the theorems listed in a rankings file.
pub fn eval(ws: &Workspace, rankings: &Path, n: usize, name: &str) -> Result<MetricsReport> {
    let rankings = parse_rankings(&read(rankings)?)?;
    let theorems: Vec<&str> = rankings.keys().map(String::as_str).filter(|t| ws.deps.minimal_proof(t).is_some_and(|p| !p.premises.is_empty())).collect();
    let m = compute_metrics(&rankings, &ws.deps, theorems, n, RECALL_CAP)?;
    Ok(MetricsReport { n, rows: vec![(name.to_string(), m)] })
}

pub fn portfolio(matrix: &Path, budget: f64, slot: f64, robust: bool, seed: u64, exec: Exec) -> Result<Schedule> {
    let m = EvalMatrix::from_tsv(&read(matrix)?)?;
    Ok(if robust {
        let p = RobustParams { seed, ..RobustParams::default() };
        let out = robust_portfolio(&m, budget, slot, &p, exec)?;
        log::info!("robust winner gap {:.3} over {} candidates", out.winner.d, out.candidates.len());
        out.winner.schedule
    } else {
        greedy_cover(&m, budget, slot)?.schedule
    })
}

pub fn rankings_text(r: &BTreeMap<String, Ranking>) -> String {
    write_rankings(r, true)
}

pub fn vectors_text(rows: &[LabeledVector]) -> String {
    write_labeled_vectors(rows)
}
