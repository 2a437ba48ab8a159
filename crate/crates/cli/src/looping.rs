//! The prove/learn loop: select, prove, extract training data, retrain.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use lgp_core::binsel::{train_gbdt, GbdtModel, GbdtParams, PairExample};
use lgp_core::corpus::{write_dependencies, DependencyDb, Provenance};
use lgp_core::evalkit::EvalMatrix;
use lgp_core::features::write_labeled_vectors;
use lgp_core::par::{self, Exec};
use lgp_core::prover::{extract_training, print_derivation, TrainingSet, TrainingView};
use lgp_core::selectors::{write_rankings, Ranking};

use crate::config::{base_strategy, Part, Workspace};
use crate::prove::{attempt, problem_for};
use crate::select::{build_index, Selectors};

pub struct LoopOptions {
    pub rounds: usize,
    pub out: PathBuf,
    pub budget_gc: Option<usize>,
    pub time_s: Option<f64>,
    pub exec: Exec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundSummary {
    pub round: usize,
    /// Problems solved in this round.
    pub solved: usize,
    /// Problems solved for the first time.
    pub new: usize,
    pub cumulative_train: usize,
    pub cumulative_devel: usize,
    pub cumulative: usize,
}

pub const SOLVED_LOG: &str = "solved.tsv";

/// Learned clause models carried between rounds.
#[derive(Default)]
struct Guidance {
    clause: Option<Arc<GbdtModel>>,
    parental: Option<Arc<GbdtModel>>,
}

pub fn run_loop(ws: &Workspace, opts: &LoopOptions) -> Result<Vec<RoundSummary>> {
    if opts.rounds == 0 {
        return Ok(Vec::new());
    }
    fs::create_dir_all(&opts.out).with_context(|| format!("creating {}", opts.out.display()))?;
    write(&opts.out.join("split.txt"), &ws.split.to_manifest())?;

    let train: BTreeSet<String> = ws.part(Part::Train).into_iter().collect();
    let devel: BTreeSet<String> = ws.part(Part::Devel).into_iter().collect();
    let problems: Vec<String> = ws.corpus.names().filter(|n| train.contains(*n) || devel.contains(*n)).map(String::from).collect();
    let universe: Vec<String> = ws.corpus.names().map(String::from).collect();
    let index = build_index(ws, opts.exec);
    let slices = &ws.cfg.slices;
    let cutoffs: BTreeMap<&str, usize> = slices.iter().fold(BTreeMap::new(), |mut m, s| {
        let e = m.entry(s.selector.as_str()).or_insert(0);
        *e = (*e).max(s.cutoff);
        m
    });
    let lp = &ws.cfg.looping;

    let mut known = ws.deps.restrict(train.iter().map(String::as_str));
    let mut guidance = Guidance::default();
    let mut clause_data = TrainingSet::default();
    let mut parental_data = TrainingSet::default();
    let wants_parental = ws.cfg.strategies.iter().any(|s| s.guided && s.parental.is_some());
    let mut union: BTreeSet<String> = BTreeSet::new();
    let mut summaries = Vec::new();

    for round in 1..=opts.rounds {
        let dir = opts.out.join(format!("round{round}"));
        fs::create_dir_all(dir.join("proofs"))?;
        let selectors = Selectors::train(ws, &index, &known)?;

        let mut rankings: BTreeMap<&str, BTreeMap<String, Ranking>> = BTreeMap::new();
        for (id, &n) in &cutoffs {
            let ranked = par::map(opts.exec, &problems, |t| {
                let fact = ws.corpus.get(t).expect("problem from corpus");
                selectors.rank(id, fact, n, &universe)
            });
            let mut per = BTreeMap::new();
            for (t, r) in problems.iter().zip(ranked) {
                per.insert(t.clone(), r?);
            }
            write(&dir.join(format!("rankings-{id}.txt")), &write_rankings(&per, true))?;
            rankings.insert(id, per);
        }

        let jobs: Vec<(usize, usize)> = (0..slices.len()).flat_map(|s| (0..problems.len()).map(move |p| (s, p))).collect();
        let attempts = par::map(opts.exec, &jobs, |&(s, p)| {
            let slice = &slices[s];
            let spec = ws.cfg.strategy(&slice.strategy);
            let budget = opts.budget_gc.or(spec.and_then(|x| x.budget_gc)).unwrap_or(lp.budget_gc);
            let mut strategy = base_strategy(spec, budget, opts.time_s, &ws.features);
            if spec.is_some_and(|x| x.guided) {
                if let Some(m) = &guidance.clause {
                    strategy = strategy.with_enigma(m.clone());
                }
                if let (Some(m), Some(t)) = (&guidance.parental, spec.and_then(|x| x.parental)) {
                    strategy.parental = Some((m.clone(), t));
                }
            }
            let theorem = ws.corpus.get(&problems[p]).expect("problem from corpus");
            let ranking = rankings[slice.selector.as_str()][&problems[p]].top(slice.cutoff);
            attempt(&problem_for(&ws.corpus, theorem, &ranking), &strategy)
        });

        let slice_ids: Vec<String> = slices.iter().map(|s| s.id()).collect();
        let mut matrix = EvalMatrix::new(slice_ids, problems.clone());
        let mut found = DependencyDb::new();
        let mut round_clause = TrainingSet::default();
        let mut solved_now = BTreeSet::new();
        for (&(s, p), a) in jobs.iter().zip(&attempts) {
            let Some(used) = &a.used else { continue };
            let name = &problems[p];
            matrix.set(s, p, Some(a.result.stats.picks as f64));
            found.insert(name, used.clone(), Provenance::Atp);
            if solved_now.insert(name.clone()) {
                let proof = a.result.proof.as_deref().unwrap_or_default();
                write(&dir.join("proofs").join(format!("{name}.p")), &print_derivation(proof))?;
            }
            round_clause.extend(extract_training(&a.result, &ws.features, TrainingView::Clause)?);
            if wants_parental {
                parental_data.extend(extract_training(&a.result, &ws.features, TrainingView::Parental)?);
            }
        }
        write(&dir.join("matrix.tsv"), &matrix.to_tsv())?;
        write(&dir.join("atp.deps"), &write_dependencies(&found))?;
        write(&dir.join("training.vec"), &write_labeled_vectors(&round_clause.labeled()))?;
        clause_data.extend(round_clause);
        known.merge(&found);

        guidance.clause = retrain(&clause_data, lp.gbdt_trees, lp.gbdt_leaves, lp.min_examples)?;
        if wants_parental {
            guidance.parental = retrain(&parental_data, lp.gbdt_trees, lp.gbdt_leaves, lp.min_examples)?;
        }
        if let Some(m) = &guidance.clause {
            write(&dir.join("guidance.gbdt"), &m.to_text())?;
        }
        if let Some(m) = &guidance.parental {
            write(&dir.join("parental.gbdt"), &m.to_text())?;
        }

        let new = solved_now.iter().filter(|n| !union.contains(*n)).count();
        union.extend(solved_now.iter().cloned());
        let summary = RoundSummary {
            round,
            solved: solved_now.len(),
            new,
            cumulative_train: union.iter().filter(|n| train.contains(*n)).count(),
            cumulative_devel: union.iter().filter(|n| devel.contains(*n)).count(),
            cumulative: union.len(),
        };
        log::info!("round {round}: solved {} ({} new), {} of {} solved so far", summary.solved, new, union.len(), problems.len());
        summaries.push(summary);
    }
    write(&opts.out.join("known.deps"), &write_dependencies(&known))?;
    write(&opts.out.join(SOLVED_LOG), &solved_log(&summaries))?;
    Ok(summaries)
}

fn retrain(data: &TrainingSet, trees: usize, leaves: usize, min_examples: usize) -> Result<Option<Arc<GbdtModel>>> {
    if data.positives.len() < min_examples || data.negatives.len() < min_examples {
        return Ok(None);
    }
    let examples: Vec<PairExample> = data.examples();
    let params = GbdtParams { n_trees: trees, max_leaves: leaves, ..GbdtParams::default() };
    Ok(Some(Arc::new(train_gbdt(&examples, &params)?.0)))
}

pub fn solved_log(rows: &[RoundSummary]) -> String {
    let mut s = String::from("round\tsolved\tnew\ttrain\tdevel\tcumulative\n");
    for r in rows {
        let _ = writeln!(s, "{}\t{}\t{}\t{}\t{}\t{}", r.round, r.solved, r.new, r.cumulative_train, r.cumulative_devel, r.cumulative);
    }
    s
}

pub fn parse_solved_log(text: &str) -> Result<Vec<RoundSummary>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        let f: Vec<usize> = line.split('\t').map(str::parse).collect::<Result<_, _>>().with_context(|| format!("{SOLVED_LOG} line {}", i + 1))?;
        anyhow::ensure!(f.len() == 6, "{SOLVED_LOG} line {}: expected 6 columns", i + 1);
        rows.push(RoundSummary { round: f[0], solved: f[1], new: f[2], cumulative_train: f[3], cumulative_devel: f[4], cumulative: f[5] });
    }
    Ok(rows)
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
