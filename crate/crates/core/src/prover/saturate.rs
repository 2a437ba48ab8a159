//! The given-clause loop.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};
use std::time::Instant;

use super::calculus::{factors, is_tautology, normalize, resolvents, subsumes, symbol_weight};
use super::strategy::{QueueKind, Strategy};
use crate::corpus::{Clause, Origin, Rule};
use crate::features::{featurize_literals, pair_vector, FeatureConfig, FeatureKind, SparseVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Unsat,
    SaturatedSat,
    BudgetOut,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Unsat => "unsat",
            Status::SaturatedSat => "saturatedSat",
            Status::BudgetOut => "budgetOut",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub processed: usize,
    pub generated: usize,
    pub frozen: usize,
    pub phase_rejected: usize,
    pub subsumed: usize,
    /// Given-clause selections, including those discarded on selection.
    pub picks: usize,
}

#[derive(Debug, Clone)]
pub struct SaturationResult {
    pub status: Status,
    /// Ancestry of the empty clause in id order, ending with it.
    pub proof: Option<Vec<Clause>>,
    pub stats: Stats,
    /// Ids of processed clauses in processing order.
    pub trace: Vec<usize>,
    /// Every clause seen by the search, indexed by id.
    pub clauses: Vec<Clause>,
}

impl SaturationResult {
    pub fn processed(&self) -> impl Iterator<Item = &Clause> {
        self.trace.iter().map(|&i| &self.clauses[i])
    }

    pub fn conjecture_clauses(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| c.rule == Rule::Input && c.origin == Origin::ConjectureDerived)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

type Queue = BinaryHeap<Reverse<(Key, usize)>>;

/// Conjecture vector: sum of the features of the conjecture clauses.
pub fn conjecture_vector(clauses: &[Clause], cfg: &FeatureConfig) -> SparseVector {
    clauses
        .iter()
        .filter(|c| c.rule == Rule::Input && c.origin == Origin::ConjectureDerived)
        .fold(SparseVector::new(), |acc, c| acc.add(&featurize_literals(&c.literals, cfg)))
}

/// Vector scored by clause models.
pub fn clause_vector(clauses: &[Clause], id: usize, conjecture: &SparseVector, cfg: &FeatureConfig) -> SparseVector {
    let c = &clauses[id];
    let parents: Vec<SparseVector> = c.parents.iter().map(|&p| featurize_literals(&clauses[p].literals, cfg)).collect();
    pair_vector(conjecture, &featurize_literals(&c.literals, cfg), Some(&parents), cfg)
}

/// Vector scored by parental models: parents only, whatever `cfg` says about parents.
pub fn parental_vector(clauses: &[Clause], parents: &[usize], conjecture: &SparseVector, cfg: &FeatureConfig) -> SparseVector {
    let mut pcfg = cfg.clone();
    pcfg.kinds.insert(FeatureKind::Parent);
    let pv: Vec<SparseVector> = parents.iter().map(|&p| featurize_literals(&clauses[p].literals, &pcfg)).collect();
    pair_vector(conjecture, &SparseVector::new(), Some(&pv), &pcfg)
}

struct Search<'s> {
    strategy: &'s Strategy,
    clauses: Vec<Clause>,
    conjecture: SparseVector,
    queues: Vec<(QueueKind, Queue)>,
    enigma: Queue,
    cycle: Vec<usize>,
    rr: usize,
    enigma_picks: u64,
    picked: Vec<bool>,
    processed: Vec<usize>,
    freezer: Vec<usize>,
    phase_bin: Vec<usize>,
    stats: Stats,
}

impl Search<'_> {
    fn enqueue(&mut self, id: usize) {
        let lits = &self.clauses[id].literals;
        for (kind, q) in &mut self.queues {
            let key = match kind {
                QueueKind::AgeFifo => 0.0,
                QueueKind::SymbolWeight { fweight, vweight } => symbol_weight(lits, *fweight, *vweight) as f64,
            };
            q.push(Reverse((Key(key), id)));
        }
        if let Some(model) = &self.strategy.enigma {
            let v = clause_vector(&self.clauses, id, &self.conjecture, &self.strategy.features);
            self.enigma.push(Reverse((Key(-model.score(&v)), id)));
        }
    }

    fn pop(q: &mut Queue, picked: &[bool]) -> Option<usize> {
        while let Some(Reverse((_, id))) = q.pop() {
            if !picked[id] {
                return Some(id);
            }
        }
        None
    }

    fn pick(&mut self) -> Option<usize> {
        let n = self.stats.picks as u64;
        if self.strategy.enigma.is_some() && ((n + 1) as f64 * self.strategy.coop_ratio).floor() as u64 > self.enigma_picks {
            self.enigma_picks += 1;
            if let Some(id) = Self::pop(&mut self.enigma, &self.picked) {
                return Some(id);
            }
        }
        for k in 0..self.cycle.len() {
            let qi = self.cycle[(self.rr + k) % self.cycle.len()];
            if let Some(id) = Self::pop(&mut self.queues[qi].1, &self.picked) {
                self.rr = (self.rr + k + 1) % self.cycle.len();
                return Some(id);
            }
        }
        Self::pop(&mut self.enigma, &self.picked)
    }

    fn subsumed_by_processed(&self, lits: &[crate::corpus::Literal]) -> bool {
        self.processed.iter().any(|&p| subsumes(&self.clauses[p].literals, lits))
    }

    fn proof(&self, empty: usize) -> Vec<Clause> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![empty];
        while let Some(i) = stack.pop() {
            if seen.insert(i) {
                stack.extend(self.clauses[i].parents.iter().copied());
            }
        }
        seen.into_iter().map(|i| self.clauses[i].clone()).collect()
    }

    fn finish(self, status: Status, empty: Option<usize>) -> SaturationResult {
        let proof = empty.map(|e| self.proof(e));
        SaturationResult { status, proof, stats: self.stats, trace: self.processed, clauses: self.clauses }
    }

    /// Applies the child filters; returns whether the clause entered the queues.
    fn admit(&mut self, id: usize) -> bool {
        let s = self.strategy;
        if let Some((model, threshold)) = &s.parental {
            let v = parental_vector(&self.clauses, &self.clauses[id].parents, &self.conjecture, &s.features);
            if model.score(&v) < *threshold {
                self.stats.frozen += 1;
                self.freezer.push(id);
                return false;
            }
        }
        if s.aggressive_fwd_subsumption && self.subsumed_by_processed(&self.clauses[id].literals) {
            self.stats.subsumed += 1;
            return false;
        }
        if !s.phases.is_empty() {
            let v = clause_vector(&self.clauses, id, &self.conjecture, &s.features);
            for (model, threshold) in &s.phases {
                if model.score(&v) < *threshold {
                    self.stats.phase_rejected += 1;
                    self.phase_bin.push(id);
                    return false;
                }
            }
        }
        self.enqueue(id);
        true
    }
}

/// Runs the given-clause loop on `input` (ids must be `0..input.len()`).
pub fn saturate(input: &[Clause], strategy: &Strategy) -> SaturationResult {
    let start = Instant::now();
    let mut cycle = Vec::new();
    for (i, (_, ratio)) in strategy.queue_mix.iter().enumerate() {
        cycle.extend(std::iter::repeat(i).take(*ratio as usize));
    }
    let clauses: Vec<Clause> = input
        .iter()
        .enumerate()
        .map(|(i, c)| Clause { id: i, literals: normalize(&c.literals), ..c.clone() })
        .collect();
    let conjecture = conjecture_vector(&clauses, &strategy.features);
    let mut s = Search {
        strategy,
        picked: vec![false; clauses.len()],
        clauses,
        conjecture,
        queues: strategy.queue_mix.iter().map(|(k, _)| (*k, Queue::new())).collect(),
        enigma: Queue::new(),
        cycle,
        rr: 0,
        enigma_picks: 0,
        processed: Vec::new(),
        freezer: Vec::new(),
        phase_bin: Vec::new(),
        stats: Stats::default(),
    };
    for id in 0..s.clauses.len() {
        if s.clauses[id].is_empty() {
            return s.finish(Status::Unsat, Some(id));
        }
        if !is_tautology(&s.clauses[id].literals) {
            s.enqueue(id);
        }
    }
    loop {
        if s.stats.picks >= strategy.given_clause_budget || strategy.soft_time_s.is_some_and(|t| start.elapsed().as_secs_f64() > t) {
            return s.finish(Status::BudgetOut, None);
        }
        let Some(g) = s.pick() else {
            if s.freezer.is_empty() && s.phase_bin.is_empty() {
                return s.finish(Status::SaturatedSat, None);
            }
            let mut back: Vec<usize> = s.freezer.drain(..).chain(s.phase_bin.drain(..)).collect();
            back.sort_unstable();
            for id in back {
                s.enqueue(id);
            }
            continue;
        };
        s.stats.picks += 1;
        s.picked[g] = true;
        if s.subsumed_by_processed(&s.clauses[g].literals) {
            s.stats.subsumed += 1;
            continue;
        }
        s.processed.push(g);
        s.stats.processed += 1;

        let given = s.clauses[g].literals.clone();
        let mut children: Vec<(Vec<crate::corpus::Literal>, Vec<usize>, Rule)> = Vec::new();
        for &p in &s.processed {
            for r in resolvents(&given, &s.clauses[p].literals) {
                children.push((r.literals, if p == g { vec![g] } else { vec![g, p] }, Rule::Resolution));
            }
        }
        for f in factors(&given) {
            children.push((f, vec![g], Rule::Factoring));
        }
        for (literals, parents, rule) in children {
            s.stats.generated += 1;
            if is_tautology(&literals) {
                continue;
            }
            let id = s.clauses.len();
            let empty = literals.is_empty();
            s.clauses.push(Clause { id, literals, origin: Origin::Derived, parents, rule });
            s.picked.push(false);
            if empty {
                return s.finish(Status::Unsat, Some(id));
            }
            s.admit(id);
        }
    }
}
