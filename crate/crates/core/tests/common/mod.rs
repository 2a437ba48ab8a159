//! Fixture loading and independent reference implementations shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;

use lgp_core::corpus::{parse_tptp, Atom, Clause, Corpus, DependencyDb, Fact, Formula, Literal, Term};
use lgp_core::evalkit::EvalMatrix;
use lgp_core::features::{featurize_formula, FeatureConfig};
use lgp_core::prover::{clausify, ClausifyOptions};
use lgp_core::selectors::Ranking;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Deserialize;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures"))
}

#[derive(Debug, Deserialize)]
pub struct Manifest {
    pub problem: Vec<ProblemEntry>,
    pub leapfrog: LeapfrogEntry,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ProblemEntry {
    pub file: String,
    pub status: String,
    pub group: String,
}

#[derive(Debug, Deserialize)]
pub struct LeapfrogEntry {
    pub file: String,
    pub budget: usize,
    pub keep: usize,
}

pub fn manifest() -> Manifest {
    let text = std::fs::read_to_string(fixture_dir().join("manifest.toml")).unwrap();
    toml::from_str(&text).unwrap()
}

pub fn fixture_text(file: &str) -> String {
    std::fs::read_to_string(fixture_dir().join(file)).unwrap()
}

pub fn fixture_facts(file: &str) -> Vec<Fact> {
    Corpus::from_statements(parse_tptp(&fixture_text(file)).unwrap()).unwrap().facts().to_vec()
}

pub fn fixture_clauses(file: &str) -> Vec<Clause> {
    clausify(&fixture_facts(file), &ClausifyOptions::default())
}

/// Unsat problems of the handcrafted and family groups, in manifest order.
pub fn unsat_suite() -> Vec<ProblemEntry> {
    manifest().problem.into_iter().filter(|p| p.status == "unsat" && p.group != "ground").collect()
}

// ---------------------------------------------------------------------------
// random clauses and renamings

pub const PREDICATES: [(&str, usize); 4] = [("p", 1), ("q", 2), ("r", 0), ("s", 3)];
pub const FUNCTIONS: [(&str, usize); 5] = [("f", 1), ("g", 2), ("h", 1), ("a", 0), ("b", 0)];

pub fn random_term(rng: &mut impl Rng, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.35) {
        return if rng.gen_bool(0.5) {
            Term::Var(rng.gen_range(0..4))
        } else {
            Term::constant(FUNCTIONS[3 + rng.gen_range(0..2)].0)
        };
    }
    let (name, arity) = FUNCTIONS[rng.gen_range(0..FUNCTIONS.len())];
    Term::app(name, (0..arity).map(|_| random_term(rng, depth - 1)).collect())
}

pub fn random_clause(rng: &mut impl Rng) -> Vec<Literal> {
    (0..rng.gen_range(1..=4))
        .map(|_| {
            let (name, arity) = PREDICATES[rng.gen_range(0..PREDICATES.len())];
            let atom = Atom::new(name, (0..arity).map(|_| random_term(rng, 3)).collect());
            if rng.gen_bool(0.5) {
                Literal::pos(atom)
            } else {
                Literal::neg(atom)
            }
        })
        .collect()
}

/// Injective renaming of every symbol to a fresh name of the same arity, plus a
/// permutation of the variables.
#[derive(Debug, Clone)]
pub struct Renaming {
    symbols: HashMap<String, String>,
    vars: Vec<u32>,
}

impl Renaming {
    pub fn random(rng: &mut impl Rng) -> Renaming {
        let mut symbols = HashMap::new();
        let mut used = BTreeSet::new();
        for (name, _) in PREDICATES.iter().chain(FUNCTIONS.iter()) {
            let fresh = loop {
                let len = rng.gen_range(1..6);
                let s: String = (0..len).map(|_| (b'a' + rng.gen_range(0..26u8)) as char).collect();
                let cand = format!("n{s}");
                if used.insert(cand.clone()) {
                    break cand;
                }
            };
            symbols.insert(name.to_string(), fresh);
        }
        let mut vars: Vec<u32> = (0..4).collect();
        vars.shuffle(rng);
        Renaming { symbols, vars }
    }

    pub fn term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => Term::Var(self.vars[*v as usize]),
            Term::App(f, args) => Term::app(&self.symbols[&**f], args.iter().map(|a| self.term(a)).collect()),
        }
    }

    pub fn clause(&self, lits: &[Literal]) -> Vec<Literal> {
        lits.iter()
            .map(|l| Literal {
                positive: l.positive,
                atom: Atom::new(&self.symbols[&*l.atom.pred], l.atom.args.iter().map(|a| self.term(a)).collect()),
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// selector oracles

fn feature_sets(corpus: &Corpus, cfg: &FeatureConfig) -> Vec<BTreeMap<u32, f64>> {
    corpus
        .facts()
        .iter()
        .map(|f| featurize_formula(&f.formula, cfg).entries().iter().filter(|e| e.0 < cfg.hash_base).copied().collect())
        .collect()
}

fn sort_ranking(mut items: Vec<(usize, f64)>, corpus: &Corpus, n: usize) -> Vec<(String, f64)> {
    items.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    items.into_iter().take(n).map(|(s, x)| (corpus.facts()[s].name.clone(), x)).collect()
}

fn cosine(a: &BTreeMap<u32, f64>, b: &BTreeMap<u32, f64>) -> f64 {
    let dot: f64 = a.iter().filter_map(|(i, x)| b.get(i).map(|y| x * y)).sum();
    let na = a.values().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.values().map(|x| x * x).sum::<f64>().sqrt();
    if na * nb > 0.0 {
        dot / (na * nb)
    } else {
        0.0
    }
}

/// k-NN ranking computed directly from the definition; `k = None` is the
/// doubling schedule starting at 4.
pub fn knn_oracle(
    corpus: &Corpus,
    db: &DependencyDb,
    cfg: &FeatureConfig,
    conjecture: &Fact,
    k: Option<usize>,
    n: usize,
) -> Vec<(String, f64)> {
    let sets = feature_sets(corpus, cfg);
    let total = sets.len() as f64;
    let mut df: BTreeMap<u32, usize> = BTreeMap::new();
    for s in &sets {
        for i in s.keys() {
            *df.entry(*i).or_default() += 1;
        }
    }
    let weigh = |v: &BTreeMap<u32, f64>| -> BTreeMap<u32, f64> {
        v.iter().map(|(i, x)| (*i, x * df.get(i).map_or(0.0, |&d| (total / d as f64).ln()))).collect()
    };
    let q = weigh(&sets[conjecture.serial]);
    let mut sims: Vec<(usize, f64)> =
        (0..sets.len()).filter(|&s| s != conjecture.serial).map(|s| (s, cosine(&q, &weigh(&sets[s])))).collect();
    sims.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let score = |k: usize| -> BTreeMap<usize, f64> {
        let mut out: BTreeMap<usize, f64> = BTreeMap::new();
        for &(t, sim) in sims.iter().take(k) {
            *out.entry(t).or_default() += sim;
            let deps: BTreeSet<String> = db.proofs(&corpus.facts()[t].name).iter().flat_map(|p| p.premises.iter().cloned()).collect();
            for d in &deps {
                let ds = corpus.serial(d).unwrap();
                if ds != conjecture.serial {
                    *out.entry(ds).or_default() += sim / deps.len() as f64;
                }
            }
        }
        out
    };
    let scores = match k {
        Some(k) => score(k),
        None => {
            let mut k = 4;
            loop {
                let s = score(k);
                if s.len() >= n || k >= sims.len() {
                    break s;
                }
                k *= 2;
            }
        }
    };
    sort_ranking(scores.into_iter().collect(), corpus, n)
}

/// Naive Bayes ranking recomputed from raw counts with σ = (2, 1, 0.05), μ = 1.
pub fn nb_oracle(corpus: &Corpus, db: &DependencyDb, cfg: &FeatureConfig, extended: bool, conjecture: &Fact, n: usize) -> Vec<(String, f64)> {
    let sets: Vec<BTreeSet<u32>> = feature_sets(corpus, cfg).into_iter().map(|m| m.into_keys().collect()).collect();
    let c = &sets[conjecture.serial];
    let mut items = Vec::new();
    for (s, fact) in corpus.facts().iter().enumerate() {
        if s == conjecture.serial {
            continue;
        }
        let mut uses = 0.0;
        let mut co: BTreeMap<u32, f64> = BTreeMap::new();
        let mut ext: BTreeSet<u32> = if extended { sets[s].clone() } else { BTreeSet::new() };
        for (thm, proofs) in db.iter() {
            let tf = &sets[corpus.serial(thm).unwrap()];
            for p in proofs {
                if p.premises.contains(&fact.name) {
                    uses += 1.0;
                    for f in tf {
                        *co.entry(*f).or_default() += 1.0;
                        ext.insert(*f);
                    }
                }
            }
        }
        let mut score = 2.0 * (uses + 1.0f64).ln();
        for f in c {
            score += if ext.contains(f) {
                ((co.get(f).copied().unwrap_or(0.0) + 1.0) / (uses + 2.0)).ln()
            } else {
                0.05 * (1.0 / (uses + 2.0)).ln()
            };
        }
        items.push((s, score));
    }
    sort_ranking(items, corpus, n)
}

// ---------------------------------------------------------------------------
// evaluation oracles

/// AUC by enumerating every (dependency, ranked non-dependency) pair.
pub fn auc_oracle(ranking: &Ranking, deps: &BTreeSet<String>) -> f64 {
    let names: Vec<&str> = ranking.names().collect();
    let pos = |n: &str| names.iter().position(|x| *x == n);
    let (mut good, mut all) = (0usize, 0usize);
    for d in deps {
        for x in names.iter().filter(|x| !deps.contains(**x)) {
            all += 1;
            if let (Some(pd), Some(px)) = (pos(d), pos(x)) {
                if pd < px {
                    good += 1;
                }
            }
        }
    }
    if all == 0 {
        100.0
    } else {
        100.0 * good as f64 / all as f64
    }
}

/// Largest number of problems any `slots` slices solve together within `slot_s`.
pub fn optimal_cover(m: &EvalMatrix, slots: usize, slot_s: f64) -> usize {
    let masks: Vec<u64> = (0..m.slices.len())
        .map(|s| (0..m.problems.len()).filter(|&p| m.solves(s, p, slot_s)).fold(0u64, |acc, p| acc | (1 << p)))
        .collect();
    let mut best = 0;
    for subset in 0u64..(1 << masks.len()) {
        if subset.count_ones() as usize <= slots {
            let cover = masks.iter().enumerate().filter(|(i, _)| subset >> i & 1 == 1).fold(0u64, |acc, (_, m)| acc | m);
            best = best.max(cover.count_ones() as usize);
        }
    }
    best
}

pub fn random_matrix(rng: &mut impl Rng, slices: usize, problems: usize) -> EvalMatrix {
    let mut m = EvalMatrix::new(Vec::new(), (0..problems).map(|i| format!("p{i:02}")).collect());
    let density = rng.gen_range(0.1..0.6);
    for s in 0..slices {
        let row = (0..problems).map(|_| rng.gen_bool(density).then(|| rng.gen_range(0.01..2.0))).collect();
        m.push_row(&format!("s{s:02}"), row);
    }
    m
}

// ---------------------------------------------------------------------------
// finite models

/// Interpretation over the domain `0..size`: one table per symbol and arity.
pub struct Model {
    pub size: usize,
    tables: HashMap<(String, usize), Vec<usize>>,
}

impl Model {
    fn index(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, a| acc * self.size + a)
    }

    pub fn term(&self, t: &Term, env: &HashMap<u32, usize>) -> usize {
        match t {
            Term::Var(v) => env[v],
            Term::App(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
                self.tables[&(f.to_string(), args.len())][self.index(&vals)]
            }
        }
    }

    pub fn atom(&self, a: &Atom, env: &HashMap<u32, usize>) -> bool {
        let vals: Vec<usize> = a.args.iter().map(|t| self.term(t, env)).collect();
        if a.is_equality() {
            return vals[0] == vals[1];
        }
        self.tables[&(a.pred.to_string(), a.args.len())][self.index(&vals)] == 1
    }

    pub fn formula(&self, f: &Formula, env: &mut HashMap<u32, usize>) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => self.atom(a, env),
            Formula::Not(g) => !self.formula(g, env),
            Formula::And(gs) => gs.iter().all(|g| self.formula(g, env)),
            Formula::Or(gs) => gs.iter().any(|g| self.formula(g, env)),
            Formula::Implies(a, b) => !self.formula(a, env) || self.formula(b, env),
            Formula::Iff(a, b) => self.formula(a, env) == self.formula(b, env),
            Formula::Forall(vs, g) => self.quantify(vs, g, env, true),
            Formula::Exists(vs, g) => self.quantify(vs, g, env, false),
        }
    }

    fn quantify(&self, vs: &[u32], g: &Formula, env: &mut HashMap<u32, usize>, all: bool) -> bool {
        let Some((&v, rest)) = vs.split_first() else { return self.formula(g, env) };
        let saved = env.get(&v).copied();
        let mut result = all;
        for e in 0..self.size {
            env.insert(v, e);
            if self.quantify(rest, g, env, all) != all {
                result = !all;
                break;
            }
        }
        match saved {
            Some(s) => env.insert(v, s),
            None => env.remove(&v),
        };
        result
    }

    /// Truth of a clause under every assignment of its variables.
    pub fn clause(&self, lits: &[Literal]) -> bool {
        let vars: BTreeSet<u32> = lits.iter().flat_map(|l| l.atom.args.iter().flat_map(term_vars)).collect();
        let closed = Formula::Forall(vars.into_iter().collect(), Box::new(Formula::from_literals(lits)));
        self.formula(&closed, &mut HashMap::new())
    }
}

fn term_vars(t: &Term) -> Vec<u32> {
    let mut out = Vec::new();
    t.collect_vars(&mut out);
    out
}

/// Predicate and function symbols with their arities.
#[derive(Debug, Default, Clone)]
pub struct Signature {
    pub predicates: BTreeSet<(String, usize)>,
    pub functions: BTreeSet<(String, usize)>,
}

impl Signature {
    fn add_term(&mut self, t: &Term) {
        if let Term::App(f, args) = t {
            self.functions.insert((f.to_string(), args.len()));
            args.iter().for_each(|a| self.add_term(a));
        }
    }

    pub fn add_atom(&mut self, a: &Atom) {
        if !a.is_equality() {
            self.predicates.insert((a.pred.to_string(), a.args.len()));
        }
        a.args.iter().for_each(|t| self.add_term(t));
    }

    pub fn add_formula(&mut self, f: &Formula) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => self.add_atom(a),
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => self.add_formula(g),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| self.add_formula(g)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.add_formula(a);
                self.add_formula(b);
            }
        }
    }

    pub fn add_clause(&mut self, lits: &[Literal]) {
        lits.iter().for_each(|l| self.add_atom(&l.atom));
    }

    pub fn merge(&mut self, other: &Signature) {
        self.predicates.extend(other.predicates.iter().cloned());
        self.functions.extend(other.functions.iter().cloned());
    }

    /// Calls `visit` on every interpretation of the signature over `0..size`
    /// until it returns `true`; `None` when there are more than `limit` of them.
    pub fn find_model(&self, size: usize, limit: u64, mut visit: impl FnMut(&Model) -> bool) -> Option<bool> {
        let mut digits: Vec<(String, usize, usize, usize)> = Vec::new();
        let mut count: u64 = 1;
        for (name, arity, base) in
            self.predicates.iter().map(|(n, a)| (n, *a, 2)).chain(self.functions.iter().map(|(n, a)| (n, *a, size)))
        {
            let cells = size.pow(arity as u32);
            for c in 0..cells {
                digits.push((name.clone(), arity, c, base));
                count = count.checked_mul(base as u64)?;
            }
        }
        if count > limit {
            return None;
        }
        let mut model = Model { size, tables: HashMap::new() };
        for (name, arity, _, _) in &digits {
            model.tables.entry((name.clone(), *arity)).or_insert_with(|| vec![0; size.pow(*arity as u32)]);
        }
        loop {
            if visit(&model) {
                return Some(true);
            }
            // odometer step
            let mut i = 0;
            loop {
                if i == digits.len() {
                    return Some(false);
                }
                let (name, arity, cell, base) = &digits[i];
                let t = model.tables.get_mut(&(name.clone(), *arity)).unwrap();
                t[*cell] += 1;
                if t[*cell] < *base {
                    break;
                }
                t[*cell] = 0;
                i += 1;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// bundled GBDT data

pub fn bundled_examples() -> Vec<lgp_core::binsel::PairExample> {
    let rows = lgp_core::features::parse_labeled_vectors(&fixture_text("gbdt/clauses.vec")).unwrap();
    rows.into_iter().map(|r| lgp_core::binsel::PairExample { positive: r.label == "+1", vector: r.vector }).collect()
}

/// Feature configuration the bundled data was produced with.
pub fn bundled_features() -> FeatureConfig {
    FeatureConfig { anonymize: true, ..Default::default() }
}

/// Evaluation matrices bundled under `fixtures/matrices`, by file name.
pub fn fixture_matrices() -> Vec<(String, EvalMatrix)> {
    let mut paths: Vec<PathBuf> =
        std::fs::read_dir(fixture_dir().join("matrices")).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let m = EvalMatrix::from_tsv(&std::fs::read_to_string(&p).unwrap()).unwrap();
            (p.file_name().unwrap().to_string_lossy().into_owned(), m)
        })
        .collect()
}
