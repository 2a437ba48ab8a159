//! The fact corpus in canonical order and the proof-dependency database.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use super::ast::{Fact, Role};
use super::tptp::{Body, Statement};

#[derive(Debug, Error, PartialEq)]
pub enum CorpusError {
    #[error("duplicate fact name `{0}`")]
    DuplicateName(String),
    #[error("line {line}: unknown fact `{name}`")]
    UnknownFact { line: usize, name: String },
    #[error("line {line}: premise `{premise}` (serial {premise_serial}) does not precede theorem `{theorem}` (serial {theorem_serial})")]
    NotChronological { line: usize, theorem: String, theorem_serial: usize, premise: String, premise_serial: usize },
    #[error("line {line}: malformed dependency line: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("unknown provenance `{0}`")]
    UnknownProvenance(String),
    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },
}

/// Ordered collection of named facts; position is the canonical serial.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    facts: Vec<Fact>,
    index: HashMap<String, usize>,
}

impl Corpus {
    /// Builds a corpus from parsed statements in file order. `cnf` statements are
    /// kept as their universal closure.
    pub fn from_statements(statements: Vec<Statement>) -> Result<Corpus, CorpusError> {
        let mut corpus = Corpus::default();
        for st in statements {
            let formula = match &st.body {
                Body::Formula(f) => f.clone(),
                Body::Clause(_) => st.formula(),
            };
            corpus.push(st.name, st.role, formula)?;
        }
        Ok(corpus)
    }

    pub fn from_facts(facts: Vec<Fact>) -> Result<Corpus, CorpusError> {
        let mut corpus = Corpus::default();
        for f in facts {
            corpus.push(f.name, f.role, f.formula)?;
        }
        Ok(corpus)
    }

    pub fn push(&mut self, name: String, role: Role, formula: super::ast::Formula) -> Result<usize, CorpusError> {
        if self.index.contains_key(&name) {
            return Err(CorpusError::DuplicateName(name));
        }
        let serial = self.facts.len();
        self.index.insert(name.clone(), serial);
        self.facts.push(Fact { name, role, formula, serial });
        Ok(serial)
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn get(&self, name: &str) -> Option<&Fact> {
        self.index.get(name).map(|&i| &self.facts[i])
    }

    pub fn serial(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.facts.iter().map(|f| f.name.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Human,
    Atp,
    SubproblemMin,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Human => "human",
            Provenance::Atp => "atp",
            Provenance::SubproblemMin => "subproblem",
        }
    }
}

impl std::str::FromStr for Provenance {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "human" => Ok(Provenance::Human),
            "atp" => Ok(Provenance::Atp),
            "subproblem" | "subproblemMin" | "subproblem_min" => Ok(Provenance::SubproblemMin),
            other => Err(CorpusError::UnknownProvenance(other.to_string())),
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One proof's premise set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofDeps {
    pub premises: BTreeSet<String>,
    pub provenance: Provenance,
}

/// Theorem name → alternative proofs, each a deduplicated premise set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DependencyDb {
    entries: BTreeMap<String, Vec<ProofDeps>>,
}

impl DependencyDb {
    pub fn new() -> DependencyDb {
        DependencyDb::default()
    }

    /// Adds a proof; returns false if an identical premise set was already recorded.
    pub fn insert(&mut self, theorem: &str, premises: BTreeSet<String>, provenance: Provenance) -> bool {
        let proofs = self.entries.entry(theorem.to_string()).or_default();
        if proofs.iter().any(|p| p.premises == premises) {
            return false;
        }
        proofs.push(ProofDeps { premises, provenance });
        true
    }

    pub fn proofs(&self, theorem: &str) -> &[ProofDeps] {
        self.entries.get(theorem).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn theorems(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[ProofDeps])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn contains(&self, theorem: &str) -> bool {
        self.entries.contains_key(theorem)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn proof_count(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    /// Union of all alternative premise sets of a theorem.
    pub fn all_premises(&self, theorem: &str) -> BTreeSet<String> {
        self.proofs(theorem).iter().flat_map(|p| p.premises.iter().cloned()).collect()
    }

    /// The smallest premise set (first one on ties).
    pub fn minimal_proof(&self, theorem: &str) -> Option<&ProofDeps> {
        let proofs = self.proofs(theorem);
        let mut best: Option<&ProofDeps> = None;
        for p in proofs {
            if best.map_or(true, |b| p.premises.len() < b.premises.len()) {
                best = Some(p);
            }
        }
        best
    }

    /// Keeps only the listed theorems.
    pub fn restrict<'a>(&self, keep: impl IntoIterator<Item = &'a str>) -> DependencyDb {
        let mut out = DependencyDb::new();
        for t in keep {
            if let Some(p) = self.entries.get(t) {
                out.entries.insert(t.to_string(), p.clone());
            }
        }
        out
    }

    pub fn merge(&mut self, other: &DependencyDb) {
        for (t, proofs) in other.iter() {
            for p in proofs {
                self.insert(t, p.premises.clone(), p.provenance);
            }
        }
    }
}

/// Parses `theorem:premise premise ... [#provenance]` lines, validating every name
/// against the corpus and the chronological constraint.
pub fn parse_dependencies(text: &str, corpus: &Corpus, default: Provenance) -> Result<DependencyDb, CorpusError> {
    let mut db = DependencyDb::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let (body, provenance) = match raw.split_once('#') {
            Some((b, p)) => (b, p.trim().parse::<Provenance>()?),
            None => (raw, default),
        };
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let (theorem, premises) = body
            .split_once(':')
            .ok_or_else(|| CorpusError::Malformed { line, msg: "missing `:`".into() })?;
        let theorem = theorem.trim();
        if theorem.is_empty() {
            return Err(CorpusError::Malformed { line, msg: "empty theorem name".into() });
        }
        let t_serial = corpus
            .serial(theorem)
            .ok_or_else(|| CorpusError::UnknownFact { line, name: theorem.to_string() })?;
        let mut set = BTreeSet::new();
        for p in premises.split_whitespace() {
            let p_serial = corpus.serial(p).ok_or_else(|| CorpusError::UnknownFact { line, name: p.to_string() })?;
            if p_serial >= t_serial {
                return Err(CorpusError::NotChronological {
                    line,
                    theorem: theorem.to_string(),
                    theorem_serial: t_serial,
                    premise: p.to_string(),
                    premise_serial: p_serial,
                });
            }
            set.insert(p.to_string());
        }
        db.insert(theorem, set, provenance);
    }
    Ok(db)
}

pub fn load_dependency_db(path: &Path, corpus: &Corpus, default: Provenance) -> Result<DependencyDb, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(|e| CorpusError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    parse_dependencies(&text, corpus, default)
}

/// Serializes a database, one proof per line with its provenance column.
pub fn write_dependencies(db: &DependencyDb) -> String {
    let mut out = String::new();
    for (t, proofs) in db.iter() {
        for p in proofs {
            out.push_str(t);
            out.push(':');
            let names: Vec<&str> = p.premises.iter().map(String::as_str).collect();
            out.push_str(&names.join(" "));
            out.push_str(" #");
            out.push_str(p.provenance.as_str());
            out.push('\n');
        }
    }
    out
}

/// Restricts the database to knowledge available before `conjecture_serial`:
/// only earlier theorems, and only their proofs whose premises are all earlier.
pub fn chronology_filter(db: &DependencyDb, corpus: &Corpus, conjecture_serial: usize) -> DependencyDb {
    let earlier = |name: &str| corpus.serial(name).map_or(false, |s| s < conjecture_serial);
    let mut out = DependencyDb::new();
    for (t, proofs) in db.iter() {
        if !earlier(t) {
            continue;
        }
        for p in proofs {
            if p.premises.iter().all(|n| earlier(n)) {
                out.insert(t, p.premises.clone(), p.provenance);
            }
        }
    }
    out
}
