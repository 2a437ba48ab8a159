//! Derivation output and training-example extraction.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::saturate::{clause_vector, conjecture_vector, parental_vector, SaturationResult, Status};
use crate::binsel::PairExample;
use crate::corpus::{parse_tptp, print_clause, Body, Clause, GeneralTerm, Origin, ParseError, Role, Rule};
use crate::features::{FeatureConfig, LabeledVector, SparseVector};

#[derive(Debug, Error)]
pub enum ProofError {
    #[error("search did not end in a refutation")]
    NotUnsat,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("derivation line `{0}`: {1}")]
    Malformed(String, String),
}

fn clause_name(id: usize) -> String {
    format!("c{id}")
}

/// One `cnf(c<id>, role, clause, inference(rule, [parents])).` line per clause.
pub fn print_derivation(clauses: &[Clause]) -> String {
    let mut out = String::new();
    for c in clauses {
        let role = match (c.rule, c.origin) {
            (Rule::Input, Origin::ConjectureDerived) => "negated_conjecture",
            (Rule::Input, _) => "axiom",
            _ => "plain",
        };
        let parents: Vec<String> = c.parents.iter().map(|&p| clause_name(p)).collect();
        out.push_str(&format!(
            "cnf({}, {role}, {}, inference({}, [{}])).\n",
            clause_name(c.id),
            print_clause(&c.literals),
            c.rule.as_str(),
            parents.join(", ")
        ));
    }
    out
}

/// Reads back the output of [`print_derivation`].
pub fn parse_derivation(text: &str) -> Result<Vec<Clause>, ProofError> {
    let mut out = Vec::new();
    for st in parse_tptp(text)? {
        let bad = |msg: &str| ProofError::Malformed(st.name.clone(), msg.to_string());
        let id: usize = st.name.strip_prefix('c').and_then(|s| s.parse().ok()).ok_or_else(|| bad("name is not c<id>"))?;
        let Body::Clause(literals) = st.body.clone() else { return Err(bad("not a clause")) };
        let Some(GeneralTerm::App(head, args)) = &st.source else { return Err(bad("missing inference record")) };
        if head != "inference" || args.len() != 2 {
            return Err(bad("expected inference(rule, [parents])"));
        }
        let rule = match &args[0] {
            GeneralTerm::App(r, a) if a.is_empty() => Rule::parse(r).ok_or_else(|| bad("unknown rule"))?,
            _ => return Err(bad("bad rule")),
        };
        let GeneralTerm::List(ps) = &args[1] else { return Err(bad("parents must be a list")) };
        let mut parents = Vec::new();
        for p in ps {
            match p {
                GeneralTerm::App(n, a) if a.is_empty() => {
                    parents.push(n.strip_prefix('c').and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad parent"))?)
                }
                _ => return Err(bad("bad parent")),
            }
        }
        let origin = match (rule, st.role) {
            (Rule::Input, Role::NegatedConjecture) => Origin::ConjectureDerived,
            (Rule::Input, _) => Origin::Axiom,
            _ => Origin::Derived,
        };
        out.push(Clause { id, literals, origin, parents, rule });
    }
    Ok(out)
}

/// Checks that a proof is ancestry-closed, lists parents before children and ends with the empty clause.
pub fn proof_is_well_formed(proof: &[Clause]) -> bool {
    let mut seen = BTreeSet::new();
    for c in proof {
        if !c.parents.iter().all(|p| seen.contains(p)) {
            return false;
        }
        seen.insert(c.id);
    }
    proof.last().is_some_and(Clause::is_empty) && proof[..proof.len() - 1].iter().all(|c| !c.is_empty())
}

/// Which vector a training example carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainingView {
    /// Clause with conjecture (and parents when enabled); for the ML queue and phases.
    Clause,
    /// Parents with conjecture; for the parental filter.
    Parental,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingSet {
    pub positives: Vec<(Clause, SparseVector)>,
    pub negatives: Vec<(Clause, SparseVector)>,
}

impl TrainingSet {
    pub fn examples(&self) -> Vec<PairExample> {
        let pos = self.positives.iter().map(|(_, v)| PairExample { vector: v.clone(), positive: true });
        let neg = self.negatives.iter().map(|(_, v)| PairExample { vector: v.clone(), positive: false });
        pos.chain(neg).collect()
    }

    pub fn labeled(&self) -> Vec<LabeledVector> {
        let row = |label: &str, v: &SparseVector| LabeledVector { label: label.to_string(), vector: v.clone() };
        self.positives.iter().map(|(_, v)| row("+1", v)).chain(self.negatives.iter().map(|(_, v)| row("-1", v))).collect()
    }

    pub fn extend(&mut self, other: TrainingSet) {
        self.positives.extend(other.positives);
        self.negatives.extend(other.negatives);
    }
}

/// Processed clauses on the proof are positives; the other processed clauses are negatives.
pub fn extract_training(result: &SaturationResult, cfg: &FeatureConfig, view: TrainingView) -> Result<TrainingSet, ProofError> {
    if result.status != Status::Unsat {
        return Err(ProofError::NotUnsat);
    }
    let proof = result.proof.as_ref().ok_or(ProofError::NotUnsat)?;
    let on_proof: BTreeSet<usize> = proof.iter().map(|c| c.id).collect();
    let conj = conjecture_vector(&result.clauses, cfg);
    let mut cache: HashMap<usize, SparseVector> = HashMap::new();
    let mut set = TrainingSet::default();
    for &id in &result.trace {
        let v = cache
            .entry(id)
            .or_insert_with(|| match view {
                TrainingView::Clause => clause_vector(&result.clauses, id, &conj, cfg),
                TrainingView::Parental => parental_vector(&result.clauses, &result.clauses[id].parents, &conj, cfg),
            })
            .clone();
        let entry = (result.clauses[id].clone(), v);
        if on_proof.contains(&id) {
            set.positives.push(entry);
        } else {
            set.negatives.push(entry);
        }
    }
    Ok(set)
}
