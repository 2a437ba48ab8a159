//! Conversion of first-order facts to clauses: negation normal form,
//! Skolemization, prenexing and distribution.

use std::collections::HashMap;

use super::calculus::normalize;
use crate::corpus::{Atom, Clause, Fact, Formula, Literal, Origin, Role, Term};

#[derive(Debug, Clone, Default)]
pub struct ClausifyOptions {
    /// Add the clause `X = X`.
    pub reflexivity: bool,
    /// Prefix of Skolem symbols (`<prefix><i>_<arity>`).
    pub skolem_prefix: Option<String>,
}

/// NNF over atoms, with quantifiers kept.
#[derive(Debug, Clone, PartialEq)]
enum Nnf {
    Lit(Literal),
    True,
    False,
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    All(Vec<u32>, Box<Nnf>),
    Ex(Vec<u32>, Box<Nnf>),
}

struct Clausifier {
    next_var: u32,
    next_skolem: usize,
    prefix: String,
}

impl Clausifier {
    fn fresh(&mut self) -> u32 {
        let v = self.next_var;
        self.next_var += 1;
        v
    }

    /// Negation normal form with every bound variable renamed to a fresh one.
    fn nnf(&mut self, f: &Formula, positive: bool, env: &HashMap<u32, u32>) -> Nnf {
        let rename = |a: &Atom, env: &HashMap<u32, u32>| a.map_vars(&mut |v| Term::Var(env.get(&v).copied().unwrap_or(v)));
        match f {
            Formula::True => if positive { Nnf::True } else { Nnf::False },
            Formula::False => if positive { Nnf::False } else { Nnf::True },
            Formula::Atom(a) => Nnf::Lit(Literal { positive, atom: rename(a, env) }),
            Formula::Not(g) => self.nnf(g, !positive, env),
            Formula::And(gs) | Formula::Or(gs) => {
                let parts = gs.iter().map(|g| self.nnf(g, positive, env)).collect();
                if matches!(f, Formula::And(_)) == positive { Nnf::And(parts) } else { Nnf::Or(parts) }
            }
            Formula::Implies(a, b) => {
                let (na, nb) = (self.nnf(a, !positive, env), self.nnf(b, positive, env));
                if positive { Nnf::Or(vec![na, nb]) } else { Nnf::And(vec![na, nb]) }
            }
            Formula::Iff(a, b) => {
                let (pa, pb) = (self.nnf(a, true, env), self.nnf(b, true, env));
                let (na, nb) = (self.nnf(a, false, env), self.nnf(b, false, env));
                if positive {
                    Nnf::And(vec![Nnf::Or(vec![na, pb]), Nnf::Or(vec![nb, pa])])
                } else {
                    Nnf::Or(vec![Nnf::And(vec![pa, nb]), Nnf::And(vec![na, pb])])
                }
            }
            Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
                let mut inner = env.clone();
                let fresh: Vec<u32> = vs.iter().map(|&v| {
                    let n = self.fresh();
                    inner.insert(v, n);
                    n
                }).collect();
                let body = Box::new(self.nnf(g, positive, &inner));
                if matches!(f, Formula::Forall(..)) == positive { Nnf::All(fresh, body) } else { Nnf::Ex(fresh, body) }
            }
        }
    }

    /// Replaces existential variables by Skolem terms over all enclosing universals
    /// and drops the universal quantifiers.
    fn skolemize(&mut self, f: Nnf, universals: &mut Vec<u32>, sub: &mut HashMap<u32, Term>) -> Nnf {
        match f {
            Nnf::Lit(l) => Nnf::Lit(l.map_vars(&mut |v| sub.get(&v).cloned().unwrap_or(Term::Var(v)))),
            Nnf::True | Nnf::False => f,
            Nnf::And(gs) => Nnf::And(gs.into_iter().map(|g| self.skolemize(g, universals, sub)).collect()),
            Nnf::Or(gs) => Nnf::Or(gs.into_iter().map(|g| self.skolemize(g, universals, sub)).collect()),
            Nnf::All(vs, g) => {
                let n = universals.len();
                universals.extend(&vs);
                let out = self.skolemize(*g, universals, sub);
                universals.truncate(n);
                out
            }
            Nnf::Ex(vs, g) => {
                for v in vs {
                    let name = format!("{}{}_{}", self.prefix, self.next_skolem, universals.len());
                    self.next_skolem += 1;
                    sub.insert(v, Term::app(&name, universals.iter().map(|&u| Term::Var(u)).collect()));
                }
                self.skolemize(*g, universals, sub)
            }
        }
    }
}

/// Conjunctive normal form of a quantifier-free NNF by distribution.
fn cnf(f: &Nnf) -> Vec<Vec<Literal>> {
    match f {
        Nnf::Lit(l) => vec![vec![l.clone()]],
        Nnf::True => vec![],
        Nnf::False => vec![vec![]],
        Nnf::And(gs) => gs.iter().flat_map(cnf).collect(),
        Nnf::Or(gs) => {
            let mut acc: Vec<Vec<Literal>> = vec![vec![]];
            for g in gs {
                let part = cnf(g);
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for a in &acc {
                    for p in &part {
                        let mut c = a.clone();
                        c.extend(p.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
            }
            acc
        }
        Nnf::All(..) | Nnf::Ex(..) => unreachable!("quantifiers are removed before distribution"),
    }
}

fn universal_closure(f: &Formula) -> Formula {
    let free: Vec<u32> = f.free_vars().into_iter().collect();
    if free.is_empty() {
        f.clone()
    } else {
        Formula::Forall(free, Box::new(f.clone()))
    }
}

/// Clause literal lists of one fact; conjectures are negated first.
pub fn clausify_formula(f: &Formula, role: Role, skolem_prefix: &str, skolem_counter: &mut usize) -> Vec<Vec<Literal>> {
    let closed = universal_closure(f);
    let goal = if role == Role::Conjecture { Formula::not(closed) } else { closed };
    let max_var = goal.free_vars().into_iter().chain(bound_vars(&goal)).max().map_or(0, |m| m + 1);
    let mut c = Clausifier { next_var: max_var, next_skolem: *skolem_counter, prefix: skolem_prefix.to_string() };
    let nnf = c.nnf(&goal, true, &HashMap::new());
    let sk = c.skolemize(nnf, &mut Vec::new(), &mut HashMap::new());
    *skolem_counter = c.next_skolem;
    cnf(&sk).into_iter().map(|lits| normalize(&lits)).collect()
}

fn bound_vars(f: &Formula) -> Vec<u32> {
    match f {
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => vs.iter().copied().chain(bound_vars(g)).collect(),
        Formula::Not(g) => bound_vars(g),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().flat_map(bound_vars).collect(),
        Formula::Implies(a, b) | Formula::Iff(a, b) => bound_vars(a).into_iter().chain(bound_vars(b)).collect(),
        Formula::True | Formula::False | Formula::Atom(_) => vec![],
    }
}

/// Clauses of all facts with ids `0..`; conjecture-derived clauses are marked as such.
pub fn clausify(facts: &[Fact], opts: &ClausifyOptions) -> Vec<Clause> {
    clausify_with_sources(facts, opts).0
}

/// Like [`clausify`], also returning for each clause the index of the fact it
/// came from (`None` for the reflexivity clause).
pub fn clausify_with_sources(facts: &[Fact], opts: &ClausifyOptions) -> (Vec<Clause>, Vec<Option<usize>>) {
    let prefix = opts.skolem_prefix.as_deref().unwrap_or("esk");
    let mut counter = 0usize;
    let (mut out, mut sources) = (Vec::new(), Vec::new());
    for (i, fact) in facts.iter().enumerate() {
        let origin = match fact.role {
            Role::Conjecture | Role::NegatedConjecture => Origin::ConjectureDerived,
            _ => Origin::Axiom,
        };
        for lits in clausify_formula(&fact.formula, fact.role, prefix, &mut counter) {
            out.push(Clause::input(out.len(), lits, origin));
            sources.push(Some(i));
        }
    }
    if opts.reflexivity {
        let refl = vec![Literal::pos(Atom::equality(Term::Var(0), Term::Var(0)))];
        out.push(Clause::input(out.len(), refl, Origin::Axiom));
        sources.push(None);
    }
    (out, sources)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_tptp, Corpus};

    fn clauses(text: &str) -> Vec<Clause> {
        let c = Corpus::from_statements(parse_tptp(text).unwrap()).unwrap();
        clausify(c.facts(), &ClausifyOptions::default())
    }

    fn show(cs: &[Clause]) -> Vec<String> {
        cs.iter().map(|c| crate::corpus::print_clause(&c.literals)).collect()
    }

    #[test]
    fn implication() {
        assert_eq!(show(&clauses("fof(a, axiom, ! [X]: (p(X) => q(X))).")), ["(~ p(X0) | q(X0))"]);
    }

    #[test]
    fn negated_existential_conjecture() {
        let cs = clauses("fof(c, conjecture, ? [X]: p(X)).");
        assert_eq!(show(&cs), ["~ p(X0)"]);
        assert_eq!(cs[0].origin, Origin::ConjectureDerived);
    }

    #[test]
    fn skolem_functions_take_enclosing_universals() {
        let cs = clauses("fof(a, axiom, ! [X]: ? [Y]: r(X, Y)).");
        assert_eq!(show(&cs), ["r(X0,esk0_1(X0))"]);
        let cs = clauses("fof(a, axiom, ? [Y]: ! [X]: r(X, Y)).");
        assert_eq!(show(&cs), ["r(X0,esk0_0)"]);
    }

    #[test]
    fn distribution_and_equivalence() {
        let cs = clauses("fof(a, axiom, (p <=> q)).");
        assert_eq!(show(&cs), ["(~ p | q)", "(~ q | p)"]);
        let cs = clauses("fof(a, axiom, ((p & q) | r)).");
        assert_eq!(show(&cs), ["(p | r)", "(q | r)"]);
    }

    #[test]
    fn reflexivity_flag() {
        let c = Corpus::from_statements(parse_tptp("fof(a, axiom, a = b).").unwrap()).unwrap();
        let cs = clausify(c.facts(), &ClausifyOptions { reflexivity: true, ..Default::default() });
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[1].literals[0].atom.args, vec![Term::Var(0), Term::Var(0)]);
    }
}
