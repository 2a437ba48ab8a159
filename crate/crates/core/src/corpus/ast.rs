//! First-order syntax shared by the parser, the featurizer and the prover.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Interned-by-sharing symbol name.
pub type Symbol = Arc<str>;

/// Reserved predicate symbol for equality atoms.
pub const EQUALITY: &str = "=";

pub fn sym(name: &str) -> Symbol {
    Arc::from(name)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// Variables are numbered per formula/clause in order of first occurrence.
    Var(u32),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn constant(name: &str) -> Term {
        Term::App(sym(name), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(sym(name), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Depth of the term tree; variables and constants have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Number of symbol occurrences (variables included).
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn occurs(&self, var: u32) -> bool {
        match self {
            Term::Var(v) => *v == var,
            Term::App(_, args) => args.iter().any(|a| a.occurs(var)),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<u32>) {
        match self {
            Term::Var(v) => out.push(*v),
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        match self {
            Term::Var(v) => Some(*v),
            Term::App(_, args) => args.iter().filter_map(Term::max_var).max(),
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(u32) -> Term) -> Term {
        match self {
            Term::Var(v) => f(*v),
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Atom {
        Atom { pred: sym(pred), args }
    }

    pub fn equality(lhs: Term, rhs: Term) -> Atom {
        Atom { pred: sym(EQUALITY), args: vec![lhs, rhs] }
    }

    pub fn is_equality(&self) -> bool {
        &*self.pred == EQUALITY
    }

    pub fn map_vars(&self, f: &mut impl FnMut(u32) -> Term) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|a| a.map_vars(f)).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal { positive: true, atom }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal { positive: false, atom }
    }

    pub fn negated(&self) -> Literal {
        Literal { positive: !self.positive, atom: self.atom.clone() }
    }

    pub fn is_ground(&self) -> bool {
        self.atom.args.iter().all(Term::is_ground)
    }

    pub fn map_vars(&self, f: &mut impl FnMut(u32) -> Term) -> Literal {
        Literal { positive: self.positive, atom: self.atom.map_vars(f) }
    }

    pub fn max_var(&self) -> Option<u32> {
        self.atom.args.iter().filter_map(Term::max_var).max()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Vec<u32>, Box<Formula>),
    Exists(Vec<u32>, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Universal closure of a clause body.
    pub fn from_literals(lits: &[Literal]) -> Formula {
        let disj: Vec<Formula> = lits
            .iter()
            .map(|l| {
                let a = Formula::Atom(l.atom.clone());
                if l.positive {
                    a
                } else {
                    Formula::not(a)
                }
            })
            .collect();
        match disj.len() {
            0 => Formula::False,
            1 => disj.into_iter().next().unwrap(),
            _ => Formula::Or(disj),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<u32> {
        fn go(f: &Formula, bound: &mut Vec<u32>, out: &mut BTreeSet<u32>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Atom(a) => {
                    let mut vs = Vec::new();
                    a.args.iter().for_each(|t| t.collect_vars(&mut vs));
                    out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
                }
                Formula::Not(g) => go(g, bound, out),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| go(g, bound, out)),
                Formula::Implies(a, b) | Formula::Iff(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
                    let n = bound.len();
                    bound.extend(vs.iter().copied());
                    go(g, bound, out);
                    bound.truncate(n);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// All atoms in the formula, in traversal order.
    pub fn atoms(&self) -> Vec<&Atom> {
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Atom>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Atom(a) => out.push(a),
                Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => go(g, out),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| go(g, out)),
                Formula::Implies(a, b) | Formula::Iff(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Axiom,
    /// Derived or otherwise unclassified formulas; treated as axioms.
    Plain,
    Definition,
    Theorem,
    Conjecture,
    NegatedConjecture,
}

impl Role {
    pub fn parse(word: &str) -> Option<Role> {
        Some(match word {
            "axiom" | "hypothesis" | "assumption" | "unknown" => Role::Axiom,
            "plain" => Role::Plain,
            "definition" => Role::Definition,
            "lemma" | "theorem" | "corollary" => Role::Theorem,
            "conjecture" => Role::Conjecture,
            "negated_conjecture" => Role::NegatedConjecture,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Axiom => "axiom",
            Role::Plain => "plain",
            Role::Definition => "definition",
            Role::Theorem => "theorem",
            Role::Conjecture => "conjecture",
            Role::NegatedConjecture => "negated_conjecture",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A named formula of the corpus with its position in the canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct Fact {
    pub name: String,
    pub role: Role,
    pub formula: Formula,
    pub serial: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    Axiom,
    ConjectureDerived,
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Input,
    Clausify,
    Resolution,
    Factoring,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Input => "input",
            Rule::Clausify => "clausify",
            Rule::Resolution => "resolution",
            Rule::Factoring => "factoring",
        }
    }

    pub fn parse(s: &str) -> Option<Rule> {
        Some(match s {
            "input" => Rule::Input,
            "clausify" => Rule::Clausify,
            "resolution" => Rule::Resolution,
            "factoring" => Rule::Factoring,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub id: usize,
    pub literals: Vec<Literal>,
    pub origin: Origin,
    pub parents: Vec<usize>,
    pub rule: Rule,
}

impl Clause {
    pub fn input(id: usize, literals: Vec<Literal>, origin: Origin) -> Clause {
        Clause { id, literals, origin, parents: Vec::new(), rule: Rule::Input }
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn max_var(&self) -> Option<u32> {
        self.literals.iter().filter_map(Literal::max_var).max()
    }

    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(Literal::is_ground)
    }
}

/// A problem: a conjecture together with the premises offered to prove it.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub conjecture: Fact,
    pub premises: Vec<Fact>,
}

impl Problem {
    /// Facts in serial order with the conjecture last.
    pub fn facts(&self) -> Vec<Fact> {
        let mut v = self.premises.clone();
        v.push(self.conjecture.clone());
        v
    }
}
