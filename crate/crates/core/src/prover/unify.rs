//! Substitutions, syntactic unification and one-way matching.

use std::collections::HashMap;

use crate::corpus::{Atom, Literal, Term};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Subst {
    map: HashMap<u32, Term>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn get(&self, v: u32) -> Option<&Term> {
        self.map.get(&v)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.map.get(v) {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    pub fn apply(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::Var(v) => Term::Var(*v),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom { pred: a.pred.clone(), args: a.args.iter().map(|t| self.apply(t)).collect() }
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal { positive: l.positive, atom: self.apply_atom(&l.atom) }
    }

    fn occurs(&self, v: u32, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => *w == v,
            Term::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    /// Extends the substitution to a most general unifier of `a` and `b`.
    /// On failure the substitution may be partially extended.
    pub fn unify(&mut self, a: &Term, b: &Term) -> bool {
        let (a, b) = (self.walk(a).clone(), self.walk(b).clone());
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if self.occurs(*x, t) {
                    return false;
                }
                self.map.insert(*x, t.clone());
                true
            }
            (Term::App(f, fa), Term::App(g, ga)) => {
                f == g && fa.len() == ga.len() && fa.iter().zip(ga).all(|(s, t)| self.unify(s, t))
            }
        }
    }

    pub fn unify_atoms(&mut self, a: &Atom, b: &Atom) -> bool {
        a.pred == b.pred && a.args.len() == b.args.len() && a.args.iter().zip(&b.args).all(|(s, t)| self.unify(s, t))
    }

    /// One-way matching: binds variables of `pattern` only; `target` is rigid.
    pub fn match_term(&mut self, pattern: &Term, target: &Term) -> bool {
        match pattern {
            Term::Var(v) => match self.map.get(v) {
                Some(bound) => bound == target,
                None => {
                    self.map.insert(*v, target.clone());
                    true
                }
            },
            Term::App(f, fa) => match target {
                Term::App(g, ga) => f == g && fa.len() == ga.len() && fa.iter().zip(ga).all(|(s, t)| self.match_term(s, t)),
                Term::Var(_) => false,
            },
        }
    }

    pub fn match_literal(&mut self, pattern: &Literal, target: &Literal) -> bool {
        pattern.positive == target.positive
            && pattern.atom.pred == target.atom.pred
            && pattern.atom.args.len() == target.atom.args.len()
            && pattern.atom.args.iter().zip(&target.atom.args).all(|(s, t)| self.match_term(s, t))
    }
}

/// Shifts every variable of the literals by `offset`.
pub fn shift_vars(lits: &[Literal], offset: u32) -> Vec<Literal> {
    lits.iter().map(|l| l.map_vars(&mut |v| Term::Var(v + offset))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(args: Vec<Term>) -> Term {
        Term::app("f", args)
    }

    #[test]
    fn unifies_and_applies() {
        let mut s = Subst::new();
        let a = f(vec![Term::Var(0), Term::constant("c")]);
        let b = f(vec![Term::app("g", vec![Term::Var(1)]), Term::Var(1)]);
        assert!(s.unify(&a, &b));
        assert_eq!(s.apply(&a), s.apply(&b));
        assert_eq!(s.apply(&a), f(vec![Term::app("g", vec![Term::constant("c")]), Term::constant("c")]));
    }

    #[test]
    fn occurs_check() {
        let mut s = Subst::new();
        assert!(!s.unify(&Term::Var(0), &f(vec![Term::Var(0)])));
        let mut s = Subst::new();
        assert!(s.unify(&Term::Var(0), &Term::Var(1)));
        assert!(!s.unify(&Term::Var(1), &f(vec![Term::Var(0)])));
    }

    #[test]
    fn matching_is_one_way() {
        let mut s = Subst::new();
        assert!(s.match_term(&f(vec![Term::Var(0), Term::Var(0)]), &f(vec![Term::constant("a"), Term::constant("a")])));
        let mut s = Subst::new();
        assert!(!s.match_term(&f(vec![Term::Var(0), Term::Var(0)]), &f(vec![Term::constant("a"), Term::constant("b")])));
        let mut s = Subst::new();
        assert!(!s.match_term(&Term::constant("a"), &Term::Var(0)));
    }
}
