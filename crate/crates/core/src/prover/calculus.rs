//! Binary resolution, factoring, tautology deletion and subsumption on literal lists.

use std::collections::HashMap;

use super::unify::{shift_vars, Subst};
use crate::corpus::{Literal, Term};

/// Renames variables to `0, 1, ...` in order of first occurrence and drops
/// duplicate literals, keeping the first copy.
pub fn normalize(lits: &[Literal]) -> Vec<Literal> {
    let mut names: HashMap<u32, u32> = HashMap::new();
    let mut out: Vec<Literal> = Vec::with_capacity(lits.len());
    for l in lits {
        let r = l.map_vars(&mut |v| {
            let n = names.len() as u32;
            Term::Var(*names.entry(v).or_insert(n))
        });
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// Contains a complementary pair or a trivial equation `t = t`.
pub fn is_tautology(lits: &[Literal]) -> bool {
    lits.iter().enumerate().any(|(i, l)| {
        (l.positive && l.atom.is_equality() && l.atom.args.len() == 2 && l.atom.args[0] == l.atom.args[1])
            || lits[i + 1..].iter().any(|m| m.positive != l.positive && m.atom == l.atom)
    })
}

fn offset_for(lits: &[Literal]) -> u32 {
    lits.iter().filter_map(Literal::max_var).max().map_or(0, |m| m + 1)
}

/// A resolvent with the literal positions it was resolved on.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolvent {
    pub literals: Vec<Literal>,
    pub left_lit: usize,
    pub right_lit: usize,
}

/// All binary resolvents of `left` and `right` (variables renamed apart).
pub fn resolvents(left: &[Literal], right: &[Literal]) -> Vec<Resolvent> {
    let right = shift_vars(right, offset_for(left));
    let mut out = Vec::new();
    for (i, l) in left.iter().enumerate() {
        for (j, r) in right.iter().enumerate() {
            if l.positive == r.positive || l.atom.pred != r.atom.pred || l.atom.args.len() != r.atom.args.len() {
                continue;
            }
            let mut s = Subst::new();
            if !s.unify_atoms(&l.atom, &r.atom) {
                continue;
            }
            let lits: Vec<Literal> = left
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, x)| x)
                .chain(right.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x))
                .map(|x| s.apply_literal(x))
                .collect();
            out.push(Resolvent { literals: normalize(&lits), left_lit: i, right_lit: j });
        }
    }
    out
}

/// Binary factors: unify two literals of equal sign and drop the duplicate.
pub fn factors(lits: &[Literal]) -> Vec<Vec<Literal>> {
    let mut out = Vec::new();
    for i in 0..lits.len() {
        for j in i + 1..lits.len() {
            let (a, b) = (&lits[i], &lits[j]);
            if a.positive != b.positive {
                continue;
            }
            let mut s = Subst::new();
            if !s.unify_atoms(&a.atom, &b.atom) {
                continue;
            }
            let f: Vec<Literal> = lits.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| s.apply_literal(x)).collect();
            out.push(normalize(&f));
        }
    }
    out
}

/// `c` subsumes `d` when some substitution maps the literals of `c` injectively into `d`.
pub fn subsumes(c: &[Literal], d: &[Literal]) -> bool {
    if c.len() > d.len() {
        return false;
    }
    let mut used = vec![false; d.len()];
    fn go(c: &[Literal], d: &[Literal], used: &mut [bool], s: &Subst) -> bool {
        let Some((first, rest)) = c.split_first() else { return true };
        for (k, lit) in d.iter().enumerate() {
            if used[k] {
                continue;
            }
            let mut t = s.clone();
            if t.match_literal(first, lit) {
                used[k] = true;
                if go(rest, d, used, &t) {
                    return true;
                }
                used[k] = false;
            }
        }
        false
    }
    go(c, d, &mut used, &Subst::new())
}

/// Weight used by the symbol-counting queue: `fweight` per function or
/// predicate symbol and `vweight` per variable occurrence.
pub fn symbol_weight(lits: &[Literal], fweight: u32, vweight: u32) -> u64 {
    fn term(t: &Term, f: u64, v: u64) -> u64 {
        match t {
            Term::Var(_) => v,
            Term::App(_, args) => f + args.iter().map(|a| term(a, f, v)).sum::<u64>(),
        }
    }
    let (f, v) = (u64::from(fweight), u64::from(vweight));
    lits.iter().map(|l| f + l.atom.args.iter().map(|a| term(a, f, v)).sum::<u64>()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Atom;

    fn p(t: Term) -> Literal {
        Literal::pos(Atom::new("p", vec![t]))
    }
    fn np(t: Term) -> Literal {
        Literal::neg(Atom::new("p", vec![t]))
    }
    fn q(t: Term) -> Literal {
        Literal::pos(Atom::new("q", vec![t]))
    }

    #[test]
    fn resolve_to_empty() {
        let r = resolvents(&[p(Term::constant("a"))], &[np(Term::Var(0))]);
        assert_eq!(r.len(), 1);
        assert!(r[0].literals.is_empty());
    }

    #[test]
    fn resolvent_is_renamed_apart() {
        // p(X) | q(X)  and  ~p(f(X))
        let r = resolvents(&[p(Term::Var(0)), q(Term::Var(0))], &[np(Term::app("f", vec![Term::Var(0)]))]);
        assert_eq!(r[0].literals, vec![q(Term::app("f", vec![Term::Var(0)]))]);
    }

    #[test]
    fn factoring() {
        let f = factors(&[p(Term::Var(0)), p(Term::Var(1)), q(Term::Var(1))]);
        assert_eq!(f, vec![vec![p(Term::Var(0)), q(Term::Var(0))]]);
    }

    #[test]
    fn subsumption() {
        let a = Term::constant("a");
        assert!(subsumes(&[p(Term::Var(0))], &[p(a.clone()), q(a.clone())]));
        assert!(!subsumes(&[p(a.clone()), q(a.clone())], &[p(a.clone())]));
        // multiset: p(X) | p(Y) does not subsume p(a)
        assert!(!subsumes(&[p(Term::Var(0)), p(Term::Var(1))], &[p(a.clone())]));
        assert!(!subsumes(&[p(Term::Var(0)), q(Term::Var(0))], &[p(a.clone()), q(Term::constant("b"))]));
    }

    #[test]
    fn tautologies_and_normal_form() {
        assert!(is_tautology(&[p(Term::Var(0)), np(Term::Var(0))]));
        assert!(!is_tautology(&[p(Term::Var(0)), np(Term::Var(1))]));
        assert!(is_tautology(&[Literal::pos(Atom::equality(Term::Var(0), Term::Var(0)))]));
        assert_eq!(normalize(&[q(Term::Var(7)), p(Term::Var(3)), q(Term::Var(7))]), vec![q(Term::Var(0)), p(Term::Var(1))]);
        assert_eq!(symbol_weight(&[p(Term::app("f", vec![Term::Var(0)]))], 2, 1), 5);
    }
}
