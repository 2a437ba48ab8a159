use std::collections::HashMap;

use super::{
    hash_feature, FeatureConfig, FeatureKind, ParentMode, SparseVector, COUNT_SLOTS, NEGATIVE_LABEL, PAD_LABEL, POSITIVE_LABEL,
    SKOLEM_LABEL, VARIABLE_LABEL,
};
use crate::corpus::{Atom, Clause, Formula, Literal, Term};

/// Labeled tree over which paths and term shapes are collected.
struct Node {
    label: String,
    /// Label used when the node appears as an argument summary in a horizontal feature.
    top: String,
    children: Vec<Node>,
}

struct Labeler<'a> {
    cfg: &'a FeatureConfig,
}

impl Labeler<'_> {
    fn symbol(&self, name: &str, arity: usize, predicate: bool) -> String {
        if name == crate::corpus::EQUALITY {
            return name.to_string();
        }
        if !predicate && name.starts_with(self.cfg.skolem_prefix.as_str()) && !self.cfg.skolem_prefix.is_empty() {
            return SKOLEM_LABEL.to_string();
        }
        if self.cfg.anonymize {
            format!("{}{}", if predicate { 'p' } else { 'f' }, arity)
        } else {
            name.to_string()
        }
    }

    fn term(&self, t: &Term) -> Node {
        match t {
            Term::Var(_) => Node { label: VARIABLE_LABEL.into(), top: VARIABLE_LABEL.into(), children: Vec::new() },
            Term::App(f, args) => {
                let l = self.symbol(f, args.len(), false);
                Node { top: l.clone(), label: l, children: args.iter().map(|a| self.term(a)).collect() }
            }
        }
    }

    fn atom(&self, a: &Atom, polarity: Option<bool>) -> Node {
        let p = self.symbol(&a.pred, a.args.len(), true);
        let label = match polarity {
            Some(true) => format!("{POSITIVE_LABEL}{p}"),
            Some(false) => format!("{NEGATIVE_LABEL}{p}"),
            None => p.clone(),
        };
        Node { label, top: p, children: a.args.iter().map(|t| self.term(t)).collect() }
    }

    fn formula(&self, f: &Formula) -> Node {
        let op = |s: &str, children: Vec<Node>| Node { label: s.to_string(), top: s.to_string(), children };
        match f {
            Formula::True => op("$true", Vec::new()),
            Formula::False => op("$false", Vec::new()),
            Formula::Atom(a) => self.atom(a, None),
            Formula::Not(g) => op("~", vec![self.formula(g)]),
            Formula::And(gs) => op("&", gs.iter().map(|g| self.formula(g)).collect()),
            Formula::Or(gs) => op("|", gs.iter().map(|g| self.formula(g)).collect()),
            Formula::Implies(a, b) => op("=>", vec![self.formula(a), self.formula(b)]),
            Formula::Iff(a, b) => op("<=>", vec![self.formula(a), self.formula(b)]),
            Formula::Forall(_, g) => op("!", vec![self.formula(g)]),
            Formula::Exists(_, g) => op("?", vec![self.formula(g)]),
        }
    }
}

/// Raw feature strings of one clause or formula, before hashing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureStrings {
    pub vertical: Vec<String>,
    pub horizontal: Vec<String>,
    pub counts: [f64; COUNT_SLOTS as usize],
}

fn collect_tree(root: &Node, out: &mut FeatureStrings) {
    // root-anchored padding for branches shorter than three labels
    if root.children.is_empty() {
        out.vertical.push(format!("v:{}/{PAD_LABEL}/{PAD_LABEL}", root.label));
    }
    for c in &root.children {
        if c.children.is_empty() {
            out.vertical.push(format!("v:{}/{}/{PAD_LABEL}", root.label, c.label));
        }
    }
    walk(root, out);
}

fn walk(n: &Node, out: &mut FeatureStrings) {
    if !n.children.is_empty() {
        let tops: Vec<&str> = n.children.iter().map(|c| c.top.as_str()).collect();
        out.horizontal.push(format!("h:{}({})", n.top, tops.join(",")));
    }
    for c in &n.children {
        for g in &c.children {
            out.vertical.push(format!("v:{}/{}/{}", n.label, c.label, g.label));
        }
        walk(c, out);
    }
}

fn atom_stats(a: &Atom) -> (usize, usize) {
    let size = 1 + a.args.iter().map(Term::size).sum::<usize>();
    let depth = a.args.iter().map(Term::depth).max().unwrap_or(0);
    (size, depth)
}

/// Feature strings of a clause body.
pub fn clause_feature_strings(lits: &[Literal], cfg: &FeatureConfig) -> FeatureStrings {
    let lab = Labeler { cfg };
    let mut out = FeatureStrings::default();
    let (mut symbols, mut depth, mut pos) = (0usize, 0usize, 0usize);
    for l in lits {
        collect_tree(&lab.atom(&l.atom, Some(l.positive)), &mut out);
        let (s, d) = atom_stats(&l.atom);
        symbols += s;
        depth = depth.max(d);
        pos += usize::from(l.positive);
    }
    out.counts = [symbols as f64, lits.len() as f64, pos as f64, (lits.len() - pos) as f64, depth as f64];
    out
}

fn formula_feature_strings(f: &Formula, cfg: &FeatureConfig) -> FeatureStrings {
    let lab = Labeler { cfg };
    let mut out = FeatureStrings::default();
    collect_tree(&lab.formula(f), &mut out);
    let (mut symbols, mut depth, mut pos, mut neg) = (0usize, 0usize, 0usize, 0usize);
    fn polarity_walk(f: &Formula, positive: bool, acc: &mut dyn FnMut(&Atom, bool)) {
        match f {
            Formula::Atom(a) => acc(a, positive),
            Formula::Not(g) => polarity_walk(g, !positive, acc),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| polarity_walk(g, positive, acc)),
            Formula::Implies(a, b) => {
                polarity_walk(a, !positive, acc);
                polarity_walk(b, positive, acc);
            }
            Formula::Iff(a, b) => {
                polarity_walk(a, positive, acc);
                polarity_walk(b, positive, acc);
            }
            Formula::Forall(_, g) | Formula::Exists(_, g) => polarity_walk(g, positive, acc),
            Formula::True | Formula::False => {}
        }
    }
    polarity_walk(f, true, &mut |a, p| {
        let (s, d) = atom_stats(a);
        symbols += s;
        depth = depth.max(d);
        if p {
            pos += 1
        } else {
            neg += 1
        }
    });
    out.counts = [symbols as f64, (pos + neg) as f64, pos as f64, neg as f64, depth as f64];
    out
}

fn hash_strings(fs: &FeatureStrings, cfg: &FeatureConfig) -> SparseVector {
    let base = u64::from(cfg.hash_base);
    let mut acc: HashMap<u32, f64> = HashMap::new();
    let mut add = |s: &String| *acc.entry(hash_feature(s, base) as u32).or_insert(0.0) += 1.0;
    if cfg.has(FeatureKind::Vertical) {
        fs.vertical.iter().for_each(&mut add);
    }
    if cfg.has(FeatureKind::Horizontal) {
        fs.horizontal.iter().for_each(&mut add);
    }
    let mut pairs: Vec<(u32, f64)> = acc.into_iter().collect();
    if cfg.has(FeatureKind::Count) {
        for (i, v) in fs.counts.iter().enumerate() {
            pairs.push((cfg.hash_base + i as u32, *v));
        }
    }
    SparseVector::from_pairs(pairs)
}

pub fn featurize_literals(lits: &[Literal], cfg: &FeatureConfig) -> SparseVector {
    hash_strings(&clause_feature_strings(lits, cfg), cfg)
}

/// Vector of a single clause: hashed band `[0, hash_base)` followed by the
/// count slots `[hash_base, hash_base + 5)`.
pub fn featurize_clause(clause: &Clause, cfg: &FeatureConfig) -> SparseVector {
    featurize_literals(&clause.literals, cfg)
}

/// Vector of a whole formula, with connectives and quantifiers as tree nodes.
pub fn featurize_formula(f: &Formula, cfg: &FeatureConfig) -> SparseVector {
    hash_strings(&formula_feature_strings(f, cfg), cfg)
}

/// Combines clause, conjecture and parent vectors into disjoint bands:
/// clause `[0, B)`, conjecture `[B, 2B)`, parents `[2B, 3B)` (summed) or
/// `[2B, 4B)` (concatenated, one band per parent), then the clause's count slots.
/// Blocks whose feature kind is disabled are left empty.
pub fn pair_vector(
    conjecture: &SparseVector,
    clause: &SparseVector,
    parents: Option<&[SparseVector]>,
    cfg: &FeatureConfig,
) -> SparseVector {
    let b = cfg.hash_base;
    let mut pairs: Vec<(u32, f64)> = clause.band(0, b, 0).collect();
    pairs.extend(clause.band(b, b + COUNT_SLOTS, cfg.pair_count_offset()));
    if cfg.has(FeatureKind::Conjecture) {
        pairs.extend(conjecture.band(0, b, b));
    }
    if let (true, Some(parents)) = (cfg.has(FeatureKind::Parent), parents) {
        for (k, p) in parents.iter().enumerate() {
            let band = match cfg.parent_mode {
                ParentMode::Sum => 2,
                // binary inferences have at most two parents; any extra ones share the last band
                ParentMode::Concat => 2 + (k as u32).min(1),
            };
            pairs.extend(p.band(0, b, band * b));
        }
    }
    SparseVector::from_pairs(pairs)
}
