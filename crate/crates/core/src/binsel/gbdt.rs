//! Gradient-boosted regression trees with logistic loss over sparse vectors.
//!
//! Each tree is fit to the first and second derivatives of the logistic loss
//! with exact split search over the features present in a node. Absent entries
//! read as 0. A sample goes left when `x[feature] < threshold`.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::features::SparseVector;
use crate::par::{self, Exec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    LevelWise,
    LeafWise,
}

impl Growth {
    fn as_str(self) -> &'static str {
        match self {
            Growth::LevelWise => "levelWise",
            Growth::LeafWise => "leafWise",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbdtParams {
    pub n_trees: usize,
    pub learning_rate: f64,
    pub max_leaves: usize,
    pub max_depth: usize,
    pub growth: Growth,
    /// L2 regularization of leaf weights.
    pub lambda: f64,
    /// Minimal hessian sum on each side of a split.
    pub min_child_hessian: f64,
}

impl Default for GbdtParams {
    fn default() -> Self {
        GbdtParams {
            n_trees: 100,
            learning_rate: 0.1,
            max_leaves: 32,
            max_depth: 8,
            growth: Growth::LeafWise,
            lambda: 1.0,
            min_child_hessian: 1e-6,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GbdtError {
    #[error("no training examples")]
    Empty,
    #[error("training data has a single class")]
    SingleClass,
    #[error("example {0} has a non-finite feature value")]
    NonFinite(usize),
    #[error("model file line {line}: {msg}")]
    Format { line: usize, msg: String },
}

/// Labeled training vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PairExample {
    pub vector: SparseVector,
    pub positive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Node {
    Split { feature: u32, threshold: f64, left: u32, right: u32 },
    Leaf { weight: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    /// Root at index 0.
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn leaf_for(&self, x: &SparseVector) -> usize {
        let mut i = 0usize;
        loop {
            match self.nodes[i] {
                Node::Leaf { .. } => return i,
                Node::Split { feature, threshold, left, right } => {
                    i = if x.get(feature) < threshold { left as usize } else { right as usize };
                }
            }
        }
    }

    pub fn predict(&self, x: &SparseVector) -> f64 {
        match self.nodes[self.leaf_for(x)] {
            Node::Leaf { weight } => weight,
            Node::Split { .. } => unreachable!(),
        }
    }

    pub fn leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }

    pub fn depth(&self) -> usize {
        fn go(t: &Tree, i: usize) -> usize {
            match t.nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(t, left as usize).max(go(t, right as usize)),
            }
        }
        go(self, 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GbdtModel {
    /// Prior log-odds.
    pub base_score: f64,
    /// Leaf weights already include the learning rate.
    pub trees: Vec<Tree>,
    pub params: GbdtParams,
    pub n_features: u32,
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn logistic_loss(margin: f64, positive: bool) -> f64 {
    // ln(1 + e^{-y m}) computed stably
    let z = if positive { -margin } else { margin };
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

impl GbdtModel {
    pub fn margin(&self, x: &SparseVector) -> f64 {
        self.base_score + self.trees.iter().map(|t| t.predict(x)).sum::<f64>()
    }

    pub fn predict(&self, x: &SparseVector) -> f64 {
        sigmoid(self.margin(x))
    }

    pub fn mean_loss(&self, examples: &[PairExample]) -> f64 {
        examples.iter().map(|e| logistic_loss(self.margin(&e.vector), e.positive)).sum::<f64>() / examples.len() as f64
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut s = String::from("gbdt v1\n");
        let _ = writeln!(s, "base {:?}", self.base_score);
        let _ = writeln!(s, "learning_rate {:?}", p.learning_rate);
        let _ = writeln!(s, "growth {}", p.growth.as_str());
        let _ = writeln!(s, "limits {} {} {}", p.n_trees, p.max_leaves, p.max_depth);
        let _ = writeln!(s, "lambda {:?}", p.lambda);
        let _ = writeln!(s, "min_child_hessian {:?}", p.min_child_hessian);
        let _ = writeln!(s, "features {}", self.n_features);
        for (i, t) in self.trees.iter().enumerate() {
            let _ = writeln!(s, "tree {i} {}", t.nodes.len());
            for n in &t.nodes {
                match n {
                    Node::Split { feature, threshold, left, right } => {
                        let _ = writeln!(s, "node {feature} {threshold:?} {left} {right}");
                    }
                    Node::Leaf { weight } => {
                        let _ = writeln!(s, "leaf {weight:?}");
                    }
                }
            }
        }
        s.push_str("end\n");
        s
    }

    pub fn from_text(text: &str) -> Result<GbdtModel, GbdtError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let err = |line: usize, msg: &str| GbdtError::Format { line: line + 1, msg: msg.to_string() };
        let mut next = |want: &str| -> Result<(usize, Vec<String>), GbdtError> {
            let (i, l) = lines.next().ok_or_else(|| err(usize::MAX - 1, "unexpected end of file"))?;
            let parts: Vec<String> = l.split_whitespace().map(str::to_string).collect();
            if !want.is_empty() && parts.first().map(String::as_str) != Some(want) {
                return Err(err(i, &format!("expected `{want}`")));
            }
            Ok((i, parts))
        };
        fn num<T: std::str::FromStr>(parts: &[String], k: usize, line: usize) -> Result<T, GbdtError> {
            parts
                .get(k)
                .and_then(|s| s.parse().ok())
                .ok_or(GbdtError::Format { line: line + 1, msg: format!("bad field {k}") })
        }
        let (i, h) = next("gbdt")?;
        if h.get(1).map(String::as_str) != Some("v1") {
            return Err(err(i, "unsupported version"));
        }
        let (i, b) = next("base")?;
        let base_score: f64 = num(&b, 1, i)?;
        let (i, lr) = next("learning_rate")?;
        let learning_rate: f64 = num(&lr, 1, i)?;
        let (i, g) = next("growth")?;
        let growth = match g.get(1).map(String::as_str) {
            Some("levelWise") => Growth::LevelWise,
            Some("leafWise") => Growth::LeafWise,
            _ => return Err(err(i, "unknown growth")),
        };
        let (i, lim) = next("limits")?;
        let (n_trees, max_leaves, max_depth) = (num(&lim, 1, i)?, num(&lim, 2, i)?, num(&lim, 3, i)?);
        let (i, la) = next("lambda")?;
        let lambda: f64 = num(&la, 1, i)?;
        let (i, mh) = next("min_child_hessian")?;
        let min_child_hessian: f64 = num(&mh, 1, i)?;
        let (i, nf) = next("features")?;
        let n_features: u32 = num(&nf, 1, i)?;
        let mut trees = Vec::new();
        loop {
            let (i, head) = next("")?;
            match head.first().map(String::as_str) {
                Some("end") => break,
                Some("tree") => {
                    let count: usize = num(&head, 2, i)?;
                    let mut nodes = Vec::with_capacity(count);
                    for _ in 0..count {
                        let (j, p) = next("")?;
                        match p.first().map(String::as_str) {
                            Some("node") => {
                                let (feature, threshold, left, right) = (num(&p, 1, j)?, num(&p, 2, j)?, num(&p, 3, j)?, num(&p, 4, j)?);
                                if left as usize >= count || right as usize >= count {
                                    return Err(err(j, "child index out of range"));
                                }
                                if feature >= n_features {
                                    return Err(err(j, "feature index out of range"));
                                }
                                nodes.push(Node::Split { feature, threshold, left, right });
                            }
                            Some("leaf") => nodes.push(Node::Leaf { weight: num(&p, 1, j)? }),
                            _ => return Err(err(j, "expected node or leaf")),
                        }
                    }
                    trees.push(Tree { nodes });
                }
                _ => return Err(err(i, "expected tree or end")),
            }
        }
        let params = GbdtParams { n_trees, learning_rate, max_leaves, max_depth, growth, lambda, min_child_hessian };
        Ok(GbdtModel { base_score, trees, params, n_features })
    }
}

/// Per-iteration record of the mean training loss; entry 0 is the prior-only model.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainLog {
    pub loss: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct SplitCandidate {
    gain: f64,
    feature: u32,
    threshold: f64,
}

struct NodeStats {
    g: f64,
    h: f64,
}

fn leaf_score(g: f64, h: f64, lambda: f64) -> f64 {
    g * g / (h + lambda)
}

/// Best split of the examples `rows`; ties go to the smaller feature, then threshold.
fn best_split(
    rows: &[usize],
    x: &[&SparseVector],
    grad: &[f64],
    hess: &[f64],
    stats: &NodeStats,
    p: &GbdtParams,
    exec: Exec,
) -> Option<SplitCandidate> {
    let mut by_feature: HashMap<u32, Vec<(f64, usize)>> = HashMap::new();
    for &r in rows {
        for &(f, v) in x[r].entries() {
            by_feature.entry(f).or_default().push((v, r));
        }
    }
    let mut features: Vec<(u32, Vec<(f64, usize)>)> = by_feature.into_iter().collect();
    features.sort_unstable_by_key(|f| f.0);
    let parent = leaf_score(stats.g, stats.h, p.lambda);
    let n_rows = rows.len();
    let per_feature = par::map(exec, &features, |(f, present)| {
        let mut present = present.clone();
        present.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (pg, ph): (f64, f64) = present.iter().fold((0.0, 0.0), |acc, &(_, r)| (acc.0 + grad[r], acc.1 + hess[r]));
        // groups of (value, g, h, count) in ascending value order, zeros included
        let mut groups: Vec<(f64, f64, f64, usize)> = Vec::new();
        let zero_count = n_rows - present.len();
        let mut zero_pending = zero_count > 0;
        let zero = (0.0, stats.g - pg, stats.h - ph, zero_count);
        for &(v, r) in &present {
            if zero_pending && v > 0.0 {
                groups.push(zero);
                zero_pending = false;
            }
            match groups.last_mut() {
                Some(last) if last.0 == v => {
                    last.1 += grad[r];
                    last.2 += hess[r];
                    last.3 += 1;
                }
                _ => groups.push((v, grad[r], hess[r], 1)),
            }
        }
        if zero_pending {
            groups.push(zero);
        }
        let mut best: Option<SplitCandidate> = None;
        let (mut gl, mut hl) = (0.0, 0.0);
        for w in 0..groups.len().saturating_sub(1) {
            gl += groups[w].1;
            hl += groups[w].2;
            let (gr, hr) = (stats.g - gl, stats.h - hl);
            if hl < p.min_child_hessian || hr < p.min_child_hessian {
                continue;
            }
            let gain = 0.5 * (leaf_score(gl, hl, p.lambda) + leaf_score(gr, hr, p.lambda) - parent);
            if best.map_or(true, |b| gain > b.gain) {
                let threshold = 0.5 * (groups[w].0 + groups[w + 1].0);
                best = Some(SplitCandidate { gain, feature: *f, threshold });
            }
        }
        best
    });
    let mut best: Option<SplitCandidate> = None;
    for c in per_feature.into_iter().flatten() {
        if best.map_or(true, |b| c.gain > b.gain) {
            best = Some(c);
        }
    }
    best.filter(|b| b.gain > 1e-12)
}

struct Frontier {
    node: usize,
    rows: Vec<usize>,
    depth: usize,
    split: Option<SplitCandidate>,
}

fn grow_tree(x: &[&SparseVector], grad: &[f64], hess: &[f64], p: &GbdtParams, exec: Exec) -> Tree {
    let all: Vec<usize> = (0..x.len()).collect();
    let make = |rows: Vec<usize>, node: usize, depth: usize| -> Frontier {
        let stats = NodeStats { g: rows.iter().map(|&r| grad[r]).sum(), h: rows.iter().map(|&r| hess[r]).sum() };
        let split = if depth < p.max_depth { best_split(&rows, x, grad, hess, &stats, p, exec) } else { None };
        Frontier { node, rows, depth, split }
    };
    let mut nodes: Vec<Node> = vec![Node::Leaf { weight: 0.0 }];
    let mut open: Vec<Frontier> = vec![make(all, 0, 0)];
    let mut closed: Vec<Frontier> = Vec::new();
    let mut leaves = 1usize;

    let split_one = |f: Frontier, nodes: &mut Vec<Node>| -> (Frontier, Frontier) {
        let s = f.split.expect("split present");
        let (l, r): (Vec<usize>, Vec<usize>) = f.rows.iter().partition(|&&i| x[i].get(s.feature) < s.threshold);
        let (li, ri) = (nodes.len(), nodes.len() + 1);
        nodes.push(Node::Leaf { weight: 0.0 });
        nodes.push(Node::Leaf { weight: 0.0 });
        nodes[f.node] = Node::Split { feature: s.feature, threshold: s.threshold, left: li as u32, right: ri as u32 };
        (make(l, li, f.depth + 1), make(r, ri, f.depth + 1))
    };

    match p.growth {
        Growth::LeafWise => {
            while leaves < p.max_leaves {
                let pick = open
                    .iter()
                    .enumerate()
                    .filter_map(|(i, f)| f.split.map(|s| (i, s.gain, f.node)))
                    .max_by(|a, b| a.1.total_cmp(&b.1).then(b.2.cmp(&a.2)));
                let Some((i, _, _)) = pick else { break };
                let f = open.swap_remove(i);
                let (a, b) = split_one(f, &mut nodes);
                open.push(a);
                open.push(b);
                leaves += 1;
            }
        }
        Growth::LevelWise => {
            while !open.is_empty() && leaves < p.max_leaves {
                open.sort_by_key(|f| f.node);
                let mut next = Vec::new();
                for f in open.drain(..) {
                    if f.split.is_some() && leaves < p.max_leaves {
                        let (a, b) = split_one(f, &mut nodes);
                        next.push(a);
                        next.push(b);
                        leaves += 1;
                    } else {
                        closed.push(f);
                    }
                }
                open = next;
            }
        }
    }
    for f in open.into_iter().chain(closed) {
        let g: f64 = f.rows.iter().map(|&r| grad[r]).sum();
        let h: f64 = f.rows.iter().map(|&r| hess[r]).sum();
        nodes[f.node] = Node::Leaf { weight: -p.learning_rate * g / (h + p.lambda) };
    }
    Tree { nodes }
}

pub fn train_gbdt(examples: &[PairExample], params: &GbdtParams) -> Result<(GbdtModel, TrainLog), GbdtError> {
    train_gbdt_with(examples, params, Exec::Sequential)
}

pub fn train_gbdt_with(examples: &[PairExample], params: &GbdtParams, exec: Exec) -> Result<(GbdtModel, TrainLog), GbdtError> {
    if examples.is_empty() {
        return Err(GbdtError::Empty);
    }
    for (i, e) in examples.iter().enumerate() {
        if e.vector.entries().iter().any(|v| !v.1.is_finite()) {
            return Err(GbdtError::NonFinite(i));
        }
    }
    let pos = examples.iter().filter(|e| e.positive).count();
    if pos == 0 || pos == examples.len() {
        return Err(GbdtError::SingleClass);
    }
    let prior = pos as f64 / examples.len() as f64;
    let n_features = examples.iter().filter_map(|e| e.vector.max_index()).max().map_or(0, |m| m + 1);
    let mut model = GbdtModel { base_score: (prior / (1.0 - prior)).ln(), trees: Vec::new(), params: *params, n_features };
    let x: Vec<&SparseVector> = examples.iter().map(|e| &e.vector).collect();
    let mut margins = vec![model.base_score; examples.len()];
    let loss = |m: &[f64]| m.iter().zip(examples).map(|(&m, e)| logistic_loss(m, e.positive)).sum::<f64>() / m.len() as f64;
    let mut log = TrainLog { loss: vec![loss(&margins)] };
    for _ in 0..params.n_trees {
        let (grad, hess): (Vec<f64>, Vec<f64>) = margins
            .iter()
            .zip(examples)
            .map(|(&m, e)| {
                let p = sigmoid(m);
                (p - if e.positive { 1.0 } else { 0.0 }, (p * (1.0 - p)).max(1e-16))
            })
            .unzip();
        let tree = grow_tree(&x, &grad, &hess, params, exec);
        for (m, xi) in margins.iter_mut().zip(&x) {
            *m += tree.predict(xi);
        }
        model.trees.push(tree);
        log.loss.push(loss(&margins));
    }
    Ok((model, log))
}
