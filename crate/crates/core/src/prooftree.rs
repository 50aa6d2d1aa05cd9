//! Proof trees, approximated proof trees and regular proof graphs.
//!
//! A proof tree is children-injective (siblings carry distinct labels, since
//! they are the premises of one rule), so a tree is fully determined by its
//! root label and the set of label paths below it. [`PathTree`] stores exactly
//! that, as a nested map from child label to subtree.
//!
//! Depth counts edges from the root: the root is at depth 0.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::fixpoint::IterationTrace;
use crate::judgement::Judgement;
use crate::set::JudgementSet;
use crate::system::{InferenceSystem, Premises};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PathTree {
    label: Judgement,
    children: BTreeMap<Judgement, PathTree>,
}

impl PathTree {
    pub fn leaf(label: impl Into<Judgement>) -> Self {
        PathTree {
            label: label.into(),
            children: BTreeMap::new(),
        }
    }

    /// Stacks `children` under a new root. Children must have distinct root labels.
    pub fn node(label: impl Into<Judgement>, children: impl IntoIterator<Item = PathTree>) -> Result<Self> {
        let label = label.into();
        let mut map = BTreeMap::new();
        for c in children {
            let key = c.label.clone();
            if map.insert(key.clone(), c).is_some() {
                return Err(Error::ShapeMismatch(format!(
                    "two children of `{label}` are labelled `{key}`"
                )));
            }
        }
        Ok(PathTree { label, children: map })
    }

    /// Builds a tree from its root label and the set of nonempty label paths.
    ///
    /// The path set must be prefix-closed: for every path `αj` in it, `α` is
    /// either empty or also in it.
    pub fn from_paths<I, P>(root: impl Into<Judgement>, paths: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: IntoIterator,
        P::Item: Into<Judgement>,
    {
        let set: BTreeSet<Vec<Judgement>> = paths
            .into_iter()
            .map(|p| p.into_iter().map(Into::into).collect())
            .collect();
        let mut tree = PathTree::leaf(root);
        // BTreeSet order visits every prefix before its extensions.
        for path in &set {
            if path.is_empty() {
                return Err(Error::ShapeMismatch("empty path in path set".into()));
            }
            let (last, parent) = path.split_last().unwrap();
            let mut node = &mut tree;
            for step in parent {
                node = node.children.get_mut(step).ok_or_else(|| {
                    Error::ShapeMismatch(format!("path set is not prefix-closed at {path:?}"))
                })?;
            }
            node.children.insert(last.clone(), PathTree::leaf(last.clone()));
        }
        Ok(tree)
    }

    pub fn label(&self) -> &Judgement {
        &self.label
    }

    pub fn children(&self) -> impl Iterator<Item = &PathTree> {
        self.children.values()
    }

    pub fn child_labels(&self) -> impl Iterator<Item = &Judgement> {
        self.children.keys()
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Subtree at a label path (empty path: the tree itself).
    pub fn at(&self, path: &[Judgement]) -> Option<&PathTree> {
        path.iter().try_fold(self, |t, step| t.children.get(step))
    }

    /// All nonempty label paths, excluding the root label.
    pub fn paths(&self) -> BTreeSet<Vec<Judgement>> {
        let mut out = BTreeSet::new();
        let mut stack = Vec::new();
        self.collect_paths(&mut stack, &mut out, usize::MAX);
        out
    }

    /// Paths of length at most `n`.
    pub fn paths_upto(&self, n: usize) -> BTreeSet<Vec<Judgement>> {
        let mut out = BTreeSet::new();
        let mut stack = Vec::new();
        self.collect_paths(&mut stack, &mut out, n);
        out
    }

    fn collect_paths(&self, stack: &mut Vec<Judgement>, out: &mut BTreeSet<Vec<Judgement>>, limit: usize) {
        if stack.len() == limit {
            return;
        }
        for (l, c) in &self.children {
            stack.push(l.clone());
            out.insert(stack.clone());
            c.collect_paths(stack, out, limit);
            stack.pop();
        }
    }

    /// Height: the length of the longest path (a leaf has height 0).
    pub fn height(&self) -> usize {
        self.children.values().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children.values().map(PathTree::size).sum::<usize>()
    }

    /// Depth-first walk yielding `(depth, node)`.
    pub fn walk(&self) -> Vec<(usize, &PathTree)> {
        let mut out = Vec::new();
        let mut stack = vec![(0, self)];
        while let Some((d, t)) = stack.pop() {
            out.push((d, t));
            for c in t.children.values().rev() {
                stack.push((d + 1, c));
            }
        }
        out
    }
}

impl fmt::Debug for PathTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.children.is_empty() {
            write!(f, "{}", self.label)
        } else {
            write!(f, "{}[", self.label)?;
            for (i, c) in self.children.values().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c:?}")?;
            }
            write!(f, "]")
        }
    }
}

/// A node where a tree fails to be a proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidNode {
    /// Label path from the root to the offending node (empty for the root).
    pub path: Vec<Judgement>,
    pub conclusion: Judgement,
    pub premises: Vec<Judgement>,
}

fn check_nodes<F>(t: &PathTree, mut ok: F) -> Result<(), InvalidNode>
where
    F: FnMut(usize, &PathTree) -> bool,
{
    fn go<F: FnMut(usize, &PathTree) -> bool>(
        t: &PathTree,
        path: &mut Vec<Judgement>,
        ok: &mut F,
    ) -> Result<(), InvalidNode> {
        if !ok(path.len(), t) {
            return Err(InvalidNode {
                path: path.clone(),
                conclusion: t.label.clone(),
                premises: t.children.keys().cloned().collect(),
            });
        }
        for (l, c) in &t.children {
            path.push(l.clone());
            go(c, path, ok)?;
            path.pop();
        }
        Ok(())
    }
    go(t, &mut Vec::new(), &mut ok)
}

fn node_is_rule(sys: &InferenceSystem, t: &PathTree) -> bool {
    let Some(c) = sys.universe().position(t.label.as_str()) else {
        return false;
    };
    let mut ps = Vec::with_capacity(t.children.len());
    for l in t.children.keys() {
        match sys.universe().position(l.as_str()) {
            Some(p) => ps.push(p),
            None => return false,
        }
    }
    sys.has_rule(&ps, c)
}

/// Checks that every node together with its children's labels is a rule of `sys`.
pub fn validate_proof_tree(sys: &InferenceSystem, t: &PathTree) -> Result<(), InvalidNode> {
    check_nodes(t, |_, node| node_is_rule(sys, node))
}

/// Checks that `t` is an approximated proof tree of level `n`: a finite proof
/// in the system extended by its coaxioms as axioms, in which coaxioms are used
/// only at depth `n` or deeper.
pub fn validate_approximated(sys: &InferenceSystem, t: &PathTree, n: usize) -> Result<(), InvalidNode> {
    check_nodes(t, |depth, node| {
        node_is_rule(sys, node)
            || (depth >= n && node.is_leaf() && sys.coaxioms().contains_judgement(node.label.as_str()))
    })
}

/// Finite proofs of minimal height, read off the ascending iteration.
///
/// `rank(j)` is the first `k` with `j ∈ Fᵏ(∅)`; a judgement of rank `k` has a
/// proof of height `k - 1` using, at each node, the canonically least premise
/// set whose members all have smaller rank.
pub struct WfProver<'a> {
    sys: &'a InferenceSystem,
    rank: Vec<Option<usize>>,
    memo: BTreeMap<usize, PathTree>,
}

impl<'a> WfProver<'a> {
    pub fn new(sys: &'a InferenceSystem) -> Self {
        let (_, trace) = sys.inductive();
        Self::from_trace(sys, &trace)
    }

    fn from_trace(sys: &'a InferenceSystem, trace: &IterationTrace) -> Self {
        let mut rank = vec![None; sys.universe().len()];
        for (k, s) in trace.steps().iter().enumerate() {
            for p in s.iter() {
                rank[p].get_or_insert(k);
            }
        }
        WfProver {
            sys,
            rank,
            memo: BTreeMap::new(),
        }
    }

    /// Height of the shortest finite proof of the judgement at `position`.
    pub fn min_height(&self, position: usize) -> Option<usize> {
        self.rank[position].map(|k| k - 1)
    }

    pub fn prove(&mut self, position: usize) -> Option<PathTree> {
        let k = self.rank[position]?;
        if let Some(t) = self.memo.get(&position) {
            return Some(t.clone());
        }
        let ps = self
            .sys
            .premise_sets(position)
            .iter()
            .find(|ps| ps.iter().all(|&p| self.rank[p as usize].is_some_and(|r| r < k)))
            .expect("a judgement of rank k has a rule over smaller ranks")
            .clone();
        let children: Vec<PathTree> = ps
            .iter()
            .map(|&p| self.prove(p as usize).expect("ranked premise"))
            .collect();
        let t = PathTree::node(self.sys.universe().get(position).clone(), children).expect("premises are distinct");
        self.memo.insert(position, t.clone());
        Some(t)
    }
}

/// A finite proof of `j` of height at most `depth_bound`, if one exists.
///
/// With `depth_bound ≥ |U|` the result is absent exactly when `j` is not in the
/// inductive interpretation.
pub fn wf_proof_search(sys: &InferenceSystem, j: &str, depth_bound: usize) -> Result<Option<PathTree>> {
    let pos = sys.position(j)?;
    let mut prover = WfProver::new(sys);
    match prover.min_height(pos) {
        Some(h) if h <= depth_bound => Ok(prover.prove(pos)),
        _ => Ok(None),
    }
}

/// Builds approximated proof trees of any level for one system.
pub struct ApproxProver<'a> {
    sys: &'a InferenceSystem,
    levels: IterationTrace,
    extended: InferenceSystem,
}

impl<'a> ApproxProver<'a> {
    pub fn new(sys: &'a InferenceSystem) -> Self {
        ApproxProver {
            levels: sys.generated_trace(),
            extended: sys.with_coaxioms_as_axioms(),
            sys,
        }
    }

    /// `Fⁿ(β)` with `β` the closure of the coaxioms.
    pub fn level(&self, n: usize) -> &JudgementSet {
        self.levels.level(n)
    }

    pub fn prove(&self, position: usize, n: usize) -> Option<PathTree> {
        if !self.levels.level(n).contains(position) {
            return None;
        }
        let mut wf = WfProver::new(&self.extended);
        Some(self.build(position, n, &mut wf))
    }

    fn build(&self, position: usize, remaining: usize, wf: &mut WfProver<'_>) -> PathTree {
        if remaining == 0 {
            return wf.prove(position).expect("members of the closure have finite proofs");
        }
        let below = self.levels.level(remaining - 1);
        let ps = self
            .sys
            .premise_sets(position)
            .iter()
            .find(|ps| ps.iter().all(|&p| below.contains(p as usize)))
            .expect("member of F(S) has a rule over S")
            .clone();
        let children: Vec<PathTree> = ps
            .iter()
            .map(|&p| self.build(p as usize, remaining - 1, wf))
            .collect();
        PathTree::node(self.sys.universe().get(position).clone(), children).expect("premises are distinct")
    }
}

/// An approximated proof tree of level `n` for `j`: present exactly when
/// `j ∈ Fⁿ(closure_of(sys))`.
pub fn approx_proof(sys: &InferenceSystem, j: &str, n: usize) -> Result<Option<PathTree>> {
    let pos = sys.position(j)?;
    Ok(ApproxProver::new(sys).prove(pos, n))
}

/// A finite rule-choice graph over a consistent set: a regular, possibly
/// non-well-founded, proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofGraph {
    root: usize,
    support: JudgementSet,
    choice: BTreeMap<usize, Premises>,
}

impl ProofGraph {
    pub fn root(&self) -> &Judgement {
        self.support.universe().get(self.root)
    }

    /// Judgements reachable from the root through the chosen rules.
    pub fn support(&self) -> &JudgementSet {
        &self.support
    }

    /// Chosen premises for a supported judgement.
    pub fn choice(&self, j: &str) -> Option<Vec<&Judgement>> {
        let p = self.support.universe().position(j)?;
        self.choice
            .get(&p)
            .map(|ps| ps.iter().map(|&q| self.support.universe().get(q as usize)).collect())
    }

    /// `(conclusion, premises)` pairs in serialization order.
    pub fn edges(&self) -> impl Iterator<Item = (&Judgement, Vec<&Judgement>)> + '_ {
        let u = self.support.universe();
        self.choice
            .iter()
            .map(move |(&c, ps)| (u.get(c), ps.iter().map(|&q| u.get(q as usize)).collect()))
    }

    fn unfold_at(&self, position: usize, depth: usize) -> PathTree {
        let u = self.support.universe();
        if depth == 0 {
            return PathTree::leaf(u.get(position).clone());
        }
        let children = self.choice[&position]
            .iter()
            .map(|&p| self.unfold_at(p as usize, depth - 1));
        PathTree::node(u.get(position).clone(), children).expect("premises are distinct")
    }
}

/// Selects, for each judgement reachable from `j`, the canonically least premise
/// set contained in `s`. `s` must be consistent (`s ⊆ F(s)`).
pub fn proof_graph(sys: &InferenceSystem, s: &JudgementSet, j: &str) -> Result<ProofGraph> {
    sys.check_set(s)?;
    let root = sys.position(j)?;
    let pick = |c: usize| {
        sys.premise_sets(c)
            .iter()
            .find(|ps| ps.iter().all(|&p| s.contains(p as usize)))
    };
    if let Some(w) = s.iter().find(|&c| pick(c).is_none()) {
        return Err(Error::NotConsistent {
            witness: sys.universe().get(w).clone(),
        });
    }
    if !s.contains(root) {
        return Err(Error::NotConsistent {
            witness: sys.universe().get(root).clone(),
        });
    }
    let mut support = sys.empty_set();
    let mut choice = BTreeMap::new();
    let mut stack = vec![root];
    support.insert(root);
    while let Some(c) = stack.pop() {
        let ps = pick(c).expect("checked above").clone();
        for &p in ps.iter() {
            if support.insert(p as usize) {
                stack.push(p as usize);
            }
        }
        choice.insert(c, ps);
    }
    Ok(ProofGraph { root, support, choice })
}

/// Path expansion of a proof graph, truncated at `depth`.
pub fn unfold(g: &ProofGraph, depth: usize) -> PathTree {
    g.unfold_at(g.root, depth)
}

/// `t1 ◁ₙ t2`: every path of `t1` of length ≤ n is a path of `t2` with the same label.
pub fn tree_le_n(t1: &PathTree, t2: &PathTree, n: usize) -> bool {
    fn go(a: &PathTree, b: &PathTree, n: usize) -> bool {
        if n == 0 {
            return true;
        }
        a.children.iter().all(|(l, ca)| match b.children.get(l) {
            Some(cb) => go(ca, cb, n - 1),
            None => false,
        })
    }
    t1.label == t2.label && go(t1, t2, n)
}

/// `t1 ⋈ₙ t2`: the first `n` levels coincide.
pub fn tree_eq_n(t1: &PathTree, t2: &PathTree, n: usize) -> bool {
    tree_le_n(t1, t2, n) && tree_le_n(t2, t1, n)
}

/// `t1 ◁ t2`: path-set inclusion with agreeing labels.
pub fn tree_le(t1: &PathTree, t2: &PathTree) -> bool {
    tree_le_n(t1, t2, usize::MAX)
}

/// Trees `t₀, …, t_upto` for a judgement of the generated interpretation, with
/// `tₙ` approximated of level `n` and `tₙ ⋈ₙ tₙ₊₁`.
///
/// `t₀` is the canonical finite proof with coaxioms read as axioms; `tₙ₊₁`
/// stacks the level-`n` trees of the canonical consistent premises of the root.
pub fn approximating_sequence(sys: &InferenceSystem, j: &str, upto: usize) -> Result<Vec<PathTree>> {
    let root = sys.position(j)?;
    let gen = sys.generated();
    if !gen.contains(root) {
        return Err(Error::NotInGenerated(sys.universe().get(root).clone()));
    }
    let graph = proof_graph(sys, &gen, j)?;
    let extended = sys.with_coaxioms_as_axioms();
    let mut wf = WfProver::new(&extended);
    let support: Vec<usize> = graph.support.iter().collect();
    let mut level: BTreeMap<usize, PathTree> = support
        .iter()
        .map(|&p| (p, wf.prove(p).expect("Gen lies inside the closure")))
        .collect();
    let mut out = vec![level[&root].clone()];
    for _ in 0..upto {
        let next: BTreeMap<usize, PathTree> = support
            .iter()
            .map(|&p| {
                let children = graph.choice[&p].iter().map(|&q| level[&(q as usize)].clone());
                let t = PathTree::node(sys.universe().get(p).clone(), children).expect("premises are distinct");
                (p, t)
            })
            .collect();
        level = next;
        out.push(level[&root].clone());
    }
    Ok(out)
}
