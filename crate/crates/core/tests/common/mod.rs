//! Random generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::cmp::Reverse;
use std::sync::Arc;

use coax::regular::{EqSystem, Elem, Node, Sort};
use coax::systems::{Grammar, Graph, Lambda};
use coax::{InferenceSystem, Rule, SystemBuilder, Universe};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn name(i: usize) -> String {
    format!("j{i:02}")
}

/// Random system over `n` judgements: up to `2n` rules with at most three
/// premises each, each judgement a coaxiom with probability 1/3.
pub fn random_system(rng: &mut impl Rng, n: usize) -> InferenceSystem {
    let mut b = SystemBuilder::new();
    for i in 0..n {
        b.judgement(name(i));
    }
    if n > 0 {
        for _ in 0..rng.gen_range(0..=2 * n) {
            let k = rng.gen_range(0..=3.min(n));
            let premises: Vec<String> = (0..k).map(|_| name(rng.gen_range(0..n))).collect();
            b.rule(Rule::new(premises, name(rng.gen_range(0..n))));
        }
        for i in 0..n {
            if rng.gen_ratio(1, 3) {
                b.coaxiom(name(i));
            }
        }
    }
    let universe = Arc::new(Universe::new((0..n).map(name)));
    b.build_with_universe(universe).unwrap().0
}

/// The system as bitmask rules `(premises, conclusion)` plus the coaxiom mask.
pub struct Masks {
    pub n: usize,
    pub rules: Vec<(u32, u32)>,
    pub gamma: u32,
}

impl Masks {
    pub fn of(sys: &InferenceSystem) -> Masks {
        let u = sys.universe();
        let bit = |j: &str| 1u32 << u.position(j).unwrap();
        let rules = sys
            .rules()
            .map(|r| (r.premises.iter().fold(0, |m, p| m | bit(p.as_str())), bit(r.conclusion.as_str())))
            .collect();
        let gamma = sys.coaxioms().iter().fold(0, |m, p| m | 1 << p);
        Masks { n: u.len(), rules, gamma }
    }

    pub fn full(&self) -> u32 {
        if self.n == 0 {
            0
        } else {
            u32::MAX >> (32 - self.n)
        }
    }

    pub fn step(&self, s: u32) -> u32 {
        self.rules
            .iter()
            .filter(|(p, _)| p & !s == 0)
            .fold(0, |acc, (_, c)| acc | c)
    }

    pub fn lfp_from(&self, extra_axioms: u32) -> u32 {
        let mut s = 0;
        loop {
            let next = self.step(s) | extra_axioms;
            if next == s {
                return s;
            }
            s = next;
        }
    }

    pub fn closure(&self) -> u32 {
        self.lfp_from(self.gamma)
    }

    /// `Fⁿ(closure)`.
    pub fn level(&self, n: usize) -> u32 {
        (0..n).fold(self.closure(), |s, _| self.step(s))
    }
}

pub fn mask_contains(m: u32, i: usize) -> bool {
    m >> i & 1 == 1
}

pub fn random_graph(rng: &mut impl Rng, max_nodes: usize, max_out: usize, max_weight: u64) -> Graph {
    let n = rng.gen_range(1..=max_nodes);
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let mut g = Graph::new(names.iter().cloned()).unwrap();
    for v in 0..n {
        let mut targets: Vec<usize> = (0..n).filter(|&u| u != v).collect();
        targets.shuffle(rng);
        let k = rng.gen_range(0..=max_out.min(targets.len()));
        for &u in &targets[..k] {
            g.add_weighted_edge(&names[v], &names[u], rng.gen_range(1..=max_weight)).unwrap();
        }
    }
    g
}

/// Least path weight from `src` to every node.
pub fn dijkstra(g: &Graph, src: usize) -> Vec<Option<u64>> {
    let mut dist = vec![None; g.len()];
    let mut heap = BinaryHeap::from([Reverse((0u64, src))]);
    while let Some(Reverse((d, v))) = heap.pop() {
        if dist[v].is_some() {
            continue;
        }
        dist[v] = Some(d);
        for &u in g.adj(v) {
            if dist[u].is_none() {
                heap.push(Reverse((d + g.weight(v, u).unwrap(), u)));
            }
        }
    }
    dist
}

pub fn reachable(g: &Graph, src: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([src]);
    let mut stack = vec![src];
    while let Some(v) = stack.pop() {
        for &u in g.adj(v) {
            if seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen
}

/// Random grammar over nonterminals `A..` and terminals `a..`.
pub fn random_grammar(rng: &mut impl Rng, max_nt: usize, max_t: usize, max_prods: usize, max_len: usize) -> Grammar {
    let nts: Vec<String> = (0..rng.gen_range(1..=max_nt)).map(|i| ((b'A' + i as u8) as char).to_string()).collect();
    let ts: Vec<String> = (0..rng.gen_range(1..=max_t)).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let symbols: Vec<&String> = nts.iter().chain(&ts).collect();
    let mut prods = Vec::new();
    for a in &nts {
        for _ in 0..rng.gen_range(1..=max_prods) {
            let len = rng.gen_range(0..=max_len);
            let body = (0..len).map(|_| (*symbols.choose(rng).unwrap()).clone()).collect();
            prods.push((a.clone(), body));
        }
    }
    Grammar::new(prods).unwrap()
}

/// Classical FIRST sets of every nonterminal, with nullability computed here.
pub fn first_sets(g: &Grammar) -> BTreeMap<String, BTreeSet<String>> {
    let is_nt = |s: &str| g.is_nonterminal(s);
    let mut nullable: BTreeSet<String> = BTreeSet::new();
    loop {
        let before = nullable.len();
        for (a, body) in g.productions() {
            if body.iter().all(|s| nullable.contains(s)) {
                nullable.insert(a.clone());
            }
        }
        if nullable.len() == before {
            break;
        }
    }
    let mut first: BTreeMap<String, BTreeSet<String>> =
        g.nonterminals().iter().map(|a| (a.clone(), BTreeSet::new())).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for (a, body) in g.productions() {
            let mut add = BTreeSet::new();
            for s in body {
                if !is_nt(s) {
                    add.insert(s.clone());
                    break;
                }
                add.extend(first[s].iter().cloned());
                if !nullable.contains(s) {
                    break;
                }
            }
            let entry = first.get_mut(a).unwrap();
            let before = entry.len();
            entry.extend(add);
            changed |= entry.len() != before;
        }
    }
    first
}

/// Call-by-value small-step evaluation with a step budget; `None` when the
/// budget runs out.
pub fn cbv_eval(t: &Lambda, fuel: usize) -> Option<Lambda> {
    fn subst(t: &Lambda, v: &Lambda, k: usize) -> Lambda {
        match t {
            Lambda::Var(i) if *i == k => v.clone(),
            Lambda::Var(i) if *i > k => Lambda::Var(i - 1),
            Lambda::Var(i) => Lambda::Var(*i),
            Lambda::Lam(b) => Lambda::Lam(Box::new(subst(b, v, k + 1))),
            Lambda::App(f, a) => Lambda::App(Box::new(subst(f, v, k)), Box::new(subst(a, v, k))),
        }
    }
    fn step(t: &Lambda) -> Option<Lambda> {
        match t {
            Lambda::App(f, a) => match (&**f, &**a) {
                (Lambda::Lam(b), a) if matches!(a, Lambda::Lam(_)) => Some(subst(b, a, 0)),
                (Lambda::Lam(_), a) => Some(Lambda::App(f.clone(), Box::new(step(a)?))),
                (f, _) => Some(Lambda::App(Box::new(step(f)?), a.clone())),
            },
            _ => None,
        }
    }
    let mut t = t.clone();
    for _ in 0..fuel {
        match step(&t) {
            Some(next) => t = next,
            None => return Some(t),
        }
    }
    None
}

pub fn random_lambda(rng: &mut impl Rng, depth: usize, scope: usize) -> Lambda {
    let choice = if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..3) };
    match choice {
        0 if scope > 0 => Lambda::Var(rng.gen_range(0..scope)),
        0 | 1 => Lambda::Lam(Box::new(random_lambda(rng, depth.saturating_sub(1), scope + 1))),
        _ => Lambda::App(
            Box::new(random_lambda(rng, depth - 1, scope)),
            Box::new(random_lambda(rng, depth - 1, scope)),
        ),
    }
}

/// Rendering of the first `k` levels of the term rooted at `state`.
pub fn unfold_string(t: &EqSystem, state: usize, k: usize) -> String {
    if k == 0 {
        return "?".into();
    }
    let elem = |e: Elem| match e {
        Elem::Atom(x) => x.to_string(),
        Elem::Term(s) => format!("<{}>", unfold_string(t, s, k - 1)),
    };
    match *t.node(state) {
        Node::Nil => "nil".into(),
        Node::Cons { head, tail } => format!("{}:{}", elem(head), unfold_string(t, tail, k - 1)),
        Node::Tree { label, children } => format!("T{label}({})", unfold_string(t, children, k - 1)),
        Node::Digit { digit, next } => format!("{digit}~{}", unfold_string(t, next, k - 1)),
    }
}

/// Random list term: a finite list or a lasso over small integers.
pub fn random_list(rng: &mut impl Rng) -> EqSystem {
    let prefix: Vec<i64> = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(-1..3)).collect();
    if rng.gen_ratio(1, 4) {
        EqSystem::finite_list(&prefix)
    } else {
        let cycle: Vec<i64> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(-1..3)).collect();
        EqSystem::lasso(&prefix, &cycle)
    }
}

/// The zero-path predicate with the list helper that only asks for some
/// element satisfying `path0`, without requiring it to be a member:
/// `path0(tree(0,l)) <- is_in0(l)`, `is_in0(t::l) <- path0(t)`,
/// `is_in0(t::l) <- is_in0(l)`, coaxioms `path0(t)`.
pub fn is_in0_system(tree: &EqSystem) -> InferenceSystem {
    assert_eq!(tree.sort(), Sort::Tree);
    let render = |s: usize| tree.subterm(s).to_string();
    let mut b = SystemBuilder::new();
    for (s, node) in tree.nodes().iter().enumerate() {
        match *node {
            Node::Tree { label, children } => {
                let t = format!("path0({})", render(s));
                if label == 0 {
                    b.rule(Rule::new([format!("is_in0({})", render(children))], t.clone()));
                }
                b.coaxiom(t);
            }
            Node::Cons { head: Elem::Term(h), tail } => {
                let l = format!("is_in0({})", render(s));
                b.rule(Rule::new([format!("path0({})", render(h))], l.clone()));
                b.rule(Rule::new([format!("is_in0({})", render(tail))], l));
            }
            _ => {}
        }
    }
    b.build()
}

/// Trees `t1 = tree(0, t2::t1::l1)` style fixture: `t1` has a zero path,
/// `t2 = tree(0, u::u::...)` does not since `u` is labelled 1.
pub const TREES: &str = "T1 = tree 0 L1\nL1 = cons T2 M1\nM1 = cons T1 L1\n\
                         T2 = tree 0 L2\nL2 = cons U L2\nU = tree 1 L1\n";

/// State of `T2`, `L2` and `U` inside the parsed fixture.
pub fn fixture_states(t1: &EqSystem) -> (usize, usize, usize) {
    let Node::Tree { children, .. } = *t1.root() else { unreachable!() };
    let Node::Cons { head: Elem::Term(t2), .. } = *t1.node(children) else { unreachable!() };
    let Node::Tree { children: l2, .. } = *t1.node(t2) else { unreachable!() };
    let Node::Cons { head: Elem::Term(u), .. } = *t1.node(l2) else { unreachable!() };
    (t2, l2, u)
}
