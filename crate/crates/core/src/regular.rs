//! Regular terms (lists, streams and trees with finitely many distinct
//! subterms) as finite systems of equations.
//!
//! Every [`EqSystem`] is kept canonical: unreachable states are dropped,
//! bisimilar states merged and the survivors numbered in breadth-first order
//! from the root. Two systems are therefore bisimilar exactly when they are
//! structurally equal, and the rendering used inside judgements is a function
//! of the infinite term alone.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// An element stored in a list cell: a plain integer or a nested term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Atom(i64),
    Term(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Nil,
    Cons { head: Elem, tail: usize },
    Tree { label: i64, children: usize },
    Digit { digit: u8, next: usize },
}

/// The sort a state inhabits; constructors must agree with it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    List,
    Tree,
    Digits,
}

impl Node {
    pub fn sort(&self) -> Sort {
        match self {
            Node::Nil | Node::Cons { .. } => Sort::List,
            Node::Tree { .. } => Sort::Tree,
            Node::Digit { .. } => Sort::Digits,
        }
    }

    fn successors(&self) -> Vec<usize> {
        match *self {
            Node::Nil => vec![],
            Node::Cons { head: Elem::Term(h), tail } => vec![h, tail],
            Node::Cons { tail, .. } => vec![tail],
            Node::Tree { children, .. } => vec![children],
            Node::Digit { next, .. } => vec![next],
        }
    }

    fn map_states(&self, f: impl Fn(usize) -> usize) -> Node {
        match *self {
            Node::Nil => Node::Nil,
            Node::Cons { head, tail } => Node::Cons {
                head: match head {
                    Elem::Term(h) => Elem::Term(f(h)),
                    a => a,
                },
                tail: f(tail),
            },
            Node::Tree { label, children } => Node::Tree {
                label,
                children: f(children),
            },
            Node::Digit { digit, next } => Node::Digit { digit, next: f(next) },
        }
    }

    /// The constructor with its payload but with states erased.
    fn shape(&self) -> (u8, i64, bool) {
        match *self {
            Node::Nil => (0, 0, false),
            Node::Cons { head: Elem::Atom(a), .. } => (1, a, false),
            Node::Cons { head: Elem::Term(_), .. } => (1, 0, true),
            Node::Tree { label, .. } => (2, label, false),
            Node::Digit { digit, .. } => (3, digit as i64, false),
        }
    }
}

/// A canonical regular term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EqSystem {
    nodes: Vec<Node>,
}

/// Coarsest stable partition of `nodes`; returns a block id per state.
fn refine(nodes: &[Node]) -> Vec<usize> {
    let mut ids: HashMap<(u8, i64, bool), usize> = HashMap::new();
    let mut block: Vec<usize> = nodes
        .iter()
        .map(|n| {
            let next = ids.len();
            *ids.entry(n.shape()).or_insert(next)
        })
        .collect();
    let mut count = ids.len();
    loop {
        let mut sigs: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let next: Vec<usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let key = (block[i], n.successors().iter().map(|&s| block[s]).collect());
                let fresh = sigs.len();
                *sigs.entry(key).or_insert(fresh)
            })
            .collect();
        let new_count = sigs.len();
        block = next;
        if new_count == count {
            return block;
        }
        count = new_count;
    }
}

fn check_sorts(nodes: &[Node]) -> Result<()> {
    let want = |s: usize, sort: Sort, what: &str| {
        if nodes[s].sort() == sort {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("{what} must be a {sort:?} state")))
        }
    };
    for n in nodes {
        match *n {
            Node::Cons { tail, .. } => want(tail, Sort::List, "list tail")?,
            Node::Tree { children, .. } => want(children, Sort::List, "tree children")?,
            Node::Digit { digit, next } => {
                if digit > 9 {
                    return Err(Error::ShapeMismatch(format!("digit {digit} out of range")));
                }
                want(next, Sort::Digits, "digit stream tail")?
            }
            Node::Nil => {}
        }
    }
    Ok(())
}

impl EqSystem {
    /// Canonicalizes an arbitrary state graph rooted at `root`.
    pub fn new(nodes: Vec<Node>, root: usize) -> Result<Self> {
        let n = nodes.len();
        if root >= n {
            return Err(Error::ShapeMismatch("root state out of range".into()));
        }
        for node in &nodes {
            if node.successors().iter().any(|&s| s >= n) {
                return Err(Error::ShapeMismatch("state reference out of range".into()));
            }
        }
        check_sorts(&nodes)?;
        let block = refine(&nodes);
        // BFS over blocks, numbering them in visiting order
        let mut number: HashMap<usize, usize> = HashMap::new();
        let mut rep: Vec<usize> = Vec::new();
        let mut queue = VecDeque::from([root]);
        number.insert(block[root], 0);
        rep.push(root);
        while let Some(s) = queue.pop_front() {
            for t in nodes[s].successors() {
                if let Entry::Vacant(e) = number.entry(block[t]) {
                    e.insert(rep.len());
                    rep.push(t);
                    queue.push_back(t);
                }
            }
        }
        let out = rep
            .iter()
            .map(|&s| nodes[s].map_states(|t| number[&block[t]]))
            .collect();
        Ok(EqSystem { nodes: out })
    }

    /// Parses one binding per line (`X = cons 1 Y`, `N = nil`, `T = tree 0 CS`,
    /// `S = digit 9 S`); the first bound variable is the root.
    pub fn parse(text: &str) -> Result<Self> {
        enum Raw<'a> {
            Nil,
            Cons(&'a str, &'a str),
            Tree(i64, &'a str),
            Digit(u8, &'a str),
        }
        let mut names: HashMap<&str, usize> = HashMap::new();
        let mut raws: Vec<(usize, Raw)> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let ln = ln + 1;
            let body = line.split('#').next().unwrap();
            if body.trim().is_empty() {
                continue;
            }
            let col = body.len() - body.trim_start().len() + 1;
            let toks: Vec<&str> = body.split_whitespace().collect();
            if toks.len() < 3 || toks[1] != "=" {
                return Err(Error::parse(ln, col, "expected `VAR = constructor ...`"));
            }
            let var = toks[0];
            if names.insert(var, raws.len()).is_some() {
                return Err(Error::parse(ln, col, format!("variable `{var}` bound twice")));
            }
            let int = |s: &str| {
                s.parse::<i64>()
                    .map_err(|_| Error::parse(ln, col, format!("expected an integer, found `{s}`")))
            };
            let raw = match (toks[2], &toks[3..]) {
                ("nil", []) => Raw::Nil,
                ("cons", [h, t]) => Raw::Cons(h, t),
                ("tree", [l, c]) => Raw::Tree(int(l)?, c),
                ("digit", [d, s]) => {
                    let d = int(d)?;
                    if !(0..=9).contains(&d) {
                        return Err(Error::parse(ln, col, format!("digit {d} out of range")));
                    }
                    Raw::Digit(d as u8, s)
                }
                (c, _) => {
                    return Err(Error::parse(
                        ln,
                        col,
                        format!("bad arity or unknown constructor `{c}`"),
                    ))
                }
            };
            raws.push((ln, raw));
        }
        if raws.is_empty() {
            return Err(Error::parse(1, 1, "no bindings"));
        }
        let var = |ln: usize, s: &str| {
            names
                .get(s)
                .copied()
                .ok_or_else(|| Error::parse(ln, 1, format!("unbound variable `{s}`")))
        };
        let mut nodes = Vec::with_capacity(raws.len());
        for (ln, raw) in &raws {
            let ln = *ln;
            nodes.push(match *raw {
                Raw::Nil => Node::Nil,
                Raw::Cons(h, t) => Node::Cons {
                    head: match h.parse::<i64>() {
                        Ok(a) => Elem::Atom(a),
                        Err(_) => Elem::Term(var(ln, h)?),
                    },
                    tail: var(ln, t)?,
                },
                Raw::Tree(label, c) => Node::Tree {
                    label,
                    children: var(ln, c)?,
                },
                Raw::Digit(digit, s) => Node::Digit { digit, next: var(ln, s)? },
            });
        }
        Self::new(nodes, 0)
    }

    /// The finite list `xs[0]::...::Λ`.
    pub fn finite_list(xs: &[i64]) -> Self {
        let mut nodes: Vec<Node> = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| Node::Cons {
                head: Elem::Atom(x),
                tail: i + 1,
            })
            .collect();
        nodes.push(Node::Nil);
        Self::new(nodes, 0).expect("well-formed list")
    }

    /// The stream `prefix` followed by `cycle` repeated forever; `cycle` must be non-empty.
    pub fn lasso(prefix: &[i64], cycle: &[i64]) -> Self {
        assert!(!cycle.is_empty(), "a stream needs a non-empty cycle");
        let start = prefix.len();
        let total = prefix.len() + cycle.len();
        let nodes = prefix
            .iter()
            .chain(cycle)
            .enumerate()
            .map(|(i, &x)| Node::Cons {
                head: Elem::Atom(x),
                tail: if i + 1 == total { start } else { i + 1 },
            })
            .collect();
        Self::new(nodes, 0).expect("well-formed stream")
    }

    /// The digit stream `prefix` followed by `cycle` repeated forever.
    pub fn digits(prefix: &[u8], cycle: &[u8]) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::ShapeMismatch("a digit stream needs a non-empty cycle".into()));
        }
        let start = prefix.len();
        let total = prefix.len() + cycle.len();
        let nodes = prefix
            .iter()
            .chain(cycle)
            .enumerate()
            .map(|(i, &d)| Node::Digit {
                digit: d,
                next: if i + 1 == total { start } else { i + 1 },
            })
            .collect();
        Self::new(nodes, 0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The root is always state 0.
    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }

    pub fn node(&self, state: usize) -> &Node {
        &self.nodes[state]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn sort(&self) -> Sort {
        self.nodes[0].sort()
    }

    /// The term rooted at `state`, canonicalized on its own.
    pub fn subterm(&self, state: usize) -> EqSystem {
        Self::new(self.nodes.clone(), state).expect("states of a canonical system are valid")
    }

    /// Unfolding to `depth` constructors, as a comparable finite shape.
    pub fn unfold(&self, depth: usize) -> Unfolding {
        fn go(sys: &EqSystem, s: usize, depth: usize) -> Unfolding {
            if depth == 0 {
                return Unfolding::Cut;
            }
            let node = sys.nodes[s];
            let shape = node.shape();
            let kids = node.successors().iter().map(|&t| go(sys, t, depth - 1)).collect();
            Unfolding::Node(shape.0, shape.1, shape.2, kids)
        }
        go(self, 0, depth)
    }

    /// Textual equations that [`EqSystem::parse`] reads back.
    pub fn to_equations(&self) -> String {
        let mut out = String::new();
        for (i, n) in self.nodes.iter().enumerate() {
            let line = match *n {
                Node::Nil => format!("S{i} = nil"),
                Node::Cons { head: Elem::Atom(a), tail } => format!("S{i} = cons {a} S{tail}"),
                Node::Cons { head: Elem::Term(h), tail } => format!("S{i} = cons S{h} S{tail}"),
                Node::Tree { label, children } => format!("S{i} = tree {label} S{children}"),
                Node::Digit { digit, next } => format!("S{i} = digit {digit} S{next}"),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Finite prefix of an infinite term, used for bounded comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unfolding {
    Cut,
    Node(u8, i64, bool, Vec<Unfolding>),
}

/// Renders the term with `$k` back-references for cycles and `$k=` binders
/// on their targets; whitespace-free so it can sit inside a judgement token.
impl fmt::Display for EqSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(sys: &EqSystem, s: usize, stack: &mut Vec<usize>, referenced: &mut BTreeSet<usize>) -> String {
            if stack.contains(&s) {
                referenced.insert(s);
                return format!("${s}");
            }
            stack.push(s);
            let body = match sys.nodes[s] {
                Node::Nil => "[]".to_string(),
                Node::Cons { head, tail } => {
                    let h = match head {
                        Elem::Atom(a) => a.to_string(),
                        Elem::Term(t) => format!("({})", go(sys, t, stack, referenced)),
                    };
                    format!("{h}::{}", go(sys, tail, stack, referenced))
                }
                Node::Tree { label, children } => {
                    format!("tree({label},{})", go(sys, children, stack, referenced))
                }
                Node::Digit { digit, next } => format!("{digit}~{}", go(sys, next, stack, referenced)),
            };
            stack.pop();
            if referenced.remove(&s) {
                format!("${s}={body}")
            } else {
                body
            }
        }
        f.write_str(&go(self, 0, &mut Vec::new(), &mut BTreeSet::new()))
    }
}

impl fmt::Debug for EqSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Whether two terms have equal infinite unfoldings, by partition refinement
/// over the disjoint union of their states.
pub fn bisim_equal(a: &EqSystem, b: &EqSystem) -> Result<bool> {
    if a.sort() != b.sort() {
        return Err(Error::SignatureMismatch);
    }
    let off = a.len();
    let mut nodes = a.nodes.clone();
    nodes.extend(b.nodes.iter().map(|n| n.map_states(|s| s + off)));
    let block = refine(&nodes);
    Ok(block[0] == block[off])
}

/// All distinct subterms, the term itself first, in breadth-first order.
pub fn subterms(a: &EqSystem) -> Vec<EqSystem> {
    (0..a.len()).map(|s| a.subterm(s)).collect()
}

/// Every element atom occurring in a list or digit stream.
pub fn carrier(a: &EqSystem) -> Result<BTreeSet<i64>> {
    let mut out = BTreeSet::new();
    for n in &a.nodes {
        match *n {
            Node::Nil => {}
            Node::Cons { head: Elem::Atom(x), .. } => {
                out.insert(x);
            }
            Node::Digit { digit, .. } => {
                out.insert(digit as i64);
            }
            _ => return Err(Error::ShapeMismatch("carrier needs a list of atoms".into())),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lasso_minimizes_repeated_cycles() {
        let l = EqSystem::lasso(&[], &[1, 2]);
        let m = EqSystem::lasso(&[], &[1, 2, 1, 2]);
        assert_eq!(l, m);
        assert_eq!(l.len(), 2);
        assert!(bisim_equal(&l, &m).unwrap());
        assert_eq!(l.to_string(), "$0=1::2::$0");
    }

    #[test]
    fn distinct_streams_differ() {
        let ones = EqSystem::lasso(&[], &[1]);
        let alt = EqSystem::parse("Y = cons 1 Z\nZ = cons 2 Y").unwrap();
        assert!(!bisim_equal(&ones, &alt).unwrap());
        assert_eq!(ones.to_string(), "$0=1::$0");
    }

    #[test]
    fn prefix_absorbed_by_cycle() {
        // 1::1̄ is 1̄
        assert_eq!(EqSystem::lasso(&[1], &[1]), EqSystem::lasso(&[], &[1]));
    }

    #[test]
    fn subterms_of_lists() {
        let l = EqSystem::lasso(&[], &[1, 2]);
        let subs: Vec<String> = subterms(&l).iter().map(|s| s.to_string()).collect();
        assert_eq!(subs, ["$0=1::2::$0", "$0=2::1::$0"]);
        let fin = EqSystem::finite_list(&[1, 2, 1]);
        let subs: Vec<String> = subterms(&fin).iter().map(|s| s.to_string()).collect();
        assert_eq!(subs, ["1::2::1::[]", "2::1::[]", "1::[]", "[]"]);
    }

    #[test]
    fn carriers() {
        assert_eq!(carrier(&EqSystem::lasso(&[], &[1])).unwrap(), BTreeSet::from([1]));
        assert!(carrier(&EqSystem::finite_list(&[])).unwrap().is_empty());
        assert_eq!(
            carrier(&EqSystem::lasso(&[], &[1, 2])).unwrap(),
            BTreeSet::from([1, 2])
        );
        let t = EqSystem::parse("T = tree 0 L\nL = nil").unwrap();
        assert!(matches!(carrier(&t), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn parse_trees_with_nested_terms() {
        let text = "T1 = tree 0 L1\nL1 = cons T2 M1\nM1 = cons T1 L1\n\
                    T2 = tree 0 L2\nL2 = cons U L2\nU = tree 1 L1\n";
        let t1 = EqSystem::parse(text).unwrap();
        assert_eq!(t1.sort(), Sort::Tree);
        assert_eq!(t1.len(), 6);
        let back = EqSystem::parse(&t1.to_equations()).unwrap();
        assert_eq!(back, t1);
        assert!(!t1.to_string().contains(char::is_whitespace));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(EqSystem::parse("X = cons 1 Y"), Err(Error::Parse { .. })));
        assert!(matches!(
            EqSystem::parse("X = nil\nX = nil"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(EqSystem::parse("X = digit 12 X"), Err(Error::Parse { .. })));
        assert!(matches!(
            EqSystem::parse("X = cons 1 T\nT = tree 0 N\nN = nil"),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(EqSystem::parse("# nothing"), Err(Error::Parse { .. })));
    }

    #[test]
    fn signature_mismatch() {
        let d = EqSystem::digits(&[], &[0]).unwrap();
        let l = EqSystem::lasso(&[], &[0]);
        assert_eq!(bisim_equal(&d, &l), Err(Error::SignatureMismatch));
        assert_eq!(d.to_string(), "$0=0~$0");
    }
}
