use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{braces, check_name, for_each_combination, Caps, Table};
use crate::error::{Error, Result};
use crate::judgement::Universe;
use crate::system::{IndexedBuilder, InferenceSystem};

/// Rendering of the empty string inside judgements; not a valid symbol name.
pub const EPSILON: &str = "eps";

/// A context-free grammar. Nonterminals are the production heads, terminals
/// every other symbol; both are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    terminals: Vec<String>,
    nonterminals: Vec<String>,
    productions: Vec<(String, Vec<String>)>,
}

impl Grammar {
    /// `productions` lists `(head, body)` pairs; an empty body is `ε`.
    pub fn new(productions: Vec<(String, Vec<String>)>) -> Result<Self> {
        let nonterminals: BTreeSet<String> = productions.iter().map(|(h, _)| h.clone()).collect();
        let mut terminals = BTreeSet::new();
        for (h, body) in &productions {
            check_name("symbol", h)?;
            for s in body {
                check_name("symbol", s)?;
                if !nonterminals.contains(s) {
                    terminals.insert(s.clone());
                }
            }
        }
        if nonterminals.contains(EPSILON) || terminals.contains(EPSILON) {
            return Err(Error::ShapeMismatch(format!("`{EPSILON}` is reserved")));
        }
        let mut productions = productions;
        productions.sort();
        productions.dedup();
        Ok(Grammar {
            terminals: terminals.into_iter().collect(),
            nonterminals: nonterminals.into_iter().collect(),
            productions,
        })
    }

    /// Reads `A -> X Y Z` lines; `.` alone is the empty body and `|` separates
    /// alternatives. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut prods = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap();
            if body.trim().is_empty() {
                continue;
            }
            let col = body.len() - body.trim_start().len() + 1;
            let toks: Vec<&str> = body.split_whitespace().collect();
            if toks.len() < 3 || toks[1] != "->" {
                return Err(Error::parse(ln + 1, col, "expected `A -> symbols`"));
            }
            for alt in toks[2..].split(|t| *t == "|") {
                let syms: Vec<String> = match alt {
                    ["."] => vec![],
                    [] => return Err(Error::parse(ln + 1, col, "empty alternative; write `.`")),
                    _ => alt.iter().map(|s| s.to_string()).collect(),
                };
                prods.push((toks[0].to_string(), syms));
            }
        }
        Grammar::new(prods)
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn productions(&self) -> &[(String, Vec<String>)] {
        &self.productions
    }

    pub fn is_nonterminal(&self, s: &str) -> bool {
        self.nonterminals.binary_search_by(|n| n.as_str().cmp(s)).is_ok()
    }

    /// Nonterminals deriving `ε`, read off the inductive interpretation of
    /// [`nullable_system`].
    pub fn nullable(&self) -> BTreeSet<String> {
        let (ind, _) = nullable_system(self).inductive();
        ind.judgements()
            .map(|j| j.as_str()["nullable(".len()..j.as_str().len() - 1].to_string())
            .collect()
    }
}

/// `nullable(A) <- nullable(B1) ... nullable(Bk)` for every production
/// `A -> B1 ... Bk` made of nonterminals only; no coaxioms.
pub fn nullable_system(g: &Grammar) -> InferenceSystem {
    let name = |a: &str| format!("nullable({a})");
    let universe = Arc::new(Universe::new(g.nonterminals.iter().map(|a| name(a))));
    let mut b = IndexedBuilder::new(Arc::clone(&universe));
    for (head, body) in &g.productions {
        if body.iter().all(|s| g.is_nonterminal(s)) {
            let ps = body.iter().map(|s| universe.position(&name(s)).unwrap());
            b.add_rule(universe.position(&name(head)).unwrap(), ps)
                .expect("no rule cap");
        }
    }
    b.build()
}

fn render_string(syms: &[String]) -> String {
    if syms.is_empty() {
        EPSILON.to_string()
    } else {
        syms.join(".")
    }
}

/// `first(α,F)`: `F` is the set of terminals that strings derived from `α` can
/// start with.
///
/// Strings range over suffixes of production bodies and single nonterminals;
/// the schemes splitting `Aα` are instantiated for non-empty `α` only, since
/// with `α = ε` they would conclude `first(A,F)` from itself.
pub fn build_first(g: &Grammar) -> Result<InferenceSystem> {
    build_first_with(g, &Caps::default())
}

pub fn build_first_with(g: &Grammar, caps: &Caps) -> Result<InferenceSystem> {
    let nt = g.terminals.len();
    if nt > caps.terminals || nt > 24 {
        return Err(Error::CapExceeded {
            cap: caps.terminals.min(24),
            what: "grammar terminals",
        });
    }
    let nullable = g.nullable();
    let term_bit = |s: &str| g.terminals.binary_search_by(|t| t.as_str().cmp(s)).ok();

    let mut strings: BTreeSet<Vec<String>> = BTreeSet::new();
    strings.insert(vec![]);
    for a in &g.nonterminals {
        strings.insert(vec![a.clone()]);
    }
    for (_, body) in &g.productions {
        for k in 0..body.len() {
            strings.insert(body[k..].to_vec());
        }
    }
    let strings: Vec<Vec<String>> = strings.into_iter().collect();
    let sid: HashMap<&[String], usize> = strings.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();

    let sets = 1usize << nt;
    let id = |s: usize, mask: usize| s * sets + mask;
    let mut names = Vec::with_capacity(strings.len() * sets);
    for s in &strings {
        let alpha = render_string(s);
        for mask in 0..sets {
            let f = (0..nt).filter(|i| mask >> i & 1 == 1).map(|i| &g.terminals[i]);
            names.push(format!("first({alpha},{})", braces(f)));
        }
    }
    let mut t = Table::new(names, caps.rules);
    let all: Vec<usize> = (0..sets).collect();

    for (si, s) in strings.iter().enumerate() {
        match s.as_slice() {
            [] => t.rule(id(si, 0), [])?,
            [sigma, ..] if !g.is_nonterminal(sigma) => {
                let bit = term_bit(sigma).unwrap();
                t.rule(id(si, 1 << bit), [])?;
            }
            [a, rest @ ..] if !rest.is_empty() => {
                let ai = sid[&s[..1]];
                let ri = sid[rest];
                if nullable.contains(a) {
                    for &f in &all {
                        for &f2 in &all {
                            t.rule(id(si, f | f2), [id(ai, f), id(ri, f2)])?;
                        }
                    }
                } else {
                    for &f in &all {
                        t.rule(id(si, f), [id(ai, f)])?;
                    }
                }
            }
            [a] => {
                // a single nonterminal: one premise per production body
                let bodies: Vec<usize> = g
                    .productions
                    .iter()
                    .filter(|(h, _)| h == a)
                    .map(|(_, b)| sid[b.as_slice()])
                    .collect();
                let lists: Vec<Vec<usize>> = bodies.iter().map(|_| all.clone()).collect();
                for_each_combination(&lists, |pick| {
                    let mask = pick.iter().fold(0, |m, f| m | f);
                    let ps: Vec<usize> = bodies.iter().zip(pick).map(|(&b, &f)| id(b, f)).collect();
                    t.rule(id(si, mask), ps)
                })?;
                t.coaxiom(id(si, 0));
            }
            _ => unreachable!(),
        }
    }
    Ok(t.builder.build())
}
