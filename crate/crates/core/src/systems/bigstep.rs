use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::{Caps, Table};
use crate::error::{Error, Result};
use crate::system::InferenceSystem;

/// Lambda terms with de Bruijn indices; printing picks canonical binder names
/// so alpha-equivalent terms render identically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lambda {
    Var(usize),
    Lam(Box<Lambda>),
    App(Box<Lambda>, Box<Lambda>),
}

impl Lambda {
    pub fn lam(body: Lambda) -> Lambda {
        Lambda::Lam(Box::new(body))
    }

    pub fn app(f: Lambda, a: Lambda) -> Lambda {
        Lambda::App(Box::new(f), Box::new(a))
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Lambda::Lam(_))
    }

    pub fn is_closed(&self) -> bool {
        fn go(t: &Lambda, depth: usize) -> bool {
            match t {
                Lambda::Var(i) => *i < depth,
                Lambda::Lam(b) => go(b, depth + 1),
                Lambda::App(f, a) => go(f, depth) && go(a, depth),
            }
        }
        go(self, 0)
    }

    /// `body[x ← v]` for the outermost binder of a lambda body, `v` closed.
    pub fn instantiate(body: &Lambda, v: &Lambda) -> Lambda {
        fn go(t: &Lambda, v: &Lambda, k: usize) -> Lambda {
            match t {
                Lambda::Var(i) if *i == k => v.clone(),
                Lambda::Var(i) if *i > k => Lambda::Var(i - 1),
                Lambda::Var(i) => Lambda::Var(*i),
                Lambda::Lam(b) => Lambda::lam(go(b, v, k + 1)),
                Lambda::App(f, a) => Lambda::app(go(f, v, k), go(a, v, k)),
            }
        }
        go(body, v, 0)
    }

    /// Parses `\x. e`, `λx y. e`, application by juxtaposition and parentheses.
    /// Free variables are rejected.
    pub fn parse(text: &str) -> Result<Lambda> {
        let mut p = Parser {
            chars: text.chars().collect(),
            at: 0,
            scope: Vec::new(),
        };
        let t = p.term()?;
        p.skip_ws();
        if p.at < p.chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(t)
    }
}

struct Parser {
    chars: Vec<char>,
    at: usize,
    scope: Vec<String>,
}

impl Parser {
    fn error(&self, msg: &str) -> Error {
        let line = self.chars[..self.at].iter().filter(|&&c| c == '\n').count() + 1;
        let col = self.chars[..self.at].iter().rev().take_while(|&&c| c != '\n').count() + 1;
        Error::parse(line, col, msg)
    }

    fn skip_ws(&mut self) {
        while self.at < self.chars.len() && self.chars[self.at].is_whitespace() {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.at).copied()
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.at;
        while self.at < self.chars.len() && (self.chars[self.at].is_alphanumeric() || "_'".contains(self.chars[self.at])) {
            self.at += 1;
        }
        (self.at > start).then(|| self.chars[start..self.at].iter().collect())
    }

    fn term(&mut self) -> Result<Lambda> {
        let mut t = self.atom()?;
        while let Some(c) = self.peek() {
            if c == ')' {
                break;
            }
            let a = self.atom()?;
            t = Lambda::app(t, a);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Lambda> {
        match self.peek() {
            Some('(') => {
                self.at += 1;
                let t = self.term()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.at += 1;
                Ok(t)
            }
            Some('\\') | Some('λ') => {
                self.at += 1;
                let mut names = Vec::new();
                while let Some(x) = self.ident() {
                    names.push(x);
                }
                if names.is_empty() || self.peek() != Some('.') {
                    return Err(self.error("expected binder names followed by `.`"));
                }
                self.at += 1;
                let depth = self.scope.len();
                self.scope.extend(names.iter().cloned());
                let mut body = self.term()?;
                self.scope.truncate(depth);
                for _ in &names {
                    body = Lambda::lam(body);
                }
                Ok(body)
            }
            Some(_) => match self.ident() {
                Some(x) => match self.scope.iter().rev().position(|y| *y == x) {
                    Some(i) => Ok(Lambda::Var(i)),
                    None => Err(self.error(&format!("free variable `{x}`"))),
                },
                None => Err(self.error("expected a term")),
            },
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn binder(depth: usize) -> String {
    match depth {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        d => format!("x{d}"),
    }
}

/// ASCII rendering without whitespace: `\x.body`, applications as `(f@a)`.
impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &Lambda, depth: usize, out: &mut String) {
            match t {
                Lambda::Var(i) => out.push_str(&binder(depth - 1 - i)),
                Lambda::Lam(b) => {
                    out.push('\\');
                    out.push_str(&binder(depth));
                    out.push('.');
                    go(b, depth + 1, out);
                }
                Lambda::App(g, a) => {
                    out.push('(');
                    if g.is_value() {
                        out.push('(');
                        go(g, depth, out);
                        out.push(')');
                    } else {
                        go(g, depth, out);
                    }
                    out.push('@');
                    go(a, depth, out);
                    out.push(')');
                }
            }
        }
        let mut s = String::new();
        go(self, 0, &mut s);
        f.write_str(&s)
    }
}

/// Closed expressions met while evaluating `goal`, with the values each one
/// can finitely evaluate to.
///
/// An application `f a` contributes `f`, `a` and `body[v]` for every
/// `\body` that `f` evaluates to and every `v` that `a` evaluates to; results
/// are the least solution of the big-step equations over those expressions.
struct Closure {
    exprs: Vec<Lambda>,
    results: HashMap<Lambda, BTreeSet<Lambda>>,
}

fn closure(goal: &Lambda, cap: usize) -> Result<Closure> {
    let mut exprs: BTreeSet<Lambda> = BTreeSet::from([goal.clone()]);
    let mut results: HashMap<Lambda, BTreeSet<Lambda>> = HashMap::new();
    loop {
        let mut grew = false;
        let snapshot: Vec<Lambda> = exprs.iter().cloned().collect();
        for e in &snapshot {
            let found: BTreeSet<Lambda> = match e {
                Lambda::Var(_) => unreachable!("expressions are closed"),
                Lambda::Lam(_) => BTreeSet::from([e.clone()]),
                Lambda::App(f, a) => {
                    let mut found = BTreeSet::new();
                    let mut fresh = vec![(**f).clone(), (**a).clone()];
                    let empty = BTreeSet::new();
                    let fs = results.get(&**f).unwrap_or(&empty);
                    let avs = results.get(&**a).unwrap_or(&empty);
                    for lam in fs {
                        let Lambda::Lam(body) = lam else { unreachable!() };
                        for v in avs {
                            let inst = Lambda::instantiate(body, v);
                            if let Some(rs) = results.get(&inst) {
                                found.extend(rs.iter().cloned());
                            }
                            fresh.push(inst);
                        }
                    }
                    for x in fresh {
                        if exprs.insert(x) {
                            grew = true;
                            if exprs.len() > cap {
                                return Err(Error::CapExceeded {
                                    cap,
                                    what: "closed expressions",
                                });
                            }
                        }
                    }
                    found
                }
            };
            let entry = results.entry(e.clone()).or_default();
            let before = entry.len();
            entry.extend(found);
            grew |= entry.len() != before;
        }
        if !grew {
            return Ok(Closure {
                exprs: exprs.into_iter().collect(),
                results,
            });
        }
    }
}

/// `e=>v` and `e=>inf`: call-by-value big-step evaluation where `inf` marks
/// divergence.
///
/// Expressions are the closed terms met while evaluating `goal`; results
/// range over the values among them and `inf`. Rules (val), (l-inf), (r-inf),
/// and (app) for the function and argument values each side can finitely
/// produce (other instances have a premise outside the coaxiom closure and
/// never fire). Every `e=>inf` is a coaxiom.
pub fn build_bigstep(goal: &Lambda) -> Result<InferenceSystem> {
    build_bigstep_with(goal, &Caps::default())
}

pub fn build_bigstep_with(goal: &Lambda, caps: &Caps) -> Result<InferenceSystem> {
    if !goal.is_closed() {
        return Err(Error::ShapeMismatch("goal term has free variables".into()));
    }
    let Closure { exprs, results } = closure(goal, caps.expressions)?;
    let values: Vec<Lambda> = exprs.iter().filter(|e| e.is_value()).cloned().collect();
    let nv = values.len() + 1;
    if exprs.len().saturating_mul(nv) > caps.rules {
        return Err(Error::CapExceeded {
            cap: caps.rules,
            what: "judgements",
        });
    }
    let eix: HashMap<&Lambda, usize> = exprs.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let vix: HashMap<&Lambda, usize> = values.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let inf = values.len();
    let id = |e: &Lambda, r: usize| eix[e] * nv + r;
    let mut names = Vec::with_capacity(exprs.len() * nv);
    for e in &exprs {
        for v in &values {
            names.push(format!("{e}=>{v}"));
        }
        names.push(format!("{e}=>inf"));
    }
    let mut t = Table::new(names, caps.rules);
    for e in &exprs {
        match e {
            Lambda::Var(_) => unreachable!("expressions are closed"),
            Lambda::Lam(_) => t.rule(id(e, vix[e]), [])?,
            Lambda::App(f, a) => {
                for lam in &results[&**f] {
                    let Lambda::Lam(body) = lam else { unreachable!() };
                    for v in &results[&**a] {
                        let inst = Lambda::instantiate(body, v);
                        for r in 0..nv {
                            t.rule(id(e, r), [id(f, vix[lam]), id(a, vix[v]), id(&inst, r)])?;
                        }
                    }
                }
                t.rule(id(e, inf), [id(f, inf)])?;
                for v in &values {
                    t.rule(id(e, inf), [id(f, vix[v]), id(a, inf)])?;
                }
            }
        }
        t.coaxiom(id(e, inf));
    }
    Ok(t.builder.build())
}
