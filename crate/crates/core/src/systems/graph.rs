use std::collections::BTreeMap;

use super::check_name;
use crate::error::{Error, Result};

/// A directed graph with nodes kept in name order and optional edge weights.
///
/// Unweighted edges count as weight 1 wherever weights are consulted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    adj: Vec<Vec<usize>>,
    weights: BTreeMap<(usize, usize), u64>,
}

impl Graph {
    pub fn new<I, S>(nodes: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = nodes.into_iter().map(Into::into).collect();
        names.sort();
        names.dedup();
        for n in &names {
            check_name("node", n)?;
        }
        Ok(Graph {
            adj: vec![Vec::new(); names.len()],
            names,
            weights: BTreeMap::new(),
        })
    }

    fn lookup(&self, name: &str) -> Result<usize> {
        self.index(name)
            .ok_or_else(|| Error::ShapeMismatch(format!("unknown node `{name}`")))
    }

    /// Adds `u → v` with weight 1; repeated edges keep the last weight.
    pub fn add_edge(&mut self, u: &str, v: &str) -> Result<()> {
        self.add_weighted_edge(u, v, 1)
    }

    pub fn add_weighted_edge(&mut self, u: &str, v: &str, w: u64) -> Result<()> {
        let (a, b) = (self.lookup(u)?, self.lookup(v)?);
        if let Err(at) = self.adj[a].binary_search(&b) {
            self.adj[a].insert(at, b);
        }
        self.weights.insert((a, b), w);
        Ok(())
    }

    /// Reads `node x` and `edge u v [w]` lines; `#` starts a comment. Nodes
    /// named by edges are declared implicitly.
    pub fn parse(text: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut edges = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap();
            let col = body.len() - body.trim_start().len() + 1;
            let toks: Vec<&str> = body.split_whitespace().collect();
            let err = |m: String| Error::parse(ln + 1, col, m);
            match toks.as_slice() {
                [] => {}
                ["node", rest @ ..] if !rest.is_empty() => nodes.extend(rest.iter().map(|s| s.to_string())),
                ["edge", u, v] => edges.push((u.to_string(), v.to_string(), 1)),
                ["edge", u, v, w] => {
                    let w = w.parse::<u64>().map_err(|_| err(format!("bad weight `{w}`")))?;
                    edges.push((u.to_string(), v.to_string(), w));
                }
                _ => return Err(err("expected `node x ...` or `edge u v [w]`".into())),
            }
        }
        let mut g = Graph::new(
            nodes
                .iter()
                .cloned()
                .chain(edges.iter().flat_map(|(u, v, _)| [u.clone(), v.clone()])),
        )?;
        for (u, v, w) in edges {
            g.add_weighted_edge(&u, &v, w)?;
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.names {
            out.push_str(&format!("node {n}\n"));
        }
        for (&(a, b), w) in &self.weights {
            out.push_str(&format!("edge {} {} {w}\n", self.names[a], self.names[b]));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    /// Successors of node `i`, ascending.
    pub fn adj(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u64> {
        self.weights.get(&(u, v)).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let g = Graph::parse("node c\nedge b a 2 # back\nedge a b\n").unwrap();
        assert_eq!(g.names(), ["a", "b", "c"]);
        assert_eq!(g.adj(0), [1]);
        assert_eq!(g.weight(1, 0), Some(2));
        assert_eq!(g.weight(0, 1), Some(1));
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert!(matches!(
            Graph::parse("node a\nedge a"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(Graph::parse("edge a b x"), Err(Error::Parse { .. })));
        assert!(matches!(Graph::parse("node a{b}"), Err(Error::ShapeMismatch(_))));
    }
}
