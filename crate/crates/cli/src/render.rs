use std::collections::BTreeSet;
use std::fmt::Write as _;

use coax::prooftree::{PathTree, ProofGraph};
use coax::{InferenceSystem, JudgementSet};
use serde_json::{json, Value};

pub fn set_json(s: &JudgementSet) -> Value {
    json!(s.to_strings())
}

pub fn set_text(s: &JudgementSet) -> String {
    format!("{{{}}}", s.to_strings().join(", "))
}

pub fn tree_json(t: &PathTree) -> Value {
    json!({
        "judgement": t.label().as_str(),
        "children": t.children().map(tree_json).collect::<Vec<_>>(),
    })
}

/// Indented tree; leaves that no axiom concludes are marked as coaxiom uses.
pub fn tree_text(sys: &InferenceSystem, t: &PathTree) -> String {
    let mut out = String::new();
    for (depth, node) in t.walk() {
        let mark = if node.is_leaf() && !is_axiom(sys, node.label().as_str()) {
            "  (coaxiom)"
        } else {
            ""
        };
        writeln!(out, "{}{}{mark}", "  ".repeat(depth), node.label()).unwrap();
    }
    out
}

fn is_axiom(sys: &InferenceSystem, j: &str) -> bool {
    sys.position(j).is_ok_and(|p| sys.is_axiom_conclusion(p))
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn dot(nodes: &BTreeSet<String>, edges: &BTreeSet<(String, String)>, root: &str) -> String {
    let ids: Vec<&String> = nodes.iter().collect();
    let id = |j: &str| ids.iter().position(|n| n.as_str() == j).unwrap();
    let mut out = String::from("digraph proof {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, n) in ids.iter().enumerate() {
        let style = if n.as_str() == root { ", style=bold" } else { "" };
        writeln!(out, "  n{i} [label=\"{}\"{style}];", dot_escape(n)).unwrap();
    }
    for (premise, conclusion) in edges {
        writeln!(out, "  n{} -> n{} [label=\"premise\"];", id(premise), id(conclusion)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// One DOT node per judgement, edges from premise to conclusion.
pub fn tree_dot(t: &PathTree) -> String {
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    fn go(t: &PathTree, nodes: &mut BTreeSet<String>, edges: &mut BTreeSet<(String, String)>) {
        nodes.insert(t.label().to_string());
        for c in t.children() {
            edges.insert((c.label().to_string(), t.label().to_string()));
            go(c, nodes, edges);
        }
    }
    go(t, &mut nodes, &mut edges);
    dot(&nodes, &edges, t.label().as_str())
}

pub fn graph_json(g: &ProofGraph) -> Value {
    let choice: serde_json::Map<String, Value> = g
        .edges()
        .map(|(c, ps)| (c.to_string(), json!(ps.iter().map(|p| p.as_str()).collect::<Vec<_>>())))
        .collect();
    json!({
        "nodes": g.support().to_strings(),
        "choice": choice,
        "root": g.root().as_str(),
    })
}

pub fn graph_text(g: &ProofGraph) -> String {
    let mut out = format!("root {}\n", g.root());
    for (c, ps) in g.edges() {
        out.push_str(c.as_str());
        out.push_str(" <-");
        for p in ps {
            write!(out, " {p}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn graph_dot(g: &ProofGraph) -> String {
    let nodes = g.support().to_strings().into_iter().collect();
    let edges = g
        .edges()
        .flat_map(|(c, ps)| ps.into_iter().map(move |p| (p.to_string(), c.to_string())))
        .collect();
    dot(&nodes, &edges, g.root().as_str())
}

pub fn system_json(sys: &InferenceSystem) -> Value {
    let mut rules: Vec<(String, Vec<String>)> = sys
        .rules()
        .map(|r| (r.conclusion.to_string(), r.premises.iter().map(|p| p.to_string()).collect()))
        .collect();
    rules.sort();
    json!({
        "universe": sys.universe().members().iter().map(|j| j.as_str()).collect::<Vec<_>>(),
        "rules": rules
            .into_iter()
            .map(|(c, ps)| json!({"conclusion": c, "premises": ps}))
            .collect::<Vec<_>>(),
        "coaxioms": sys.coaxioms().to_strings(),
    })
}
