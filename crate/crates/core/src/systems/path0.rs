use super::{Caps, Table};
use crate::error::{Error, Result};
use crate::regular::{EqSystem, Elem, Node, Sort};
use crate::system::InferenceSystem;

/// `path0(t)`: some path from the root of `t` carries only 0 labels, with
/// `is_in(t,l)`: the list `l` contains the tree `t`.
///
/// `path0(tree(0,l)) <- is_in(t,l) path0(t)` for every tree subterm `t`;
/// `is_in(t,t::l)`; `is_in(t,t'::l) <- is_in(t,l)`. Every `path0` judgement is
/// a coaxiom, no `is_in` judgement is.
pub fn build_path0(tree: &EqSystem) -> Result<InferenceSystem> {
    if tree.sort() != Sort::Tree {
        return Err(Error::ShapeMismatch("expected a tree".into()));
    }
    let nodes = tree.nodes();
    for n in nodes {
        if let Node::Cons { head, .. } = *n {
            match head {
                Elem::Term(h) if nodes[h].sort() == Sort::Tree => {}
                _ => return Err(Error::ShapeMismatch("child lists must hold trees".into())),
            }
        }
    }
    let render: Vec<String> = (0..nodes.len()).map(|s| tree.subterm(s).to_string()).collect();
    let trees: Vec<usize> = (0..nodes.len()).filter(|&s| nodes[s].sort() == Sort::Tree).collect();
    let lists: Vec<usize> = (0..nodes.len()).filter(|&s| nodes[s].sort() == Sort::List).collect();
    let tree_ix = |s: usize| trees.binary_search(&s).unwrap();
    let list_ix = |s: usize| lists.binary_search(&s).unwrap();

    let path0 = |ti: usize| ti;
    let is_in = |ti: usize, li: usize| trees.len() + ti * lists.len() + li;
    let mut names: Vec<String> = trees.iter().map(|&t| format!("path0({})", render[t])).collect();
    for &t in &trees {
        for &l in &lists {
            names.push(format!("is_in({},{})", render[t], render[l]));
        }
    }
    let mut tb = Table::new(names, Caps::default().rules);
    for (ti, &t) in trees.iter().enumerate() {
        if let Node::Tree { label: 0, children } = nodes[t] {
            for tj in 0..trees.len() {
                tb.rule(path0(ti), [is_in(tj, list_ix(children)), path0(tj)])?;
            }
        }
        tb.coaxiom(path0(ti));
    }
    for (li, &l) in lists.iter().enumerate() {
        if let Node::Cons { head: Elem::Term(h), tail } = nodes[l] {
            tb.rule(is_in(tree_ix(h), li), [])?;
            for tj in 0..trees.len() {
                tb.rule(is_in(tj, li), [is_in(tj, list_ix(tail))])?;
            }
        }
    }
    Ok(tb.builder.build())
}
