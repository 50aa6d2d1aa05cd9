use std::collections::HashMap;

use super::{for_each_combination, Caps, Cost, Graph, Table};
use crate::error::{Error, Result};
use crate::system::InferenceSystem;

fn check_nodes(g: &Graph, caps: &Caps) -> Result<()> {
    if g.len() > caps.nodes {
        return Err(Error::CapExceeded {
            cap: caps.nodes,
            what: "graph nodes",
        });
    }
    Ok(())
}

fn w(g: &Graph, v: usize, u: usize) -> u64 {
    g.weight(v, u).expect("adjacent nodes carry a weight")
}

/// Upper bound on the weight of any simple path: every node contributes at
/// most its heaviest outgoing edge.
pub(crate) fn simple_path_bound(g: &Graph) -> u64 {
    (0..g.len())
        .map(|v| g.adj(v).iter().map(|&u| w(g, v, u)).max().unwrap_or(0))
        .sum()
}

/// `dist(v,u,δ)`: the least weight of a path from `v` to `u`, `inf` if none.
///
/// `dist(v,v,0)`; for `v ≠ u` one rule per choice of `δᵢ` for every successor
/// `vᵢ`, concluding `min(w(v,vᵢ) + δᵢ)` (so `inf` when `v` has no successors);
/// coaxioms `dist(v,u,inf)` for `v ≠ u`. Finite `δ` stop at the heaviest
/// possible simple path; rules concluding beyond it are not instantiated.
pub fn build_dist(g: &Graph) -> Result<InferenceSystem> {
    build_dist_with(g, &Caps::default())
}

pub fn build_dist_with(g: &Graph, caps: &Caps) -> Result<InferenceSystem> {
    build_dist_bounded(g, caps, simple_path_bound(g))
}

pub(crate) fn build_dist_bounded(g: &Graph, caps: &Caps, bound: u64) -> Result<InferenceSystem> {
    check_nodes(g, caps)?;
    let n = g.len();
    let values: Vec<Cost> = (0..=bound).map(Cost::Fin).chain([Cost::Inf]).collect();
    let nv = values.len();
    let slot = |c: Cost| match c {
        Cost::Fin(k) => k as usize,
        Cost::Inf => nv - 1,
    };
    let id = |v: usize, u: usize, c: Cost| (v * n + u) * nv + slot(c);
    let mut names = Vec::with_capacity(n * n * nv);
    for v in 0..n {
        for u in 0..n {
            for c in &values {
                names.push(format!("dist({},{},{c})", g.name(v), g.name(u)));
            }
        }
    }
    let mut t = Table::new(names, caps.rules);
    for v in 0..n {
        for u in 0..n {
            if v == u {
                t.rule(id(v, v, Cost::Fin(0)), [])?;
                continue;
            }
            let lists: Vec<Vec<Cost>> = g.adj(v).iter().map(|_| values.clone()).collect();
            for_each_combination(&lists, |pick| {
                let d = Cost::min_of(
                    g.adj(v)
                        .iter()
                        .zip(pick)
                        .map(|(&vi, &di)| Cost::Fin(w(g, v, vi)) + di),
                );
                if d > Cost::Fin(bound) && d != Cost::Inf {
                    return Ok(());
                }
                let ps = g.adj(v).iter().zip(pick).map(|(&vi, &di)| id(vi, u, di));
                t.rule(id(v, u, d), ps)
            })?;
            t.coaxiom(id(v, u, Cost::Inf));
        }
    }
    Ok(t.builder.build())
}

fn render_path(g: &Graph, path: &[usize]) -> String {
    if path.is_empty() {
        "bot".to_string()
    } else {
        path.iter().map(|&i| g.name(i)).collect::<Vec<_>>().join(".")
    }
}

/// Simple paths from every node to `u`, with `v = u` giving only the one-node path.
fn simple_paths_to(g: &Graph, u: usize) -> Vec<Vec<usize>> {
    fn extend(g: &Graph, path: &mut Vec<usize>, u: usize, out: &mut Vec<Vec<usize>>) {
        let v = *path.last().unwrap();
        if v == u {
            out.push(path.clone());
            return;
        }
        for &x in g.adj(v) {
            if !path.contains(&x) {
                path.push(x);
                extend(g, path, u, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for v in 0..g.len() {
        extend(g, &mut vec![v], u, &mut out);
    }
    out
}

/// `spath(v,u,α,δ)`: `α` is a shortest path from `v` to `u` of weight `δ`,
/// or `bot` with `inf` when there is none.
///
/// Paths are simple, so `δ` is determined by `α`. The rule for `v ≠ u` picks,
/// among the successors' choices, the least `w(v,vᵢ) + δᵢ`, breaking ties by
/// the least successor index; `v` prefixed to `bot` stays `bot`. Conclusions
/// whose path would revisit a node are not instantiated. Coaxioms
/// `spath(v,u,bot,inf)` for `v ≠ u`.
pub fn build_spath(g: &Graph) -> Result<InferenceSystem> {
    build_spath_with(g, &Caps::default())
}

pub fn build_spath_with(g: &Graph, caps: &Caps) -> Result<InferenceSystem> {
    check_nodes(g, caps)?;
    let n = g.len();
    let weight = |p: &[usize]| p.windows(2).map(|e| w(g, e[0], e[1])).sum::<u64>();
    // judgements keyed by (v, u, path); the empty path stands for bot
    let mut names = Vec::new();
    let mut ids: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
    let mut by_pair: Vec<Vec<(usize, Cost, Vec<usize>)>> = vec![Vec::new(); n * n];
    for u in 0..n {
        for p in simple_paths_to(g, u) {
            let v = p[0];
            let c = Cost::Fin(weight(&p));
            names.push(format!("spath({},{},{},{c})", g.name(v), g.name(u), render_path(g, &p)));
            ids.insert((v, u, p.clone()), names.len() - 1);
            by_pair[v * n + u].push((names.len() - 1, c, p));
        }
        for v in (0..n).filter(|&v| v != u) {
            names.push(format!("spath({},{},bot,inf)", g.name(v), g.name(u)));
            ids.insert((v, u, vec![]), names.len() - 1);
            by_pair[v * n + u].push((names.len() - 1, Cost::Inf, vec![]));
        }
    }
    let mut t = Table::new(names, caps.rules);
    for v in 0..n {
        for u in 0..n {
            if v == u {
                t.rule(ids[&(v, v, vec![v])], [])?;
                continue;
            }
            let lists: Vec<Vec<usize>> = g
                .adj(v)
                .iter()
                .map(|&vi| (0..by_pair[vi * n + u].len()).collect())
                .collect();
            for_each_combination(&lists, |pick| {
                let mut best: Option<(Cost, usize, usize)> = None;
                for (i, (&vi, &k)) in g.adj(v).iter().zip(pick).enumerate() {
                    let c = Cost::Fin(w(g, v, vi)) + by_pair[vi * n + u][k].1;
                    if best.is_none_or(|(b, _, _)| c < b) {
                        best = Some((c, i, k));
                    }
                }
                let conclusion = match best {
                    None => Some(ids[&(v, u, vec![])]),
                    Some((Cost::Inf, _, _)) => Some(ids[&(v, u, vec![])]),
                    Some((_, i, k)) => {
                        let tail = &by_pair[g.adj(v)[i] * n + u][k].2;
                        let mut path = vec![v];
                        path.extend(tail);
                        ids.get(&(v, u, path)).copied()
                    }
                };
                let Some(c) = conclusion else { return Ok(()) };
                let ps = g.adj(v).iter().zip(pick).map(|(&vi, &k)| by_pair[vi * n + u][k].0);
                t.rule(c, ps)
            })?;
            t.coaxiom(ids[&(v, u, vec![])]);
        }
    }
    Ok(t.builder.build())
}
