use super::{braces, for_each_combination, Caps, Graph, Table};
use crate::error::{Error, Result};
use crate::system::InferenceSystem;

fn judgement(g: &Graph, v: usize, mask: u32) -> String {
    let members = (0..g.len()).filter(|i| mask >> i & 1 == 1).map(|i| g.name(i));
    format!("{}->*{}", g.name(v), braces(members))
}

/// `v->*N`: `N` is the set of nodes reachable from `v`.
///
/// One rule per node and per choice of a set for each successor, concluding
/// `v` joined with the union of the chosen sets; coaxioms `v->*{}`.
pub fn build_reach(g: &Graph) -> Result<InferenceSystem> {
    build_reach_with(g, &Caps::default())
}

pub fn build_reach_with(g: &Graph, caps: &Caps) -> Result<InferenceSystem> {
    let n = g.len();
    if n > caps.nodes || n > 24 {
        return Err(Error::CapExceeded {
            cap: caps.nodes.min(24),
            what: "graph nodes",
        });
    }
    let full = 1u32 << n;
    // index[v * full + mask] for mask == 0 or mask containing v
    let mut index = vec![usize::MAX; n * full as usize];
    let mut names = Vec::new();
    let mut options: Vec<Vec<(usize, u32)>> = Vec::with_capacity(n);
    for v in 0..n {
        let mut opts = Vec::new();
        for mask in (0..full).filter(|m| *m == 0 || m >> v & 1 == 1) {
            index[v * full as usize + mask as usize] = names.len();
            opts.push((names.len(), mask));
            names.push(judgement(g, v, mask));
        }
        options.push(opts);
    }
    let mut t = Table::new(names, caps.rules);
    for v in 0..n {
        let lists: Vec<Vec<(usize, u32)>> = g.adj(v).iter().map(|&u| options[u].clone()).collect();
        for_each_combination(&lists, |pick| {
            let mask = pick.iter().fold(1u32 << v, |m, &(_, pm)| m | pm);
            let c = index[v * full as usize + mask as usize];
            t.rule(c, pick.iter().map(|&(p, _)| p))
        })?;
        t.coaxiom(index[v * full as usize]);
    }
    Ok(t.builder.build())
}
