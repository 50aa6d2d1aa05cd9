//! Builders instantiating rule schemes over finite universes.
//!
//! Each builder enumerates a universe that is closed under taking premises and
//! returns an ordinary [`InferenceSystem`]; the judgement strings are
//! whitespace-free so they survive the system file format.

mod add;
mod bigstep;
mod dist;
mod first;
mod graph;
mod lists;
mod path0;
mod reach;

use std::fmt;
use std::ops::Add;
use std::sync::Arc;

pub use add::build_add;
pub use bigstep::{build_bigstep, build_bigstep_with, Lambda};
pub use dist::{build_dist, build_dist_with, build_spath, build_spath_with};
pub use first::{build_first, build_first_with, nullable_system, Grammar, EPSILON};
pub use graph::Graph;
pub use lists::{build_all_pos, build_elems, build_list_preds, build_max_elem, build_member, ListPreds};
pub use path0::build_path0;
pub use reach::{build_reach, build_reach_with};

use crate::error::{Error, Result};
use crate::judgement::Universe;
use crate::system::IndexedBuilder;

/// Size limits guarding the power-set and closure based builders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Graph nodes for reachability and distances.
    pub nodes: usize,
    /// Grammar terminals for FIRST sets.
    pub terminals: usize,
    /// Distinct list elements for carrier-valued judgements.
    pub elements: usize,
    /// Closed expressions explored for big-step evaluation.
    pub expressions: usize,
    /// Rule instances per system.
    pub rules: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            nodes: 10,
            terminals: 8,
            elements: 10,
            expressions: 2000,
            rules: 2_000_000,
        }
    }
}

/// A natural number or `∞`, ordered with `∞` on top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cost {
    Fin(u64),
    Inf,
}

impl Add for Cost {
    type Output = Cost;

    fn add(self, rhs: Cost) -> Cost {
        match (self, rhs) {
            (Cost::Fin(a), Cost::Fin(b)) => Cost::Fin(a + b),
            _ => Cost::Inf,
        }
    }
}

impl Cost {
    /// Minimum of an iterator, `∞` when empty.
    pub fn min_of(it: impl IntoIterator<Item = Cost>) -> Cost {
        it.into_iter().min().unwrap_or(Cost::Inf)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Fin(n) => write!(f, "{n}"),
            Cost::Inf => f.write_str("inf"),
        }
    }
}

/// Names usable inside judgement strings: letters, digits, `_` and `'`.
pub(crate) fn check_name(kind: &str, name: &str) -> Result<()> {
    if !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(format!("invalid {kind} name `{name}`")))
    }
}

pub(crate) fn braces<I: IntoIterator<Item = S>, S: fmt::Display>(items: I) -> String {
    let parts: Vec<String> = items.into_iter().map(|s| s.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Judgements enumerated in a builder's own order, with their positions in
/// the sorted universe.
pub(crate) struct Table {
    pub builder: IndexedBuilder,
    pos: Vec<usize>,
}

impl Table {
    pub fn new(names: Vec<String>, rule_cap: usize) -> Self {
        let universe = Arc::new(Universe::new(names.iter().cloned()));
        assert_eq!(universe.len(), names.len(), "judgement names must be distinct");
        let pos = names.iter().map(|n| universe.position(n).unwrap()).collect();
        Table {
            builder: IndexedBuilder::new(universe).with_rule_cap(rule_cap),
            pos,
        }
    }

    pub fn rule(&mut self, conclusion: usize, premises: impl IntoIterator<Item = usize>) -> Result<()> {
        let ps: Vec<usize> = premises.into_iter().map(|p| self.pos[p]).collect();
        self.builder.add_rule(self.pos[conclusion], ps)
    }

    pub fn coaxiom(&mut self, j: usize) {
        self.builder.add_coaxiom(self.pos[j]);
    }
}

/// Calls `f` on every combination picking one entry from each list.
pub(crate) fn for_each_combination<T: Copy>(
    lists: &[Vec<T>],
    mut f: impl FnMut(&[T]) -> Result<()>,
) -> Result<()> {
    if lists.iter().any(|l| l.is_empty()) {
        return Ok(());
    }
    let mut idx = vec![0usize; lists.len()];
    let mut pick: Vec<T> = lists.iter().map(|l| l[0]).collect();
    loop {
        f(&pick)?;
        let mut k = lists.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                pick[k] = lists[k][idx[k]];
                break;
            }
            idx[k] = 0;
            pick[k] = lists[k][0];
        }
    }
}
