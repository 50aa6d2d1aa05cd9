//! Checkers for candidate specifications and an exhaustive oracle.

use std::fmt;

use crate::error::{Error, Result};
use crate::judgement::Judgement;
use crate::set::JudgementSet;
use crate::system::{InferenceSystem, Rule};

/// Largest universe the brute-force oracle enumerates by default.
pub const DEFAULT_ORACLE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A rule whose premises lie in the set but whose conclusion does not.
    ViolatedRule(Rule),
    /// A member with no rule whose premises all lie in the set.
    Unsupported(Judgement),
    /// A member outside the closure of the coaxioms.
    OutsideClosure(Judgement),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::ViolatedRule(r) => write!(f, "rule `{r}` leaves the set"),
            Witness::Unsupported(j) => write!(f, "`{j}` has no rule with premises in the set"),
            Witness::OutsideClosure(j) => write!(f, "`{j}` is outside the closure of the coaxioms"),
        }
    }
}

/// Outcome of a check; a failure always carries a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    witness: Option<Witness>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict { witness: None }
    }

    pub fn fails(witness: Witness) -> Self {
        Verdict { witness: Some(witness) }
    }

    pub fn ok(&self) -> bool {
        self.witness.is_none()
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }
}

/// `F(s) ⊆ s`, i.e. every rule with premises in `s` concludes inside `s`.
pub fn check_closed(sys: &InferenceSystem, s: &JudgementSet) -> Result<Verdict> {
    sys.check_set(s)?;
    let u = sys.universe();
    for c in (0..u.len()).filter(|&c| !s.contains(c)) {
        if let Some(ps) = sys
            .premise_sets(c)
            .iter()
            .find(|ps| ps.iter().all(|&p| s.contains(p as usize)))
        {
            let rule = Rule::new(ps.iter().map(|&p| u.get(p as usize).clone()), u.get(c).clone());
            return Ok(Verdict::fails(Witness::ViolatedRule(rule)));
        }
    }
    Ok(Verdict::holds())
}

fn unsupported(sys: &InferenceSystem, s: &JudgementSet) -> Option<usize> {
    s.iter().find(|&c| {
        !sys.premise_sets(c)
            .iter()
            .any(|ps| ps.iter().all(|&p| s.contains(p as usize)))
    })
}

/// `s ⊆ F(s)`, i.e. every member is the conclusion of a rule with premises in `s`.
pub fn check_consistent(sys: &InferenceSystem, s: &JudgementSet) -> Result<Verdict> {
    sys.check_set(s)?;
    Ok(match unsupported(sys, s) {
        Some(c) => Verdict::fails(Witness::Unsupported(sys.universe().get(c).clone())),
        None => Verdict::holds(),
    })
}

/// Bounded coinduction: `s` inside the closure of the coaxioms and consistent.
/// A passing set is contained in the generated interpretation.
pub fn bounded_coinduction(sys: &InferenceSystem, s: &JudgementSet) -> Result<Verdict> {
    sys.check_set(s)?;
    let beta = sys.closure_of();
    if let Some(j) = s.iter().find(|&j| !beta.contains(j)) {
        return Ok(Verdict::fails(Witness::OutsideClosure(sys.universe().get(j).clone())));
    }
    check_consistent(sys, s)
}

/// Least `n` with `j ∉ Fⁿ(closure_of(sys))`, or `None` when `j` survives the
/// whole descent (equivalently, `j` is in the generated interpretation).
pub fn refute_level(sys: &InferenceSystem, j: &str) -> Result<Option<usize>> {
    let pos = sys.position(j)?;
    let trace = sys.generated_trace();
    Ok(trace.steps().iter().position(|s| !s.contains(pos)))
}

/// Everything the exhaustive enumeration learns about a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForce {
    pub fixed_points: Vec<JudgementSet>,
    pub mu: JudgementSet,
    pub nu: JudgementSet,
    pub gen: JudgementSet,
}

/// Enumerates all `2^|U|` subsets with a bitmask evaluation of the inference
/// operator that shares nothing with the iterative engine.
///
/// `mu` is the meet of the pre-fixed points, `nu` the join of the post-fixed
/// points, and `gen` the join of the fixed points below the meet of the
/// pre-fixed points containing the coaxioms.
pub fn brute_force(sys: &InferenceSystem, cap: usize) -> Result<BruteForce> {
    let u = sys.universe();
    let n = u.len();
    if n > cap || n > 32 {
        return Err(Error::UniverseTooLarge { size: n, cap });
    }
    let rules: Vec<(u64, u64)> = sys
        .rules()
        .map(|r| {
            let pre = r
                .premises
                .iter()
                .fold(0u64, |m, p| m | 1 << u.position(p.as_str()).unwrap());
            (pre, 1u64 << u.position(r.conclusion.as_str()).unwrap())
        })
        .collect();
    let gamma = sys.coaxioms().iter().fold(0u64, |m, p| m | 1 << p);
    let f = |s: u64| {
        rules
            .iter()
            .filter(|(pre, _)| pre & !s == 0)
            .fold(0u64, |acc, (_, c)| acc | c)
    };
    let full: u64 = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    let mut mu = full;
    let mut nu = 0u64;
    let mut closure = full;
    let mut fixed = Vec::new();
    for s in 0..=full {
        let fs = f(s);
        if fs & !s == 0 {
            mu &= s;
            if gamma & !s == 0 {
                closure &= s;
            }
        }
        if s & !fs == 0 {
            nu |= s;
        }
        if fs == s {
            fixed.push(s);
        }
    }
    let gen = fixed
        .iter()
        .filter(|&&z| z & !closure == 0)
        .fold(0u64, |acc, z| acc | z);
    let to_set = |m: u64| JudgementSet::from_positions(u, (0..n).filter(|i| m >> i & 1 == 1));
    Ok(BruteForce {
        fixed_points: fixed.into_iter().map(to_set).collect(),
        mu: to_set(mu),
        nu: to_set(nu),
        gen: to_set(gen),
    })
}
