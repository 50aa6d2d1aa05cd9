//! Fixed points of the inference operator by Kleene iteration.
//!
//! On a finite universe every chain `S, F(S), F²(S), ...` started from a pre- or
//! post-fixed point is monotone and stabilizes within `|U|` strict steps, so
//! plain iteration is exact for the least fixed point (from `∅`), the greatest
//! fixed point (from `U`), the closure of the coaxioms (least fixed point of
//! `S ↦ F(S) ∪ γ`) and the kernel of a closed bound (descent from the bound).

use crate::error::{Error, Result};
use crate::set::JudgementSet;
use crate::system::InferenceSystem;

/// The sets `S₀, F(S₀), F²(S₀), ...` up to and including the first repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationTrace {
    steps: Vec<JudgementSet>,
}

impl IterationTrace {
    pub fn steps(&self) -> &[JudgementSet] {
        &self.steps
    }

    /// Number of operator applications performed.
    pub fn iterations(&self) -> usize {
        self.steps.len() - 1
    }

    /// The fixed point reached.
    pub fn last(&self) -> &JudgementSet {
        self.steps.last().expect("trace is never empty")
    }

    /// `Fⁿ(S₀)`; indices past the end return the stable set.
    pub fn level(&self, n: usize) -> &JudgementSet {
        &self.steps[n.min(self.steps.len() - 1)]
    }
}

fn iterate(sys: &InferenceSystem, start: JudgementSet) -> IterationTrace {
    let mut steps = vec![start];
    loop {
        let next = sys.step(steps.last().unwrap());
        let done = &next == steps.last().unwrap();
        steps.push(next);
        if done {
            return IterationTrace { steps };
        }
    }
}

impl InferenceSystem {
    /// `Ind`: the least fixed point, by ascending iteration from `∅`.
    pub fn inductive(&self) -> (JudgementSet, IterationTrace) {
        let trace = iterate(self, self.empty_set());
        (trace.last().clone(), trace)
    }

    /// `CoInd`: the greatest fixed point, by descending iteration from `U`.
    pub fn coinductive(&self) -> (JudgementSet, IterationTrace) {
        let trace = iterate(self, self.full_set());
        (trace.last().clone(), trace)
    }

    /// Least closed set containing the coaxioms, i.e. `Ind` of the system with
    /// coaxioms read as axioms.
    pub fn closure_of(&self) -> JudgementSet {
        self.closure_trace().last().clone()
    }

    /// Ascending trace of the system with coaxioms read as axioms.
    pub fn closure_trace(&self) -> IterationTrace {
        self.with_coaxioms_as_axioms().inductive().1
    }

    /// Greatest fixed point contained in the closed set `beta`, by descent from `beta`.
    pub fn kernel_below(&self, beta: &JudgementSet) -> Result<(JudgementSet, IterationTrace)> {
        self.check_set(beta)?;
        let inferred = self.step(beta);
        if let Some(w) = inferred.iter().find(|&c| !beta.contains(c)) {
            return Err(Error::BetaNotClosed {
                witness: self.universe().get(w).clone(),
            });
        }
        let trace = iterate(self, beta.clone());
        Ok((trace.last().clone(), trace))
    }

    /// Descending chain `Fⁿ(closure_of())` down to its stable point.
    pub fn generated_trace(&self) -> IterationTrace {
        let beta = self.closure_of();
        self.kernel_below(&beta).expect("closure is closed").1
    }

    /// `Gen`: the greatest fixed point below the closure of the coaxioms.
    ///
    /// Computed by descent from the closure and checked against the coinductive
    /// interpretation of the system restricted to the closure.
    pub fn generated(&self) -> JudgementSet {
        let beta = self.closure_of();
        let (gen, _) = self.kernel_below(&beta).expect("closure is closed");
        let restricted = self.restrict_to(&beta).expect("same universe");
        let (co, _) = restricted.coinductive();
        assert_eq!(gen, co, "descent and restricted coinduction disagree");
        gen
    }

    /// Whether `s` is a fixed point of the inference operator.
    pub fn is_fixed_point(&self, s: &JudgementSet) -> Result<bool> {
        Ok(&self.infer_step(s)? == s)
    }
}
