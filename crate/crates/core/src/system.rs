use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::judgement::{Judgement, Universe};
use crate::set::JudgementSet;

/// A premise set: sorted, duplicate-free universe positions.
pub type Premises = Box<[u32]>;

/// A rule `Pr / c` by name. Axioms have no premises.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub premises: BTreeSet<Judgement>,
    pub conclusion: Judgement,
}

impl Rule {
    pub fn new<I, J>(premises: I, conclusion: impl Into<Judgement>) -> Self
    where
        I: IntoIterator<Item = J>,
        J: Into<Judgement>,
    {
        Rule {
            premises: premises.into_iter().map(Into::into).collect(),
            conclusion: conclusion.into(),
        }
    }

    pub fn axiom(conclusion: impl Into<Judgement>) -> Self {
        Rule {
            premises: BTreeSet::new(),
            conclusion: conclusion.into(),
        }
    }

    pub fn is_axiom(&self) -> bool {
        self.premises.is_empty()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <-", self.conclusion)?;
        for p in &self.premises {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

/// A finite inference system with coaxioms.
///
/// Rules are kept as a backward index: for every conclusion, the list of its
/// distinct premise sets in canonical (lexicographic position) order.
#[derive(Clone)]
pub struct InferenceSystem {
    universe: Arc<Universe>,
    backward: Vec<Vec<Premises>>,
    coaxioms: JudgementSet,
}

/// Collects rules over a fixed universe by position.
pub struct IndexedBuilder {
    universe: Arc<Universe>,
    backward: Vec<Vec<Premises>>,
    coaxioms: JudgementSet,
    rules: usize,
    rule_cap: usize,
}

impl IndexedBuilder {
    pub fn new(universe: Arc<Universe>) -> Self {
        let n = universe.len();
        IndexedBuilder {
            coaxioms: JudgementSet::empty(&universe),
            backward: vec![Vec::new(); n],
            universe,
            rules: 0,
            rule_cap: usize::MAX,
        }
    }

    /// Fails with `CapExceeded` once more than `cap` rules have been added.
    pub fn with_rule_cap(mut self, cap: usize) -> Self {
        self.rule_cap = cap;
        self
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn add_rule(&mut self, conclusion: usize, premises: impl IntoIterator<Item = usize>) -> Result<()> {
        let mut ps: Vec<u32> = premises.into_iter().map(|p| p as u32).collect();
        ps.sort_unstable();
        ps.dedup();
        self.rules += 1;
        if self.rules > self.rule_cap {
            return Err(Error::CapExceeded {
                cap: self.rule_cap,
                what: "rules",
            });
        }
        self.backward[conclusion].push(ps.into_boxed_slice());
        Ok(())
    }

    pub fn add_coaxiom(&mut self, position: usize) {
        self.coaxioms.insert(position);
    }

    /// Finishes the system, returning it with the number of duplicate rules dropped.
    pub fn build_counting(self) -> (InferenceSystem, usize) {
        let mut dropped = 0;
        let mut backward = self.backward;
        for list in &mut backward {
            let before = list.len();
            list.sort();
            list.dedup();
            dropped += before - list.len();
        }
        (
            InferenceSystem {
                universe: self.universe,
                backward,
                coaxioms: self.coaxioms,
            },
            dropped,
        )
    }

    pub fn build(self) -> InferenceSystem {
        self.build_counting().0
    }
}

/// Collects rules by name; the universe is every judgement mentioned.
#[derive(Default)]
pub struct SystemBuilder {
    declared: Vec<Judgement>,
    rules: Vec<Rule>,
    coaxioms: Vec<Judgement>,
}

impl SystemBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn judgement(&mut self, j: impl Into<Judgement>) -> &mut Self {
        self.declared.push(j.into());
        self
    }

    pub fn rule(&mut self, rule: Rule) -> &mut Self {
        self.rules.push(rule);
        self
    }

    pub fn axiom(&mut self, c: impl Into<Judgement>) -> &mut Self {
        self.rules.push(Rule::axiom(c));
        self
    }

    pub fn coaxiom(&mut self, c: impl Into<Judgement>) -> &mut Self {
        self.coaxioms.push(c.into());
        self
    }

    fn mentioned(&self) -> impl Iterator<Item = &Judgement> {
        self.declared
            .iter()
            .chain(self.coaxioms.iter())
            .chain(self.rules.iter().flat_map(|r| r.premises.iter().chain([&r.conclusion])))
    }

    pub fn build(&self) -> InferenceSystem {
        self.build_counting().0
    }

    pub fn build_counting(&self) -> (InferenceSystem, usize) {
        let universe = Arc::new(Universe::new(self.mentioned().cloned()));
        self.build_over(universe)
            .expect("inferred universe contains every mentioned judgement")
    }

    /// Builds over an explicit universe; every mentioned judgement must belong to it.
    pub fn build_with_universe(&self, universe: Arc<Universe>) -> Result<(InferenceSystem, usize)> {
        self.build_over(universe)
    }

    fn build_over(&self, universe: Arc<Universe>) -> Result<(InferenceSystem, usize)> {
        let pos = |j: &Judgement| {
            universe
                .position(j.as_str())
                .ok_or_else(|| Error::UnknownJudgement(j.clone()))
        };
        for j in &self.declared {
            pos(j)?;
        }
        let mut b = IndexedBuilder::new(Arc::clone(&universe));
        for r in &self.rules {
            let c = pos(&r.conclusion)?;
            let ps = r.premises.iter().map(pos).collect::<Result<Vec<_>>>()?;
            b.add_rule(c, ps)?;
        }
        for c in &self.coaxioms {
            b.add_coaxiom(pos(c)?);
        }
        Ok(b.build_counting())
    }
}

/// Least set containing `goals` and closed under taking the premises of every
/// rule concluding a member, as reported by `provider`.
///
/// Fails with `CapExceeded` as soon as the closure would hold more than `cap`
/// judgements.
pub fn reachable_universe<F>(mut provider: F, goals: impl IntoIterator<Item = Judgement>, cap: usize) -> Result<Universe>
where
    F: FnMut(&Judgement) -> Vec<Vec<Judgement>>,
{
    let mut seen: BTreeSet<Judgement> = BTreeSet::new();
    let mut queue = VecDeque::new();
    let exceeded = || Error::CapExceeded {
        cap,
        what: "reachable judgements",
    };
    for g in goals {
        if seen.insert(g.clone()) {
            if seen.len() > cap {
                return Err(exceeded());
            }
            queue.push_back(g);
        }
    }
    while let Some(j) = queue.pop_front() {
        for premises in provider(&j) {
            for p in premises {
                if seen.insert(p.clone()) {
                    if seen.len() > cap {
                        return Err(exceeded());
                    }
                    queue.push_back(p);
                }
            }
        }
    }
    Ok(Universe::new(seen))
}

impl InferenceSystem {
    /// Builds the system over `universe` whose rules concluding `j` are exactly
    /// the premise sets `provider(j)`.
    pub fn from_provider<F, C>(universe: Arc<Universe>, mut provider: F, mut is_coaxiom: C) -> Result<Self>
    where
        F: FnMut(&Judgement) -> Vec<Vec<Judgement>>,
        C: FnMut(&Judgement) -> bool,
    {
        let mut b = IndexedBuilder::new(Arc::clone(&universe));
        for (c, j) in universe.iter().enumerate() {
            for premises in provider(j) {
                let ps = premises
                    .iter()
                    .map(|p| universe.position(p.as_str()).ok_or_else(|| Error::UnknownJudgement(p.clone())))
                    .collect::<Result<Vec<_>>>()?;
                b.add_rule(c, ps)?;
            }
            if is_coaxiom(j) {
                b.add_coaxiom(c);
            }
        }
        Ok(b.build())
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn coaxioms(&self) -> &JudgementSet {
        &self.coaxioms
    }

    /// Premise sets of the rules concluding `position`, canonical order.
    pub fn premise_sets(&self, position: usize) -> &[Premises] {
        &self.backward[position]
    }

    pub fn rule_count(&self) -> usize {
        self.backward.iter().map(Vec::len).sum()
    }

    /// All rules by name, ordered by conclusion then premise set.
    pub fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        self.backward.iter().enumerate().flat_map(move |(c, list)| {
            list.iter().map(move |ps| Rule {
                premises: ps.iter().map(|&p| self.universe.get(p as usize).clone()).collect(),
                conclusion: self.universe.get(c).clone(),
            })
        })
    }

    pub fn has_rule(&self, premises: &[usize], conclusion: usize) -> bool {
        let mut ps: Vec<u32> = premises.iter().map(|&p| p as u32).collect();
        ps.sort_unstable();
        ps.dedup();
        self.backward[conclusion].binary_search(&ps.into_boxed_slice()).is_ok()
    }

    pub fn is_axiom_conclusion(&self, position: usize) -> bool {
        self.backward[position].first().is_some_and(|ps| ps.is_empty())
    }

    /// Every conclusion has at most one rule.
    pub fn is_deterministic(&self) -> bool {
        self.backward.iter().all(|l| l.len() <= 1)
    }

    pub fn position(&self, judgement: &str) -> Result<usize> {
        self.universe
            .position(judgement)
            .ok_or_else(|| Error::UnknownJudgement(Judgement::new(judgement)))
    }

    pub fn empty_set(&self) -> JudgementSet {
        JudgementSet::empty(&self.universe)
    }

    pub fn full_set(&self) -> JudgementSet {
        JudgementSet::full(&self.universe)
    }

    pub(crate) fn check_set(&self, s: &JudgementSet) -> Result<()> {
        if s.same_universe(&self.universe) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    /// Returns a copy of the system with a different coaxiom set.
    pub fn with_coaxioms(&self, coaxioms: JudgementSet) -> Result<InferenceSystem> {
        self.check_set(&coaxioms)?;
        Ok(InferenceSystem {
            universe: Arc::clone(&self.universe),
            backward: self.backward.clone(),
            coaxioms,
        })
    }

    /// One step of the inference operator: every conclusion of a rule whose
    /// premises all lie in `s`. Coaxioms play no part.
    pub fn infer_step(&self, s: &JudgementSet) -> Result<JudgementSet> {
        self.check_set(s)?;
        Ok(self.step(s))
    }

    pub(crate) fn step(&self, s: &JudgementSet) -> JudgementSet {
        let mut out = JudgementSet::empty(&self.universe);
        for (c, list) in self.backward.iter().enumerate() {
            if list.iter().any(|ps| ps.iter().all(|&p| s.contains(p as usize))) {
                out.insert(c);
            }
        }
        out
    }

    /// The system with every coaxiom adjoined as an axiom; the result has no coaxioms.
    pub fn with_coaxioms_as_axioms(&self) -> InferenceSystem {
        let mut backward = self.backward.clone();
        for c in self.coaxioms.iter() {
            let list = &mut backward[c];
            let empty: Premises = Box::new([]);
            if let Err(at) = list.binary_search(&empty) {
                list.insert(at, empty);
            }
        }
        InferenceSystem {
            universe: Arc::clone(&self.universe),
            backward,
            coaxioms: JudgementSet::empty(&self.universe),
        }
    }

    /// Keeps only the rules whose conclusion lies in `s`; universe and coaxioms unchanged.
    pub fn restrict_to(&self, s: &JudgementSet) -> Result<InferenceSystem> {
        self.check_set(s)?;
        let backward = self
            .backward
            .iter()
            .enumerate()
            .map(|(c, list)| if s.contains(c) { list.clone() } else { Vec::new() })
            .collect();
        Ok(InferenceSystem {
            universe: Arc::clone(&self.universe),
            backward,
            coaxioms: self.coaxioms.clone(),
        })
    }
}

impl fmt::Debug for InferenceSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InferenceSystem")
            .field("universe", &self.universe.len())
            .field("rules", &self.rule_count())
            .field("coaxioms", &self.coaxioms)
            .finish()
    }
}
