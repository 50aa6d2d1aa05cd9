use std::fmt;
use std::sync::Arc;

use crate::judgement::{Judgement, Universe};

/// A subset of a [`Universe`], stored as one membership bit per position.
///
/// Binary operations require both operands to live over the same universe and
/// panic otherwise; fallible entry points check with [`JudgementSet::same_universe`]
/// first and report [`Error::UniverseMismatch`](crate::Error::UniverseMismatch).
#[derive(Clone)]
pub struct JudgementSet {
    universe: Arc<Universe>,
    bits: Vec<u64>,
}

fn words(len: usize) -> usize {
    len.div_ceil(64)
}

impl JudgementSet {
    pub fn empty(universe: &Arc<Universe>) -> Self {
        JudgementSet {
            universe: Arc::clone(universe),
            bits: vec![0; words(universe.len())],
        }
    }

    pub fn full(universe: &Arc<Universe>) -> Self {
        let mut set = Self::empty(universe);
        for i in 0..universe.len() {
            set.insert(i);
        }
        set
    }

    pub fn from_positions(universe: &Arc<Universe>, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(universe);
        for p in positions {
            set.insert(p);
        }
        set
    }

    /// Builds a set from judgement names, failing on the first name outside the universe.
    pub fn from_judgements<I, S>(universe: &Arc<Universe>, judgements: I) -> crate::Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = Self::empty(universe);
        for j in judgements {
            let j = j.as_ref();
            let p = universe
                .position(j)
                .ok_or_else(|| crate::Error::UnknownJudgement(Judgement::new(j)))?;
            set.insert(p);
        }
        Ok(set)
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn same_universe(&self, universe: &Arc<Universe>) -> bool {
        Arc::ptr_eq(&self.universe, universe) || *self.universe == **universe
    }

    fn check(&self, other: &JudgementSet) {
        assert!(
            self.same_universe(&other.universe),
            "judgement sets over different universes"
        );
    }

    pub fn contains(&self, position: usize) -> bool {
        self.bits[position / 64] >> (position % 64) & 1 == 1
    }

    pub fn contains_judgement(&self, judgement: &str) -> bool {
        self.universe
            .position(judgement)
            .is_some_and(|p| self.contains(p))
    }

    pub fn insert(&mut self, position: usize) -> bool {
        assert!(position < self.universe.len(), "position out of range");
        let fresh = !self.contains(position);
        self.bits[position / 64] |= 1 << (position % 64);
        fresh
    }

    pub fn remove(&mut self, position: usize) -> bool {
        let present = self.contains(position);
        self.bits[position / 64] &= !(1 << (position % 64));
        present
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &JudgementSet) -> JudgementSet {
        self.check(other);
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect();
        JudgementSet {
            universe: Arc::clone(&self.universe),
            bits,
        }
    }

    pub fn intersection(&self, other: &JudgementSet) -> JudgementSet {
        self.check(other);
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        JudgementSet {
            universe: Arc::clone(&self.universe),
            bits,
        }
    }

    pub fn complement(&self) -> JudgementSet {
        let mut out = JudgementSet::full(&self.universe);
        for (o, s) in out.bits.iter_mut().zip(&self.bits) {
            *o &= !s;
        }
        out
    }

    pub fn is_subset(&self, other: &JudgementSet) -> bool {
        self.check(other);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Member positions in ascending (serialization) order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + bit)
            })
        })
    }

    pub fn judgements(&self) -> impl Iterator<Item = &Judgement> + '_ {
        self.iter().map(|p| self.universe.get(p))
    }

    /// Sorted judgement strings, the form used by every textual emission.
    pub fn to_strings(&self) -> Vec<String> {
        self.judgements().map(|j| j.to_string()).collect()
    }
}

impl PartialEq for JudgementSet {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && self.same_universe(&other.universe)
    }
}

impl Eq for JudgementSet {}

impl fmt::Debug for JudgementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.judgements()).finish()
    }
}
