use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// An opaque judgement, identified by its canonical serialization.
///
/// Equality and ordering are those of the serialized string, so two judgements
/// built from the same canonical data always coincide.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Judgement(Arc<str>);

impl Judgement {
    pub fn new(text: impl AsRef<str>) -> Self {
        Judgement(Arc::from(text.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl Borrow<str> for Judgement {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Judgement {
    fn from(s: &str) -> Self {
        Judgement::new(s)
    }
}

impl From<String> for Judgement {
    fn from(s: String) -> Self {
        Judgement(Arc::from(s))
    }
}

/// A finite universe: distinct judgements sorted by serialization.
///
/// Positions `0..len()` follow serialization order, which makes every
/// position-based iteration deterministic.
#[derive(Clone, Default)]
pub struct Universe {
    members: Vec<Judgement>,
    index: HashMap<Judgement, usize>,
}

impl Universe {
    pub fn new<I, J>(judgements: I) -> Self
    where
        I: IntoIterator<Item = J>,
        J: Into<Judgement>,
    {
        let mut members: Vec<Judgement> = judgements.into_iter().map(Into::into).collect();
        members.sort();
        members.dedup();
        let index = members
            .iter()
            .enumerate()
            .map(|(i, j)| (j.clone(), i))
            .collect();
        Universe { members, index }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, position: usize) -> &Judgement {
        &self.members[position]
    }

    pub fn position(&self, judgement: &str) -> Option<usize> {
        self.index.get(judgement).copied()
    }

    pub fn contains(&self, judgement: &str) -> bool {
        self.index.contains_key(judgement)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Judgement> {
        self.members.iter()
    }

    pub fn members(&self) -> &[Judgement] {
        &self.members
    }
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Universe {}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter()).finish()
    }
}
