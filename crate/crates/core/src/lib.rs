//! Inference systems with coaxioms over finite universes.

pub mod error;
pub mod fixpoint;
pub mod judgement;
pub mod prooftree;
pub mod regular;
pub mod set;
pub mod system;
pub mod systems;
pub mod verify;

pub use error::{Error, Result};
pub use fixpoint::IterationTrace;
pub use judgement::{Judgement, Universe};
pub use set::JudgementSet;
pub use system::{InferenceSystem, IndexedBuilder, Rule, SystemBuilder};
