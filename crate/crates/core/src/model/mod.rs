//! Domain types shared by the scoring, solving and checking modules.

mod instance;
mod outcome;
mod rational;

pub use instance::{quota_met, Committee, CommitteeError, ElectionInstance, InstanceError};
pub use outcome::{AxiomVerdict, SolveResult, SwapStep, Witness};
pub use rational::{ExactRational, ParseRationalError};

#[cfg(test)]
pub(crate) use instance::fixtures;
