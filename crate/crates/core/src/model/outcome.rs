//! Solver and checker outputs.

use super::{Committee, ExactRational};

/// One applied swap: `out` leaves the committee, `incoming` joins, and the
/// PAV-score changes by `diff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapStep {
    pub out: usize,
    pub incoming: usize,
    pub diff: ExactRational,
}

/// Winning committee of a rule together with the swap trace that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub committee: Committee,
    pub final_score: ExactRational,
    pub swaps: Vec<SwapStep>,
}

impl SolveResult {
    pub fn swap_count(&self) -> usize {
        self.swaps.len()
    }
}

/// A violation certificate: `ell` candidates `candidates` approved by every
/// voter in `voters`, a group large enough to meet the `ell` quota.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub ell: usize,
    pub candidates: Vec<usize>,
    pub voters: Vec<usize>,
}

/// Outcome of an axiom check. A witness is present exactly when violated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomVerdict {
    witness: Option<Witness>,
}

impl AxiomVerdict {
    pub fn satisfied() -> Self {
        AxiomVerdict { witness: None }
    }

    pub fn violated(witness: Witness) -> Self {
        AxiomVerdict {
            witness: Some(witness),
        }
    }

    pub fn is_satisfied(&self) -> bool {
        self.witness.is_none()
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }
}
