//! Seeded random profiles.
//!
//! All streams come from ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`),
//! so a `(params, seed)` pair always yields the same instance.

use crate::model::{ElectionInstance, InstanceError};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    /// Every voter approves every candidate independently with probability `p`.
    Impartial { p: f64 },
    /// Each voter approves exactly one whole group, picked with probability
    /// proportional to its weight. Groups are disjoint candidate sets.
    PartyList {
        groups: Vec<Vec<usize>>,
        weights: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub model: Model,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenError {
    #[error("approval probability {0} is outside [0, 1]")]
    Probability(f64),
    #[error("party-list model needs at least one group")]
    NoGroups,
    #[error("{groups} groups but {weights} weights")]
    WeightCount { groups: usize, weights: usize },
    #[error("invalid group weights: {0}")]
    Weights(String),
    #[error("candidate {0} appears in more than one group")]
    Overlap(usize),
    #[error("group candidate {index} out of range (m = {m})")]
    GroupOutOfRange { index: usize, m: usize },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

pub fn generate(params: &GenParams) -> Result<ElectionInstance, GenError> {
    let GenParams { n, m, k, seed, .. } = *params;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ballots = match &params.model {
        Model::Impartial { p } => {
            if !(0.0..=1.0).contains(p) {
                return Err(GenError::Probability(*p));
            }
            (0..n)
                .map(|_| (0..m).filter(|_| rng.gen_bool(*p)).collect())
                .collect()
        }
        Model::PartyList { groups, weights } => {
            validate_groups(groups, weights, m)?;
            let pick = WeightedIndex::new(weights).map_err(|e| GenError::Weights(e.to_string()))?;
            (0..n)
                .map(|_| groups[pick.sample(&mut rng)].clone())
                .collect()
        }
    };
    Ok(ElectionInstance::new(n, m, k, ballots)?)
}

fn validate_groups(groups: &[Vec<usize>], weights: &[f64], m: usize) -> Result<(), GenError> {
    if groups.is_empty() {
        return Err(GenError::NoGroups);
    }
    if groups.len() != weights.len() {
        return Err(GenError::WeightCount {
            groups: groups.len(),
            weights: weights.len(),
        });
    }
    let mut seen = vec![false; m];
    for &c in groups.iter().flatten() {
        if c >= m {
            return Err(GenError::GroupOutOfRange { index: c, m });
        }
        if std::mem::replace(&mut seen[c], true) {
            return Err(GenError::Overlap(c));
        }
    }
    Ok(())
}
