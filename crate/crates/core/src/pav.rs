//! PAV scoring: harmonic weights, committee scores, marginal contributions,
//! swap differentials, swap-freeness and a brute-force exact-PAV oracle.
//!
//! Every quantity is an [`ExactRational`]; nothing here rounds.

use crate::model::{Committee, CommitteeError, ElectionInstance, ExactRational};

/// Default number of committees `exact_pav` is willing to enumerate.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PavError {
    #[error(transparent)]
    Committee(#[from] CommitteeError),
    #[error("candidate {0} is not a committee member")]
    NotMember(usize),
    #[error("candidate {0} is already a committee member")]
    AlreadyMember(usize),
    #[error("candidate {index} out of range (m = {m})")]
    CandidateOutOfRange { index: usize, m: usize },
    #[error("exact PAV would enumerate {committees} committees, budget is {budget}")]
    BudgetExceeded { committees: u128, budget: u64 },
}

/// `H(p) = 1 + 1/2 + ... + 1/p`, with `H(0) = 0`.
pub fn harmonic(p: usize) -> ExactRational {
    (1..=p as u64).map(ExactRational::unit).sum()
}

/// Table of `H(0..=max)`.
fn harmonic_table(max: usize) -> Vec<ExactRational> {
    let mut table = Vec::with_capacity(max + 1);
    table.push(ExactRational::zero());
    for j in 1..=max {
        let next = &table[j - 1] + &ExactRational::unit(j as u64);
        table.push(next);
    }
    table
}

fn membership(instance: &ElectionInstance, committee: &Committee) -> Vec<bool> {
    let mut inside = vec![false; instance.num_candidates()];
    for &c in committee.members() {
        inside[c] = true;
    }
    inside
}

fn representation_counts(instance: &ElectionInstance, inside: &[bool]) -> Vec<usize> {
    instance
        .ballots()
        .iter()
        .map(|b| b.iter().filter(|&&c| inside[c]).count())
        .collect()
}

/// `Σᵢ H(|W ∩ Aᵢ|)`. Committees of any size are accepted.
pub fn pav_score(
    instance: &ElectionInstance,
    committee: &Committee,
) -> Result<ExactRational, PavError> {
    instance.check_members(committee)?;
    let counts = representation_counts(instance, &membership(instance, committee));
    Ok(score_from_counts(&counts))
}

fn score_from_counts(counts: &[usize]) -> ExactRational {
    let max = counts.iter().copied().max().unwrap_or(0);
    let mut histogram = vec![0u64; max + 1];
    for &c in counts {
        histogram[c] += 1;
    }
    let table = harmonic_table(max);
    histogram
        .iter()
        .zip(&table)
        .skip(1)
        .filter(|(&voters, _)| voters > 0)
        .map(|(&voters, h)| h.scale(voters))
        .sum()
}

/// `MC(w, W) = PAV(W) − PAV(W \ {w})`, evaluated through the closed form
/// `Σ_{i : w ∈ Aᵢ} 1 / |W ∩ Aᵢ|`.
pub fn marginal_contribution(
    instance: &ElectionInstance,
    committee: &Committee,
    member: usize,
) -> Result<ExactRational, PavError> {
    instance.check_members(committee)?;
    if !committee.contains(member) {
        return Err(PavError::NotMember(member));
    }
    Ok(instance
        .approvers(member)
        .iter()
        .map(|&voter| ExactRational::unit(instance.representation(voter, committee) as u64))
        .sum())
}

/// `PAV((W \ {out}) ∪ {incoming}) − PAV(W)`.
pub fn swap_diff(
    instance: &ElectionInstance,
    committee: &Committee,
    out: usize,
    incoming: usize,
) -> Result<ExactRational, PavError> {
    instance.check_members(committee)?;
    check_swap(instance, committee, out, incoming)?;
    let state = ScoreState::new(instance, committee);
    Ok(state.swap_diff(out, incoming))
}

fn check_swap(
    instance: &ElectionInstance,
    committee: &Committee,
    out: usize,
    incoming: usize,
) -> Result<(), PavError> {
    let m = instance.num_candidates();
    if incoming >= m {
        return Err(PavError::CandidateOutOfRange { index: incoming, m });
    }
    if !committee.contains(out) {
        return Err(PavError::NotMember(out));
    }
    if committee.contains(incoming) {
        return Err(PavError::AlreadyMember(incoming));
    }
    Ok(())
}

/// A swap `out → incoming` and its exact score change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapWitness {
    pub out: usize,
    pub incoming: usize,
    pub diff: ExactRational,
}

/// Which swaps count as improving.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SwapThreshold {
    /// Any swap with `diff > 0`.
    Strict,
    /// Swaps with `diff >= threshold`.
    AtLeast(ExactRational),
}

impl SwapThreshold {
    /// The `1 / (2k³)` stopping threshold used by MaxSwapPAV.
    pub fn max_swap(k: usize) -> Self {
        let k = k as u64;
        SwapThreshold::AtLeast(ExactRational::unit(2 * k * k * k))
    }

    pub fn admits(&self, diff: &ExactRational) -> bool {
        match self {
            SwapThreshold::Strict => diff.is_positive(),
            SwapThreshold::AtLeast(t) => diff >= t,
        }
    }
}

/// The maximum-diff swap over all `out ∈ W`, `incoming ∉ W`; ties go to the
/// lexicographically smallest `(incoming, out)`. `None` when `W = C`.
pub fn best_swap(
    instance: &ElectionInstance,
    committee: &Committee,
) -> Result<Option<SwapWitness>, PavError> {
    instance.check_members(committee)?;
    Ok(ScoreState::new(instance, committee).best_swap())
}

/// Whether no swap clears `threshold`. When one does, the maximum-diff swap
/// (see [`best_swap`]) is returned as the witness.
pub fn is_swap_free(
    instance: &ElectionInstance,
    committee: &Committee,
    threshold: &SwapThreshold,
) -> Result<(bool, Option<SwapWitness>), PavError> {
    instance.check_committee(committee)?;
    match ScoreState::new(instance, committee).best_swap() {
        Some(best) if threshold.admits(&best.diff) => Ok((false, Some(best))),
        _ => Ok((true, None)),
    }
}

/// `binomial(n, r)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Brute-force PAV with the default enumeration budget.
pub fn exact_pav(instance: &ElectionInstance) -> Result<(Committee, ExactRational), PavError> {
    exact_pav_with_budget(instance, DEFAULT_ENUMERATION_BUDGET)
}

/// Enumerates every size-`k` committee and returns the highest-scoring one,
/// ties going to the lexicographically smallest member sequence. Refuses
/// when `binomial(m, k)` exceeds `budget`.
pub fn exact_pav_with_budget(
    instance: &ElectionInstance,
    budget: u64,
) -> Result<(Committee, ExactRational), PavError> {
    let (m, k) = (instance.num_candidates(), instance.committee_size());
    let committees = binomial(m, k);
    if committees > budget as u128 {
        return Err(PavError::BudgetExceeded { committees, budget });
    }
    let table = harmonic_table(k);
    let mut best: Option<(Vec<usize>, ExactRational)> = None;
    let mut counts = vec![0usize; instance.num_voters()];
    for_each_combination(m, k, |members| {
        counts.iter_mut().for_each(|c| *c = 0);
        for &c in members {
            for &voter in instance.approvers(c) {
                counts[voter] += 1;
            }
        }
        let score: ExactRational = counts.iter().map(|&c| &table[c]).sum();
        // enumeration is lexicographic, so only a strictly better score replaces
        if best.as_ref().is_none_or(|(_, s)| score > *s) {
            best = Some((members.to_vec(), score));
        }
    });
    let (members, score) = best.expect("k <= m guarantees at least one committee");
    Ok((
        Committee::new(members).expect("combinations are duplicate-free"),
        score,
    ))
}

/// Calls `visit` on every size-`r` subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, r: usize, mut visit: impl FnMut(&[usize])) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Incrementally maintained committee score: per-voter representation counts
/// plus the current total, updated in `O(approvers)` per swap.
#[derive(Debug, Clone)]
pub struct ScoreState<'a> {
    instance: &'a ElectionInstance,
    inside: Vec<bool>,
    counts: Vec<usize>,
    score: ExactRational,
    /// `units[j] = 1/j`, index 0 unused.
    units: Vec<ExactRational>,
}

impl<'a> ScoreState<'a> {
    /// Caller guarantees the committee's members are in range.
    pub fn new(instance: &'a ElectionInstance, committee: &Committee) -> Self {
        let inside = membership(instance, committee);
        let counts = representation_counts(instance, &inside);
        let score = score_from_counts(&counts);
        let max_count = instance.ballots().iter().map(Vec::len).max().unwrap_or(0);
        let units = std::iter::once(ExactRational::zero())
            .chain((1..=max_count as u64 + 1).map(ExactRational::unit))
            .collect();
        ScoreState {
            instance,
            inside,
            counts,
            score,
            units,
        }
    }

    pub fn score(&self) -> &ExactRational {
        &self.score
    }

    pub fn contains(&self, candidate: usize) -> bool {
        self.inside[candidate]
    }

    pub fn committee(&self) -> Committee {
        Committee::new(
            self.inside
                .iter()
                .enumerate()
                .filter_map(|(c, &inside)| inside.then_some(c))
                .collect(),
        )
        .expect("membership vector has no duplicates")
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.inside
            .iter()
            .enumerate()
            .filter_map(|(c, &i)| i.then_some(c))
    }

    pub fn outsiders(&self) -> impl Iterator<Item = usize> + '_ {
        self.inside
            .iter()
            .enumerate()
            .filter_map(|(c, &i)| (!i).then_some(c))
    }

    /// Score change of replacing member `out` with outsider `incoming`.
    ///
    /// Voters approving `incoming` but not `out` gain `1/(cnt+1)`; voters
    /// approving `out` but not `incoming` lose `1/cnt`.
    pub fn swap_diff(&self, out: usize, incoming: usize) -> ExactRational {
        debug_assert!(self.inside[out] && !self.inside[incoming]);
        let mut diff = ExactRational::zero();
        for &voter in self.instance.approvers(incoming) {
            if !self.instance.approves(voter, out) {
                diff += &self.units[self.counts[voter] + 1];
            }
        }
        for &voter in self.instance.approvers(out) {
            if !self.instance.approves(voter, incoming) {
                diff -= &self.units[self.counts[voter]];
            }
        }
        diff
    }

    /// Maximum-diff swap with ties to the smallest `(incoming, out)`.
    pub fn best_swap(&self) -> Option<SwapWitness> {
        let members: Vec<usize> = self.members().collect();
        let mut best: Option<SwapWitness> = None;
        for incoming in self.outsiders() {
            for &out in &members {
                let diff = self.swap_diff(out, incoming);
                if best.as_ref().is_none_or(|b| diff > b.diff) {
                    best = Some(SwapWitness {
                        out,
                        incoming,
                        diff,
                    });
                }
            }
        }
        best
    }

    /// First swap in `(incoming, out)` scan order admitted by `threshold`.
    pub fn first_swap(&self, threshold: &SwapThreshold) -> Option<SwapWitness> {
        let members: Vec<usize> = self.members().collect();
        for incoming in self.outsiders() {
            for &out in &members {
                let diff = self.swap_diff(out, incoming);
                if threshold.admits(&diff) {
                    return Some(SwapWitness {
                        out,
                        incoming,
                        diff,
                    });
                }
            }
        }
        None
    }

    /// Applies a swap whose diff was computed against the current state.
    pub fn apply(&mut self, out: usize, incoming: usize, diff: &ExactRational) {
        debug_assert!(self.inside[out] && !self.inside[incoming]);
        for &voter in self.instance.approvers(out) {
            self.counts[voter] -= 1;
        }
        for &voter in self.instance.approvers(incoming) {
            self.counts[voter] += 1;
        }
        self.inside[out] = false;
        self.inside[incoming] = true;
        self.score += diff;
        #[cfg(debug_assertions)]
        {
            assert_eq!(
                self.score,
                score_from_counts(&representation_counts(self.instance, &self.inside)),
                "incremental score drifted from recomputation"
            );
        }
    }
}
