//! Committee rules: MaxSwapPAV, first-improvement SwapPAV, exact PAV, and
//! the sequential baselines GreedyAV and SeqPAV.

use crate::model::{
    Committee, CommitteeError, ElectionInstance, ExactRational, SolveResult, SwapStep,
};
use crate::pav::{self, PavError, ScoreState, SwapThreshold};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::str::FromStr;

/// Starting committee for the swap-based rules.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum InitPolicy {
    /// Candidates `0..k`.
    #[default]
    Lexicographic,
    /// `k` distinct candidates sampled with ChaCha8 seeded from the value.
    SeededRandom(u64),
    Explicit(Committee),
}

impl InitPolicy {
    pub fn committee(&self, instance: &ElectionInstance) -> Result<Committee, SolveError> {
        let (m, k) = (instance.num_candidates(), instance.committee_size());
        match self {
            InitPolicy::Lexicographic => Ok(Committee::first(k)),
            InitPolicy::SeededRandom(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let members = rand::seq::index::sample(&mut rng, m, k).into_vec();
                Ok(Committee::new(members).expect("sampled indices are distinct"))
            }
            InitPolicy::Explicit(committee) => {
                instance.check_committee(committee)?;
                Ok(committee.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("invalid initial committee: {0}")]
    InvalidInit(#[from] CommitteeError),
    #[error(transparent)]
    Pav(#[from] PavError),
}

/// Algorithm 1 of the MaxSwapPAV construction: while some swap raises the
/// PAV-score by at least `1/(2k³)`, apply the swap with the largest gain.
///
/// Ties between equally good swaps go to the smallest `(incoming, out)`.
/// The result satisfies EJR.
pub fn max_swap_pav(
    instance: &ElectionInstance,
    init: &InitPolicy,
) -> Result<SolveResult, SolveError> {
    let start = init.committee(instance)?;
    let threshold = SwapThreshold::max_swap(instance.committee_size());
    let mut state = ScoreState::new(instance, &start);
    let mut swaps = Vec::new();
    while let Some(best) = state.best_swap().filter(|b| threshold.admits(&b.diff)) {
        state.apply(best.out, best.incoming, &best.diff);
        swaps.push(SwapStep {
            out: best.out,
            incoming: best.incoming,
            diff: best.diff,
        });
    }
    Ok(SolveResult {
        committee: state.committee(),
        final_score: state.score().clone(),
        swaps,
    })
}

/// Applies the first strictly improving swap in `(incoming, out)` scan order
/// until the committee is PAV-swap-free.
pub fn swap_pav(instance: &ElectionInstance, init: &InitPolicy) -> Result<SolveResult, SolveError> {
    let start = init.committee(instance)?;
    let mut state = ScoreState::new(instance, &start);
    let mut swaps = Vec::new();
    while let Some(next) = state.first_swap(&SwapThreshold::Strict) {
        state.apply(next.out, next.incoming, &next.diff);
        swaps.push(SwapStep {
            out: next.out,
            incoming: next.incoming,
            diff: next.diff,
        });
    }
    Ok(SolveResult {
        committee: state.committee(),
        final_score: state.score().clone(),
        swaps,
    })
}

/// Each round adds the candidate approved by the most voters who have no
/// approved candidate in the committee yet.
pub fn greedy_av(instance: &ElectionInstance) -> Committee {
    let mut represented = vec![false; instance.num_voters()];
    let mut committee = Committee::empty();
    for _ in 0..instance.committee_size() {
        let pick = argmax_outside(instance, &committee, |c| {
            instance
                .approvers(c)
                .iter()
                .filter(|&&v| !represented[v])
                .count()
        });
        for &v in instance.approvers(pick) {
            represented[v] = true;
        }
        committee = committee.with(pick);
    }
    committee
}

/// Each round adds the candidate with the largest PAV-score gain
/// `Σ_{i : c ∈ Aᵢ} 1 / (|W ∩ Aᵢ| + 1)`.
pub fn seq_pav(instance: &ElectionInstance) -> Committee {
    let mut counts = vec![0usize; instance.num_voters()];
    let mut committee = Committee::empty();
    for _ in 0..instance.committee_size() {
        let pick = argmax_outside(instance, &committee, |c| {
            instance
                .approvers(c)
                .iter()
                .map(|&v| ExactRational::unit(counts[v] as u64 + 1))
                .sum::<ExactRational>()
        });
        for &v in instance.approvers(pick) {
            counts[v] += 1;
        }
        committee = committee.with(pick);
    }
    committee
}

/// Smallest-index candidate outside `committee` maximizing `gain`.
fn argmax_outside<T: Ord>(
    instance: &ElectionInstance,
    committee: &Committee,
    gain: impl Fn(usize) -> T,
) -> usize {
    let mut best: Option<(usize, T)> = None;
    for c in (0..instance.num_candidates()).filter(|&c| !committee.contains(c)) {
        let g = gain(c);
        if best.as_ref().is_none_or(|(_, b)| g > *b) {
            best = Some((c, g));
        }
    }
    best.expect("fewer than k members means an outsider exists")
        .0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    MaxSwapPav,
    SwapPav,
    Pav,
    GreedyAv,
    SeqPav,
}

impl Rule {
    pub const ALL: [Rule; 5] = [
        Rule::MaxSwapPav,
        Rule::SwapPav,
        Rule::Pav,
        Rule::GreedyAv,
        Rule::SeqPav,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::MaxSwapPav => "maxswappav",
            Rule::SwapPav => "swappav",
            Rule::Pav => "pav",
            Rule::GreedyAv => "greedyav",
            Rule::SeqPav => "seqpav",
        }
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule {s:?}"))
    }
}

/// Runs `rule`. Non-swap rules ignore `init` and report an empty trace.
pub fn solve(
    rule: Rule,
    instance: &ElectionInstance,
    init: &InitPolicy,
) -> Result<SolveResult, SolveError> {
    let committee = match rule {
        Rule::MaxSwapPav => return max_swap_pav(instance, init),
        Rule::SwapPav => return swap_pav(instance, init),
        Rule::Pav => pav::exact_pav(instance)?.0,
        Rule::GreedyAv => greedy_av(instance),
        Rule::SeqPav => seq_pav(instance),
    };
    let final_score = pav::pav_score(instance, &committee)?;
    Ok(SolveResult {
        committee,
        final_score,
        swaps: Vec::new(),
    })
}

/// Upper bound `2n(⌈ln k⌉ + 1)k³` on the number of MaxSwapPAV swaps.
///
/// `⌈ln k⌉` is replaced by the smallest `t` with `2.718^t ≥ k`; since
/// `e > 2.718` this never undershoots `ln k`.
pub fn max_swap_bound(n: usize, k: usize) -> BigUint {
    let k_big = BigUint::from(k);
    let mut t = 0u32;
    // 2718^t >= k * 1000^t  <=>  2.718^t >= k
    while BigUint::from(2718u32).pow(t) < &k_big * BigUint::from(1000u32).pow(t) {
        t += 1;
    }
    BigUint::from(2u32) * BigUint::from(n) * BigUint::from(t + 1) * k_big.pow(3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{e1, e2};

    fn w(members: &[usize]) -> Committee {
        Committee::new(members.to_vec()).unwrap()
    }

    fn r(a: i64, b: i64) -> ExactRational {
        ExactRational::new(a, b)
    }

    fn step(out: usize, incoming: usize, diff: ExactRational) -> SwapStep {
        SwapStep {
            out,
            incoming,
            diff,
        }
    }

    #[test]
    fn max_swap_pav_worked_traces() {
        let res = max_swap_pav(&e1(), &InitPolicy::Lexicographic).unwrap();
        assert_eq!(res.committee, w(&[0, 1]));
        assert_eq!(res.swap_count(), 0);
        assert_eq!(res.final_score, r(3, 1));

        let res = max_swap_pav(&e1(), &InitPolicy::Explicit(w(&[2, 3]))).unwrap();
        assert_eq!(res.committee, w(&[0, 3]));
        assert_eq!(res.swaps, vec![step(2, 0, r(1, 1))]);
        assert_eq!(res.final_score, r(3, 1));

        let res = max_swap_pav(&e2(), &InitPolicy::Explicit(w(&[2, 3]))).unwrap();
        assert_eq!(res.committee, w(&[0, 1]));
        assert_eq!(res.swaps, vec![step(2, 0, r(2, 1)), step(3, 1, r(1, 1))]);
        assert_eq!(res.final_score, r(3, 1));
    }

    /// k = 9, W = {0..8}, lone outsider 9. Swapping 0 -> 9 gains
    /// 1/4 + 1/8 + 1/9 - 1/5 - 2/7 = 1/2520, below 1/(2*9^3) = 1/1458.
    /// Two single-issue voters per other member make every other swap lose.
    fn tiny_gain_instance() -> ElectionInstance {
        let mut ballots = vec![
            vec![9, 1, 2, 3],
            (1..=7).chain([9]).collect(),
            (1..=9).collect(),
            (0..=4).collect(),
            (0..=6).collect(),
            (0..=6).collect(),
        ];
        for j in 1..=8 {
            ballots.push(vec![j]);
            ballots.push(vec![j]);
        }
        ElectionInstance::new(ballots.len(), 10, 9, ballots).unwrap()
    }

    #[test]
    fn sub_threshold_swaps_are_not_applied() {
        let inst = tiny_gain_instance();
        let start = Committee::first(9);
        assert_eq!(pav::swap_diff(&inst, &start, 0, 9).unwrap(), r(1, 2520));
        let best = pav::best_swap(&inst, &start).unwrap().unwrap();
        assert_eq!((best.out, best.incoming, best.diff), (0, 9, r(1, 2520)));

        let res = max_swap_pav(&inst, &InitPolicy::Lexicographic).unwrap();
        assert_eq!(res.swap_count(), 0);
        assert_eq!(res.committee, start);

        // the strict variant does take it
        let res = swap_pav(&inst, &InitPolicy::Lexicographic).unwrap();
        assert_eq!(res.swaps[0], step(0, 9, r(1, 2520)));
    }

    #[test]
    fn swap_pav_examples() {
        let res = swap_pav(&e1(), &InitPolicy::Explicit(w(&[2, 3]))).unwrap();
        assert_eq!(res.committee, w(&[0, 3]));
        assert_eq!(res.swaps, vec![step(2, 0, r(1, 1))]);
        let res = swap_pav(&e1(), &InitPolicy::Explicit(w(&[0, 1]))).unwrap();
        assert_eq!(res.committee, w(&[0, 1]));
        assert_eq!(res.swap_count(), 0);
        let full = ElectionInstance::new(2, 3, 3, vec![vec![0], vec![2]]).unwrap();
        let res = swap_pav(&full, &InitPolicy::Lexicographic).unwrap();
        assert_eq!(res.committee, w(&[0, 1, 2]));
        assert_eq!(res.swap_count(), 0);
    }

    #[test]
    fn greedy_av_examples() {
        assert_eq!(greedy_av(&e1()), w(&[0, 2]));
        let single = ElectionInstance::new(1, 2, 1, vec![vec![1]]).unwrap();
        assert_eq!(greedy_av(&single), w(&[1]));
        let blank = ElectionInstance::new(3, 5, 3, vec![vec![]; 3]).unwrap();
        assert_eq!(greedy_av(&blank), w(&[0, 1, 2]));
    }

    #[test]
    fn seq_pav_examples() {
        assert_eq!(seq_pav(&e1()), w(&[0, 1]));
        let single = ElectionInstance::new(1, 2, 1, vec![vec![1]]).unwrap();
        assert_eq!(seq_pav(&single), w(&[1]));
        let blank = ElectionInstance::new(3, 5, 3, vec![vec![]; 3]).unwrap();
        assert_eq!(seq_pav(&blank), w(&[0, 1, 2]));
    }

    #[test]
    fn seeded_init_is_deterministic() {
        let inst = ElectionInstance::new(1, 10, 4, vec![vec![]]).unwrap();
        let a = InitPolicy::SeededRandom(7).committee(&inst).unwrap();
        let b = InitPolicy::SeededRandom(7).committee(&inst).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        assert!(a.members().iter().all(|&c| c < 10));
    }

    #[test]
    fn explicit_init_is_validated() {
        assert!(matches!(
            max_swap_pav(&e1(), &InitPolicy::Explicit(w(&[0]))),
            Err(SolveError::InvalidInit(CommitteeError::WrongSize { .. }))
        ));
    }

    #[test]
    fn swap_bound_values() {
        // k = 1: t = 0, bound 2n
        assert_eq!(max_swap_bound(5, 1), BigUint::from(10u32));
        // k = 2: t = 1 (2.718 >= 2), bound 2*4*2*8
        assert_eq!(max_swap_bound(4, 2), BigUint::from(128u32));
        // k = 8: t = 3 (2.718^2 < 8 <= 2.718^3)
        assert_eq!(max_swap_bound(1, 8), BigUint::from(2u32 * 4 * 512));
    }

    #[test]
    fn rule_names_roundtrip() {
        for rule in Rule::ALL {
            assert_eq!(rule.name().parse::<Rule>().unwrap(), rule);
        }
        assert!("phragmen".parse::<Rule>().is_err());
    }
}
