//! Election instances and committees.

use std::fmt;

/// Validation failures when building an [`ElectionInstance`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("the instance needs at least one voter (n = 0)")]
    NoVoters,
    #[error("committee size k must be at least 1")]
    EmptyCommittee,
    #[error("committee size k = {k} exceeds the number of candidates m = {m}")]
    CommitteeTooLarge { k: usize, m: usize },
    #[error("expected {expected} ballots, found {found}")]
    BallotCount { expected: usize, found: usize },
    #[error("voter {voter}: candidate index {index} out of range (m = {m})")]
    IndexOutOfRange {
        voter: usize,
        index: usize,
        m: usize,
    },
    #[error("voter {voter}: candidate index {index} appears more than once")]
    DuplicateIndex { voter: usize, index: usize },
}

/// Problems with a committee relative to an instance.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CommitteeError {
    #[error("candidate {0} appears more than once in the committee")]
    Duplicate(usize),
    #[error("committee member {index} out of range (m = {m})")]
    OutOfRange { index: usize, m: usize },
    #[error("committee has {found} members, expected {expected}")]
    WrongSize { expected: usize, found: usize },
}

/// An approval-based election: `n` voters, `m` candidates, target committee
/// size `k` and one approval ballot per voter.
///
/// Immutable after construction. Ballots are stored strictly ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElectionInstance {
    num_candidates: usize,
    committee_size: usize,
    ballots: Vec<Vec<usize>>,
    /// Voters approving each candidate, ascending.
    approvers: Vec<Vec<usize>>,
}

impl ElectionInstance {
    /// Validates and canonicalizes an instance. Ballots may be given in any
    /// order but must not contain duplicates.
    pub fn new(
        n: usize,
        m: usize,
        k: usize,
        ballots: Vec<Vec<usize>>,
    ) -> Result<Self, InstanceError> {
        if n < 1 {
            return Err(InstanceError::NoVoters);
        }
        if k < 1 {
            return Err(InstanceError::EmptyCommittee);
        }
        if k > m {
            return Err(InstanceError::CommitteeTooLarge { k, m });
        }
        if ballots.len() != n {
            return Err(InstanceError::BallotCount {
                expected: n,
                found: ballots.len(),
            });
        }
        let mut canonical = Vec::with_capacity(n);
        for (voter, mut ballot) in ballots.into_iter().enumerate() {
            if let Some(&index) = ballot.iter().find(|&&c| c >= m) {
                return Err(InstanceError::IndexOutOfRange { voter, index, m });
            }
            ballot.sort_unstable();
            if let Some(w) = ballot.windows(2).find(|w| w[0] == w[1]) {
                return Err(InstanceError::DuplicateIndex { voter, index: w[0] });
            }
            canonical.push(ballot);
        }
        let mut approvers = vec![Vec::new(); m];
        for (voter, ballot) in canonical.iter().enumerate() {
            for &c in ballot {
                approvers[c].push(voter);
            }
        }
        Ok(ElectionInstance {
            num_candidates: m,
            committee_size: k,
            ballots: canonical,
            approvers,
        })
    }

    pub fn num_voters(&self) -> usize {
        self.ballots.len()
    }

    pub fn num_candidates(&self) -> usize {
        self.num_candidates
    }

    pub fn committee_size(&self) -> usize {
        self.committee_size
    }

    pub fn ballots(&self) -> &[Vec<usize>] {
        &self.ballots
    }

    pub fn ballot(&self, voter: usize) -> &[usize] {
        &self.ballots[voter]
    }

    /// Voters approving `candidate`, ascending.
    pub fn approvers(&self, candidate: usize) -> &[usize] {
        &self.approvers[candidate]
    }

    pub fn approves(&self, voter: usize, candidate: usize) -> bool {
        self.ballots[voter].binary_search(&candidate).is_ok()
    }

    /// Number of approved candidates of `voter` that sit in `committee`.
    pub fn representation(&self, voter: usize, committee: &Committee) -> usize {
        self.ballots[voter]
            .iter()
            .filter(|&&c| committee.contains(c))
            .count()
    }

    /// Whether a group of `group_size` voters meets the quota `ell * n / k`,
    /// compared in integers as `group_size * k >= ell * n`.
    pub fn quota_met(&self, group_size: usize, ell: usize) -> bool {
        quota_met(group_size, ell, self)
    }

    /// Checks that every member is a candidate of this instance.
    pub fn check_members(&self, committee: &Committee) -> Result<(), CommitteeError> {
        match committee.members().last() {
            Some(&index) if index >= self.num_candidates => Err(CommitteeError::OutOfRange {
                index,
                m: self.num_candidates,
            }),
            _ => Ok(()),
        }
    }

    /// Checks membership range and that the committee has exactly `k` members.
    pub fn check_committee(&self, committee: &Committee) -> Result<(), CommitteeError> {
        self.check_members(committee)?;
        if committee.len() != self.committee_size {
            return Err(CommitteeError::WrongSize {
                expected: self.committee_size,
                found: committee.len(),
            });
        }
        Ok(())
    }
}

/// Exact quota test `group_size >= ell * n / k` without division.
pub fn quota_met(group_size: usize, ell: usize, instance: &ElectionInstance) -> bool {
    debug_assert!(ell >= 1);
    (group_size as u128) * (instance.committee_size as u128)
        >= (ell as u128) * (instance.num_voters() as u128)
}

/// A set of candidates in canonical ascending order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Committee {
    members: Vec<usize>,
}

impl Committee {
    /// Sorts `members`; duplicates are rejected.
    pub fn new(mut members: Vec<usize>) -> Result<Self, CommitteeError> {
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(CommitteeError::Duplicate(w[0]));
        }
        Ok(Committee { members })
    }

    pub fn empty() -> Self {
        Committee::default()
    }

    /// Candidates `0..k`.
    pub fn first(k: usize) -> Self {
        Committee {
            members: (0..k).collect(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, candidate: usize) -> bool {
        self.members.binary_search(&candidate).is_ok()
    }

    /// `(self \ {out}) ∪ {incoming}`. Caller guarantees `out` is a member
    /// and `incoming` is not.
    pub fn swapped(&self, out: usize, incoming: usize) -> Committee {
        debug_assert!(self.contains(out) && !self.contains(incoming));
        let mut members: Vec<usize> = self.members.iter().copied().filter(|&c| c != out).collect();
        let pos = members.binary_search(&incoming).unwrap_err();
        members.insert(pos, incoming);
        Committee { members }
    }

    pub fn without(&self, candidate: usize) -> Committee {
        Committee {
            members: self
                .members
                .iter()
                .copied()
                .filter(|&c| c != candidate)
                .collect(),
        }
    }

    pub fn with(&self, candidate: usize) -> Committee {
        let mut members = self.members.clone();
        if let Err(pos) = members.binary_search(&candidate) {
            members.insert(pos, candidate);
        }
        Committee { members }
    }
}

impl fmt::Display for Committee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in &self.members {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        Ok(())
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn builds_worked_instances() {
        let e1 = e1();
        assert_eq!(e1.num_voters(), 4);
        assert_eq!(e1.num_candidates(), 4);
        assert_eq!(e1.committee_size(), 2);
        assert_eq!(e1.approvers(0), &[0, 1]);
        assert_eq!(e1.approvers(3), &[3]);
        assert_eq!(e2().ballots(), &[vec![0, 1], vec![0, 1]]);
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            ElectionInstance::new(1, 2, 3, vec![vec![0]]),
            Err(InstanceError::CommitteeTooLarge { k: 3, m: 2 })
        );
        assert_eq!(
            ElectionInstance::new(1, 2, 0, vec![vec![0]]),
            Err(InstanceError::EmptyCommittee)
        );
        assert_eq!(
            ElectionInstance::new(0, 2, 1, vec![]),
            Err(InstanceError::NoVoters)
        );
        assert_eq!(
            ElectionInstance::new(2, 3, 1, vec![vec![0], vec![1, 3]]),
            Err(InstanceError::IndexOutOfRange {
                voter: 1,
                index: 3,
                m: 3
            })
        );
        assert_eq!(
            ElectionInstance::new(2, 3, 1, vec![vec![0], vec![2, 1, 2]]),
            Err(InstanceError::DuplicateIndex { voter: 1, index: 2 })
        );
        assert_eq!(
            ElectionInstance::new(2, 3, 1, vec![vec![0]]),
            Err(InstanceError::BallotCount {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn ballots_are_sorted_and_empty_ballots_allowed() {
        let inst = ElectionInstance::new(2, 3, 1, vec![vec![2, 0], vec![]]).unwrap();
        assert_eq!(inst.ballot(0), &[0, 2]);
        assert!(inst.ballot(1).is_empty());
    }

    #[test]
    fn quota_examples() {
        assert!(quota_met(2, 1, &e1()));
        assert!(!quota_met(1, 1, &e1()));
        assert!(quota_met(2, 2, &e2()));
    }

    #[test]
    fn committee_basics() {
        let w = Committee::new(vec![3, 1]).unwrap();
        assert_eq!(w.members(), &[1, 3]);
        assert_eq!(w.to_string(), "1 3");
        assert_eq!(w.swapped(3, 0).members(), &[0, 1]);
        assert_eq!(
            Committee::new(vec![1, 1]),
            Err(CommitteeError::Duplicate(1))
        );
        assert_eq!(
            e1().check_committee(&Committee::new(vec![0]).unwrap()),
            Err(CommitteeError::WrongSize {
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            e1().check_committee(&Committee::new(vec![0, 4]).unwrap()),
            Err(CommitteeError::OutOfRange { index: 4, m: 4 })
        );
    }

    fn instance_strategy() -> impl Strategy<Value = ElectionInstance> {
        (1usize..8, 1usize..8)
            .prop_flat_map(|(n, m)| {
                (
                    Just(n),
                    Just(m),
                    1..=m,
                    proptest::collection::vec(proptest::collection::btree_set(0..m, 0..=m), n),
                )
            })
            .prop_map(|(n, m, k, ballots)| {
                let ballots = ballots
                    .into_iter()
                    .map(|b| b.into_iter().collect())
                    .collect();
                ElectionInstance::new(n, m, k, ballots).unwrap()
            })
    }

    proptest! {
        #[test]
        fn rebuild_roundtrip(inst in instance_strategy()) {
            let rebuilt = ElectionInstance::new(
                inst.num_voters(),
                inst.num_candidates(),
                inst.committee_size(),
                inst.ballots().to_vec(),
            ).unwrap();
            prop_assert_eq!(rebuilt, inst);
        }

        #[test]
        fn quota_matches_rational_comparison(inst in instance_strategy()) {
            use crate::ExactRational;
            let (n, k) = (inst.num_voters(), inst.committee_size());
            for s in 0..=n {
                for ell in 1..=k {
                    let lhs = ExactRational::from_integer(s as i64);
                    let rhs = ExactRational::new((ell * n) as i64, k as i64);
                    prop_assert_eq!(quota_met(s, ell, &inst), lhs >= rhs);
                }
            }
        }
    }
}
