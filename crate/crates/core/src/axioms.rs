//! Exact JR / PJR / EJR verifiers.
//!
//! The checkers enumerate candidate sets `T` instead of voter groups. For a
//! fixed `ℓ` and `T`, the voters who approve all of `T` form the largest
//! group whose common ballot contains `T`; a violating group can always be
//! grown to (EJR) or shrunk inside (PJR) that set. Enumeration runs in
//! lexicographic order of `T` with pruning on group size, which is monotone
//! decreasing as `T` grows.
//!
//! Deciding EJR is coNP-complete, so every enumeration is metered by a
//! [`CheckBudget`] and refuses rather than guessing.

use crate::model::{quota_met, AxiomVerdict, Committee, CommitteeError, ElectionInstance, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckBudget {
    /// Candidate sets (including enumeration prefixes) examined, per check.
    pub max_candidate_sets: u64,
    /// Voter subsets (including prefixes) examined by the PJR check.
    pub max_voter_subsets: u64,
}

impl Default for CheckBudget {
    fn default() -> Self {
        CheckBudget {
            max_candidate_sets: 1_000_000,
            max_voter_subsets: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Committee(#[from] CommitteeError),
    #[error("candidate-set enumeration exceeded its budget of {0}")]
    CandidateSetBudget(u64),
    #[error("voter-subset enumeration exceeded its budget of {0}")]
    VoterSubsetBudget(u64),
    #[error("verdicts break the EJR => PJR => JR chain: {0}")]
    BrokenImplication(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Jr,
    Pjr,
    Ejr,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Jr => "jr",
            Axiom::Pjr => "pjr",
            Axiom::Ejr => "ejr",
        }
    }
}

/// Justified representation: no candidate is approved by a quota-sized
/// group of voters that all have an empty intersection with `W`.
pub fn check_jr(
    instance: &ElectionInstance,
    committee: &Committee,
) -> Result<AxiomVerdict, CheckError> {
    instance.check_committee(committee)?;
    let unrepresented: Vec<bool> = (0..instance.num_voters())
        .map(|v| instance.representation(v, committee) == 0)
        .collect();
    for c in 0..instance.num_candidates() {
        let voters: Vec<usize> = instance
            .approvers(c)
            .iter()
            .copied()
            .filter(|&v| unrepresented[v])
            .collect();
        if quota_met(voters.len(), 1, instance) {
            return Ok(AxiomVerdict::violated(Witness {
                ell: 1,
                candidates: vec![c],
                voters,
            }));
        }
    }
    Ok(AxiomVerdict::satisfied())
}

/// Extended justified representation, for every `ℓ` in `1..=k`.
pub fn check_ejr(
    instance: &ElectionInstance,
    committee: &Committee,
    budget: CheckBudget,
) -> Result<AxiomVerdict, CheckError> {
    check_ejr_up_to(instance, committee, budget, instance.committee_size())
}

/// EJR restricted to `ℓ` in `1..=max_ell`.
pub fn check_ejr_up_to(
    instance: &ElectionInstance,
    committee: &Committee,
    budget: CheckBudget,
    max_ell: usize,
) -> Result<AxiomVerdict, CheckError> {
    instance.check_committee(committee)?;
    let representation: Vec<usize> = (0..instance.num_voters())
        .map(|v| instance.representation(v, committee))
        .collect();
    let mut meter = Meter::new(budget.max_candidate_sets);
    for ell in 1..=max_ell.min(instance.committee_size()) {
        let deficient: Vec<usize> = (0..instance.num_voters())
            .filter(|&v| representation[v] < ell)
            .collect();
        let mut found = None;
        let mut search = CandidateSearch {
            instance,
            ell,
            meter: &mut meter,
            path: Vec::with_capacity(ell),
        };
        search.run(deficient, &mut |candidates, voters| {
            found = Some(Witness {
                ell,
                candidates: candidates.to_vec(),
                voters: voters.to_vec(),
            });
            true
        })?;
        if let Some(witness) = found {
            return Ok(AxiomVerdict::violated(witness));
        }
    }
    Ok(AxiomVerdict::satisfied())
}

/// Proportional justified representation, for every `ℓ` in `1..=k`.
pub fn check_pjr(
    instance: &ElectionInstance,
    committee: &Committee,
    budget: CheckBudget,
) -> Result<AxiomVerdict, CheckError> {
    check_pjr_up_to(instance, committee, budget, instance.committee_size())
}

/// PJR restricted to `ℓ` in `1..=max_ell`.
pub fn check_pjr_up_to(
    instance: &ElectionInstance,
    committee: &Committee,
    budget: CheckBudget,
    max_ell: usize,
) -> Result<AxiomVerdict, CheckError> {
    instance.check_committee(committee)?;
    // each voter's approved committee members
    let covered: Vec<Vec<usize>> = instance
        .ballots()
        .iter()
        .map(|b| {
            b.iter()
                .copied()
                .filter(|&c| committee.contains(c))
                .collect()
        })
        .collect();
    let mut candidate_meter = Meter::new(budget.max_candidate_sets);
    let mut subset_meter = Meter::new(budget.max_voter_subsets);
    let all_voters: Vec<usize> = (0..instance.num_voters()).collect();
    for ell in 1..=max_ell.min(instance.committee_size()) {
        let group = smallest_quota_group(instance, ell);
        let mut found = None;
        let mut inner_error = None;
        let mut search = CandidateSearch {
            instance,
            ell,
            meter: &mut candidate_meter,
            path: Vec::with_capacity(ell),
        };
        search.run(all_voters.clone(), &mut |candidates, supporters| {
            // voters already holding ell members can never sit in a violating group
            let pool: Vec<usize> = supporters
                .iter()
                .copied()
                .filter(|&v| covered[v].len() < ell)
                .collect();
            if pool.len() < group {
                return false;
            }
            let mut subsets = SubsetSearch {
                covered: &covered,
                pool: &pool,
                ell,
                size: group,
                multiplicity: vec![0; instance.num_candidates()],
                distinct: 0,
                chosen: Vec::with_capacity(group),
                meter: &mut subset_meter,
            };
            match subsets.run(0) {
                Ok(true) => {
                    found = Some(Witness {
                        ell,
                        candidates: candidates.to_vec(),
                        voters: subsets.chosen.clone(),
                    });
                    true
                }
                Ok(false) => false,
                Err(e) => {
                    inner_error = Some(e);
                    true
                }
            }
        })?;
        if let Some(e) = inner_error {
            return Err(e);
        }
        if let Some(witness) = found {
            return Ok(AxiomVerdict::violated(witness));
        }
    }
    Ok(AxiomVerdict::satisfied())
}

/// Smallest `q` with `q * k >= ell * n`.
fn smallest_quota_group(instance: &ElectionInstance, ell: usize) -> usize {
    let (n, k) = (instance.num_voters(), instance.committee_size());
    (ell * n).div_ceil(k)
}

/// Verdicts of all three checkers on one committee.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationReport {
    pub jr: AxiomVerdict,
    pub pjr: AxiomVerdict,
    pub ejr: AxiomVerdict,
}

impl ImplicationReport {
    pub fn get(&self, axiom: Axiom) -> &AxiomVerdict {
        match axiom {
            Axiom::Jr => &self.jr,
            Axiom::Pjr => &self.pjr,
            Axiom::Ejr => &self.ejr,
        }
    }
}

/// Runs all three checkers and confirms `EJR ⇒ PJR ⇒ JR` on the verdicts.
pub fn implication_audit(
    instance: &ElectionInstance,
    committee: &Committee,
    budget: CheckBudget,
) -> Result<ImplicationReport, CheckError> {
    let report = ImplicationReport {
        jr: check_jr(instance, committee)?,
        pjr: check_pjr(instance, committee, budget)?,
        ejr: check_ejr(instance, committee, budget)?,
    };
    if report.ejr.is_satisfied() && !report.pjr.is_satisfied() {
        return Err(CheckError::BrokenImplication("EJR holds but PJR fails"));
    }
    if report.pjr.is_satisfied() && !report.jr.is_satisfied() {
        return Err(CheckError::BrokenImplication("PJR holds but JR fails"));
    }
    Ok(report)
}

pub fn check(
    axiom: Axiom,
    instance: &ElectionInstance,
    committee: &Committee,
    budget: CheckBudget,
) -> Result<AxiomVerdict, CheckError> {
    match axiom {
        Axiom::Jr => check_jr(instance, committee),
        Axiom::Pjr => check_pjr(instance, committee, budget),
        Axiom::Ejr => check_ejr(instance, committee, budget),
    }
}

struct Meter {
    used: u64,
    limit: u64,
}

impl Meter {
    fn new(limit: u64) -> Self {
        Meter { used: 0, limit }
    }

    fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }
}

/// Depth-first enumeration of size-`ell` candidate sets in lexicographic
/// order. Only sets whose supporting voters still meet the `ell` quota are
/// reported to the visitor; the visitor returns `true` to stop.
struct CandidateSearch<'a, 'm> {
    instance: &'a ElectionInstance,
    ell: usize,
    meter: &'m mut Meter,
    path: Vec<usize>,
}

impl CandidateSearch<'_, '_> {
    fn run(
        &mut self,
        voters: Vec<usize>,
        visit: &mut dyn FnMut(&[usize], &[usize]) -> bool,
    ) -> Result<bool, CheckError> {
        self.descend(0, &voters, visit)
    }

    fn descend(
        &mut self,
        start: usize,
        voters: &[usize],
        visit: &mut dyn FnMut(&[usize], &[usize]) -> bool,
    ) -> Result<bool, CheckError> {
        let remaining = self.ell - self.path.len();
        let m = self.instance.num_candidates();
        if m < remaining {
            return Ok(false);
        }
        for c in start..=m - remaining {
            if !self.meter.tick() {
                return Err(CheckError::CandidateSetBudget(self.meter.limit));
            }
            let supporters: Vec<usize> = voters
                .iter()
                .copied()
                .filter(|&v| self.instance.approves(v, c))
                .collect();
            if !quota_met(supporters.len(), self.ell, self.instance) {
                continue;
            }
            self.path.push(c);
            let stop = if remaining == 1 {
                visit(&self.path, &supporters)
            } else {
                self.descend(c + 1, &supporters, visit)?
            };
            self.path.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Lexicographic search for `size` voters from `pool` whose ballots jointly
/// cover fewer than `ell` committee members.
struct SubsetSearch<'a, 'm> {
    covered: &'a [Vec<usize>],
    pool: &'a [usize],
    ell: usize,
    size: usize,
    multiplicity: Vec<usize>,
    distinct: usize,
    chosen: Vec<usize>,
    meter: &'m mut Meter,
}

impl SubsetSearch<'_, '_> {
    fn run(&mut self, start: usize) -> Result<bool, CheckError> {
        if self.chosen.len() == self.size {
            return Ok(true);
        }
        let remaining = self.size - self.chosen.len();
        for i in start..=self.pool.len() - remaining {
            if !self.meter.tick() {
                return Err(CheckError::VoterSubsetBudget(self.meter.limit));
            }
            let voter = self.pool[i];
            self.add(voter);
            // unions only grow, so a branch that already covers ell is dead
            if self.distinct < self.ell {
                self.chosen.push(voter);
                if self.run(i + 1)? {
                    return Ok(true);
                }
                self.chosen.pop();
            }
            self.remove(voter);
        }
        Ok(false)
    }

    fn add(&mut self, voter: usize) {
        for &c in &self.covered[voter] {
            if self.multiplicity[c] == 0 {
                self.distinct += 1;
            }
            self.multiplicity[c] += 1;
        }
    }

    fn remove(&mut self, voter: usize) {
        for &c in &self.covered[voter] {
            self.multiplicity[c] -= 1;
            if self.multiplicity[c] == 0 {
                self.distinct -= 1;
            }
        }
    }
}
