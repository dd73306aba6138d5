//! Rule-versus-axiom pass-rate matrix over generated profiles.

use super::generate::{generate, GenError, GenParams, Model};
use crate::axioms::{implication_audit, Axiom, CheckBudget, CheckError};
use crate::model::ElectionInstance;
use crate::pav::PavError;
use crate::solvers::{solve, InitPolicy, Rule, SolveError};

/// Approval probabilities cycled through when none is fixed.
pub const P_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

const AXIOMS: [Axiom; 3] = [Axiom::Jr, Axiom::Pjr, Axiom::Ejr];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchTrial {
    /// The generator seed, or the name of a frozen fixture profile.
    pub label: String,
    pub instance: ElectionInstance,
}

impl BenchTrial {
    /// A trial built from a stored profile rather than a generator seed.
    pub fn fixture(label: impl Into<String>, instance: ElectionInstance) -> Self {
        BenchTrial {
            label: label.into(),
            instance,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Generate(#[from] GenError),
    #[error("rule {rule} on trial {label}: {source}")]
    Solve {
        rule: &'static str,
        label: String,
        source: SolveError,
    },
    #[error("checking {rule} on trial {label}: {source}")]
    Check {
        rule: &'static str,
        label: String,
        source: CheckError,
    },
}

/// Impartial-culture trials with fixed `(n, m, k)`. Trial `t` uses seed
/// `seed + t` and, unless `p` is given, probability `P_GRID[t % 9]`.
pub fn impartial_trials(
    n: usize,
    m: usize,
    k: usize,
    trials: usize,
    seed: u64,
    p: Option<f64>,
) -> Result<Vec<BenchTrial>, GenError> {
    (0..trials)
        .map(|t| {
            let trial_seed = seed.wrapping_add(t as u64);
            let params = GenParams {
                model: Model::Impartial {
                    p: p.unwrap_or(P_GRID[t % P_GRID.len()]),
                },
                n,
                m,
                k,
                seed: trial_seed,
            };
            Ok(BenchTrial {
                label: trial_seed.to_string(),
                instance: generate(&params)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomTally {
    pub passed: usize,
    pub checked: usize,
    /// Labels (seeds or fixture names) of the trials whose committee
    /// violated the axiom.
    pub failing_seeds: Vec<String>,
}

impl AxiomTally {
    fn new() -> Self {
        AxiomTally {
            passed: 0,
            checked: 0,
            failing_seeds: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.checked
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleRow {
    pub rule: Rule,
    /// Trials where the rule refused to run (exact PAV over budget).
    pub skipped: usize,
    pub jr: AxiomTally,
    pub pjr: AxiomTally,
    pub ejr: AxiomTally,
}

impl RuleRow {
    pub fn tally(&self, axiom: Axiom) -> &AxiomTally {
        match axiom {
            Axiom::Jr => &self.jr,
            Axiom::Pjr => &self.pjr,
            Axiom::Ejr => &self.ejr,
        }
    }

    fn tally_mut(&mut self, axiom: Axiom) -> &mut AxiomTally {
        match axiom {
            Axiom::Jr => &mut self.jr,
            Axiom::Pjr => &mut self.pjr,
            Axiom::Ejr => &mut self.ejr,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchReport {
    pub trials: usize,
    pub rows: Vec<RuleRow>,
}

impl BenchReport {
    pub fn row(&self, rule: Rule) -> &RuleRow {
        self.rows
            .iter()
            .find(|r| r.rule == rule)
            .expect("every rule has a row")
    }

    /// The rows that must be perfect: every axiom for the swap rules and
    /// exact PAV, JR for GreedyAV.
    pub fn guarantees_hold(&self) -> bool {
        let full = [Rule::MaxSwapPav, Rule::SwapPav, Rule::Pav]
            .iter()
            .all(|&r| AXIOMS.iter().all(|&a| self.row(r).tally(a).all_passed()));
        full && self.row(Rule::GreedyAv).jr.all_passed()
    }
}

/// Runs every rule on every trial and checks JR, PJR and EJR. Swap rules
/// start from the lexicographic committee.
pub fn run_table1(trials: &[BenchTrial], budget: CheckBudget) -> Result<BenchReport, BenchError> {
    let mut rows: Vec<RuleRow> = Rule::ALL
        .iter()
        .map(|&rule| RuleRow {
            rule,
            skipped: 0,
            jr: AxiomTally::new(),
            pjr: AxiomTally::new(),
            ejr: AxiomTally::new(),
        })
        .collect();
    for trial in trials {
        for row in rows.iter_mut() {
            let name = row.rule.name();
            let result = match solve(row.rule, &trial.instance, &InitPolicy::Lexicographic) {
                Ok(result) => result,
                Err(SolveError::Pav(PavError::BudgetExceeded { .. })) => {
                    row.skipped += 1;
                    continue;
                }
                Err(source) => {
                    return Err(BenchError::Solve {
                        rule: name,
                        label: trial.label.clone(),
                        source,
                    })
                }
            };
            let report = implication_audit(&trial.instance, &result.committee, budget).map_err(
                |source| BenchError::Check {
                    rule: name,
                    label: trial.label.clone(),
                    source,
                },
            )?;
            for axiom in AXIOMS {
                let tally = row.tally_mut(axiom);
                tally.checked += 1;
                if report.get(axiom).is_satisfied() {
                    tally.passed += 1;
                } else {
                    tally.failing_seeds.push(trial.label.clone());
                }
            }
        }
    }
    Ok(BenchReport {
        trials: trials.len(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_matrix_meets_guarantees() {
        let trials = impartial_trials(8, 6, 3, 40, 5, None).unwrap();
        assert_eq!(trials.len(), 40);
        let report = run_table1(&trials, CheckBudget::default()).unwrap();
        assert_eq!(report.trials, 40);
        assert!(report.guarantees_hold());
        for row in &report.rows {
            assert_eq!(row.jr.checked + row.skipped, 40);
            assert_eq!(row.jr.failing_seeds.len(), row.jr.checked - row.jr.passed);
        }
    }

    #[test]
    fn trials_cycle_probabilities_and_seeds() {
        let trials = impartial_trials(3, 4, 2, 10, u64::MAX, None).unwrap();
        assert_eq!(trials[0].label, u64::MAX.to_string());
        assert_eq!(trials[1].label, "0");
        let fixed = impartial_trials(3, 4, 2, 2, 0, Some(1.0)).unwrap();
        assert!(fixed[1].instance.ballots().iter().all(|b| b.len() == 4));
    }
}
