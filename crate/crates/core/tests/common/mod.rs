//! Test-only oracles written straight from the definitions, sharing nothing
//! with the library's enumeration code.

#![allow(dead_code)]

use ejr_committee::axioms::Axiom;
use ejr_committee::io::{generate, GenParams, Model};
use ejr_committee::{Committee, ElectionInstance, ExactRational, Witness};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub fn e1() -> ElectionInstance {
    ElectionInstance::new(4, 4, 2, vec![vec![0, 1], vec![0, 1], vec![2], vec![3]]).unwrap()
}

pub fn e2() -> ElectionInstance {
    ElectionInstance::new(2, 4, 2, vec![vec![0, 1], vec![0, 1]]).unwrap()
}

pub fn committee(members: &[usize]) -> Committee {
    Committee::new(members.to_vec()).unwrap()
}

fn ballot_set(inst: &ElectionInstance, voter: usize) -> BTreeSet<usize> {
    inst.ballot(voter).iter().copied().collect()
}

fn hits(inst: &ElectionInstance, voter: usize, w: &Committee) -> usize {
    inst.ballot(voter)
        .iter()
        .filter(|c| w.members().contains(c))
        .count()
}

/// `|X| >= ell * n / k`, cross-multiplied.
fn big_enough(inst: &ElectionInstance, size: usize, ell: usize) -> bool {
    size * inst.committee_size() >= ell * inst.num_voters()
}

/// `Σᵢ Σ_{j=1}^{|W∩Aᵢ|} 1/j`, summed term by term.
pub fn naive_score(inst: &ElectionInstance, w: &Committee) -> ExactRational {
    let mut total = ExactRational::zero();
    for v in 0..inst.num_voters() {
        for j in 1..=hits(inst, v, w) {
            total += ExactRational::new(1, j as i64);
        }
    }
    total
}

/// All size-`k` committees, by recursion.
pub fn all_committees(m: usize, k: usize) -> Vec<Committee> {
    fn rec(start: usize, m: usize, left: usize, cur: &mut Vec<usize>, acc: &mut Vec<Committee>) {
        if left == 0 {
            acc.push(Committee::new(cur.clone()).unwrap());
            return;
        }
        for c in start..m {
            cur.push(c);
            rec(c + 1, m, left - 1, cur, acc);
            cur.pop();
        }
    }
    let mut acc = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut acc);
    acc
}

/// Maximum PAV-score over all committees, by exhaustive search.
pub fn brute_max_score(inst: &ElectionInstance) -> ExactRational {
    all_committees(inst.num_candidates(), inst.committee_size())
        .iter()
        .map(|w| naive_score(inst, w))
        .max()
        .unwrap()
}

/// Direct evaluation of the JR / PJR / EJR definitions over every voter
/// subset `X`. Exponential in `n`; meant for `n <= 10`.
pub fn brute_satisfies(inst: &ElectionInstance, w: &Committee, axiom: Axiom) -> bool {
    let n = inst.num_voters();
    assert!(n <= 16, "voter-subset oracle is exponential in n");
    let in_w: BTreeSet<usize> = w.members().iter().copied().collect();
    for mask in 1u32..(1 << n) {
        let group: Vec<usize> = (0..n).filter(|v| mask & (1 << v) != 0).collect();
        let mut common = ballot_set(inst, group[0]);
        let mut union = BTreeSet::new();
        for &v in &group {
            let b = ballot_set(inst, v);
            common = common.intersection(&b).copied().collect();
            union.extend(b);
        }
        let max_ell = match axiom {
            Axiom::Jr => 1,
            _ => inst.committee_size(),
        };
        for ell in 1..=max_ell {
            if !big_enough(inst, group.len(), ell) || common.len() < ell {
                continue;
            }
            let represented = union.intersection(&in_w).count();
            let ok = match axiom {
                Axiom::Jr => represented >= 1,
                Axiom::Pjr => represented >= ell,
                Axiom::Ejr => group.iter().any(|&v| hits(inst, v, w) >= ell),
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Substitutes a witness back into the violated definition.
pub fn witness_is_valid(
    inst: &ElectionInstance,
    w: &Committee,
    axiom: Axiom,
    wit: &Witness,
) -> bool {
    let ell = wit.ell;
    if ell < 1
        || ell > inst.committee_size()
        || wit.candidates.len() != ell
        || wit.voters.is_empty()
    {
        return false;
    }
    if axiom == Axiom::Jr && ell != 1 {
        return false;
    }
    let t: BTreeSet<usize> = wit.candidates.iter().copied().collect();
    let x: BTreeSet<usize> = wit.voters.iter().copied().collect();
    if t.len() != ell || x.len() != wit.voters.len() || x.iter().any(|&v| v >= inst.num_voters()) {
        return false;
    }
    // cohesion: T ⊆ every ballot in X, so |∩ A_i| >= ell
    if !x.iter().all(|&v| t.is_subset(&ballot_set(inst, v))) {
        return false;
    }
    if !big_enough(inst, x.len(), ell) {
        return false;
    }
    let union: BTreeSet<usize> = x.iter().flat_map(|&v| ballot_set(inst, v)).collect();
    let represented = union.iter().filter(|c| w.members().contains(c)).count();
    match axiom {
        Axiom::Jr => represented == 0,
        Axiom::Pjr => represented < ell,
        Axiom::Ejr => x.iter().all(|&v| hits(inst, v, w) < ell),
    }
}

/// Parameters of one member of the randomized impartial-culture ensemble:
/// n in [2,20], m in [2,12], k in [1, min(6,m)], p in {0.1,...,0.9}.
#[derive(Debug, Clone, Copy)]
pub struct EnsembleDraw {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub p: f64,
}

pub fn ensemble(
    count: usize,
    master_seed: u64,
    max_n: usize,
) -> Vec<(EnsembleDraw, ElectionInstance)> {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(2..=max_n);
            let m = rng.gen_range(2..=12);
            let k = rng.gen_range(1..=m.min(6));
            let p = rng.gen_range(1..=9) as f64 / 10.0;
            let draw = EnsembleDraw {
                seed: master_seed.wrapping_mul(1_000_003).wrapping_add(i as u64),
                n,
                m,
                k,
                p,
            };
            let inst = generate(&GenParams {
                model: Model::Impartial { p },
                n,
                m,
                k,
                seed: draw.seed,
            })
            .unwrap();
            (draw, inst)
        })
        .collect()
}

/// Uniformly random size-`k` committee.
pub fn random_committee(inst: &ElectionInstance, rng: &mut ChaCha8Rng) -> Committee {
    let members =
        rand::seq::index::sample(rng, inst.num_candidates(), inst.committee_size()).into_vec();
    Committee::new(members).unwrap()
}
