//! Approval-based committee voting with Extended Justified Representation.
//!
//! The centerpiece is [`solvers::max_swap_pav`]: starting from any size-`k`
//! committee, repeatedly apply the PAV-score improving swap with the largest
//! gain, as long as that gain is at least `1/(2k³)`. The result always
//! satisfies EJR and the number of swaps is polynomially bounded.
//!
//! Around it sit exact PAV scoring ([`pav`]), baseline rules, exact JR, PJR
//! and EJR verifiers with violation witnesses ([`axioms`]), and file formats,
//! generators and a CLI ([`io`]). All scores are exact rationals.
//!
//! ```
//! use ejr_committee::{ElectionInstance, solvers::{max_swap_pav, InitPolicy}};
//! use ejr_committee::axioms::{check_ejr, CheckBudget};
//!
//! let e = ElectionInstance::new(4, 4, 2, vec![vec![0, 1], vec![0, 1], vec![2], vec![3]]).unwrap();
//! let result = max_swap_pav(&e, &InitPolicy::Lexicographic).unwrap();
//! assert_eq!(result.final_score.to_string(), "3/1");
//! assert!(check_ejr(&e, &result.committee, CheckBudget::default()).unwrap().is_satisfied());
//! ```

pub mod axioms;
pub mod io;
pub mod model;
pub mod pav;
pub mod solvers;

pub use model::{
    quota_met, AxiomVerdict, Committee, CommitteeError, ElectionInstance, ExactRational,
    InstanceError, SolveResult, SwapStep, Witness,
};
