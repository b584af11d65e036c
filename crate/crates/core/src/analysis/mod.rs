//! Closed-form and enumerative analysis: tail probabilities, pairwise error
//! probability, weight-set conditions and weight-set search.

pub mod condition;
mod exact;
pub mod lemma1;
pub mod pairwise;
pub mod qfunc;
pub mod search;
pub mod shaping;

pub use condition::{check_nonzero_condition, check_signed_row, ConditionReport, Witness};
pub use lemma1::{
    e_recursion, lemma1_e, lemma1_e_exact, unique_fraction, unique_solution_oracle,
    unique_solution_oracle_exact, UniqueSolutionReport,
};
pub use pairwise::pairwise_error_prob;
pub use qfunc::{error_floor_bound, q_function};
pub use search::{search_weight_set, CandidateFamily, SearchConfig};
pub use shaping::{gaussian_fit_check, gaussian_fit_check_with, ShapingBin, ShapingReport};
