//! Post-hoc analytics: seed neighbor turnover and rank-based comparison of
//! network granularities.

mod friedman;
pub mod special;
mod turnover;

pub use friedman::{friedman_test, nemenyi_posthoc, rank_descending, FriedmanResult, PairwiseComparison, ResultMatrix};
pub use turnover::{
    combine_runs, neighbor_turnover, TurnoverBaseline, TurnoverDirection, TurnoverOptions, TurnoverReport,
};
