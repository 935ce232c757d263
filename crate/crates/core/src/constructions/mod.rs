//! Circuit builders: repeated squaring, covering-family composition, the
//! explicit affine-plane construction and the recursive schedule, each with
//! exact depth accounting.

mod compose;
mod explicit;
mod ledger;
mod predict;
mod squaring;
mod theorem;

pub use compose::{block_slots, closure_squarings, compose_family, Construction};
pub use explicit::build_explicit;
pub use ledger::{DepthLedger, LedgerStage};
pub use predict::{
    ceil_log2_big, is_probable_prime_big, minimal_d_big, minimal_prime_q_big, predict_depth,
    ratio_table, PredictMode, TrendRow, TREND_EXPONENTS,
};
pub use squaring::{
    build_reach, build_reach_exact, build_reach_leq, build_walk_power, predicted_reach_leq_depth,
    reflexive_square, squaring_ledger, squaring_step_depth, walk_power_matrix,
};
pub use theorem::{
    build_theorem, theorem_schedule, ScheduleLevel, TheoremBuild, TheoremOptions, TheoremSchedule,
};

/// `ceil(log2 x)` for `x >= 1`; `ceil_log2(1) = 0`.
pub fn ceil_log2(x: u64) -> u32 {
    assert!(x >= 1, "ceil_log2 of zero");
    u64::BITS - (x - 1).leading_zeros()
}
