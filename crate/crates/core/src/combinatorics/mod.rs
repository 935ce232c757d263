//! Covering set families: the `(n, m, s, l, d)` covering condition, its
//! checkers, random and affine-plane generators, and the block-hitting
//! decomposition of a path.

mod family;
mod hitting;
mod plane;
mod sampling;

pub use family::{
    check_family_exact, check_family_sampled, Counterexample, CoveringFamily, FamilyParams,
    FamilyVerdict, DEFAULT_EXACT_BUDGET,
};
pub use hitting::{hitting_decomposition, HittingWitness};
pub use plane::{
    affine_lines, is_prime, line_cover_bound, minimal_d, minimal_prime_q, plane_family,
    verify_cover_bound_exhaustive, AffinePlaneFamily, CoverBoundVerdict,
};
pub use sampling::{corollary_condition, failure_probability_bound, sample_family, statement4_bound};

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
