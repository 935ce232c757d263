use rand::Rng;

use crate::error::Result;
use crate::rng;

use super::{CoveringFamily, FamilyParams};

/// `dm ln m / l + d ln n - s m d^2 / (n l)`.
///
/// A negative value guarantees that an `(n, m, s, l, d)`-family exists; the
/// probability that a uniformly sampled `m x s` matrix fails is at most
/// `exp(value)` (see [`failure_probability_bound`]).
pub fn statement4_bound(p: &FamilyParams) -> f64 {
    let (n, m, s, l, d) = (p.n as f64, p.m as f64, p.s as f64, p.l as f64, p.d as f64);
    d * m * m.ln() / l + d * n.ln() - s * m * d * d / (n * l)
}

/// `exp(statement4_bound)`: upper bound on the chance that [`sample_family`]
/// returns a family violating the covering condition.
pub fn failure_probability_bound(p: &FamilyParams) -> f64 {
    statement4_bound(p).exp()
}

/// `m = n`, `l < n`, `d <= n` and `s > 2 n ln n / d`.
pub fn corollary_condition(p: &FamilyParams) -> bool {
    p.m == p.n && p.l < p.n && p.d <= p.n && (p.s as f64) * (p.d as f64) > 2.0 * (p.n as f64) * (p.n as f64).ln()
}

/// Draws an `m x s` matrix with entries uniform in `1..=n` and returns its
/// rows as sets (repeated entries collapse, so sets may be smaller than `s`).
pub fn sample_family(p: &FamilyParams, seed: u64) -> Result<CoveringFamily> {
    let mut rng = rng::seeded(seed);
    let sets = (0..p.m)
        .map(|_| (0..p.s).map(|_| rng.gen_range(1..=p.n)).collect())
        .collect();
    CoveringFamily::new(*p, sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{check_family_exact, FamilyVerdict, DEFAULT_EXACT_BUDGET};

    fn params(n: usize, m: usize, s: usize, l: usize, d: usize) -> FamilyParams {
        FamilyParams { n, m, s, l, d }
    }

    #[test]
    fn bound_reference_value() {
        // 8*64*ln64/32 + 8*ln64 - 67*64*64/(64*32) with ln 64 = 4.158883...
        let ln64 = 64f64.ln();
        let want = 16.0 * ln64 + 8.0 * ln64 - 134.0;
        let got = statement4_bound(&params(64, 64, 67, 32, 8));
        assert!((got - want).abs() < 1e-12);
        assert!((got - (-34.19)).abs() < 0.01, "{got}");
    }

    #[test]
    fn bound_without_sets_is_positive() {
        let p = params(10, 10, 0, 5, 3);
        let want = 3.0 * 10.0 * 10f64.ln() / 5.0 + 3.0 * 10f64.ln();
        assert!((statement4_bound(&p) - want).abs() < 1e-12);
        assert!(statement4_bound(&p) > 0.0);
    }

    #[test]
    fn corollary_examples() {
        assert!(corollary_condition(&params(16, 16, 12, 8, 8)));
        assert!(!corollary_condition(&params(16, 16, 12, 16, 8)));
        assert!(!corollary_condition(&params(16, 16, 100, 8, 17)));
        assert!(!corollary_condition(&params(16, 16, 11, 8, 8)));
    }

    #[test]
    fn corollary_implies_negative_bound() {
        for n in 2..60 {
            for l in 1..n {
                for d in 1..=n {
                    let s = (2.0 * n as f64 * (n as f64).ln() / d as f64).floor() as usize + 1;
                    let p = params(n, n, s, l, d);
                    assert!(corollary_condition(&p));
                    assert!(statement4_bound(&p) < 0.0, "{p:?}");
                }
            }
        }
    }

    #[test]
    fn sampling_shapes() {
        let f = sample_family(&params(9, 5, 1, 3, 2), 4).unwrap();
        assert!(f.sets().iter().all(|s| s.len() == 1));
        let p = params(12, 12, 10, 6, 6);
        assert_eq!(sample_family(&p, 77).unwrap(), sample_family(&p, 77).unwrap());
        assert_ne!(sample_family(&p, 77).unwrap(), sample_family(&p, 78).unwrap());
    }

    #[test]
    fn negative_bound_yields_verified_family() {
        let p = params(12, 12, 10, 6, 6);
        assert!(statement4_bound(&p) < 0.0);
        let ok = (0..10).any(|seed| {
            check_family_exact(&sample_family(&p, seed).unwrap(), DEFAULT_EXACT_BUDGET).unwrap()
                == FamilyVerdict::Verified
        });
        assert!(ok);
    }
}
