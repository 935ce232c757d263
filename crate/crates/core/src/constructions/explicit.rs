use crate::combinatorics::plane_family;
use crate::error::{invalid, Result};

use super::squaring::{build_reach_leq, predicted_reach_leq_depth};
use super::{compose_family, Construction};

/// `Reach_n` from the affine-plane family: `q` is the smallest prime with
/// `q^2 >= n`, the family is `(n, q(q+1), q, n, d)` and the inner circuit is
/// `Reach^p_{q+2, floor(n/d)}` by squaring. One composition level; the
/// result is total because `l = n`.
pub fn build_explicit(n: usize) -> Result<Construction> {
    if n < 2 {
        return Err(invalid("need n >= 2"));
    }
    let family = plane_family(n)?;
    let p = family.params();
    let inner_l = p.l / p.d;
    let inner = build_reach_leq(p.s + 2, inner_l)?;
    let mut built = compose_family(&family, &inner)?;
    let inner_stage = &mut built.ledger.stages[1];
    inner_stage.label = format!("inner squaring n={} l={inner_l}", p.s + 2);
    debug_assert_eq!(
        inner_stage.predicted,
        predicted_reach_leq_depth((p.s + 2) as u64, inner_l as u64)
    );
    Ok(built)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verification::{bfs_reachable, enumerate_graphs};

    #[test]
    fn explicit_small_exhaustive() {
        for n in 2..=3 {
            let built = build_explicit(n).unwrap();
            for g in enumerate_graphs(n).unwrap() {
                assert_eq!(built.circuit.evaluate(&g).unwrap(), bfs_reachable(&g, 1, n).unwrap());
            }
        }
    }

    #[test]
    fn explicit_sixteen_ledger() {
        let built = build_explicit(16).unwrap();
        let stages: Vec<u64> = built.ledger.stages.iter().map(|s| s.predicted).collect();
        // closure: ceil(log2 16) squarings of depth 1 + 4; inner Reach^p_{7,2}
        // is one squaring of depth 1 + 3; OR over 30 blocks.
        assert_eq!(stages, vec![20, 4, 5]);
        assert_eq!(built.ledger.total_measured, Some(29));
        assert_eq!(built.circuit.measure_depth(), 29);
    }
}
