//! The recursive schedule: a squaring circuit for a small instance lifted
//! level by level through sampled covering families.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::circuit::MonotoneCircuit;
use crate::combinatorics::{
    check_family_exact, check_family_sampled, sample_family, CoveringFamily, FamilyParams, FamilyVerdict,
    DEFAULT_EXACT_BUDGET,
};
use crate::error::{invalid, Error, Result};
use crate::rng::derive_seed;

use super::predict::{ceil_log2_big, ln_big, log2_big, step_depth_big};
use super::squaring::{build_reach_leq, squaring_ledger};
use super::{compose_family, DepthLedger};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleLevel {
    /// `floor(n * growth_q^i / d^i)`
    pub n_i: BigUint,
    /// `floor(l / d^i)`
    pub l_i: BigUint,
}

/// Parameters of the recursion for `Reach^p_{n,l}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TheoremSchedule {
    pub n: BigUint,
    pub l: BigUint,
    /// `floor(2^sqrt(log2 n))`
    pub d_param: BigUint,
    /// Largest `k` with `d_param^k <= l`.
    pub k: u32,
    /// `2 ln n + 3`, with `ln` approximated as a rational.
    pub growth_q: BigRational,
    /// Levels `0..=k`.
    pub levels: Vec<ScheduleLevel>,
}

fn d_param_for(n: &BigUint) -> Result<BigUint> {
    let exp = log2_big(n).sqrt();
    if exp >= 63.0 {
        return Err(invalid(format!("n too large for the schedule: sqrt(log2 n) = {exp}")));
    }
    let mut d = exp.exp2().floor() as u64;
    // Guard against rounding in exp2: d must satisfy (log2 d)^2 <= log2 n.
    let l2n = log2_big(n);
    while d > 2 && (d as f64).log2().powi(2) > l2n {
        d -= 1;
    }
    Ok(BigUint::from(d.max(2)))
}

impl TheoremSchedule {
    pub fn new(n: &BigUint, l: &BigUint) -> Result<Self> {
        if *l < BigUint::from(2u32) || l >= n {
            return Err(invalid(format!("need 2 <= l < n, got n={n}, l={l}")));
        }
        let d = d_param_for(n)?;
        let mut k = 0u32;
        let mut power = d.clone();
        while power <= *l {
            k += 1;
            power *= &d;
        }
        let growth_q = BigRational::from_integer(2.into()) * ln_big(n) + BigRational::from_integer(3.into());
        let n_rat = BigRational::from_integer(n.clone().into());
        let ratio = &growth_q / BigRational::from_integer(d.clone().into());
        let mut scale = BigRational::one();
        let mut d_pow = BigUint::one();
        let mut levels = Vec::with_capacity(k as usize + 1);
        for _ in 0..=k {
            let n_i = (&n_rat * &scale).floor().to_integer();
            levels.push(ScheduleLevel {
                n_i: n_i.to_biguint().expect("nonnegative"),
                l_i: l / &d_pow,
            });
            scale = &scale * &ratio;
            d_pow *= &d;
        }
        Ok(Self {
            n: n.clone(),
            l: l.clone(),
            d_param: d,
            k,
            growth_q,
            levels,
        })
    }

    /// `(n_i, n_i, n_{i+1} - 2, l_i, d)` for level `i < k`.
    pub fn family_params(&self, i: usize) -> Result<FamilyParams> {
        if i >= self.k as usize {
            return Err(invalid(format!("level {i} has no family (k = {})", self.k)));
        }
        let small = |v: &BigUint| {
            v.to_usize()
                .ok_or_else(|| invalid(format!("{v} does not fit a machine word")))
        };
        let n_i = small(&self.levels[i].n_i)?;
        let next = small(&self.levels[i + 1].n_i)?;
        if next < 3 {
            return Err(invalid(format!("level {} has n = {next}, need at least 3", i + 1)));
        }
        FamilyParams::new(n_i, n_i, next - 2, small(&self.levels[i].l_i)?, small(&self.d_param)?)
    }

    /// Whether `n_{i+1} - 2 > (2 ln n / d) * n_i` for every `i < k`.
    pub fn growth_holds(&self) -> bool {
        let two_ln = BigRational::from_integer(2.into()) * ln_big(&self.n);
        let d = BigRational::from_integer(self.d_param.clone().into());
        self.levels.windows(2).all(|w| {
            let lhs = BigRational::from_integer(w[1].n_i.clone().into()) - BigRational::from_integer(2.into());
            lhs > &two_ln / &d * BigRational::from_integer(w[0].n_i.clone().into())
        })
    }

    /// Stage formulas without building: the base squaring circuit on level
    /// `k`, then for each level from `k-1` down to 0 a closure and an OR over
    /// `n_i` blocks.
    pub fn predicted_ledger(&self) -> DepthLedger {
        let mut ledger = DepthLedger::new();
        let base = &self.levels[self.k as usize];
        ledger.push(
            format!("base squaring n={} l={}", base.n_i, base.l_i),
            ceil_log2_big(&base.l_i) * step_depth_big(&base.n_i),
            None,
        );
        let two_d = &self.d_param << 1;
        for i in (0..self.k as usize).rev() {
            let n_i = &self.levels[i].n_i;
            ledger.push(format!("level {i} closure"), ceil_log2_big(&two_d) * step_depth_big(n_i), None);
            ledger.push(format!("level {i} or"), ceil_log2_big(n_i), None);
        }
        let (ln, ll) = (log2_big(&self.n), log2_big(&self.l));
        ledger.set_leading_term(ln * ll - ll * ll / 2.0);
        ledger
    }

    pub fn growth_q_f64(&self) -> f64 {
        self.growth_q.to_f64().unwrap_or(f64::NAN)
    }
}

/// Schedule for `Reach^p_{n,l}`; requires `2 <= l < n`.
pub fn theorem_schedule(n: u64, l: u64) -> Result<TheoremSchedule> {
    TheoremSchedule::new(&BigUint::from(n), &BigUint::from(l))
}

#[derive(Clone, Debug)]
pub struct TheoremOptions {
    pub seed: u64,
    /// Sampled families tried per level.
    pub attempt_budget: u64,
    /// Largest `C(n_i, d)` checked exactly.
    pub exact_budget: u128,
    /// Accept families that only passed random `d`-set trials when the
    /// exact check is over budget.
    pub allow_sampled: bool,
    pub sampled_trials: u64,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            attempt_budget: 10,
            exact_budget: DEFAULT_EXACT_BUDGET,
            allow_sampled: false,
            sampled_trials: 100_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TheoremBuild {
    pub circuit: MonotoneCircuit,
    pub ledger: DepthLedger,
    pub schedule: TheoremSchedule,
    /// The family used at each level, indexed by level.
    pub families: Vec<CoveringFamily>,
}

fn find_family(p: &FamilyParams, level: usize, opts: &TheoremOptions) -> Result<CoveringFamily> {
    let cost = p.exact_check_cost();
    let exact = cost <= opts.exact_budget;
    if !exact && !opts.allow_sampled {
        return Err(Error::BudgetExceeded {
            what: format!("exact check of the level {level} family {p}"),
            cost,
            limit: opts.exact_budget,
        });
    }
    let mut last = None;
    for attempt in 0..opts.attempt_budget {
        let seed = derive_seed(opts.seed, level as u64, attempt);
        let family = sample_family(p, seed)?;
        let verdict = if exact {
            check_family_exact(&family, opts.exact_budget)?
        } else {
            check_family_sampled(&family, opts.sampled_trials, derive_seed(seed, u64::MAX, 0))?
        };
        match verdict {
            FamilyVerdict::Violated(cx) => last = Some(cx),
            _ => return Ok(family),
        }
    }
    Err(Error::ConstructionFailed(match last {
        Some(cx) => format!(
            "no valid {p} family at level {level} in {} attempts; last counterexample: {cx}",
            opts.attempt_budget
        ),
        None => format!("no attempts allowed at level {level}"),
    }))
}

/// Builds `Reach^p_{n,l}` by the recursive schedule.
///
/// The base circuit is squaring on `(n_k, l_k)`. For each level from `k-1`
/// down to 0 a family is sampled (up to `attempt_budget` seeds derived from
/// `opts.seed`), validated, and composed with the circuit of the level below.
/// Families too large for the exact checker are refused unless
/// `allow_sampled` is set.
pub fn build_theorem(n: usize, l: usize, opts: &TheoremOptions) -> Result<TheoremBuild> {
    let schedule = theorem_schedule(n as u64, l as u64)?;
    let k = schedule.k as usize;
    let base = &schedule.levels[k];
    let (base_n, base_l) = (
        base.n_i.to_usize().ok_or_else(|| invalid("base level too large"))?,
        base.l_i.to_usize().ok_or_else(|| invalid("base level too large"))?,
    );
    if base_l.is_zero() {
        return Err(invalid("base level has l = 0"));
    }
    let mut circuit = build_reach_leq(base_n, base_l)?;
    let mut ledger = squaring_ledger(base_n, base_l, &circuit);
    ledger.stages[0].label = format!("base squaring n={base_n} l={base_l}");
    let mut families = Vec::with_capacity(k);
    for i in (0..k).rev() {
        let p = schedule.family_params(i)?;
        let family = find_family(&p, i, opts)?;
        let built = compose_family(&family, &circuit)?;
        let stages = &built.ledger.stages;
        assert_eq!(stages[1].measured, ledger.total_measured, "inner block depth drifted");
        ledger.push(format!("level {i} closure"), stages[0].predicted, stages[0].measured);
        ledger.push(format!("level {i} or"), stages[2].predicted, stages[2].measured);
        circuit = built.circuit;
        families.push(family);
    }
    families.reverse();
    let (ln, ll) = ((n as f64).log2(), (l as f64).log2());
    ledger.set_leading_term(ln * ll - ll * ll / 2.0);
    Ok(TheoremBuild {
        circuit,
        ledger,
        schedule,
        families,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{predict_depth, PredictMode};
    use crate::verification::{no_path_graph, planted_path_graph};

    #[test]
    fn schedule_reference_values() {
        let s = TheoremSchedule::new(&(BigUint::one() << 16u32), &(BigUint::one() << 15u32)).unwrap();
        assert_eq!(s.d_param, BigUint::from(16u32));
        assert_eq!(s.k, 3);
        assert!((s.growth_q_f64() - 25.18).abs() < 0.01);
        assert_eq!(s.levels.len(), 4);
        assert_eq!(s.levels[0].n_i, BigUint::from(65536u32));
        assert_eq!(s.levels[3].l_i, BigUint::from(8u32));
        assert!(s.growth_holds());
    }

    #[test]
    fn small_l_degenerates() {
        let s = theorem_schedule(1000, 3).unwrap();
        assert!(s.d_param > BigUint::from(3u32));
        assert_eq!(s.k, 0);
        let opts = TheoremOptions::default();
        let built = build_theorem(20, 3, &opts).unwrap();
        assert_eq!(built.circuit.gates(), build_reach_leq(20, 3).unwrap().gates());
        assert!(built.families.is_empty());
    }

    #[test]
    fn rejects_l_out_of_range() {
        assert!(theorem_schedule(10, 10).is_err());
        assert!(theorem_schedule(10, 1).is_err());
    }

    #[test]
    fn eight_vertices_one_level() {
        let built = build_theorem(8, 7, &TheoremOptions::default()).unwrap();
        assert_eq!(built.schedule.k, 1);
        assert_eq!(built.families.len(), 1);
        let depth = built.circuit.measure_depth() as u64;
        assert_eq!(built.ledger.total_measured, Some(depth));
        assert_eq!(built.ledger.total_predicted, depth);
        let predicted = predict_depth(PredictMode::Theorem, &BigUint::from(8u32), Some(&BigUint::from(7u32))).unwrap();
        assert_eq!(predicted.total_predicted, depth);
        for seed in 0..200 {
            let len = 1 + (seed as usize % 7);
            let g = planted_path_graph(8, len, 0.05, seed).unwrap().matrix;
            assert!(built.circuit.evaluate(&g).unwrap());
            let g = no_path_graph(8, 0.4, seed).unwrap().matrix;
            assert!(!built.circuit.evaluate(&g).unwrap());
        }
    }

    #[test]
    fn over_budget_needs_opt_in() {
        let opts = TheoremOptions {
            exact_budget: 10,
            ..TheoremOptions::default()
        };
        assert!(matches!(build_theorem(8, 7, &opts), Err(Error::BudgetExceeded { .. })));
        let opts = TheoremOptions {
            exact_budget: 10,
            allow_sampled: true,
            sampled_trials: 100,
            ..TheoremOptions::default()
        };
        assert!(build_theorem(8, 7, &opts).is_ok());
    }
}
