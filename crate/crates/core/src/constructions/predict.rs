//! Depth predictions from the stage formulas alone, for `n` far beyond what
//! can be materialized (up to `2^1024` and past it).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::combinatorics::is_prime;
use crate::error::{invalid, Error, Result};

use super::{DepthLedger, TheoremSchedule};

/// Exponents `e` of the trend table rows `n = 2^e`.
pub const TREND_EXPONENTS: [u32; 8] = [10, 16, 32, 64, 128, 256, 512, 1024];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PredictMode {
    Squaring,
    Explicit,
    Theorem,
}

impl FromStr for PredictMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "squaring" => Ok(PredictMode::Squaring),
            "explicit" => Ok(PredictMode::Explicit),
            "theorem" => Ok(PredictMode::Theorem),
            other => Err(invalid(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for PredictMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PredictMode::Squaring => "squaring",
            PredictMode::Explicit => "explicit",
            PredictMode::Theorem => "theorem",
        })
    }
}

pub fn ceil_log2_big(x: &BigUint) -> u64 {
    if *x <= BigUint::one() {
        0
    } else {
        (x - 1u32).bits()
    }
}

pub(crate) fn step_depth_big(n: &BigUint) -> u64 {
    if *n <= BigUint::one() {
        0
    } else {
        1 + ceil_log2_big(n)
    }
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Primality: trial division below `2^32`, Miller-Rabin with the first 25
/// primes as bases above. The bases are a proof of primality below
/// `3.3 * 10^24`; beyond that a composite passes with probability below
/// `4^-25`.
pub fn is_probable_prime_big(v: &BigUint) -> bool {
    if let Some(small) = v.to_u64().filter(|&x| x < 1 << 32) {
        return is_prime(small);
    }
    for &p in &SMALL_PRIMES {
        if (v % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let minus_one = v - 1u32;
    let s = minus_one.trailing_zeros().unwrap_or(0);
    let odd = &minus_one >> s;
    'bases: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&odd, v);
        if x == one || x == minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), v);
            if x == minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `q` with `q^2 >= n`.
pub fn minimal_prime_q_big(n: &BigUint) -> BigUint {
    let mut q = n.sqrt();
    if &q * &q < *n {
        q += 1u32;
    }
    if q < BigUint::from(2u32) {
        q = BigUint::from(2u32);
    }
    while !is_probable_prime_big(&q) {
        q += 1u32;
    }
    q
}

/// Smallest `d` with `d^2 + 2qd > q^3`.
pub fn minimal_d_big(q: &BigUint) -> BigUint {
    let q3 = q * q * q;
    let holds = |d: &BigUint| d * d + ((q * d) << 1) > q3;
    let root = (q * q + &q3).sqrt();
    let mut d = if root > *q { root - q } else { BigUint::one() };
    if d.is_zero() {
        d = BigUint::one();
    }
    while d > BigUint::one() && holds(&(&d - 1u32)) {
        d -= 1u32;
    }
    while !holds(&d) {
        d += 1u32;
    }
    d
}

/// `ln 2` to 40 significant digits.
fn ln2() -> BigRational {
    let num: BigUint = "6931471805599453094172321214581765680755".parse().unwrap();
    let den = BigUint::from(10u32).pow(40);
    BigRational::new(num.into(), den.into())
}

/// Rational approximation of `ln n`: exact multiples of the 40-digit `ln 2`
/// for powers of two, otherwise the top 64 bits through `f64::ln`.
pub(crate) fn ln_big(n: &BigUint) -> BigRational {
    let bits = n.bits();
    if n.count_ones() == 1 {
        return ln2() * BigRational::from_integer((bits - 1).into());
    }
    let shift = bits.saturating_sub(64);
    let top = (n >> shift).to_f64().expect("64-bit value");
    BigRational::from_float(top.ln()).expect("finite") + ln2() * BigRational::from_integer(shift.into())
}

/// `log2 n` as `f64`, exact for powers of two.
pub(crate) fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    let shift = bits.saturating_sub(64);
    let top = (n >> shift).to_f64().expect("64-bit value");
    top.log2() + shift as f64
}

fn squaring_prediction(n: &BigUint, l: &BigUint) -> DepthLedger {
    let mut ledger = DepthLedger::new();
    ledger.push("squaring", ceil_log2_big(l) * step_depth_big(n), None);
    ledger.set_leading_term(log2_big(n) * log2_big(l));
    ledger
}

fn explicit_prediction(n: &BigUint) -> DepthLedger {
    let q = minimal_prime_q_big(n);
    let d = minimal_d_big(&q);
    let m = &q * (&q + 1u32);
    let inner_n = &q + 2u32;
    let inner_l = n / &d;
    let mut ledger = DepthLedger::new();
    ledger.push("closure", ceil_log2_big(&(&d << 1)) * step_depth_big(n), None);
    ledger.push("inner squaring", ceil_log2_big(&inner_l) * step_depth_big(&inner_n), None);
    ledger.push("or", ceil_log2_big(&m), None);
    let leading = log2_big(&m) + log2_big(n) * log2_big(&d) + log2_big(&inner_n) * log2_big(&inner_l);
    ledger.set_leading_term(leading);
    ledger
}

/// Stage-by-stage depth prediction without building a circuit.
///
/// `l` defaults to `n - 1` (total reachability) for the squaring and
/// theorem modes; the explicit mode always uses `l = n`.
pub fn predict_depth(mode: PredictMode, n: &BigUint, l: Option<&BigUint>) -> Result<DepthLedger> {
    if *n < BigUint::from(2u32) {
        return Err(invalid("need n >= 2"));
    }
    let default_l = n - 1u32;
    let l = l.unwrap_or(&default_l);
    if l.is_zero() {
        return Err(invalid("need l >= 1"));
    }
    match mode {
        PredictMode::Squaring => Ok(squaring_prediction(n, l)),
        PredictMode::Explicit => Ok(explicit_prediction(n)),
        PredictMode::Theorem => {
            if *n < BigUint::from(3u32) {
                return Err(invalid("the schedule needs 2 <= l < n, so n >= 3"));
            }
            Ok(TheoremSchedule::new(n, l)?.predicted_ledger())
        }
    }
}

/// One row of a trend table: `n = 2^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrendRow {
    pub exponent: u32,
    pub predicted: u64,
    /// `predicted / exponent^2`, exact.
    pub ratio: Ratio<u64>,
}

/// Predicted depth over `(log2 n)^2` for `n = 2^e`, `e` in `exponents`.
pub fn ratio_table(mode: PredictMode, exponents: &[u32]) -> Result<Vec<TrendRow>> {
    exponents
        .iter()
        .map(|&e| {
            let n = BigUint::one() << e;
            let ledger = predict_depth(mode, &n, None)?;
            Ok(TrendRow {
                exponent: e,
                predicted: ledger.total_predicted,
                ratio: Ratio::new(ledger.total_predicted, (e as u64) * (e as u64)),
            })
        })
        .collect()
}
