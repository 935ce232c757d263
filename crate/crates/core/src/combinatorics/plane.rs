//! Lines of the affine plane over a prime field and the covering families
//! they induce.

use num_rational::Ratio;

use crate::error::{invalid, Error, Result};

use super::{CoveringFamily, FamilyParams};

/// Deterministic trial division.
pub fn is_prime(v: u64) -> bool {
    if v < 2 {
        return false;
    }
    if v.is_multiple_of(2) {
        return v == 2;
    }
    let mut f = 3;
    while f * f <= v {
        if v.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// Smallest prime `q` with `q^2 >= n`.
pub fn minimal_prime_q(n: u64) -> u64 {
    let mut q = n.isqrt();
    if q * q < n {
        q += 1;
    }
    q = q.max(2);
    while !is_prime(q) {
        q += 1;
    }
    q
}

/// Smallest natural `d` with `d/q > (q^2 - d)/(d + q)`, equivalently
/// `d^2 + 2qd - q^3 > 0`.
pub fn minimal_d(q: u64) -> Result<u64> {
    if q < 2 {
        return Err(invalid(format!("q={q} must be at least 2")));
    }
    let (q, q3) = (q as u128, (q as u128).pow(3));
    let holds = |d: u128| d * d + 2 * q * d > q3;
    // Positive root of d^2 + 2qd - q^3 is sqrt(q^2 + q^3) - q.
    let mut d = ((q * q + q3).isqrt() - q).max(1);
    while d > 1 && holds(d - 1) {
        d -= 1;
    }
    while !holds(d) {
        d += 1;
    }
    Ok(d as u64)
}

/// The full affine plane over `GF(q)`: `q^2` points indexed `x*q + y` and
/// its `q(q+1)` lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePlaneFamily {
    pub q: u64,
    /// Each line as the sorted indices of its `q` points.
    pub lines: Vec<Vec<usize>>,
    /// Points (0-based indices) used as family elements.
    pub point_subset: Vec<usize>,
    /// Deficiency parameter from [`minimal_d`].
    pub d: u64,
}

impl AffinePlaneFamily {
    pub fn num_points(&self) -> usize {
        (self.q * self.q) as usize
    }

    /// Lines intersected with the first `n` points in row-major order; point
    /// index `p` becomes element `p + 1`.
    pub fn restrict_to_prefix(&self, n: usize) -> Result<CoveringFamily> {
        if n == 0 || n > self.num_points() {
            return Err(invalid(format!("n={n} outside 1..={}", self.num_points())));
        }
        let params = FamilyParams::new(n, self.lines.len(), self.q as usize, n, self.d as usize)?;
        let sets = self
            .lines
            .iter()
            .map(|line| line.iter().filter(|&&p| p < n).map(|&p| p + 1).collect())
            .collect();
        CoveringFamily::new(params, sets)
    }
}

/// Enumerates every line `ax + by + c = 0` exactly once: first the
/// non-vertical lines (`b = 1`) ordered by `(a, c)`, then the vertical lines
/// (`a = 1, b = 0`) ordered by `c`.
pub fn affine_lines(q: u64) -> Result<AffinePlaneFamily> {
    if !is_prime(q) {
        return Err(invalid(format!("q={q} is not prime")));
    }
    let qu = q as usize;
    let mut lines = Vec::with_capacity(qu * (qu + 1));
    for a in 0..qu {
        for c in 0..qu {
            // y = -(a x + c)
            let mut line: Vec<usize> = (0..qu)
                .map(|x| {
                    let y = (2 * qu * qu - a * x - c) % qu;
                    x * qu + y
                })
                .collect();
            line.sort_unstable();
            lines.push(line);
        }
    }
    for c in 0..qu {
        // x = -c
        let x = (qu - c) % qu;
        lines.push((0..qu).map(|y| x * qu + y).collect());
    }
    Ok(AffinePlaneFamily {
        q,
        lines,
        point_subset: (0..qu * qu).collect(),
        d: minimal_d(q)?,
    })
}

/// `(q+1)(q^2 - u)/(u + q)`.
pub fn line_cover_bound(q: u64, u: u64) -> Result<Ratio<u64>> {
    if q == 0 || u > q * q {
        return Err(invalid(format!("need 0 <= u <= q^2, got q={q}, u={u}")));
    }
    Ok(Ratio::new((q + 1) * (q * q - u), u + q))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverBoundVerdict {
    Pass { subsets: u64 },
    /// Line indices whose count exceeds the bound for their uncovered count.
    Counterexample { lines: Vec<usize>, uncovered: u64 },
}

/// Checks `|L| <= (q+1)(q^2-u)/(u+q)` for every set `L` of lines, where `u`
/// is the number of points no line of `L` covers.
pub fn verify_cover_bound_exhaustive(q: u64) -> Result<CoverBoundVerdict> {
    const MAX_LINES: u64 = 20;
    let plane = affine_lines(q)?;
    let num_lines = plane.lines.len() as u64;
    if num_lines > MAX_LINES {
        return Err(Error::BudgetExceeded {
            what: format!("all subsets of the {num_lines} lines over GF({q})"),
            cost: 1u128 << num_lines.min(127),
            limit: 1 << MAX_LINES,
        });
    }
    let masks: Vec<u64> = plane
        .lines
        .iter()
        .map(|line| line.iter().fold(0u64, |m, &p| m | 1 << p))
        .collect();
    let points = q * q;
    for subset in 0u64..1 << num_lines {
        let covered = masks
            .iter()
            .enumerate()
            .filter(|(i, _)| subset >> i & 1 == 1)
            .fold(0u64, |acc, (_, m)| acc | m);
        let u = points - covered.count_ones() as u64;
        let count = subset.count_ones() as u64;
        if Ratio::from_integer(count) > line_cover_bound(q, u)? {
            return Ok(CoverBoundVerdict::Counterexample {
                lines: (0..num_lines as usize).filter(|i| subset >> i & 1 == 1).collect(),
                uncovered: u,
            });
        }
    }
    Ok(CoverBoundVerdict::Pass {
        subsets: 1 << num_lines,
    })
}

/// Covering family from the affine plane: `q` is the smallest prime with
/// `q^2 >= n`, `d = minimal_d(q)`, and the sets are all lines intersected
/// with the first `n` points. Declared parameters are `(n, q(q+1), q, n, d)`.
pub fn plane_family(n: usize) -> Result<CoveringFamily> {
    if n < 2 {
        return Err(invalid("plane families need n >= 2"));
    }
    let q = minimal_prime_q(n as u64);
    affine_lines(q)?.restrict_to_prefix(n)
}
