use std::fmt;
use std::str::FromStr;

use rand::seq::index;

use crate::error::{invalid, parse_err, Error, Result};
use crate::rng;

use super::binomial;

/// Default ceiling on the number of `d`-subsets the exact checker enumerates.
pub const DEFAULT_EXACT_BUDGET: u128 = 10_000_000;

/// Declared parameters of an `(n, m, s, l, d)`-family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilyParams {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub l: usize,
    pub d: usize,
}

impl FamilyParams {
    pub fn new(n: usize, m: usize, s: usize, l: usize, d: usize) -> Result<Self> {
        if n == 0 || m == 0 || s == 0 || l == 0 || d == 0 {
            return Err(invalid(format!(
                "family parameters must be positive: ({n},{m},{s},{l},{d})"
            )));
        }
        if d > n {
            return Err(invalid(format!("d={d} exceeds n={n}")));
        }
        Ok(Self { n, m, s, l, d })
    }

    /// True when `count` sets avoiding some `d`-set do not yet reach the
    /// `md/l` threshold, i.e. `count < md/l` in exact arithmetic.
    #[inline]
    pub fn below_threshold(&self, count: usize) -> bool {
        (count as u128) * (self.l as u128) < (self.m as u128) * (self.d as u128)
    }

    /// Number of `d`-subsets the exact checker may have to visit.
    pub fn exact_check_cost(&self) -> u128 {
        binomial(self.n as u64, self.d as u64)
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.n, self.m, self.s, self.l, self.d)
    }
}

/// An ordered family of `m` subsets of `{1..n}`, each of size at most `s`.
///
/// Sets are stored sorted ascending. The covering condition itself is not
/// enforced here; see [`check_family_exact`] and [`check_family_sampled`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringFamily {
    params: FamilyParams,
    sets: Vec<Vec<usize>>,
}

impl CoveringFamily {
    pub fn new(params: FamilyParams, sets: Vec<Vec<usize>>) -> Result<Self> {
        if sets.len() != params.m {
            return Err(invalid(format!(
                "declared m={} but got {} sets",
                params.m,
                sets.len()
            )));
        }
        let mut normalized = Vec::with_capacity(sets.len());
        for (idx, mut set) in sets.into_iter().enumerate() {
            set.sort_unstable();
            set.dedup();
            if let Some(&bad) = set.iter().find(|&&v| v == 0 || v > params.n) {
                return Err(invalid(format!("set {idx} contains {bad}, outside 1..={}", params.n)));
            }
            if set.len() > params.s {
                return Err(invalid(format!(
                    "set {idx} has {} elements, exceeding s={}",
                    set.len(),
                    params.s
                )));
            }
            normalized.push(set);
        }
        Ok(Self {
            params,
            sets: normalized,
        })
    }

    pub fn params(&self) -> FamilyParams {
        self.params
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Sorted union of all sets.
    pub fn union(&self) -> Vec<usize> {
        let mut seen = vec![false; self.params.n + 1];
        for &v in self.sets.iter().flatten() {
            seen[v] = true;
        }
        (1..=self.params.n).filter(|&v| seen[v]).collect()
    }

    /// Adds the terminals 1 and `n` to every set and re-declares `s` as `s+2`.
    pub fn augment_with_terminals(&self) -> CoveringFamily {
        let n = self.params.n;
        let sets = self
            .sets
            .iter()
            .map(|set| {
                let mut s = set.clone();
                s.push(1);
                s.push(n);
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        CoveringFamily {
            params: FamilyParams {
                s: self.params.s + 2,
                ..self.params
            },
            sets,
        }
    }

    /// Indices of sets sharing no element with `d_set`.
    pub fn sets_avoiding(&self, d_set: &[usize]) -> Vec<usize> {
        self.sets
            .iter()
            .enumerate()
            .filter(|(_, s)| d_set.iter().all(|v| s.binary_search(v).is_err()))
            .map(|(i, _)| i)
            .collect()
    }

    /// Serializes in the `FAMILY` text format.
    pub fn to_text(&self) -> String {
        let p = self.params;
        let mut out = format!("FAMILY {} {} {} {} {}\n", p.n, p.m, p.s, p.l, p.d);
        for set in &self.sets {
            let line: Vec<String> = set.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.split('\n');
        let header = lines.next().unwrap_or_default();
        let head: Vec<&str> = header.split_whitespace().collect();
        let nums = match head.as_slice() {
            ["FAMILY", rest @ ..] if rest.len() == 5 => rest
                .iter()
                .map(|t| t.parse::<usize>().map_err(|_| parse_err(1, format!("invalid number {t:?}"))))
                .collect::<Result<Vec<_>>>()?,
            _ => return Err(parse_err(1, "expected `FAMILY <n> <m> <s> <l> <d>` header")),
        };
        let params = FamilyParams::new(nums[0], nums[1], nums[2], nums[3], nums[4])
            .map_err(|e| parse_err(1, e.to_string()))?;
        let mut sets = Vec::with_capacity(params.m);
        for idx in 0..params.m {
            let lineno = idx + 2;
            let line = lines
                .next()
                .ok_or_else(|| parse_err(lineno, format!("expected {} set lines", params.m)))?;
            let set = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| parse_err(lineno, format!("invalid element {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            sets.push(set);
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(parse_err(params.m + 2, "more set lines than declared m"));
        }
        CoveringFamily::new(params, sets).map_err(|e| parse_err(0, e.to_string()))
    }
}

impl FromStr for CoveringFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// A `d`-set `D` together with the sets avoiding it, at least `md/l` of them.
/// Their union misses all of `D`, so it covers at most `n - d` elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub d_set: Vec<usize>,
    pub avoiding_sets: Vec<usize>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "D={:?} is avoided by {} sets {:?}",
            self.d_set,
            self.avoiding_sets.len(),
            self.avoiding_sets
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyVerdict {
    /// Every `d`-set was checked.
    Verified,
    /// Random `d`-sets found no violation; not a proof.
    NoViolationFound { trials: u64 },
    Violated(Counterexample),
}

impl FamilyVerdict {
    pub fn is_violation(&self) -> bool {
        matches!(self, FamilyVerdict::Violated(_))
    }
}

/// Decides the covering condition exactly.
///
/// The family fails iff some `d`-subset `D` of `{1..n}` is avoided by at
/// least `md/l` sets. Subsets are visited in lexicographic order, so the
/// reported counterexample is the lexicographically first one. Refuses with
/// [`Error::BudgetExceeded`] when `C(n, d)` exceeds `budget`.
pub fn check_family_exact(family: &CoveringFamily, budget: u128) -> Result<FamilyVerdict> {
    let p = family.params;
    let cost = p.exact_check_cost();
    if cost > budget {
        return Err(Error::BudgetExceeded {
            what: format!("exact check of {p}-family: C({}, {}) subsets", p.n, p.d),
            cost,
            limit: budget,
        });
    }
    let words = p.m.div_ceil(64);
    // members[v]: bitmask of the sets containing element v.
    let mut members = vec![vec![0u64; words]; p.n + 1];
    for (idx, set) in family.sets.iter().enumerate() {
        for &v in set {
            members[v][idx / 64] |= 1 << (idx % 64);
        }
    }
    let mut all = vec![!0u64; words];
    if !p.m.is_multiple_of(64) {
        all[words - 1] = (1u64 << (p.m % 64)) - 1;
    }

    struct Search<'a> {
        params: FamilyParams,
        members: &'a [Vec<u64>],
        chosen: Vec<usize>,
    }

    impl Search<'_> {
        // Depth-first over increasing elements; `alive` holds the sets still
        // disjoint from the partial D. Removing elements only shrinks it, so a
        // subtree already below threshold cannot contain a violation.
        fn visit(&mut self, start: usize, alive: &[u64]) -> Option<Vec<u64>> {
            let count: usize = alive.iter().map(|w| w.count_ones() as usize).sum();
            if self.params.below_threshold(count) {
                return None;
            }
            if self.chosen.len() == self.params.d {
                return Some(alive.to_vec());
            }
            let remaining = self.params.d - self.chosen.len();
            for v in start..=(self.params.n + 1 - remaining) {
                let next: Vec<u64> = alive
                    .iter()
                    .zip(&self.members[v])
                    .map(|(a, m)| a & !m)
                    .collect();
                self.chosen.push(v);
                if let Some(found) = self.visit(v + 1, &next) {
                    return Some(found);
                }
                self.chosen.pop();
            }
            None
        }
    }

    let mut search = Search {
        params: p,
        members: &members,
        chosen: Vec::with_capacity(p.d),
    };
    Ok(match search.visit(1, &all) {
        None => FamilyVerdict::Verified,
        Some(alive) => {
            let avoiding_sets = (0..p.m)
                .filter(|&i| alive[i / 64] >> (i % 64) & 1 == 1)
                .collect();
            FamilyVerdict::Violated(Counterexample {
                d_set: search.chosen,
                avoiding_sets,
            })
        }
    })
}

/// Monte Carlo falsification: tests `trials` uniformly random `d`-subsets.
pub fn check_family_sampled(family: &CoveringFamily, trials: u64, seed: u64) -> Result<FamilyVerdict> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let p = family.params;
    let mut rng = rng::seeded(seed);
    for _ in 0..trials {
        let mut d_set: Vec<usize> = index::sample(&mut rng, p.n, p.d).into_iter().map(|v| v + 1).collect();
        d_set.sort_unstable();
        let avoiding = family.sets_avoiding(&d_set);
        if !p.below_threshold(avoiding.len()) {
            return Ok(FamilyVerdict::Violated(Counterexample {
                d_set,
                avoiding_sets: avoiding,
            }));
        }
    }
    Ok(FamilyVerdict::NoViolationFound { trials })
}
