use crate::error::{invalid, Error, Result};

use super::CoveringFamily;

/// A set of the family plus breakpoints `0 = i_0 < ... < i_k = l'` along a
/// sequence `A_0..A_l'`, with every interior `A_{i_j}` in the set and every
/// gap at most `2d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingWitness {
    pub set_index: usize,
    pub indices: Vec<usize>,
}

impl HittingWitness {
    /// Number of hops `k`.
    pub fn hops(&self) -> usize {
        self.indices.len().saturating_sub(1)
    }

    pub fn max_gap(&self) -> usize {
        self.indices.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    /// Checks every witness invariant against the family and sequence.
    pub fn check(&self, family: &CoveringFamily, sequence: &[usize]) -> Result<()> {
        let p = family.params();
        let last = sequence.len().checked_sub(1).ok_or_else(|| invalid("empty sequence"))?;
        let fail = |msg: String| Err(Error::FamilyViolation(msg));
        if self.indices.first() != Some(&0) || self.indices.last() != Some(&last) {
            return fail(format!("indices {:?} must run from 0 to {last}", self.indices));
        }
        if self.indices.windows(2).any(|w| w[0] >= w[1]) {
            return fail(format!("indices {:?} not strictly increasing", self.indices));
        }
        if self.hops() * p.d > p.l {
            return fail(format!("k={} exceeds l/d={}/{}", self.hops(), p.l, p.d));
        }
        if self.max_gap() > 2 * p.d {
            return fail(format!("gap {} exceeds 2d={}", self.max_gap(), 2 * p.d));
        }
        let set = family
            .sets()
            .get(self.set_index)
            .ok_or_else(|| invalid(format!("set index {} out of range", self.set_index)))?;
        let interior = match self.indices.len() {
            0..=2 => &[][..],
            len => &self.indices[1..len - 1],
        };
        for &i in interior {
            if set.binary_search(&sequence[i]).is_err() {
                return fail(format!("A_{i}={} not in set {}", sequence[i], self.set_index));
            }
        }
        Ok(())
    }
}

/// Splits a sequence of distinct elements `A_0..A_l'` (with `l' <= l`) into
/// hops of length at most `2d` whose interior breakpoints all lie in one set
/// of the family.
///
/// With `k = floor(l'/d)`, the blocks `B_i = {A_id, ..., A_id+d-1}` for
/// `1 <= i <= k-1` must all be met by one set `S`; one index per block gives
/// the breakpoints. For `l' <= 2d` the single hop `(0, l')` suffices and the
/// first set is returned. If no set meets every block the family violates
/// the covering condition, which is reported as [`Error::FamilyViolation`].
pub fn hitting_decomposition(family: &CoveringFamily, sequence: &[usize]) -> Result<HittingWitness> {
    let p = family.params();
    if sequence.is_empty() {
        return Err(invalid("sequence must contain at least A_0"));
    }
    let len = sequence.len() - 1;
    if len > p.l {
        return Err(invalid(format!("sequence length {len} exceeds l={}", p.l)));
    }
    let universe = family.union();
    let mut seen = vec![false; p.n + 1];
    for &v in sequence {
        if universe.binary_search(&v).is_err() {
            return Err(invalid(format!("element {v} is not covered by the family")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(invalid(format!("element {v} repeats in the sequence")));
        }
    }

    if len <= 2 * p.d {
        let indices = if len == 0 { vec![0] } else { vec![0, len] };
        return Ok(HittingWitness {
            set_index: 0,
            indices,
        });
    }

    let d = p.d;
    let k = len / d;
    let blocks: Vec<&[usize]> = (1..k).map(|i| &sequence[i * d..i * d + d]).collect();
    let meets = |set: &[usize], block: &[usize]| block.iter().any(|v| set.binary_search(v).is_ok());

    let Some(set_index) = family
        .sets()
        .iter()
        .position(|set| blocks.iter().all(|b| meets(set, b)))
    else {
        // The block avoided by the most sets: at least m/(k-1) >= md/l of them.
        let (block, avoided) = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (i + 1, family.sets().iter().filter(|s| !meets(s, b)).count()))
            .max_by_key(|&(i, c)| (c, std::cmp::Reverse(i)))
            .expect("k >= 2 gives at least one block");
        return Err(Error::FamilyViolation(format!(
            "no set meets every block; block B_{block}={:?} is avoided by {avoided} of {} sets",
            blocks[block - 1],
            p.m
        )));
    };

    let set = &family.sets()[set_index];
    let mut indices = Vec::with_capacity(k + 1);
    indices.push(0);
    for i in 1..k {
        let offset = (i * d..i * d + d)
            .find(|&j| set.binary_search(&sequence[j]).is_ok())
            .expect("chosen set meets the block");
        indices.push(offset);
    }
    indices.push(len);
    Ok(HittingWitness { set_index, indices })
}
