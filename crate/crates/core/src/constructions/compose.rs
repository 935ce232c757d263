//! Lifting a small promise-reachability circuit to a large one through a
//! covering family.

use crate::circuit::MonotoneCircuit;
use crate::combinatorics::CoveringFamily;
use crate::error::{invalid, Result};

use super::squaring::{squaring_step_depth, walk_power_matrix};
use super::{ceil_log2, DepthLedger};

/// A built circuit and its depth ledger.
#[derive(Clone, Debug)]
pub struct Construction {
    pub circuit: MonotoneCircuit,
    pub ledger: DepthLedger,
}

/// Number of reflexive squarings giving a closure that contains the
/// `2d`-closure.
pub fn closure_squarings(d: usize) -> u32 {
    ceil_log2(2 * d as u64)
}

/// Vertex slots of the inner block for one augmented set: slot 1 is vertex 1,
/// slot `s+2` is vertex `n`, slots `2..` hold the other members in ascending
/// order, and unfilled slots are `None`.
pub fn block_slots(set: &[usize], n: usize, inner_vertices: usize) -> Vec<Option<usize>> {
    let mut slots = vec![None; inner_vertices + 1];
    slots[1] = Some(1);
    slots[inner_vertices] = Some(n);
    for (k, &v) in set.iter().filter(|&&v| v != 1 && v != n).enumerate() {
        slots[2 + k] = Some(v);
    }
    slots
}

/// Builds `Reach^p_{n,l}` from an `(n, m, s, l, d)`-family and an `inner`
/// circuit realizing `Reach^p_{s+2, floor(l/d)}`.
///
/// The input graph is first replaced by its `2^ceil(log2 2d)`-closure. Each
/// set, extended by the terminals 1 and `n`, gets a copy of `inner` reading
/// the closure restricted to that set (missing slots read the zero wire),
/// and the copies are OR-ed together.
///
/// The family must satisfy the covering condition; this is not rechecked.
/// The ledger's stages are the closure, the inner blocks and the final OR,
/// and the measured total equals
/// `ceil(log2 m) + ceil(log2 2d) * (1 + ceil(log2 n)) + depth(inner)`.
pub fn compose_family(family: &CoveringFamily, inner: &MonotoneCircuit) -> Result<Construction> {
    let p = family.params();
    if p.n < 2 {
        return Err(invalid("composition needs n >= 2"));
    }
    if inner.num_vertices() != p.s + 2 {
        return Err(invalid(format!(
            "inner circuit has {} vertices, family needs s+2 = {}",
            inner.num_vertices(),
            p.s + 2
        )));
    }
    if inner.outputs().len() != 1 {
        return Err(invalid("inner circuit must have exactly one output"));
    }
    let n = p.n;
    let inner_n = inner.num_vertices();
    let mut c = MonotoneCircuit::new(n)?;
    let t = closure_squarings(p.d);
    let closure = walk_power_matrix(&mut c, t);

    let augmented = family.augment_with_terminals();
    let zero = c.zero();
    let mut block_outputs = Vec::with_capacity(p.m);
    for set in augmented.sets() {
        let slots = block_slots(set, n, inner_n);
        let outs = c.append_clone(inner, |a, b| match (slots[a], slots[b]) {
            (Some(u), Some(v)) => closure.get(u, v),
            _ => zero,
        })?;
        block_outputs.push(outs[0]);
    }
    let out = c.or_tree(&block_outputs)?;
    c.add_output(out)?;

    let depth = c.wire_depths();
    let closure_depth = closure.entries().iter().map(|w| depth[w.index()]).max().unwrap_or(0) as u64;
    let block_depth = block_outputs.iter().map(|w| depth[w.index()]).max().unwrap_or(0) as u64;
    let total = depth[out.index()] as u64;
    let inner_depth = inner.measure_depth() as u64;

    let mut ledger = DepthLedger::new();
    ledger.push(
        format!("closure n={n} squarings={t}"),
        t as u64 * squaring_step_depth(n as u64),
        Some(closure_depth),
    );
    ledger.push(format!("inner blocks n={inner_n}"), inner_depth, Some(block_depth - closure_depth));
    ledger.push(format!("or m={}", p.m), ceil_log2(p.m as u64) as u64, Some(total - block_depth));
    let (nf, mf, df) = (n as f64, p.m as f64, p.d as f64);
    ledger.set_leading_term(mf.log2() + nf.log2() * df.log2() + inner_depth as f64);
    Ok(Construction { circuit: c, ledger })
}
