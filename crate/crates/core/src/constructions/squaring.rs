//! Reachability circuits by repeated boolean matrix squaring.

use crate::circuit::{GateOp, MonotoneCircuit, WireMatrix};
use crate::error::{invalid, Result};

use super::{ceil_log2, DepthLedger};

/// Levels added by one reflexive squaring of an `n x n` wire matrix.
pub fn squaring_step_depth(n: u64) -> u64 {
    if n <= 1 {
        0
    } else {
        1 + ceil_log2(n) as u64
    }
}

/// One step of reflexive squaring.
///
/// If entry `(i, j)` of `cur` means "a walk `i -> j` with between 1 and `L`
/// edges", entry `(i, j)` of the result means the same for `2L`:
///
/// `next(i,j) = cur(i,j) OR  OR_{k != j} (cur(i,k) AND cur(k,j))`
///
/// This realizes powers of `A OR I` without a constant-one wire. For `i != j`
/// the diagonal entry is a closed walk, so the `k = i` term is sound. Each
/// entry is a balanced OR over exactly `n` terms, so every entry gains
/// exactly `1 + ceil(log2 n)` levels when `n >= 2`.
pub fn reflexive_square(circuit: &mut MonotoneCircuit, cur: &WireMatrix) -> WireMatrix {
    let n = cur.n();
    let mut entries = Vec::with_capacity(n * n);
    let mut terms = Vec::with_capacity(n);
    for i in 1..=n {
        for j in 1..=n {
            terms.clear();
            terms.push(cur.get(i, j));
            for k in (1..=n).filter(|&k| k != j) {
                terms.push(circuit.push_gate(GateOp::And, cur.get(i, k), cur.get(k, j)));
            }
            entries.push(circuit.or_tree(&terms).expect("terms reference existing wires"));
        }
    }
    let mut it = entries.into_iter();
    WireMatrix::from_fn(n, |_, _| it.next().unwrap())
}

/// Applies `t` reflexive squarings to the circuit's input matrix.
pub fn walk_power_matrix(circuit: &mut MonotoneCircuit, t: u32) -> WireMatrix {
    let mut m = circuit.input_matrix();
    for _ in 0..t {
        m = reflexive_square(circuit, &m);
    }
    m
}

/// Multi-output circuit whose entry `(i, j)` is 1 iff the graph has a walk
/// `i -> j` of length between 1 and `2^t`. For `i != j` this is the
/// `2^t`-closure; the diagonal reports closed walks. Depth is exactly
/// `t * (1 + ceil(log2 n))` for `n >= 2`.
pub fn build_walk_power(n: usize, t: u32) -> Result<MonotoneCircuit> {
    let mut c = MonotoneCircuit::new(n)?;
    let m = walk_power_matrix(&mut c, t);
    c.set_outputs(m.entries().to_vec())?;
    Ok(c)
}

/// Promise reachability `Reach^p_{n,l}`: entry `(1, n)` after
/// `ceil(log2 l)` reflexive squarings. Outputs 1 when a path of length at
/// most `l` exists and 0 when `n` is unreachable.
pub fn build_reach_leq(n: usize, l: usize) -> Result<MonotoneCircuit> {
    if n < 2 || l == 0 {
        return Err(invalid(format!("need n >= 2 and l >= 1, got n={n}, l={l}")));
    }
    let mut c = MonotoneCircuit::new(n)?;
    let m = walk_power_matrix(&mut c, ceil_log2(l as u64));
    c.add_output(m.get(1, n))?;
    Ok(c)
}

/// Total reachability `Reach_n`, i.e. `build_reach_leq(n, n - 1)`.
pub fn build_reach(n: usize) -> Result<MonotoneCircuit> {
    if n < 2 {
        return Err(invalid("need n >= 2"));
    }
    build_reach_leq(n, n - 1)
}

/// Exact-length walks: entry `(1, n)` of `A^l`, from the squarings
/// `A^(2^i)` and a balanced product tree over the set bits of `l`.
pub fn build_reach_exact(n: usize, l: usize) -> Result<MonotoneCircuit> {
    if n < 2 || l == 0 {
        return Err(invalid(format!("need n >= 2 and l >= 1, got n={n}, l={l}")));
    }
    let mut c = MonotoneCircuit::new(n)?;
    let mut power = c.input_matrix();
    let mut factors = Vec::new();
    let mut rest = l;
    loop {
        if rest & 1 == 1 {
            factors.push(power.clone());
        }
        rest >>= 1;
        if rest == 0 {
            break;
        }
        power = c.matrix_product(&power, &power)?;
    }
    while factors.len() > 1 {
        let mut next = Vec::with_capacity(factors.len().div_ceil(2));
        for pair in factors.chunks(2) {
            next.push(match pair {
                [a, b] => c.matrix_product(a, b)?,
                [a] => a.clone(),
                _ => unreachable!(),
            });
        }
        factors = next;
    }
    c.add_output(factors[0].get(1, n))?;
    Ok(c)
}

/// `ceil(log2 l) * (1 + ceil(log2 n))`, the depth of [`build_reach_leq`].
pub fn predicted_reach_leq_depth(n: u64, l: u64) -> u64 {
    ceil_log2(l) as u64 * squaring_step_depth(n)
}

/// Single-stage ledger for a squaring circuit.
pub fn squaring_ledger(n: usize, l: usize, circuit: &MonotoneCircuit) -> DepthLedger {
    let mut ledger = DepthLedger::new();
    ledger.push(
        "squaring",
        predicted_reach_leq_depth(n as u64, l as u64),
        Some(circuit.measure_depth() as u64),
    );
    ledger.set_leading_term((n as f64).log2() * (l as f64).log2());
    ledger
}
