//! Monotone fan-in-2 circuit IR over the `n^2` edge variables of a graph.
//!
//! Wires are numbered in creation order: wires `0..n^2` are the inputs
//! `g_ij` in row-major 1-based `(i, j)` order, wire `n^2` is the constant
//! zero, and every gate appends one new wire. A gate may only reference
//! wires created before it, so the gate list is always topologically
//! ordered.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, parse_err, Error, Result};
use crate::graph::AdjacencyMatrix;

/// Index of one wire (input, constant zero, or gate output).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WireId(u32);

impl WireId {
    pub fn new(index: usize) -> Self {
        WireId(u32::try_from(index).expect("wire index exceeds u32"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for WireId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateOp {
    And,
    Or,
}

impl GateOp {
    pub fn as_str(self) -> &'static str {
        match self {
            GateOp::And => "AND",
            GateOp::Or => "OR",
        }
    }

    #[inline]
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            GateOp::And => a && b,
            GateOp::Or => a || b,
        }
    }
}

impl FromStr for GateOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "AND" => Ok(GateOp::And),
            "OR" => Ok(GateOp::Or),
            other => Err(invalid(format!("unknown gate op {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub op: GateOp,
    pub a: WireId,
    pub b: WireId,
}

/// First structural problem found by [`MonotoneCircuit::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Gate `gate` (0-based position in the gate list) references a wire that
    /// is not created before it.
    ForwardReference { gate: usize, wire: WireId },
    NoOutputs,
    DanglingOutput { position: usize, wire: WireId },
    EmptyVertexSet,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ForwardReference { gate, wire } => {
                write!(f, "gate {gate} references wire {wire} which does not precede it")
            }
            Violation::NoOutputs => write!(f, "circuit declares no outputs"),
            Violation::DanglingOutput { position, wire } => {
                write!(f, "output {position} references missing wire {wire}")
            }
            Violation::EmptyVertexSet => write!(f, "circuit has zero vertices"),
        }
    }
}

/// An append-only DAG of AND/OR gates over the edge variables of an
/// `n`-vertex graph plus one constant-zero wire.
#[derive(Clone, PartialEq, Eq)]
pub struct MonotoneCircuit {
    num_vertices: usize,
    gates: Vec<Gate>,
    outputs: Vec<WireId>,
}

impl MonotoneCircuit {
    pub fn new(num_vertices: usize) -> Result<Self> {
        if num_vertices == 0 {
            return Err(invalid("circuit needs at least one vertex"));
        }
        Ok(Self {
            num_vertices,
            gates: Vec::new(),
            outputs: Vec::new(),
        })
    }

    /// Assembles a circuit without any checking. Use [`validate`](Self::validate)
    /// before trusting the result.
    pub fn from_raw_parts(num_vertices: usize, gates: Vec<Gate>, outputs: Vec<WireId>) -> Self {
        Self {
            num_vertices,
            gates,
            outputs,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_inputs(&self) -> usize {
        self.num_vertices * self.num_vertices
    }

    pub fn num_wires(&self) -> usize {
        self.num_inputs() + 1 + self.gates.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn outputs(&self) -> &[WireId] {
        &self.outputs
    }

    /// Input wire for the edge variable `g_ij`, 1-based.
    #[inline]
    pub fn input(&self, i: usize, j: usize) -> WireId {
        assert!(
            (1..=self.num_vertices).contains(&i) && (1..=self.num_vertices).contains(&j),
            "input ({i},{j}) outside 1..={}",
            self.num_vertices
        );
        WireId::new((i - 1) * self.num_vertices + (j - 1))
    }

    #[inline]
    pub fn zero(&self) -> WireId {
        WireId::new(self.num_inputs())
    }

    fn first_gate_wire(&self) -> usize {
        self.num_inputs() + 1
    }

    fn check_wire(&self, w: WireId) -> Result<()> {
        if w.index() < self.num_wires() {
            Ok(())
        } else {
            Err(Error::InvalidReference {
                wire: w.index(),
                num_wires: self.num_wires(),
            })
        }
    }

    pub fn add_gate(&mut self, op: GateOp, a: WireId, b: WireId) -> Result<WireId> {
        self.check_wire(a)?;
        self.check_wire(b)?;
        let out = WireId::new(self.num_wires());
        self.gates.push(Gate { op, a, b });
        Ok(out)
    }

    // Internal fast path for builders whose operands are known to exist.
    #[inline]
    pub(crate) fn push_gate(&mut self, op: GateOp, a: WireId, b: WireId) -> WireId {
        debug_assert!(a.index() < self.num_wires() && b.index() < self.num_wires());
        let out = WireId::new(self.num_wires());
        self.gates.push(Gate { op, a, b });
        out
    }

    pub fn and(&mut self, a: WireId, b: WireId) -> Result<WireId> {
        self.add_gate(GateOp::And, a, b)
    }

    pub fn or(&mut self, a: WireId, b: WireId) -> Result<WireId> {
        self.add_gate(GateOp::Or, a, b)
    }

    pub fn add_output(&mut self, w: WireId) -> Result<()> {
        self.check_wire(w)?;
        self.outputs.push(w);
        Ok(())
    }

    pub fn set_outputs(&mut self, outputs: Vec<WireId>) -> Result<()> {
        for &w in &outputs {
            self.check_wire(w)?;
        }
        self.outputs = outputs;
        Ok(())
    }

    /// Balanced OR over `wires`, adding exactly `ceil(log2 k)` levels.
    ///
    /// Wires are paired left to right level by level; an odd trailing wire
    /// is carried up unchanged. The first two wires therefore always sit at
    /// full depth.
    pub fn or_tree(&mut self, wires: &[WireId]) -> Result<WireId> {
        self.reduce_tree(GateOp::Or, wires)
    }

    fn reduce_tree(&mut self, op: GateOp, wires: &[WireId]) -> Result<WireId> {
        if wires.is_empty() {
            return Err(invalid("or_tree needs at least one wire"));
        }
        for &w in wires {
            self.check_wire(w)?;
        }
        let mut level = wires.to_vec();
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        while level.len() > 1 {
            next.clear();
            for pair in level.chunks(2) {
                next.push(match *pair {
                    [a, b] => self.push_gate(op, a, b),
                    [a] => a,
                    _ => unreachable!(),
                });
            }
            std::mem::swap(&mut level, &mut next);
        }
        Ok(level[0])
    }

    /// Wire matrix holding the circuit's own input variables.
    pub fn input_matrix(&self) -> WireMatrix {
        let n = self.num_vertices;
        WireMatrix::from_fn(n, |i, j| self.input(i, j))
    }

    /// Boolean matrix product: entry `(i, j)` is `OR_k (A_ik AND B_kj)`.
    ///
    /// Adds exactly `1 + ceil(log2 n)` levels on top of uniformly deep operands.
    pub fn matrix_product(&mut self, a: &WireMatrix, b: &WireMatrix) -> Result<WireMatrix> {
        if a.n != b.n {
            return Err(invalid(format!(
                "matrix dimensions differ: {} vs {}",
                a.n, b.n
            )));
        }
        for &w in a.entries.iter().chain(&b.entries) {
            self.check_wire(w)?;
        }
        let n = a.n;
        let mut entries = Vec::with_capacity(n * n);
        let mut terms = Vec::with_capacity(n);
        for i in 1..=n {
            for j in 1..=n {
                terms.clear();
                for k in 1..=n {
                    terms.push(self.push_gate(GateOp::And, a.get(i, k), b.get(k, j)));
                }
                entries.push(self.reduce_tree(GateOp::Or, &terms)?);
            }
        }
        Ok(WireMatrix { n, entries })
    }

    /// Appends a copy of `inner`'s gates, feeding its input `(i, j)` from
    /// `input_map(i, j)` and its zero wire from this circuit's zero wire.
    /// Returns the wires carrying `inner`'s outputs.
    pub fn append_clone<F>(&mut self, inner: &MonotoneCircuit, mut input_map: F) -> Result<Vec<WireId>>
    where
        F: FnMut(usize, usize) -> WireId,
    {
        let m = inner.num_vertices;
        let mut map = Vec::with_capacity(inner.num_wires());
        for i in 1..=m {
            for j in 1..=m {
                let w = input_map(i, j);
                self.check_wire(w)?;
                map.push(w);
            }
        }
        map.push(self.zero());
        self.gates.reserve(inner.gates.len());
        for g in &inner.gates {
            let w = self.push_gate(g.op, map[g.a.index()], map[g.b.index()]);
            map.push(w);
        }
        Ok(inner.outputs.iter().map(|w| map[w.index()]).collect())
    }

    /// Depth of every wire: inputs and the zero wire have depth 0, a gate is
    /// one more than its deeper operand.
    pub fn wire_depths(&self) -> Vec<u32> {
        let mut depth = vec![0u32; self.num_wires()];
        let base = self.first_gate_wire();
        for (k, g) in self.gates.iter().enumerate() {
            depth[base + k] = 1 + depth[g.a.index()].max(depth[g.b.index()]);
        }
        depth
    }

    /// Longest input-to-output path, counted in gates.
    pub fn measure_depth(&self) -> usize {
        let depth = self.wire_depths();
        self.outputs
            .iter()
            .map(|w| depth[w.index()] as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        if self.num_vertices == 0 {
            return Err(Violation::EmptyVertexSet);
        }
        let base = self.first_gate_wire();
        for (k, g) in self.gates.iter().enumerate() {
            for w in [g.a, g.b] {
                if w.index() >= base + k {
                    return Err(Violation::ForwardReference { gate: k, wire: w });
                }
            }
        }
        if self.outputs.is_empty() {
            return Err(Violation::NoOutputs);
        }
        for (position, &wire) in self.outputs.iter().enumerate() {
            if wire.index() >= self.num_wires() {
                return Err(Violation::DanglingOutput { position, wire });
            }
        }
        Ok(())
    }

    fn check_dimension(&self, matrix: &AdjacencyMatrix) -> Result<()> {
        if matrix.n() != self.num_vertices {
            return Err(invalid(format!(
                "graph has {} vertices, circuit expects {}",
                matrix.n(),
                self.num_vertices
            )));
        }
        Ok(())
    }

    fn single_output(&self) -> Result<WireId> {
        match self.outputs.as_slice() {
            [w] => Ok(*w),
            other => Err(invalid(format!(
                "expected exactly one output, circuit has {}",
                other.len()
            ))),
        }
    }

    /// Values of all outputs under `g_ij := matrix(i, j)`.
    pub fn evaluate_all(&self, matrix: &AdjacencyMatrix) -> Result<Vec<bool>> {
        self.check_dimension(matrix)?;
        let mut vals = Vec::with_capacity(self.num_wires());
        vals.extend_from_slice(matrix.row_major());
        vals.push(false);
        for g in &self.gates {
            let v = g.op.apply(vals[g.a.index()], vals[g.b.index()]);
            vals.push(v);
        }
        Ok(self.outputs.iter().map(|w| vals[w.index()]).collect())
    }

    /// Value of the single output.
    pub fn evaluate(&self, matrix: &AdjacencyMatrix) -> Result<bool> {
        self.single_output()?;
        Ok(self.evaluate_all(matrix)?[0])
    }

    /// Evaluates the single output on many graphs, 64 graphs per machine word.
    pub fn evaluate_many(&self, graphs: &[AdjacencyMatrix]) -> Result<Vec<bool>> {
        let out = self.single_output()?;
        for g in graphs {
            self.check_dimension(g)?;
        }
        let mut evaluator = BatchEvaluator::new(self);
        let mut result = Vec::with_capacity(graphs.len());
        for chunk in graphs.chunks(64) {
            let word = evaluator.run(chunk)[out.index()];
            result.extend((0..chunk.len()).map(|lane| (word >> lane) & 1 == 1));
        }
        Ok(result)
    }

    /// Serializes in the `MCIRC` text format.
    pub fn to_text(&self) -> String {
        use fmt::Write;
        let mut out = String::with_capacity(16 * (self.gates.len() + 2));
        let _ = writeln!(out, "MCIRC 1 {}", self.num_vertices);
        for g in &self.gates {
            let _ = writeln!(out, "G {} {} {}", g.op.as_str(), g.a, g.b);
        }
        out.push_str("OUT");
        for w in &self.outputs {
            let _ = write!(out, " {w}");
        }
        out.push('\n');
        out
    }

    /// Parses the `MCIRC` text format and validates the result.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty circuit file"))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let num_vertices = match head.as_slice() {
            ["MCIRC", "1", n] => n
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| parse_err(1, "invalid vertex count"))?,
            _ => return Err(parse_err(1, "expected `MCIRC 1 <n>` header")),
        };
        let mut circuit = MonotoneCircuit::new(num_vertices)?;
        let mut saw_out = false;
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            if saw_out {
                return Err(parse_err(lineno, "content after OUT line"));
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let wire = |t: &str| -> Result<WireId> {
                t.parse::<usize>()
                    .map(WireId::new)
                    .map_err(|_| parse_err(lineno, format!("invalid wire {t:?}")))
            };
            match tokens.as_slice() {
                ["G", op, a, b] => {
                    let op: GateOp = op.parse().map_err(|_| parse_err(lineno, format!("unknown op {op:?}")))?;
                    let (a, b) = (wire(a)?, wire(b)?);
                    circuit
                        .add_gate(op, a, b)
                        .map_err(|e| parse_err(lineno, e.to_string()))?;
                }
                ["G", ..] => return Err(parse_err(lineno, "gate lines need exactly two operands")),
                ["OUT", rest @ ..] => {
                    let outs = rest.iter().map(|t| wire(t)).collect::<Result<Vec<_>>>()?;
                    circuit
                        .set_outputs(outs)
                        .map_err(|e| parse_err(lineno, e.to_string()))?;
                    saw_out = true;
                }
                _ => return Err(parse_err(lineno, format!("unrecognized line {line:?}"))),
            }
        }
        if !saw_out {
            return Err(parse_err(text.lines().count() + 1, "missing OUT line"));
        }
        circuit
            .validate()
            .map_err(|v| parse_err(0, v.to_string()))?;
        Ok(circuit)
    }
}

impl fmt::Debug for MonotoneCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneCircuit")
            .field("num_vertices", &self.num_vertices)
            .field("gates", &self.gates.len())
            .field("outputs", &self.outputs)
            .finish()
    }
}

impl FromStr for MonotoneCircuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Bit-parallel evaluator reusing one wire buffer across batches of up to 64
/// graphs; lane `k` of every word belongs to graph `k` of the batch.
pub struct BatchEvaluator<'c> {
    circuit: &'c MonotoneCircuit,
    vals: Vec<u64>,
}

impl<'c> BatchEvaluator<'c> {
    pub fn new(circuit: &'c MonotoneCircuit) -> Self {
        Self {
            circuit,
            vals: vec![0; circuit.num_wires()],
        }
    }

    /// Evaluates every wire on `graphs` (at most 64, all of the circuit's
    /// dimension) and returns the per-wire lane words.
    pub fn run(&mut self, graphs: &[AdjacencyMatrix]) -> &[u64] {
        assert!(graphs.len() <= 64, "at most 64 graphs per batch");
        let c = self.circuit;
        let inputs = c.num_inputs();
        let vals = &mut self.vals;
        vals[..=inputs].fill(0);
        for (lane, g) in graphs.iter().enumerate() {
            debug_assert_eq!(g.n(), c.num_vertices);
            for (pos, &bit) in g.row_major().iter().enumerate() {
                vals[pos] |= (bit as u64) << lane;
            }
        }
        let base = inputs + 1;
        for (k, g) in c.gates.iter().enumerate() {
            let a = vals[g.a.index()];
            let b = vals[g.b.index()];
            vals[base + k] = match g.op {
                GateOp::And => a & b,
                GateOp::Or => a | b,
            };
        }
        vals
    }
}

/// An `n x n` matrix of wires of one circuit, indexed 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WireMatrix {
    n: usize,
    entries: Vec<WireId>,
}

impl WireMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> WireId) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                entries.push(f(i, j));
            }
        }
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> WireId {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[WireId] {
        &self.entries
    }
}
