//! Directed graphs on vertices `1..=n`, stored as boolean adjacency matrices.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, parse_err, Error, Result};

/// `n x n` adjacency matrix; entry `(i, j)` set means an edge `i -> j`.
///
/// Vertex labels are 1-based. Entries are stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AdjacencyMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl AdjacencyMatrix {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("graph must have at least one vertex"));
        }
        Ok(Self {
            n,
            bits: vec![false; n * n],
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut m = Self::new(n)?;
        m.bits.fill(true);
        Ok(m)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut m = Self::new(n)?;
        for &(i, j) in edges {
            m.check_vertex(i)?;
            m.check_vertex(j)?;
            m.set(i, j, true);
        }
        Ok(m)
    }

    /// Builds a matrix from `n*n` row-major entries.
    pub fn from_row_major(n: usize, bits: Vec<bool>) -> Result<Self> {
        if n == 0 || bits.len() != n * n {
            return Err(invalid(format!(
                "expected {} entries for n={n}, got {}",
                n * n,
                bits.len()
            )));
        }
        Ok(Self { n, bits })
    }

    /// The `index`-th matrix in lexicographic order of the row-major bit string
    /// `g11 g12 ... gnn`, where `g11` is the most significant bit.
    pub fn from_lex_index(n: usize, index: u64) -> Self {
        let total = n * n;
        debug_assert!(total <= 64);
        let bits = (0..total)
            .map(|pos| (index >> (total - 1 - pos)) & 1 == 1)
            .collect();
        Self { n, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)` with 1-based indices.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[(i - 1) * self.n + (j - 1)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.bits[(i - 1) * self.n + (j - 1)] = value;
    }

    /// Row-major entries, position `(i-1)*n + (j-1)`.
    pub fn row_major(&self) -> &[bool] {
        &self.bits
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Entrywise OR of two matrices of the same size.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(invalid("matrix dimensions differ"));
        }
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| *a || *b)
            .collect();
        Ok(Self { n: self.n, bits })
    }

    /// True when every edge of `self` is also an edge of `other`.
    pub fn is_subgraph_of(&self, other: &Self) -> bool {
        self.n == other.n && self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            Err(invalid(format!("vertex {v} outside 1..={}", self.n)))
        } else {
            Ok(())
        }
    }

    /// Serializes in the `GRAPH` text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("GRAPH {}\n", self.n);
        for row in self.bits.chunks(self.n) {
            out.extend(row.iter().map(|&b| if b { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or_else(|| parse_err(1, "empty graph file"))?;
        let mut tokens = header.split_whitespace();
        if tokens.next() != Some("GRAPH") {
            return Err(parse_err(1, "expected `GRAPH <n>` header"));
        }
        let n: usize = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| parse_err(1, "missing or invalid vertex count"))?;
        if tokens.next().is_some() {
            return Err(parse_err(1, "trailing tokens after vertex count"));
        }
        let mut bits = Vec::with_capacity(n * n);
        let mut rows = 0;
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if rows == n {
                return Err(parse_err(idx + 1, "more rows than vertices"));
            }
            if line.len() != n {
                return Err(parse_err(idx + 1, format!("row must have {n} characters")));
            }
            for c in line.chars() {
                match c {
                    '0' => bits.push(false),
                    '1' => bits.push(true),
                    _ => return Err(parse_err(idx + 1, format!("unexpected character {c:?}"))),
                }
            }
            rows += 1;
        }
        if rows != n {
            return Err(parse_err(n + 1, format!("expected {n} rows, found {rows}")));
        }
        Ok(Self { n, bits })
    }
}

impl FromStr for AdjacencyMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Debug for AdjacencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let g = AdjacencyMatrix::from_edges(3, &[(1, 2), (2, 3), (3, 3)]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "GRAPH 3\n010\n001\n001\n");
        assert_eq!(AdjacencyMatrix::parse(&text).unwrap(), g);
    }

    #[test]
    fn parse_rejects_bad_rows() {
        assert!(AdjacencyMatrix::parse("GRAPH 2\n01\n").is_err());
        assert!(AdjacencyMatrix::parse("GRAPH 2\n012\n00\n").is_err());
        assert!(AdjacencyMatrix::parse("GRAPH 2\n02\n00\n").is_err());
        assert!(AdjacencyMatrix::parse("GRAF 2\n01\n00\n").is_err());
        assert!(AdjacencyMatrix::parse("GRAPH 0\n").is_err());
    }

    #[test]
    fn lex_order_puts_g11_first() {
        let g = AdjacencyMatrix::from_lex_index(2, 0b1000);
        assert!(g.get(1, 1));
        assert_eq!(g.edge_count(), 1);
        let g = AdjacencyMatrix::from_lex_index(2, 0b0001);
        assert!(g.get(2, 2));
    }

    #[test]
    fn out_of_range_edge_rejected() {
        assert!(AdjacencyMatrix::from_edges(2, &[(1, 3)]).is_err());
        assert!(AdjacencyMatrix::new(0).is_err());
    }
}
