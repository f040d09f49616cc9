//! Bipartite multigraphs stored as dense multiplicity matrices, and the BMG
//! text format.
//!
//! BMG is line oriented:
//!
//! ```text
//! # comment
//! bmg <n_u> <n_v>
//! e <u> <v> <mult>
//! ```
//!
//! The header appears exactly once, as the first line that is neither blank
//! nor a comment. Vertices are 1-indexed in the file and 0-indexed in memory.
//! Repeated `e` lines for the same pair add up.

use std::collections::VecDeque;
use std::fmt;

use crate::{Error, Result};

/// Bipartite multigraph with parts `U = {0..n_u}` and `V = {0..n_v}`.
///
/// `mult(u, v)` is the number of parallel `u`-`v` edges. The value is
/// immutable once built; degrees are cached at construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BipartiteMultigraph {
    n_u: usize,
    n_v: usize,
    mult: Vec<u64>,
    deg_u: Vec<u64>,
    deg_v: Vec<u64>,
}

/// One parallel copy of the edge `u`-`v`; `copy < mult(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeInstance {
    pub u: usize,
    pub v: usize,
    pub copy: u64,
}

impl BipartiteMultigraph {
    /// Builds a graph from a row-major `n_u * n_v` multiplicity vector.
    pub fn new(n_u: usize, n_v: usize, mult: Vec<u64>) -> Result<Self> {
        if mult.len() != n_u * n_v {
            return Err(Error::Shape(format!(
                "expected {} multiplicities for a {n_u} x {n_v} graph, got {}",
                n_u * n_v,
                mult.len()
            )));
        }
        let overflow = || Error::InvalidArgument("total multiplicity overflows u64".into());
        let mut deg_u = vec![0u64; n_u];
        let mut deg_v = vec![0u64; n_v];
        let mut total = 0u64;
        for u in 0..n_u {
            for v in 0..n_v {
                let m = mult[u * n_v + v];
                total = total.checked_add(m).ok_or_else(overflow)?;
                deg_u[u] += m;
                deg_v[v] += m;
            }
        }
        Ok(BipartiteMultigraph {
            n_u,
            n_v,
            mult,
            deg_u,
            deg_v,
        })
    }

    /// Builds a graph from explicit rows. All rows must have equal length.
    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R]) -> Result<Self> {
        let n_u = rows.len();
        let n_v = rows.first().map_or(0, |r| r.as_ref().len());
        let mut mult = Vec::with_capacity(n_u * n_v);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n_v {
                return Err(Error::Shape(format!(
                    "row {i} has length {}, expected {n_v}",
                    r.len()
                )));
            }
            mult.extend_from_slice(r);
        }
        Self::new(n_u, n_v, mult)
    }

    pub fn n_u(&self) -> usize {
        self.n_u
    }

    pub fn n_v(&self) -> usize {
        self.n_v
    }

    pub fn is_square(&self) -> bool {
        self.n_u == self.n_v
    }

    /// Multiplicity of the pair `(u, v)`. Panics when out of range.
    #[inline]
    pub fn mult(&self, u: usize, v: usize) -> u64 {
        assert!(u < self.n_u && v < self.n_v, "vertex index out of range");
        self.mult[u * self.n_v + v]
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.mult[u * self.n_v..(u + 1) * self.n_v]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> + '_ {
        (0..self.n_u).map(move |u| self.row(u))
    }

    /// Row-major multiplicity matrix.
    pub fn matrix(&self) -> &[u64] {
        &self.mult
    }

    pub fn degree_u(&self, u: usize) -> Result<u64> {
        self.deg_u.get(u).copied().ok_or(Error::IndexOutOfRange {
            what: "U",
            index: u,
            len: self.n_u,
        })
    }

    pub fn degree_v(&self, v: usize) -> Result<u64> {
        self.deg_v.get(v).copied().ok_or(Error::IndexOutOfRange {
            what: "V",
            index: v,
            len: self.n_v,
        })
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.deg_u.iter().sum()
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.mult.iter().copied().max().unwrap_or(0)
    }

    /// No parallel edges.
    pub fn is_simple(&self) -> bool {
        self.mult.iter().all(|&m| m <= 1)
    }

    /// Returns `q` when every vertex on both sides has degree exactly `q >= 1`.
    pub fn regularity(&self) -> Option<u64> {
        if !self.is_square() || self.n_u == 0 {
            return None;
        }
        let q = self.deg_u[0];
        if q == 0 {
            return None;
        }
        let regular = self.deg_u.iter().chain(&self.deg_v).all(|&d| d == q);
        regular.then_some(q)
    }

    pub fn is_regular_of_degree(&self, q: u64) -> bool {
        self.regularity() == Some(q)
    }

    /// Connectivity of the support on `U ∪ V`. The graph with no vertices
    /// counts as connected.
    pub fn is_connected(&self) -> bool {
        let total = self.n_u + self.n_v;
        if total == 0 {
            return true;
        }
        // U-vertices are 0..n_u, V-vertices are n_u..n_u+n_v
        let mut seen = vec![false; total];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            let neighbours: Vec<usize> = if x < self.n_u {
                (0..self.n_v)
                    .filter(|&v| self.mult(x, v) > 0)
                    .map(|v| self.n_u + v)
                    .collect()
            } else {
                let v = x - self.n_u;
                (0..self.n_u).filter(|&u| self.mult(u, v) > 0).collect()
            };
            for y in neighbours {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        reached == total
    }

    /// Distinct neighbours of `u`, increasing.
    pub fn neighbours_u(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u)
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(v, _)| v)
    }

    /// Every parallel edge copy, row-major.
    pub fn edge_instances(&self) -> impl Iterator<Item = EdgeInstance> + '_ {
        (0..self.n_u).flat_map(move |u| {
            (0..self.n_v)
                .flat_map(move |v| (0..self.mult(u, v)).map(move |copy| EdgeInstance { u, v, copy }))
        })
    }

    /// Parses the BMG text format.
    pub fn parse_bmg(text: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse { line, msg };
        let mut header: Option<(usize, usize)> = None;
        let mut mult: Vec<u64> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match (tokens[0], header) {
                ("bmg", None) => {
                    if tokens.len() != 3 {
                        return Err(err(line_no, "malformed header, expected `bmg <n_u> <n_v>`".into()));
                    }
                    let n_u = parse_count(tokens[1]).map_err(|m| err(line_no, format!("malformed header: {m}")))?;
                    let n_v = parse_count(tokens[2]).map_err(|m| err(line_no, format!("malformed header: {m}")))?;
                    let cells = n_u
                        .checked_mul(n_v)
                        .filter(|&c| c <= 1 << 24)
                        .ok_or_else(|| err(line_no, "malformed header: graph too large".into()))?;
                    mult = vec![0; cells];
                    header = Some((n_u, n_v));
                }
                ("bmg", Some(_)) => return Err(err(line_no, "duplicate header".into())),
                (_, None) => {
                    return Err(err(line_no, "malformed header, expected `bmg <n_u> <n_v>` first".into()))
                }
                ("e", Some((n_u, n_v))) => {
                    if tokens.len() != 4 {
                        return Err(err(line_no, "malformed edge line, expected `e <u> <v> <mult>`".into()));
                    }
                    let u = parse_index(tokens[1], n_u).map_err(|m| err(line_no, format!("U-index {m}")))?;
                    let v = parse_index(tokens[2], n_v).map_err(|m| err(line_no, format!("V-index {m}")))?;
                    let m = parse_multiplicity(tokens[3]).map_err(|m| err(line_no, m))?;
                    let cell = &mut mult[u * n_v + v];
                    *cell = cell
                        .checked_add(m)
                        .ok_or_else(|| err(line_no, "multiplicity overflows u64".into()))?;
                }
                (other, Some(_)) => return Err(err(line_no, format!("unknown line type `{other}`"))),
            }
        }

        let (n_u, n_v) = header.ok_or_else(|| err(text.lines().count().max(1), "missing header".into()))?;
        Self::new(n_u, n_v, mult).map_err(|e| err(0, e.to_string()))
    }

    /// Canonical BMG serialization: header, then nonzero cells row-major.
    pub fn to_bmg(&self) -> String {
        let mut out = format!("bmg {} {}\n", self.n_u, self.n_v);
        for u in 0..self.n_u {
            for v in 0..self.n_v {
                let m = self.mult(u, v);
                if m > 0 {
                    out.push_str(&format!("e {} {} {}\n", u + 1, v + 1, m));
                }
            }
        }
        out
    }
}

fn parse_count(tok: &str) -> std::result::Result<usize, String> {
    tok.parse::<usize>()
        .map_err(|_| format!("`{tok}` is not a nonnegative integer"))
}

fn parse_index(tok: &str, len: usize) -> std::result::Result<usize, String> {
    let i: i64 = tok
        .parse()
        .map_err(|_| format!("`{tok}` is not an integer"))?;
    if i < 1 || i as u64 > len as u64 {
        return Err(format!("out of range: {i} not in 1..={len}"));
    }
    Ok(i as usize - 1)
}

fn parse_multiplicity(tok: &str) -> std::result::Result<u64, String> {
    if let Some(abs) = tok.strip_prefix('-') {
        return match abs.parse::<u64>() {
            Ok(0) => Ok(0),
            Ok(_) => Err(format!("negative multiplicity {tok}")),
            Err(_) => Err(format!("`{tok}` is not an integer")),
        };
    }
    tok.parse::<u64>().map_err(|e| match e.kind() {
        std::num::IntErrorKind::PosOverflow => format!("multiplicity {tok} overflows u64"),
        _ => format!("`{tok}` is not a nonnegative integer"),
    })
}

impl fmt::Debug for BipartiteMultigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[u64]> = self.rows().collect();
        f.debug_struct("BipartiteMultigraph")
            .field("n_u", &self.n_u)
            .field("n_v", &self.n_v)
            .field("mult", &rows)
            .finish()
    }
}
