//! A regular bipartite multigraph is bad when none of its 3-regular spanning
//! subgraphs has a number of perfect matchings indivisible by 3.
//!
//! A good graph carries such a subgraph `G'`, and applying the antifactor
//! search to `G'` with `alpha = 1` gives a one-factor choice in which no
//! `V`-vertex has degree 1. Deciding badness here is plain exhaustive search.

use std::ops::ControlFlow;

use crate::counting::pm_mod;
use crate::graph::BipartiteMultigraph;
use crate::{Error, Result};

pub const MAX_N: usize = 8;
const TARGET: u64 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningSubgraphWitness {
    pub sub: BipartiteMultigraph,
    /// `pm(sub) mod 3`.
    pub residue: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Badness {
    pub bad: bool,
    pub witness: Option<SpanningSubgraphWitness>,
}

fn check_input(g: &BipartiteMultigraph) -> Result<usize> {
    let q = g
        .regularity()
        .ok_or_else(|| Error::InvalidArgument("graph is not regular".into()))?;
    if q < TARGET {
        return Err(Error::InvalidArgument(format!(
            "graph is {q}-regular; a 3-regular spanning subgraph needs degree at least 3"
        )));
    }
    let n = g.n_u();
    if n > MAX_N {
        return Err(Error::CapExceeded {
            what: "n",
            value: n as u64,
            cap: MAX_N as u64,
        });
    }
    Ok(n)
}

/// Calls `visit` on every matrix `0 <= sub <= mult` with all row and column
/// sums equal to 3. Cells are filled row-major, larger values first.
pub fn enumerate_3regular_spanning<F>(g: &BipartiteMultigraph, mut visit: F) -> Result<ControlFlow<()>>
where
    F: FnMut(&BipartiteMultigraph) -> ControlFlow<()>,
{
    let n = check_input(g)?;
    // capacity of column v strictly below row u
    let mut below = vec![0u64; n * n];
    for v in 0..n {
        let mut acc = 0;
        for u in (0..n).rev() {
            below[u * n + v] = acc;
            acc += g.mult(u, v);
        }
    }
    let mut st = Enum {
        g,
        n,
        below,
        sub: vec![0; n * n],
        row_rem: vec![TARGET; n],
        col_rem: vec![TARGET; n],
    };
    Ok(st.cell(0, &mut visit))
}

struct Enum<'a> {
    g: &'a BipartiteMultigraph,
    n: usize,
    below: Vec<u64>,
    sub: Vec<u64>,
    row_rem: Vec<u64>,
    col_rem: Vec<u64>,
}

impl Enum<'_> {
    fn cell<F>(&mut self, idx: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&BipartiteMultigraph) -> ControlFlow<()>,
    {
        let n = self.n;
        if idx == n * n {
            let sub = BipartiteMultigraph::new(n, n, self.sub.clone()).expect("square");
            return visit(&sub);
        }
        let (u, v) = (idx / n, idx % n);
        let hi = self.g.mult(u, v).min(self.row_rem[u]).min(self.col_rem[v]);
        let row_capacity_after: u64 = (v + 1..n)
            .map(|w| self.g.mult(u, w).min(self.col_rem[w]))
            .sum();
        for x in (0..=hi).rev() {
            if self.row_rem[u] - x > row_capacity_after {
                break;
            }
            if self.col_rem[v] - x > self.below[idx] {
                break;
            }
            self.sub[idx] = x;
            self.row_rem[u] -= x;
            self.col_rem[v] -= x;
            let flow = self.cell(idx + 1, visit);
            self.row_rem[u] += x;
            self.col_rem[v] += x;
            self.sub[idx] = 0;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// All 3-regular spanning subgraphs, in enumeration order.
pub fn spanning_3regular_subgraphs(g: &BipartiteMultigraph) -> Result<Vec<BipartiteMultigraph>> {
    let mut out = Vec::new();
    let _ = enumerate_3regular_spanning(g, |s| {
        out.push(s.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Decides badness; a good graph comes with the first witness found.
pub fn is_bad(g: &BipartiteMultigraph) -> Result<Badness> {
    let mut witness = None;
    let _ = enumerate_3regular_spanning(g, |s| {
        let r = pm_mod(s, TARGET).expect("n within cap");
        if r == 0 {
            return ControlFlow::Continue(());
        }
        witness = Some(SpanningSubgraphWitness {
            sub: s.clone(),
            residue: r,
        });
        ControlFlow::Break(())
    })?;
    Ok(Badness {
        bad: witness.is_none(),
        witness,
    })
}
