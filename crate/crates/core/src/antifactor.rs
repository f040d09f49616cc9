//! Spanning subgraphs `H` with `d_H(u) = 1` for every `u in U` and
//! `d_H(v) != alpha(v) (mod q)` for every `v in V`.
//!
//! Such an `H` is a choice of one neighbour per `U`-vertex. [`find`] searches
//! those choices directly; [`find_via_polynomial`] reads one off a point
//! where the polynomial of [`crate::nullpoly`] does not vanish.

use rayon::prelude::*;

use crate::coloring::{edge_color, EdgeColoring};
use crate::gf::FieldCtx;
use crate::graph::BipartiteMultigraph;
use crate::nullpoly::{build_f, nonvanishing_witness, ColorAssignment};
use crate::{Error, Result};

/// Forbidden residue `alpha(v) in 0..q` for each `V`-vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaAssignment {
    values: Vec<u32>,
}

impl AlphaAssignment {
    pub fn new(values: Vec<u32>, q: u32) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&a| a >= q) {
            return Err(Error::InvalidArgument(format!(
                "alpha value {bad} is not in 0..{q}"
            )));
        }
        Ok(AlphaAssignment { values })
    }

    pub fn constant(k: u32, n_v: usize, q: u32) -> Result<Self> {
        Self::new(vec![k; n_v], q)
    }

    pub fn get(&self, v: usize) -> u32 {
        self.values[v]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn check_shape(&self, n_v: usize, q: u32) -> Result<()> {
        if self.values.len() != n_v {
            return Err(Error::Shape(format!(
                "alpha has {} values for {n_v} V-vertices",
                self.values.len()
            )));
        }
        if self.values.iter().any(|&a| a >= q) {
            return Err(Error::InvalidArgument(format!("alpha values must lie in 0..{q}")));
        }
        Ok(())
    }
}

/// The chosen neighbour of every `U`-vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneFactorChoice {
    choice: Vec<usize>,
}

impl OneFactorChoice {
    pub fn new(choice: Vec<usize>) -> Self {
        OneFactorChoice { choice }
    }

    pub fn choice(&self) -> &[usize] {
        &self.choice
    }

    pub fn neighbour(&self, u: usize) -> usize {
        self.choice[u]
    }

    /// `d_H(v)` for every `v in 0..n_v`.
    pub fn degrees(&self, n_v: usize) -> Vec<u64> {
        let mut d = vec![0; n_v];
        for &v in &self.choice {
            d[v] += 1;
        }
        d
    }

    /// Number of edge sets realising this choice: the product of the chosen
    /// multiplicities.
    pub fn realisations(&self, g: &BipartiteMultigraph) -> u64 {
        self.choice
            .iter()
            .enumerate()
            .map(|(u, &v)| g.mult(u, v))
            .product()
    }
}

fn check_choice(g: &BipartiteMultigraph, h: &OneFactorChoice) -> Result<()> {
    if h.choice.len() != g.n_u() {
        return Err(Error::Shape(format!(
            "choice has {} entries for {} U-vertices",
            h.choice.len(),
            g.n_u()
        )));
    }
    for (u, &v) in h.choice.iter().enumerate() {
        if v >= g.n_v() || g.mult(u, v) == 0 {
            return Err(Error::InvalidArgument(format!(
                "invalid choice: U-vertex {} has no edge to V-vertex {}",
                u + 1,
                v + 1
            )));
        }
    }
    Ok(())
}

/// True iff `d_H(v) mod q != alpha(v)` for every `v`.
pub fn verify(g: &BipartiteMultigraph, alpha: &AlphaAssignment, h: &OneFactorChoice, q: u32) -> Result<bool> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    alpha.check_shape(g.n_v(), q)?;
    check_choice(g, h)?;
    Ok(h
        .degrees(g.n_v())
        .iter()
        .zip(alpha.values())
        .all(|(&d, &a)| d % q as u64 != a as u64))
}

/// Backtracking search state. `remaining[v]` counts undecided `U`-vertices
/// adjacent to `v`.
#[derive(Clone)]
struct Search<'a> {
    q: u64,
    alpha: &'a [u32],
    order: &'a [usize],
    nbrs: &'a [Vec<usize>],
    deg: Vec<u64>,
    remaining: Vec<u64>,
    choice: Vec<usize>,
}

impl Search<'_> {
    fn settled_ok(&self, v: usize) -> bool {
        self.remaining[v] > 0 || self.deg[v] % self.q != self.alpha[v] as u64
    }

    /// Assigns `u -> v`; returns false when some now-settled vertex fails.
    fn assign(&mut self, u: usize, v: usize) -> bool {
        self.choice[u] = v;
        self.deg[v] += 1;
        for &w in &self.nbrs[u] {
            self.remaining[w] -= 1;
        }
        self.nbrs[u].iter().all(|&w| self.settled_ok(w))
    }

    fn unassign(&mut self, u: usize, v: usize) {
        self.deg[v] -= 1;
        for &w in &self.nbrs[u] {
            self.remaining[w] += 1;
        }
    }

    fn solve(&mut self, depth: usize) -> bool {
        let Some(&u) = self.order.get(depth) else {
            return true;
        };
        for i in 0..self.nbrs[u].len() {
            let v = self.nbrs[u][i];
            if self.assign(u, v) && self.solve(depth + 1) {
                return true;
            }
            self.unassign(u, v);
        }
        false
    }
}

/// Exhaustive search for `H`. The theorem guarantees success when `q` is a
/// prime power, the graph is `q`-regular and `pm(G) != 0 (mod q)`; the
/// search itself needs none of that.
///
/// Top-level branches run on the current rayon pool; the first solution in
/// sequential order wins, so the result does not depend on the pool size.
pub fn find(g: &BipartiteMultigraph, alpha: &AlphaAssignment, q: u32) -> Result<Option<OneFactorChoice>> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    alpha.check_shape(g.n_v(), q)?;
    let n_u = g.n_u();
    let nbrs: Vec<Vec<usize>> = (0..n_u).map(|u| g.neighbours_u(u).collect()).collect();
    let mut order: Vec<usize> = (0..n_u).collect();
    order.sort_by_key(|&u| (std::cmp::Reverse(nbrs[u].len()), u));

    let mut remaining = vec![0u64; g.n_v()];
    for ns in &nbrs {
        for &v in ns {
            remaining[v] += 1;
        }
    }
    let root = Search {
        q: q as u64,
        alpha: alpha.values(),
        order: &order,
        nbrs: &nbrs,
        deg: vec![0; g.n_v()],
        remaining,
        choice: vec![usize::MAX; n_u],
    };
    if !(0..g.n_v()).all(|v| root.settled_ok(v)) {
        return Ok(None);
    }
    let Some(&first) = order.first() else {
        return Ok(Some(OneFactorChoice::new(Vec::new())));
    };
    let found = nbrs[first].par_iter().find_map_first(|&v| {
        let mut s = root.clone();
        (s.assign(first, v) && s.solve(1)).then_some(s.choice)
    });
    Ok(found.map(OneFactorChoice::new))
}

/// The neighbour choice encoded by a color assignment: each `u` takes its
/// edge of color `x_u`.
pub fn choice_from_assignment(coloring: &EdgeColoring, point: &ColorAssignment) -> Option<OneFactorChoice> {
    point
        .iter()
        .enumerate()
        .map(|(u, &c)| coloring.neighbour_with_color(u, c))
        .collect::<Option<Vec<_>>>()
        .map(OneFactorChoice::new)
}

/// Colors the graph, expands the polynomial, scans `GF(q)^n` for a point
/// where it does not vanish and follows the colors at that point.
pub fn find_via_polynomial(
    g: &BipartiteMultigraph,
    alpha: &AlphaAssignment,
    field: &FieldCtx,
) -> Result<Option<OneFactorChoice>> {
    let coloring = edge_color(g, field)?;
    let f = build_f(g, &coloring, alpha, field)?;
    let Some(point) = nonvanishing_witness(&f)? else {
        return Ok(None);
    };
    let h = choice_from_assignment(&coloring, &point).expect("complete coloring");
    debug_assert!(verify(g, alpha, &h, field.order()).unwrap_or(false));
    Ok(Some(h))
}
