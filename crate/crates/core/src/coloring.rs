//! Proper `q`-edge-colorings of `q`-regular bipartite multigraphs.
//!
//! Colors are found by peeling: a perfect matching of the residual
//! multigraph gets color `t`, its edge copies are removed, and the residual
//! is again regular of one degree less.

use crate::gf::{FieldCtx, FieldElement};
use crate::graph::BipartiteMultigraph;
use crate::{Error, Result};

/// Color of every parallel edge copy: `colors(u, v)[copy]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    n_u: usize,
    n_v: usize,
    cells: Vec<Vec<FieldElement>>,
}

impl EdgeColoring {
    /// Builds a coloring from explicit per-cell color lists (row-major).
    pub fn from_cells(n_u: usize, n_v: usize, cells: Vec<Vec<FieldElement>>) -> Result<Self> {
        if cells.len() != n_u * n_v {
            return Err(Error::Shape(format!(
                "{} cells for a {n_u} x {n_v} coloring",
                cells.len()
            )));
        }
        Ok(EdgeColoring { n_u, n_v, cells })
    }

    pub fn n_u(&self) -> usize {
        self.n_u
    }

    pub fn n_v(&self) -> usize {
        self.n_v
    }

    pub fn colors(&self, u: usize, v: usize) -> &[FieldElement] {
        &self.cells[u * self.n_v + v]
    }

    pub fn color(&self, u: usize, v: usize, copy: usize) -> FieldElement {
        self.colors(u, v)[copy]
    }

    /// The neighbour of `u` across its edge of color `c`, if any.
    pub fn neighbour_with_color(&self, u: usize, c: FieldElement) -> Option<usize> {
        (0..self.n_v).find(|&v| self.colors(u, v).contains(&c))
    }
}

/// A perfect matching `u -> v` of the support of a square multiplicity
/// matrix, by augmenting paths. Free `U`-vertices are processed in increasing
/// order and neighbours scanned in increasing `v`, so the result is
/// deterministic.
pub fn find_perfect_matching(g: &BipartiteMultigraph) -> Option<Vec<usize>> {
    if !g.is_square() {
        return None;
    }
    matching_on(g.n_u(), g.matrix())
}

fn matching_on(n: usize, mult: &[u64]) -> Option<Vec<usize>> {
    fn augment(u: usize, n: usize, mult: &[u64], seen: &mut [bool], match_v: &mut [Option<usize>]) -> bool {
        for v in 0..n {
            if mult[u * n + v] == 0 || seen[v] {
                continue;
            }
            seen[v] = true;
            let free = match match_v[v] {
                None => true,
                Some(w) => augment(w, n, mult, seen, match_v),
            };
            if free {
                match_v[v] = Some(u);
                return true;
            }
        }
        false
    }

    let mut match_v: Vec<Option<usize>> = vec![None; n];
    for u in 0..n {
        let mut seen = vec![false; n];
        if !augment(u, n, mult, &mut seen, &mut match_v) {
            return None;
        }
    }
    let mut match_u = vec![0; n];
    for (v, u) in match_v.into_iter().enumerate() {
        match_u[u.expect("every U-vertex was matched")] = v;
    }
    Some(match_u)
}

/// Decomposes a `q`-regular multigraph into `q` perfect matchings, in the
/// order they were peeled.
pub fn peel_matchings(g: &BipartiteMultigraph) -> Result<Vec<Vec<usize>>> {
    let q = g.regularity().ok_or_else(|| Error::InvalidArgument("graph is not regular".into()))?;
    let n = g.n_u();
    let mut residual = g.matrix().to_vec();
    let mut out = Vec::with_capacity(q as usize);
    for _ in 0..q {
        // residual is regular of positive degree here, so Hall's condition holds
        let m = matching_on(n, &residual).expect("regular bipartite multigraphs have perfect matchings");
        for (u, &v) in m.iter().enumerate() {
            residual[u * n + v] -= 1;
        }
        out.push(m);
    }
    Ok(out)
}

/// Proper edge coloring of a regular graph with colors `0..q` (integer
/// encodings), `q` being the degree. Works for `q = 1` and for `q` that is
/// not a prime power.
pub fn color_by_peeling(g: &BipartiteMultigraph) -> Result<EdgeColoring> {
    let n = g.n_u();
    let mut cells = vec![Vec::new(); n * n];
    for (t, m) in peel_matchings(g)?.into_iter().enumerate() {
        for (u, v) in m.into_iter().enumerate() {
            cells[u * n + v].push(FieldElement(t as u32));
        }
    }
    EdgeColoring::from_cells(n, n, cells)
}

/// Proper `q`-edge-coloring by field elements, `q` the field order.
pub fn edge_color(g: &BipartiteMultigraph, field: &FieldCtx) -> Result<EdgeColoring> {
    let q = field.order() as u64;
    match g.regularity() {
        Some(d) if d == q => color_by_peeling(g),
        Some(d) => Err(Error::InvalidArgument(format!(
            "graph is {d}-regular but the field has order {q}"
        ))),
        None => Err(Error::NotRegular(q)),
    }
}

/// True iff every edge copy has a color in `0..q` and no two copies at a
/// vertex share a color. For a `q`-regular graph this also means every
/// vertex sees each color exactly once.
pub fn check_coloring(g: &BipartiteMultigraph, coloring: &EdgeColoring, q: u32) -> bool {
    if coloring.n_u() != g.n_u() || coloring.n_v() != g.n_v() {
        return false;
    }
    for u in 0..g.n_u() {
        for v in 0..g.n_v() {
            let c = coloring.colors(u, v);
            if c.len() as u64 != g.mult(u, v) || c.iter().any(|x| x.value() >= q) {
                return false;
            }
        }
    }
    let rows_ok = (0..g.n_u()).all(|u| {
        all_distinct(q, (0..g.n_v()).flat_map(|v| coloring.colors(u, v).iter().copied()))
    });
    let cols_ok = (0..g.n_v()).all(|v| {
        all_distinct(q, (0..g.n_u()).flat_map(|u| coloring.colors(u, v).iter().copied()))
    });
    rows_ok && cols_ok
}

fn all_distinct(q: u32, mut colors: impl Iterator<Item = FieldElement>) -> bool {
    let mut seen = vec![false; q as usize];
    colors.all(|c| !std::mem::replace(&mut seen[c.value() as usize], true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn g(rows: &[&[u64]]) -> BipartiteMultigraph {
        BipartiteMultigraph::from_rows(rows).unwrap()
    }

    fn fe(v: u32) -> FieldElement {
        FieldElement(v)
    }

    #[test]
    fn matching_examples() {
        let id = g(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(find_perfect_matching(&id), Some(vec![0, 1, 2]));
        assert_eq!(find_perfect_matching(&g(&[&[1, 1], &[1, 0]])), Some(vec![1, 0]));
        assert_eq!(find_perfect_matching(&g(&[&[1, 0], &[1, 0]])), None);
        assert_eq!(find_perfect_matching(&g(&[&[1, 1]])), None);
    }

    /// Hall violator by exhaustion: some set of U-vertices with fewer
    /// neighbours than members.
    fn has_hall_violator(n: usize, support: u32) -> bool {
        (1u32..1 << n).any(|set| {
            let mut nbrs = 0u32;
            for u in 0..n {
                if set >> u & 1 == 1 {
                    nbrs |= (support >> (u * n)) & ((1 << n) - 1);
                }
            }
            nbrs.count_ones() < set.count_ones()
        })
    }

    #[test]
    fn matching_exists_iff_no_hall_violator() {
        for n in 1..=4usize {
            for support in 0u32..1 << (n * n) {
                let m: Vec<u64> = (0..n * n).map(|i| (support >> i & 1) as u64).collect();
                let gr = BipartiteMultigraph::new(n, n, m).unwrap();
                let found = find_perfect_matching(&gr);
                assert_eq!(found.is_none(), has_hall_violator(n, support), "n={n} support={support:b}");
                if let Some(mm) = found {
                    let mut used = vec![false; n];
                    for (u, &v) in mm.iter().enumerate() {
                        assert!(gr.mult(u, v) > 0 && !std::mem::replace(&mut used[v], true));
                    }
                }
            }
        }
    }

    #[test]
    fn triple_edge_gets_all_three_colors() {
        let f = FieldCtx::new(3).unwrap();
        let c = edge_color(&g(&[&[3]]), &f).unwrap();
        let mut colors = c.colors(0, 0).to_vec();
        colors.sort();
        assert_eq!(colors, vec![fe(0), fe(1), fe(2)]);
    }

    #[test]
    fn latin_square_coloring_checks() {
        let k33 = gen::complete(3);
        let cells = (0..3)
            .flat_map(|i| (0..3).map(move |j| vec![fe((i + j) % 3)]))
            .collect();
        let latin = EdgeColoring::from_cells(3, 3, cells).unwrap();
        assert!(check_coloring(&k33, &latin, 3));
        let f = FieldCtx::new(3).unwrap();
        assert!(check_coloring(&k33, &edge_color(&k33, &f).unwrap(), 3));
    }

    #[test]
    fn clashing_colors_are_rejected() {
        let t = g(&[&[3]]);
        let bad = EdgeColoring::from_cells(1, 1, vec![vec![fe(0), fe(0), fe(1)]]).unwrap();
        assert!(!check_coloring(&t, &bad, 3));
        let short = EdgeColoring::from_cells(1, 1, vec![vec![fe(0), fe(1)]]).unwrap();
        assert!(!check_coloring(&t, &short, 3));
        let out_of_range = EdgeColoring::from_cells(1, 1, vec![vec![fe(0), fe(1), fe(3)]]).unwrap();
        assert!(!check_coloring(&t, &out_of_range, 3));
    }

    #[test]
    fn doubled_c4_coloring_is_proper_and_complete() {
        let gr = gen::inflated_cycle(4, 3).unwrap();
        let f = FieldCtx::new(3).unwrap();
        let c = edge_color(&gr, &f).unwrap();
        assert!(check_coloring(&gr, &c, 3));
        for u in 0..2 {
            for col in f.elements() {
                assert!(c.neighbour_with_color(u, col).is_some());
            }
        }
    }

    #[test]
    fn edge_color_rejects_wrong_degree() {
        let f = FieldCtx::new(3).unwrap();
        assert!(edge_color(&g(&[&[2]]), &f).is_err());
        assert!(edge_color(&g(&[&[1, 1], &[0, 1]]), &f).is_err());
    }

    #[test]
    fn peeling_leaves_regular_residuals() {
        for seed in 0..50u64 {
            let q = 1 + seed % 5;
            let n = 1 + (seed as usize * 7) % 8;
            let gr = gen::random_permutation_model(n, q, seed);
            let mut residual = gr.matrix().to_vec();
            for (t, m) in peel_matchings(&gr).unwrap().into_iter().enumerate() {
                for (u, v) in m.into_iter().enumerate() {
                    residual[u * n + v] -= 1;
                }
                let r = BipartiteMultigraph::new(n, n, residual.clone()).unwrap();
                let left = q - 1 - t as u64;
                if left == 0 {
                    assert_eq!(r.total_multiplicity(), 0);
                } else {
                    assert_eq!(r.regularity(), Some(left));
                }
            }
        }
    }
}
