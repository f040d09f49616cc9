//! Named graphs and seeded random generators.
//!
//! Randomness comes from SplitMix64 (state initialised to the seed, state
//! increment `0x9e3779b97f4a7c15`). Bounded draws use rejection: draw `x`,
//! reject while `x >= 2^64 - (2^64 mod b)`, return `x mod b`. A uniform
//! permutation of `0..n` is the Fisher–Yates shuffle of the identity,
//! `for i in (1..n).rev() { swap(i, below(i + 1)) }`. These three rules fix
//! every generated graph as a function of the seed.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::graph::BipartiteMultigraph;
use crate::{Error, Result};

pub const ENUMERATION_CAP: usize = 6;

/// Seeded generator used throughout the crate.
pub struct SampleRng(SplitMix64);

impl SampleRng {
    pub fn new(seed: u64) -> Self {
        SampleRng(SplitMix64::from_seed(seed.to_le_bytes()))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `0..bound`, `bound >= 1`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let limit = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < limit {
                return x % bound;
            }
        }
    }

    /// Uniform permutation of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.below(i as u64 + 1) as usize;
            p.swap(i, j);
        }
        p
    }
}

/// Seed of the `index`-th independent sample under a master seed: the master
/// XOR the first SplitMix64 output for state `index`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    master ^ SampleRng::new(index).next_u64()
}

/// The only `q`-regular bipartite multigraph on two vertices: `q` parallel
/// edges.
pub fn k2_multi(q: u64) -> BipartiteMultigraph {
    BipartiteMultigraph::new(1, 1, vec![q]).expect("1 x 1")
}

/// The cycle `u1 v1 u2 v2 ... um vm u1` (`m = len / 2`) where each edge
/// `ui vi` has multiplicity `q - 1` and each edge `vi u(i+1)` multiplicity 1.
pub fn inflated_cycle(len: usize, q: u64) -> Result<BipartiteMultigraph> {
    if len < 4 || len % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "cycle length must be even and at least 4, got {len}"
        )));
    }
    if q < 2 {
        return Err(Error::InvalidArgument(format!("q must be at least 2, got {q}")));
    }
    let m = len / 2;
    let mut mult = vec![0; m * m];
    for i in 0..m {
        mult[i * m + i] += q - 1;
        mult[((i + 1) % m) * m + i] += 1;
    }
    BipartiteMultigraph::new(m, m, mult)
}

/// `K_{n,n}`.
pub fn complete(n: usize) -> BipartiteMultigraph {
    BipartiteMultigraph::new(n, n, vec![1; n * n]).expect("square")
}

/// Sum of `q` independent uniform perfect matchings on `n + n` vertices.
pub fn random_permutation_model(n: usize, q: u64, seed: u64) -> BipartiteMultigraph {
    permutation_model_from(&mut SampleRng::new(seed), n, q)
}

/// Like [`random_permutation_model`], drawing from an existing stream.
pub fn permutation_model_from(rng: &mut SampleRng, n: usize, q: u64) -> BipartiteMultigraph {
    let mut mult = vec![0u64; n * n];
    for _ in 0..q {
        for (i, j) in rng.permutation(n).into_iter().enumerate() {
            mult[i * n + j] += 1;
        }
    }
    BipartiteMultigraph::new(n, n, mult).expect("square")
}

/// Rejection-samples the permutation model until the graph is simple.
/// `Ok(None)` after `max_tries` failures.
pub fn random_simple(n: usize, q: u64, seed: u64, max_tries: u64) -> Result<Option<BipartiteMultigraph>> {
    simple_from(&mut SampleRng::new(seed), n, q, max_tries)
}

pub fn simple_from(rng: &mut SampleRng, n: usize, q: u64, max_tries: u64) -> Result<Option<BipartiteMultigraph>> {
    if q > n as u64 {
        return Err(Error::InvalidArgument(format!(
            "no simple {q}-regular bipartite graph has {n} vertices per side"
        )));
    }
    for _ in 0..max_tries {
        let g = permutation_model_from(rng, n, q);
        if g.is_simple() {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Every 0/1 `n x n` matrix with all row and column sums equal to `q`, in
/// lexicographic order of the rows read top to bottom, left to right.
pub fn enumerate_labeled_regular(n: usize, q: u64) -> Result<LabeledRegular> {
    if n > ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            what: "n",
            value: n as u64,
            cap: ENUMERATION_CAP as u64,
        });
    }
    if n == 0 || q > n as u64 {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n and q <= n, got n = {n}, q = {q}"
        )));
    }
    // bit j of a row is column j; lexicographic order on (col 0, col 1, ...)
    let mut rows: Vec<u32> = (0u32..1 << n).filter(|r| r.count_ones() as u64 == q).collect();
    rows.sort_by_key(|&r| (0..n).map(|j| r >> j & 1).collect::<Vec<_>>());
    Ok(LabeledRegular {
        n,
        q: q as u32,
        rows,
        next: vec![0; n + 1],
        chosen: Vec::with_capacity(n),
        col: vec![0; n],
        done: false,
    })
}

/// Iterator returned by [`enumerate_labeled_regular`].
pub struct LabeledRegular {
    n: usize,
    q: u32,
    rows: Vec<u32>,
    next: Vec<usize>,
    chosen: Vec<u32>,
    col: Vec<u32>,
    done: bool,
}

impl LabeledRegular {
    fn push(&mut self, row: u32) {
        for j in 0..self.n {
            self.col[j] += row >> j & 1;
        }
        self.chosen.push(row);
    }

    fn pop(&mut self) {
        let row = self.chosen.pop().expect("nonempty");
        for j in 0..self.n {
            self.col[j] -= row >> j & 1;
        }
    }

    fn fits(&self, row: u32, rows_after: u32) -> bool {
        (0..self.n).all(|j| {
            let c = self.col[j] + (row >> j & 1);
            c <= self.q && self.q - c <= rows_after
        })
    }
}

impl Iterator for LabeledRegular {
    type Item = BipartiteMultigraph;

    fn next(&mut self) -> Option<BipartiteMultigraph> {
        while !self.done {
            let level = self.chosen.len();
            if level == self.n {
                let mult = self
                    .chosen
                    .iter()
                    .flat_map(|&r| (0..self.n).map(move |j| (r >> j & 1) as u64))
                    .collect();
                self.pop();
                return Some(BipartiteMultigraph::new(self.n, self.n, mult).expect("square"));
            }
            let rows_after = (self.n - level - 1) as u32;
            let found = (self.next[level]..self.rows.len()).find(|&i| self.fits(self.rows[i], rows_after));
            match found {
                Some(i) => {
                    self.next[level] = i + 1;
                    self.next[level + 1] = 0;
                    self.push(self.rows[i]);
                }
                None if level == 0 => self.done = true,
                None => self.pop(),
            }
        }
        None
    }
}
