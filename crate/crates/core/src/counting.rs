//! Counting perfect matchings of a bipartite multigraph, i.e. the permanent
//! of its multiplicity matrix.
//!
//! `per(A) = (-1)^n * sum over column sets S of (-1)^|S| * prod_i (sum_{j in S} a_ij)`
//!
//! Column sets are visited in Gray-code order so each step adds or removes a
//! single column from the running row sums. The empty set contributes zero
//! for `n >= 1`; the `0 x 0` permanent is one.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::graph::BipartiteMultigraph;
use crate::{Error, Result};

pub const DEFAULT_EXACT_CAP: usize = 24;
pub const MOD_CAP: usize = 32;
pub const BRUTEFORCE_CAP: usize = 9;
pub const MAX_MODULUS: u64 = 1 << 31;

/// Below this size the subset range is walked on the calling thread.
const PARALLEL_MIN_N: usize = 14;
const CHUNK_BITS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingCount {
    Exact(BigUint),
    Residue { value: u64, modulus: u64 },
}

impl fmt::Display for MatchingCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingCount::Exact(n) => write!(f, "{n}"),
            MatchingCount::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

fn square_size(g: &BipartiteMultigraph) -> Result<usize> {
    if g.is_square() {
        Ok(g.n_u())
    } else {
        Err(Error::NotSquare {
            n_u: g.n_u(),
            n_v: g.n_v(),
        })
    }
}

/// Exact number of perfect matchings, parallel copies counted separately.
pub fn pm_exact(g: &BipartiteMultigraph) -> Result<BigUint> {
    pm_exact_capped(g, DEFAULT_EXACT_CAP)
}

pub fn pm_exact_capped(g: &BipartiteMultigraph, cap: usize) -> Result<BigUint> {
    let n = square_size(g)?;
    if n > cap {
        return Err(Error::CapExceeded {
            what: "n",
            value: n as u64,
            cap: cap as u64,
        });
    }
    if n == 0 {
        return Ok(BigUint::one());
    }
    let total: BigInt = subset_chunks(n)
        .into_par_iter()
        .map(|range| ryser_exact_range(g, n, range))
        .sum();
    let signed = if n % 2 == 1 { -total } else { total };
    Ok(signed
        .to_biguint()
        .expect("permanent of a nonnegative matrix is nonnegative"))
}

/// Number of perfect matchings modulo `m`, `2 <= m < 2^31`.
pub fn pm_mod(g: &BipartiteMultigraph, m: u64) -> Result<u64> {
    let n = square_size(g)?;
    if !(2..MAX_MODULUS).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "modulus must lie in [2, 2^31), got {m}"
        )));
    }
    if n > MOD_CAP {
        return Err(Error::CapExceeded {
            what: "n",
            value: n as u64,
            cap: MOD_CAP as u64,
        });
    }
    if n == 0 {
        return Ok(1 % m);
    }
    let total = subset_chunks(n)
        .into_par_iter()
        .map(|range| ryser_mod_range(g, n, m, range))
        .reduce(|| 0, |a, b| (a + b) % m);
    Ok(if n % 2 == 1 { (m - total) % m } else { total })
}

/// Reference count by summing over all `n!` bijections.
pub fn pm_bruteforce(g: &BipartiteMultigraph) -> Result<BigUint> {
    fn go(g: &BipartiteMultigraph, u: usize, used: &mut [bool], prod: &BigUint, acc: &mut BigUint) {
        let n = used.len();
        if u == n {
            *acc += prod;
            return;
        }
        for v in 0..n {
            let m = g.mult(u, v);
            if m == 0 || used[v] {
                continue;
            }
            used[v] = true;
            go(g, u + 1, used, &(prod * m), acc);
            used[v] = false;
        }
    }

    let n = square_size(g)?;
    if n > BRUTEFORCE_CAP {
        return Err(Error::CapExceeded {
            what: "n",
            value: n as u64,
            cap: BRUTEFORCE_CAP as u64,
        });
    }
    let mut acc = BigUint::zero();
    go(g, 0, &mut vec![false; n], &BigUint::one(), &mut acc);
    Ok(acc)
}

/// Splits the Gray-code indices `1..2^n` into contiguous ranges.
fn subset_chunks(n: usize) -> Vec<(u64, u64)> {
    let end = 1u64 << n;
    if n < PARALLEL_MIN_N {
        return vec![(1, end)];
    }
    let step = 1u64 << (n - CHUNK_BITS);
    (0..1u64 << CHUNK_BITS)
        .map(|c| ((c * step).max(1), (c + 1) * step))
        .collect()
}

#[inline]
fn gray(k: u64) -> u64 {
    k ^ (k >> 1)
}

/// Row sums of the columns in `set`.
fn row_sums_of(g: &BipartiteMultigraph, n: usize, set: u64) -> Vec<u128> {
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| set >> j & 1 == 1)
                .map(|j| g.mult(i, j) as u128)
                .sum()
        })
        .collect()
}

/// Signed accumulator that stays in `i128` until it would overflow.
#[derive(Default)]
struct Accumulator {
    small: i128,
    big: BigInt,
}

impl Accumulator {
    fn add_small(&mut self, negative: bool, term: u128) {
        let Ok(t) = i128::try_from(term) else {
            return self.add_big(negative, BigUint::from(term));
        };
        let t = if negative { -t } else { t };
        match self.small.checked_add(t) {
            Some(s) => self.small = s,
            None => {
                self.big += BigInt::from(self.small) + BigInt::from(t);
                self.small = 0;
            }
        }
    }

    fn add_big(&mut self, negative: bool, term: BigUint) {
        let t = BigInt::from(term);
        if negative {
            self.big -= t;
        } else {
            self.big += t;
        }
    }

    fn finish(self) -> BigInt {
        self.big + self.small
    }
}

fn product_into(acc: &mut Accumulator, negative: bool, sums: &[u128]) {
    let mut p: u128 = 1;
    for (i, &s) in sums.iter().enumerate() {
        if s == 0 {
            return;
        }
        match p.checked_mul(s) {
            Some(x) => p = x,
            None => {
                let big = sums[i..]
                    .iter()
                    .fold(BigUint::from(p), |a, &s| a * BigUint::from(s));
                return acc.add_big(negative, big);
            }
        }
    }
    acc.add_small(negative, p);
}

fn ryser_exact_range(g: &BipartiteMultigraph, n: usize, (start, end): (u64, u64)) -> BigInt {
    let mut set = gray(start);
    let mut sums = row_sums_of(g, n, set);
    let mut acc = Accumulator::default();
    product_into(&mut acc, set.count_ones() % 2 == 1, &sums);
    for k in start + 1..end {
        let j = k.trailing_zeros() as usize;
        set ^= 1 << j;
        if set >> j & 1 == 1 {
            for (i, s) in sums.iter_mut().enumerate() {
                *s += g.mult(i, j) as u128;
            }
        } else {
            for (i, s) in sums.iter_mut().enumerate() {
                *s -= g.mult(i, j) as u128;
            }
        }
        product_into(&mut acc, set.count_ones() % 2 == 1, &sums);
    }
    acc.finish()
}

fn ryser_mod_range(g: &BipartiteMultigraph, n: usize, m: u64, (start, end): (u64, u64)) -> u64 {
    let col = |j: usize| -> Vec<u64> { (0..n).map(|i| g.mult(i, j) % m).collect() };
    let columns: Vec<Vec<u64>> = (0..n).map(col).collect();
    let mut set = gray(start);
    let mut sums: Vec<u64> = row_sums_of(g, n, set)
        .into_iter()
        .map(|s| (s % m as u128) as u64)
        .collect();
    let term = |sums: &[u64], set: u64| -> u64 {
        let p = sums.iter().fold(1u64, |p, &s| p * s % m);
        if set.count_ones() % 2 == 1 {
            (m - p) % m
        } else {
            p
        }
    };
    let mut acc = term(&sums, set);
    for k in start + 1..end {
        let j = k.trailing_zeros() as usize;
        set ^= 1 << j;
        let c = &columns[j];
        if set >> j & 1 == 1 {
            for (s, &a) in sums.iter_mut().zip(c) {
                *s = (*s + a) % m;
            }
        } else {
            for (s, &a) in sums.iter_mut().zip(c) {
                *s = (*s + m - a) % m;
            }
        }
        acc = (acc + term(&sums, set)) % m;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn g(rows: &[&[u64]]) -> BipartiteMultigraph {
        BipartiteMultigraph::from_rows(rows).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn exact_examples() {
        let id = g(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(pm_exact(&id).unwrap(), big(1));
        assert_eq!(pm_exact(&gen::complete(3)).unwrap(), big(6));
        assert_eq!(pm_exact(&g(&[&[1, 2], &[2, 1]])).unwrap(), big(5));
        assert_eq!(pm_exact(&BipartiteMultigraph::new(0, 0, vec![]).unwrap()).unwrap(), big(1));
    }

    #[test]
    fn mod_examples() {
        assert_eq!(pm_mod(&gen::k2_multi(3), 3), Ok(0));
        let c6 = gen::inflated_cycle(6, 3).unwrap();
        assert_eq!(pm_exact(&c6).unwrap(), big(9));
        assert_eq!(pm_mod(&c6, 3), Ok(0));
        let c4 = gen::inflated_cycle(4, 3).unwrap();
        assert_eq!(pm_bruteforce(&c4).unwrap(), big(5));
        assert_eq!(pm_mod(&c4, 3), Ok(2));
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(pm_bruteforce(&g(&[&[1, 0], &[0, 1]])).unwrap(), big(1));
        assert_eq!(pm_bruteforce(&gen::complete(4)).unwrap(), big(24));
    }

    #[test]
    fn error_paths() {
        let rect = g(&[&[1, 1]]);
        assert!(matches!(pm_exact(&rect), Err(Error::NotSquare { .. })));
        assert!(matches!(pm_mod(&rect, 3), Err(Error::NotSquare { .. })));
        assert!(pm_mod(&gen::complete(2), 1).is_err());
        assert!(pm_mod(&gen::complete(2), MAX_MODULUS).is_err());
        assert!(matches!(pm_exact(&gen::complete(25)), Err(Error::CapExceeded { .. })));
        assert!(matches!(pm_bruteforce(&gen::complete(10)), Err(Error::CapExceeded { .. })));
        assert!(matches!(pm_mod(&gen::complete(33), 3), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn huge_multiplicities_do_not_overflow() {
        // total multiplicity must still fit in u64
        let m = u64::MAX / 9;
        let gr = g(&[&[m, m, m], &[m, m, m], &[m, m, m]]);
        let expected = big(6) * big(m).pow(3);
        assert_eq!(pm_exact(&gr).unwrap(), expected);
        assert_eq!(pm_bruteforce(&gr).unwrap(), expected);
        let r = (&expected % big(1_000_003)).to_u64_digits().first().copied().unwrap_or(0);
        assert_eq!(pm_mod(&gr, 1_000_003), Ok(r));
    }

    #[test]
    fn parallel_chunks_match_known_values() {
        // K_{n,n} has n! perfect matchings; n = 15 exercises the chunked path
        let n = 15;
        let fact = (1..=n as u64).fold(BigUint::one(), |a, k| a * k);
        assert_eq!(pm_exact(&gen::complete(n)).unwrap(), fact);
        let r = (&fact % big(1_000_003)).to_u64_digits()[0];
        assert_eq!(pm_mod(&gen::complete(n), 1_000_003), Ok(r));
        // (q-1)^m + 1 for an inflated cycle with 16 vertices per side
        let c = gen::inflated_cycle(32, 3).unwrap();
        assert_eq!(pm_exact(&c).unwrap(), big((1 << 16) + 1));
    }
}
