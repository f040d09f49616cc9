#![allow(dead_code)]

use antifactor::gen::{self, SampleRng};
use antifactor::BipartiteMultigraph;

/// Regular graphs used across the integration and acceptance tests: the
/// named families, permutation-model samples and every labeled simple
/// graph, restricted to `n <= max_n` and the given degrees.
pub fn regular_corpus(degrees: &[u64], max_n: usize, random_per_size: u64) -> Vec<BipartiteMultigraph> {
    let mut out = Vec::new();
    for &q in degrees {
        out.push(gen::k2_multi(q));
        if q >= 2 {
            for len in (4..=2 * max_n).step_by(2) {
                out.push(gen::inflated_cycle(len, q).unwrap());
            }
        }
        if (q as usize) <= max_n {
            out.push(gen::complete(q as usize));
        }
        for n in 1..=max_n {
            for i in 0..random_per_size {
                let seed = gen::derive_seed(q * 1000 + n as u64, i);
                out.push(gen::random_permutation_model(n, q, seed));
            }
            if n >= q as usize && n <= gen::ENUMERATION_CAP {
                out.extend(gen::enumerate_labeled_regular(n, q).unwrap());
            }
        }
    }
    out.sort_by(|a, b| (a.n_u(), a.matrix()).cmp(&(b.n_u(), b.matrix())));
    out.dedup();
    out
}

/// Random square multiplicity matrix with entries in `0..=max_entry`.
pub fn random_matrix(rng: &mut SampleRng, n: usize, max_entry: u64) -> BipartiteMultigraph {
    let mult = (0..n * n).map(|_| rng.below(max_entry + 1)).collect();
    BipartiteMultigraph::new(n, n, mult).unwrap()
}

/// Every alpha vector in `0..q` of length `n`, in odometer order.
pub fn all_alphas(n: usize, q: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..q).map(move |a| {
                    let mut p = p.clone();
                    p.push(a);
                    p
                })
            })
            .collect();
    }
    out
}
