//! Distribution of `pm(G) mod q` over random or exhaustively enumerated
//! `q`-regular bipartite graphs.
//!
//! Monte Carlo sample `i` draws from its own stream seeded with
//! `derive_seed(seed, i)`, so a report depends only on its parameters and
//! not on how samples are scheduled across threads. When only connected
//! graphs are wanted, a disconnected draw is discarded and the same stream
//! keeps drawing.

use rayon::prelude::*;
use serde::Serialize;

use crate::counting::{pm_mod, MAX_MODULUS, MOD_CAP};
use crate::gen::{self, derive_seed, SampleRng};
use crate::{Error, Result};

/// Draws allowed per accepted sample before giving up.
pub const MAX_ATTEMPTS_PER_SAMPLE: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Sum of `q` uniform perfect matchings.
    Multigraph,
    /// The multigraph model conditioned on having no parallel edges.
    Simple,
    /// Every labeled simple `q`-regular graph once.
    LabeledExhaustive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub q: u64,
    pub n: usize,
    pub model: ModelKind,
    /// Residues are taken modulo this value; `q` unless overridden.
    pub modulus: u64,
    pub samples: u64,
    pub connected_only: bool,
    pub counts: Vec<u64>,
    pub proportions: Vec<f64>,
    pub min_proportion: f64,
    pub chi_square: f64,
    pub seed: Option<u64>,
}

impl ExperimentReport {
    fn from_counts(
        q: u64,
        n: usize,
        model: ModelKind,
        modulus: u64,
        connected_only: bool,
        counts: Vec<u64>,
        seed: Option<u64>,
    ) -> Self {
        let samples: u64 = counts.iter().sum();
        let total = samples as f64;
        let proportions: Vec<f64> = counts
            .iter()
            .map(|&c| if samples == 0 { 0.0 } else { c as f64 / total })
            .collect();
        let min_proportion = proportions.iter().copied().fold(f64::INFINITY, f64::min);
        let expected = total / modulus as f64;
        let chi_square = if samples == 0 {
            0.0
        } else {
            counts
                .iter()
                .map(|&c| (c as f64 - expected).powi(2) / expected)
                .sum()
        };
        ExperimentReport {
            q,
            n,
            model,
            modulus,
            samples,
            connected_only,
            counts,
            proportions,
            min_proportion,
            chi_square,
            seed,
        }
    }

    /// `residue,count,proportion` rows under a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("residue,count,proportion\n");
        for (r, (c, p)) in self.counts.iter().zip(&self.proportions).enumerate() {
            out.push_str(&format!("{r},{c},{p}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingModel {
    Multigraph,
    Simple,
}

fn check_modulus(modulus: u64) -> Result<()> {
    if (2..MAX_MODULUS).contains(&modulus) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "residue modulus must lie in [2, 2^31), got {modulus}"
        )))
    }
}

pub fn run_monte_carlo(
    q: u64,
    n: usize,
    samples: u64,
    seed: u64,
    model: SamplingModel,
    connected_only: bool,
) -> Result<ExperimentReport> {
    run_monte_carlo_mod(q, n, samples, seed, model, connected_only, q)
}

/// Monte Carlo estimate with residues taken modulo `modulus`.
pub fn run_monte_carlo_mod(
    q: u64,
    n: usize,
    samples: u64,
    seed: u64,
    model: SamplingModel,
    connected_only: bool,
    modulus: u64,
) -> Result<ExperimentReport> {
    check_modulus(modulus)?;
    if q < 1 || n < 1 {
        return Err(Error::InvalidArgument(format!("need q >= 1 and n >= 1, got q = {q}, n = {n}")));
    }
    if n > MOD_CAP {
        return Err(Error::CapExceeded {
            what: "n",
            value: n as u64,
            cap: MOD_CAP as u64,
        });
    }
    if model == SamplingModel::Simple && q > n as u64 {
        return Err(Error::InvalidArgument(format!(
            "no simple {q}-regular bipartite graph has {n} vertices per side"
        )));
    }
    let residues: Vec<u64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = SampleRng::new(derive_seed(seed, i));
            let mut attempts = 0;
            loop {
                if attempts >= MAX_ATTEMPTS_PER_SAMPLE {
                    return Err(Error::InvalidArgument(format!(
                        "sample {i}: no acceptable graph after {attempts} draws"
                    )));
                }
                attempts += 1;
                let g = match model {
                    SamplingModel::Multigraph => gen::permutation_model_from(&mut rng, n, q),
                    SamplingModel::Simple => match gen::simple_from(&mut rng, n, q, 1)? {
                        Some(g) => g,
                        None => continue,
                    },
                };
                if connected_only && !g.is_connected() {
                    continue;
                }
                return pm_mod(&g, modulus);
            }
        })
        .collect::<Result<_>>()?;
    let mut counts = vec![0u64; modulus as usize];
    for r in residues {
        counts[r as usize] += 1;
    }
    let kind = match model {
        SamplingModel::Multigraph => ModelKind::Multigraph,
        SamplingModel::Simple => ModelKind::Simple,
    };
    Ok(ExperimentReport::from_counts(q, n, kind, modulus, connected_only, counts, Some(seed)))
}

/// Exact residue histogram over all labeled simple `q`-regular graphs with
/// `n <= 6` vertices per side.
pub fn run_exhaustive(q: u64, n: usize, connected_only: bool) -> Result<ExperimentReport> {
    run_exhaustive_mod(q, n, connected_only, q)
}

pub fn run_exhaustive_mod(q: u64, n: usize, connected_only: bool, modulus: u64) -> Result<ExperimentReport> {
    check_modulus(modulus)?;
    let mut counts = vec![0u64; modulus as usize];
    for g in gen::enumerate_labeled_regular(n, q)? {
        if connected_only && !g.is_connected() {
            continue;
        }
        counts[pm_mod(&g, modulus)? as usize] += 1;
    }
    Ok(ExperimentReport::from_counts(
        q,
        n,
        ModelKind::LabeledExhaustive,
        modulus,
        connected_only,
        counts,
        None,
    ))
}
