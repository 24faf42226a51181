//! Ranks, pairwise win probabilities and bootstrap confidence intervals.

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ComparisonRecord, Index};
use crate::ratings::{prepare, rate_indexed, Algorithm, AlgorithmParams};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankedScore {
    pub item: String,
    pub score: f64,
    /// Competition rank: one plus the number of items with a strictly greater score.
    pub rank: usize,
}

/// Sorts items by descending score and assigns competition ranks. Equal scores
/// share a rank and keep their input order.
pub fn rank(scores: &IndexMap<String, f64>) -> Vec<RankedScore> {
    let mut order: Vec<(&String, f64)> = scores.iter().map(|(k, &v)| (k, v)).collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1));

    let mut ranked: Vec<RankedScore> = Vec::with_capacity(order.len());
    for (position, (item, score)) in order.into_iter().enumerate() {
        let rank = match ranked.last() {
            Some(previous) if previous.score == score => previous.rank,
            _ => position + 1,
        };
        ranked.push(RankedScore {
            item: item.clone(),
            score,
            rank,
        });
    }
    ranked
}

/// Modeled win probabilities `p[i][j] = s_i / (s_i + s_j)`, with rows and columns
/// ordered by descending score.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairwiseMatrix {
    pub order: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

pub fn pairwise_win_rates(scores: &IndexMap<String, f64>) -> Result<PairwiseMatrix> {
    if let Some((item, &score)) = scores.iter().find(|(_, &s)| !(s > 0.0)) {
        return Err(Error::NonPositiveScore {
            item: item.clone(),
            score,
        });
    }
    let ranked = rank(scores);
    let matrix = ranked
        .iter()
        .map(|row| {
            ranked
                .iter()
                .map(|column| {
                    if row.item == column.item {
                        0.5
                    } else {
                        row.score / (row.score + column.score)
                    }
                })
                .collect()
        })
        .collect();
    Ok(PairwiseMatrix {
        order: ranked.into_iter().map(|r| r.item).collect(),
        matrix,
    })
}

/// Quantile of sorted data with linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&q));
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        len => {
            let position = q * (len - 1) as f64;
            let below = position.floor() as usize;
            let above = position.ceil() as usize;
            let fraction = position - below as f64;
            sorted[below] + (sorted[above] - sorted[below]) * fraction
        }
    }
}

/// Indices of a with-replacement resample of `len` elements.
///
/// The generator is ChaCha8 seeded with `seed`, which keeps resamples stable across
/// platforms and runs.
pub fn resample(len: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random_range(0..len)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BootstrapInterval {
    pub item: String,
    /// 2.5% quantile.
    pub lower: f64,
    /// Median.
    pub rating: f64,
    /// 97.5% quantile.
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BootstrapSummary {
    pub rounds: usize,
    /// Sorted by descending median.
    pub intervals: Vec<BootstrapInterval>,
}

impl BootstrapSummary {
    pub fn get(&self, item: &str) -> Option<&BootstrapInterval> {
        self.intervals.iter().find(|i| i.item == item)
    }
}

/// Percentile bootstrap of the scores of `algorithm`.
///
/// Round `r` resamples the records with replacement using seed `r`, rescores them
/// against a single shared index, and the per-item 2.5%, 50% and 97.5% quantiles
/// across rounds form the interval. Rounds run in parallel; the result does not
/// depend on scheduling.
pub fn bootstrap_ci(
    records: &[ComparisonRecord],
    algorithm: Algorithm,
    params: &AlgorithmParams,
    rounds: usize,
    index: Option<&Index>,
) -> Result<BootstrapSummary> {
    if rounds == 0 {
        return Err(Error::invalid("rounds", "must be at least 1"));
    }
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (index, comparisons) = prepare(records, index)?;

    let outcomes: Vec<Result<Vec<f64>>> = (0..rounds)
        .into_par_iter()
        .map(|round| {
            let sample: Vec<_> = resample(comparisons.len(), round as u64)
                .into_iter()
                .map(|i| comparisons[i])
                .collect();
            rate_indexed(&index, &sample, algorithm, params)
                .map(|result| result.values().collect())
        })
        .collect();

    let mut samples = Vec::with_capacity(rounds);
    let mut first_error = None;
    for outcome in outcomes {
        match outcome {
            Ok(scores) => samples.push(scores),
            Err(err) => {
                first_error.get_or_insert(err);
            }
        }
    }
    if samples.is_empty() {
        return Err(first_error.unwrap_or(Error::EmptyInput));
    }

    let mut intervals: Vec<BootstrapInterval> = index
        .names()
        .iter()
        .enumerate()
        .map(|(id, item)| {
            let mut column: Vec<f64> = samples.iter().map(|s| s[id]).collect();
            column.sort_by(f64::total_cmp);
            BootstrapInterval {
                item: item.clone(),
                lower: quantile(&column, 0.025),
                rating: quantile(&column, 0.5),
                upper: quantile(&column, 0.975),
            }
        })
        .collect();
    intervals.sort_by(|a, b| b.rating.total_cmp(&a.rating));

    Ok(BootstrapSummary {
        rounds: samples.len(),
        intervals,
    })
}
