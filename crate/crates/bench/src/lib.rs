//! Synthetic comparison data and a wall-clock timing harness.

use std::hint::black_box;
use std::io::{self, Write};
use std::time::{Duration, Instant};

use pairrank::{
    quantile, rate, resample, Algorithm, AlgorithmParams, ComparisonRecord, Error, Index, Result,
    Winner,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_ITEMS: usize = 100;
pub const DEFAULT_BASE_RECORDS: usize = 100_000;
pub const DEFAULT_MAX_SIZE: usize = 1_000_000;
pub const DEFAULT_REPETITIONS: usize = 10;
/// Probability that a synthetic comparison ends in a tie.
pub const TIE_RATE: f64 = 0.05;

const CI_RESAMPLES: usize = 1000;

/// Comparisons among `items` items whose outcomes follow a Bradley–Terry model.
///
/// Log-strengths are spread uniformly over `[-1.15, 1.15]`, roughly 400 Elo points
/// between the best and worst item. Each record picks two distinct items, ties with
/// probability [`TIE_RATE`], and otherwise lets the left item win with probability
/// `s_l / (s_l + s_r)`.
pub fn synthetic_base(items: usize, records: usize, seed: u64) -> Vec<ComparisonRecord> {
    assert!(items >= 2, "need at least two items");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..items).map(|i| format!("model-{i:03}")).collect();
    let strengths: Vec<f64> = (0..items).map(|_| rng.random_range(-1.15..=1.15f64).exp()).collect();
    (0..records)
        .map(|_| {
            let left = rng.random_range(0..items);
            let mut right = rng.random_range(0..items - 1);
            if right >= left {
                right += 1;
            }
            let winner = if rng.random_bool(TIE_RATE) {
                Winner::Draw
            } else if rng.random_bool(strengths[left] / (strengths[left] + strengths[right])) {
                Winner::Left
            } else {
                Winner::Right
            };
            ComparisonRecord::new(&names[left], &names[right], winner)
        })
        .collect()
}

/// Exactly `size` records drawn uniformly with replacement from `base`.
pub fn synthesize(base: &[ComparisonRecord], size: usize, seed: u64) -> Result<Vec<ComparisonRecord>> {
    if base.is_empty() {
        return Err(Error::EmptyInput);
    }
    if size == 0 {
        return Err(Error::InvalidParameter {
            name: "size",
            reason: "must be at least 1".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..size).map(|_| base[rng.random_range(0..base.len())].clone()).collect())
}

/// Powers of ten from 10 up to `max_size`.
pub fn default_sizes(max_size: usize) -> Vec<usize> {
    std::iter::successors(Some(10usize), |s| s.checked_mul(10))
        .take_while(|&s| s <= max_size)
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimingRow {
    pub algorithm: Algorithm,
    pub size: usize,
    pub mean_s: f64,
    pub ci_low_s: f64,
    pub ci_high_s: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<TimingRow>,
    /// Mean cost of timing an empty body, already subtracted from every row.
    pub baseline_s: f64,
    pub repetitions: usize,
    pub elapsed: Duration,
}

impl BenchReport {
    pub fn rows_for(&self, algorithm: Algorithm) -> impl Iterator<Item = &TimingRow> {
        self.rows.iter().filter(move |r| r.algorithm == algorithm)
    }

    /// Least-squares slope of `log10(mean_s)` against `log10(size)` over sizes in
    /// `[min_size, max_size]`. `None` with fewer than two usable points.
    pub fn loglog_slope(&self, algorithm: Algorithm, min_size: usize, max_size: usize) -> Option<f64> {
        let points: Vec<(f64, f64)> = self
            .rows_for(algorithm)
            .filter(|r| r.size >= min_size && r.size <= max_size && r.mean_s > 0.0)
            .map(|r| ((r.size as f64).log10(), r.mean_s.log10()))
            .collect();
        loglog_fit(&points)
    }

    /// `algorithm,size,mean_s,ci_low_s,ci_high_s`, one row per measurement.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "algorithm,size,mean_s,ci_low_s,ci_high_s")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{:e},{:e},{:e}",
                r.algorithm, r.size, r.mean_s, r.ci_low_s, r.ci_high_s
            )?;
        }
        Ok(())
    }
}

fn loglog_fit(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn time_once<F: FnMut()>(mut body: F) -> f64 {
    let start = Instant::now();
    body();
    start.elapsed().as_secs_f64()
}

/// Mean cost of an empty timed region.
pub fn empty_loop_baseline(samples: usize) -> f64 {
    let total: f64 = (0..samples).map(|_| time_once(|| black_box(()))).sum();
    total / samples.max(1) as f64
}

/// Mean and 95% percentile-bootstrap interval of the mean.
pub fn mean_with_ci(samples: &[f64], seed: u64) -> (f64, f64, f64) {
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let mut means: Vec<f64> = (0..CI_RESAMPLES as u64)
        .map(|round| {
            let picks = resample(samples.len(), seed.wrapping_add(round));
            picks.iter().map(|&i| samples[i]).sum::<f64>() / samples.len() as f64
        })
        .collect();
    means.sort_by(f64::total_cmp);
    (mean, quantile(&means, 0.025), quantile(&means, 0.975))
}

/// Times `rate` with default parameters for every algorithm and size.
///
/// Each size is synthesized once from `base` outside the timed region. The timed
/// region is a single call of the full pipeline from named records against an
/// index built up front, so the item set stays fixed across sizes. An untimed call
/// precedes the timed ones for every cell. Sizes run one after another on the
/// calling thread.
pub fn run_benchmark(
    base: &[ComparisonRecord],
    sizes: &[usize],
    repetitions: usize,
    algorithms: &[Algorithm],
) -> Result<BenchReport> {
    if repetitions < 2 {
        return Err(Error::InvalidParameter {
            name: "repetitions",
            reason: "must be at least 2".into(),
        });
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter {
            name: "sizes",
            reason: "must be strictly ascending".into(),
        });
    }
    let started = Instant::now();
    let index = Index::build(base);
    let params = AlgorithmParams::default();
    let baseline_s = empty_loop_baseline(1000);

    let mut rows = Vec::with_capacity(sizes.len() * algorithms.len());
    for &size in sizes {
        let records = synthesize(base, size, size as u64)?;
        for &algorithm in algorithms {
            // One untimed call so the timed ones start from warm caches.
            black_box(rate(&records, Some(&index), algorithm, &params)).expect("synthetic records are valid");
            let samples = (0..repetitions)
                .map(|_| {
                    let elapsed = time_once(|| {
                        black_box(rate(black_box(&records), Some(&index), algorithm, &params))
                            .expect("synthetic records are valid");
                    });
                    (elapsed - baseline_s).max(0.0)
                })
                .collect::<Vec<_>>();
            let (mean_s, ci_low_s, ci_high_s) = mean_with_ci(&samples, size as u64);
            rows.push(TimingRow {
                algorithm,
                size,
                mean_s,
                ci_low_s,
                ci_high_s,
            });
        }
    }
    Ok(BenchReport {
        rows,
        baseline_s,
        repetitions,
        elapsed: started.elapsed(),
    })
}

/// Elo updates per second on `records`, best of `repetitions` single-threaded runs.
pub fn elo_throughput(records: &[ComparisonRecord], repetitions: usize) -> f64 {
    let index = Index::build(records);
    let encoded = index.encode(records).expect("records index themselves");
    let params = AlgorithmParams::default();
    let best = (0..repetitions.max(1))
        .map(|_| {
            time_once(|| {
                black_box(pairrank::rate_indexed(&index, black_box(&encoded), Algorithm::Elo, &params))
                    .expect("valid parameters");
            })
        })
        .fold(f64::INFINITY, f64::min);
    records.len() as f64 / best
}
