use crate::error::Result;
use crate::matrices::{observed_pairs, Adjacency, Pair, WinMatrices};
use crate::model::{ComparisonRecord, Index, IndexedComparison};

use super::{prepare, Algorithm, IterParams, RatingResult, Scores, MAX_STRENGTH, MIN_STRENGTH};

/// Upper bound on the tie propensity; reached when the data contain ties but no wins.
pub(crate) const MAX_TIE_PARAMETER: f64 = 1e9;

/// Maximum-likelihood Bradley–Terry strengths, `P(i beats j) = s_i / (s_i + s_j)`.
///
/// Ties count as half a win for each side. The fit uses the fixed-point iteration
/// `s_i <- sum_j A_ij s_j / (s_i + s_j) / sum_j A_ji / (s_i + s_j)` over the tie-split
/// matrix `A`, updating items one after another in place and rescaling the strengths
/// to a geometric mean of 1 after every sweep.
///
/// When the likelihood has no finite maximum (an item that never lost, or never won)
/// the affected strengths are pinned to a bound and the result reports
/// `converged == false`.
pub fn bradley_terry(
    records: &[ComparisonRecord],
    index: Option<&Index>,
    params: &IterParams,
) -> Result<RatingResult> {
    params.validate()?;
    let (index, comparisons) = prepare(records, index)?;
    Ok(bradley_terry_scores(&comparisons, index.len(), params)
        .into_result(Algorithm::BradleyTerry, &index))
}

/// Tie-aware Bradley–Terry model in which a tie between `i` and `j` has weight
/// `nu * sqrt(s_i * s_j)` against `s_i` and `s_j` for the two wins.
///
/// Strengths and the tie propensity `nu` are fitted by alternating fixed-point
/// updates, starting from `s = 1` and `nu = 1`. The fitted `nu` is returned in
/// [`RatingResult::tie_parameter`].
pub fn newman(
    records: &[ComparisonRecord],
    index: Option<&Index>,
    params: &IterParams,
) -> Result<RatingResult> {
    params.validate()?;
    let (index, comparisons) = prepare(records, index)?;
    Ok(newman_scores(&comparisons, index.len(), params).into_result(Algorithm::Newman, &index))
}

pub(crate) fn bradley_terry_scores(
    comparisons: &[IndexedComparison],
    n: usize,
    params: &IterParams,
) -> Scores {
    let pairs = observed_pairs(&WinMatrices::from_indexed(comparisons, n));
    let mut strengths = vec![1.0; n];
    if pairs.is_empty() {
        return Scores::exact(strengths);
    }
    let adjacency = Adjacency::new(&pairs, n);

    let mut previous = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;

    while !converged && iterations < params.max_iterations {
        iterations += 1;
        previous.copy_from_slice(&strengths);
        let mut saturated = false;

        // Items are updated in place, so later items see this sweep's values.
        for i in 0..n {
            let si = strengths[i];
            let mut numerator = 0.0;
            let mut denominator = 0.0;
            for neighbor in adjacency.of(i) {
                let sj = strengths[neighbor.j];
                let inverse = 1.0 / (si + sj);
                numerator += neighbor.ahead * sj * inverse;
                denominator += neighbor.behind * inverse;
            }
            let (value, pinned) = bounded_ratio(strengths[i], numerator, denominator);
            strengths[i] = value;
            saturated |= pinned;
        }

        normalize_geometric(&mut strengths);
        let change = max_abs_change(&previous, &strengths);
        converged = change < params.tolerance && !saturated;
    }

    Scores {
        values: strengths,
        iterations,
        converged,
        tie_parameter: None,
    }
}

pub(crate) fn newman_scores(
    comparisons: &[IndexedComparison],
    n: usize,
    params: &IterParams,
) -> Scores {
    let pairs = observed_pairs(&WinMatrices::from_indexed(comparisons, n));
    let mut strengths = vec![1.0; n];
    let mut nu = 1.0;
    if pairs.is_empty() {
        return Scores {
            tie_parameter: Some(nu),
            ..Scores::exact(strengths)
        };
    }
    let adjacency = Adjacency::new(&pairs, n);
    // Square roots of the strengths, kept in step with them.
    let mut roots = vec![1.0; n];

    let mut previous = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;

    while !converged && iterations < params.max_iterations {
        iterations += 1;
        previous.copy_from_slice(&strengths);
        let mut saturated = false;

        let half_nu = 0.5 * nu;
        for i in 0..n {
            let (si, ri) = (strengths[i], roots[i]);
            let inverse_ri = 1.0 / ri;
            let mut numerator = 0.0;
            let mut denominator = 0.0;
            for neighbor in adjacency.of(i) {
                let (sj, rj) = (strengths[neighbor.j], roots[neighbor.j]);
                let geometric = ri * rj;
                let inverse = 1.0 / (si + sj + nu * geometric);
                numerator += neighbor.ahead * (sj + half_nu * geometric) * inverse;
                denominator += neighbor.behind * (1.0 + half_nu * rj * inverse_ri) * inverse;
            }
            let (value, pinned) = bounded_ratio(strengths[i], numerator, denominator);
            strengths[i] = value;
            roots[i] = value.sqrt();
            saturated |= pinned;
        }

        let scale = normalize_geometric(&mut strengths);
        let root_scale = scale.sqrt();
        for r in roots.iter_mut() {
            *r /= root_scale;
        }
        let next_nu = update_tie_parameter(&pairs, &strengths, &roots, nu);
        let change = max_abs_change(&previous, &strengths).max((next_nu - nu).abs());
        nu = next_nu;
        converged = change < params.tolerance && !saturated;
    }

    Scores {
        values: strengths,
        iterations,
        converged,
        tie_parameter: Some(nu),
    }
}

/// `nu <- (sum ties * (s_i + s_j) / D) / (sum wins * sqrt(s_i s_j) / D)` over pairs,
/// with `D = s_i + s_j + nu * sqrt(s_i s_j)`.
fn update_tie_parameter(pairs: &[Pair], strengths: &[f64], roots: &[f64], nu: f64) -> f64 {
    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for pair in pairs {
        let (si, sj) = (strengths[pair.i], strengths[pair.j]);
        let geometric = roots[pair.i] * roots[pair.j];
        let total = si + sj + nu * geometric;
        numerator += pair.ties * (si + sj) / total;
        denominator += (pair.wins_ij + pair.wins_ji) * geometric / total;
    }
    if denominator > 0.0 {
        (numerator / denominator).min(MAX_TIE_PARAMETER)
    } else if numerator > 0.0 {
        MAX_TIE_PARAMETER
    } else {
        nu
    }
}

/// `numerator / denominator` pinned to the strength bounds. Items without weighted
/// comparisons keep `previous`. The flag reports whether a bound was hit.
fn bounded_ratio(previous: f64, numerator: f64, denominator: f64) -> (f64, bool) {
    let raw = if denominator > 0.0 {
        numerator / denominator
    } else if numerator > 0.0 {
        f64::INFINITY
    } else {
        previous
    };
    if raw < MIN_STRENGTH {
        (MIN_STRENGTH, true)
    } else if raw > MAX_STRENGTH {
        (MAX_STRENGTH, true)
    } else {
        (raw, false)
    }
}

/// Divides by the geometric mean and returns it.
///
/// Strengths lie within the bounds here, so products of eight stay far from
/// overflow and one logarithm per chunk suffices.
fn normalize_geometric(strengths: &mut [f64]) -> f64 {
    let log_sum: f64 = strengths
        .chunks(8)
        .map(|chunk| chunk.iter().product::<f64>().ln())
        .sum();
    let log_mean = log_sum / strengths.len() as f64;
    let scale = log_mean.exp();
    for s in strengths.iter_mut() {
        *s /= scale;
    }
    scale
}

fn max_abs_change(previous: &[f64], next: &[f64]) -> f64 {
    previous
        .iter()
        .zip(next)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}
