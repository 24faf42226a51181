use crate::error::Result;
use crate::matrices::{observed_pairs, Adjacency, WinMatrices};
use crate::model::{ComparisonRecord, Index, IndexedComparison};

use super::{prepare, Algorithm, IterParams, RatingResult, Scores};

/// Principal eigenvector of the tie-split win matrix, scaled to sum to 1.
///
/// Power iteration starts from the uniform vector. Each sweep multiplies by
/// `A + cI`, where `c` is the mean row sum of `A`: the shift leaves the eigenvectors
/// unchanged but stops the iteration from oscillating on periodic win graphs (for
/// example two items that only ever beat each other). A matrix without any weight
/// yields uniform scores.
pub fn eigen(
    records: &[ComparisonRecord],
    index: Option<&Index>,
    params: &IterParams,
) -> Result<RatingResult> {
    params.validate()?;
    let (index, comparisons) = prepare(records, index)?;
    Ok(eigen_scores(&comparisons, index.len(), params).into_result(Algorithm::Eigen, &index))
}

/// PageRank over the graph in which every loser links to its winner with the
/// tie-split weight, so ties link both ways at half weight.
///
/// Items without outgoing weight (never lost nor tied) teleport uniformly. Scores
/// sum to 1.
pub fn pagerank(
    records: &[ComparisonRecord],
    index: Option<&Index>,
    params: &IterParams,
) -> Result<RatingResult> {
    params.validate()?;
    let (index, comparisons) = prepare(records, index)?;
    Ok(pagerank_scores(&comparisons, index.len(), params).into_result(Algorithm::Pagerank, &index))
}

pub(crate) fn eigen_scores(comparisons: &[IndexedComparison], n: usize, params: &IterParams) -> Scores {
    let pairs = observed_pairs(&WinMatrices::from_indexed(comparisons, n));
    let uniform = vec![1.0 / n as f64; n];
    if pairs.is_empty() {
        return Scores::exact(uniform);
    }

    let total: f64 = pairs.iter().map(|p| p.split_ij() + p.split_ji()).sum();
    let shift = total / n as f64;
    let adjacency = Adjacency::new(&pairs, n);

    let mut scores = uniform;
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;

    while !converged && iterations < params.max_iterations {
        iterations += 1;
        for (i, slot) in next.iter_mut().enumerate() {
            let mut sum = shift * scores[i];
            for neighbor in adjacency.of(i) {
                sum += neighbor.ahead * scores[neighbor.j];
            }
            *slot = sum;
        }
        converged = normalize_and_compare(&mut next, &scores) < params.tolerance;
        std::mem::swap(&mut scores, &mut next);
    }

    Scores {
        values: scores,
        iterations,
        converged,
        tie_parameter: None,
    }
}

pub(crate) fn pagerank_scores(
    comparisons: &[IndexedComparison],
    n: usize,
    params: &IterParams,
) -> Scores {
    if n == 0 {
        return Scores::exact(Vec::new());
    }
    let pairs = observed_pairs(&WinMatrices::from_indexed(comparisons, n));
    let adjacency = Adjacency::new(&pairs, n);

    // Outgoing weight of j: everything it lost plus half its ties.
    let out_weight: Vec<f64> = (0..n)
        .map(|j| adjacency.of(j).iter().map(|nb| nb.behind).sum())
        .collect();
    // Share of j's outgoing weight that flows to i, for every neighbor j of i.
    let shares: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| {
            adjacency
                .of(i)
                .iter()
                .filter(|nb| nb.ahead > 0.0)
                .map(|nb| (nb.j, nb.ahead / out_weight[nb.j]))
                .collect()
        })
        .collect();

    let damping = params.damping;
    let uniform = 1.0 / n as f64;
    let mut scores = vec![uniform; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;

    while !converged && iterations < params.max_iterations {
        iterations += 1;
        let dangling: f64 = scores
            .iter()
            .zip(&out_weight)
            .filter(|(_, &w)| w == 0.0)
            .map(|(s, _)| s)
            .sum();
        let teleport = (1.0 - damping) * uniform + damping * dangling * uniform;
        for (slot, item_shares) in next.iter_mut().zip(&shares) {
            let mut sum = 0.0;
            for &(j, share) in item_shares {
                sum += share * scores[j];
            }
            *slot = teleport + damping * sum;
        }
        converged = normalize_and_compare(&mut next, &scores) < params.tolerance;
        std::mem::swap(&mut scores, &mut next);
    }

    Scores {
        values: scores,
        iterations,
        converged,
        tie_parameter: None,
    }
}

/// Rescales `next` to sum to 1 and returns its largest absolute change from `previous`.
fn normalize_and_compare(next: &mut [f64], previous: &[f64]) -> f64 {
    let norm: f64 = next.iter().sum();
    let mut change: f64 = 0.0;
    for (slot, &s) in next.iter_mut().zip(previous) {
        *slot /= norm;
        change = change.max((*slot - s).abs());
    }
    change
}
