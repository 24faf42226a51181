//! Straight-from-the-definition versions of every algorithm.
//!
//! Nothing here calls into the optimized code paths: item ids come from a linear
//! name scan, matrices are nested vectors rebuilt by looping over the records, and
//! every sweep walks the full dense matrix. The public contracts (fallbacks, bounds,
//! error values) are the same as the optimized functions.

use pairrank::{
    Algorithm, AlgorithmParams, ComparisonRecord, EloParams, Error, Index, IterParams,
    RatingResult, Winner,
};

type Result<T> = std::result::Result<T, Error>;

const MIN_STRENGTH: f64 = 1e-9;
const MAX_STRENGTH: f64 = 1e9;
const MAX_TIE_PARAMETER: f64 = 1e9;

/// Item names and per-record ids.
struct Table {
    names: Vec<String>,
    rows: Vec<(usize, usize, Winner, f64)>,
}

fn position_of(names: &[String], name: &str) -> Option<usize> {
    names.iter().position(|n| n == name)
}

fn tabulate(records: &[ComparisonRecord], index: Option<&Index>) -> Result<Table> {
    let mut names: Vec<String> = match index {
        Some(index) => index.names().to_vec(),
        None => Vec::new(),
    };
    if index.is_none() {
        for record in records {
            for name in [&record.left, &record.right] {
                if position_of(&names, name).is_none() {
                    names.push(name.clone());
                }
            }
        }
    }
    let mut rows = Vec::with_capacity(records.len());
    for (position, record) in records.iter().enumerate() {
        if !(record.weight >= 0.0 && record.weight < f64::INFINITY) {
            return Err(Error::IllegalWeight {
                position,
                weight: record.weight,
            });
        }
        let left = position_of(&names, &record.left)
            .ok_or_else(|| Error::UnknownItem(record.left.clone()))?;
        let right = position_of(&names, &record.right)
            .ok_or_else(|| Error::UnknownItem(record.right.clone()))?;
        rows.push((left, right, record.winner, record.weight));
    }
    Ok(Table { names, rows })
}

fn check_elo(params: &EloParams) -> Result<()> {
    let fail = |name: &'static str, reason: &str| {
        Err(Error::InvalidParameter {
            name,
            reason: reason.to_string(),
        })
    };
    if !params.initial.is_finite() {
        return fail("initial", "must be finite");
    }
    if !(params.k > 0.0 && params.k.is_finite()) {
        return fail("k", "must be positive");
    }
    if !(params.scale > 0.0 && params.scale.is_finite()) {
        return fail("scale", "must be positive");
    }
    if !(params.base > 1.0 && params.base.is_finite()) {
        return fail("base", "must be greater than 1");
    }
    Ok(())
}

fn check_iter(params: &IterParams) -> Result<()> {
    let fail = |name: &'static str, reason: &str| {
        Err(Error::InvalidParameter {
            name,
            reason: reason.to_string(),
        })
    };
    if !(params.tolerance > 0.0 && params.tolerance.is_finite()) {
        return fail("tolerance", "must be positive");
    }
    if params.max_iterations < 1 {
        return fail("max_iterations", "must be at least 1");
    }
    if !(params.damping > 0.0 && params.damping < 1.0) {
        return fail("damping", "must lie strictly between 0 and 1");
    }
    Ok(())
}

fn finish(
    algorithm: Algorithm,
    names: &[String],
    values: &[f64],
    iterations: usize,
    converged: bool,
    tie_parameter: Option<f64>,
) -> RatingResult {
    let mut result = RatingResult {
        algorithm,
        scores: Default::default(),
        iterations,
        converged,
        tie_parameter,
    };
    for (name, value) in names.iter().zip(values) {
        result.scores.insert(name.clone(), *value);
    }
    result
}

/// `wins[i][j]` and `ties[i][j]` by direct accumulation.
fn dense(table: &Table) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = table.names.len();
    let mut wins = vec![vec![0.0; n]; n];
    let mut ties = vec![vec![0.0; n]; n];
    for &(l, r, winner, weight) in &table.rows {
        if l == r {
            continue;
        }
        match winner {
            Winner::Left => wins[l][r] += weight,
            Winner::Right => wins[r][l] += weight,
            Winner::Draw => {
                ties[l][r] += weight;
                ties[r][l] += weight;
            }
        }
    }
    (wins, ties)
}

fn tie_split(wins: &[Vec<f64>], ties: &[Vec<f64>]) -> Vec<Vec<f64>> {
    wins.iter()
        .zip(ties)
        .map(|(w, t)| w.iter().zip(t).map(|(w, t)| w + t / 2.0).collect())
        .collect()
}

pub fn naive_counting(records: &[ComparisonRecord], index: Option<&Index>) -> Result<RatingResult> {
    let table = tabulate(records, index)?;
    let mut scores = vec![0.0; table.names.len()];
    for &(l, r, winner, weight) in &table.rows {
        if l == r {
            continue;
        }
        match winner {
            Winner::Left => scores[l] += weight,
            Winner::Right => scores[r] += weight,
            Winner::Draw => {
                scores[l] += weight / 2.0;
                scores[r] += weight / 2.0;
            }
        }
    }
    Ok(finish(Algorithm::Counting, &table.names, &scores, 0, true, None))
}

pub fn naive_average_win_rate(
    records: &[ComparisonRecord],
    index: Option<&Index>,
) -> Result<RatingResult> {
    let table = tabulate(records, index)?;
    let n = table.names.len();
    let (wins, ties) = dense(&table);
    let mut scores = Vec::with_capacity(n);
    for i in 0..n {
        let mut rates = Vec::new();
        for j in 0..n {
            let met = wins[i][j] + wins[j][i] + ties[i][j];
            if met > 0.0 {
                rates.push((wins[i][j] + ties[i][j] / 2.0) / met);
            }
        }
        scores.push(if rates.is_empty() {
            0.5
        } else {
            rates.iter().sum::<f64>() / rates.len() as f64
        });
    }
    Ok(finish(Algorithm::AverageWinRate, &table.names, &scores, 0, true, None))
}

pub fn naive_elo(
    records: &[ComparisonRecord],
    index: Option<&Index>,
    params: &EloParams,
) -> Result<RatingResult> {
    check_elo(params)?;
    let table = tabulate(records, index)?;
    let mut ratings = vec![params.initial; table.names.len()];
    for &(l, r, winner, weight) in &table.rows {
        if l == r {
            continue;
        }
        let expected_left = 1.0 / (1.0 + params.base.powf((ratings[r] - ratings[l]) / params.scale));
        let expected_right = 1.0 - expected_left;
        let (actual_left, actual_right) = match winner {
            Winner::Left => (1.0, 0.0),
            Winner::Right => (0.0, 1.0),
            Winner::Draw => (0.5, 0.5),
        };
        ratings[l] += weight * params.k * (actual_left - expected_left);
        ratings[r] += weight * params.k * (actual_right - expected_right);
    }
    Ok(finish(Algorithm::Elo, &table.names, &ratings, 0, true, None))
}

/// The per-item ratio with the shared fallbacks: unplayed items keep `previous`,
/// anything outside the strength bounds is pinned to them (and flagged).
fn pinned_ratio(previous: f64, num: f64, den: f64) -> (f64, bool) {
    let raw = if den > 0.0 {
        num / den
    } else if num > 0.0 {
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

fn rescale_to_unit_geometric_mean(strengths: &mut [f64]) {
    let product_log: f64 = strengths.iter().map(|s| s.ln()).sum();
    let mean = (product_log / strengths.len() as f64).exp();
    for s in strengths {
        *s /= mean;
    }
}

fn largest_change(a: &[f64], b: &[f64]) -> f64 {
    let mut largest = 0.0f64;
    for i in 0..a.len() {
        largest = largest.max((a[i] - b[i]).abs());
    }
    largest
}

fn has_weight(wins: &[Vec<f64>], ties: &[Vec<f64>]) -> bool {
    wins.iter().flatten().chain(ties.iter().flatten()).any(|&x| x > 0.0)
}

pub fn naive_bradley_terry(
    records: &[ComparisonRecord],
    index: Option<&Index>,
    params: &IterParams,
) -> Result<RatingResult> {
    check_iter(params)?;
    let table = tabulate(records, index)?;
    let n = table.names.len();
    let (wins, ties) = dense(&table);
    let mut strengths = vec![1.0; n];
    if !has_weight(&wins, &ties) {
        return Ok(finish(Algorithm::BradleyTerry, &table.names, &strengths, 0, true, None));
    }
    let a = tie_split(&wins, &ties);

    let mut iterations = 0;
    let mut converged = false;
    while !converged && iterations < params.max_iterations {
        iterations += 1;
        let before = strengths.clone();
        let mut pinned = false;
        // Each item is updated in place before the next one is visited.
        for i in 0..n {
            let mut num = 0.0;
            let mut den = 0.0;
            for j in 0..n {
                if i == j || a[i][j] + a[j][i] == 0.0 {
                    continue;
                }
                let sum = strengths[i] + strengths[j];
                num += a[i][j] * strengths[j] / sum;
                den += a[j][i] / sum;
            }
            let (value, hit) = pinned_ratio(strengths[i], num, den);
            strengths[i] = value;
            pinned |= hit;
        }
        rescale_to_unit_geometric_mean(&mut strengths);
        let change = largest_change(&before, &strengths);
        converged = change < params.tolerance && !pinned;
    }
    Ok(finish(
        Algorithm::BradleyTerry,
        &table.names,
        &strengths,
        iterations,
        converged,
        None,
    ))
}

pub fn naive_newman(
    records: &[ComparisonRecord],
    index: Option<&Index>,
    params: &IterParams,
) -> Result<RatingResult> {
    check_iter(params)?;
    let table = tabulate(records, index)?;
    let n = table.names.len();
    let (wins, ties) = dense(&table);
    let mut strengths = vec![1.0; n];
    let mut nu = 1.0;
    if !has_weight(&wins, &ties) {
        return Ok(finish(Algorithm::Newman, &table.names, &strengths, 0, true, Some(nu)));
    }

    let mut iterations = 0;
    let mut converged = false;
    while !converged && iterations < params.max_iterations {
        iterations += 1;
        let before = strengths.clone();
        let mut pinned = false;
        for i in 0..n {
            let mut num = 0.0;
            let mut den = 0.0;
            for j in 0..n {
                if i == j || wins[i][j] + wins[j][i] + ties[i][j] == 0.0 {
                    continue;
                }
                let (pi, pj) = (strengths[i], strengths[j]);
                let denominator = pi + pj + nu * (pi * pj).sqrt();
                num += (wins[i][j] + ties[i][j] / 2.0) * (pj + nu * (pi * pj).sqrt() / 2.0)
                    / denominator;
                den += (wins[j][i] + ties[i][j] / 2.0) * (1.0 + nu * (pj / pi).sqrt() / 2.0)
                    / denominator;
            }
            let (value, hit) = pinned_ratio(strengths[i], num, den);
            strengths[i] = value;
            pinned |= hit;
        }
        rescale_to_unit_geometric_mean(&mut strengths);
        // Tie propensity from the new strengths; sums run over ordered pairs.
        let mut tie_term = 0.0;
        let mut win_term = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (pi, pj) = (strengths[i], strengths[j]);
                let denominator = pi + pj + nu * (pi * pj).sqrt();
                tie_term += ties[i][j] * (pi + pj) / denominator;
                win_term += wins[i][j] * (pi * pj).sqrt() / denominator;
            }
        }
        tie_term /= 2.0;
        let next_nu = if win_term > 0.0 {
            (tie_term / win_term).min(MAX_TIE_PARAMETER)
        } else if tie_term > 0.0 {
            MAX_TIE_PARAMETER
        } else {
            nu
        };

        let change = largest_change(&before, &strengths).max((next_nu - nu).abs());
        nu = next_nu;
        converged = change < params.tolerance && !pinned;
    }
    Ok(finish(
        Algorithm::Newman,
        &table.names,
        &strengths,
        iterations,
        converged,
        Some(nu),
    ))
}

pub fn naive_eigen(
    records: &[ComparisonRecord],
    index: Option<&Index>,
    params: &IterParams,
) -> Result<RatingResult> {
    check_iter(params)?;
    let table = tabulate(records, index)?;
    let n = table.names.len();
    let (wins, ties) = dense(&table);
    let mut v = vec![1.0 / n as f64; n];
    if !has_weight(&wins, &ties) {
        return Ok(finish(Algorithm::Eigen, &table.names, &v, 0, true, None));
    }
    let a = tie_split(&wins, &ties);
    let shift = a.iter().flatten().sum::<f64>() / n as f64;

    let mut iterations = 0;
    let mut converged = false;
    while !converged && iterations < params.max_iterations {
        iterations += 1;
        let mut next = vec![0.0; n];
        for i in 0..n {
            next[i] = shift * v[i];
            for j in 0..n {
                next[i] += a[i][j] * v[j];
            }
        }
        let total: f64 = next.iter().sum();
        for x in &mut next {
            *x /= total;
        }
        let change = largest_change(&v, &next);
        v = next;
        converged = change < params.tolerance;
    }
    Ok(finish(Algorithm::Eigen, &table.names, &v, iterations, converged, None))
}

pub fn naive_pagerank(
    records: &[ComparisonRecord],
    index: Option<&Index>,
    params: &IterParams,
) -> Result<RatingResult> {
    check_iter(params)?;
    let table = tabulate(records, index)?;
    let n = table.names.len();
    if n == 0 {
        return Ok(finish(Algorithm::Pagerank, &table.names, &[], 0, true, None));
    }
    let (wins, ties) = dense(&table);
    let a = tie_split(&wins, &ties);

    // Column-stochastic transition matrix: column j spreads j's mass over the items
    // that beat it, or uniformly when j has no outgoing weight.
    let mut transition = vec![vec![0.0; n]; n];
    for j in 0..n {
        let out: f64 = (0..n).map(|i| a[i][j]).sum();
        for i in 0..n {
            transition[i][j] = if out > 0.0 { a[i][j] / out } else { 1.0 / n as f64 };
        }
    }

    let d = params.damping;
    let mut p = vec![1.0 / n as f64; n];
    let mut iterations = 0;
    let mut converged = false;
    while !converged && iterations < params.max_iterations {
        iterations += 1;
        let mut next = vec![(1.0 - d) / n as f64; n];
        for i in 0..n {
            for j in 0..n {
                next[i] += d * transition[i][j] * p[j];
            }
        }
        let total: f64 = next.iter().sum();
        for x in &mut next {
            *x /= total;
        }
        let change = largest_change(&p, &next);
        p = next;
        converged = change < params.tolerance;
    }
    Ok(finish(Algorithm::Pagerank, &table.names, &p, iterations, converged, None))
}

/// Dispatches to the naive implementation of `algorithm`.
pub fn naive_rate(
    records: &[ComparisonRecord],
    index: Option<&Index>,
    algorithm: Algorithm,
    params: &AlgorithmParams,
) -> Result<RatingResult> {
    let iter = params.iter(algorithm);
    match algorithm {
        Algorithm::Counting => naive_counting(records, index),
        Algorithm::AverageWinRate => naive_average_win_rate(records, index),
        Algorithm::Elo => naive_elo(records, index, &params.elo()),
        Algorithm::BradleyTerry => naive_bradley_terry(records, index, &iter),
        Algorithm::Newman => naive_newman(records, index, &iter),
        Algorithm::Eigen => naive_eigen(records, index, &iter),
        Algorithm::Pagerank => naive_pagerank(records, index, &iter),
    }
}
