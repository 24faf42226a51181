use pairrank::{rate, Algorithm, RatingResult};
use serde::Serialize;

use crate::generator::DifferentialCase;
use crate::naive::naive_rate;

/// Outcome of one differential case.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub records: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CaseReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

/// Largest score difference, absolute for scores up to 1 in magnitude and relative
/// beyond that, or infinity when the item sets differ.
pub fn max_deviation(a: &RatingResult, b: &RatingResult) -> f64 {
    if a.scores.len() != b.scores.len() {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for ((name_a, x), (name_b, y)) in a.scores.iter().zip(&b.scores) {
        if name_a != name_b {
            return f64::INFINITY;
        }
        let d = (x - y).abs() / x.abs().max(y.abs()).max(1.0);
        if d.is_nan() {
            return f64::INFINITY;
        }
        worst = worst.max(d);
    }
    worst
}

pub fn run_case(case: &DifferentialCase) -> CaseReport {
    let optimized = rate(&case.records, None, case.algorithm, &case.params);
    let naive = naive_rate(&case.records, None, case.algorithm, &case.params);
    let (max_deviation, detail) = match (&optimized, &naive) {
        (Ok(a), Ok(b)) => (max_deviation(a, b), None),
        (Err(a), Err(b)) if a.to_string() == b.to_string() => (0.0, None),
        (a, b) => (
            f64::INFINITY,
            Some(format!("optimized: {:?}, naive: {:?}", a.as_ref().err(), b.as_ref().err())),
        ),
    };
    let pass = max_deviation <= case.tolerance;
    CaseReport {
        algorithm: case.algorithm,
        seed: case.seed,
        records: case.records.len(),
        max_deviation,
        tolerance: case.tolerance,
        pass,
        detail,
    }
}

/// Runs every algorithm on `instances` generated inputs, seeds `first_seed..`.
pub fn run_suite(first_seed: u64, instances: u64) -> Vec<CaseReport> {
    let mut reports = Vec::with_capacity(instances as usize * Algorithm::ALL.len());
    for seed in first_seed..first_seed + instances {
        for algorithm in Algorithm::ALL {
            reports.push(run_case(&DifferentialCase::generate(seed, algorithm)));
        }
    }
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(scores: &[(&str, f64)]) -> RatingResult {
        RatingResult {
            algorithm: Algorithm::Counting,
            scores: scores.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            iterations: 0,
            converged: true,
            tie_parameter: None,
        }
    }

    #[test]
    fn deviation_is_relative_only_for_large_scores() {
        let a = result(&[("x", 0.5), ("y", 2e10)]);
        let b = result(&[("x", 0.5 + 1e-7), ("y", 2e10 + 2e-6)]);
        assert!((max_deviation(&a, &b) - 1e-7).abs() < 1e-15);
        assert_eq!(max_deviation(&a, &result(&[("x", 0.5)])), f64::INFINITY);
        assert_eq!(max_deviation(&a, &result(&[("y", 2e10), ("x", 0.5)])), f64::INFINITY);
    }

    #[test]
    fn a_handful_of_cases_agree() {
        for report in run_suite(1000, 3) {
            assert!(report.pass, "{}", report.to_json());
        }
    }

    #[test]
    fn report_is_one_json_object() {
        let report = run_case(&DifferentialCase::generate(3, Algorithm::Newman));
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(value["algorithm"], "newman");
        assert_eq!(value["seed"], 3);
        assert!(value["pass"].as_bool().unwrap());
    }
}
