use std::panic::{catch_unwind, AssertUnwindSafe};

use pairrank::{
    rate, validate_batch, Algorithm, AlgorithmParams, ComparisonRecord, Error, Index,
    RatingResult, Winner,
};
use serde::Serialize;

use crate::differential::max_deviation;
use crate::naive::naive_rate;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<Algorithm>,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PropertyReport {
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Runs `check`, recording a panic as a failure instead of propagating it.
    fn record<F>(&mut self, name: &str, algorithm: Option<Algorithm>, check: F)
    where
        F: FnOnce() -> Result<(), String>,
    {
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let (passed, detail) = match outcome {
            Ok(Ok(())) => (true, String::new()),
            Ok(Err(detail)) => (false, detail),
            Err(panic) => {
                let message = panic
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {message}"))
            }
        };
        self.checks.push(PropertyCheck {
            name: name.to_string(),
            algorithm,
            passed,
            detail,
        });
    }
}

fn record(left: &str, right: &str, winner: Winner) -> ComparisonRecord {
    ComparisonRecord::new(left, right, winner)
}

fn neutral_score(algorithm: Algorithm, n: usize) -> f64 {
    match algorithm {
        Algorithm::Counting => 0.0,
        Algorithm::AverageWinRate => 0.5,
        Algorithm::Elo => 1000.0,
        Algorithm::BradleyTerry | Algorithm::Newman => 1.0,
        Algorithm::Eigen | Algorithm::Pagerank => 1.0 / n as f64,
    }
}

/// Runs both implementations and requires them to agree, on the scores when both
/// succeed and on the error otherwise. Returns the optimized outcome.
fn both(
    records: &[ComparisonRecord],
    index: Option<&Index>,
    algorithm: Algorithm,
    params: &AlgorithmParams,
) -> Result<Result<RatingResult, Error>, String> {
    let optimized = rate(records, index, algorithm, params);
    let naive = naive_rate(records, index, algorithm, params);
    match (&optimized, &naive) {
        (Ok(a), Ok(b)) => {
            let deviation = max_deviation(a, b);
            if deviation > 1e-6 {
                return Err(format!("implementations differ by {deviation}"));
            }
        }
        (Err(a), Err(b)) if a.to_string() == b.to_string() => {}
        _ => return Err(format!("optimized {optimized:?} but naive {naive:?}")),
    }
    Ok(optimized)
}

fn expect_ok(outcome: Result<RatingResult, Error>) -> Result<RatingResult, String> {
    let result = outcome.map_err(|e| format!("unexpected error: {e}"))?;
    if result.values().all(f64::is_finite) {
        Ok(result)
    } else {
        Err(format!("non-finite scores: {:?}", result.scores))
    }
}

fn all_equal(result: &RatingResult) -> Result<(), String> {
    let first = result.values().next().unwrap_or(0.0);
    if result.values().all(|s| (s - first).abs() <= 1e-9 * first.abs().max(1.0)) {
        Ok(())
    } else {
        Err(format!("scores differ: {:?}", result.scores))
    }
}

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

/// The corner-case battery: every check must end in the documented fallback or the
/// documented error, identically for both implementations, and never panic.
pub fn property_suite() -> PropertyReport {
    let mut report = PropertyReport::default();
    let defaults = AlgorithmParams::default();

    for algorithm in Algorithm::ALL {
        let a = Some(algorithm);

        report.record("empty records", a, || {
            let result = expect_ok(both(&[], None, algorithm, &defaults)?)?;
            ensure(result.scores.is_empty(), || format!("{:?}", result.scores))
        });

        report.record("index items without records", a, || {
            let index = Index::from_names(["x", "y", "z"]);
            let result = expect_ok(both(&[], Some(&index), algorithm, &defaults)?)?;
            let neutral = neutral_score(algorithm, 3);
            ensure(
                result.scores.len() == 3 && result.values().all(|s| (s - neutral).abs() < 1e-12),
                || format!("{:?}", result.scores),
            )
        });

        report.record("single item", a, || {
            let records = [record("solo", "solo", Winner::Left)];
            let result = expect_ok(both(&records, None, algorithm, &defaults)?)?;
            ensure(
                result.scores.len() == 1 && result.scores["solo"] == neutral_score(algorithm, 1),
                || format!("{:?}", result.scores),
            )
        });

        report.record("single record", a, || {
            let records = [record("A", "B", Winner::Left)];
            let result = expect_ok(both(&records, None, algorithm, &defaults)?)?;
            ensure(result.scores["A"] > result.scores["B"], || format!("{:?}", result.scores))
        });

        report.record("all ties", a, || {
            let records = [
                record("A", "B", Winner::Draw),
                record("B", "C", Winner::Draw),
                record("C", "A", Winner::Draw),
            ];
            all_equal(&expect_ok(both(&records, None, algorithm, &defaults)?)?)
        });

        report.record("undefeated item", a, || {
            let records = [
                record("A", "B", Winner::Left),
                record("A", "C", Winner::Left),
                record("B", "C", Winner::Left),
                record("C", "B", Winner::Left),
            ];
            let result = expect_ok(both(&records, None, algorithm, &defaults)?)?;
            if matches!(algorithm, Algorithm::BradleyTerry | Algorithm::Newman) {
                ensure(!result.converged, || "converged on a divergent likelihood".into())?;
            }
            Ok(())
        });

        for weight in [-1.0, f64::NAN, f64::INFINITY] {
            report.record(&format!("illegal weight {weight}"), a, || {
                let records = [
                    record("A", "B", Winner::Left),
                    ComparisonRecord::weighted("B", "C", Winner::Right, weight),
                ];
                match both(&records, None, algorithm, &defaults)? {
                    Err(Error::IllegalWeight { position: 1, .. }) => Ok(()),
                    other => Err(format!("expected illegal weight, got {other:?}")),
                }
            });
        }

        report.record("record outside a supplied index", a, || {
            let index = Index::from_names(["A", "B"]);
            let records = [record("A", "ghost", Winner::Left)];
            match both(&records, Some(&index), algorithm, &defaults)? {
                Err(Error::UnknownItem(name)) if name == "ghost" => Ok(()),
                other => Err(format!("expected unknown item, got {other:?}")),
            }
        });

        report.record("self-comparisons are ignored", a, || {
            let plain = [record("A", "B", Winner::Left), record("B", "C", Winner::Draw)];
            let mut noisy = plain.to_vec();
            noisy.insert(1, record("B", "B", Winner::Left));
            noisy.push(record("A", "A", Winner::Draw));
            let clean = expect_ok(both(&plain, None, algorithm, &defaults)?)?;
            let dirty = expect_ok(both(&noisy, None, algorithm, &defaults)?)?;
            ensure(clean == dirty, || format!("{:?} vs {:?}", clean.scores, dirty.scores))
        });

        if algorithm != Algorithm::Elo {
            report.record("duplicate records equal a doubled weight", a, || {
                let base = [record("A", "B", Winner::Left), record("B", "C", Winner::Left)];
                let duplicated = [base[0].clone(), base[0].clone(), base[1].clone()];
                let weighted = [
                    ComparisonRecord::weighted("A", "B", Winner::Left, 2.0),
                    base[1].clone(),
                ];
                let x = expect_ok(both(&duplicated, None, algorithm, &defaults)?)?;
                let y = expect_ok(both(&weighted, None, algorithm, &defaults)?)?;
                ensure(max_deviation(&x, &y) < 1e-9, || format!("{:?} vs {:?}", x.scores, y.scores))
            });
        }

        for weight in [1e12, 1e-12] {
            report.record(&format!("extreme weight {weight:e}"), a, || {
                let records = [
                    ComparisonRecord::weighted("A", "B", Winner::Left, weight),
                    record("B", "A", Winner::Left),
                    record("B", "C", Winner::Draw),
                ];
                expect_ok(both(&records, None, algorithm, &defaults)?).map(|_| ())
            });
        }
    }

    report.record("invalid parameters are rejected by both", None, || {
        let records = [record("A", "B", Winner::Left)];
        let cases = [
            (Algorithm::Elo, AlgorithmParams { k: Some(-1.0), ..Default::default() }),
            (Algorithm::Elo, AlgorithmParams { base: Some(1.0), ..Default::default() }),
            (Algorithm::BradleyTerry, AlgorithmParams { tolerance: Some(0.0), ..Default::default() }),
            (Algorithm::Newman, AlgorithmParams { max_iterations: Some(0), ..Default::default() }),
            (Algorithm::Pagerank, AlgorithmParams { damping: Some(1.0), ..Default::default() }),
        ];
        for (algorithm, params) in cases {
            match both(&records, None, algorithm, &params)? {
                Err(Error::InvalidParameter { .. }) => {}
                other => return Err(format!("{algorithm}: expected invalid parameter, got {other:?}")),
            }
        }
        Ok(())
    });

    report.record("mismatched vector lengths", None, || {
        match validate_batch(&["A", "B"], &["B"], &[Winner::Left, Winner::Right], None) {
            Err(Error::MismatchedLengths { second: "rights", .. }) => {}
            other => return Err(format!("{other:?}")),
        }
        match validate_batch(&["A"], &["B"], &[Winner::Left], Some(&[1.0, 2.0])) {
            Err(Error::MismatchedLengths { second: "weights", .. }) => Ok(()),
            other => Err(format!("{other:?}")),
        }
    });

    report.record("negative weight in columnar input", None, || {
        match validate_batch(&["A"], &["B"], &[Winner::Left], Some(&[-0.5])) {
            Err(Error::IllegalWeight { position: 0, .. }) => Ok(()),
            other => Err(format!("{other:?}")),
        }
    });

    report.record("unknown winner labels", None, || {
        for label in ["won", "", "lefty", "1"] {
            match label.parse::<Winner>() {
                Err(Error::UnknownWinner(l)) if l == label => {}
                other => return Err(format!("{label:?}: {other:?}")),
            }
        }
        let json = r#"{"left": "A", "right": "B", "winner": "won"}"#;
        ensure(serde_json::from_str::<ComparisonRecord>(json).is_err(), || {
            "accepted winner \"won\"".into()
        })
    });

    report
}
