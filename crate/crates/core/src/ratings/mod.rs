//! The seven scoring algorithms behind one functional interface.
//!
//! Every public function takes the records, an optional pre-built [`Index`] and the
//! algorithm's parameters. When an index is supplied it fixes the output item set:
//! items it knows but the records never mention get the algorithm's neutral score.

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ComparisonRecord, Index, IndexedComparison};

mod bradley_terry;
mod counting;
mod elo;
mod linalg;

pub use bradley_terry::{bradley_terry, newman};
pub use counting::{average_win_rate, counting};
pub use elo::elo;
pub use linalg::{eigen, pagerank};

/// Lower and upper bounds on the unnormalized strengths of the likelihood models.
/// Hitting either bound means the maximum-likelihood estimate does not exist.
pub(crate) const MIN_STRENGTH: f64 = 1e-9;
pub(crate) const MAX_STRENGTH: f64 = 1e9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Counting,
    AverageWinRate,
    Elo,
    BradleyTerry,
    Newman,
    Eigen,
    Pagerank,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Counting,
        Algorithm::AverageWinRate,
        Algorithm::Elo,
        Algorithm::BradleyTerry,
        Algorithm::Newman,
        Algorithm::Eigen,
        Algorithm::Pagerank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Counting => "counting",
            Algorithm::AverageWinRate => "average-win-rate",
            Algorithm::Elo => "elo",
            Algorithm::BradleyTerry => "bradley-terry",
            Algorithm::Newman => "newman",
            Algorithm::Eigen => "eigen",
            Algorithm::Pagerank => "pagerank",
        }
    }

    pub fn is_iterative(self) -> bool {
        matches!(
            self,
            Algorithm::BradleyTerry | Algorithm::Newman | Algorithm::Eigen | Algorithm::Pagerank
        )
    }

    pub fn names() -> impl Iterator<Item = &'static str> {
        Self::ALL.iter().map(|a| a.name())
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EloParams {
    pub initial: f64,
    pub k: f64,
    pub scale: f64,
    pub base: f64,
}

impl Default for EloParams {
    fn default() -> Self {
        Self {
            initial: 1000.0,
            k: 30.0,
            scale: 400.0,
            base: 10.0,
        }
    }
}

impl EloParams {
    pub fn validate(&self) -> Result<()> {
        if !self.initial.is_finite() {
            return Err(Error::invalid("initial", "must be finite"));
        }
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(Error::invalid("k", "must be positive"));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::invalid("scale", "must be positive"));
        }
        if !(self.base.is_finite() && self.base > 1.0) {
            return Err(Error::invalid("base", "must be greater than 1"));
        }
        Ok(())
    }
}

/// Solver settings for the iterative algorithms. `damping` is read by PageRank only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterParams {
    /// Stop once no score moves by more than this in a sweep.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub damping: f64,
}

impl Default for IterParams {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            max_iterations: 100,
            damping: 0.85,
        }
    }
}

impl IterParams {
    /// PageRank defaults to a tighter tolerance than the other solvers.
    pub fn pagerank() -> Self {
        Self {
            tolerance: 1e-9,
            ..Self::default()
        }
    }

    pub fn for_algorithm(algorithm: Algorithm) -> Self {
        match algorithm {
            Algorithm::Pagerank => Self::pagerank(),
            _ => Self::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance", "must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations", "must be at least 1"));
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::invalid("damping", "must lie strictly between 0 and 1"));
        }
        Ok(())
    }
}

/// Optional overrides for every tunable parameter; unset fields take the
/// algorithm's defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgorithmParams {
    pub initial: Option<f64>,
    pub k: Option<f64>,
    pub scale: Option<f64>,
    pub base: Option<f64>,
    pub tolerance: Option<f64>,
    pub max_iterations: Option<usize>,
    pub damping: Option<f64>,
}

impl AlgorithmParams {
    pub fn elo(&self) -> EloParams {
        let defaults = EloParams::default();
        EloParams {
            initial: self.initial.unwrap_or(defaults.initial),
            k: self.k.unwrap_or(defaults.k),
            scale: self.scale.unwrap_or(defaults.scale),
            base: self.base.unwrap_or(defaults.base),
        }
    }

    /// Checks the parameters `algorithm` actually reads.
    pub fn validate(&self, algorithm: Algorithm) -> Result<()> {
        match algorithm {
            Algorithm::Counting | Algorithm::AverageWinRate => Ok(()),
            Algorithm::Elo => self.elo().validate(),
            iterative => self.iter(iterative).validate(),
        }
    }

    pub fn iter(&self, algorithm: Algorithm) -> IterParams {
        let defaults = IterParams::for_algorithm(algorithm);
        IterParams {
            tolerance: self.tolerance.unwrap_or(defaults.tolerance),
            max_iterations: self.max_iterations.unwrap_or(defaults.max_iterations),
            damping: self.damping.unwrap_or(defaults.damping),
        }
    }
}

/// Per-item scores in index order, plus solver metadata.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatingResult {
    pub algorithm: Algorithm,
    pub scores: IndexMap<String, f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Fitted tie propensity; set by Newman only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tie_parameter: Option<f64>,
}

impl RatingResult {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.scores.values().copied()
    }
}

/// Raw output of an algorithm over ids.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Scores {
    pub values: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub tie_parameter: Option<f64>,
}

impl Scores {
    pub fn exact(values: Vec<f64>) -> Self {
        Self {
            values,
            iterations: 0,
            converged: true,
            tie_parameter: None,
        }
    }

    pub fn into_result(self, algorithm: Algorithm, index: &Index) -> RatingResult {
        debug_assert_eq!(self.values.len(), index.len());
        RatingResult {
            algorithm,
            scores: index.names().iter().cloned().zip(self.values).collect(),
            iterations: self.iterations,
            converged: self.converged,
            tie_parameter: self.tie_parameter,
        }
    }
}

pub(crate) fn prepare<'a>(
    records: &[ComparisonRecord],
    index: Option<&'a Index>,
) -> Result<(Cow<'a, Index>, Vec<IndexedComparison>)> {
    let index = match index {
        Some(index) => Cow::Borrowed(index),
        None => Cow::Owned(Index::build(records)),
    };
    let comparisons = index.encode(records)?;
    Ok((index, comparisons))
}

/// Runs `algorithm` on named records.
pub fn rate(
    records: &[ComparisonRecord],
    index: Option<&Index>,
    algorithm: Algorithm,
    params: &AlgorithmParams,
) -> Result<RatingResult> {
    params.validate(algorithm)?;
    let (index, comparisons) = prepare(records, index)?;
    rate_indexed(&index, &comparisons, algorithm, params)
}

/// Runs `algorithm` on comparisons already encoded against `index`.
pub fn rate_indexed(
    index: &Index,
    comparisons: &[IndexedComparison],
    algorithm: Algorithm,
    params: &AlgorithmParams,
) -> Result<RatingResult> {
    let n = index.len();
    if let Some(c) = comparisons.iter().find(|c| c.left >= n || c.right >= n) {
        return Err(Error::UnknownItem(format!("#{}", c.left.max(c.right))));
    }
    params.validate(algorithm)?;
    let scores = match algorithm {
        Algorithm::Counting => counting::counting_scores(comparisons, n),
        Algorithm::AverageWinRate => counting::average_win_rate_scores(comparisons, n),
        Algorithm::Elo => elo::elo_scores(comparisons, n, &params.elo()),
        Algorithm::BradleyTerry => {
            bradley_terry::bradley_terry_scores(comparisons, n, &params.iter(algorithm))
        }
        Algorithm::Newman => bradley_terry::newman_scores(comparisons, n, &params.iter(algorithm)),
        Algorithm::Eigen => linalg::eigen_scores(comparisons, n, &params.iter(algorithm)),
        Algorithm::Pagerank => linalg::pagerank_scores(comparisons, n, &params.iter(algorithm)),
    };
    Ok(scores.into_result(algorithm, index))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterDescriptor {
    pub name: &'static str,
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub default: f64,
    pub description: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgorithmDescriptor {
    pub name: &'static str,
    pub description: &'static str,
    pub iterative: bool,
    pub parameters: Vec<ParameterDescriptor>,
}

pub fn list_algorithms() -> Vec<AlgorithmDescriptor> {
    Algorithm::ALL.into_iter().map(describe).collect()
}

fn describe(algorithm: Algorithm) -> AlgorithmDescriptor {
    let real = |name, default, description| ParameterDescriptor {
        name,
        kind: "real",
        default,
        description,
    };
    let parameters = match algorithm {
        Algorithm::Counting | Algorithm::AverageWinRate => Vec::new(),
        Algorithm::Elo => {
            let d = EloParams::default();
            vec![
                real("initial", d.initial, "starting rating of every item"),
                real("k", d.k, "update step size"),
                real("scale", d.scale, "rating difference that multiplies the odds by base"),
                real("base", d.base, "base of the logistic expected score"),
            ]
        }
        iterative => {
            let d = IterParams::for_algorithm(iterative);
            let mut params = vec![
                real("tolerance", d.tolerance, "largest score change accepted as converged"),
                ParameterDescriptor {
                    name: "max_iterations",
                    kind: "integer",
                    default: d.max_iterations as f64,
                    description: "sweep limit",
                },
            ];
            if iterative == Algorithm::Pagerank {
                params.push(real("damping", d.damping, "probability of following an edge"));
            }
            params
        }
    };
    let description = match algorithm {
        Algorithm::Counting => "weighted wins, with ties counted as half a win",
        Algorithm::AverageWinRate => "mean win rate against each opponent met",
        Algorithm::Elo => "sequential Elo updates in input order",
        Algorithm::BradleyTerry => "maximum-likelihood Bradley-Terry strengths",
        Algorithm::Newman => "Bradley-Terry strengths with a fitted tie propensity",
        Algorithm::Eigen => "principal eigenvector of the win matrix",
        Algorithm::Pagerank => "stationary distribution of the loser-to-winner walk",
    };
    AlgorithmDescriptor {
        name: algorithm.name(),
        description,
        iterative: algorithm.is_iterative(),
        parameters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_algorithms_are_listed() {
        let list = list_algorithms();
        assert_eq!(list.len(), 7);
        assert!(list.iter().any(|a| a.name == "bradley-terry"));
        let elo = list.iter().find(|a| a.name == "elo").unwrap();
        let k = elo.parameters.iter().find(|p| p.name == "k").unwrap();
        assert_eq!(k.default, 30.0);
        let pagerank = list.iter().find(|a| a.name == "pagerank").unwrap();
        let damping = pagerank.parameters.iter().find(|p| p.name == "damping").unwrap();
        assert_eq!(damping.default, 0.85);
    }

    #[test]
    fn names_round_trip() {
        for algorithm in Algorithm::ALL {
            assert_eq!(algorithm.name().parse::<Algorithm>().unwrap(), algorithm);
        }
        assert_eq!(
            "glicko".parse::<Algorithm>(),
            Err(Error::UnknownAlgorithm("glicko".into()))
        );
    }

    #[test]
    fn overrides_fall_back_to_defaults() {
        let params = AlgorithmParams {
            k: Some(16.0),
            max_iterations: Some(7),
            ..Default::default()
        };
        assert_eq!(params.elo().k, 16.0);
        assert_eq!(params.elo().initial, 1000.0);
        assert_eq!(params.iter(Algorithm::Eigen).max_iterations, 7);
        assert_eq!(params.iter(Algorithm::Eigen).tolerance, 1e-6);
        assert_eq!(params.iter(Algorithm::Pagerank).tolerance, 1e-9);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let records = vec![ComparisonRecord::new("a", "b", crate::Winner::Left)];
        let bad = [
            (Algorithm::Elo, AlgorithmParams { k: Some(0.0), ..Default::default() }),
            (Algorithm::Elo, AlgorithmParams { base: Some(1.0), ..Default::default() }),
            (Algorithm::Elo, AlgorithmParams { scale: Some(-1.0), ..Default::default() }),
            (Algorithm::BradleyTerry, AlgorithmParams { tolerance: Some(0.0), ..Default::default() }),
            (Algorithm::Newman, AlgorithmParams { max_iterations: Some(0), ..Default::default() }),
            (Algorithm::Pagerank, AlgorithmParams { damping: Some(1.0), ..Default::default() }),
        ];
        for (algorithm, params) in bad {
            let err = rate(&records, None, algorithm, &params).unwrap_err();
            assert!(matches!(err, Error::InvalidParameter { .. }), "{algorithm}: {err}");
        }
    }

    #[test]
    fn supplied_index_fixes_the_item_set() {
        let records = vec![ComparisonRecord::new("a", "b", crate::Winner::Left)];
        let index = Index::from_names(["z", "a", "b"]);
        for algorithm in Algorithm::ALL {
            let result = rate(&records, Some(&index), algorithm, &AlgorithmParams::default()).unwrap();
            let names: Vec<&str> = result.scores.keys().map(String::as_str).collect();
            assert_eq!(names, ["z", "a", "b"], "{algorithm}");
        }
    }

    #[test]
    fn unknown_item_in_supplied_index() {
        let records = vec![ComparisonRecord::new("a", "b", crate::Winner::Left)];
        let index = Index::from_names(["a"]);
        for algorithm in Algorithm::ALL {
            let err = rate(&records, Some(&index), algorithm, &AlgorithmParams::default());
            assert_eq!(err, Err(Error::UnknownItem("b".into())));
        }
    }
}
