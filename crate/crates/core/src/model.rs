//! Comparison records and the name-to-id index the algorithms run on.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The outcome of a pairwise comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Winner {
    /// The left item won.
    #[serde(rename = "left")]
    Left,
    /// The right item won.
    #[serde(rename = "right")]
    Right,
    /// Neither item won.
    #[serde(rename = "tie", alias = "draw")]
    Draw,
}

impl Winner {
    pub const ALL: [Winner; 3] = [Winner::Left, Winner::Right, Winner::Draw];

    /// Label used in CSV and JSON.
    pub fn as_str(self) -> &'static str {
        match self {
            Winner::Left => "left",
            Winner::Right => "right",
            Winner::Draw => "tie",
        }
    }

    /// Score credited to the left item: 1 for a win, 0.5 for a draw, 0 for a loss.
    pub fn left_score(self) -> f64 {
        match self {
            Winner::Left => 1.0,
            Winner::Right => 0.0,
            Winner::Draw => 0.5,
        }
    }
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Winner {
    type Err = Error;

    /// Case-insensitive: `left`, `right`, and `tie` or `draw`.
    fn from_str(s: &str) -> Result<Self> {
        let label = s.trim();
        if label.eq_ignore_ascii_case("left") {
            Ok(Winner::Left)
        } else if label.eq_ignore_ascii_case("right") {
            Ok(Winner::Right)
        } else if label.eq_ignore_ascii_case("tie") || label.eq_ignore_ascii_case("draw") {
            Ok(Winner::Draw)
        } else {
            Err(Error::UnknownWinner(s.to_string()))
        }
    }
}

fn default_weight() -> f64 {
    1.0
}

/// One judgment between two named items.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub left: String,
    pub right: String,
    pub winner: Winner,
    #[serde(default = "default_weight")]
    pub weight: f64,
}

impl ComparisonRecord {
    pub fn new(left: impl Into<String>, right: impl Into<String>, winner: Winner) -> Self {
        Self::weighted(left, right, winner, 1.0)
    }

    pub fn weighted(
        left: impl Into<String>,
        right: impl Into<String>,
        winner: Winner,
        weight: f64,
    ) -> Self {
        Self {
            left: left.into(),
            right: right.into(),
            winner,
            weight,
        }
    }

    pub fn is_self_comparison(&self) -> bool {
        self.left == self.right
    }
}

pub(crate) fn check_weight(position: usize, weight: f64) -> Result<()> {
    if weight.is_finite() && weight >= 0.0 {
        Ok(())
    } else {
        Err(Error::IllegalWeight { position, weight })
    }
}

/// Zips columnar inputs into records.
///
/// Weights default to 1.0 when `weights` is `None`.
pub fn validate_batch<L, R>(
    lefts: &[L],
    rights: &[R],
    winners: &[Winner],
    weights: Option<&[f64]>,
) -> Result<Vec<ComparisonRecord>>
where
    L: AsRef<str>,
    R: AsRef<str>,
{
    let mismatch = |second: &'static str, second_len: usize| Error::MismatchedLengths {
        first: "lefts",
        first_len: lefts.len(),
        second,
        second_len,
    };
    if rights.len() != lefts.len() {
        return Err(mismatch("rights", rights.len()));
    }
    if winners.len() != lefts.len() {
        return Err(mismatch("winners", winners.len()));
    }
    if let Some(weights) = weights {
        if weights.len() != lefts.len() {
            return Err(mismatch("weights", weights.len()));
        }
    }

    (0..lefts.len())
        .map(|i| {
            let weight = weights.map_or(1.0, |w| w[i]);
            check_weight(i, weight)?;
            Ok(ComparisonRecord::weighted(
                lefts[i].as_ref(),
                rights[i].as_ref(),
                winners[i],
                weight,
            ))
        })
        .collect()
}

/// A comparison with item names replaced by index ids.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndexedComparison {
    pub left: usize,
    pub right: usize,
    pub winner: Winner,
    pub weight: f64,
}

/// Bidirectional mapping between item names and dense ids `0..len()`.
///
/// Ids are assigned in order of first appearance, scanning left then right of each
/// record in turn.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Index {
    names: Vec<String>,
    ids: HashMap<String, usize>,
}

impl Index {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn build(records: &[ComparisonRecord]) -> Self {
        let mut index = Self::new();
        for record in records {
            index.insert(&record.left);
            index.insert(&record.right);
        }
        index
    }

    /// Builds an index over the given names; duplicates keep their first id.
    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut index = Self::new();
        for name in names {
            index.insert(name.as_ref());
        }
        index
    }

    fn insert(&mut self, name: &str) -> usize {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        id
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: usize) -> Option<&str> {
        self.names.get(id).map(String::as_str)
    }

    /// Names in id order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn contains(&self, name: &str) -> bool {
        self.ids.contains_key(name)
    }

    /// Translates records to ids, rejecting unknown names and illegal weights.
    pub fn encode(&self, records: &[ComparisonRecord]) -> Result<Vec<IndexedComparison>> {
        records
            .iter()
            .enumerate()
            .map(|(position, record)| {
                check_weight(position, record.weight)?;
                let lookup = |name: &str| {
                    self.id(name)
                        .ok_or_else(|| Error::UnknownItem(name.to_string()))
                };
                Ok(IndexedComparison {
                    left: lookup(&record.left)?,
                    right: lookup(&record.right)?,
                    winner: record.winner,
                    weight: record.weight,
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn listing_records() -> Vec<ComparisonRecord> {
        vec![
            ComparisonRecord::new("pizza", "burger", Winner::Left),
            ComparisonRecord::new("burger", "sushi", Winner::Right),
            ComparisonRecord::new("pizza", "sushi", Winner::Draw),
        ]
    }

    #[test]
    fn index_uses_first_appearance_order() {
        let index = Index::build(&listing_records());
        assert_eq!(index.names(), ["pizza", "burger", "sushi"]);
        assert_eq!(index.id("pizza"), Some(0));
        assert_eq!(index.id("burger"), Some(1));
        assert_eq!(index.id("sushi"), Some(2));
    }

    #[test]
    fn index_of_nothing_is_empty() {
        let index = Index::build(&[]);
        assert!(index.is_empty());
        assert_eq!(index.len(), 0);
    }

    #[test]
    fn self_pair_yields_single_entry() {
        let index = Index::build(&[ComparisonRecord::new("A", "A", Winner::Left)]);
        assert_eq!(index.names(), ["A"]);
    }

    #[test]
    fn interleaves_left_and_right() {
        let records = vec![
            ComparisonRecord::new("a", "b", Winner::Left),
            ComparisonRecord::new("c", "a", Winner::Left),
            ComparisonRecord::new("d", "e", Winner::Left),
        ];
        assert_eq!(Index::build(&records).names(), ["a", "b", "c", "d", "e"]);
    }

    #[test]
    fn winner_labels_parse_case_insensitively() {
        assert_eq!("left".parse::<Winner>().unwrap(), Winner::Left);
        assert_eq!("RIGHT".parse::<Winner>().unwrap(), Winner::Right);
        assert_eq!("Tie".parse::<Winner>().unwrap(), Winner::Draw);
        assert_eq!("draw".parse::<Winner>().unwrap(), Winner::Draw);
        assert_eq!(
            "won".parse::<Winner>(),
            Err(Error::UnknownWinner("won".into()))
        );
        assert!("".parse::<Winner>().is_err());
    }

    #[test]
    fn batch_defaults_weight() {
        let records = validate_batch(&["A"], &["B"], &[Winner::Left], None).unwrap();
        assert_eq!(records, [ComparisonRecord::weighted("A", "B", Winner::Left, 1.0)]);
    }

    #[test]
    fn batch_rejects_mismatched_lengths() {
        let err = validate_batch(&["A", "B"], &["C"], &[Winner::Left], None).unwrap_err();
        assert!(matches!(err, Error::MismatchedLengths { .. }));
        assert!(err.to_string().starts_with("mismatched lengths"));

        let err = validate_batch(&["A"], &["B"], &[Winner::Left], Some(&[1.0, 2.0])).unwrap_err();
        assert!(matches!(err, Error::MismatchedLengths { second: "weights", .. }));
    }

    #[test]
    fn batch_rejects_illegal_weights() {
        for weight in [-1.0, f64::NAN, f64::INFINITY] {
            let err =
                validate_batch(&["A"], &["B"], &[Winner::Left], Some(&[weight])).unwrap_err();
            assert!(err.to_string().starts_with("illegal weight"));
        }
    }

    #[test]
    fn batch_accepts_all_empty() {
        let empty: [&str; 0] = [];
        assert!(validate_batch(&empty, &empty, &[], Some(&[])).unwrap().is_empty());
    }

    #[test]
    fn encode_rejects_unknown_names() {
        let index = Index::from_names(["pizza"]);
        let err = index.encode(&listing_records()).unwrap_err();
        assert_eq!(err, Error::UnknownItem("burger".into()));
    }

    #[test]
    fn encode_rejects_negative_weight() {
        let records = vec![ComparisonRecord::weighted("A", "B", Winner::Left, -0.5)];
        let index = Index::build(&records);
        assert!(matches!(
            index.encode(&records),
            Err(Error::IllegalWeight { position: 0, .. })
        ));
    }

    mod properties {
        use proptest::prelude::*;

        use super::super::*;

        fn records() -> impl Strategy<Value = Vec<ComparisonRecord>> {
            prop::collection::vec(("[a-f]", "[a-f]", 0..3usize), 0..40).prop_map(|rows| {
                rows.into_iter()
                    .map(|(l, r, w)| ComparisonRecord::new(l, r, Winner::ALL[w]))
                    .collect()
            })
        }

        proptest! {
            #[test]
            fn index_is_a_bijection(records in records()) {
                let index = Index::build(&records);
                for id in 0..index.len() {
                    prop_assert_eq!(index.id(index.name(id).unwrap()), Some(id));
                }
                let mut distinct: Vec<&str> = records
                    .iter()
                    .flat_map(|r| [r.left.as_str(), r.right.as_str()])
                    .collect();
                distinct.sort_unstable();
                distinct.dedup();
                prop_assert_eq!(index.len(), distinct.len());
                for name in distinct {
                    prop_assert!(index.contains(name));
                }
            }

            #[test]
            fn index_is_deterministic(records in records()) {
                prop_assert_eq!(Index::build(&records), Index::build(&records));
            }
        }
    }
}
