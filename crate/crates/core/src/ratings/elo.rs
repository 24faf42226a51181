use crate::error::Result;
use crate::model::{ComparisonRecord, Index, IndexedComparison};

use super::{prepare, Algorithm, EloParams, RatingResult, Scores};

/// Sequential Elo ratings, applying the records strictly in input order.
///
/// For each record the left item's expected score is
/// `1 / (1 + base^((right - left) / scale))`; both ratings then move by
/// `weight * k * (actual - expected)` in opposite directions, so every update is
/// zero-sum. Self-comparisons are skipped.
pub fn elo(
    records: &[ComparisonRecord],
    index: Option<&Index>,
    params: &EloParams,
) -> Result<RatingResult> {
    params.validate()?;
    let (index, comparisons) = prepare(records, index)?;
    Ok(elo_scores(&comparisons, index.len(), params).into_result(Algorithm::Elo, &index))
}

pub(crate) fn elo_scores(comparisons: &[IndexedComparison], n: usize, params: &EloParams) -> Scores {
    let mut ratings = vec![params.initial; n];
    for c in comparisons {
        if c.left == c.right {
            continue;
        }
        let (left, right) = (ratings[c.left], ratings[c.right]);
        let expected = 1.0 / (1.0 + params.base.powf((right - left) / params.scale));
        let delta = c.weight * params.k * (c.winner.left_score() - expected);
        ratings[c.left] = left + delta;
        ratings[c.right] = right - delta;
    }
    Scores::exact(ratings)
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    use super::*;
    use crate::model::Winner;

    fn listing_records() -> Vec<ComparisonRecord> {
        vec![
            ComparisonRecord::new("pizza", "burger", Winner::Left),
            ComparisonRecord::new("burger", "sushi", Winner::Right),
            ComparisonRecord::new("pizza", "sushi", Winner::Draw),
        ]
    }

    #[test]
    fn reproduces_listing_scores() {
        let result = elo(&listing_records(), None, &EloParams::default()).unwrap();
        assert_abs_diff_eq!(result.scores["pizza"], 1014.972058, epsilon = 1e-6);
        assert_abs_diff_eq!(result.scores["burger"], 970.647200, epsilon = 1e-6);
        assert_abs_diff_eq!(result.scores["sushi"], 1014.380742, epsilon = 1e-6);
        assert_eq!(result.iterations, 0);
        assert!(result.converged);
    }

    #[test]
    fn order_matters() {
        let mut records = listing_records();
        let forward = elo(&records, None, &EloParams::default()).unwrap();
        records.reverse();
        let backward = elo(&records, None, &EloParams::default()).unwrap();
        assert!((forward.scores["pizza"] - backward.scores["pizza"]).abs() > 1e-3);
    }

    #[test]
    fn fresh_draw_changes_nothing() {
        let result = elo(&[ComparisonRecord::new("A", "B", Winner::Draw)], None, &EloParams::default())
            .unwrap();
        assert_eq!(result.scores["A"], 1000.0);
        assert_eq!(result.scores["B"], 1000.0);
    }

    #[test]
    fn single_win_from_fresh_start() {
        let result = elo(&[ComparisonRecord::new("A", "B", Winner::Left)], None, &EloParams::default())
            .unwrap();
        assert_eq!(result.scores["A"], 1015.0);
        assert_eq!(result.scores["B"], 985.0);
    }

    #[test]
    fn weight_scales_the_step() {
        let records = [ComparisonRecord::weighted("A", "B", Winner::Left, 0.5)];
        let result = elo(&records, None, &EloParams::default()).unwrap();
        assert_eq!(result.scores["A"], 1007.5);
    }

    #[test]
    fn unseen_and_self_items_keep_initial() {
        let records = [ComparisonRecord::new("A", "A", Winner::Left)];
        let index = Index::from_names(["A", "ghost"]);
        let params = EloParams { initial: 1500.0, ..Default::default() };
        let result = elo(&records, Some(&index), &params).unwrap();
        assert_eq!(result.scores["A"], 1500.0);
        assert_eq!(result.scores["ghost"], 1500.0);
    }

    fn comparisons() -> impl Strategy<Value = Vec<IndexedComparison>> {
        prop::collection::vec((0..6usize, 0..6usize, 0..3usize), 0..200).prop_map(|rows| {
            rows.into_iter()
                .map(|(left, right, w)| IndexedComparison {
                    left,
                    right,
                    winner: Winner::ALL[w],
                    weight: 1.0,
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn ratings_are_conserved(cs in comparisons(), k in 1.0..64.0f64) {
            let params = EloParams { k, ..Default::default() };
            let scores = elo_scores(&cs, 6, &params);
            let total: f64 = scores.values.iter().sum();
            prop_assert!((total - 6.0 * params.initial).abs() < 1e-9);
        }
    }
}
