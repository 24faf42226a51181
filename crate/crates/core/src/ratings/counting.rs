use crate::error::Result;
use crate::matrices::WinMatrices;
use crate::model::{ComparisonRecord, Index, IndexedComparison};

use super::{prepare, Algorithm, RatingResult, Scores};

/// Weighted number of wins per item; each draw adds half its weight to both sides.
pub fn counting(records: &[ComparisonRecord], index: Option<&Index>) -> Result<RatingResult> {
    let (index, comparisons) = prepare(records, index)?;
    Ok(counting_scores(&comparisons, index.len()).into_result(Algorithm::Counting, &index))
}

pub(crate) fn counting_scores(comparisons: &[IndexedComparison], n: usize) -> Scores {
    let mut scores = vec![0.0; n];
    for c in comparisons {
        if c.left == c.right {
            continue;
        }
        let left = c.winner.left_score();
        scores[c.left] += c.weight * left;
        scores[c.right] += c.weight * (1.0 - left);
    }
    Scores::exact(scores)
}

/// Macro-averaged win rate: the mean, over every opponent an item met, of its
/// tie-split share of the weight between them. Items that never met anyone get 0.5.
pub fn average_win_rate(
    records: &[ComparisonRecord],
    index: Option<&Index>,
) -> Result<RatingResult> {
    let (index, comparisons) = prepare(records, index)?;
    Ok(average_win_rate_scores(&comparisons, index.len())
        .into_result(Algorithm::AverageWinRate, &index))
}

pub(crate) fn average_win_rate_scores(comparisons: &[IndexedComparison], n: usize) -> Scores {
    let m = WinMatrices::from_indexed(comparisons, n);
    let wins = m.wins.as_slice().expect("standard layout");
    let ties = m.ties.as_slice().expect("standard layout");
    let scores = (0..n)
        .map(|i| {
            let mut sum = 0.0;
            let mut opponents = 0usize;
            for j in 0..n {
                let (ahead, behind, tied) = (wins[i * n + j], wins[j * n + i], ties[i * n + j]);
                let total = ahead + behind + tied;
                if total > 0.0 {
                    sum += (ahead + 0.5 * tied) / total;
                    opponents += 1;
                }
            }
            if opponents == 0 {
                0.5
            } else {
                sum / opponents as f64
            }
        })
        .collect();
    Scores::exact(scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Winner;

    fn food_rows() -> Vec<ComparisonRecord> {
        vec![
            ComparisonRecord::new("Pizza", "Sushi", Winner::Left),
            ComparisonRecord::new("Burger", "Pasta", Winner::Right),
            ComparisonRecord::new("Tacos", "Pizza", Winner::Left),
            ComparisonRecord::new("Sushi", "Tacos", Winner::Right),
            ComparisonRecord::new("Burger", "Pizza", Winner::Left),
        ]
    }

    #[test]
    fn counts_food_rows() {
        let result = counting(&food_rows(), None).unwrap();
        assert_eq!(result.scores["Tacos"], 2.0);
        assert_eq!(result.scores["Pizza"], 1.0);
        assert_eq!(result.scores["Pasta"], 1.0);
        assert_eq!(result.scores["Burger"], 1.0);
        assert_eq!(result.scores["Sushi"], 0.0);
        assert_eq!(result.iterations, 0);
        assert!(result.converged);
    }

    #[test]
    fn single_win() {
        let result = counting(&[ComparisonRecord::new("A", "B", Winner::Left)], None).unwrap();
        assert_eq!(result.scores["A"], 1.0);
        assert_eq!(result.scores["B"], 0.0);
    }

    #[test]
    fn weighted_tie_is_split() {
        let records = [ComparisonRecord::weighted("A", "B", Winner::Draw, 2.0)];
        let result = counting(&records, None).unwrap();
        assert_eq!(result.scores["A"], 1.0);
        assert_eq!(result.scores["B"], 1.0);
    }

    #[test]
    fn empty_input_gives_empty_scores() {
        assert!(counting(&[], None).unwrap().scores.is_empty());
        assert!(average_win_rate(&[], None).unwrap().scores.is_empty());
    }

    #[test]
    fn duplicate_equals_double_weight() {
        let twice = [
            ComparisonRecord::new("A", "B", Winner::Left),
            ComparisonRecord::new("A", "B", Winner::Left),
            ComparisonRecord::new("B", "C", Winner::Draw),
        ];
        let doubled = [
            ComparisonRecord::weighted("A", "B", Winner::Left, 2.0),
            ComparisonRecord::new("B", "C", Winner::Draw),
        ];
        assert_eq!(
            counting(&twice, None).unwrap().scores,
            counting(&doubled, None).unwrap().scores
        );
    }

    #[test]
    fn average_win_rate_per_opponent() {
        let records = [
            ComparisonRecord::new("A", "B", Winner::Left),
            ComparisonRecord::new("A", "C", Winner::Left),
            ComparisonRecord::new("B", "C", Winner::Left),
        ];
        let result = average_win_rate(&records, None).unwrap();
        assert_eq!(result.scores["A"], 1.0);
        assert_eq!(result.scores["B"], 0.5);
        assert_eq!(result.scores["C"], 0.0);
    }

    #[test]
    fn average_win_rate_is_macro_averaged() {
        // A beats B three times and loses once to C: 0.75 and 0.0 average to 0.375,
        // where a per-match average would give 0.6.
        let records = [
            ComparisonRecord::weighted("A", "B", Winner::Left, 3.0),
            ComparisonRecord::new("A", "B", Winner::Right),
            ComparisonRecord::new("C", "A", Winner::Left),
        ];
        let result = average_win_rate(&records, None).unwrap();
        assert_eq!(result.scores["A"], 0.375);
    }

    #[test]
    fn average_win_rate_tie_and_unplayed() {
        let records = [ComparisonRecord::new("A", "B", Winner::Draw)];
        let index = Index::from_names(["A", "B", "lonely"]);
        let result = average_win_rate(&records, Some(&index)).unwrap();
        assert_eq!(result.scores["A"], 0.5);
        assert_eq!(result.scores["B"], 0.5);
        assert_eq!(result.scores["lonely"], 0.5);
        assert_eq!(counting(&records, Some(&index)).unwrap().scores["lonely"], 0.0);
    }

    #[test]
    fn zero_weight_meetings_do_not_count() {
        let records = [
            ComparisonRecord::new("A", "B", Winner::Left),
            ComparisonRecord::weighted("A", "C", Winner::Right, 0.0),
        ];
        let result = average_win_rate(&records, None).unwrap();
        assert_eq!(result.scores["A"], 1.0);
        assert_eq!(result.scores["C"], 0.5);
    }
}
