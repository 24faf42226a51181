//! Weighted win and tie matrices.

use ndarray::Array2;

use crate::error::Result;
use crate::model::{ComparisonRecord, Index, IndexedComparison, Winner};

/// `wins[[i, j]]` is the total weight of records where `i` beat `j`; `ties` is the
/// symmetric analogue for draws. Self-comparisons are never recorded.
#[derive(Clone, Debug, PartialEq)]
pub struct WinMatrices {
    pub wins: Array2<f64>,
    pub ties: Array2<f64>,
}

impl WinMatrices {
    pub fn zeros(n: usize) -> Self {
        Self {
            wins: Array2::zeros((n, n)),
            ties: Array2::zeros((n, n)),
        }
    }

    pub fn from_indexed(comparisons: &[IndexedComparison], n: usize) -> Self {
        let mut matrices = Self::zeros(n);
        for c in comparisons {
            if c.left == c.right {
                continue;
            }
            match c.winner {
                Winner::Left => matrices.wins[[c.left, c.right]] += c.weight,
                Winner::Right => matrices.wins[[c.right, c.left]] += c.weight,
                Winner::Draw => {
                    matrices.ties[[c.left, c.right]] += c.weight;
                    matrices.ties[[c.right, c.left]] += c.weight;
                }
            }
        }
        matrices
    }

    pub fn len(&self) -> usize {
        self.wins.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn win_matrices(records: &[ComparisonRecord], index: &Index) -> Result<WinMatrices> {
    let comparisons = index.encode(records)?;
    Ok(WinMatrices::from_indexed(&comparisons, index.len()))
}

/// Tie-split matrix `wins + 0.5 * ties`: each draw counts as half a win for both sides.
pub fn effective_matrix(matrices: &WinMatrices) -> Array2<f64> {
    &matrices.wins + &(&matrices.ties * 0.5)
}

/// An unordered pair of items with at least one weighted comparison between them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Pair {
    pub i: usize,
    pub j: usize,
    /// Weight of `i` beating `j`.
    pub wins_ij: f64,
    /// Weight of `j` beating `i`.
    pub wins_ji: f64,
    pub ties: f64,
}

impl Pair {
    /// Tie-split weight credited to `i` over `j`.
    pub fn split_ij(&self) -> f64 {
        self.wins_ij + 0.5 * self.ties
    }

    pub fn split_ji(&self) -> f64 {
        self.wins_ji + 0.5 * self.ties
    }
}

/// Compressed list of the item pairs that actually met, ordered by `(i, j)` with
/// `i < j`. The iterative solvers sweep this instead of the dense matrix, so a sweep
/// costs the number of observed pairs.
pub(crate) fn observed_pairs(matrices: &WinMatrices) -> Vec<Pair> {
    let n = matrices.len();
    let wins = matrices.wins.as_slice().expect("standard layout");
    let ties = matrices.ties.as_slice().expect("standard layout");
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let (wins_ij, wins_ji, tie) = (wins[i * n + j], wins[j * n + i], ties[i * n + j]);
            if wins_ij + wins_ji + tie > 0.0 {
                pairs.push(Pair {
                    i,
                    j,
                    wins_ij,
                    wins_ji,
                    ties: tie,
                });
            }
        }
    }
    pairs
}

/// One opponent in an item's neighbor list.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Neighbor {
    pub j: usize,
    /// Tie-split weight of the item over `j`.
    pub ahead: f64,
    /// Tie-split weight of `j` over the item.
    pub behind: f64,
}

/// Neighbor lists of all items in one buffer, each sorted by opponent.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Adjacency {
    offsets: Vec<usize>,
    neighbors: Vec<Neighbor>,
}

impl Adjacency {
    pub fn new(pairs: &[Pair], n: usize) -> Self {
        let mut offsets = vec![0; n + 1];
        for pair in pairs {
            offsets[pair.i + 1] += 1;
            offsets[pair.j + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![Neighbor { j: 0, ahead: 0.0, behind: 0.0 }; 2 * pairs.len()];
        // Pairs arrive ordered by (i, j), so every list fills in opponent order.
        for pair in pairs {
            let (ahead, behind) = (pair.split_ij(), pair.split_ji());
            neighbors[cursor[pair.i]] = Neighbor { j: pair.j, ahead, behind };
            cursor[pair.i] += 1;
            neighbors[cursor[pair.j]] = Neighbor { j: pair.i, ahead: behind, behind: ahead };
            cursor[pair.j] += 1;
        }
        Self { offsets, neighbors }
    }

    pub fn of(&self, i: usize) -> &[Neighbor] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }
}
