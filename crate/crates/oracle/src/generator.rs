use pairrank::{Algorithm, AlgorithmParams, ComparisonRecord, Winner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_ITEMS: usize = 20;
pub const MAX_RECORDS: usize = 2000;

/// One randomly generated input for one algorithm, with the tolerance the two
/// implementations must meet on it.
#[derive(Clone, Debug)]
pub struct DifferentialCase {
    pub seed: u64,
    pub algorithm: Algorithm,
    pub records: Vec<ComparisonRecord>,
    pub params: AlgorithmParams,
    pub tolerance: f64,
}

impl DifferentialCase {
    /// The records depend only on `seed`, so all algorithms see the same data.
    pub fn generate(seed: u64, algorithm: Algorithm) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let records = random_records(&mut rng, MAX_ITEMS, MAX_RECORDS);
        let params = random_params(&mut rng, algorithm);
        Self {
            seed,
            algorithm,
            records,
            params,
            tolerance: tolerance_for(algorithm),
        }
    }
}

pub fn tolerance_for(algorithm: Algorithm) -> f64 {
    if algorithm.is_iterative() {
        1e-6
    } else {
        1e-9
    }
}

/// Between 1 and `max_items` items and 0 to `max_records` records. About a fifth of
/// the outcomes are ties; weights are mostly 1 with some fractional or zero ones,
/// and a few records compare an item with itself.
pub fn random_records(
    rng: &mut impl Rng,
    max_items: usize,
    max_records: usize,
) -> Vec<ComparisonRecord> {
    let items = rng.random_range(1..=max_items);
    let count = rng.random_range(0..=max_records);
    let names: Vec<String> = (0..items).map(|i| format!("item{i}")).collect();
    (0..count)
        .map(|_| {
            let left = rng.random_range(0..items);
            let right = if rng.random_bool(0.02) {
                left
            } else {
                rng.random_range(0..items)
            };
            let winner = match rng.random_range(0..10) {
                0 | 1 => Winner::Draw,
                2..=5 => Winner::Right,
                _ => Winner::Left,
            };
            let weight = match rng.random_range(0..20) {
                0 => 0.0,
                1..=3 => rng.random_range(0.0..3.0),
                _ => 1.0,
            };
            ComparisonRecord::weighted(&names[left], &names[right], winner, weight)
        })
        .collect()
}

fn random_params(rng: &mut impl Rng, algorithm: Algorithm) -> AlgorithmParams {
    let mut params = AlgorithmParams::default();
    if !rng.random_bool(0.25) {
        return params;
    }
    match algorithm {
        Algorithm::Elo => {
            params.k = Some(rng.random_range(4.0..64.0));
            params.initial = Some(rng.random_range(0.0..2000.0));
        }
        Algorithm::Pagerank => params.damping = Some(rng.random_range(0.5..0.95)),
        Algorithm::BradleyTerry | Algorithm::Newman | Algorithm::Eigen => {
            params.max_iterations = Some(rng.random_range(1..300));
        }
        Algorithm::Counting | Algorithm::AverageWinRate => {}
    }
    params
}
