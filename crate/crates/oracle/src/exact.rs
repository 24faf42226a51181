//! Direct solutions for instances of at most three items, used to check the power
//! iterations against something that does not iterate.

use pairrank::{ComparisonRecord, Winner};

pub type Matrix = Vec<Vec<f64>>;

/// Every win-count matrix on `n` items with off-diagonal entries in `0..=max_count`.
pub fn all_win_matrices(n: usize, max_count: u32) -> Vec<Matrix> {
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let base = max_count as usize + 1;
    let total = base.pow(cells.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut m = vec![vec![0.0; n]; n];
            for &(i, j) in &cells {
                m[i][j] = (code % base) as f64;
                code /= base;
            }
            m
        })
        .collect()
}

/// One unit-weight record per win, item `i` named `"m{i}"`.
pub fn records_for(wins: &Matrix) -> Vec<ComparisonRecord> {
    let mut records = Vec::new();
    for (i, row) in wins.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            for _ in 0..count as usize {
                records.push(ComparisonRecord::new(format!("m{i}"), format!("m{j}"), Winner::Left));
            }
        }
    }
    records
}

/// Whether every item can reach every other along edges `i -> j` with `m[i][j] > 0`.
pub fn strongly_connected(m: &Matrix) -> bool {
    let n = m.len();
    (0..n).all(|start| {
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if m[i][j] > 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&s| s)
    })
}

fn determinant(m: &Matrix) -> f64 {
    match m.len() {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        n => panic!("determinant of a {n}x{n} matrix is not supported"),
    }
}

fn minus_scaled_identity(m: &Matrix, lambda: f64) -> Matrix {
    let mut out = m.clone();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    out
}

/// Adjugate of a matrix of size at most 3.
fn adjugate(m: &Matrix) -> Matrix {
    let n = m.len();
    if n == 1 {
        return vec![vec![1.0]];
    }
    let mut adj = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Matrix = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            adj[j][i] = sign * determinant(&minor);
        }
    }
    adj
}

/// Perron vector of an irreducible non-negative matrix of size at most 3, scaled to
/// sum to 1.
///
/// The Perron root is the largest real root of `det(A - λI)`. It is bracketed by
/// scanning down from the largest row sum and refined by bisection; any non-zero
/// column of `adj(A - ρI)` is then an eigenvector for `ρ`.
pub fn perron_vector(a: &Matrix) -> Vec<f64> {
    let n = a.len();
    if n == 1 {
        return vec![1.0];
    }
    let characteristic = |lambda: f64| determinant(&minus_scaled_identity(a, lambda));
    let top = a.iter().map(|r| r.iter().sum::<f64>()).fold(0.0, f64::max) + 1.0;
    // Above the Perron root the sign of det(A - λI) is (-1)^n.
    let outside = if n % 2 == 0 { 1.0 } else { -1.0 };
    let steps = 10_000;
    let mut hi = top;
    let mut lo = top;
    for k in 1..=steps {
        let lambda = top * (1.0 - k as f64 / steps as f64);
        if characteristic(lambda) * outside <= 0.0 {
            lo = lambda;
            break;
        }
        hi = lambda;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if characteristic(mid) * outside > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let rho = 0.5 * (lo + hi);

    let adj = adjugate(&minus_scaled_identity(a, rho));
    let column = (0..n)
        .max_by(|&x, &y| {
            let norm = |c: usize| adj.iter().map(|r| r[c].abs()).sum::<f64>();
            norm(x).total_cmp(&norm(y))
        })
        .unwrap();
    let vector: Vec<f64> = adj.iter().map(|r| r[column].abs()).collect();
    let total: f64 = vector.iter().sum();
    vector.iter().map(|v| v / total).collect()
}

/// Stationary distribution of the damped random walk in which each item passes its
/// mass to the items that beat it, solved as the linear system
/// `(I - dM) p = (1 - d) / n` by Gaussian elimination.
pub fn pagerank_stationary(a: &Matrix, damping: f64) -> Vec<f64> {
    let n = a.len();
    let mut system = vec![vec![0.0; n + 1]; n];
    for j in 0..n {
        let out: f64 = (0..n).map(|i| a[i][j]).sum();
        for i in 0..n {
            let transition = if out > 0.0 { a[i][j] / out } else { 1.0 / n as f64 };
            system[i][j] = -damping * transition;
        }
    }
    for (i, row) in system.iter_mut().enumerate() {
        row[i] += 1.0;
        row[n] = (1.0 - damping) / n as f64;
    }

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| system[x][col].abs().total_cmp(&system[y][col].abs()))
            .unwrap();
        system.swap(col, pivot);
        for row in 0..n {
            if row != col {
                let factor = system[row][col] / system[col][col];
                for k in col..=n {
                    system[row][k] -= factor * system[col][k];
                }
            }
        }
    }
    let p: Vec<f64> = (0..n).map(|i| system[i][n] / system[i][i]).collect();
    let total: f64 = p.iter().sum();
    p.iter().map(|x| x / total).collect()
}
