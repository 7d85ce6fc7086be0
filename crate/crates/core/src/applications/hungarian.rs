//! Kuhn-Munkres minimum-cost assignment.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// `perm[row]` is the column assigned to `row`.
    pub perm: Vec<usize>,
    pub cost: f64,
}

/// Minimum-cost perfect assignment on a square matrix.
///
/// Among optimal assignments the lexicographically smallest permutation is
/// returned, so equal-cost ties resolve the same way every time.
pub fn hungarian(cost: &[Vec<f64>]) -> Result<Assignment> {
    let k = cost.len();
    for (r, row) in cost.iter().enumerate() {
        if row.len() != k {
            return Err(Error::NotSquare {
                rows: k,
                cols: row.len(),
            });
        }
        if let Some(c) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: r, col: c });
        }
    }
    if k == 0 {
        return Ok(Assignment {
            perm: Vec::new(),
            cost: 0.0,
        });
    }
    let scale = cost.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = 1e-12 * (1.0 + scale * k as f64);

    let mut rows_left: Vec<usize> = (0..k).collect();
    let mut cols_left: Vec<usize> = (0..k).collect();
    let mut target = min_cost(cost, &rows_left, &cols_left);
    let mut perm = vec![0; k];
    for r in 0..k {
        rows_left.remove(0);
        // First column that still admits an optimal completion; the best
        // candidate otherwise (only reachable through rounding).
        let mut best: Option<(usize, f64, f64)> = None;
        for (pos, &c) in cols_left.iter().enumerate() {
            let mut rest = cols_left.clone();
            rest.remove(pos);
            let sub = min_cost(cost, &rows_left, &rest);
            let total = cost[r][c] + sub;
            if total <= target + tol {
                best = Some((pos, sub, total));
                break;
            }
            if best.map_or(true, |b| total < b.2) {
                best = Some((pos, sub, total));
            }
        }
        let (pos, sub, _) = best.expect("at least one column left");
        perm[r] = cols_left.remove(pos);
        target = sub;
    }
    let total = perm.iter().enumerate().map(|(r, &c)| cost[r][c]).sum();
    Ok(Assignment { perm, cost: total })
}

fn min_cost(cost: &[Vec<f64>], rows: &[usize], cols: &[usize]) -> f64 {
    solve(cost, rows, cols).0
}

/// Potential-based O(k³) solver on the submatrix `rows x cols` (equal
/// lengths). Returns the optimum and, per row, the position in `cols`.
fn solve(cost: &[Vec<f64>], rows: &[usize], cols: &[usize]) -> (f64, Vec<usize>) {
    let k = rows.len();
    if k == 0 {
        return (0.0, Vec::new());
    }
    let a = |i: usize, j: usize| cost[rows[i - 1]][cols[j - 1]];
    // 1-based arrays with a virtual column 0.
    let mut u = vec![0.0; k + 1];
    let mut v = vec![0.0; k + 1];
    let mut owner = vec![0usize; k + 1];
    let mut way = vec![0usize; k + 1];
    for i in 1..=k {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; k + 1];
        let mut used = vec![false; k + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=k {
                if used[j] {
                    continue;
                }
                let cur = a(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=k {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0; k];
    for j in 1..=k {
        assign[owner[j] - 1] = j - 1;
    }
    let total = assign.iter().enumerate().map(|(i, &j)| a(i + 1, j + 1)).sum();
    (total, assign)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_anti_diagonal() {
        let a = hungarian(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert_eq!(a.perm, vec![0, 1]);
        assert_eq!(a.cost, 2.0);
        let b = hungarian(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert_eq!(b.perm, vec![1, 0]);
        assert_eq!(b.cost, 2.0);
    }

    #[test]
    fn ties_take_smallest_permutation() {
        let a = hungarian(&[vec![0.0; 3], vec![0.0; 3], vec![0.0; 3]]).unwrap();
        assert_eq!(a.perm, vec![0, 1, 2]);
        let b = hungarian(&[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 0.0]]).unwrap();
        assert_eq!(b.perm, vec![1, 0, 2]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            hungarian(&[vec![1.0, 2.0]]),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            hungarian(&[vec![1.0, f64::NAN], vec![0.0, 0.0]]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn empty_matrix() {
        assert_eq!(hungarian(&[]).unwrap().perm, Vec::<usize>::new());
    }
}
