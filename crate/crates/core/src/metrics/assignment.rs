//! Dense linear assignment by shortest augmenting paths (Jonker–Volgenant style).
//!
//! Rows are inserted one at a time; each insertion runs a Dijkstra-like search
//! over columns with reduced costs `c(i, j) - u_i - v_j`, then updates the
//! dual potentials and augments along the path found. `O(n³)` time, `O(n)`
//! scratch; the cost matrix is read through a closure and never stored.
//! Ties are broken by lowest column index.

/// Minimum-cost perfect matching of an `n × n` cost matrix.
///
/// Returns `row_to_col` with `row_to_col[i]` the column assigned to row `i`.
pub fn solve<C: Fn(usize, usize) -> f64>(n: usize, cost: C) -> Vec<usize> {
    // 1-based internally; column 0 is the virtual source of each search.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut col_owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut min_slack = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];

    for row in 1..=n {
        col_owner[0] = row;
        let mut j0 = 0usize;
        min_slack.iter_mut().for_each(|m| *m = f64::INFINITY);
        used.iter_mut().for_each(|b| *b = false);

        loop {
            used[j0] = true;
            let i0 = col_owner[j0];
            let ui0 = u[i0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = cost(i0 - 1, j - 1) - ui0 - v[j];
                if reduced < min_slack[j] {
                    min_slack[j] = reduced;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if col_owner[j0] == 0 {
                break;
            }
        }
        // augment along the alternating path back to the source
        loop {
            let j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![0usize; n];
    for j in 1..=n {
        row_to_col[col_owner[j] - 1] = j - 1;
    }
    row_to_col
}

/// Total cost of an assignment, summed in row order.
pub fn assignment_cost<C: Fn(usize, usize) -> f64>(row_to_col: &[usize], cost: C) -> f64 {
    row_to_col
        .iter()
        .enumerate()
        .map(|(i, &j)| cost(i, j))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_known_instance() {
        let c = [[4.0, 1.0, 3.0], [2.0, 0.0, 5.0], [3.0, 2.0, 2.0]];
        let a = solve(3, |i, j| c[i][j]);
        assert_eq!(a, vec![1, 0, 2]);
        assert_eq!(assignment_cost(&a, |i, j| c[i][j]), 5.0);
    }

    #[test]
    fn ties_resolve_to_identity() {
        let a = solve(4, |_, _| 1.0);
        assert_eq!(a, vec![0, 1, 2, 3]);
    }

    #[test]
    fn empty_and_single() {
        assert!(solve(0, |_, _| 0.0).is_empty());
        assert_eq!(solve(1, |_, _| 3.0), vec![0]);
    }

    #[test]
    fn result_is_a_permutation() {
        let n = 50;
        let a = solve(n, |i, j| {
            ((i * 37 + j * 11) % 17) as f64 + 0.01 * (i as f64 - j as f64).abs()
        });
        let mut seen = vec![false; n];
        for &j in &a {
            assert!(!seen[j]);
            seen[j] = true;
        }
    }
}
