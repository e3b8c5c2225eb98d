//! Minimum-cost assignment on small square integer matrices.
//!
//! Two independent solvers: an exhaustive permutation scan, which also counts
//! the minimizers, and the Hungarian method with row/column potentials.

/// Result of the exhaustive scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExhaustiveMin {
    pub cost: i64,
    pub minimizers: u64,
    /// Lexicographically first minimizing permutation, `row -> column`.
    pub witness: Vec<usize>,
}

/// Calls `f` on every permutation of `0..m` in lexicographic order.
pub fn for_each_permutation(m: usize, mut f: impl FnMut(&[usize])) {
    fn rec(perm: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
        let m = used.len();
        if perm.len() == m {
            f(perm);
            return;
        }
        for c in 0..m {
            if !used[c] {
                used[c] = true;
                perm.push(c);
                rec(perm, used, f);
                perm.pop();
                used[c] = false;
            }
        }
    }
    let mut perm = Vec::with_capacity(m);
    let mut used = vec![false; m];
    rec(&mut perm, &mut used, &mut f);
}

pub fn exhaustive_min(cost: &[Vec<i64>]) -> ExhaustiveMin {
    let m = cost.len();
    let mut best = ExhaustiveMin { cost: i64::MAX, minimizers: 0, witness: Vec::new() };
    for_each_permutation(m, |perm| {
        let total: i64 = perm.iter().enumerate().map(|(r, &c)| cost[r][c]).sum();
        if total < best.cost {
            best.cost = total;
            best.minimizers = 1;
            best.witness = perm.to_vec();
        } else if total == best.cost {
            best.minimizers += 1;
        }
    });
    if m == 0 {
        best.cost = 0;
    }
    best
}

/// Hungarian method, O(m³). Returns the optimal cost and one optimal
/// assignment `row -> column`.
pub fn hungarian(cost: &[Vec<i64>]) -> (i64, Vec<usize>) {
    let m = cost.len();
    if m == 0 {
        return (0, Vec::new());
    }
    assert!(cost.iter().all(|r| r.len() == m), "cost matrix must be square");
    const INF: i64 = i64::MAX / 4;
    // 1-based arrays; index 0 is the virtual column.
    let mut u = vec![0i64; m + 1];
    let mut v = vec![0i64; m + 1];
    let mut row_of_col = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for row in 1..=m {
        row_of_col[0] = row;
        let mut col0 = 0usize;
        let mut minv = vec![INF; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[col0] = true;
            let r0 = row_of_col[col0];
            let mut delta = INF;
            let mut col1 = 0usize;
            for col in 1..=m {
                if !used[col] {
                    let cur = cost[r0 - 1][col - 1] - u[r0] - v[col];
                    if cur < minv[col] {
                        minv[col] = cur;
                        way[col] = col0;
                    }
                    if minv[col] < delta {
                        delta = minv[col];
                        col1 = col;
                    }
                }
            }
            for col in 0..=m {
                if used[col] {
                    u[row_of_col[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if row_of_col[col0] == 0 {
                break;
            }
        }
        loop {
            let col1 = way[col0];
            row_of_col[col0] = row_of_col[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; m];
    for col in 1..=m {
        assignment[row_of_col[col] - 1] = col - 1;
    }
    let total = assignment.iter().enumerate().map(|(r, &c)| cost[r][c]).sum();
    (total, assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn permutation_count() {
        let mut count = 0;
        for_each_permutation(5, |_| count += 1);
        assert_eq!(count, 120);
    }

    #[test]
    fn small_known_instance() {
        let cost = vec![vec![4, 1, 3], vec![2, 0, 5], vec![3, 2, 2]];
        let (c, a) = hungarian(&cost);
        assert_eq!(c, 5);
        let ex = exhaustive_min(&cost);
        assert_eq!(ex.cost, 5);
        assert_eq!(a.iter().enumerate().map(|(r, &c)| cost[r][c]).sum::<i64>(), 5);
    }

    #[test]
    fn empty_matrix() {
        assert_eq!(hungarian(&[]).0, 0);
        assert_eq!(exhaustive_min(&[]).cost, 0);
        assert_eq!(exhaustive_min(&[]).minimizers, 1);
    }

    proptest! {
        #[test]
        fn hungarian_matches_exhaustive(m in 1usize..7, seed in proptest::collection::vec(-20i64..20, 49)) {
            let cost: Vec<Vec<i64>> = (0..m).map(|r| (0..m).map(|c| seed[r * 7 + c]).collect()).collect();
            let (c, a) = hungarian(&cost);
            let ex = exhaustive_min(&cost);
            prop_assert_eq!(c, ex.cost);
            let mut seen = a.clone();
            seen.sort();
            prop_assert_eq!(seen, (0..m).collect::<Vec<_>>());
        }
    }
}
