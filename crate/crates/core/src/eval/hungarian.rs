//! Optimal assignment over a partially feasible cost matrix.
//!
//! The objective is lexicographic: first the largest number of feasible
//! pairs, then the smallest total cost among those. This is what a square
//! Hungarian solve with a prohibitive cost on infeasible entries computes,
//! without the rounding a large constant would introduce.

use std::cmp::Ordering;
use std::ops::{Add, Sub};

/// Rectangular cost matrix; `None` marks an infeasible pair.
#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Option<f64>>,
}

impl CostMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![None; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Option<f64>) -> Self {
        let mut m = Self::new(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, cost: Option<f64>) {
        self.data[i * self.cols + j] = cost;
    }
}

/// `(pairs, cost)` ordered lexicographically; feasible entries contribute
/// `pairs = -1` so that more pairs compare as smaller.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct Lex {
    pairs: i64,
    cost: f64,
}

impl Lex {
    const INF: Lex = Lex {
        pairs: i64::MAX / 4,
        cost: 0.0,
    };
}

impl Add for Lex {
    type Output = Lex;
    fn add(self, o: Lex) -> Lex {
        Lex {
            pairs: self.pairs + o.pairs,
            cost: self.cost + o.cost,
        }
    }
}

impl Sub for Lex {
    type Output = Lex;
    fn sub(self, o: Lex) -> Lex {
        Lex {
            pairs: self.pairs - o.pairs,
            cost: self.cost - o.cost,
        }
    }
}

impl PartialOrd for Lex {
    fn partial_cmp(&self, o: &Lex) -> Option<Ordering> {
        Some(self.pairs.cmp(&o.pairs).then(self.cost.total_cmp(&o.cost)))
    }
}

/// Returns the matched `(row, col)` pairs, sorted by row. Every returned
/// pair is feasible and each row and column appears at most once.
pub fn solve(costs: &CostMatrix) -> Vec<(usize, usize)> {
    let (rows, cols) = (costs.rows(), costs.cols());
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    // Split into connected components of the feasibility graph; they are
    // independent and usually tiny.
    let mut parent: Vec<usize> = (0..rows + cols).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut any = vec![false; rows + cols];
    for i in 0..rows {
        for j in 0..cols {
            if costs.get(i, j).is_some() {
                any[i] = true;
                any[rows + j] = true;
                let (a, b) = (find(&mut parent, i), find(&mut parent, rows + j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> = Default::default();
    for v in 0..rows + cols {
        if !any[v] {
            continue;
        }
        let root = find(&mut parent, v);
        let g = groups.entry(root).or_default();
        if v < rows {
            g.0.push(v);
        } else {
            g.1.push(v - rows);
        }
    }

    let mut out = Vec::new();
    for (r, c) in groups.values() {
        out.extend(solve_dense(costs, r, c));
    }
    out.sort_unstable();
    out
}

/// Shortest augmenting path Hungarian with potentials on the sub-matrix
/// `r x c`. Rows are the smaller side internally.
fn solve_dense(costs: &CostMatrix, r: &[usize], c: &[usize]) -> Vec<(usize, usize)> {
    let transpose = r.len() > c.len();
    let (n, m) = if transpose { (c.len(), r.len()) } else { (r.len(), c.len()) };
    let entry = |i: usize, j: usize| -> Lex {
        let v = if transpose { costs.get(r[j], c[i]) } else { costs.get(r[i], c[j]) };
        match v {
            Some(cost) => Lex { pairs: -1, cost },
            None => Lex::default(),
        }
    };

    // 1-based arrays; column 0 is the virtual start.
    let mut u = vec![Lex::default(); n + 1];
    let mut v = vec![Lex::default(); m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![Lex::INF; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = Lex::INF;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = entry(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] = u[p[j]] + delta;
                    v[j] = v[j] - delta;
                } else {
                    minv[j] = minv[j] - delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut out = Vec::new();
    for j in 1..=m {
        if p[j] == 0 {
            continue;
        }
        let (i, jj) = (p[j] - 1, j - 1);
        let (row, col) = if transpose { (r[jj], c[i]) } else { (r[i], c[jj]) };
        if costs.get(row, col).is_some() {
            out.push((row, col));
        }
    }
    out
}

/// Number of pairs and total cost of an assignment.
pub fn assignment_cost(costs: &CostMatrix, pairs: &[(usize, usize)]) -> (usize, f64) {
    let total = pairs.iter().map(|&(i, j)| costs.get(i, j).unwrap_or(f64::NAN)).sum();
    (pairs.len(), total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exhaustive oracle: every partial injection rows -> cols, best by
    /// (most pairs, least cost).
    fn brute(costs: &CostMatrix) -> (usize, f64) {
        fn rec(costs: &CostMatrix, i: usize, used: &mut Vec<bool>, pairs: usize, cost: f64, best: &mut (usize, f64)) {
            if i == costs.rows() {
                if pairs > best.0 || (pairs == best.0 && cost < best.1) {
                    *best = (pairs, cost);
                }
                return;
            }
            rec(costs, i + 1, used, pairs, cost, best);
            for j in 0..costs.cols() {
                if let (false, Some(c)) = (used[j], costs.get(i, j)) {
                    used[j] = true;
                    rec(costs, i + 1, used, pairs + 1, cost + c, best);
                    used[j] = false;
                }
            }
        }
        let mut best = (0, 0.0);
        rec(costs, 0, &mut vec![false; costs.cols()], 0, 0.0, &mut best);
        best
    }

    #[test]
    fn identity_is_free() {
        let m = CostMatrix::from_fn(4, 4, |i, j| Some(if i == j { 0.0 } else { 3.0 }));
        assert_eq!(solve(&m), vec![(0, 0), (1, 1), (2, 2), (3, 3)]);
    }

    #[test]
    fn prefers_more_pairs() {
        // Row 0 could take column 0 cheaply, but then row 1 stays unmatched.
        let m = CostMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => Some(0.0),
            (0, 1) => Some(100.0),
            (1, 0) => Some(100.0),
            _ => None,
        });
        assert_eq!(solve(&m), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn empty_and_infeasible() {
        assert!(solve(&CostMatrix::new(0, 3)).is_empty());
        assert!(solve(&CostMatrix::new(3, 3)).is_empty());
    }

    proptest! {
        #[test]
        fn matches_brute_force(rows in 1usize..6, cols in 1usize..6, seed in proptest::collection::vec((0u8..4, 0u32..50), 36)) {
            let m = CostMatrix::from_fn(rows, cols, |i, j| {
                let (gate, c) = seed[i * 6 + j];
                (gate != 0).then_some(c as f64)
            });
            let pairs = solve(&m);
            let mut seen_r = std::collections::HashSet::new();
            let mut seen_c = std::collections::HashSet::new();
            for &(i, j) in &pairs {
                prop_assert!(m.get(i, j).is_some());
                prop_assert!(seen_r.insert(i) && seen_c.insert(j));
            }
            prop_assert_eq!(assignment_cost(&m, &pairs), brute(&m));
        }
    }
}
