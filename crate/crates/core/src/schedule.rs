//! Latin-rectangle scheduling of a 0/1 matrix.
//!
//! Every nonzero entry `(i, j)` of `A` is a gate between verifier `i` and
//! ancilla column `j`. Labelling the entries with time steps so that no label
//! repeats within a row or a column is a proper edge colouring of the
//! bipartite row/column graph; by König's theorem `w_max(A)` labels suffice.

use std::fmt::Write as _;

use crate::gf2::BitMatrix;

/// Time-step labels for the nonzero entries of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    pub rows: usize,
    pub cols: usize,
    /// `(row, col, time)` triples, row-major, `time` in `1..=n_symbols`.
    pub entries: Vec<(usize, usize, usize)>,
    /// Alphabet size `N`.
    pub n_symbols: usize,
}

impl Schedule {
    /// Time step of entry `(row, col)`, if scheduled.
    pub fn time(&self, row: usize, col: usize) -> Option<usize> {
        self.entries
            .iter()
            .find(|&&(r, c, _)| r == row && c == col)
            .map(|&(_, _, t)| t)
    }

    /// Integer rectangle with blanks where `A` has zeros.
    pub fn render(&self) -> String {
        let width = self.n_symbols.max(1).to_string().len();
        let mut grid = vec![vec![None; self.cols]; self.rows];
        for &(r, c, t) in &self.entries {
            grid[r][c] = Some(t);
        }
        let mut out = String::new();
        for row in grid {
            let cells: Vec<String> = row
                .into_iter()
                .map(|cell| match cell {
                    Some(t) => format!("{t:>width$}"),
                    None => " ".repeat(width),
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join(" ").trim_end());
        }
        out
    }
}

/// Largest row or column weight.
pub fn w_max(a: &BitMatrix) -> usize {
    let row_max = (0..a.row_count())
        .map(|r| a.row_weight(r))
        .max()
        .unwrap_or(0);
    let col_max = (0..a.col_count())
        .map(|c| a.col_weight(c))
        .max()
        .unwrap_or(0);
    row_max.max(col_max)
}

/// Label the nonzero entries of `a` with `w_max(a)` symbols.
///
/// Entries are taken row-major. An entry whose row and column share a free
/// symbol gets the smallest such symbol; otherwise, with `α` the smallest
/// symbol free at the row and `β` the smallest free at the column, the
/// `α/β` alternating path leaving the column is swapped, which frees `α`
/// at the column.
pub fn schedule(a: &BitMatrix) -> Schedule {
    let rows = a.row_count();
    let cols = a.col_count();
    let n = w_max(a);

    // row_at[r][k] = column joined to row r by an edge of colour k, and vice versa.
    let mut row_at: Vec<Vec<Option<usize>>> = vec![vec![None; n]; rows];
    let mut col_at: Vec<Vec<Option<usize>>> = vec![vec![None; n]; cols];

    for r in 0..rows {
        for c in a.row(r).ones() {
            let common = (0..n).find(|&k| row_at[r][k].is_none() && col_at[c][k].is_none());
            let colour = match common {
                Some(k) => k,
                None => {
                    let alpha = (0..n)
                        .find(|&k| row_at[r][k].is_none())
                        .expect("row degree below w_max leaves a free colour");
                    let beta = (0..n)
                        .find(|&k| col_at[c][k].is_none())
                        .expect("column degree below w_max leaves a free colour");
                    swap_alternating_path(&mut row_at, &mut col_at, c, alpha, beta);
                    debug_assert!(col_at[c][alpha].is_none());
                    alpha
                }
            };
            row_at[r][colour] = Some(c);
            col_at[c][colour] = Some(r);
        }
    }

    let mut entries = Vec::with_capacity(a.weight());
    for (r, slots) in row_at.iter().enumerate() {
        for (k, c) in slots.iter().enumerate() {
            if let Some(c) = c {
                entries.push((r, *c, k + 1));
            }
        }
    }
    entries.sort_unstable();
    Schedule {
        rows,
        cols,
        entries,
        n_symbols: n,
    }
}

/// Exchange colours `alpha` and `beta` along the path that starts at column
/// `start` with an `alpha` edge.
fn swap_alternating_path(
    row_at: &mut [Vec<Option<usize>>],
    col_at: &mut [Vec<Option<usize>>],
    start: usize,
    alpha: usize,
    beta: usize,
) {
    // (row, col, colour) edges: α out of columns, β out of rows
    let mut path = Vec::new();
    let mut col = start;
    while let Some(row) = col_at[col][alpha] {
        path.push((row, col, alpha));
        let Some(next) = row_at[row][beta] else { break };
        path.push((row, next, beta));
        col = next;
    }
    for &(r, c, k) in &path {
        row_at[r][k] = None;
        col_at[c][k] = None;
    }
    for &(r, c, k) in &path {
        let swapped = if k == alpha { beta } else { alpha };
        row_at[r][swapped] = Some(c);
        col_at[c][swapped] = Some(r);
    }
}

/// Check every schedule invariant against `a`: entries cover exactly the
/// nonzeros, labels lie in `1..=N`, no label repeats in a row or column, and
/// `N = w_max(a)`.
pub fn validate(sched: &Schedule, a: &BitMatrix) -> bool {
    if sched.rows != a.row_count() || sched.cols != a.col_count() {
        return false;
    }
    if sched.n_symbols != w_max(a) {
        return false;
    }
    let mut seen = BitMatrix::zeros(sched.rows, sched.cols);
    let mut row_used = vec![vec![false; sched.n_symbols + 1]; sched.rows];
    let mut col_used = vec![vec![false; sched.n_symbols + 1]; sched.cols];
    for &(r, c, t) in &sched.entries {
        if r >= sched.rows || c >= sched.cols || t == 0 || t > sched.n_symbols {
            return false;
        }
        if !a.get(r, c) || seen.get(r, c) || row_used[r][t] || col_used[c][t] {
            return false;
        }
        seen.set(r, c, true);
        row_used[r][t] = true;
        col_used[c][t] = true;
    }
    seen == *a
}
