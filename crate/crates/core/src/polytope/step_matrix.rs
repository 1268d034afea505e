//! Step matrices, the down/right shift calculus, derived matrices, and the
//! complementary pair read-off that produces diagonal terms.
//!
//! A q x p matrix over {0} u {1..n} is a step matrix when every element of
//! {1..n} appears exactly once, the nonzero entries of each row increase
//! left to right and of each column top to bottom as contiguous blocks, and
//! every diagonal parallel to the main one holds exactly one element. Step
//! matrices biject with permutations by reading the staircase from the
//! lower-left corner: ascents step right, descents step up.

use std::collections::BTreeSet;

use super::partition::OrderedPartition;
use crate::error::{Error, Result};

/// Row-major matrix with entries in {0} u {1..n}.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<u8>) -> IntMatrix {
        assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// 1-based access.
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[(r - 1) * self.cols + (c - 1)]
    }

    fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[(r - 1) * self.cols + (c - 1)] = v;
    }

    /// Nonzero values of a row, left to right, with their 1-based columns.
    pub fn row_entries(&self, r: usize) -> Vec<(u8, usize)> {
        (1..=self.cols).filter_map(|c| Some((self.get(r, c), c)).filter(|&(v, _)| v != 0)).collect()
    }

    /// Nonzero values of a column, top to bottom, with their 1-based rows.
    pub fn col_entries(&self, c: usize) -> Vec<(u8, usize)> {
        (1..=self.rows).filter_map(|r| Some((self.get(r, c), r)).filter(|&(v, _)| v != 0)).collect()
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }
}

impl std::fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 1..=self.rows {
            let row: Vec<String> = (1..=self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

fn contiguous_increasing(values: &[(u8, usize)]) -> bool {
    values.windows(2).all(|w| w[1].1 == w[0].1 + 1 && w[1].0 > w[0].0)
}

/// The three step-matrix conditions over {1..n}.
pub fn is_step_matrix(m: &IntMatrix, n: u8) -> bool {
    let mut seen = vec![0usize; n as usize + 1];
    for &v in &m.data {
        if v > n {
            return false;
        }
        if v != 0 {
            seen[v as usize] += 1;
        }
    }
    if seen[1..].iter().any(|&c| c != 1) {
        return false;
    }
    for r in 1..=m.rows {
        if !contiguous_increasing(&m.row_entries(r)) {
            return false;
        }
    }
    for c in 1..=m.cols {
        if !contiguous_increasing(&m.col_entries(c)) {
            return false;
        }
    }
    // One entry on each diagonal c - r = const.
    for d in -(m.rows as i64 - 1)..=(m.cols as i64 - 1) {
        let mut count = 0;
        for r in 1..=m.rows {
            let c = r as i64 + d;
            if c >= 1 && c <= m.cols as i64 && m.get(r, c as usize) != 0 {
                count += 1;
            }
        }
        if count != 1 {
            return false;
        }
    }
    true
}

/// The step matrix of a permutation: entries w_1, w_2, ... are laid along
/// the staircase from the lower-left cell, moving right on ascents and up on
/// descents.
pub fn from_permutation(w: &[u8]) -> IntMatrix {
    let n = w.len();
    let descents = w.windows(2).filter(|p| p[0] > p[1]).count();
    let rows = descents + 1;
    let cols = n - descents;
    let mut m = IntMatrix::zero(rows, cols);
    let (mut r, mut c) = (rows, 1);
    m.set(r, c, w[0]);
    for t in 1..n {
        if w[t] > w[t - 1] {
            c += 1;
        } else {
            r -= 1;
        }
        m.set(r, c, w[t]);
    }
    m
}

/// Reads the permutation back off the diagonals (unique nonzero per
/// diagonal, lower-left to upper-right). None if some diagonal fails.
pub fn to_permutation(m: &IntMatrix) -> Option<Vec<u8>> {
    let mut out = Vec::new();
    // Walk the diagonals r - c = d from the lower-left corner (d = rows - 1)
    // to the upper-right corner (d = 1 - cols).
    for d in (-(m.cols as i64 - 1)..=(m.rows as i64 - 1)).rev() {
        let mut hit = None;
        for r in 1..=m.rows {
            let c = r as i64 - d;
            if c >= 1 && c <= m.cols as i64 && m.get(r, c as usize) != 0 {
                if hit.is_some() {
                    return None;
                }
                hit = Some(m.get(r, c as usize));
            }
        }
        out.push(hit?);
    }
    Some(out)
}

fn permutations(n: u8) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (1..=n).collect();
    fn heap(k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k % 2 == 0 {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(n as usize, &mut cur, &mut out);
    out
}

/// All step matrices over {1..n}, across all shapes, canonically sorted.
/// Generated through the permutation correspondence; completeness against
/// shape-by-shape brute force is a test.
pub fn step_matrices(n: u8) -> Result<Vec<IntMatrix>> {
    if !(1..=7).contains(&n) {
        return Err(Error::OutOfRange(format!("step matrices need 1 <= n <= 7, got {n}")));
    }
    let mut out: Vec<IntMatrix> = permutations(n).iter().map(|w| from_permutation(w)).collect();
    for m in &out {
        debug_assert!(is_step_matrix(m, n));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Exhaustive enumeration over all q x p shapes and placements; quadratic
/// cost, used as the completeness oracle for `step_matrices`.
pub fn brute_force_step_matrices(n: u8) -> Vec<IntMatrix> {
    let mut out = Vec::new();
    for rows in 1..=n as usize {
        let cols = n as usize + 1 - rows;
        let cells = rows * cols;
        // Choose an injection of {1..n} into the cells.
        let mut m = IntMatrix::zero(rows, cols);
        fn place(v: u8, n: u8, cells: usize, m: &mut IntMatrix, out: &mut Vec<IntMatrix>) {
            if v > n {
                if is_step_matrix(m, n) {
                    out.push(m.clone());
                }
                return;
            }
            for cell in 0..cells {
                if m.data[cell] == 0 {
                    m.data[cell] = v;
                    place(v + 1, n, cells, m, out);
                    m.data[cell] = 0;
                }
            }
        }
        place(1, n, cells, &mut m, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

/// Moves the chosen entries of row i (a proper subset S of its nonzero
/// values) down one row, provided every nonzero of row i+1 is smaller than
/// min S and row i+1 is zero from the column of min S rightwards; otherwise
/// the matrix is returned unchanged. Row q has no row below: unchanged.
pub fn down_shift(m: &IntMatrix, i: usize, s: &BTreeSet<u8>) -> IntMatrix {
    if s.is_empty() || i >= m.rows {
        return m.clone();
    }
    let row: Vec<(u8, usize)> = m.row_entries(i);
    let values: BTreeSet<u8> = row.iter().map(|&(v, _)| v).collect();
    if !s.is_subset(&values) || s.len() == values.len() {
        return m.clone();
    }
    let min_s = *s.iter().next().expect("nonempty");
    let j = row.iter().find(|&&(v, _)| v == min_s).expect("subset").1;
    let below = m.row_entries(i + 1);
    if below.iter().any(|&(v, _)| v >= min_s) {
        return m.clone();
    }
    if below.iter().any(|&(_, c)| c >= j) {
        return m.clone();
    }
    let mut out = m.clone();
    for &(v, c) in &row {
        if s.contains(&v) {
            out.set(i, c, 0);
            out.set(i + 1, c, v);
        }
    }
    out
}

/// The column version: chosen entries of column j move one column right
/// under the transposed guard. Column p has no column to its right: unchanged.
pub fn right_shift(m: &IntMatrix, j: usize, t: &BTreeSet<u8>) -> IntMatrix {
    if t.is_empty() || j >= m.cols {
        return m.clone();
    }
    let col: Vec<(u8, usize)> = m.col_entries(j);
    let values: BTreeSet<u8> = col.iter().map(|&(v, _)| v).collect();
    if !t.is_subset(&values) || t.len() == values.len() {
        return m.clone();
    }
    let min_t = *t.iter().next().expect("nonempty");
    let i = col.iter().find(|&&(v, _)| v == min_t).expect("subset").1;
    let beside = m.col_entries(j + 1);
    if beside.iter().any(|&(v, _)| v >= min_t) {
        return m.clone();
    }
    if beside.iter().any(|&(_, r)| r >= i) {
        return m.clone();
    }
    let mut out = m.clone();
    for &(v, r) in &col {
        if t.contains(&v) {
            out.set(r, j, 0);
            out.set(r, j + 1, v);
        }
    }
    out
}

fn proper_subsets(values: &[u8]) -> Vec<BTreeSet<u8>> {
    let k = values.len();
    let full = (1u32 << k) - 1;
    // Always offer the empty choice (the identity shift), even when there
    // are no values at all.
    (0..full.max(1))
        .map(|mask| {
            values
                .iter()
                .enumerate()
                .filter(|&(bit, _)| mask & (1 << bit) != 0)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect()
}

/// Every matrix reachable by the composite of down shifts on rows 1..q (in
/// that order) followed by right shifts on columns 1..p, over all admissible
/// subset choices, deduplicated stage by stage. Subsets are drawn from the
/// current intermediate matrix. The all-empty choice keeps the input, so the
/// input is always in the result.
pub fn derived_matrices(e: &IntMatrix) -> BTreeSet<IntMatrix> {
    let mut current: BTreeSet<IntMatrix> = BTreeSet::from([e.clone()]);
    for i in 1..=e.rows {
        let mut next = BTreeSet::new();
        for m in &current {
            let values: Vec<u8> = m.row_entries(i).iter().map(|&(v, _)| v).collect();
            for s in proper_subsets(&values) {
                next.insert(down_shift(m, i, &s));
            }
        }
        current = next;
    }
    for j in 1..=e.cols {
        let mut next = BTreeSet::new();
        for m in &current {
            let values: Vec<u8> = m.col_entries(j).iter().map(|&(v, _)| v).collect();
            for t in proper_subsets(&values) {
                next.insert(right_shift(m, j, &t));
            }
        }
        current = next;
    }
    current
}

/// Columns give the left partition A_1|...|A_p, rows in reverse give the
/// right partition B_q|...|B_1.
pub fn complementary_pair(m: &IntMatrix) -> (OrderedPartition, OrderedPartition) {
    let n = m.nonzero_count() as u8;
    let left: Vec<Vec<u8>> =
        (1..=m.cols).map(|c| m.col_entries(c).iter().map(|&(v, _)| v).collect()).collect();
    let right: Vec<Vec<u8>> =
        (1..=m.rows).rev().map(|r| m.row_entries(r).iter().map(|&(v, _)| v).collect()).collect();
    (
        OrderedPartition::new(n, left).expect("columns partition the entries"),
        OrderedPartition::new(n, right).expect("rows partition the entries"),
    )
}
