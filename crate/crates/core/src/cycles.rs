//! Cycle analysis directly on the exponent matrix.
//!
//! A length-`2k` cycle in the lifted graph corresponds to a slot sequence
//! `((m_0, n_0), ..., (m_{k-1}, n_{k-1}))` with cyclically distinct adjacent
//! rows and columns such that
//! `sum_i (b[m_i][n_i] - b[m_i][n_{i+1}]) == 0 (mod N)`.
//! The walk visits variable block `n_0`, check block `m_0`, variable block
//! `n_1`, check block `m_1`, and so on. Rows and columns are 0-based here.

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::matrix::ExponentMatrix;
use crate::tanner::Girth;

/// Largest half-length the enumerator accepts (cycles up to length 12).
pub const MAX_HALF_LENGTH: usize = 6;

/// One `(row, column)` slot of a cycle witness.
pub type Slot = (usize, usize);

/// A solution of the cycle condition, stored in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleWitness {
    slots: Vec<Slot>,
}

/// Serialized with 1-based rows and columns, like every user-facing output.
impl Serialize for CycleWitness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CycleWitness", 2)?;
        st.serialize_field("length", &self.length())?;
        st.serialize_field("slots", &self.display_slots())?;
        st.end()
    }
}

impl CycleWitness {
    /// Wraps a slot sequence as-is, without canonicalization or validation.
    pub fn raw(slots: Vec<Slot>) -> Self {
        CycleWitness { slots }
    }

    /// Canonical representative of the slot sequence's dihedral orbit.
    pub fn canonical(slots: Vec<Slot>) -> Self {
        let w = CycleWitness { slots };
        w.images().into_iter().min().unwrap()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// Cycle length `2k` in the lifted graph.
    pub fn length(&self) -> usize {
        2 * self.slots.len()
    }

    pub fn row_pattern(&self) -> Vec<usize> {
        self.slots.iter().map(|s| s.0).collect()
    }

    pub fn column_pattern(&self) -> Vec<usize> {
        self.slots.iter().map(|s| s.1).collect()
    }

    /// Sorted rows, with repetition.
    pub fn row_multiset(&self) -> Vec<usize> {
        let mut rows = self.row_pattern();
        rows.sort_unstable();
        rows
    }

    /// The `k` rotations and their reflections (`2k` sequences, possibly repeated).
    pub fn images(&self) -> Vec<CycleWitness> {
        let k = self.slots.len();
        let mut out = Vec::with_capacity(2 * k);
        for r in 0..k {
            let rot: Vec<Slot> = (0..k).map(|i| self.slots[(i + r) % k]).collect();
            // walking the other way: n'_i = n_{-i}, m'_i = m_{-i-1}
            let refl: Vec<Slot> = (0..k)
                .map(|i| (rot[(2 * k - i - 1) % k].0, rot[(k - i) % k].1))
                .collect();
            out.push(CycleWitness { slots: rot });
            out.push(CycleWitness { slots: refl });
        }
        out
    }

    /// Number of distinct sequences in the dihedral orbit.
    pub fn orbit_size(&self) -> usize {
        let mut imgs = self.images();
        imgs.sort();
        imgs.dedup();
        imgs.len()
    }

    pub fn is_canonical(&self) -> bool {
        self.images().iter().all(|w| w >= self)
    }

    /// Checks adjacency inequality and the modular sum.
    pub fn is_solution(&self, b: &ExponentMatrix) -> bool {
        let k = self.slots.len();
        if k < 2 {
            return false;
        }
        let mut sum = 0i64;
        for i in 0..k {
            let (m_i, n_i) = self.slots[i];
            let (m_next, n_next) = self.slots[(i + 1) % k];
            if m_i == m_next || n_i == n_next || m_i >= b.rows() || n_i >= b.cols() {
                return false;
            }
            sum += b.get(m_i, n_i) as i64 - b.get(m_i, n_next) as i64;
        }
        sum.rem_euclid(b.lift() as i64) == 0
    }

    /// 1-based slots, as shown to users.
    pub fn display_slots(&self) -> Vec<[usize; 2]> {
        self.slots.iter().map(|&(r, c)| [r + 1, c + 1]).collect()
    }
}

/// All cyclic sequences of length `k` over `0..alphabet` with adjacent entries distinct.
pub fn cyclic_sequences(alphabet: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(alphabet: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            if cur[0] != cur[k - 1] {
                out.push(cur.clone());
            }
            return;
        }
        for x in 0..alphabet {
            if cur.last() != Some(&x) {
                cur.push(x);
                rec(alphabet, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if k >= 2 {
        rec(alphabet, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Visits every column tuple solving the condition for a fixed row pattern.
/// The visitor returns `false` to stop early; the function reports whether it was stopped.
fn solve_columns<F>(b: &ExponentMatrix, rows: &[usize], cols_allowed: &[usize], visit: &mut F) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    let k = rows.len();
    let lift = b.lift() as i64;
    let mut cols = vec![0usize; k];

    // partial = sum over i < depth-1 of (b[m_i][n_i] - b[m_i][n_{i+1}])
    #[allow(clippy::too_many_arguments)]
    fn rec<F: FnMut(&[usize]) -> bool>(
        b: &ExponentMatrix,
        rows: &[usize],
        allowed: &[usize],
        lift: i64,
        cols: &mut [usize],
        depth: usize,
        partial: i64,
        visit: &mut F,
    ) -> bool {
        let k = rows.len();
        if depth == k {
            let (m_last, n_last) = (rows[k - 1], cols[k - 1]);
            if n_last == cols[0] {
                return false;
            }
            let total = partial + b.get(m_last, n_last) as i64 - b.get(m_last, cols[0]) as i64;
            if total.rem_euclid(lift) == 0 {
                return !visit(cols);
            }
            return false;
        }
        for &c in allowed {
            if depth > 0 && c == cols[depth - 1] {
                continue;
            }
            cols[depth] = c;
            let next = if depth > 0 {
                let m_prev = rows[depth - 1];
                partial + b.get(m_prev, cols[depth - 1]) as i64 - b.get(m_prev, c) as i64
            } else {
                0
            };
            if rec(b, rows, allowed, lift, cols, depth + 1, next, visit) {
                return true;
            }
        }
        false
    }
    rec(b, rows, cols_allowed, lift, &mut cols, 0, 0, visit)
}

fn all_columns(b: &ExponentMatrix) -> Vec<usize> {
    (0..b.cols()).collect()
}

/// Every raw (non-canonicalized) solution of half-length `k`.
pub fn raw_cycle_solutions(b: &ExponentMatrix, k: usize) -> Vec<CycleWitness> {
    assert!((2..=MAX_HALF_LENGTH).contains(&k), "half-length {k} outside 2..=6");
    let cols = all_columns(b);
    cyclic_sequences(b.rows(), k)
        .par_iter()
        .flat_map_iter(|rows| {
            let mut out = Vec::new();
            solve_columns(b, rows, &cols, &mut |c| {
                out.push(CycleWitness::raw(rows.iter().copied().zip(c.iter().copied()).collect()));
                true
            });
            out
        })
        .collect()
}

/// Canonical solutions of half-length `k` whose row pattern passes `row_filter`,
/// sorted and deduplicated.
pub fn enumerate_cycle_solutions_where<P>(b: &ExponentMatrix, k: usize, row_filter: P) -> Vec<CycleWitness>
where
    P: Fn(&[usize]) -> bool + Sync,
{
    assert!((2..=MAX_HALF_LENGTH).contains(&k), "half-length {k} outside 2..=6");
    let cols = all_columns(b);
    let mut out: Vec<CycleWitness> = cyclic_sequences(b.rows(), k)
        .par_iter()
        .filter(|rows| row_filter(rows))
        .flat_map_iter(|rows| {
            let mut found = Vec::new();
            solve_columns(b, rows, &cols, &mut |c| {
                let w = CycleWitness::raw(rows.iter().copied().zip(c.iter().copied()).collect());
                if w.is_canonical() {
                    found.push(w);
                }
                true
            });
            found
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// All canonical solutions of half-length `k` (cycles of length `2k`).
pub fn enumerate_cycle_solutions(b: &ExponentMatrix, k: usize) -> Vec<CycleWitness> {
    enumerate_cycle_solutions_where(b, k, |_| true)
}

/// First solution found for a row filter, if any.
pub fn find_cycle_solution<P>(b: &ExponentMatrix, k: usize, row_filter: P) -> Option<CycleWitness>
where
    P: Fn(&[usize]) -> bool + Sync,
{
    let cols = all_columns(b);
    cyclic_sequences(b.rows(), k)
        .par_iter()
        .filter(|rows| row_filter(rows))
        .filter_map(|rows| {
            let mut hit = None;
            solve_columns(b, rows, &cols, &mut |c| {
                hit = Some(CycleWitness::canonical(
                    rows.iter().copied().zip(c.iter().copied()).collect(),
                ));
                false
            });
            hit
        })
        .min()
}

/// Girth computed from the exponent matrix without lifting.
pub fn exponent_girth(b: &ExponentMatrix, cap: usize) -> Girth {
    assert!(cap <= 2 * MAX_HALF_LENGTH + 2, "cap {cap} exceeds supported cycle lengths");
    for k in 2..=MAX_HALF_LENGTH {
        if 2 * k >= cap {
            break;
        }
        if find_cycle_solution(b, k, |_| true).is_some() {
            return Girth::Exact(2 * k);
        }
    }
    Girth::AtLeast(cap)
}

/// Precondition violations for the row-pattern counters.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycleError {
    #[error("matrix has 4-cycles (witness {0:?})")]
    HasFourCycles(CycleWitness),
    #[error("matrix has 6-cycles (witness {0:?})")]
    HasSixCycles(CycleWitness),
    #[error("row index {0} is out of range")]
    RowOutOfRange(usize),
    #[error("rows must be distinct")]
    RepeatedRow,
}

fn check_rows(b: &ExponentMatrix, rows: &[usize]) -> Result<(), CycleError> {
    if let Some(&r) = rows.iter().find(|&&r| r >= b.rows()) {
        return Err(CycleError::RowOutOfRange(r));
    }
    for (i, r) in rows.iter().enumerate() {
        if rows[..i].contains(r) {
            return Err(CycleError::RepeatedRow);
        }
    }
    Ok(())
}

fn require_no_four_cycles(b: &ExponentMatrix) -> Result<(), CycleError> {
    match find_cycle_solution(b, 2, |_| true) {
        Some(w) => Err(CycleError::HasFourCycles(w)),
        None => Ok(()),
    }
}

/// Canonical 6-cycle witnesses using exactly the given three rows.
pub fn six_cycles_by_row_set(b: &ExponentMatrix, rows: [usize; 3]) -> Result<Vec<CycleWitness>, CycleError> {
    check_rows(b, &rows)?;
    require_no_four_cycles(b)?;
    let mut target = rows;
    target.sort_unstable();
    Ok(enumerate_cycle_solutions_where(b, 3, |r| {
        let mut s = [r[0], r[1], r[2]];
        s.sort_unstable();
        s == target
    }))
}

/// Number of canonical 6-cycles whose rows are exactly the given set.
pub fn count_6cycles_by_row_set(b: &ExponentMatrix, rows: [usize; 3]) -> Result<usize, CycleError> {
    six_cycles_by_row_set(b, rows).map(|w| w.len())
}

/// True when a length-4 row pattern has `r_double` in two opposite slots and
/// `r_required` in one of the other two.
pub fn matches_doubled_row(rows: &[usize], r_double: usize, r_required: usize) -> bool {
    rows.len() == 4
        && ((rows[0] == r_double && rows[2] == r_double && (rows[1] == r_required || rows[3] == r_required))
            || (rows[1] == r_double && rows[3] == r_double && (rows[0] == r_required || rows[2] == r_required)))
}

/// Result of the doubled-row 8-cycle query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubledRowReport {
    pub found: bool,
    pub witnesses: Vec<CycleWitness>,
}

/// Looks for 8-cycles whose rows use `r_double` twice and `r_required` at least once.
pub fn has_8cycle_doubled_row(
    b: &ExponentMatrix,
    r_double: usize,
    r_required: usize,
) -> Result<DoubledRowReport, CycleError> {
    check_rows(b, &[r_double, r_required])?;
    require_no_four_cycles(b)?;
    if let Some(w) = find_cycle_solution(b, 3, |_| true) {
        return Err(CycleError::HasSixCycles(w));
    }
    let witnesses = enumerate_cycle_solutions_where(b, 4, |r| matches_doubled_row(r, r_double, r_required));
    Ok(DoubledRowReport {
        found: !witnesses.is_empty(),
        witnesses,
    })
}
