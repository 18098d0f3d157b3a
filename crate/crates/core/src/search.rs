//! Construction of 4 x n exponent matrices satisfying a constraint profile.
//!
//! Free entries are filled row by row. Before each placement the set of
//! values that would close a forbidden cycle through the new entry is
//! computed in one pass: the cycle sum is linear in the new entry, so every
//! forbidden cycle rules out the roots of `coef * x + rest == 0 (mod N)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::cycles::{cyclic_sequences, CycleWitness};
use crate::matrix::ExponentMatrix;
use crate::profile::{check_profile, ConstraintProfile};

/// Search engines behind [`search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Exhaustive backtracking; can certify that no matrix exists.
    Complete,
    /// Greedy fill with random choices and restarts.
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub cols: usize,
    pub profile: ConstraintProfile,
    pub lift_min: u32,
    pub lift_max: u32,
    /// First three rows, fixed; only the last row is searched.
    pub seed_rows: Option<Vec<Vec<u32>>>,
    pub random_seed: u64,
    /// Node expansions allowed per lifting degree.
    pub budget: u64,
    /// Fix the first row and first column to zero.
    pub normalized: bool,
    pub engine: Engine,
    /// Prune matrices equivalent under column permutation, row 3/4 exchange
    /// and unit scaling (complete engine, normalized and unseeded only).
    pub symmetry_breaking: bool,
}

/// Rows of every matrix this module constructs.
pub const SEARCH_ROWS: usize = 4;

impl SearchConfig {
    pub fn new(cols: usize, profile: ConstraintProfile, lift_min: u32, lift_max: u32) -> Self {
        SearchConfig {
            cols,
            profile,
            lift_min,
            lift_max,
            seed_rows: None,
            random_seed: 0,
            budget: 100_000_000,
            normalized: true,
            engine: Engine::Complete,
            symmetry_breaking: true,
        }
    }

    pub fn engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn random_seed(mut self, seed: u64) -> Self {
        self.random_seed = seed;
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn seed_rows(mut self, rows: Vec<Vec<u32>>) -> Self {
        self.seed_rows = Some(rows);
        self
    }

    pub fn normalized(mut self, on: bool) -> Self {
        self.normalized = on;
        self
    }

    pub fn symmetry_breaking(mut self, on: bool) -> Self {
        self.symmetry_breaking = on;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("empty lifting range {0}..={1}")]
    EmptyRange(u32, u32),
    #[error("lifting degree must be at least 2")]
    LiftTooSmall,
    #[error("need at least 2 columns")]
    TooFewColumns,
    #[error("seed rows must be 3 rows of {expected} entries")]
    SeedShape { expected: usize },
    #[error("profile references row {0}, but matrices have 4 rows")]
    ProfileRows(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStatus {
    Found,
    /// Complete search showed no matrix exists anywhere in the range.
    Exhausted,
    /// Budget ran out before a matrix was found; inconclusive.
    Budget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LiftAttempt {
    pub lift: u32,
    pub status: SearchStatus,
    pub expansions: u64,
    pub restarts: u64,
}

/// A complete matrix meeting the girth floor but rejected by a row-pattern
/// constraint, kept for inspection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RejectedCandidate {
    pub matrix: ExponentMatrix,
    pub constraint: String,
    pub witness: CycleWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub matrix: Option<ExponentMatrix>,
    pub lift: Option<u32>,
    pub expansions: u64,
    pub restarts: u64,
    pub attempts: Vec<LiftAttempt>,
    pub rejected: Option<RejectedCandidate>,
}

/// A forbidden cycle that closes when a given position is filled.
/// Its sum is `coef * x + sum(others)` with `x` the entry being placed.
#[derive(Debug, Clone, Copy)]
struct Closing {
    girth: bool,
    coef: i64,
    start: usize,
    len: usize,
}

/// Lift-independent constraint tables: every forbidden cycle, attached to
/// the fill position at which its last free entry is placed.
struct Plan {
    cols: usize,
    /// free cells `row * cols + col` in fill order
    order: Vec<usize>,
    /// fixed cells with their unreduced values
    fixed: Vec<(usize, u64)>,
    closing: Vec<Vec<Closing>>,
    /// `(cell, coefficient)` terms referenced by `Closing`
    terms: Vec<(usize, i64)>,
    /// cycles made only of fixed cells, as `(girth, start, len)`
    fixed_cycles: Vec<(bool, usize, usize)>,
    /// a forbidden cycle whose sum vanishes identically
    always_closed: bool,
    sym: Symmetry,
}

/// Symmetry breaking for the complete engine on normalized, unseeded searches.
#[derive(Debug, Clone, Copy, Default)]
struct Symmetry {
    /// free columns permute, so row 1 is kept increasing
    sorted_row1: bool,
    /// the profile is invariant under exchanging rows 3 and 4
    swap_rows_34: bool,
    /// scaling by a unit mod N preserves every cycle condition
    unit_scaling: bool,
}

impl Plan {
    fn new(cfg: &SearchConfig) -> Self {
        let m = SEARCH_ROWS;
        let n = cfg.cols;
        let mut fixed = Vec::new();
        let mut order = Vec::new();
        // row-major: a row is complete before the next one starts
        for i in 0..m {
            for j in 0..n {
                let cell = i * n + j;
                let value = match &cfg.seed_rows {
                    Some(seed) if i < 3 => Some(seed[i][j] as u64),
                    _ if cfg.normalized && (i == 0 || j == 0) => Some(0),
                    _ => None,
                };
                match value {
                    Some(v) => fixed.push((cell, v)),
                    None => order.push(cell),
                }
            }
        }
        let mut rank = vec![usize::MAX; m * n];
        for (p, &c) in order.iter().enumerate() {
            rank[c] = p;
        }

        let mut closing = vec![Vec::new(); order.len()];
        let mut terms = Vec::new();
        let mut fixed_cycles = Vec::new();
        let mut always_closed = false;
        let mut seen = HashSet::new();
        for k in cfg.profile.constrained_half_lengths() {
            let col_seqs = cyclic_sequences(n, k);
            for rows in cyclic_sequences(m, k) {
                if !cfg.profile.forbids(&rows) {
                    continue;
                }
                let girth = 2 * k < cfg.profile.girth_floor;
                for cols in &col_seqs {
                    let slots: Vec<(usize, usize)> = rows.iter().copied().zip(cols.iter().copied()).collect();
                    if !seen.insert(CycleWitness::canonical(slots)) {
                        continue;
                    }
                    let mut coef = vec![0i64; m * n];
                    for t in 0..k {
                        coef[rows[t] * n + cols[t]] += 1;
                        coef[rows[t] * n + cols[(t + 1) % k]] -= 1;
                    }
                    let cells: Vec<usize> = (0..m * n).filter(|&c| coef[c] != 0).collect();
                    if cells.is_empty() {
                        always_closed = true;
                        continue;
                    }
                    let last = cells.iter().copied().filter(|&c| rank[c] != usize::MAX).max_by_key(|&c| rank[c]);
                    let start = terms.len();
                    match last {
                        Some(lc) => {
                            terms.extend(cells.iter().filter(|&&c| c != lc).map(|&c| (c, coef[c])));
                            closing[rank[lc]].push(Closing {
                                girth,
                                coef: coef[lc],
                                start,
                                len: terms.len() - start,
                            });
                        }
                        None => {
                            terms.extend(cells.iter().map(|&c| (c, coef[c])));
                            fixed_cycles.push((girth, start, terms.len() - start));
                        }
                    }
                }
            }
        }

        let mut sym = Symmetry::default();
        if cfg.symmetry_breaking && cfg.engine == Engine::Complete && cfg.normalized && cfg.seed_rows.is_none() {
            sym.sorted_row1 = n >= 3;
            sym.unit_scaling = n >= 2;
            let swap = |r: usize| match r {
                2 => 3,
                3 => 2,
                r => r,
            };
            sym.swap_rows_34 = n >= 2
                && cfg.profile.constrained_half_lengths().into_iter().all(|k| {
                    cyclic_sequences(m, k).iter().all(|rows| {
                        let swapped: Vec<usize> = rows.iter().map(|&r| swap(r)).collect();
                        cfg.profile.forbids(rows) == cfg.profile.forbids(&swapped)
                    })
                });
        }

        Plan {
            cols: n,
            order,
            fixed,
            closing,
            terms,
            fixed_cycles,
            always_closed,
            sym,
        }
    }
}

/// Bitset over `0..N`.
#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(size: usize) -> Self {
        Bits(vec![0; size.div_ceil(64)])
    }

    fn clear(&mut self) {
        self.0.iter_mut().for_each(|w| *w = 0);
    }

    #[inline]
    fn set(&mut self, x: usize) {
        self.0[x / 64] |= 1 << (x % 64);
    }

    #[inline]
    fn get(&self, x: usize) -> bool {
        self.0[x / 64] >> (x % 64) & 1 == 1
    }
}

/// Marks every root of `coef * x + rest == 0 (mod n)`.
fn mark_roots(coef: i64, rest: i64, n: i64, out: &mut Bits) {
    match coef {
        1 | -1 => out.set((-coef * rest).rem_euclid(n) as usize),
        _ => {
            for x in 0..n {
                if (coef * x + rest).rem_euclid(n) == 0 {
                    out.set(x as usize);
                }
            }
        }
    }
}

/// Partial matrix at one lifting degree.
struct State<'a> {
    plan: &'a Plan,
    lift: u32,
    values: Vec<u32>,
    girth_bad: Vec<Bits>,
    row_bad: Vec<Bits>,
}

impl<'a> State<'a> {
    fn new(plan: &'a Plan, lift: u32) -> Self {
        let mut values = vec![0u32; SEARCH_ROWS * plan.cols];
        for &(c, v) in &plan.fixed {
            values[c] = (v % lift as u64) as u32;
        }
        let depth = plan.order.len();
        State {
            plan,
            lift,
            values,
            girth_bad: vec![Bits::new(lift as usize); depth],
            row_bad: vec![Bits::new(lift as usize); depth],
        }
    }

    fn sum_of(&self, start: usize, len: usize) -> i64 {
        self.plan.terms[start..start + len]
            .iter()
            .map(|&(c, k)| k * self.values[c] as i64)
            .sum()
    }

    fn fixed_entries_violate(&self) -> bool {
        let n = self.lift as i64;
        self.plan.always_closed
            || self
                .plan
                .fixed_cycles
                .iter()
                .any(|&(_, s, l)| self.sum_of(s, l).rem_euclid(n) == 0)
    }

    /// Fills the forbidden-value sets of position `pos`.
    fn compute_forbidden(&mut self, pos: usize) {
        let n = self.lift as i64;
        let mut girth = std::mem::replace(&mut self.girth_bad[pos], Bits(Vec::new()));
        let mut row = std::mem::replace(&mut self.row_bad[pos], Bits(Vec::new()));
        girth.clear();
        row.clear();
        for cl in &self.plan.closing[pos] {
            let rest = self.sum_of(cl.start, cl.len);
            mark_roots(cl.coef, rest, n, if cl.girth { &mut girth } else { &mut row });
        }
        self.girth_bad[pos] = girth;
        self.row_bad[pos] = row;
    }

    #[inline]
    fn allowed(&self, pos: usize, x: usize) -> bool {
        !self.girth_bad[pos].get(x) && !self.row_bad[pos].get(x)
    }

    /// Smallest value position `pos` may take under the symmetry breaking.
    fn floor(&self, pos: usize) -> u32 {
        let n = self.plan.cols;
        let cell = self.plan.order[pos];
        let (i, j) = (cell / n, cell % n);
        let sym = self.plan.sym;
        if sym.sorted_row1 && i == 1 && j >= 2 {
            self.values[n + j - 1] + 1
        } else if sym.swap_rows_34 && i == 3 && j == 1 {
            self.values[2 * n + 1] + 1
        } else {
            0
        }
    }

    /// With row 1 complete, keeps only row-1 sets that are lexicographically
    /// minimal among their images under scaling by units.
    fn row1_is_minimal(&self) -> bool {
        let n = self.plan.cols;
        let lift = self.lift as u64;
        let row: Vec<u64> = self.values[n + 1..2 * n].iter().map(|&v| v as u64).collect();
        let mut sorted = row.clone();
        sorted.sort_unstable();
        (2..lift).filter(|&u| gcd(u, lift) == 1).all(|u| {
            let mut img: Vec<u64> = row.iter().map(|&v| v * u % lift).collect();
            img.sort_unstable();
            img >= sorted
        })
    }

    fn closes_row1(&self, pos: usize) -> bool {
        let n = self.plan.cols;
        self.plan.sym.unit_scaling && self.plan.order[pos] == 2 * n - 1
    }

    fn to_matrix(&self) -> ExponentMatrix {
        ExponentMatrix::new(SEARCH_ROWS, self.plan.cols, self.lift, self.values.clone()).unwrap()
    }

    /// Records a rejected complete candidate at the last position.
    fn note_rejection(&mut self, cfg: &SearchConfig, slot: &mut Option<RejectedCandidate>) {
        if slot.is_some() {
            return;
        }
        let pos = self.plan.order.len() - 1;
        let cell = self.plan.order[pos];
        let x = (0..self.lift as usize).find(|&x| !self.girth_bad[pos].get(x) && self.row_bad[pos].get(x));
        if let Some(x) = x {
            let saved = self.values[cell];
            self.values[cell] = x as u32;
            let matrix = self.to_matrix();
            self.values[cell] = saved;
            let report = check_profile(&matrix, &cfg.profile);
            if let Some(v) = report.violations.into_iter().next() {
                *slot = Some(RejectedCandidate {
                    matrix,
                    constraint: v.constraint,
                    witness: v.witness,
                });
            }
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

struct RunStats {
    expansions: u64,
    restarts: u64,
}

fn complete_search(
    st: &mut State,
    cfg: &SearchConfig,
    pos: usize,
    stats: &mut RunStats,
    rejected: &mut Option<RejectedCandidate>,
) -> Option<bool> {
    if pos == st.plan.order.len() {
        return Some(true);
    }
    stats.expansions += 1;
    if stats.expansions > cfg.budget {
        return None;
    }
    st.compute_forbidden(pos);
    if pos + 1 == st.plan.order.len() {
        st.note_rejection(cfg, rejected);
    }
    let cell = st.plan.order[pos];
    for x in st.floor(pos) as usize..st.lift as usize {
        if !st.allowed(pos, x) {
            continue;
        }
        st.values[cell] = x as u32;
        if st.closes_row1(pos) && !st.row1_is_minimal() {
            continue;
        }
        if complete_search(st, cfg, pos + 1, stats, rejected)? {
            return Some(true);
        }
    }
    Some(false)
}

/// Restart-stream id for one lifting degree and restart index.
fn stream_id(lift: u32, restart: u64) -> u64 {
    ((lift as u64) << 40) ^ restart
}

type FillResult = (Option<ExponentMatrix>, u64, Option<RejectedCandidate>);

/// One greedy randomized fill: each entry takes a uniformly random allowed value.
fn random_fill(cfg: &SearchConfig, plan: &Plan, lift: u32, restart: u64) -> FillResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.random_seed);
    rng.set_stream(stream_id(lift, restart));
    let mut st = State::new(plan, lift);
    let mut rejected = None;
    if st.fixed_entries_violate() {
        return (None, 0, None);
    }
    let mut choices = Vec::with_capacity(lift as usize);
    for pos in 0..plan.order.len() {
        st.compute_forbidden(pos);
        if pos + 1 == plan.order.len() {
            st.note_rejection(cfg, &mut rejected);
        }
        choices.clear();
        choices.extend((0..lift as usize).filter(|&x| st.allowed(pos, x)));
        if choices.is_empty() {
            return (None, pos as u64 + 1, rejected);
        }
        st.values[plan.order[pos]] = choices[rng.gen_range(0..choices.len())] as u32;
    }
    (Some(st.to_matrix()), plan.order.len() as u64, rejected)
}

const RESTART_BATCH: u64 = 64;

fn validate(cfg: &SearchConfig) -> Result<(), SearchError> {
    if cfg.lift_min > cfg.lift_max {
        return Err(SearchError::EmptyRange(cfg.lift_min, cfg.lift_max));
    }
    if cfg.lift_min < 2 {
        return Err(SearchError::LiftTooSmall);
    }
    if cfg.cols < 2 {
        return Err(SearchError::TooFewColumns);
    }
    if let Some(seed) = &cfg.seed_rows {
        if seed.len() != 3 || seed.iter().any(|r| r.len() != cfg.cols) {
            return Err(SearchError::SeedShape { expected: cfg.cols });
        }
    }
    if cfg.profile.max_row() >= SEARCH_ROWS {
        return Err(SearchError::ProfileRows(cfg.profile.max_row() + 1));
    }
    Ok(())
}

/// Scans lifting degrees in ascending order and returns the first matrix found.
pub fn search(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    validate(cfg)?;
    let mut attempts = Vec::new();
    let mut total_exp = 0u64;
    let mut total_restarts = 0u64;
    let mut rejected: Option<RejectedCandidate> = None;
    let mut any_budget = false;
    let plan = Plan::new(cfg);

    for lift in cfg.lift_min..=cfg.lift_max {
        let (status, matrix, exp, restarts) = match cfg.engine {
            Engine::Complete => {
                let mut st = State::new(&plan, lift);
                let mut stats = RunStats {
                    expansions: 0,
                    restarts: 0,
                };
                let res = if st.fixed_entries_violate() {
                    Some(false)
                } else {
                    complete_search(&mut st, cfg, 0, &mut stats, &mut rejected)
                };
                match res {
                    Some(true) => (SearchStatus::Found, Some(st.to_matrix()), stats.expansions, stats.restarts),
                    Some(false) => (SearchStatus::Exhausted, None, stats.expansions, stats.restarts),
                    None => (SearchStatus::Budget, None, stats.expansions, stats.restarts),
                }
            }
            Engine::Random => {
                let mut exp = 0u64;
                let mut next = 0u64;
                let mut found = None;
                while found.is_none() && exp < cfg.budget {
                    let batch: Vec<FillResult> = (next..next + RESTART_BATCH)
                        .into_par_iter()
                        .map(|r| random_fill(cfg, &plan, lift, r))
                        .collect();
                    for (idx, (m, placed, rej)) in batch.into_iter().enumerate() {
                        if found.is_some() {
                            break;
                        }
                        exp += placed;
                        if rejected.is_none() {
                            rejected = rej;
                        }
                        if m.is_some() {
                            found = m;
                            next += idx as u64 + 1;
                        }
                    }
                    if found.is_none() {
                        next += RESTART_BATCH;
                    }
                }
                match found {
                    Some(m) => (SearchStatus::Found, Some(m), exp, next),
                    None => (SearchStatus::Budget, None, exp, next),
                }
            }
        };
        total_exp += exp;
        total_restarts += restarts;
        attempts.push(LiftAttempt {
            lift,
            status,
            expansions: exp,
            restarts,
        });
        match status {
            SearchStatus::Found => {
                let m = matrix.unwrap();
                debug_assert!(check_profile(&m, &cfg.profile).pass);
                return Ok(SearchOutcome {
                    status,
                    matrix: Some(m),
                    lift: Some(lift),
                    expansions: total_exp,
                    restarts: total_restarts,
                    attempts,
                    rejected,
                });
            }
            SearchStatus::Budget => any_budget = true,
            SearchStatus::Exhausted => {}
        }
    }
    Ok(SearchOutcome {
        status: if any_budget {
            SearchStatus::Budget
        } else {
            SearchStatus::Exhausted
        },
        matrix: None,
        lift: None,
        expansions: total_exp,
        restarts: total_restarts,
        attempts,
        rejected,
    })
}
