//! Elementary trapping set search on lifted Tanner graphs.
//!
//! [`find_ets`] grows connected variable subsets (each new variable shares a
//! check with the current set), so every elementary set is reached through
//! its VN graph. Subsets are generated once each in the style of ESU: the
//! root is the smallest flat id of the set and only larger ids enter the
//! extension frontier. The quasi-cyclic shift is factored out by rooting
//! only at offset 0 and keeping the lexicographically smallest shift of
//! every found set.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::tanner::{bfs_girth, TannerGraph, VariableNodeId};
use crate::vngraph::{are_isomorphic, VnGraph, MAX_VERTICES};

/// Default node-expansion budget for [`find_ets`].
pub const DEFAULT_EXPANSION_BUDGET: u64 = 1_000_000_000;

/// Largest subset the brute-force oracle will enumerate.
pub const ORACLE_SUBSET_LIMIT: u128 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EtsQuery {
    pub a_min: usize,
    pub a_max: usize,
    pub b_max: usize,
    pub elementary_only: bool,
    /// Girth the caller expects; enables the structural checks for girth 8.
    pub girth_context: usize,
    pub expansion_budget: u64,
}

impl EtsQuery {
    pub fn new(a_max: usize, b_max: usize) -> Self {
        EtsQuery {
            a_min: 1,
            a_max,
            b_max,
            elementary_only: true,
            girth_context: 6,
            expansion_budget: DEFAULT_EXPANSION_BUDGET,
        }
    }

    /// Restricts the query to sizes `a_min..=a_max`.
    pub fn sizes(mut self, a_min: usize, a_max: usize) -> Self {
        self.a_min = a_min;
        self.a_max = a_max;
        self
    }

    pub fn girth_context(mut self, g: usize) -> Self {
        self.girth_context = g;
        self
    }

    pub fn budget(mut self, expansions: u64) -> Self {
        self.expansion_budget = expansions;
        self
    }
}

/// A check node adjacent to the subset, with its row block (1-based) and
/// its degree inside the induced subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IncidentCheck {
    pub check: u32,
    pub row: usize,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EtsRecord {
    /// Sorted flat variable ids.
    pub vars: Vec<u32>,
    pub a: usize,
    pub b: usize,
    pub elementary: bool,
    pub checks: Vec<IncidentCheck>,
    /// VN graph (vertices in `vars` order); absent for sets larger than
    /// [`MAX_VERTICES`] or when two variables share more than one check.
    pub vn_graph: Option<VnGraph>,
    /// Row block (1-based) of the degree-2 check behind each VN-graph edge,
    /// aligned with `vn_graph.edges()`.
    pub edge_rows: Vec<u8>,
}

impl EtsRecord {
    pub fn var_ids(&self, lift: u32) -> Vec<VariableNodeId> {
        self.vars.iter().map(|&v| VariableNodeId::from_flat(v, lift)).collect()
    }

    /// True when the row coloring of VN-graph edges is proper: every
    /// variable meets each row block once, so this must hold.
    pub fn row_coloring_is_proper(&self) -> bool {
        let Some(g) = &self.vn_graph else {
            return true;
        };
        let mut seen = vec![0u32; g.order()];
        for (&(u, v), &row) in g.edges().iter().zip(&self.edge_rows) {
            let bit = 1u32 << row;
            if seen[u] & bit != 0 || seen[v] & bit != 0 {
                return false;
            }
            seen[u] |= bit;
            seen[v] |= bit;
        }
        true
    }
}

/// Classifies an arbitrary nonempty variable subset.
pub fn classify_subset(g: &TannerGraph, subset: &[u32]) -> EtsRecord {
    assert!(!subset.is_empty(), "subset must be nonempty");
    let mut vars = subset.to_vec();
    vars.sort_unstable();
    vars.dedup();

    let mut checks: Vec<(u32, Vec<usize>)> = Vec::new();
    for (pos, &v) in vars.iter().enumerate() {
        for &c in g.checks_of(v) {
            match checks.iter_mut().find(|(cc, _)| *cc == c) {
                Some((_, members)) => members.push(pos),
                None => checks.push((c, vec![pos])),
            }
        }
    }
    checks.sort_by_key(|(c, _)| *c);

    let b = checks.iter().filter(|(_, m)| m.len() % 2 == 1).count();
    let elementary = checks.iter().all(|(_, m)| m.len() <= 2);

    let mut vn_graph = None;
    let mut edge_rows = Vec::new();
    if vars.len() <= MAX_VERTICES {
        let mut pairs: Vec<((usize, usize), u8)> = checks
            .iter()
            .filter(|(_, m)| m.len() == 2)
            .map(|(c, m)| ((m[0], m[1]), g.check_row_block(*c) as u8 + 1))
            .collect();
        pairs.sort_unstable();
        let edges: Vec<(usize, usize)> = pairs.iter().map(|p| p.0).collect();
        if let Ok(graph) = VnGraph::from_edges(vars.len(), &edges) {
            edge_rows = pairs.iter().map(|p| p.1).collect();
            vn_graph = Some(graph);
        }
    }

    EtsRecord {
        a: vars.len(),
        b,
        elementary,
        checks: checks
            .iter()
            .map(|(c, m)| IncidentCheck {
                check: *c,
                row: g.check_row_block(*c) + 1,
                degree: m.len(),
            })
            .collect(),
        vars,
        vn_graph,
        edge_rows,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EtsStatus {
    /// Search completed and nothing matched.
    Free,
    /// Search completed with at least one record.
    Found,
    /// Budget exhausted; the record list is incomplete.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct EtsSearchResult {
    pub status: EtsStatus,
    /// One representative per quasi-cyclic orbit, sorted by `(a, b, vars)`.
    pub records: Vec<EtsRecord>,
    pub expansions: u64,
    /// Structural expectations that failed on found records.
    pub anomalies: Vec<String>,
}

impl EtsSearchResult {
    /// Records with exactly the given parameters.
    pub fn with_params(&self, a: usize, b: usize) -> impl Iterator<Item = &EtsRecord> {
        self.records.iter().filter(move |r| r.a == a && r.b == b)
    }
}

/// Lower bound on the final `b` of any elementary superset of size
/// `current + remaining` of a set with `b_now` degree-1 checks.
///
/// New variables contribute `gamma` edges each. An edge into an open
/// degree-1 check lowers `b` by one, an edge shared by two new variables
/// through a fresh check adds nothing, any other edge raises `b` by one.
/// `new_pair_cap` bounds the number of checks shared between new variables.
pub fn b_lower_bound(b_now: usize, remaining: usize, gamma: usize, new_pair_cap: usize) -> isize {
    let slots = gamma * remaining;
    let into_open = b_now.min(slots);
    let shared_new = new_pair_cap.min((slots - into_open) / 2);
    b_now as isize + slots as isize - 2 * (into_open + shared_new) as isize
}

fn max_edges_among(r: usize, triangle_free: bool) -> usize {
    if triangle_free {
        r * r / 4
    } else {
        r * r.saturating_sub(1) / 2
    }
}

/// Neighbours of each variable through shared checks, sorted and deduplicated.
fn var_neighbors(g: &TannerGraph) -> Vec<Vec<u32>> {
    (0..g.num_vars() as u32)
        .map(|v| {
            let mut nb: Vec<u32> = g
                .checks_of(v)
                .iter()
                .flat_map(|&c| g.vars_of(c).iter().copied())
                .filter(|&w| w != v)
                .collect();
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect()
}

/// Smallest sorted id tuple over all quasi-cyclic shifts of `vars`.
pub fn canonical_shift(g: &TannerGraph, vars: &[u32]) -> Vec<u32> {
    (0..g.lift())
        .map(|s| {
            let mut shifted: Vec<u32> = vars.iter().map(|&v| g.shift_var(v, s)).collect();
            shifted.sort_unstable();
            shifted
        })
        .min()
        .unwrap()
}

/// All distinct shifts of a subset.
pub fn orbit(g: &TannerGraph, vars: &[u32]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = (0..g.lift())
        .map(|s| {
            let mut shifted: Vec<u32> = vars.iter().map(|&v| g.shift_var(v, s)).collect();
            shifted.sort_unstable();
            shifted
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Replaces every orbit representative by all members of its orbit.
pub fn expand_orbits(g: &TannerGraph, records: &[EtsRecord]) -> Vec<EtsRecord> {
    let mut out: Vec<EtsRecord> = records
        .iter()
        .flat_map(|r| orbit(g, &r.vars))
        .map(|vars| classify_subset(g, &vars))
        .collect();
    out.sort_by(|x, y| (x.a, x.b, &x.vars).cmp(&(y.a, y.b, &y.vars)));
    out.dedup_by(|x, y| x.vars == y.vars);
    out
}

struct Searcher<'a> {
    g: &'a TannerGraph,
    nbrs: Vec<Vec<u32>>,
    query: &'a EtsQuery,
    gamma: usize,
    triangle_free: bool,
    expansions: AtomicU64,
    aborted: AtomicBool,
}

/// Mutable state along one branch of the search.
struct Branch {
    members: Vec<u32>,
    /// check degree inside the current subset
    deg: Vec<u8>,
    /// number of checks at degree 1
    b: usize,
    /// variables adjacent to the subset (membership counts)
    near: Vec<u16>,
    found: Vec<Vec<u32>>,
}

impl<'a> Searcher<'a> {
    fn add(&self, br: &mut Branch, v: u32) -> bool {
        let mut elementary = true;
        br.members.push(v);
        for &c in self.g.checks_of(v) {
            let d = &mut br.deg[c as usize];
            *d += 1;
            match *d {
                1 => br.b += 1,
                2 => br.b -= 1,
                _ => {
                    if *d % 2 == 1 {
                        br.b += 1;
                    } else {
                        br.b -= 1;
                    }
                    elementary = false;
                }
            }
        }
        br.near[v as usize] += 1;
        for &w in &self.nbrs[v as usize] {
            br.near[w as usize] += 1;
        }
        elementary
    }

    fn remove(&self, br: &mut Branch, v: u32) {
        br.members.pop();
        for &c in self.g.checks_of(v) {
            let d = &mut br.deg[c as usize];
            if *d % 2 == 1 {
                br.b -= 1;
            } else {
                br.b += 1;
            }
            *d -= 1;
        }
        br.near[v as usize] -= 1;
        for &w in &self.nbrs[v as usize] {
            br.near[w as usize] -= 1;
        }
    }

    /// Whether some size in range can still be reached with `b <= b_max`.
    fn viable(&self, br: &Branch) -> bool {
        let s = br.members.len();
        let q = self.query;
        (q.a_min.max(s)..=q.a_max).any(|a| {
            let r = a - s;
            let lb = if q.elementary_only {
                b_lower_bound(br.b, r, self.gamma, max_edges_among(r, self.triangle_free))
            } else {
                br.b as isize - (self.gamma * r) as isize
            };
            lb <= q.b_max as isize
        })
    }

    fn tick(&self) -> bool {
        let n = self.expansions.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.query.expansion_budget {
            self.aborted.store(true, Ordering::Relaxed);
        }
        !self.aborted.load(Ordering::Relaxed)
    }

    fn record_if_match(&self, br: &mut Branch, elementary: bool) {
        let s = br.members.len();
        let q = self.query;
        if s >= q.a_min && s <= q.a_max && br.b <= q.b_max && (elementary || !q.elementary_only) {
            let mut set = br.members.clone();
            set.sort_unstable();
            if canonical_shift(self.g, &set) == set {
                br.found.push(set);
            }
        }
    }

    /// ESU extension step: `ext` holds candidate ids greater than the root,
    /// none of them members.
    fn extend(&self, br: &mut Branch, mut ext: Vec<u32>, root: u32) {
        if !self.tick() || br.members.len() == self.query.a_max {
            return;
        }
        while let Some(w) = ext.pop() {
            // exclusive neighbours of w: not members, not adjacent to the current set
            let fresh: Vec<u32> = self.nbrs[w as usize]
                .iter()
                .copied()
                .filter(|&u| u > root && br.near[u as usize] == 0)
                .collect();
            let elementary = self.add(br, w);
            if elementary || !self.query.elementary_only {
                self.record_if_match(br, elementary);
                if self.viable(br) {
                    let mut next = ext.clone();
                    next.extend(fresh);
                    self.extend(br, next, root);
                }
            }
            self.remove(br, w);
            if self.aborted.load(Ordering::Relaxed) {
                return;
            }
        }
    }

    fn new_branch(&self) -> Branch {
        Branch {
            members: Vec::with_capacity(self.query.a_max),
            deg: vec![0; self.g.num_checks()],
            b: 0,
            near: vec![0; self.g.num_vars()],
            found: Vec::new(),
        }
    }
}

/// Exhaustive elementary trapping set search.
///
/// Returns one record per quasi-cyclic orbit of connected subsets with
/// `a_min <= a <= a_max` and `b <= b_max`. When the expansion budget runs
/// out the status is [`EtsStatus::Inconclusive`] and the record list is partial.
pub fn find_ets(g: &TannerGraph, query: &EtsQuery) -> EtsSearchResult {
    let gamma = g.row_blocks();
    let triangle_free = bfs_girth(g, 8).is_at_least(8);
    let searcher = Searcher {
        g,
        nbrs: var_neighbors(g),
        query,
        gamma,
        triangle_free,
        expansions: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
    };

    // Root tasks are (root, first extension choice, remaining frontier);
    // splitting one level down keeps all workers busy even with few roots.
    let mut tasks: Vec<(u32, u32, Vec<u32>)> = Vec::new();
    let mut single: Vec<Vec<u32>> = Vec::new();
    if query.a_max >= 1 {
        for block in 0..g.col_blocks() {
            let root = VariableNodeId { block, offset: 0 }.flat(g.lift());
            let mut ext: Vec<u32> = searcher.nbrs[root as usize].iter().copied().filter(|&u| u > root).collect();
            // a single variable has b = gamma
            if query.a_min <= 1 && gamma <= query.b_max && canonical_shift(g, &[root]) == [root] {
                single.push(vec![root]);
            }
            if query.a_max >= 2 {
                while let Some(w) = ext.pop() {
                    tasks.push((root, w, ext.clone()));
                }
            }
        }
    }

    let found: Vec<Vec<u32>> = tasks
        .par_iter()
        .flat_map_iter(|(root, w, rest)| {
            let mut br = searcher.new_branch();
            let mut out = Vec::new();
            if !searcher.tick() {
                return out.into_iter();
            }
            searcher.add(&mut br, *root);
            let near_root = br.near.clone();
            let fresh: Vec<u32> = searcher.nbrs[*w as usize]
                .iter()
                .copied()
                .filter(|&u| u > *root && near_root[u as usize] == 0)
                .collect();
            let elementary = searcher.add(&mut br, *w);
            if elementary || !query.elementary_only {
                searcher.record_if_match(&mut br, elementary);
                if searcher.viable(&br) {
                    let mut next = rest.clone();
                    next.extend(fresh);
                    searcher.extend(&mut br, next, *root);
                }
            }
            out.append(&mut br.found);
            out.into_iter()
        })
        .collect();

    let mut sets: Vec<Vec<u32>> = single.into_iter().chain(found).collect();
    sets.sort();
    sets.dedup();
    let mut records: Vec<EtsRecord> = sets.iter().map(|s| classify_subset(g, s)).collect();
    records.sort_by(|x, y| (x.a, x.b, &x.vars).cmp(&(y.a, y.b, &y.vars)));

    let mut anomalies = Vec::new();
    for r in &records {
        if !r.row_coloring_is_proper() {
            anomalies.push(format!("row coloring of {:?} is not proper", r.vars));
        }
        if query.girth_context >= 8 && r.elementary {
            if let Some(vn) = &r.vn_graph {
                if vn.has_triangle() {
                    anomalies.push(format!("VN graph of {:?} has a triangle", r.vars));
                }
                if (r.a, r.b) == (7, 4) && !vn.is_bipartite() {
                    anomalies.push(format!("(7,4) VN graph of {:?} is not bipartite", r.vars));
                }
                if (r.a, r.b) == (7, 4) && !are_isomorphic(vn, &VnGraph::complete_bipartite(3, 4).unwrap()) {
                    anomalies.push(format!("(7,4) VN graph of {:?} is not K3,4", r.vars));
                }
            }
        }
    }

    let aborted = searcher.aborted.load(Ordering::Relaxed);
    let status = if aborted {
        EtsStatus::Inconclusive
    } else if records.is_empty() {
        EtsStatus::Free
    } else {
        EtsStatus::Found
    };
    EtsSearchResult {
        status,
        records,
        expansions: searcher.expansions.load(Ordering::Relaxed),
        anomalies,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("C({vars}, {a}) = {count} subsets exceeds the oracle limit")]
    TooLarge { vars: usize, a: usize, count: u128 },
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Ground truth: classifies every `a`-subset of variables, keeping the
/// elementary ones with `b <= b_max`. No pruning, no symmetry, no
/// connectivity requirement.
pub fn brute_force_ets_oracle(g: &TannerGraph, a: usize, b_max: usize) -> Result<Vec<EtsRecord>, OracleError> {
    let nv = g.num_vars();
    if a == 0 || a > nv {
        return Ok(Vec::new());
    }
    let count = binomial(nv, a);
    if count > ORACLE_SUBSET_LIMIT {
        return Err(OracleError::TooLarge { vars: nv, a, count });
    }

    // depth-first over sorted combinations with running check degrees
    #[allow(clippy::too_many_arguments)]
    fn rec(
        g: &TannerGraph,
        a: usize,
        b_max: usize,
        start: u32,
        chosen: &mut Vec<u32>,
        deg: &mut [u8],
        odd: &mut usize,
        over: &mut usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        if chosen.len() == a {
            if *over == 0 && *odd <= b_max {
                out.push(chosen.clone());
            }
            return;
        }
        let nv = g.num_vars() as u32;
        let need = (a - chosen.len()) as u32;
        for v in start..=nv - need {
            for &c in g.checks_of(v) {
                let d = &mut deg[c as usize];
                *d += 1;
                if *d % 2 == 1 {
                    *odd += 1;
                } else {
                    *odd -= 1;
                }
                if *d == 3 {
                    *over += 1;
                }
            }
            chosen.push(v);
            rec(g, a, b_max, v + 1, chosen, deg, odd, over, out);
            chosen.pop();
            for &c in g.checks_of(v) {
                let d = &mut deg[c as usize];
                if *d == 3 {
                    *over -= 1;
                }
                if *d % 2 == 1 {
                    *odd -= 1;
                } else {
                    *odd += 1;
                }
                *d -= 1;
            }
        }
    }

    let firsts: Vec<u32> = (0..=(nv - a) as u32).collect();
    let mut sets: Vec<Vec<u32>> = firsts
        .par_iter()
        .flat_map_iter(|&first| {
            let mut deg = vec![0u8; g.num_checks()];
            let mut odd = 0usize;
            let mut over = 0usize;
            for &c in g.checks_of(first) {
                deg[c as usize] = 1;
                odd += 1;
            }
            let mut chosen = vec![first];
            let mut out = Vec::new();
            rec(g, a, b_max, first + 1, &mut chosen, &mut deg, &mut odd, &mut over, &mut out);
            out.into_iter()
        })
        .collect();
    sets.sort();
    let mut records: Vec<EtsRecord> = sets.iter().map(|s| classify_subset(g, s)).collect();
    records.sort_by(|x, y| (x.a, x.b, &x.vars).cmp(&(y.a, y.b, &y.vars)));
    Ok(records)
}
