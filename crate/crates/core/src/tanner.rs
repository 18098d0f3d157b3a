//! Circulant lifting of exponent matrices and the resulting Tanner graph.
//!
//! Orientation: variable node `(j, t)` is joined to check node
//! `(i, (t + b[i][j]) mod N)`. Cycle existence does not depend on this choice.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::matrix::ExponentMatrix;

/// Variable node addressed by column block and offset inside the block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VariableNodeId {
    pub block: usize,
    pub offset: u32,
}

/// Check node addressed by row block and offset inside the block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CheckNodeId {
    pub block: usize,
    pub offset: u32,
}

impl VariableNodeId {
    #[inline]
    pub fn flat(self, lift: u32) -> u32 {
        self.block as u32 * lift + self.offset
    }

    #[inline]
    pub fn from_flat(id: u32, lift: u32) -> Self {
        VariableNodeId {
            block: (id / lift) as usize,
            offset: id % lift,
        }
    }
}

impl CheckNodeId {
    #[inline]
    pub fn flat(self, lift: u32) -> u32 {
        self.block as u32 * lift + self.offset
    }

    #[inline]
    pub fn from_flat(id: u32, lift: u32) -> Self {
        CheckNodeId {
            block: (id / lift) as usize,
            offset: id % lift,
        }
    }
}

/// Shortest cycle length, or a lower bound when no cycle shorter than the cap exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Girth {
    Exact(usize),
    AtLeast(usize),
}

impl Girth {
    /// True when the girth is known to be at least `floor`.
    pub fn is_at_least(self, floor: usize) -> bool {
        match self {
            Girth::Exact(g) => g >= floor,
            Girth::AtLeast(cap) => cap >= floor,
        }
    }

    pub fn exact(self) -> Option<usize> {
        match self {
            Girth::Exact(g) => Some(g),
            Girth::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Exact(g) => write!(f, "{g}"),
            Girth::AtLeast(cap) => write!(f, ">= {cap}"),
        }
    }
}

/// Bipartite Tanner graph of a fully connected QC-LDPC code.
///
/// Flat variable ids are `block * N + offset` for `block < n`; flat check ids
/// are `block * N + offset` for `block < m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    rows: usize,
    cols: usize,
    lift: u32,
    /// stride `rows`; entry `i` is the neighbor in check block `i`
    var_checks: Vec<u32>,
    /// stride `cols`; entry `j` is the neighbor in variable block `j`
    check_vars: Vec<u32>,
}

/// Lifts `b` by replacing every entry with an `N x N` circulant permutation.
pub fn lift(b: &ExponentMatrix) -> TannerGraph {
    let (m, n, lift) = (b.rows(), b.cols(), b.lift());
    let nv = n * lift as usize;
    let nc = m * lift as usize;
    let mut var_checks = vec![0u32; nv * m];
    let mut check_vars = vec![0u32; nc * n];
    for j in 0..n {
        for t in 0..lift {
            let v = j as u32 * lift + t;
            for i in 0..m {
                let s = (t + b.get(i, j)) % lift;
                let c = i as u32 * lift + s;
                var_checks[v as usize * m + i] = c;
                check_vars[c as usize * n + j] = v;
            }
        }
    }
    TannerGraph {
        rows: m,
        cols: n,
        lift,
        var_checks,
        check_vars,
    }
}

impl TannerGraph {
    /// Number of check blocks (column weight).
    pub fn row_blocks(&self) -> usize {
        self.rows
    }

    /// Number of variable blocks (row weight).
    pub fn col_blocks(&self) -> usize {
        self.cols
    }

    pub fn lift(&self) -> u32 {
        self.lift
    }

    pub fn num_vars(&self) -> usize {
        self.cols * self.lift as usize
    }

    pub fn num_checks(&self) -> usize {
        self.rows * self.lift as usize
    }

    pub fn num_edges(&self) -> usize {
        self.var_checks.len()
    }

    /// Checks adjacent to a variable, indexed by row block.
    #[inline]
    pub fn checks_of(&self, var: u32) -> &[u32] {
        let m = self.rows;
        &self.var_checks[var as usize * m..(var as usize + 1) * m]
    }

    /// Variables adjacent to a check, indexed by column block.
    #[inline]
    pub fn vars_of(&self, check: u32) -> &[u32] {
        let n = self.cols;
        &self.check_vars[check as usize * n..(check as usize + 1) * n]
    }

    #[inline]
    pub fn check_row_block(&self, check: u32) -> usize {
        (check / self.lift) as usize
    }

    /// Image of a variable under the quasi-cyclic automorphism shifting offsets by `shift`.
    #[inline]
    pub fn shift_var(&self, var: u32, shift: u32) -> u32 {
        let block = var / self.lift;
        block * self.lift + (var % self.lift + shift) % self.lift
    }

    /// All edges as `(variable, check)` flat-id pairs, sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = (0..self.num_vars() as u32)
            .flat_map(|v| self.checks_of(v).iter().map(move |&c| (v, c)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn variable_degrees(&self) -> Vec<usize> {
        vec![self.rows; self.num_vars()]
    }

    pub fn check_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.num_checks()];
        for &c in &self.var_checks {
            deg[c as usize] += 1;
        }
        deg
    }

    /// Serializes the parity-check matrix in MacKay's alist format.
    pub fn to_alist(&self) -> Alist {
        let var_adj = (0..self.num_vars() as u32)
            .map(|v| {
                let mut cs = self.checks_of(v).to_vec();
                cs.sort_unstable();
                cs
            })
            .collect();
        let check_adj = (0..self.num_checks() as u32)
            .map(|c| {
                let mut vs = self.vars_of(c).to_vec();
                vs.sort_unstable();
                vs
            })
            .collect();
        Alist { var_adj, check_adj }
    }
}

/// Length of the shortest cycle, by breadth-first search from every variable
/// node. Returns `AtLeast(cap)` when there is no cycle shorter than `cap`.
pub fn bfs_girth(g: &TannerGraph, cap: usize) -> Girth {
    assert!(cap >= 4, "girth cap must be at least 4");
    let nv = g.num_vars();
    let total = nv + g.num_checks();
    let neighbors = |node: usize| -> &[u32] {
        if node < nv {
            g.checks_of(node as u32)
        } else {
            g.vars_of((node - nv) as u32)
        }
    };
    let to_node = |node: usize, nb: u32| -> usize {
        if node < nv {
            nv + nb as usize
        } else {
            nb as usize
        }
    };

    let mut best = usize::MAX;
    let mut dist = vec![u32::MAX; total];
    let mut parent = vec![usize::MAX; total];
    let mut queue = VecDeque::new();
    let mut touched = Vec::new();
    for root in 0..nv {
        for &t in &touched {
            dist[t] = u32::MAX;
            parent[t] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        dist[root] = 0;
        touched.push(root);
        queue.push_back(root);
        'bfs: while let Some(u) = queue.pop_front() {
            // nothing shorter can be found past half the current best
            if 2 * dist[u] as usize + 1 >= best.min(cap) {
                break;
            }
            for &nb in neighbors(u) {
                let w = to_node(u, nb);
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = (dist[u] + dist[w] + 1) as usize;
                    if len < best {
                        best = len;
                    }
                    if best <= 4 {
                        break 'bfs;
                    }
                }
            }
        }
        if best <= 4 {
            break;
        }
    }
    if best < cap {
        Girth::Exact(best)
    } else {
        Girth::AtLeast(cap)
    }
}

/// Sparse parity-check matrix in MacKay's alist convention (1-based indices
/// in the text form, zero-padded neighbor lists).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alist {
    /// 0-based check neighbors of each variable (column)
    pub var_adj: Vec<Vec<u32>>,
    /// 0-based variable neighbors of each check (row)
    pub check_adj: Vec<Vec<u32>>,
}

impl Alist {
    /// Edge set as sorted `(variable, check)` pairs.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self
            .var_adj
            .iter()
            .enumerate()
            .flat_map(|(v, cs)| cs.iter().map(move |&c| (v as u32, c)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut next_nums = |what: &str| -> Result<(usize, Vec<usize>), ParseError> {
            let (lineno, line) = lines.next().ok_or_else(|| ParseError::Syntax {
                line: 0,
                message: format!("unexpected end of input reading {what}"),
            })?;
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| ParseError::Syntax {
                        line: lineno,
                        message: format!("'{t}' is not a non-negative integer"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok((lineno, nums))
        };
        let expect_len = |lineno: usize, nums: &[usize], n: usize| -> Result<(), ParseError> {
            if nums.len() != n {
                return Err(ParseError::ColumnCount {
                    line: lineno,
                    expected: n,
                    found: nums.len(),
                });
            }
            Ok(())
        };

        let (l, dims) = next_nums("dimensions")?;
        expect_len(l, &dims, 2)?;
        let (nvar, nchk) = (dims[0], dims[1]);
        let (l, maxdeg) = next_nums("max degrees")?;
        expect_len(l, &maxdeg, 2)?;
        let (l, var_deg) = next_nums("variable degrees")?;
        expect_len(l, &var_deg, nvar)?;
        let (l, chk_deg) = next_nums("check degrees")?;
        expect_len(l, &chk_deg, nchk)?;

        let mut read_lists = |count: usize, width: usize, degs: &[usize], bound: usize, what: &str| {
            let mut out = Vec::with_capacity(count);
            for deg in degs.iter().take(count) {
                let (l, nums) = next_nums(what)?;
                let nz: Vec<u32> = nums.iter().filter(|&&x| x != 0).map(|&x| x as u32 - 1).collect();
                if nums.len() != width && nums.len() != *deg {
                    return Err(ParseError::ColumnCount {
                        line: l,
                        expected: width,
                        found: nums.len(),
                    });
                }
                if nz.len() != *deg || nz.iter().any(|&x| x as usize >= bound) {
                    return Err(ParseError::Syntax {
                        line: l,
                        message: format!("{what}: neighbor list inconsistent with degree {deg}"),
                    });
                }
                out.push(nz);
            }
            Ok::<_, ParseError>(out)
        };
        let var_adj = read_lists(nvar, maxdeg[0], &var_deg, nchk, "variable neighbors")?;
        let check_adj = read_lists(nchk, maxdeg[1], &chk_deg, nvar, "check neighbors")?;

        let alist = Alist { var_adj, check_adj };
        let mut from_checks: Vec<(u32, u32)> = alist
            .check_adj
            .iter()
            .enumerate()
            .flat_map(|(c, vs)| vs.iter().map(move |&v| (v, c as u32)))
            .collect();
        from_checks.sort_unstable();
        if from_checks != alist.edges() {
            return Err(ParseError::Syntax {
                line: 0,
                message: "variable and check neighbor lists disagree".into(),
            });
        }
        Ok(alist)
    }
}

impl fmt::Display for Alist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max_v = self.var_adj.iter().map(Vec::len).max().unwrap_or(0);
        let max_c = self.check_adj.iter().map(Vec::len).max().unwrap_or(0);
        writeln!(f, "{} {}", self.var_adj.len(), self.check_adj.len())?;
        writeln!(f, "{max_v} {max_c}")?;
        let degs = |lists: &[Vec<u32>]| lists.iter().map(|l| l.len().to_string()).collect::<Vec<_>>().join(" ");
        writeln!(f, "{}", degs(&self.var_adj))?;
        writeln!(f, "{}", degs(&self.check_adj))?;
        let padded = |list: &[u32], width: usize| {
            let mut out: Vec<String> = list.iter().map(|x| (x + 1).to_string()).collect();
            out.resize(width, "0".into());
            out.join(" ")
        };
        for l in &self.var_adj {
            writeln!(f, "{}", padded(l, max_v))?;
        }
        for l in &self.check_adj {
            writeln!(f, "{}", padded(l, max_c))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(lift: u32, rows: &[&[u32]]) -> ExponentMatrix {
        ExponentMatrix::from_rows(lift, rows).unwrap()
    }

    #[test]
    fn identity_lift_is_a_matching() {
        let g = lift(&m(3, &[&[0]]));
        assert_eq!((g.num_vars(), g.num_checks(), g.num_edges()), (3, 3, 3));
        assert_eq!(g.edges(), vec![(0, 0), (1, 1), (2, 2)]);
        assert_eq!(bfs_girth(&g, 12), Girth::AtLeast(12));
    }

    #[test]
    fn orientation_convention() {
        let g = lift(&m(5, &[&[2, 0]]));
        // variable (0, 4) -> check (0, (4 + 2) mod 5)
        assert_eq!(g.checks_of(4), &[1]);
        assert_eq!(g.vars_of(1), &[4, 6]);
    }

    #[test]
    fn two_by_two_has_girth_eight() {
        // hand walk: v(0,0) c(0,0) v(1,0) c(1,1) v(0,1) c(0,1) v(1,1) c(1,0) back
        let g = lift(&m(2, &[&[0, 0], &[0, 1]]));
        assert_eq!(g.num_edges(), 8);
        assert_eq!(bfs_girth(&g, 12), Girth::Exact(8));
        assert_eq!(bfs_girth(&g, 8), Girth::AtLeast(8));
    }

    #[test]
    fn duplicate_rows_give_four_cycles() {
        let g = lift(&m(7, &[&[0, 3, 5], &[0, 3, 5]]));
        assert_eq!(bfs_girth(&g, 12), Girth::Exact(4));
    }

    #[test]
    fn degrees_are_regular() {
        let g = lift(&m(4, &[&[0, 1, 2], &[3, 2, 1]]));
        assert!(g.variable_degrees().iter().all(|&d| d == 2));
        assert!(g.check_degrees().iter().all(|&d| d == 3));
    }

    #[test]
    fn alist_text_and_reimport() {
        let g = lift(&m(2, &[&[0, 0], &[0, 1]]));
        let text = g.to_alist().to_string();
        assert_eq!(
            text,
            "4 4\n2 2\n2 2 2 2\n2 2 2 2\n1 3\n2 4\n1 4\n2 3\n1 3\n2 4\n1 4\n2 3\n"
        );
        let back = Alist::parse(&text).unwrap();
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn alist_padding_and_errors() {
        let a = Alist {
            var_adj: vec![vec![0, 1], vec![0]],
            check_adj: vec![vec![0, 1], vec![0]],
        };
        let text = a.to_string();
        assert_eq!(text, "2 2\n2 2\n2 1\n2 1\n1 2\n1 0\n1 2\n1 0\n");
        assert_eq!(Alist::parse(&text).unwrap(), a);
        let broken = text.replacen("1 0\n1 2", "1 0\n2 2", 1);
        assert!(Alist::parse(&broken).is_err());
    }

    #[test]
    fn node_id_round_trip() {
        let v = VariableNodeId { block: 3, offset: 7 };
        assert_eq!(VariableNodeId::from_flat(v.flat(13), 13), v);
        let c = CheckNodeId { block: 2, offset: 12 };
        assert_eq!(CheckNodeId::from_flat(c.flat(13), 13), c);
    }
}
