//! Variable-node graphs of elementary trapping sets.
//!
//! A VN graph has one vertex per variable node of the set and one edge per
//! degree-2 check. With girth at least 6 no two variables share two checks,
//! so the graph is simple. Graphs here have at most [`MAX_VERTICES`] vertices
//! and are stored as adjacency bitmasks.
//!
//! Enumeration is restricted to connected graphs. A disconnected ETS is the
//! union of its components, and `b` adds up over them: with column weight 4
//! and simple VN graphs a lone vertex contributes `b = 4`, an edge `b = 6`,
//! a triangle `b = 6`, a 4-vertex component at least `b = 4`. The `(a, b)`
//! targets handled here (`b <= 4`) would need a `(5, 0)` component or
//! better, which fully connected codes exclude.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const MAX_VERTICES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VnGraphError {
    #[error("VN graphs have at most {MAX_VERTICES} vertices (got {0})")]
    TooManyVertices(usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown built-in graph '{0}' (known: K5, K34, octahedron, type1, type2)")]
    UnknownName(String),
}

/// Small simple undirected graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(into = "RawGraph", try_from = "RawGraph")]
pub struct VnGraph {
    order: usize,
    adj: [u8; MAX_VERTICES],
    name: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    order: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    name: Option<String>,
}

impl From<VnGraph> for RawGraph {
    fn from(g: VnGraph) -> Self {
        RawGraph {
            order: g.order,
            edges: g.edges(),
            name: g.name,
        }
    }
}

impl TryFrom<RawGraph> for VnGraph {
    type Error = VnGraphError;

    fn try_from(raw: RawGraph) -> Result<Self, Self::Error> {
        let mut g = VnGraph::from_edges(raw.order, &raw.edges)?;
        g.name = raw.name;
        Ok(g)
    }
}

impl PartialEq for VnGraph {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.adj == other.adj
    }
}

impl Eq for VnGraph {}

impl VnGraph {
    pub fn empty(order: usize) -> Result<Self, VnGraphError> {
        if order > MAX_VERTICES {
            return Err(VnGraphError::TooManyVertices(order));
        }
        Ok(VnGraph {
            order,
            adj: [0; MAX_VERTICES],
            name: None,
        })
    }

    pub fn from_edges(order: usize, edges: &[(usize, usize)]) -> Result<Self, VnGraphError> {
        let mut g = Self::empty(order)?;
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    fn try_add_edge(&mut self, u: usize, v: usize) -> Result<(), VnGraphError> {
        if u >= self.order || v >= self.order {
            return Err(VnGraphError::VertexOutOfRange(u.max(v)));
        }
        if u == v {
            return Err(VnGraphError::Loop(u));
        }
        if self.has_edge(u, v) {
            return Err(VnGraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn complete(k: usize) -> Result<Self, VnGraphError> {
        let edges: Vec<_> = (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))).collect();
        Self::from_edges(k, &edges)
    }

    /// `K_{p,q}` with parts `0..p` and `p..p+q`.
    pub fn complete_bipartite(p: usize, q: usize) -> Result<Self, VnGraphError> {
        let edges: Vec<_> = (0..p).flat_map(|u| (p..p + q).map(move |v| (u, v))).collect();
        Self::from_edges(p + q, &edges)
    }

    /// The 4-regular graph on six vertices: `K_6` minus a perfect matching.
    pub fn octahedron() -> Self {
        let mut g = Self::complete(6).unwrap();
        for (u, v) in [(0, 1), (2, 3), (4, 5)] {
            g.remove_edge(u, v);
        }
        g.with_name("octahedron")
    }

    /// `K_5` minus two disjoint edges; contains no `K_4`.
    pub fn type1() -> Self {
        let mut g = Self::complete(5).unwrap();
        g.remove_edge(0, 1);
        g.remove_edge(2, 3);
        g.with_name("type1")
    }

    /// `K_5` minus two adjacent edges; contains a `K_4`.
    pub fn type2() -> Self {
        let mut g = Self::complete(5).unwrap();
        g.remove_edge(0, 1);
        g.remove_edge(0, 2);
        g.with_name("type2")
    }

    /// Built-in graphs addressable by tag.
    pub fn named(tag: &str) -> Result<Self, VnGraphError> {
        match tag.to_ascii_lowercase().as_str() {
            "k5" => Ok(Self::complete(5)?.with_name("K5")),
            "k34" | "k3,4" => Ok(Self::complete_bipartite(3, 4)?.with_name("K34")),
            "octahedron" => Ok(Self::octahedron()),
            "type1" => Ok(Self::type1()),
            "type2" => Ok(Self::type2()),
            _ => Err(VnGraphError::UnknownName(tag.to_string())),
        }
    }

    pub fn builtins() -> Vec<VnGraph> {
        ["K5", "K34", "octahedron", "type1", "type2"]
            .iter()
            .map(|t| Self::named(t).unwrap())
            .collect()
    }

    fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    #[inline]
    pub fn neighbors_mask(&self, u: usize) -> u8 {
        self.adj[u]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.order).map(|u| self.degree(u)).collect()
    }

    /// Degrees in non-increasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn num_edges(&self) -> usize {
        self.degrees().iter().sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.order)
            .flat_map(|u| (u + 1..self.order).filter(move |&v| self.has_edge(u, v)).map(move |v| (u, v)))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.order == 0 {
            return true;
        }
        let all: u8 = if self.order == 8 { 0xff } else { (1u8 << self.order) - 1 };
        let mut seen = 1u8;
        loop {
            let mut next = seen;
            for u in 0..self.order {
                if seen >> u & 1 == 1 {
                    next |= self.adj[u];
                }
            }
            if next == seen {
                return seen == all;
            }
            seen = next;
        }
    }

    /// Triangles as sorted vertex triples.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for (u, v) in self.edges() {
            let common = self.adj[u] & self.adj[v];
            for w in v + 1..self.order {
                if common >> w & 1 == 1 {
                    out.push([u, v, w]);
                }
            }
        }
        out
    }

    pub fn has_triangle(&self) -> bool {
        self.edges().iter().any(|&(u, v)| self.adj[u] & self.adj[v] != 0)
    }

    /// 4-cycles as vertex sequences `[a, b, c, d]` (cycle a-b-c-d-a), each
    /// listed once with `a` minimal and `b < d`.
    pub fn four_cycles(&self) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for a in 0..self.order {
            for b in a + 1..self.order {
                if !self.has_edge(a, b) {
                    continue;
                }
                for d in b + 1..self.order {
                    if !self.has_edge(a, d) {
                        continue;
                    }
                    for c in a + 1..self.order {
                        if c != b && c != d && self.has_edge(b, c) && self.has_edge(c, d) {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        out
    }

    /// Two-colorability test (no odd cycle).
    pub fn is_bipartite(&self) -> bool {
        let mut side = [u8::MAX; MAX_VERTICES];
        for start in 0..self.order {
            if side[start] != u8::MAX {
                continue;
            }
            side[start] = 0;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for v in 0..self.order {
                    if self.has_edge(u, v) {
                        if side[v] == u8::MAX {
                            side[v] = 1 - side[u];
                            stack.push(v);
                        } else if side[v] == side[u] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// True when some four vertices are pairwise adjacent.
    pub fn contains_k4(&self) -> bool {
        self.triangles()
            .iter()
            .any(|t| self.adj[t[0]] & self.adj[t[1]] & self.adj[t[2]] != 0)
    }

    /// Induced subgraph on `keep` (in the given order), relabeled `0..keep.len()`.
    pub fn induced(&self, keep: &[usize]) -> VnGraph {
        let mut g = VnGraph::empty(keep.len()).unwrap();
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.adj[i] |= 1 << j;
                    g.adj[j] |= 1 << i;
                }
            }
        }
        g
    }

    /// Relabels vertex `u` as `perm[u]`.
    pub fn permuted(&self, perm: &[usize]) -> VnGraph {
        let mut g = VnGraph::empty(self.order).unwrap();
        for (u, v) in self.edges() {
            g.adj[perm[u]] |= 1 << perm[v];
            g.adj[perm[v]] |= 1 << perm[u];
        }
        g
    }

    /// Canonical code: the lexicographically smallest adjacency encoding over
    /// all relabelings that respect an isomorphism-invariant vertex partition.
    /// Two graphs of the same order share a code iff they are isomorphic.
    pub fn canonical_code(&self) -> u32 {
        let n = self.order;
        if n <= 1 {
            return 0;
        }
        let colors = self.refined_colors();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&u| colors[u]);
        // cell_of_pos[p] = color that position p must take
        let cell_of_pos: Vec<u32> = order.iter().map(|&u| colors[u]).collect();
        let total_bits: u32 = (n * (n - 1) / 2) as u32;
        let bits_after: Vec<u32> = (0..n).map(|p| ((p + 1)..n).map(|q| q as u32).sum()).collect();
        let mut best = u32::MAX;
        let mut perm = vec![0usize; n];
        let mut used = 0u8;
        #[allow(clippy::too_many_arguments)]
        fn rec(
            g: &VnGraph,
            colors: &[u32],
            cell_of_pos: &[u32],
            bits_after: &[u32],
            p: usize,
            prefix: u32,
            perm: &mut [usize],
            used: &mut u8,
            best: &mut u32,
        ) {
            let n = g.order;
            if p == n {
                if prefix < *best {
                    *best = prefix;
                }
                return;
            }
            for u in 0..n {
                if *used >> u & 1 == 1 || colors[u] != cell_of_pos[p] {
                    continue;
                }
                let mut row = 0u32;
                for (q, &w) in perm.iter().enumerate().take(p) {
                    if g.has_edge(u, w) {
                        row |= 1 << (p - 1 - q);
                    }
                }
                let next = (prefix << p) | row;
                if *best != u32::MAX && next > *best >> bits_after[p] {
                    continue;
                }
                perm[p] = u;
                *used |= 1 << u;
                rec(g, colors, cell_of_pos, bits_after, p + 1, next, perm, used, best);
                *used &= !(1 << u);
            }
        }
        rec(self, &colors, &cell_of_pos, &bits_after, 0, 0, &mut perm, &mut used, &mut best);
        debug_assert!(total_bits == 0 || best >> total_bits == 0);
        best
    }

    /// Color refinement starting from degrees; returns a stable invariant color per vertex.
    fn refined_colors(&self) -> Vec<u32> {
        let n = self.order;
        let mut colors: Vec<u32> = (0..n).map(|u| self.degree(u) as u32).collect();
        loop {
            let mut sigs: Vec<(u32, Vec<u32>)> = (0..n)
                .map(|u| {
                    let mut nb: Vec<u32> = (0..n).filter(|&v| self.has_edge(u, v)).map(|v| colors[v]).collect();
                    nb.sort_unstable();
                    (colors[u], nb)
                })
                .collect();
            let mut distinct = sigs.clone();
            distinct.sort();
            distinct.dedup();
            let next: Vec<u32> = sigs
                .drain(..)
                .map(|s| distinct.binary_search(&s).unwrap() as u32)
                .collect();
            let count_old = {
                let mut c = colors.clone();
                c.sort_unstable();
                c.dedup();
                c.len()
            };
            if distinct.len() == count_old {
                return next;
            }
            colors = next;
        }
    }

    /// Name of an isomorphic built-in graph, if any.
    pub fn identify(&self) -> Option<String> {
        VnGraph::builtins()
            .into_iter()
            .find(|b| are_isomorphic(self, b))
            .and_then(|b| b.name)
    }
}

impl fmt::Display for VnGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.order)?;
        for (u, v) in self.edges() {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for VnGraph {
    type Err = VnGraphError;

    /// Exchange format: vertex count on the first line, then one `u v` edge
    /// per line (0-based). `#` starts a comment line.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(VnGraphError::Parse {
            line: 0,
            message: "empty input".into(),
        })?;
        let order: usize = header.parse().map_err(|_| VnGraphError::Parse {
            line: hl,
            message: format!("'{header}' is not a vertex count"),
        })?;
        let mut g = VnGraph::empty(order)?;
        for (lineno, line) in lines {
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse())
                .collect::<Result<_, _>>()
                .map_err(|_| VnGraphError::Parse {
                    line: lineno,
                    message: format!("bad edge '{line}'"),
                })?;
            let [u, v] = nums[..] else {
                return Err(VnGraphError::Parse {
                    line: lineno,
                    message: format!("expected 'u v', found '{line}'"),
                });
            };
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }
}

/// Isomorphism test by backtracking over vertex bijections, after comparing
/// degree sequences.
pub fn are_isomorphic(g: &VnGraph, h: &VnGraph) -> bool {
    if g.order != h.order || g.num_edges() != h.num_edges() || g.degree_sequence() != h.degree_sequence() {
        return false;
    }
    let n = g.order;
    let mut map = vec![usize::MAX; n];
    fn rec(g: &VnGraph, h: &VnGraph, u: usize, map: &mut [usize], used: u8) -> bool {
        let n = g.order;
        if u == n {
            return true;
        }
        for x in 0..n {
            if used >> x & 1 == 1 || g.degree(u) != h.degree(x) {
                continue;
            }
            let consistent = (0..u).all(|w| g.has_edge(u, w) == h.has_edge(x, map[w]));
            if consistent {
                map[u] = x;
                if rec(g, h, u + 1, map, used | 1 << x) {
                    return true;
                }
            }
        }
        false
    }
    rec(g, h, 0, &mut map, 0)
}

/// All pairwise non-isomorphic connected simple graphs on `a` vertices with
/// maximum degree at most `gamma` and `a * gamma - b` total degree; triangle-free
/// when `girth_floor >= 8`. Infeasible parameters give an empty list.
pub fn enumerate_vn_graphs(a: usize, b: usize, gamma: usize, girth_floor: usize) -> Vec<VnGraph> {
    if a == 0 || a > MAX_VERTICES || b > a * gamma || (a * gamma - b) % 2 == 1 {
        return Vec::new();
    }
    let target = (a * gamma - b) / 2;
    if target > a * (a - 1) / 2 {
        return Vec::new();
    }
    let triangle_free = girth_floor >= 8;

    // grow edge sets one edge at a time, keeping one representative per class
    let mut level: HashMap<u32, VnGraph> = HashMap::new();
    let start = VnGraph::empty(a).unwrap();
    level.insert(start.canonical_code(), start);
    for _ in 0..target {
        let mut next: HashMap<u32, VnGraph> = HashMap::new();
        for g in level.values() {
            for u in 0..a {
                if g.degree(u) >= gamma {
                    continue;
                }
                for v in u + 1..a {
                    if g.has_edge(u, v) || g.degree(v) >= gamma {
                        continue;
                    }
                    if triangle_free && g.adj[u] & g.adj[v] != 0 {
                        continue;
                    }
                    let mut h = g.clone();
                    h.adj[u] |= 1 << v;
                    h.adj[v] |= 1 << u;
                    next.entry(h.canonical_code()).or_insert(h);
                }
            }
        }
        level = next;
    }
    let mut out: Vec<(u32, VnGraph)> = level.into_iter().filter(|(_, g)| g.is_connected()).collect();
    out.sort_by_key(|(code, _)| *code);
    out.into_iter()
        .map(|(_, g)| match g.identify() {
            Some(name) => g.with_name(name),
            None => g,
        })
        .collect()
}

/// Size of a maximum matching, by exhaustive branching.
pub fn matching_number(g: &VnGraph) -> usize {
    fn rec(g: &VnGraph, alive: u8) -> usize {
        // first alive vertex with an alive neighbor
        let Some(u) = (0..g.order).find(|&u| alive >> u & 1 == 1 && g.adj[u] & alive != 0) else {
            return 0;
        };
        let rest = alive & !(1 << u);
        let mut best = rec(g, rest);
        let mut nbrs = g.adj[u] & rest;
        while nbrs != 0 {
            let v = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            best = best.max(1 + rec(g, rest & !(1 << v)));
        }
        best
    }
    let all: u8 = if g.order == 8 { 0xff } else { (1u8 << g.order) - 1 };
    rec(g, all)
}

/// Minimum number of colors in a proper edge coloring.
pub fn chromatic_index(g: &VnGraph) -> usize {
    if g.num_edges() == 0 {
        return 0;
    }
    let mut k = g.max_degree();
    loop {
        if ColoringProblem::new(g, k).exists() {
            return k;
        }
        k += 1;
    }
}

/// All `a` vertex-deleted induced subgraphs, in vertex order.
pub fn vertex_deleted_subgraphs(g: &VnGraph) -> Vec<VnGraph> {
    (0..g.order)
        .map(|del| {
            let keep: Vec<usize> = (0..g.order).filter(|&u| u != del).collect();
            g.induced(&keep)
        })
        .collect()
}

/// Triangle color set that may not appear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ForbiddenTriangle {
    colors: [u8; 3],
}

impl ForbiddenTriangle {
    /// Colors must be three distinct labels starting from 1.
    pub fn new(colors: [u8; 3]) -> Option<Self> {
        let mut c = colors;
        c.sort_unstable();
        (c[0] >= 1 && c[0] < c[1] && c[1] < c[2]).then_some(ForbiddenTriangle { colors: c })
    }

    pub fn colors(&self) -> [u8; 3] {
        self.colors
    }

    pub fn matches(&self, c: [u8; 3]) -> bool {
        let mut c = c;
        c.sort_unstable();
        c == self.colors
    }
}

/// 4-cycle coloring that uses `r_double` on two opposite edges and
/// `r_required` on at least one of the other two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ForbiddenQuad {
    pub r_double: u8,
    pub r_required: u8,
}

impl ForbiddenQuad {
    pub fn new(r_double: u8, r_required: u8) -> Option<Self> {
        (r_double >= 1 && r_required >= 1 && r_double != r_required).then_some(ForbiddenQuad { r_double, r_required })
    }

    /// `c` lists the edge colors in cyclic order.
    pub fn matches(&self, c: [u8; 4]) -> bool {
        let (d, r) = (self.r_double, self.r_required);
        (c[0] == d && c[2] == d && (c[1] == r || c[3] == r)) || (c[1] == d && c[3] == d && (c[0] == r || c[2] == r))
    }
}

/// Proper edge coloring, with colors `1..=k` aligned to [`VnGraph::edges`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeColoring {
    pub edges: Vec<(usize, usize)>,
    pub colors: Vec<u8>,
}

impl EdgeColoring {
    pub fn is_proper(&self) -> bool {
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            for (j, &(c, d)) in self.edges.iter().enumerate().skip(i + 1) {
                let adjacent = a == c || a == d || b == c || b == d;
                if adjacent && self.colors[i] == self.colors[j] {
                    return false;
                }
            }
        }
        true
    }
}

/// Edge-coloring search with forbidden triangle and 4-cycle color patterns.
#[derive(Debug, Clone)]
pub struct ColoringProblem<'g> {
    graph: &'g VnGraph,
    colors: usize,
    triangles: Vec<ForbiddenTriangle>,
    quads: Vec<ForbiddenQuad>,
}

struct Prepared {
    edges: Vec<(usize, usize)>,
    /// triangles (edge index triples) completed when the keyed edge is assigned
    tri_at: Vec<Vec<[usize; 3]>>,
    /// 4-cycles (edge indices in cyclic order) completed at the keyed edge
    quad_at: Vec<Vec<[usize; 4]>>,
}

impl<'g> ColoringProblem<'g> {
    pub fn new(graph: &'g VnGraph, colors: usize) -> Self {
        assert!(colors <= 8, "palette too large");
        ColoringProblem {
            graph,
            colors,
            triangles: Vec::new(),
            quads: Vec::new(),
        }
    }

    pub fn forbid_triangle(mut self, t: ForbiddenTriangle) -> Self {
        self.triangles.push(t);
        self
    }

    pub fn forbid_quad(mut self, q: ForbiddenQuad) -> Self {
        self.quads.push(q);
        self
    }

    fn prepare(&self) -> Prepared {
        let g = self.graph;
        let edges = g.edges();
        let idx = |u: usize, v: usize| -> usize {
            let (a, b) = (u.min(v), u.max(v));
            edges.binary_search(&(a, b)).unwrap()
        };
        let mut tri_at = vec![Vec::new(); edges.len()];
        if !self.triangles.is_empty() {
            for [a, b, c] in g.triangles() {
                let t = [idx(a, b), idx(b, c), idx(a, c)];
                tri_at[*t.iter().max().unwrap()].push(t);
            }
        }
        let mut quad_at = vec![Vec::new(); edges.len()];
        if !self.quads.is_empty() {
            for [a, b, c, d] in g.four_cycles() {
                let q = [idx(a, b), idx(b, c), idx(c, d), idx(d, a)];
                quad_at[*q.iter().max().unwrap()].push(q);
            }
        }
        Prepared { edges, tri_at, quad_at }
    }

    /// Depth-first assignment. `visit` is called on every complete coloring
    /// and returns `false` to stop the search.
    fn search<F: FnMut(&[u8]) -> bool>(&self, visit: &mut F) {
        let prep = self.prepare();
        let mut assign = vec![0u8; prep.edges.len()];
        let mut used = [0u16; MAX_VERTICES];
        self.rec(&prep, 0, &mut assign, &mut used, visit);
    }

    fn rec<F: FnMut(&[u8]) -> bool>(
        &self,
        prep: &Prepared,
        e: usize,
        assign: &mut [u8],
        used: &mut [u16; MAX_VERTICES],
        visit: &mut F,
    ) -> bool {
        if e == prep.edges.len() {
            return visit(assign);
        }
        let (u, v) = prep.edges[e];
        for c in 1..=self.colors as u8 {
            let bit = 1u16 << c;
            if (used[u] | used[v]) & bit != 0 {
                continue;
            }
            assign[e] = c;
            let tri_bad = prep.tri_at[e].iter().any(|t| {
                let cs = [assign[t[0]], assign[t[1]], assign[t[2]]];
                self.triangles.iter().any(|f| f.matches(cs))
            });
            let quad_bad = !tri_bad
                && prep.quad_at[e].iter().any(|q| {
                    let cs = [assign[q[0]], assign[q[1]], assign[q[2]], assign[q[3]]];
                    self.quads.iter().any(|f| f.matches(cs))
                });
            if tri_bad || quad_bad {
                continue;
            }
            used[u] |= bit;
            used[v] |= bit;
            let go_on = self.rec(prep, e + 1, assign, used, visit);
            used[u] &= !bit;
            used[v] &= !bit;
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Number of admissible colorings (labelled; no symmetry reduction).
    pub fn count(&self) -> u64 {
        let mut n = 0u64;
        self.search(&mut |_| {
            n += 1;
            true
        });
        n
    }

    pub fn find(&self) -> Option<EdgeColoring> {
        let mut found = None;
        self.search(&mut |a| {
            found = Some(a.to_vec());
            false
        });
        found.map(|colors| EdgeColoring {
            edges: self.graph.edges(),
            colors,
        })
    }

    pub fn exists(&self) -> bool {
        self.find().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k34() -> VnGraph {
        VnGraph::named("K34").unwrap()
    }

    #[test]
    fn builtins_have_expected_shapes() {
        let k5 = VnGraph::named("K5").unwrap();
        assert_eq!((k5.order(), k5.num_edges(), k5.max_degree()), (5, 10, 4));
        assert_eq!(k34().num_edges(), 12);
        assert!(k34().is_bipartite() && !k34().has_triangle());
        assert_eq!(VnGraph::octahedron().degree_sequence(), vec![4; 6]);
        assert_eq!(VnGraph::type1().degree_sequence(), vec![4, 3, 3, 3, 3]);
        assert_eq!(VnGraph::type2().degree_sequence(), vec![4, 4, 3, 3, 2]);
        assert!(!VnGraph::type1().contains_k4());
        assert!(VnGraph::type2().contains_k4());
        assert!(matches!(VnGraph::named("petersen"), Err(VnGraphError::UnknownName(_))));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(VnGraph::empty(9).unwrap_err(), VnGraphError::TooManyVertices(9));
        assert_eq!(VnGraph::from_edges(3, &[(0, 0)]).unwrap_err(), VnGraphError::Loop(0));
        assert_eq!(VnGraph::from_edges(3, &[(0, 1), (1, 0)]).unwrap_err(), VnGraphError::DuplicateEdge(0, 1));
        assert_eq!(VnGraph::from_edges(3, &[(0, 3)]).unwrap_err(), VnGraphError::VertexOutOfRange(3));
    }

    #[test]
    fn exchange_format_round_trip() {
        let g = VnGraph::type2();
        let back: VnGraph = g.to_string().parse().unwrap();
        assert_eq!(back, g);
        assert!("3\n0 1 2\n".parse::<VnGraph>().is_err());
        assert!("x\n".parse::<VnGraph>().is_err());
        let g: VnGraph = "# path\n3\n0 1\n1 2\n".parse().unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn isomorphism_examples() {
        let perm = [6, 2, 0, 5, 1, 3, 4];
        assert!(are_isomorphic(&k34(), &k34().permuted(&perm)));
        assert!(!are_isomorphic(&VnGraph::type1(), &VnGraph::type2()));
        let empty = VnGraph::empty(2).unwrap();
        let edge = VnGraph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(!are_isomorphic(&empty, &edge));
        // same degree sequence, different graphs: C6 vs two triangles
        let c6 = VnGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let tt = VnGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!are_isomorphic(&c6, &tt));
        assert_ne!(c6.canonical_code(), tt.canonical_code());
    }

    #[test]
    fn canonical_code_is_label_invariant() {
        let perms: [[usize; 7]; 3] = [[1, 0, 2, 3, 4, 5, 6], [6, 5, 4, 3, 2, 1, 0], [3, 6, 1, 4, 0, 2, 5]];
        for g in [k34(), VnGraph::complete(7).unwrap()] {
            for p in &perms {
                assert_eq!(g.canonical_code(), g.permuted(p).canonical_code());
            }
        }
        let t1 = VnGraph::type1();
        assert_eq!(t1.canonical_code(), t1.permuted(&[4, 3, 2, 1, 0]).canonical_code());
    }

    #[test]
    fn enumeration_counts() {
        let g54 = enumerate_vn_graphs(5, 4, 4, 6);
        assert_eq!(g54.len(), 2);
        assert!(g54.iter().any(|g| are_isomorphic(g, &VnGraph::type1())));
        assert!(g54.iter().any(|g| are_isomorphic(g, &VnGraph::type2())));
        assert_eq!(enumerate_vn_graphs(6, 2, 4, 6).len(), 3);
        let g74 = enumerate_vn_graphs(7, 4, 4, 8);
        assert_eq!(g74.len(), 1);
        assert!(are_isomorphic(&g74[0], &k34()));
        assert_eq!(g74[0].name(), Some("K34"));
        let g60 = enumerate_vn_graphs(6, 0, 4, 6);
        assert_eq!(g60.len(), 1);
        assert!(are_isomorphic(&g60[0], &VnGraph::octahedron()));
        let g50 = enumerate_vn_graphs(5, 0, 4, 6);
        assert_eq!(g50.len(), 1);
        assert_eq!(g50[0].name(), Some("K5"));
    }

    #[test]
    fn enumeration_infeasible_is_empty() {
        assert!(enumerate_vn_graphs(5, 3, 4, 6).is_empty());
        assert!(enumerate_vn_graphs(3, 0, 4, 6).is_empty());
        assert!(enumerate_vn_graphs(9, 4, 4, 6).is_empty());
        assert!(enumerate_vn_graphs(5, 40, 4, 6).is_empty());
    }

    #[test]
    fn chromatic_indices() {
        assert_eq!(chromatic_index(&VnGraph::named("K5").unwrap()), 5);
        assert_eq!(chromatic_index(&VnGraph::from_edges(2, &[(0, 1)]).unwrap()), 1);
        assert_eq!(chromatic_index(&k34()), 4);
        assert_eq!(chromatic_index(&VnGraph::empty(3).unwrap()), 0);
        assert_eq!(chromatic_index(&VnGraph::complete(4).unwrap()), 3);
    }

    #[test]
    fn matching_numbers() {
        assert_eq!(matching_number(&VnGraph::named("K5").unwrap()), 2);
        assert_eq!(matching_number(&k34()), 3);
        assert_eq!(matching_number(&VnGraph::octahedron()), 3);
        assert_eq!(matching_number(&VnGraph::empty(4).unwrap()), 0);
    }

    #[test]
    fn deleted_subgraphs() {
        let k5 = VnGraph::complete(5).unwrap();
        let subs = vertex_deleted_subgraphs(&k5);
        assert_eq!(subs.len(), 5);
        assert!(subs.iter().all(|s| are_isomorphic(s, &VnGraph::complete(4).unwrap())));
        let single = vertex_deleted_subgraphs(&VnGraph::empty(1).unwrap());
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].order(), 0);
        for s in vertex_deleted_subgraphs(&VnGraph::octahedron()) {
            assert!(are_isomorphic(&s, &VnGraph::type1()));
        }
    }

    #[test]
    fn pattern_constructors() {
        assert!(ForbiddenTriangle::new([1, 1, 2]).is_none());
        assert!(ForbiddenTriangle::new([0, 1, 2]).is_none());
        assert_eq!(ForbiddenTriangle::new([3, 1, 2]).unwrap().colors(), [1, 2, 3]);
        assert!(ForbiddenQuad::new(1, 1).is_none());
        let q = ForbiddenQuad::new(1, 2).unwrap();
        for c in [[1, 2, 1, 2], [1, 2, 1, 3], [1, 2, 1, 4], [2, 1, 3, 1], [4, 1, 2, 1]] {
            assert!(q.matches(c), "{c:?}");
        }
        for c in [[1, 3, 1, 4], [2, 1, 2, 3], [1, 2, 3, 4]] {
            assert!(!q.matches(c), "{c:?}");
        }
    }

    #[test]
    fn pattern_matching_is_rotation_and_reflection_invariant() {
        let q = ForbiddenQuad::new(1, 2).unwrap();
        let t = ForbiddenTriangle::new([1, 2, 3]).unwrap();
        for a in 1..=4u8 {
            for b in 1..=4u8 {
                for c in 1..=4u8 {
                    let tri = [a, b, c];
                    let tri_imgs = [[b, c, a], [c, a, b], [c, b, a], [a, c, b], [b, a, c]];
                    for img in tri_imgs {
                        assert_eq!(t.matches(tri), t.matches(img));
                    }
                    for d in 1..=4u8 {
                        let cyc = [a, b, c, d];
                        let imgs = [[b, c, d, a], [c, d, a, b], [d, a, b, c], [d, c, b, a], [a, d, c, b]];
                        for img in imgs {
                            assert_eq!(q.matches(cyc), q.matches(img));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn found_colorings_are_proper() {
        let col = ColoringProblem::new(&VnGraph::type2(), 4)
            .forbid_triangle(ForbiddenTriangle::new([1, 2, 3]).unwrap())
            .find()
            .unwrap();
        assert!(col.is_proper());
        assert!(col.colors.iter().all(|&c| (1..=4).contains(&c)));
    }
}
