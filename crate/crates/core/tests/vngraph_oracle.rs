//! VN-graph enumeration and constrained coloring against plain brute force.

use etsbench::vngraph::{ForbiddenQuad, ForbiddenTriangle};
use etsbench::{are_isomorphic, enumerate_vn_graphs, ColoringProblem, VnGraph};

/// Every connected graph on `a` vertices with max degree <= gamma and
/// gamma * a - 2|E| = b, up to isomorphism, from all edge subsets.
fn brute_force_vn_graphs(a: usize, b: usize, gamma: usize, triangle_free: bool) -> Vec<VnGraph> {
    let pairs: Vec<(usize, usize)> = (0..a).flat_map(|u| (u + 1..a).map(move |v| (u, v))).collect();
    if gamma * a < b || (gamma * a - b) % 2 == 1 {
        return Vec::new();
    }
    let m = (gamma * a - b) / 2;
    if m > pairs.len() {
        return Vec::new();
    }
    let mut out: Vec<VnGraph> = Vec::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        let g = VnGraph::from_edges(a, &edges).unwrap();
        if !g.is_connected() || g.max_degree() > gamma || (triangle_free && g.has_triangle()) {
            continue;
        }
        if !out.iter().any(|h| are_isomorphic(&g, h)) {
            out.push(g);
        }
    }
    out
}

#[test]
fn enumeration_matches_brute_force() {
    for a in 1..=6 {
        for b in 0..=4 * a {
            for girth in [6, 8] {
                let fast = enumerate_vn_graphs(a, b, 4, girth);
                let slow = brute_force_vn_graphs(a, b, 4, girth == 8);
                assert_eq!(fast.len(), slow.len(), "({a},{b}) girth {girth}");
                for g in &fast {
                    assert!(slow.iter().any(|h| are_isomorphic(g, h)), "({a},{b}) girth {girth}");
                }
            }
        }
    }
    let fast = enumerate_vn_graphs(7, 4, 4, 8);
    let slow = brute_force_vn_graphs(7, 4, 4, true);
    assert_eq!((fast.len(), slow.len()), (1, 1));
    assert!(are_isomorphic(&fast[0], &VnGraph::complete_bipartite(3, 4).unwrap()));
}

/// Counts proper colorings by DFS that only enforces properness, then
/// filters leaves by the forbidden patterns.
fn brute_force_count(g: &VnGraph, k: u8, triangles: &[[u8; 3]], quads: &[(u8, u8)]) -> u64 {
    let edges = g.edges();
    let index = |u: usize, v: usize| edges.iter().position(|&e| e == (u.min(v), u.max(v)));
    let n = g.order();
    let mut tri_edges = Vec::new();
    let mut quad_edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if let (Some(x), Some(y), Some(z)) = (index(a, b), index(b, c), index(a, c)) {
                    tri_edges.push([x, y, z]);
                }
            }
        }
    }
    // 4-cycles a-b-c-d-a with a the smallest vertex and b < d
    for a in 0..n {
        for b in a + 1..n {
            for c in a + 1..n {
                for d in b + 1..n {
                    if c == b || c == d {
                        continue;
                    }
                    if let (Some(w), Some(x), Some(y), Some(z)) = (index(a, b), index(b, c), index(c, d), index(d, a)) {
                        quad_edges.push([w, x, y, z]);
                    }
                }
            }
        }
    }
    let mut colors = vec![0u8; edges.len()];
    fn rec(
        i: usize,
        edges: &[(usize, usize)],
        colors: &mut [u8],
        k: u8,
        leaf: &mut dyn FnMut(&[u8]),
    ) {
        if i == edges.len() {
            leaf(colors);
            return;
        }
        for c in 1..=k {
            let (u, v) = edges[i];
            let clash = (0..i).any(|j| {
                let (x, y) = edges[j];
                colors[j] == c && (x == u || x == v || y == u || y == v)
            });
            if !clash {
                colors[i] = c;
                rec(i + 1, edges, colors, k, leaf);
            }
        }
    }
    let mut count = 0;
    rec(0, &edges, &mut colors, k, &mut |cols| {
        let bad_tri = tri_edges.iter().any(|t| {
            let mut c = [cols[t[0]], cols[t[1]], cols[t[2]]];
            c.sort_unstable();
            triangles.iter().any(|f| {
                let mut f = *f;
                f.sort_unstable();
                f == c
            })
        });
        let bad_quad = quad_edges.iter().any(|q| {
            let c = [cols[q[0]], cols[q[1]], cols[q[2]], cols[q[3]]];
            quads.iter().any(|&(d, r)| {
                (c[0] == d && c[2] == d && (c[1] == r || c[3] == r)) || (c[1] == d && c[3] == d && (c[0] == r || c[2] == r))
            })
        });
        if !bad_tri && !bad_quad {
            count += 1;
        }
    });
    count
}

fn fast_count(g: &VnGraph, k: u8, triangles: &[[u8; 3]], quads: &[(u8, u8)]) -> u64 {
    let mut p = ColoringProblem::new(g, k as usize);
    for t in triangles {
        p = p.forbid_triangle(ForbiddenTriangle::new(*t).unwrap());
    }
    for &(d, r) in quads {
        p = p.forbid_quad(ForbiddenQuad::new(d, r).unwrap());
    }
    p.count()
}

#[test]
fn k34_colorings_match_brute_force() {
    let g = VnGraph::complete_bipartite(3, 4).unwrap();
    assert_eq!(brute_force_count(&g, 4, &[], &[]), 576);
    assert_eq!(fast_count(&g, 4, &[], &[]), 576);
    for (d, r) in [(1, 2), (2, 1), (3, 4)] {
        assert_eq!(brute_force_count(&g, 4, &[], &[(d, r)]), 0);
        assert_eq!(fast_count(&g, 4, &[], &[(d, r)]), 0);
    }
}

#[test]
fn triangle_constrained_counts_match_brute_force() {
    let t123 = [1, 2, 3];
    let t124 = [1, 2, 4];
    let mut graphs = vec![VnGraph::type1(), VnGraph::type2(), VnGraph::octahedron()];
    graphs.extend(enumerate_vn_graphs(6, 2, 4, 6));
    for g in &graphs {
        for tris in [vec![], vec![t123], vec![t123, t124], vec![t124]] {
            assert_eq!(fast_count(g, 4, &tris, &[]), brute_force_count(g, 4, &tris, &[]), "{:?} {tris:?}", g.name());
        }
        assert_eq!(fast_count(g, 4, &[], &[(1, 2)]), brute_force_count(g, 4, &[], &[(1, 2)]));
    }
    let k5 = VnGraph::complete(5).unwrap();
    assert_eq!(brute_force_count(&k5, 4, &[], &[]), 0);
    assert_eq!(fast_count(&k5, 5, &[], &[]), brute_force_count(&k5, 5, &[], &[]));
}
