//! Structural predicates: hollow cycles, facial triangles, internal
//! connectivity and thickness.

use super::{Canvas, PlaneError};

/// Whether no vertex lies strictly inside the disk bounded by `cycle` (the
/// side of the cycle away from the outer face).
pub fn cycle_is_hollow(c: &Canvas, cycle: &[usize]) -> Result<bool, PlaneError> {
    check_cycle(c, cycle)?;
    Ok(interior_vertices(c, cycle).is_empty())
}

fn check_cycle(c: &Canvas, cycle: &[usize]) -> Result<(), PlaneError> {
    let k = cycle.len();
    if k < 3 {
        return Err(PlaneError::Input("a cycle needs at least three vertices".into()));
    }
    let n = c.vertex_count();
    let mut seen = vec![false; n];
    for i in 0..k {
        let (a, b) = (cycle[i], cycle[(i + 1) % k]);
        if a >= n {
            return Err(PlaneError::VertexOutOfRange(a));
        }
        if seen[a] {
            return Err(PlaneError::Input(format!("vertex {a} repeated in cycle")));
        }
        seen[a] = true;
        if !c.has_edge(a, b) {
            return Err(PlaneError::Input(format!("{a}-{b} is not an edge")));
        }
    }
    if k == c.outer_len() && cycle.iter().all(|&v| c.is_external(v)) {
        return Err(PlaneError::Input("the outer cycle has no inner disk".into()));
    }
    Ok(())
}

/// Vertices strictly inside the disk of a cycle of `c`, in increasing order.
///
/// The cycle's complement splits the remaining vertices into the inside and
/// the outside; the outside is the part reachable from the outer face.
pub(crate) fn interior_vertices(c: &Canvas, cycle: &[usize]) -> Vec<usize> {
    let n = c.vertex_count();
    let g = c.graph();
    let k = cycle.len();
    let mut on_cycle = vec![false; n];
    for &v in cycle {
        on_cycle[v] = true;
    }
    // seed the outside: an outer vertex off the cycle, or the neighbors of
    // cycle vertices lying on the outer side
    let mut outside = vec![false; n];
    let mut stack = Vec::new();
    for &v in c.outer() {
        if !on_cycle[v] {
            outside[v] = true;
            stack.push(v);
        }
    }
    if stack.is_empty() {
        // every outer vertex lies on the cycle; the outer side of the cycle
        // is the set of rotation arcs containing the outer face corner
        for i in 0..k {
            let (prev, v, next) = (cycle[(i + k - 1) % k], cycle[i], cycle[(i + 1) % k]);
            for (from, to) in [(next, prev), (prev, next)] {
                if !arc_has_outer_corner(c, v, from, to) {
                    continue;
                }
                for side in arc(g.neighbors(v), from, to) {
                    if !on_cycle[side] && !outside[side] {
                        outside[side] = true;
                        stack.push(side);
                    }
                }
            }
        }
    }
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            if !on_cycle[u] && !outside[u] {
                outside[u] = true;
                stack.push(u);
            }
        }
    }
    (0..n).filter(|&v| !on_cycle[v] && !outside[v]).collect()
}

/// Neighbors strictly between `from` and `to` going counterclockwise.
fn arc(r: &[usize], from: usize, to: usize) -> Vec<usize> {
    let d = r.len();
    let p = r.iter().position(|&x| x == from).unwrap();
    let mut out = Vec::new();
    for s in 1..d {
        let y = r[(p + s) % d];
        if y == to {
            break;
        }
        out.push(y);
    }
    out
}

/// Whether the outer face occupies a corner at `v` inside the
/// counterclockwise wedge from `from` to `to`.
fn arc_has_outer_corner(c: &Canvas, v: usize, from: usize, to: usize) -> bool {
    let outer = c.outer();
    let k = outer.len();
    let Some(i) = outer.iter().position(|&x| x == v) else {
        return false;
    };
    // outer corner at v lies between its outer successor and predecessor:
    // the walk enters through pred(v) and leaves to succ(v), so the corner
    // is the wedge counterclockwise from succ to pred
    let osucc = outer[(i + 1) % k];
    let r = c.neighbors(v);
    let d = r.len();
    let p = r.iter().position(|&x| x == from).unwrap();
    for s in 0..d {
        let y = r[(p + s) % d];
        if y == osucc {
            return true;
        }
        if y == to {
            return false;
        }
    }
    false
}

/// Triangles (as sorted triples) that do not bound a face.
pub fn nonfacial_triangles(c: &Canvas) -> Vec<[usize; 3]> {
    let g = c.graph();
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut facial = std::collections::HashSet::new();
    for f in g.trace_faces() {
        if f.len() == 3 {
            let mut t = [f[0], f[1], f[2]];
            t.sort_unstable();
            facial.insert(t);
        }
    }
    let mut out = Vec::new();
    for u in 0..n {
        for &v in g.neighbors(u) {
            if v <= u {
                continue;
            }
            for w in adj.common(u, v) {
                if w > v && !facial.contains(&[u, v, w]) {
                    out.push([u, v, w]);
                }
            }
        }
    }
    out
}

/// Whether every 3-cycle bounds a face.
pub fn all_triangles_facial(c: &Canvas) -> bool {
    nonfacial_triangles(c).is_empty()
}

/// Whether every cycle of length less than `k`, other than the outer one,
/// is hollow. Only `k` in {4, 5} is supported.
pub fn internally_k_connected(c: &Canvas, k: usize) -> Result<bool, PlaneError> {
    if !(4..=5).contains(&k) {
        return Err(PlaneError::Input(format!("k = {k} is not supported")));
    }
    let is_outer = |cyc: &[usize]| cyc.len() == c.outer_len() && cyc.iter().all(|&v| c.is_external(v));
    for t in nonfacial_triangles(c) {
        if !is_outer(&t) && !interior_vertices(c, &t).is_empty() {
            return Ok(false);
        }
    }
    if k == 5 {
        for q in four_cycles(c) {
            if !is_outer(&q) && !interior_vertices(c, &q).is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All 4-cycles `a b c d` of the graph, each listed once.
pub(crate) fn four_cycles(c: &Canvas) -> Vec<[usize; 4]> {
    let g = c.graph();
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut out = Vec::new();
    // a is the smallest vertex, b < d are its cycle neighbors
    for a in 0..n {
        for &b in g.neighbors(a) {
            if b <= a {
                continue;
            }
            for &d in g.neighbors(a) {
                if d <= b {
                    continue;
                }
                for x in adj.common(b, d) {
                    if x > a && x != b && x != d && x != a {
                        out.push([a, b, x, d]);
                    }
                }
            }
        }
    }
    out
}

/// Outer face of length at least five, or every external vertex of degree
/// at least four.
pub fn is_thick(c: &Canvas) -> bool {
    c.outer_len() >= 5 || c.outer().iter().all(|&v| c.degree(v) >= 4)
}
