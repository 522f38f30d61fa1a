//! Adding chords inside non-triangular inner faces while keeping every
//! triangle facial.

use super::{all_triangles_facial, Canvas, PlaneError, RotationGraph};

/// Returns a supergraph on the same vertices and with the same outer face in
/// which every inner face is a triangle and every triangle bounds a face.
pub fn triangulate_preserving(c: &Canvas) -> Result<Canvas, PlaneError> {
    if c.outer_len() <= 3 {
        return Err(PlaneError::Input("outer face must have length at least four".into()));
    }
    if !all_triangles_facial(c) {
        return Err(PlaneError::Input("input has a non-facial triangle".into()));
    }
    let outer = c.outer().to_vec();
    let mut rot = c.graph().rotations().to_vec();
    loop {
        let g = RotationGraph::from_rotations_unchecked(rot.clone());
        let cur = Canvas::from_parts_unchecked(g.clone(), outer.clone());
        let Some(walk) = cur.inner_faces().into_iter().find(|f| f.len() > 3) else {
            break;
        };
        let (i, j) = choose_chord(&g, &walk).ok_or_else(|| {
            PlaneError::Input("no admissible chord; input violates the preconditions".into())
        })?;
        insert_in_corner(&mut rot, &walk, i, walk[j]);
        insert_in_corner(&mut rot, &walk, j, walk[i]);
    }
    Canvas::new(RotationGraph::new(rot)?, outer)
}

/// Inserts `x` into the rotation of `walk[i]` inside the face corner at
/// position `i` of the walk.
fn insert_in_corner(rot: &mut [Vec<usize>], walk: &[usize], i: usize, x: usize) {
    let k = walk.len();
    let v = walk[i];
    let prev = walk[(i + k - 1) % k];
    let p = rot[v].iter().position(|&y| y == prev).unwrap();
    rot[v].insert(p, x);
}

/// Positions `(i, j)` in the facial walk whose vertices can be joined inside
/// the face, following the case analysis: a cut vertex on the walk, a chord
/// of the bounding cycle, or a non-consecutive pair without a common
/// neighbor off the walk.
fn choose_chord(g: &RotationGraph, walk: &[usize]) -> Option<(usize, usize)> {
    let k = walk.len();
    let at = |i: usize| walk[i % k];
    let is_cycle = {
        let mut w = walk.to_vec();
        w.sort_unstable();
        w.dedup();
        w.len() == k
    };
    if !is_cycle {
        for i in 0..k {
            let (a, m, b) = (at(i + k - 1), at(i), at(i + 1));
            if a != b && !g.has_edge(a, b) && separates(g, m, a, b) {
                let pair = ((i + k - 1) % k, (i + 1) % k);
                if admissible(g, walk, pair.0, pair.1) {
                    return Some(pair);
                }
            }
        }
    } else {
        for i in 0..k {
            let v = at(i);
            let chorded = (2..k - 1).any(|s| g.has_edge(v, at(i + s)));
            if chorded {
                let pair = ((i + k - 1) % k, (i + 1) % k);
                if admissible(g, walk, pair.0, pair.1) {
                    return Some(pair);
                }
            }
        }
        for i in 0..k {
            for s in 2..k - 1 {
                let j = (i + s) % k;
                let on_walk = |w: &usize| walk.contains(w);
                let common_off = g
                    .neighbors(walk[i])
                    .iter()
                    .any(|w| !on_walk(w) && g.has_edge(*w, walk[j]));
                if !common_off && admissible(g, walk, i, j) {
                    return Some((i, j));
                }
            }
        }
    }
    // every face admits some chord when the preconditions hold; the exhaustive
    // scan covers walks the cases above do not name explicitly
    for i in 0..k {
        for s in 2..k - 1 {
            let j = (i + s) % k;
            if admissible(g, walk, i, j) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Joining positions `i` and `j` of the walk inside the face keeps every
/// triangle facial.
fn admissible(g: &RotationGraph, walk: &[usize], i: usize, j: usize) -> bool {
    let k = walk.len();
    let (u, v) = (walk[i], walk[j]);
    if u == v || g.has_edge(u, v) {
        return false;
    }
    for &w in g.neighbors(u) {
        if !g.has_edge(w, v) {
            continue;
        }
        let fits = ((i + 2) % k == j && walk[(i + 1) % k] == w)
            || ((j + 2) % k == i && walk[(j + 1) % k] == w);
        if !fits {
            return false;
        }
    }
    true
}

/// Whether removing `m` disconnects `a` from `b`.
fn separates(g: &RotationGraph, m: usize, a: usize, b: usize) -> bool {
    let mut seen = vec![false; g.vertex_count()];
    seen[m] = true;
    seen[a] = true;
    let mut stack = vec![a];
    while let Some(x) = stack.pop() {
        if x == b {
            return false;
        }
        for &y in g.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    true
}
