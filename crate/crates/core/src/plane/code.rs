//! Canonical codes: the lexicographically least breadth-first code over a
//! set of starting darts in both orientations.

use std::fmt;

use super::{Canvas, RotationGraph};

/// Isomorphism-invariant byte string of a canvas (or a sphere graph).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode {
    bytes: Vec<u8>,
}

impl CanonicalCode {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        CanonicalCode { bytes }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    fn from_entries(n: usize, entries: &[u16]) -> Self {
        let wide = n >= 256;
        let mut bytes = Vec::with_capacity(3 + entries.len() * if wide { 2 } else { 1 });
        bytes.push(if wide { 2 } else { 1 });
        for &x in std::iter::once(&(n as u16)).chain(entries) {
            if wide {
                bytes.extend_from_slice(&x.to_be_bytes());
            } else {
                bytes.push(x as u8);
            }
        }
        CanonicalCode { bytes }
    }
}

impl fmt::Display for CanonicalCode {
    /// Lowercase hexadecimal.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bytes {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode(")?;
        for b in &self.bytes {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

/// Canonical code of a canvas. Equal codes mean isomorphic canvases, where
/// the isomorphism maps outer face to outer face and may reverse the
/// orientation.
pub fn canonical_code(c: &Canvas) -> CanonicalCode {
    let outer = c.outer();
    let k = outer.len();
    let mut starts = Vec::with_capacity(2 * k);
    for i in 0..k {
        let (a, b) = (outer[i], outer[(i + 1) % k]);
        starts.push((a, b, false));
        starts.push((b, a, true));
    }
    let entries = min_code(c.graph(), &starts);
    CanonicalCode::from_entries(c.vertex_count(), &entries)
}

/// The code together with a canvas isomorphic to `c` whose labeling is
/// determined by the code alone, so isomorphic inputs give identical
/// outputs.
pub fn canonical_form(c: &Canvas) -> (CanonicalCode, Canvas) {
    let code = canonical_code(c);
    let n = c.vertex_count();
    let body = &code.as_bytes()[1..];
    let wide = code.as_bytes()[0] == 2;
    let entries: Vec<usize> = if wide {
        body.chunks(2).map(|p| u16::from_be_bytes([p[0], p[1]]) as usize).collect()
    } else {
        body.iter().map(|&b| b as usize).collect()
    };
    let mut rot = vec![Vec::new(); n];
    let mut v = 0;
    for &x in &entries[1..] {
        if x == 0 {
            v += 1;
        } else {
            rot[v].push(x - 1);
        }
    }
    let graph = RotationGraph::from_rotations_unchecked(rot);
    let outer = graph.face_walk(0, 1);
    (code, Canvas::from_parts_unchecked(graph, outer))
}

/// Canonical code of a plane graph on the sphere (no distinguished face),
/// up to orientation-reversing isomorphism.
pub fn sphere_canonical_code(g: &RotationGraph) -> CanonicalCode {
    let n = g.vertex_count();
    let mut best_key = (usize::MAX, usize::MAX);
    let mut starts = Vec::new();
    for u in 0..n {
        for &v in g.neighbors(u) {
            let key = (g.degree(u), g.degree(v));
            if key < best_key {
                best_key = key;
                starts.clear();
            }
            if key == best_key {
                starts.push((u, v, false));
                starts.push((u, v, true));
            }
        }
    }
    let entries = min_code(g, &starts);
    CanonicalCode::from_entries(n, &entries)
}

/// Breadth-first code from `u0 -> v0`. Each vertex, in numbering order,
/// lists the numbers of its neighbors starting from the neighbor through
/// which it was discovered, turning counterclockwise (clockwise when
/// `reversed`), followed by a 0. Returns `None` as soon as the code exceeds
/// `bound`.
fn bfs_code(
    g: &RotationGraph,
    u0: usize,
    v0: usize,
    reversed: bool,
    bound: Option<&[u16]>,
    number: &mut [u16],
    first: &mut [usize],
    order: &mut Vec<usize>,
    out: &mut Vec<u16>,
) -> bool {
    number.iter_mut().for_each(|x| *x = 0);
    order.clear();
    out.clear();
    number[u0] = 1;
    first[u0] = v0;
    order.push(u0);
    let mut next_num: u16 = 2;
    // equal so far to the bound
    let mut tied = bound.is_some();
    let mut head = 0;
    let push = |x: u16, out: &mut Vec<u16>, tied: &mut bool| -> bool {
        if *tied {
            let b = bound.unwrap();
            let i = out.len();
            let bx = b.get(i).copied().unwrap_or(0);
            if x > bx {
                return false;
            }
            if x < bx {
                *tied = false;
            }
        }
        out.push(x);
        true
    };
    while head < order.len() {
        let x = order[head];
        head += 1;
        let r = g.neighbors(x);
        let d = r.len();
        let p = r.iter().position(|&y| y == first[x]).unwrap();
        for step in 0..d {
            let idx = if reversed { (p + d - step) % d } else { (p + step) % d };
            let y = r[idx];
            if number[y] == 0 {
                number[y] = next_num;
                next_num += 1;
                first[y] = x;
                order.push(y);
            }
            if !push(number[y], out, &mut tied) {
                return false;
            }
        }
        if !push(0, out, &mut tied) {
            return false;
        }
    }
    true
}

fn min_code(g: &RotationGraph, starts: &[(usize, usize, bool)]) -> Vec<u16> {
    let n = g.vertex_count();
    let mut number = vec![0u16; n];
    let mut first = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    let mut best: Vec<u16> = Vec::new();
    let mut cur: Vec<u16> = Vec::new();
    for (i, &(u, v, rev)) in starts.iter().enumerate() {
        let bound = if i == 0 { None } else { Some(best.as_slice()) };
        if bfs_code(g, u, v, rev, bound, &mut number, &mut first, &mut order, &mut cur) {
            std::mem::swap(&mut best, &mut cur);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Canvas {
        Canvas::from_face_list(4, &[vec![0, 1, 2], vec![0, 2, 3]], &[0, 1, 2, 3]).unwrap()
    }

    #[test]
    fn diamond_labelings_agree() {
        let d = diamond();
        let code = canonical_code(&d);
        for perm in [[1, 2, 3, 0], [3, 2, 1, 0], [2, 0, 3, 1]] {
            assert_eq!(canonical_code(&d.relabeled(&perm)), code);
        }
        assert_eq!(canonical_code(&d.mirrored()), code);
        assert_eq!(canonical_code(&d.with_outer_start(1)), code);
    }

    #[test]
    fn diamond_differs_from_w4() {
        let w4 = Canvas::from_face_list(
            5,
            &[vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![3, 0, 4]],
            &[0, 1, 2, 3],
        )
        .unwrap();
        assert_ne!(canonical_code(&w4), canonical_code(&diamond()));
    }

    #[test]
    fn chord_position_matters_not() {
        // the two chords of a 4-cycle give isomorphic canvases
        let other = Canvas::from_face_list(4, &[vec![0, 1, 3], vec![1, 2, 3]], &[0, 1, 2, 3]).unwrap();
        assert_eq!(canonical_code(&other), canonical_code(&diamond()));
    }
}
