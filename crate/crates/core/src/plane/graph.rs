//! Rotation systems: a plane graph given by the cyclic (counterclockwise)
//! order of neighbors around every vertex.

use super::PlaneError;

/// Largest supported vertex count; identifiers fit in 16 bits.
pub const MAX_VERTICES: usize = u16::MAX as usize;

/// A connected plane graph stored as a rotation system.
///
/// `rot[v]` lists the neighbors of `v` in counterclockwise order. Faces are
/// traced with the rule that the dart following `u -> v` is `v -> w`, where
/// `w` precedes `u` in the rotation of `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RotationGraph {
    rot: Vec<Vec<usize>>,
}

impl RotationGraph {
    /// Builds a rotation system, checking simplicity, symmetry,
    /// connectivity and the Euler formula.
    pub fn new(rot: Vec<Vec<usize>>) -> Result<Self, PlaneError> {
        let g = RotationGraph { rot };
        g.validate()?;
        Ok(g)
    }

    /// Builds a rotation system without validation. Callers must guarantee
    /// the invariants; used on hot paths whose output is checked elsewhere.
    pub(crate) fn from_rotations_unchecked(rot: Vec<Vec<usize>>) -> Self {
        RotationGraph { rot }
    }

    fn validate(&self) -> Result<(), PlaneError> {
        let n = self.rot.len();
        if n == 0 {
            return Err(PlaneError::Input("graph without vertices".into()));
        }
        if n > MAX_VERTICES {
            return Err(PlaneError::TooLarge(n));
        }
        for (v, r) in self.rot.iter().enumerate() {
            for (i, &u) in r.iter().enumerate() {
                if u >= n {
                    return Err(PlaneError::VertexOutOfRange(u));
                }
                if u == v {
                    return Err(PlaneError::Loop(v));
                }
                if r[..i].contains(&u) {
                    return Err(PlaneError::RepeatedNeighbor(v, u));
                }
                if !self.rot[u].contains(&v) {
                    return Err(PlaneError::Asymmetric(v, u));
                }
            }
        }
        if !self.is_connected() {
            return Err(PlaneError::Input("graph is not connected".into()));
        }
        let e = self.edge_count();
        let f = if e == 0 { 1 } else { self.trace_faces().len() };
        if n as i64 - e as i64 + f as i64 != 2 {
            return Err(PlaneError::Euler { v: n, e, f });
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let n = self.rot.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.rot[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    pub fn vertex_count(&self) -> usize {
        self.rot.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rot.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rot
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rot[u].contains(&v)
    }

    /// Index of `u` in the rotation of `v`.
    pub fn position(&self, v: usize, u: usize) -> Option<usize> {
        self.rot[v].iter().position(|&x| x == u)
    }

    /// The neighbor following `u` counterclockwise around `v`.
    pub fn succ(&self, v: usize, u: usize) -> usize {
        let r = &self.rot[v];
        let p = self.position(v, u).expect("not a neighbor");
        r[(p + 1) % r.len()]
    }

    /// The neighbor preceding `u` counterclockwise around `v`.
    pub fn pred(&self, v: usize, u: usize) -> usize {
        let r = &self.rot[v];
        let p = self.position(v, u).expect("not a neighbor");
        r[(p + r.len() - 1) % r.len()]
    }

    /// The dart following `u -> v` along its face.
    pub fn next_dart(&self, u: usize, v: usize) -> (usize, usize) {
        (v, self.pred(v, u))
    }

    /// The facial walk starting with the dart `u -> v`.
    pub fn face_walk(&self, u: usize, v: usize) -> Vec<usize> {
        let mut walk = vec![u];
        let (mut a, mut b) = self.next_dart(u, v);
        while (a, b) != (u, v) {
            walk.push(a);
            let nd = self.next_dart(a, b);
            a = nd.0;
            b = nd.1;
        }
        walk
    }

    /// All facial walks, in a deterministic order (by first unused dart).
    pub fn trace_faces(&self) -> Vec<Vec<usize>> {
        let darts = DartIndex::new(self);
        let mut used = vec![false; darts.len()];
        let mut faces = Vec::new();
        for d0 in 0..darts.len() {
            if used[d0] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = d0;
            while !used[d] {
                used[d] = true;
                walk.push(darts.tail[d]);
                d = darts.next(self, d);
            }
            faces.push(walk);
        }
        faces
    }

    /// The mirror image: every rotation reversed.
    pub fn mirrored(&self) -> Self {
        RotationGraph {
            rot: self
                .rot
                .iter()
                .map(|r| r.iter().rev().copied().collect())
                .collect(),
        }
    }

    /// Relabels vertices; `perm[old] = new`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let n = self.rot.len();
        let mut rot = vec![Vec::new(); n];
        for v in 0..n {
            rot[perm[v]] = self.rot[v].iter().map(|&u| perm[u]).collect();
        }
        RotationGraph { rot }
    }

    /// Bit-matrix adjacency.
    pub fn adjacency(&self) -> AdjMatrix {
        AdjMatrix::from_graph(self)
    }
}

/// Checks the rotation system and returns its facial walks.
pub fn faces(g: &RotationGraph) -> Result<Vec<Vec<usize>>, PlaneError> {
    g.validate()?;
    Ok(g.trace_faces())
}

/// Dense numbering of darts: dart `offset[v] + i` is `v -> rot[v][i]`.
pub(crate) struct DartIndex {
    pub offset: Vec<usize>,
    pub tail: Vec<usize>,
    pub rev: Vec<usize>,
}

impl DartIndex {
    pub fn new(g: &RotationGraph) -> Self {
        let n = g.vertex_count();
        let mut offset = Vec::with_capacity(n + 1);
        let mut total = 0;
        for v in 0..n {
            offset.push(total);
            total += g.degree(v);
        }
        offset.push(total);
        let mut tail = vec![0; total];
        let mut rev = vec![0; total];
        for v in 0..n {
            for (i, &u) in g.neighbors(v).iter().enumerate() {
                let d = offset[v] + i;
                tail[d] = v;
                let j = g.position(u, v).expect("asymmetric rotation");
                rev[d] = offset[u] + j;
            }
        }
        DartIndex { offset, tail, rev }
    }

    pub fn len(&self) -> usize {
        self.tail.len()
    }

    /// The dart following `d` along its face.
    pub fn next(&self, g: &RotationGraph, d: usize) -> usize {
        let r = self.rev[d];
        let v = self.tail[r];
        let deg = g.degree(v);
        let local = r - self.offset[v];
        self.offset[v] + (local + deg - 1) % deg
    }
}

/// Adjacency as rows of 64-bit words.
#[derive(Clone, Debug)]
pub struct AdjMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl AdjMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        AdjMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn from_graph(g: &RotationGraph) -> Self {
        let mut m = AdjMatrix::new(g.vertex_count());
        for v in 0..g.vertex_count() {
            for &u in g.neighbors(v) {
                m.set(v, u);
            }
        }
        m
    }

    pub fn set(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
    }

    pub fn has(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Common neighbors of `u` and `v`.
    pub fn common(&self, u: usize, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, (a, b)) in self.row(u).iter().zip(self.row(v)).enumerate() {
            let mut x = a & b;
            while x != 0 {
                out.push(w * 64 + x.trailing_zeros() as usize);
                x &= x - 1;
            }
        }
        out
    }

    /// Number of 3-cycles of the graph.
    pub fn triangle_count(&self) -> usize {
        let mut count = 0;
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.has(u, v) {
                    continue;
                }
                for (w, (a, b)) in self.row(u).iter().zip(self.row(v)).enumerate() {
                    let mut x = a & b;
                    let lo = w * 64;
                    if lo + 64 <= v + 1 {
                        continue;
                    }
                    if lo <= v {
                        let shift = v + 1 - lo;
                        x &= if shift >= 64 { 0 } else { !0u64 << shift };
                    }
                    count += x.count_ones() as usize;
                }
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> RotationGraph {
        // planar embedding: triangle 0,1,2 with 3 in the middle
        RotationGraph::new(vec![
            vec![1, 3, 2],
            vec![2, 3, 0],
            vec![0, 3, 1],
            vec![0, 1, 2],
        ])
        .unwrap()
    }

    #[test]
    fn k4_has_four_triangular_faces() {
        let f = faces(&k4()).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|w| w.len() == 3));
    }

    #[test]
    fn triangle_has_two_faces() {
        let g = RotationGraph::new(vec![vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap();
        let f = faces(&g).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|w| w.len() == 3));
    }

    #[test]
    fn asymmetric_rotation_rejected() {
        let r = RotationGraph::new(vec![vec![1], vec![]]);
        assert!(matches!(r, Err(PlaneError::Asymmetric(0, 1))));
    }

    #[test]
    fn nonplanar_rotation_fails_euler() {
        // K4 with one rotation flipped gives a torus embedding
        let r = RotationGraph::new(vec![
            vec![1, 2, 3],
            vec![2, 3, 0],
            vec![0, 3, 1],
            vec![0, 1, 2],
        ]);
        assert!(matches!(r, Err(PlaneError::Euler { .. })));
    }

    #[test]
    fn triangle_count_matches_k4() {
        assert_eq!(k4().adjacency().triangle_count(), 4);
    }

    #[test]
    fn mirror_keeps_face_count() {
        let g = k4();
        assert_eq!(g.mirrored().trace_faces().len(), 4);
    }
}
