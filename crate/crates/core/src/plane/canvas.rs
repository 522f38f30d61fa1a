//! Canvases: plane graphs with a distinguished outer face bounded by a cycle.

use std::collections::HashMap;

use super::graph::{AdjMatrix, RotationGraph};
use super::PlaneError;

/// A plane graph whose outer face is bounded by a cycle.
///
/// `outer` is the outer facial walk in tracing order, so `outer[0]` plays the
/// role of `x1` when the outer cycle is labeled `x1 x2 ...`. A strict canvas
/// has all other faces triangular; a raw canvas only guarantees the outer
/// cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canvas {
    graph: RotationGraph,
    outer: Vec<usize>,
    external: Vec<bool>,
    raw: bool,
}

impl Canvas {
    /// A strict canvas: outer cycle of length at least four, all inner faces
    /// triangles.
    pub fn new(graph: RotationGraph, outer: Vec<usize>) -> Result<Self, PlaneError> {
        let c = Self::new_raw(graph, outer)?;
        if c.outer.len() < 4 {
            return Err(PlaneError::OuterFace(format!(
                "outer cycle has length {}",
                c.outer.len()
            )));
        }
        for f in c.inner_faces() {
            if f.len() != 3 {
                return Err(PlaneError::NonTriangularFace(f.len()));
            }
        }
        Ok(Canvas { raw: false, ..c })
    }

    /// A raw canvas: only the outer face is checked to be a cycle (of length
    /// at least three).
    pub fn new_raw(graph: RotationGraph, outer: Vec<usize>) -> Result<Self, PlaneError> {
        let n = graph.vertex_count();
        if outer.len() < 3 {
            return Err(PlaneError::OuterFace("outer walk shorter than 3".into()));
        }
        let mut external = vec![false; n];
        for &v in &outer {
            if v >= n {
                return Err(PlaneError::VertexOutOfRange(v));
            }
            if external[v] {
                return Err(PlaneError::OuterFace(format!("vertex {v} repeated")));
            }
            external[v] = true;
        }
        let k = outer.len();
        for i in 0..k {
            let (a, b) = (outer[i], outer[(i + 1) % k]);
            if !graph.has_edge(a, b) {
                return Err(PlaneError::OuterFace(format!("{a}-{b} is not an edge")));
            }
            let c = outer[(i + 2) % k];
            if graph.next_dart(a, b) != (b, c) {
                return Err(PlaneError::OuterFace("walk is not a face".into()));
            }
        }
        Ok(Canvas {
            graph,
            outer,
            external,
            raw: true,
        })
    }

    pub(crate) fn from_parts_unchecked(graph: RotationGraph, outer: Vec<usize>) -> Self {
        let mut external = vec![false; graph.vertex_count()];
        for &v in &outer {
            external[v] = true;
        }
        Canvas {
            graph,
            outer,
            external,
            raw: false,
        }
    }

    /// Builds a canvas from an unoriented list of faces. `inner` lists the
    /// inner faces as vertex cycles in either direction, `outer` the outer
    /// cycle starting at the vertex that becomes `outer()[0]`. The result is
    /// strict when every inner face is a triangle.
    pub fn from_face_list(
        n: usize,
        inner: &[Vec<usize>],
        outer: &[usize],
    ) -> Result<Self, PlaneError> {
        let mut faces: Vec<Vec<usize>> = inner.to_vec();
        faces.push(outer.to_vec());
        let soup = FaceSoup {
            n,
            outer: faces.len() - 1,
            faces,
        };
        let mut c = soup.into_canvas()?;
        // keep the requested starting vertex
        let start = outer[0];
        let pos = c.outer.iter().position(|&v| v == start).unwrap_or(0);
        c.outer.rotate_left(pos);
        Ok(c)
    }

    pub fn graph(&self) -> &RotationGraph {
        &self.graph
    }

    pub fn outer(&self) -> &[usize] {
        &self.outer
    }

    pub fn outer_len(&self) -> usize {
        self.outer.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.graph.degree(v)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.graph.neighbors(v)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.graph.has_edge(u, v)
    }

    pub fn is_raw(&self) -> bool {
        self.raw
    }

    pub fn is_external(&self, v: usize) -> bool {
        self.external[v]
    }

    pub fn is_internal(&self, v: usize) -> bool {
        !self.external[v]
    }

    pub fn internal_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| !self.external[v]).collect()
    }

    pub fn internal_count(&self) -> usize {
        self.vertex_count() - self.outer.len()
    }

    pub fn adjacency(&self) -> AdjMatrix {
        self.graph.adjacency()
    }

    /// All faces other than the outer one.
    pub fn inner_faces(&self) -> Vec<Vec<usize>> {
        let k = self.outer.len();
        let (a, b) = (self.outer[0], self.outer[1 % k]);
        let mut faces = self.graph.trace_faces();
        faces.retain(|f| !is_walk_with_dart(f, a, b));
        faces
    }

    /// All faces; the outer face comes first, starting at `outer()[0]`.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut faces = vec![self.outer.clone()];
        faces.extend(self.inner_faces());
        faces
    }

    /// Rotates the outer labeling so that `outer()[k]` becomes `outer()[0]`.
    pub fn with_outer_start(&self, k: usize) -> Canvas {
        let mut c = self.clone();
        let len = c.outer.len();
        c.outer.rotate_left(k % len);
        c
    }

    /// Mirror image; the outer walk is reversed accordingly (starting at the
    /// same vertex).
    pub fn mirrored(&self) -> Canvas {
        let graph = self.graph.mirrored();
        let mut outer: Vec<usize> = self.outer.iter().rev().copied().collect();
        outer.rotate_right(1);
        Canvas {
            graph,
            outer,
            external: self.external.clone(),
            raw: self.raw,
        }
    }

    /// Relabels vertices with `perm[old] = new`.
    pub fn relabeled(&self, perm: &[usize]) -> Canvas {
        let graph = self.graph.relabeled(perm);
        let outer: Vec<usize> = self.outer.iter().map(|&v| perm[v]).collect();
        let mut external = vec![false; perm.len()];
        for &v in &outer {
            external[v] = true;
        }
        Canvas {
            graph,
            outer,
            external,
            raw: self.raw,
        }
    }

    /// Drops the raw flag after checking the strict invariants.
    pub fn into_strict(self) -> Result<Canvas, PlaneError> {
        Canvas::new(self.graph, self.outer)
    }

    pub fn to_soup(&self) -> FaceSoup {
        let mut faces = vec![self.outer.clone()];
        faces.extend(self.inner_faces());
        FaceSoup {
            n: self.vertex_count(),
            faces,
            outer: 0,
        }
    }
}

fn is_walk_with_dart(f: &[usize], a: usize, b: usize) -> bool {
    let k = f.len();
    (0..k).any(|i| f[i] == a && f[(i + 1) % k] == b)
}

/// Editable description of a plane graph by its faces.
///
/// Faces are cyclic vertex sequences; `outer` indexes the outer face.
/// Orientation is normalised by [`FaceSoup::orient`], so editing code may
/// add faces in either direction.
#[derive(Clone, Debug)]
pub struct FaceSoup {
    pub n: usize,
    pub faces: Vec<Vec<usize>>,
    pub outer: usize,
}

impl FaceSoup {
    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    /// Makes all faces traverse shared edges in opposite directions.
    pub fn orient(&mut self) -> Result<(), PlaneError> {
        let mut slots: HashMap<(usize, usize), Vec<(usize, bool)>> = HashMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            let k = f.len();
            for i in 0..k {
                let (a, b) = (f[i], f[(i + 1) % k]);
                if a == b {
                    return Err(PlaneError::Input("loop in face list".into()));
                }
                let key = (a.min(b), a.max(b));
                slots.entry(key).or_default().push((fi, a < b));
            }
        }
        for s in slots.values() {
            if s.len() != 2 {
                return Err(PlaneError::Input(format!(
                    "edge lies on {} face sides",
                    s.len()
                )));
            }
        }
        let m = self.faces.len();
        let mut flip: Vec<Option<bool>> = vec![None; m];
        for root in 0..m {
            if flip[root].is_some() {
                continue;
            }
            flip[root] = Some(false);
            let mut stack = vec![root];
            while let Some(fi) = stack.pop() {
                let fl = flip[fi].unwrap();
                let f = &self.faces[fi];
                let k = f.len();
                for i in 0..k {
                    let (a, b) = (f[i], f[(i + 1) % k]);
                    let key = (a.min(b), a.max(b));
                    let my_dir = (a < b) != fl;
                    for &(gi, gdir) in &slots[&key] {
                        if gi == fi && gdir == (a < b) {
                            continue;
                        }
                        let needed = gdir == my_dir;
                        match flip[gi] {
                            None => {
                                flip[gi] = Some(needed);
                                stack.push(gi);
                            }
                            Some(x) if x != needed => {
                                return Err(PlaneError::Input("face list is not orientable".into()))
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
        for (fi, f) in self.faces.iter_mut().enumerate() {
            if flip[fi] == Some(true) {
                f.reverse();
            }
        }
        Ok(())
    }

    /// Replaces `gone` by `keep` everywhere, then removes degenerate faces.
    pub fn identify(&mut self, keep: usize, gone: usize) {
        for f in &mut self.faces {
            for v in f.iter_mut() {
                if *v == gone {
                    *v = keep;
                }
            }
        }
        self.clean();
    }

    /// Collapses repeated consecutive vertices and suppresses faces of length
    /// at most two.
    pub fn clean(&mut self) {
        let outer_face = std::mem::take(&mut self.faces[self.outer]);
        let mut kept = Vec::with_capacity(self.faces.len());
        let mut new_outer = 0;
        let faces = std::mem::take(&mut self.faces);
        for (fi, f) in faces.into_iter().enumerate() {
            let f = if fi == self.outer { outer_face.clone() } else { f };
            let mut g: Vec<usize> = Vec::with_capacity(f.len());
            for &v in &f {
                if g.last() != Some(&v) {
                    g.push(v);
                }
            }
            while g.len() > 1 && g.first() == g.last() {
                g.pop();
            }
            if fi == self.outer {
                new_outer = kept.len();
                kept.push(g);
            } else if g.len() > 2 {
                kept.push(g);
            }
        }
        self.faces = kept;
        self.outer = new_outer;
    }

    /// Removes faces by index and appends new ones.
    pub fn replace_faces(&mut self, remove: &[usize], add: Vec<Vec<usize>>) {
        assert!(!remove.contains(&self.outer), "cannot remove the outer face");
        let faces = std::mem::take(&mut self.faces);
        for (fi, f) in faces.into_iter().enumerate() {
            if fi == self.outer {
                self.outer = self.faces.len();
            }
            if !remove.contains(&fi) {
                self.faces.push(f);
            }
        }
        self.faces.extend(add);
    }

    /// Removes every inner face containing one of `vertices` and appends
    /// `add`.
    pub fn replace_faces_at(&mut self, vertices: &[usize], add: Vec<Vec<usize>>) {
        let remove: Vec<usize> = (0..self.faces.len())
            .filter(|&fi| fi != self.outer && self.faces[fi].iter().any(|v| vertices.contains(v)))
            .collect();
        self.replace_faces(&remove, add);
    }

    /// Indices of the faces strictly inside the disk bounded by `cycle`,
    /// taking the side away from the outer face.
    pub fn disk_faces(&self, cycle: &[usize]) -> Result<Vec<usize>, PlaneError> {
        let k = cycle.len();
        let mut boundary = std::collections::HashSet::new();
        for i in 0..k {
            let (a, b) = (cycle[i], cycle[(i + 1) % k]);
            boundary.insert((a.min(b), a.max(b)));
        }
        let mut slots: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            let m = f.len();
            for i in 0..m {
                let (a, b) = (f[i], f[(i + 1) % m]);
                slots.entry((a.min(b), a.max(b))).or_default().push(fi);
            }
        }
        for e in &boundary {
            if !slots.contains_key(e) {
                return Err(PlaneError::Input(format!("{}-{} is not an edge", e.0, e.1)));
            }
        }
        let mut reached = vec![false; self.faces.len()];
        reached[self.outer] = true;
        let mut stack = vec![self.outer];
        while let Some(fi) = stack.pop() {
            let f = &self.faces[fi];
            let m = f.len();
            for i in 0..m {
                let (a, b) = (f[i], f[(i + 1) % m]);
                let key = (a.min(b), a.max(b));
                if boundary.contains(&key) {
                    continue;
                }
                for &g in &slots[&key] {
                    if !reached[g] {
                        reached[g] = true;
                        stack.push(g);
                    }
                }
            }
        }
        Ok((0..self.faces.len()).filter(|&i| !reached[i]).collect())
    }

    /// Renumbers vertices so that exactly the used ones remain, preserving
    /// their relative order. Returns `map[old] = Some(new)`.
    pub fn compact(&mut self) -> Vec<Option<usize>> {
        let mut used = vec![false; self.n];
        for f in &self.faces {
            for &v in f {
                used[v] = true;
            }
        }
        let mut map = vec![None; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if used[v] {
                map[v] = Some(next);
                next += 1;
            }
        }
        for f in &mut self.faces {
            for v in f.iter_mut() {
                *v = map[*v].unwrap();
            }
        }
        self.n = next;
        map
    }

    /// Orients, rebuilds the rotation system and returns the canvas. Unused
    /// vertex identifiers are removed first (in order).
    pub fn into_canvas(self) -> Result<Canvas, PlaneError> {
        self.into_canvas_mapped().map(|(c, _)| c)
    }

    /// As [`FaceSoup::into_canvas`], also returning `map[old] = Some(new)`.
    pub fn into_canvas_mapped(mut self) -> Result<(Canvas, Vec<Option<usize>>), PlaneError> {
        let map = self.compact();
        self.orient()?;
        let rot = rotations_from_faces(self.n, &self.faces)?;
        let graph = RotationGraph::new(rot)?;
        let outer = self.faces[self.outer].clone();
        let c = Canvas::new_raw(graph, outer)?;
        if c.outer.len() >= 4 && c.inner_faces().iter().all(|f| f.len() == 3) {
            Ok((Canvas { raw: false, ..c }, map))
        } else {
            Ok((c, map))
        }
    }
}

/// Rotations induced by consistently oriented faces.
pub(crate) fn rotations_from_faces(
    n: usize,
    faces: &[Vec<usize>],
) -> Result<Vec<Vec<usize>>, PlaneError> {
    let mut corners: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for f in faces {
        let k = f.len();
        for i in 0..k {
            let prev = f[(i + k - 1) % k];
            let v = f[i];
            let next = f[(i + 1) % k];
            if v >= n {
                return Err(PlaneError::VertexOutOfRange(v));
            }
            corners[v].push((next, prev));
        }
    }
    let mut rot = Vec::with_capacity(n);
    for (v, cs) in corners.iter().enumerate() {
        if cs.is_empty() {
            if n == 1 {
                rot.push(Vec::new());
                continue;
            }
            return Err(PlaneError::Input(format!("vertex {v} lies on no face")));
        }
        let mut r = Vec::with_capacity(cs.len());
        let start = cs[0].0;
        let mut cur = start;
        loop {
            r.push(cur);
            let mut it = cs.iter().filter(|c| c.0 == cur);
            let to = match (it.next(), it.next()) {
                (Some(c), None) => c.1,
                _ => {
                    return Err(PlaneError::Input(format!(
                        "rotation around vertex {v} is not a single cycle"
                    )))
                }
            };
            cur = to;
            if cur == start {
                break;
            }
            if r.len() > cs.len() {
                return Err(PlaneError::Input(format!("rotation around {v} does not close")));
            }
        }
        if r.len() != cs.len() {
            return Err(PlaneError::Input(format!(
                "vertex {v} is pinched (several corner cycles)"
            )));
        }
        rot.push(r);
    }
    Ok(rot)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn diamond() -> Canvas {
        Canvas::from_face_list(4, &[vec![0, 1, 2], vec![0, 2, 3]], &[0, 1, 2, 3]).unwrap()
    }

    #[test]
    fn diamond_from_faces() {
        let d = diamond();
        assert!(!d.is_raw());
        assert_eq!(d.vertex_count(), 4);
        assert_eq!(d.edge_count(), 5);
        assert_eq!(d.outer_len(), 4);
        assert_eq!(d.outer()[0], 0);
        assert_eq!(d.inner_faces().len(), 2);
        assert_eq!(d.graph().trace_faces().len(), 3);
    }

    #[test]
    fn bare_cycle_is_raw() {
        let c = Canvas::from_face_list(4, &[vec![0, 1, 2, 3]], &[0, 1, 2, 3]).unwrap();
        assert!(c.is_raw());
        assert!(c.clone().into_strict().is_err());
    }

    #[test]
    fn mirror_and_relabel_stay_valid() {
        let d = diamond();
        let m = d.mirrored();
        Canvas::new(m.graph().clone(), m.outer().to_vec()).unwrap();
        let r = d.relabeled(&[3, 2, 1, 0]);
        Canvas::new(r.graph().clone(), r.outer().to_vec()).unwrap();
    }

    #[test]
    fn disk_faces_of_diamond_cycle() {
        let s = diamond().to_soup();
        assert_eq!(s.disk_faces(&[0, 1, 2]).unwrap().len(), 1);
    }

    #[test]
    fn identify_suppresses_two_faces() {
        // contract the chord 0-2 of the diamond: result is a path 1-0-3 plus
        // the outer walk, which collapses to a 2-cycle; check via the soup
        let mut s = diamond().to_soup();
        s.identify(0, 2);
        assert!(s.faces.iter().all(|f| f.len() >= 2));
    }
}
