//! Curve systems in the annulus between the two rings and the partitions of
//! ring vertices into the regions they leave.
//!
//! Ring positions `0..a` are the vertices of the outer ring and `a..a+b`
//! those of the inner ring, both listed counterclockwise. Edge `e < a` joins
//! positions `e` and `e+1 (mod a)`; edge `a + j` joins inner positions `j`
//! and `j+1 (mod b)`. Curve endpoints sit on the midpoints of marked edges.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

/// An equivalence on ring positions, stored as a restricted growth string:
/// the class of position `i` is a small integer, and classes are numbered
/// in order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u8>);

impl Partition {
    /// Canonical partition grouping positions with equal labels.
    pub fn from_labels<T: Eq + Hash + Copy>(labels: &[T]) -> Self {
        let mut seen: HashMap<T, u8> = HashMap::new();
        let out = labels
            .iter()
            .map(|l| {
                let next = seen.len() as u8;
                *seen.entry(*l).or_insert(next)
            })
            .collect();
        Partition(out)
    }

    pub fn labels(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn same(&self, i: usize, j: usize) -> bool {
        self.0[i] == self.0[j]
    }

    pub fn class_count(&self) -> usize {
        self.0.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    /// Whether every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut image: HashMap<u8, u8> = HashMap::new();
        self.0
            .iter()
            .zip(&other.0)
            .all(|(&s, &o)| *image.entry(s).or_insert(o) == o)
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (i, &l) in self.0.iter().enumerate() {
            out[l as usize].push(i);
        }
        out
    }
}

/// Endpoints of the two ring edges with index `e`.
pub fn ring_edge(a: usize, b: usize, e: usize) -> (usize, usize) {
    if e < a {
        (e, (e + 1) % a)
    } else {
        let j = e - a;
        (a + j, a + (j + 1) % b)
    }
}

/// Marks the ring edges whose ends lie in different classes of `beta`.
pub fn marked_edges(a: usize, b: usize, beta: &Partition) -> Vec<bool> {
    (0..a + b)
        .map(|e| {
            let (u, v) = ring_edge(a, b, e);
            !beta.same(u, v)
        })
        .collect()
}

#[derive(Clone, Copy)]
struct Circle {
    outer: bool,
    /// First ring position.
    start: usize,
    len: usize,
}

impl Circle {
    /// Local indices of marked edges in cyclic order.
    fn points(&self, marked: &[bool], edge_offset: usize) -> Vec<usize> {
        (0..self.len).filter(|&e| marked[edge_offset + e]).collect()
    }

    /// Ring positions on arc `s`, which runs from point `s` to point `s+1`.
    fn arc(&self, pts: &[usize], s: usize) -> Vec<usize> {
        let m = pts.len();
        let (from, to) = (pts[s], pts[(s + 1) % m]);
        let mut out = Vec::new();
        let mut v = (from + 1) % self.len;
        loop {
            out.push(self.start + v);
            if v == to {
                break;
            }
            v = (v + 1) % self.len;
        }
        out
    }
}

/// A circle together with the ids its points have in the map.
struct Placed<'a> {
    circle: Circle,
    pts: &'a [usize],
    first: usize,
}

/// Traces the faces of the map formed by the placed circles and the chords
/// (pairs of point ids). Returns, for each circle, the face on the annulus
/// side of each of its arcs, or `None` if the chords cannot be drawn without
/// crossing.
fn arc_faces(circles: &[Placed], chords: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    let v_count: usize = circles.iter().map(|c| c.pts.len()).sum();
    // darts: per circle, arc s forward then backward; then chords
    let mut tail = Vec::new();
    let mut head = Vec::new();
    let mut arc_dart = Vec::new();
    for c in circles {
        let m = c.pts.len();
        let mut ids = Vec::with_capacity(m);
        for s in 0..m {
            let (u, w) = (c.first + s, c.first + (s + 1) % m);
            ids.push(tail.len());
            tail.extend([u, w]);
            head.extend([w, u]);
        }
        arc_dart.push(ids);
    }
    let mut chord_dart = vec![usize::MAX; v_count];
    for &(p, q) in chords {
        chord_dart[p] = tail.len();
        chord_dart[q] = tail.len() + 1;
        tail.extend([p, q]);
        head.extend([q, p]);
    }
    let d_count = tail.len();
    let rev = |d: usize| d ^ 1;

    // counterclockwise rotation at every point
    let mut rot = vec![[0usize; 3]; v_count];
    for (ci, c) in circles.iter().enumerate() {
        let m = c.pts.len();
        for s in 0..m {
            let next = arc_dart[ci][s];
            let prev = rev(arc_dart[ci][(s + m - 1) % m]);
            let chord = chord_dart[c.first + s];
            rot[c.first + s] = if c.circle.outer {
                [next, chord, prev]
            } else {
                [next, prev, chord]
            };
        }
    }
    let next_in_face = |d: usize| {
        let v = head[d];
        let r = rev(d);
        let k = rot[v].iter().position(|&x| x == r).expect("dart in rotation");
        rot[v][(k + 2) % 3]
    };

    let mut face = vec![usize::MAX; d_count];
    let mut faces = 0;
    for d in 0..d_count {
        if face[d] != usize::MAX {
            continue;
        }
        let mut e = d;
        while face[e] == usize::MAX {
            face[e] = faces;
            e = next_in_face(e);
        }
        faces += 1;
    }

    // components, for the Euler check
    let mut parent: Vec<usize> = (0..v_count).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    for d in (0..d_count).step_by(2) {
        let (x, y) = (find(&mut parent, tail[d]), find(&mut parent, head[d]));
        parent[x] = y;
    }
    let components = (0..v_count).filter(|&x| find(&mut parent, x) == x).count();
    let edges = d_count / 2;
    if v_count + faces != edges + 1 + components {
        return None;
    }

    Some(
        circles
            .iter()
            .enumerate()
            .map(|(ci, c)| {
                (0..c.pts.len())
                    .map(|s| {
                        let d = arc_dart[ci][s];
                        // forward darts keep the interior of the circle on
                        // their left
                        face[if c.circle.outer { d } else { rev(d) }]
                    })
                    .collect()
            })
            .collect(),
    )
}

/// All perfect matchings of `items`.
fn matchings(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    if items.len() % 2 == 1 {
        return Vec::new();
    }
    let first = items[0];
    let mut out = Vec::new();
    for k in 1..items.len() {
        let rest: Vec<usize> = items[1..]
            .iter()
            .enumerate()
            .filter(|&(i, _)| i + 1 != k)
            .map(|(_, &x)| x)
            .collect();
        for mut m in matchings(&rest) {
            m.push((first, items[k]));
            out.push(m);
        }
    }
    out
}

/// Regions of one circle alone with chords on the annulus side: each region
/// is a set of ring positions.
fn single_circle_regions(circle: Circle, pts: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if pts.is_empty() {
        return vec![vec![(circle.start..circle.start + circle.len).collect()]];
    }
    let ids: Vec<usize> = (0..pts.len()).collect();
    let placed = [Placed {
        circle,
        pts,
        first: 0,
    }];
    let mut out = Vec::new();
    for m in matchings(&ids) {
        let Some(faces) = arc_faces(&placed, &m) else { continue };
        let mut by_face: Vec<(usize, Vec<usize>)> = Vec::new();
        for (s, &f) in faces[0].iter().enumerate() {
            let arc = circle.arc(pts, s);
            match by_face.iter_mut().find(|(g, _)| *g == f) {
                Some((_, v)) => v.extend(arc),
                None => by_face.push((f, arc)),
            }
        }
        out.push(by_face.into_iter().map(|(_, v)| v).collect());
    }
    out
}

/// Every partition of the ring positions into regions left by a realizer
/// whose endpoints are the midpoints of the marked edges: a non-crossing
/// perfect matching drawn in the annulus, plus at most one closed curve
/// separating the rings.
pub fn region_partitions(a: usize, b: usize, marked: &[bool]) -> Vec<Partition> {
    assert_eq!(marked.len(), a + b, "one mark per ring edge");
    let q = Circle {
        outer: true,
        start: 0,
        len: a,
    };
    let k = Circle {
        outer: false,
        start: a,
        len: b,
    };
    let qp = q.points(marked, 0);
    let kp = k.points(marked, a);
    let mut out = BTreeSet::new();
    if qp.len() % 2 == 1 || kp.len() % 2 == 1 {
        return Vec::new();
    }
    let n = a + b;

    // no curve joins the rings
    for q_regions in single_circle_regions(q, &qp) {
        for k_regions in single_circle_regions(k, &kp) {
            for (i, qr) in q_regions.iter().enumerate() {
                for (j, kr) in k_regions.iter().enumerate() {
                    for core in [false, true] {
                        let mut label = vec![0usize; n];
                        let mut next = 0;
                        for (x, r) in q_regions.iter().enumerate() {
                            if x != i {
                                r.iter().for_each(|&v| label[v] = next);
                                next += 1;
                            }
                        }
                        for (y, r) in k_regions.iter().enumerate() {
                            if y != j {
                                r.iter().for_each(|&v| label[v] = next);
                                next += 1;
                            }
                        }
                        qr.iter().for_each(|&v| label[v] = next);
                        if core {
                            next += 1;
                        }
                        kr.iter().for_each(|&v| label[v] = next);
                        out.insert(Partition::from_labels(&label));
                    }
                }
            }
        }
    }

    // some curve joins the rings
    if !qp.is_empty() && !kp.is_empty() {
        let ids: Vec<usize> = (0..qp.len() + kp.len()).collect();
        let placed = [
            Placed {
                circle: q,
                pts: &qp,
                first: 0,
            },
            Placed {
                circle: k,
                pts: &kp,
                first: qp.len(),
            },
        ];
        for m in matchings(&ids) {
            if !m.iter().any(|&(x, y)| (x < qp.len()) != (y < qp.len())) {
                continue;
            }
            let Some(faces) = arc_faces(&placed, &m) else { continue };
            let mut label = vec![0usize; n];
            for (ci, p) in placed.iter().enumerate() {
                for (s, &f) in faces[ci].iter().enumerate() {
                    for v in p.circle.arc(p.pts, s) {
                        label[v] = f;
                    }
                }
            }
            out.insert(Partition::from_labels(&label));
        }
    }
    out.into_iter().collect()
}

/// Condition (iv) with (ii): `kappa` refines `beta` and is the region
/// partition of some realizer on the edges `beta` marks.
pub fn realizer_exists(a: usize, b: usize, beta: &Partition, kappa: &Partition) -> bool {
    if beta.len() != a + b || kappa.len() != a + b || !kappa.refines(beta) {
        return false;
    }
    let marked = marked_edges(a, b, beta);
    region_partitions(a, b, &marked).contains(kappa)
}

/// Memoized [`region_partitions`] for fixed ring lengths.
#[derive(Default)]
pub struct RegionCache {
    a: usize,
    b: usize,
    table: HashMap<Vec<bool>, Vec<Partition>>,
}

impl RegionCache {
    pub fn new(a: usize, b: usize) -> Self {
        RegionCache {
            a,
            b,
            table: HashMap::new(),
        }
    }

    pub fn get(&mut self, marked: &[bool]) -> &[Partition] {
        let (a, b) = (self.a, self.b);
        self.table
            .entry(marked.to_vec())
            .or_insert_with(|| region_partitions(a, b, marked))
    }
}
