//! Weak 4-candidates: canvases with an outer 4-cycle in which every
//! triangle bounds a face. Reducible configurations (bidiamonds,
//! contractible paths, amoebas), the three expansion moves, and the
//! generation of restrictive weak candidates from the diamond and `W4`.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{forbidding_profile, ColoringError};
use crate::construct::{diamond, w4};
use crate::enumerate::{brute, canvas_from, outer_is_face, split_vertex};
use crate::plane::{
    all_triangles_facial, canonical_code, four_cycles, interior_vertices, nonfacial_triangles,
    Canvas, CanonicalCode, FaceSoup, PlaneError,
};

#[derive(Debug, Error)]
pub enum WeakError {
    #[error("not a weak 4-candidate")]
    NotWeak,
    #[error("site does not match: {0}")]
    Pattern(String),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

fn pattern(msg: &str) -> WeakError {
    WeakError::Pattern(msg.to_string())
}

/// Outer 4-cycle, triangular inner faces, every triangle facial.
pub fn is_weak_candidate(c: &Canvas) -> bool {
    let n = c.vertex_count();
    c.outer_len() == 4 && n >= 4 && c.edge_count() == 3 * n - 7 && all_triangles_facial(c)
}

/// Which restrictive types a canvas forbids. Both bits may be set only when
/// the outer cycle has a chord.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Kind {
    pub rainbow: bool,
    pub diagonal: bool,
}

impl Kind {
    pub fn of(c: &Canvas) -> Result<Kind, WeakError> {
        let p = forbidding_profile(c)?;
        Ok(Kind {
            rainbow: p.forbids_rainbow,
            diagonal: p.forbids_any_diagonal(),
        })
    }

    pub fn is_restrictive(self) -> bool {
        self.rainbow || self.diagonal
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rainbow, self.diagonal) {
            (false, false) => write!(f, "-"),
            (true, false) => write!(f, "r"),
            (false, true) => write!(f, "d"),
            (true, true) => write!(f, "rd"),
        }
    }
}

fn build(soup: FaceSoup) -> Option<Canvas> {
    soup.into_canvas().ok()
}

/// Length of a shortest path from `a` to `b` avoiding `banned`, if at most
/// `limit`.
fn short_path(c: &Canvas, a: usize, b: usize, banned: &[usize], limit: usize) -> bool {
    let n = c.vertex_count();
    let mut dist = vec![usize::MAX; n];
    dist[a] = 0;
    let mut q = VecDeque::from([a]);
    while let Some(x) = q.pop_front() {
        if x == b {
            return true;
        }
        if dist[x] == limit {
            continue;
        }
        for &y in c.neighbors(x) {
            if dist[y] == usize::MAX && !banned.contains(&y) {
                dist[y] = dist[x] + 1;
                q.push_back(y);
            }
        }
    }
    false
}

/// Two adjacent internal vertices `u`, `v` of degree four, their common
/// neighbors `x`, `y`, and their remaining neighbors `u_out`, `v_out`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bidiamond {
    pub u: usize,
    pub v: usize,
    pub x: usize,
    pub y: usize,
    pub u_out: usize,
    pub v_out: usize,
}

fn bidiamond_at(c: &Canvas, u: usize, v: usize) -> Option<Bidiamond> {
    let deg4 = |a: usize| c.is_internal(a) && c.degree(a) == 4;
    if !deg4(u) || !deg4(v) || !c.has_edge(u, v) {
        return None;
    }
    let g = c.graph();
    let x = g.next_dart(u, v).1;
    let y = g.next_dart(v, u).1;
    let other = |a: usize, b: usize| {
        c.neighbors(a).iter().copied().find(|&t| t != b && t != x && t != y)
    };
    Some(Bidiamond {
        u,
        v,
        x,
        y,
        u_out: other(u, v)?,
        v_out: other(v, u)?,
    })
}

pub fn find_bidiamonds(c: &Canvas) -> Vec<Bidiamond> {
    let mut out = Vec::new();
    for u in 0..c.vertex_count() {
        for &v in c.neighbors(u) {
            if u < v {
                out.extend(bidiamond_at(c, u, v));
            }
        }
    }
    out
}

/// One of `x`, `y` is internal and no path of length at most three joins
/// them once `u_out`, `u`, `v`, `v_out` are removed.
pub fn bidiamond_is_contractible(c: &Canvas, b: &Bidiamond) -> bool {
    (c.is_internal(b.x) || c.is_internal(b.y))
        && !short_path(c, b.x, b.y, &[b.u_out, b.u, b.v, b.v_out], 3)
}

fn contract_bidiamond_unchecked(c: &Canvas, b: &Bidiamond) -> Result<Canvas, WeakError> {
    let mut soup = c.to_soup();
    soup.replace_faces_at(&[b.u, b.v], Vec::new());
    // keep the external one of x, y so the outer cycle stays intact
    let (keep, gone) = if c.is_external(b.y) { (b.y, b.x) } else { (b.x, b.y) };
    soup.identify(keep, gone);
    Ok(soup.into_canvas()?)
}

/// Deletes `u` and `v`, identifies `x` with `y` and suppresses 2-faces.
pub fn bidiamond_contract(c: &Canvas, b: &Bidiamond) -> Result<Canvas, WeakError> {
    if bidiamond_at(c, b.u, b.v).as_ref() != Some(b) {
        return Err(pattern("not a bidiamond"));
    }
    if !bidiamond_is_contractible(c, b) {
        return Err(pattern("bidiamond is not contractible"));
    }
    contract_bidiamond_unchecked(c, b)
}

/// A path `u v w` through an internal degree-four vertex `v` whose
/// neighbors in order are `u x w y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PathSite {
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub x: usize,
    pub y: usize,
}

fn path_preconditions(c: &Canvas, p: &PathSite) -> bool {
    let n = c.vertex_count();
    if [p.u, p.v, p.w, p.x, p.y].iter().any(|&a| a >= n) {
        return false;
    }
    if !c.is_internal(p.v) || c.degree(p.v) != 4 {
        return false;
    }
    let r = c.neighbors(p.v);
    let k = r.iter().position(|&a| a == p.u);
    let in_order = k.is_some_and(|k| {
        let nb = [r[(k + 1) % 4], r[(k + 2) % 4], r[(k + 3) % 4]];
        nb == [p.x, p.w, p.y] || nb == [p.y, p.w, p.x]
    });
    if !in_order || !(c.is_internal(p.u) || c.is_internal(p.w)) || c.has_edge(p.u, p.w) {
        return false;
    }
    let common: BTreeSet<usize> = c
        .neighbors(p.u)
        .iter()
        .copied()
        .filter(|&a| c.has_edge(a, p.w))
        .collect();
    common == BTreeSet::from([p.x, p.y, p.v])
}

/// All paths satisfying the structural preconditions of a contraction.
pub fn path_sites(c: &Canvas) -> Vec<PathSite> {
    let mut out = Vec::new();
    for v in c.internal_vertices() {
        if c.degree(v) != 4 {
            continue;
        }
        let r = c.neighbors(v);
        for s in 0..2 {
            let p = PathSite {
                u: r[s],
                x: r[s + 1],
                w: r[s + 2],
                y: r[(s + 3) % 4],
                v,
            };
            if path_preconditions(c, &p) {
                out.push(p);
            }
        }
    }
    out
}

/// The canvas obtained by contracting both edges of the path, with the
/// vertex the path becomes.
pub fn contract_path_only(c: &Canvas, p: &PathSite) -> Result<(Canvas, usize), WeakError> {
    if !path_preconditions(c, p) {
        return Err(pattern("path preconditions fail"));
    }
    let mut soup = c.to_soup();
    let keep = if c.is_external(p.w) { p.w } else { p.u };
    soup.identify(keep, p.v);
    soup.identify(keep, if keep == p.u { p.w } else { p.u });
    let (gp, map) = soup.into_canvas_mapped()?;
    Ok((gp, map[keep].expect("kept vertex")))
}

/// Largest number of vertices inside a non-facial triangle.
fn max_triangle_interior(c: &Canvas) -> usize {
    nonfacial_triangles(c)
        .iter()
        .map(|t| interior_vertices(c, t).len())
        .max()
        .unwrap_or(0)
}

/// Paths that are `m`-contractible.
pub fn find_contractible_paths(c: &Canvas, m: usize) -> Vec<PathSite> {
    path_sites(c)
        .into_iter()
        .filter(|p| {
            contract_path_only(c, p).is_ok_and(|(gp, _)| max_triangle_interior(&gp) <= m)
        })
        .collect()
}

/// Empties the disk of every non-facial triangle.
fn delete_triangle_isolated(mut c: Canvas) -> Result<Canvas, WeakError> {
    while let Some(t) = nonfacial_triangles(&c).into_iter().next() {
        let mut soup = c.to_soup();
        let inside = soup.disk_faces(&t)?;
        soup.replace_faces(&inside, vec![t.to_vec()]);
        c = soup.into_canvas()?;
    }
    Ok(c)
}

/// Contracts the path and deletes all triangle-isolated vertices.
pub fn path_contract(c: &Canvas, p: &PathSite) -> Result<Canvas, WeakError> {
    let (gp, _) = contract_path_only(c, p)?;
    delete_triangle_isolated(gp)
}

/// An amoeba bounded by `q = v1 v2 v3 v4` around the triangle `w y z`,
/// with eye bounded by `x y z v3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Amoeba {
    pub q: [usize; 4],
    pub w: usize,
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl Amoeba {
    pub fn eye(&self) -> [usize; 4] {
        [self.x, self.y, self.z, self.q[2]]
    }
}

fn is_outer_cycle(c: &Canvas, cyc: &[usize]) -> bool {
    cyc.len() == c.outer_len() && cyc.iter().all(|&v| c.is_external(v))
}

fn disk_interior(c: &Canvas, cyc: &[usize]) -> Vec<usize> {
    if is_outer_cycle(c, cyc) {
        c.internal_vertices()
    } else {
        interior_vertices(c, cyc)
    }
}

pub fn find_amoebas(c: &Canvas) -> Vec<Amoeba> {
    let mut out = BTreeSet::new();
    for cyc in four_cycles(c) {
        let inside = disk_interior(c, &cyc);
        if inside.len() < 3 {
            continue;
        }
        let is_in = |a: usize| inside.binary_search(&a).is_ok();
        for s in 0..4 {
            for rev in [false, true] {
                let q: [usize; 4] = std::array::from_fn(|i| {
                    if rev { cyc[(s + 4 - i) % 4] } else { cyc[(s + i) % 4] }
                });
                let [v1, v2, v3, v4] = q;
                for &w in &inside {
                    if !(c.has_edge(w, v1) && c.has_edge(w, v2)) {
                        continue;
                    }
                    for &y in c.neighbors(w) {
                        if !is_in(y) || !c.has_edge(y, v1) {
                            continue;
                        }
                        for &z in c.neighbors(w) {
                            if z == y || !is_in(z) || !c.has_edge(z, y) {
                                continue;
                            }
                            if !c.has_edge(z, v2) || !c.has_edge(z, v3) {
                                continue;
                            }
                            for &x in c.neighbors(y) {
                                if x == z || x == w || x == v3 || !c.has_edge(x, v3) {
                                    continue;
                                }
                                if is_in(x) || x == v4 {
                                    out.insert(Amoeba { q, w, x, y, z });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Whether the eye has an internal vertex.
pub fn is_proper(c: &Canvas, a: &Amoeba) -> bool {
    !interior_vertices(c, &a.eye()).is_empty()
}

/// Deletes everything strictly inside the eye; the eye becomes a 4-face of
/// the returned raw canvas.
pub fn blind_amoeba(c: &Canvas, a: &Amoeba) -> Result<Canvas, WeakError> {
    let eye = a.eye();
    let mut soup = c.to_soup();
    let inside = soup.disk_faces(&eye)?;
    soup.replace_faces(&inside, vec![eye.to_vec()]);
    Ok(soup.into_canvas()?)
}

/// Blinds the amoeba and adds the chord `y v3` across the eye.
pub fn amoeba_reduce(c: &Canvas, a: &Amoeba) -> Result<Canvas, WeakError> {
    fill_eye(c, &a.eye(), 1)
}

/// Empties the disk of `eye` and splits it by the chord at `eye[k]
/// eye[k+2]`.
fn fill_eye(c: &Canvas, eye: &[usize; 4], k: usize) -> Result<Canvas, WeakError> {
    let mut soup = c.to_soup();
    let inside = soup.disk_faces(eye)?;
    let (a, b, cc, d) = (eye[k], eye[(k + 1) % 4], eye[(k + 2) % 4], eye[(k + 3) % 4]);
    soup.replace_faces(&inside, vec![vec![a, b, cc], vec![a, cc, d]]);
    Ok(soup.into_canvas()?)
}

/// Replaces the interior of `eye` by `replacement`, mapping its outer cycle
/// to `eye` rotated by `shift` (and reversed when `flip`).
pub fn replace_eye(
    c: &Canvas,
    eye: &[usize; 4],
    replacement: &Canvas,
    shift: usize,
    flip: bool,
) -> Result<Canvas, WeakError> {
    if replacement.outer_len() != 4 {
        return Err(pattern("replacement needs an outer 4-cycle"));
    }
    let mut soup = c.to_soup();
    let inside = soup.disk_faces(eye)?;
    let mut map = vec![usize::MAX; replacement.vertex_count()];
    for (i, &o) in replacement.outer().iter().enumerate() {
        let j = if flip { (shift + 4 - i) % 4 } else { (shift + i) % 4 };
        map[o] = eye[j];
    }
    for m in map.iter_mut() {
        if *m == usize::MAX {
            *m = soup.add_vertex();
        }
    }
    let add = replacement
        .inner_faces()
        .into_iter()
        .map(|f| f.into_iter().map(|v| map[v]).collect())
        .collect();
    soup.replace_faces(&inside, add);
    Ok(soup.into_canvas()?)
}

/// Replaces the eye of a non-proper amoeba by a weak 4-candidate with an
/// internal vertex.
pub fn amoeba_expand(
    c: &Canvas,
    a: &Amoeba,
    replacement: &Canvas,
    shift: usize,
    flip: bool,
) -> Result<Canvas, WeakError> {
    if is_proper(c, a) {
        return Err(pattern("amoeba is proper"));
    }
    if replacement.internal_count() == 0 || !is_weak_candidate(replacement) {
        return Err(pattern("replacement must be a weak 4-candidate with an internal vertex"));
    }
    replace_eye(c, &a.eye(), replacement, shift, flip)
}

/// How an expansion was produced, in the labels of the expanded canvas, so
/// that the matching reduction can be applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionMove {
    /// The new bidiamond `u v`.
    Bidiamond { u: usize, v: usize },
    /// The new path.
    Path(PathSite),
    /// The new eye and the chord it replaced (`eye[k] eye[k+2]`).
    Amoeba { eye: [usize; 4], chord: usize },
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub canvas: Canvas,
    pub mv: ExpansionMove,
}

impl Expansion {
    /// Applies the inverse reduction.
    pub fn reduce(&self) -> Result<Canvas, WeakError> {
        match &self.mv {
            ExpansionMove::Bidiamond { u, v } => {
                let b = bidiamond_at(&self.canvas, *u, *v).ok_or_else(|| pattern("no bidiamond"))?;
                contract_bidiamond_unchecked(&self.canvas, &b)
            }
            ExpansionMove::Path(p) => path_contract(&self.canvas, p),
            ExpansionMove::Amoeba { eye, chord } => fill_eye(&self.canvas, eye, *chord),
        }
    }
}

/// Splits `p` between its neighbors `a` and `b` (rotation positions) and
/// returns the split canvas with the new vertex, or `None` if the outer
/// face would be broken.
fn split_at(c: &Canvas, p: usize, i: usize, j: usize) -> Option<(Canvas, usize)> {
    let rot = split_vertex(c.graph().rotations(), p, i, j);
    if c.is_external(p) && !outer_is_face(&rot, c.outer()) {
        return None;
    }
    let q = rot.len() - 1;
    Some((canvas_from(rot, c.outer()), q))
}

/// Removes the edge `p q` and fills the 4-face `p a q b` with `fill`
/// applied to the new vertex identifiers.
fn refill(c: &Canvas, p: usize, q: usize, new: usize, fill: impl Fn(&[usize]) -> Vec<Vec<usize>>) -> Option<Canvas> {
    let mut soup = c.to_soup();
    let remove: Vec<usize> = (0..soup.faces.len())
        .filter(|&i| i != soup.outer && soup.faces[i].contains(&p) && soup.faces[i].contains(&q))
        .collect();
    if remove.len() != 2 {
        return None;
    }
    let ids: Vec<usize> = (0..new).map(|_| soup.add_vertex()).collect();
    soup.replace_faces(&remove, fill(&ids));
    build(soup)
}

fn bidiamond_decontractions(f: &Canvas) -> Vec<Expansion> {
    let mut out = Vec::new();
    for p in 0..f.vertex_count() {
        let d = f.degree(p);
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                let Some((s, q)) = split_at(f, p, i, j) else { continue };
                let (a, b) = (f.neighbors(p)[i], f.neighbors(p)[j]);
                let g = refill(&s, p, q, 2, |ids| {
                    let (u, v) = (ids[0], ids[1]);
                    vec![
                        vec![a, p, u],
                        vec![a, u, q],
                        vec![u, p, v],
                        vec![u, v, q],
                        vec![v, p, b],
                        vec![v, b, q],
                    ]
                });
                if let Some(g) = g.filter(is_weak_candidate) {
                    let n = s.vertex_count();
                    out.push(Expansion {
                        canvas: g,
                        mv: ExpansionMove::Bidiamond { u: n, v: n + 1 },
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Edge(usize),
    Face(usize, usize),
}

fn path_decontractions(f: &Canvas) -> Vec<Expansion> {
    let mut out = Vec::new();
    let faces = f.inner_faces();
    for p in 0..f.vertex_count() {
        let mut sides: Vec<Side> = f.neighbors(p).iter().map(|&y| Side::Edge(y)).collect();
        for t in faces.iter().filter(|t| t.contains(&p)) {
            let k = t.iter().position(|&a| a == p).unwrap();
            sides.push(Side::Face(t[(k + 1) % 3], t[(k + 2) % 3]));
        }
        for s1 in 0..sides.len() {
            for s2 in s1 + 1..sides.len() {
                let (x1, x2) = (sides[s1], sides[s2]);
                let touching = |e: Side, t: Side| match (e, t) {
                    (Side::Edge(y), Side::Face(a, b)) => y == a || y == b,
                    _ => false,
                };
                if touching(x1, x2) || touching(x2, x1) {
                    continue;
                }
                out.extend(path_decontract(f, p, x1, x2));
            }
        }
    }
    out
}

fn path_decontract(f: &Canvas, p: usize, x1: Side, x2: Side) -> Vec<Expansion> {
    let mut soup = f.to_soup();
    let mut ys = [0usize; 2];
    for (k, side) in [x1, x2].into_iter().enumerate() {
        ys[k] = match side {
            Side::Edge(y) => y,
            Side::Face(a, b) => {
                let idx = (0..soup.faces.len()).find(|&i| {
                    i != soup.outer
                        && soup.faces[i].len() == 3
                        && [p, a, b].iter().all(|v| soup.faces[i].contains(v))
                });
                let Some(idx) = idx else { return Vec::new() };
                let y = soup.add_vertex();
                soup.replace_faces(&[idx], vec![vec![p, a, y], vec![a, b, y], vec![b, p, y]]);
                y
            }
        };
    }
    let Some(base) = build(soup) else { return Vec::new() };
    let r = base.neighbors(p);
    let (Some(i), Some(j)) = (
        r.iter().position(|&a| a == ys[0]),
        r.iter().position(|&a| a == ys[1]),
    ) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (a, b) in [(i, j), (j, i)] {
        let Some((s, q)) = split_at(&base, p, a, b) else { continue };
        let (y1, y2) = (ys[0], ys[1]);
        let g = refill(&s, p, q, 1, |ids| {
            let v = ids[0];
            vec![vec![p, y1, v], vec![y1, q, v], vec![q, y2, v], vec![y2, p, v]]
        });
        if let Some(g) = g.filter(is_weak_candidate) {
            let v = s.vertex_count();
            let site = PathSite {
                u: p,
                v,
                w: q,
                x: y1,
                y: y2,
            };
            out.push(Expansion {
                canvas: g,
                mv: ExpansionMove::Path(site),
            });
        }
    }
    out
}

/// Index `k` such that the hollow `eye` is split by the edge `eye[k]
/// eye[k+2]` inside it.
fn eye_chord(f: &Canvas, eye: &[usize; 4]) -> Option<usize> {
    let soup = f.to_soup();
    let inside = soup.disk_faces(eye).ok()?;
    if inside.len() != 2 {
        return None;
    }
    let t = &soup.faces[inside[0]];
    (0..2).find(|&k| t.contains(&eye[k]) && t.contains(&eye[k + 2]))
}

fn amoeba_expansions(f: &Canvas, n_max: usize, pool: &[Canvas]) -> Vec<Expansion> {
    let mut out = Vec::new();
    let mut eyes = HashSet::new();
    for a in find_amoebas(f) {
        if is_proper(f, &a) {
            continue;
        }
        let eye = a.eye();
        if !eyes.insert(eye) {
            continue;
        }
        let Some(chord) = eye_chord(f, &eye) else { continue };
        for e in pool {
            if e.internal_count() == 0 || f.vertex_count() + e.internal_count() > n_max {
                continue;
            }
            for shift in 0..4 {
                for flip in [false, true] {
                    if let Ok(g) = replace_eye(f, &eye, e, shift, flip) {
                        if is_weak_candidate(&g) {
                            out.push(Expansion {
                                canvas: g,
                                mv: ExpansionMove::Amoeba { eye, chord },
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// All weak 4-candidates with at most `n_max` vertices obtained from `f` by
/// one expansion. Eyes are replaced by members of `pool`.
pub fn expansions(f: &Canvas, n_max: usize, pool: &[Canvas]) -> Vec<Expansion> {
    let n = f.vertex_count();
    let mut out = Vec::new();
    if n + 3 <= n_max {
        out.extend(bidiamond_decontractions(f));
    }
    if n + 2 <= n_max {
        out.extend(path_decontractions(f));
    }
    out.extend(amoeba_expansions(f, n_max, pool));
    out.retain(|e| e.canvas.vertex_count() <= n_max);
    out
}

/// Whether the canvas has a contractible bidiamond, a 1-contractible path
/// or a proper amoeba.
pub fn has_reducible_configuration(c: &Canvas) -> bool {
    find_bidiamonds(c).iter().any(|b| bidiamond_is_contractible(c, b))
        || !find_contractible_paths(c, 1).is_empty()
        || find_amoebas(c).iter().any(|a| is_proper(c, a))
}

/// A restrictive weak candidate together with its kind.
#[derive(Clone, Debug)]
pub struct WeakMember {
    pub code: CanonicalCode,
    pub canvas: Canvas,
    pub kind: Kind,
}

#[derive(Clone, Debug, Default)]
pub struct WeakGeneration {
    /// Sorted by vertex count, then code.
    pub members: Vec<WeakMember>,
    /// Expansion steps between restrictive canvases whose kinds differ.
    pub kind_changes: Vec<(CanonicalCode, CanonicalCode)>,
}

impl WeakGeneration {
    pub fn codes(&self) -> BTreeSet<CanonicalCode> {
        self.members.iter().map(|m| m.code.clone()).collect()
    }
}

/// Closure of the diamond and `W4` under expansions, keeping restrictive
/// canvases with at most `n_max` vertices.
pub fn generate_restrictive_weak(n_max: usize) -> Result<WeakGeneration, WeakError> {
    let pool: Vec<Canvas> = brute::weak_candidates(n_max)
        .into_iter()
        .filter(|c| c.internal_count() > 0)
        .collect();
    let mut layers: BTreeMap<usize, BTreeMap<CanonicalCode, (Canvas, Kind)>> = BTreeMap::new();
    for seed in [diamond(), w4()] {
        if seed.vertex_count() <= n_max {
            let kind = Kind::of(&seed)?;
            layers
                .entry(seed.vertex_count())
                .or_default()
                .insert(canonical_code(&seed), (seed, kind));
        }
    }
    let mut result = WeakGeneration::default();
    let mut n = 4;
    while n <= n_max {
        let layer = layers.remove(&n).unwrap_or_default();
        for (code, (c, kind)) in &layer {
            for e in expansions(c, n_max, &pool) {
                let k = Kind::of(&e.canvas)?;
                if !k.is_restrictive() {
                    continue;
                }
                let child = canonical_code(&e.canvas);
                if k != *kind {
                    result.kind_changes.push((code.clone(), child.clone()));
                }
                layers
                    .entry(e.canvas.vertex_count())
                    .or_default()
                    .entry(child)
                    .or_insert((e.canvas, k));
            }
        }
        for (code, (canvas, kind)) in layer {
            result.members.push(WeakMember { code, canvas, kind });
        }
        n += 1;
    }
    Ok(result)
}

/// Every restrictive weak 4-candidate with at most `n_max` vertices, from
/// the exhaustive generator.
pub fn brute_force_restrictive_weak(n_max: usize) -> Result<Vec<WeakMember>, WeakError> {
    let mut out = Vec::new();
    for c in brute::weak_candidates(n_max) {
        let kind = Kind::of(&c)?;
        if kind.is_restrictive() {
            out.push(WeakMember {
                code: canonical_code(&c),
                canvas: c,
                kind,
            });
        }
    }
    out.sort_by(|a, b| (a.canvas.vertex_count(), &a.code).cmp(&(b.canvas.vertex_count(), &b.code)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{count_extensions, ColoringType, Precoloring};

    #[test]
    fn seeds_and_kinds() {
        assert!(is_weak_candidate(&diamond()));
        assert!(is_weak_candidate(&w4()));
        assert_eq!(Kind::of(&diamond()).unwrap().to_string(), "d");
        assert_eq!(Kind::of(&w4()).unwrap().to_string(), "r");
        assert!(find_bidiamonds(&w4()).is_empty());
        let small = brute_force_restrictive_weak(5).unwrap();
        assert_eq!(small.len(), 2);
    }

    #[test]
    fn expansions_round_trip() {
        let pool: Vec<Canvas> = brute::weak_candidates(9)
            .into_iter()
            .filter(|c| c.internal_count() > 0)
            .collect();
        for f in [diamond(), w4()] {
            let code = canonical_code(&f);
            let list = expansions(&f, 9, &pool);
            assert!(!list.is_empty());
            let mut kinds = HashSet::new();
            for e in &list {
                assert!(is_weak_candidate(&e.canvas));
                let back = e.reduce().unwrap();
                assert_eq!(canonical_code(&back), code, "{:?}", e.mv);
                kinds.insert(std::mem::discriminant(&e.mv));
            }
            assert!(kinds.len() >= 2);
        }
    }

    #[test]
    fn diamond_bidiamond_decontraction_has_seven_vertices() {
        let list = bidiamond_decontractions(&diamond());
        assert!(list.iter().any(|e| e.canvas.vertex_count() == 7));
    }

    #[test]
    fn w4_path_decontraction_variants() {
        let list = path_decontractions(&w4());
        let sizes: BTreeSet<usize> = list.iter().map(|e| e.canvas.vertex_count()).collect();
        // both sides as edges, or one or two inserted vertices
        assert!(sizes.contains(&7));
        assert!(sizes.contains(&8));
    }

    #[test]
    fn closure_matches_brute_force_small() {
        for n_max in 4..=8 {
            let gen = generate_restrictive_weak(n_max).unwrap();
            let brute: BTreeSet<_> = brute_force_restrictive_weak(n_max)
                .unwrap()
                .into_iter()
                .map(|m| m.code)
                .collect();
            assert_eq!(gen.codes(), brute, "n_max = {n_max}");
            assert!(gen.kind_changes.is_empty());
        }
    }

    #[test]
    fn blinding_keeps_non_extendable_colorings() {
        for c in brute::weak_candidates(10) {
            let kind = Kind::of(&c).unwrap();
            if !kind.is_restrictive() {
                continue;
            }
            for a in find_amoebas(&c) {
                let blind = blind_amoeba(&c, &a).unwrap();
                for t in ColoringType::ALL {
                    let rep = t.representative();
                    let p = Precoloring::on_outer(&c, &rep);
                    let Ok(before) = count_extensions(&c, &p) else { continue };
                    if before == 0 {
                        let pb = Precoloring::on_outer(&blind, &rep);
                        assert_eq!(count_extensions(&blind, &pb).unwrap(), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn reducible_configurations_in_restrictive_weak_candidates() {
        for m in brute_force_restrictive_weak(10).unwrap() {
            if m.canvas.internal_count() > 1 {
                assert!(has_reducible_configuration(&m.canvas));
            }
            for b in find_bidiamonds(&m.canvas) {
                assert!(
                    bidiamond_is_contractible(&m.canvas, &b)
                        || !find_contractible_paths(&m.canvas, 1).is_empty()
                );
            }
        }
    }
}
