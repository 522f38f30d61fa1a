//! The six star contractions, their inverses, and the candidate test.

use std::collections::HashSet;
use std::sync::OnceLock;

use crate::construct::{eight_diamond, ten_diamond};
use crate::plane::{
    canonical_code, is_thick, Canvas, CanonicalCode, FaceSoup, RotationGraph,
};

use super::EnumError;

/// Outer face of length at least four, triangular inner faces, every
/// triangle facial and every internal vertex of degree at least five.
pub fn is_candidate(c: &Canvas) -> bool {
    candidate_check(c.graph(), c.outer().len(), |v| c.is_external(v))
}

fn candidate_check(g: &RotationGraph, l: usize, external: impl Fn(usize) -> bool) -> bool {
    let n = g.vertex_count();
    if l < 4 {
        return false;
    }
    for v in 0..n {
        if !external(v) && g.degree(v) < 5 {
            return false;
        }
    }
    let e = g.edge_count();
    // triangular inner faces
    if 3 * n < 3 + l || e != 3 * n - 3 - l {
        return false;
    }
    // every triangle is one of the e - n + 1 inner faces
    g.adjacency().triangle_count() == e + 1 - n
}

/// Which chord replaces a contracted 8-diamond.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chord {
    X1X3,
    X2Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StarContractionKind {
    C1,
    C2,
    C5,
    C5Ext,
    C8(Chord),
    C10,
}

/// Where a star contraction applies.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    /// Contract `v1 v2` into `v1`; `v2` is internal.
    Edge { v1: usize, v2: usize },
    /// Contract `cycle[0] cycle[1]` and `cycle[2] cycle[3]`.
    Square { cycle: [usize; 4] },
    /// The center of a 5-wheel.
    Center { v: usize },
    /// The center `v` and consecutive neighbors `v1`, `v2`; the second step
    /// contracts toward the other common neighbor of `v1` and `v2`.
    CenterExt { v: usize, v1: usize, v2: usize },
    /// Boundary `x1 x2 x3 z` of an 8-diamond.
    Diamond8 { boundary: [usize; 4] },
    /// Boundary `z y1 y2 y3 x3` of a 10-diamond.
    Diamond10 { boundary: [usize; 5] },
}

/// Result of a star contraction.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub canvas: Canvas,
    /// The result is a candidate.
    pub safe: bool,
    /// Safe, and the result is thick.
    pub strongly_safe: bool,
}

fn pattern(msg: impl Into<String>) -> EnumError {
    EnumError::Pattern(msg.into())
}

fn is_internal5(c: &Canvas, v: usize) -> bool {
    c.is_internal(v) && c.degree(v) == 5
}

/// Other common neighbor of `a` and `b` besides `not`, across the edge `ab`.
fn apex_other(c: &Canvas, a: usize, b: usize, not: usize) -> Option<usize> {
    let g = c.graph();
    let p = g.next_dart(a, b).1;
    let q = g.next_dart(b, a).1;
    [p, q].into_iter().find(|&x| x != not && g.has_edge(x, a) && g.has_edge(x, b))
}

/// Applies a contraction and reports safety.
pub fn apply_star_contraction(
    c: &Canvas,
    kind: StarContractionKind,
    site: &Site,
) -> Result<Contraction, EnumError> {
    check_site(c, kind, site)?;
    let mut soup = c.to_soup();
    match (kind, site) {
        (StarContractionKind::C1, Site::Edge { v1, v2 }) => soup.identify(*v1, *v2),
        (StarContractionKind::C2, Site::Square { cycle }) => {
            soup.identify(cycle[0], cycle[1]);
            soup.identify(cycle[2], cycle[3]);
        }
        (StarContractionKind::C5, Site::Center { v }) => {
            for &u in c.neighbors(*v) {
                soup.identify(*v, u);
            }
        }
        (StarContractionKind::C5Ext, Site::CenterExt { v, v1, v2 }) => {
            let x = apex_other(c, *v1, *v2, *v).ok_or_else(|| pattern("no apex"))?;
            for &u in c.neighbors(*v) {
                soup.identify(*v, u);
            }
            soup.identify(x, *v);
        }
        (StarContractionKind::C8(chord), Site::Diamond8 { boundary }) => {
            let [x1, x2, x3, z] = *boundary;
            let inside = soup.disk_faces(boundary)?;
            let add = match chord {
                Chord::X1X3 => vec![vec![x1, x2, x3], vec![x1, x3, z]],
                Chord::X2Z => vec![vec![x2, x3, z], vec![x2, z, x1]],
            };
            soup.replace_faces(&inside, add);
        }
        (StarContractionKind::C10, Site::Diamond10 { boundary }) => {
            let inside = soup.disk_faces(boundary)?;
            soup.replace_faces(&inside, Vec::new());
            let center = soup.add_vertex();
            let rim: Vec<usize> = (0..5).map(|_| soup.add_vertex()).collect();
            let mut add = Vec::new();
            for i in 0..5 {
                let (k0, k1) = (boundary[i], boundary[(i + 1) % 5]);
                add.push(vec![center, rim[i], rim[(i + 1) % 5]]);
                add.push(vec![k0, k1, rim[i]]);
                add.push(vec![rim[i], rim[(i + 1) % 5], k1]);
            }
            soup.faces.extend(add);
        }
        _ => return Err(pattern("site does not fit the contraction kind")),
    }
    let canvas = soup.into_canvas().map_err(EnumError::Degenerate)?;
    let safe = canvas.outer_len() >= 4 && is_candidate(&canvas);
    let strongly_safe = safe && is_thick(&canvas);
    Ok(Contraction {
        canvas,
        safe,
        strongly_safe,
    })
}

fn check_site(c: &Canvas, kind: StarContractionKind, site: &Site) -> Result<(), EnumError> {
    let n = c.vertex_count();
    let in_range = |v: &usize| *v < n;
    match (kind, site) {
        (StarContractionKind::C1, Site::Edge { v1, v2 }) => {
            if !in_range(v1) || !in_range(v2) || !c.has_edge(*v1, *v2) {
                return Err(pattern("not an edge"));
            }
            if c.is_external(*v2) {
                return Err(pattern("the contracted vertex must be internal"));
            }
        }
        (StarContractionKind::C2, Site::Square { cycle }) => {
            if !cycle.iter().all(in_range) || !cycle.iter().all(|&v| is_internal5(c, v)) {
                return Err(pattern("square vertices must be internal of degree five"));
            }
            for i in 0..4 {
                if !c.has_edge(cycle[i], cycle[(i + 1) % 4]) {
                    return Err(pattern("not a 4-cycle"));
                }
            }
            let diag = if c.has_edge(cycle[0], cycle[2]) {
                (cycle[0], cycle[2], cycle[1], cycle[3])
            } else if c.has_edge(cycle[1], cycle[3]) {
                (cycle[1], cycle[3], cycle[0], cycle[2])
            } else {
                return Err(pattern("square has no diagonal"));
            };
            let g = c.graph();
            let hats = [g.next_dart(diag.0, diag.1).1, g.next_dart(diag.1, diag.0).1];
            if !(hats.contains(&diag.2) && hats.contains(&diag.3)) {
                return Err(pattern("square is not hollow"));
            }
        }
        (StarContractionKind::C5, Site::Center { v }) => check_center(c, *v)?,
        (StarContractionKind::C5Ext, Site::CenterExt { v, v1, v2 }) => {
            check_center(c, *v)?;
            if !c.neighbors(*v).contains(v1) || !c.has_edge(*v1, *v2) || !c.neighbors(*v).contains(v2) {
                return Err(pattern("v1 and v2 must be consecutive neighbors of v"));
            }
            if apex_other(c, *v1, *v2, *v).is_none() {
                return Err(pattern("no apex beyond v1 v2"));
            }
        }
        (StarContractionKind::C8(_), Site::Diamond8 { boundary }) => {
            if !boundary.iter().all(in_range) || !matches_diamond8(c, boundary) {
                return Err(pattern("no 8-diamond with this boundary"));
            }
        }
        (StarContractionKind::C10, Site::Diamond10 { boundary }) => {
            if !boundary.iter().all(in_range) || !matches_diamond10(c, boundary) {
                return Err(pattern("no 10-diamond with this boundary"));
            }
        }
        _ => return Err(pattern("site does not fit the contraction kind")),
    }
    Ok(())
}

fn check_center(c: &Canvas, v: usize) -> Result<(), EnumError> {
    if v >= c.vertex_count() || !is_internal5(c, v) {
        return Err(pattern("center must be internal of degree five"));
    }
    if !c.neighbors(v).iter().all(|&u| is_internal5(c, u)) {
        return Err(pattern("neighbors of the center must be internal of degree five"));
    }
    Ok(())
}

/// The subcanvas inside `cycle` (away from the outer face), relabeled so
/// that `cycle[i]` becomes `i`, together with the interior vertices.
pub(crate) fn disk_subcanvas(c: &Canvas, cycle: &[usize]) -> Option<(Canvas, Vec<usize>)> {
    let soup = c.to_soup();
    let inside = soup.disk_faces(cycle).ok()?;
    let mut faces: Vec<Vec<usize>> = inside.iter().map(|&i| soup.faces[i].clone()).collect();
    let mut interior: Vec<usize> = faces.iter().flatten().copied().filter(|v| !cycle.contains(v)).collect();
    interior.sort_unstable();
    interior.dedup();
    let k = cycle.len();
    let mut map = vec![usize::MAX; c.vertex_count()];
    for (i, &v) in cycle.iter().enumerate() {
        map[v] = i;
    }
    for (i, &v) in interior.iter().enumerate() {
        map[v] = k + i;
    }
    for f in &mut faces {
        for v in f.iter_mut() {
            *v = map[*v];
        }
    }
    let outer: Vec<usize> = (0..k).collect();
    let sub = Canvas::from_face_list(k + interior.len(), &faces, &outer).ok()?;
    Some((sub, interior))
}

fn code_of(c: &Canvas) -> CanonicalCode {
    canonical_code(c)
}

fn eight_code() -> &'static CanonicalCode {
    static CODE: OnceLock<CanonicalCode> = OnceLock::new();
    CODE.get_or_init(|| code_of(&eight_diamond()))
}

fn ten_code() -> &'static CanonicalCode {
    static CODE: OnceLock<CanonicalCode> = OnceLock::new();
    CODE.get_or_init(|| code_of(&ten_diamond()))
}

/// Whether the disk of `boundary = x1 x2 x3 z` is an 8-diamond with this
/// labeling, and its interior vertices are internal of degree five in `c`.
fn matches_diamond8(c: &Canvas, boundary: &[usize; 4]) -> bool {
    let Some((sub, interior)) = disk_subcanvas(c, boundary) else {
        return false;
    };
    if interior.len() != 8 || !interior.iter().all(|&v| is_internal5(c, v)) {
        return false;
    }
    // x1 and x3 have degree five inside the disk, x2 and z degree four
    sub.outer_len() == 4
        && [0, 1, 2, 3].map(|i| sub.degree(i)) == [5, 4, 5, 4]
        && code_of(&sub) == *eight_code()
}

/// Whether the disk of `boundary = z y1 y2 y3 x3` is a 10-diamond.
fn matches_diamond10(c: &Canvas, boundary: &[usize; 5]) -> bool {
    let Some((sub, interior)) = disk_subcanvas(c, boundary) else {
        return false;
    };
    interior.len() == 10
        && interior.iter().all(|&v| c.is_internal(v))
        && code_of(&sub) == *ten_code()
}

/// All sites where some star contraction applies structurally.
pub fn star_sites(c: &Canvas) -> Vec<(StarContractionKind, Site)> {
    let mut out = Vec::new();
    let g = c.graph();
    let n = c.vertex_count();
    for v2 in c.internal_vertices() {
        for &v1 in g.neighbors(v2) {
            out.push((StarContractionKind::C1, Site::Edge { v1, v2 }));
        }
    }
    for p in 0..n {
        for &q in g.neighbors(p) {
            if q < p || !is_internal5(c, p) || !is_internal5(c, q) {
                continue;
            }
            let r = g.next_dart(p, q).1;
            let s = g.next_dart(q, p).1;
            if is_internal5(c, r) && is_internal5(c, s) {
                out.push((StarContractionKind::C2, Site::Square { cycle: [p, r, q, s] }));
                out.push((StarContractionKind::C2, Site::Square { cycle: [r, q, s, p] }));
            }
        }
    }
    for v in 0..n {
        if check_center(c, v).is_ok() {
            out.push((StarContractionKind::C5, Site::Center { v }));
            let r = g.neighbors(v);
            for i in 0..5 {
                let (v1, v2) = (r[i], r[(i + 1) % 5]);
                out.push((StarContractionKind::C5Ext, Site::CenterExt { v, v1, v2 }));
            }
        }
    }
    for b in diamond8_sites(c) {
        out.push((StarContractionKind::C8(Chord::X1X3), Site::Diamond8 { boundary: b }));
        out.push((StarContractionKind::C8(Chord::X2Z), Site::Diamond8 { boundary: b }));
    }
    for b in diamond10_sites(c) {
        out.push((StarContractionKind::C10, Site::Diamond10 { boundary: b }));
    }
    out
}

/// Boundaries `x1 x2 x3 z` of all 8-diamonds, one labeling each.
pub fn diamond8_sites(c: &Canvas) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for q in crate::plane::four_cycles(c) {
        for s in 0..4 {
            let b = [q[s], q[(s + 1) % 4], q[(s + 2) % 4], q[(s + 3) % 4]];
            let mut key = b;
            key.sort_unstable();
            if seen.contains(&key) {
                break;
            }
            if matches_diamond8(c, &b) {
                seen.insert(key);
                out.push(b);
                break;
            }
        }
    }
    out
}

/// Boundaries `z y1 y2 y3 x3` of all 10-diamonds.
pub fn diamond10_sites(c: &Canvas) -> Vec<[usize; 5]> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for b in diamond8_sites(c) {
        // the four labelings of the same 8-diamond
        let [p, q, r, s] = b;
        for [x1, x2, x3, z] in [[p, q, r, s], [r, q, p, s], [p, s, r, q], [r, s, p, q]] {
            if c.is_external(x1) || c.is_external(x2) || c.degree(x1) != 7 || c.degree(x2) != 6 {
                continue;
            }
            let Some(y1) = apex_other_outside(c, z, x1, &b) else { continue };
            let Some(y2) = apex_other(c, y1, x1, z) else { continue };
            let Some(y3) = apex_other(c, y2, x2, x1) else { continue };
            let boundary = [z, y1, y2, y3, x3];
            let mut key = boundary;
            key.sort_unstable();
            if !seen.contains(&key) && matches_diamond10(c, &boundary) {
                seen.insert(key);
                out.push(boundary);
            }
        }
    }
    out
}

/// The apex across `ab` that lies outside the disk bounded by `cycle`.
fn apex_other_outside(c: &Canvas, a: usize, b: usize, cycle: &[usize; 4]) -> Option<usize> {
    let g = c.graph();
    let inside = disk_subcanvas(c, cycle).map(|(_, i)| i).unwrap_or_default();
    [g.next_dart(a, b).1, g.next_dart(b, a).1]
        .into_iter()
        .find(|x| !inside.contains(x) && !cycle.contains(x))
}

/// A safe star contraction, which exists for every candidate with an
/// internal vertex.
pub fn reduction_exists(c: &Canvas) -> Result<(StarContractionKind, Site), EnumError> {
    if c.internal_count() == 0 {
        return Err(EnumError::Input("candidate has no internal vertex".into()));
    }
    for (kind, site) in star_sites(c) {
        if let Ok(res) = apply_star_contraction(c, kind, &site) {
            if res.safe && res.canvas.outer_len() == c.outer_len() {
                return Ok((kind, site));
            }
        }
    }
    Err(EnumError::Invariant(
        "no safe star contraction found".into(),
    ))
}

/// A child produced by an inverse contraction, with the site at which the
/// forward contraction recovers the parent.
#[derive(Clone, Debug)]
pub struct Child {
    pub canvas: Canvas,
    pub kind: StarContractionKind,
    pub site: Site,
}

/// Splits `w` into `w`, keeping the neighbors `n_i .. n_j`
/// (counterclockwise), and a new last vertex taking `n_j .. n_i`. The two
/// pieces are adjacent, with `n_i` and `n_j` as common neighbors.
pub(crate) fn split_vertex(rot: &[Vec<usize>], w: usize, i: usize, j: usize) -> Vec<Vec<usize>> {
    let r = &rot[w];
    let d = r.len();
    let v2 = rot.len();
    let span = (j + d - i) % d;
    let a: Vec<usize> = (0..=span).map(|s| r[(i + s) % d]).collect();
    let b: Vec<usize> = (0..=d - span).map(|s| r[(j + s) % d]).collect();
    let mut out = rot.to_vec();
    for &y in &b[1..b.len() - 1] {
        for x in out[y].iter_mut() {
            if *x == w {
                *x = v2;
            }
        }
    }
    let (ni, nj) = (a[0], a[span]);
    let p = out[ni].iter().position(|&x| x == w).unwrap();
    out[ni].insert(p + 1, v2);
    let p = out[nj].iter().position(|&x| x == w).unwrap();
    out[nj].insert(p, v2);
    let mut ra = a;
    ra.push(v2);
    let mut rb = b;
    rb.push(w);
    out[w] = ra;
    out.push(rb);
    out
}

/// Whether `outer` is still a facial walk of the rotation system.
pub(crate) fn outer_is_face(rot: &[Vec<usize>], outer: &[usize]) -> bool {
    let k = outer.len();
    (0..k).all(|i| {
        let (a, b, c) = (outer[i], outer[(i + 1) % k], outer[(i + 2) % k]);
        let r = &rot[b];
        let Some(p) = r.iter().position(|&x| x == a) else {
            return false;
        };
        r[(p + r.len() - 1) % r.len()] == c
    })
}

/// Vertex splits of `w` whose new piece is internal with degree at least
/// `min_new` (exactly `min_new` when `exact`).
fn splits(c: &Canvas, rot: &[Vec<usize>], w: usize, min_new: usize, exact: bool) -> Vec<Vec<Vec<usize>>> {
    let d = rot[w].len();
    let mut out = Vec::new();
    for i in 0..d {
        for span in 1..d {
            let new_deg = d - span + 2;
            if new_deg < min_new || (exact && new_deg != min_new) {
                continue;
            }
            let j = (i + span) % d;
            let r = split_vertex(rot, w, i, j);
            if c.is_external(w) && !outer_is_face(&r, c.outer()) {
                continue;
            }
            out.push(r);
        }
    }
    out
}

pub(crate) fn canvas_from(rot: Vec<Vec<usize>>, outer: &[usize]) -> Canvas {
    Canvas::from_parts_unchecked(RotationGraph::from_rotations_unchecked(rot), outer.to_vec())
}

/// All candidates with at most `n_max` vertices obtained from the candidate
/// `c` by one inverse star contraction, with their sites.
pub fn inverse_with_sites(c: &Canvas, n_max: usize) -> Vec<Child> {
    let n = c.vertex_count();
    let mut out = Vec::new();
    let rot = c.graph().rotations();
    let mut keep = |canvas: Canvas, kind, site| {
        if is_candidate(&canvas) {
            out.push(Child { canvas, kind, site });
        }
    };
    // inverse 1-contraction
    if n < n_max {
        for w in 0..n {
            let d = rot[w].len();
            for i in 0..d {
                for span in 1..d {
                    let (deg_kept, deg_new) = (span + 2, d - span + 2);
                    if deg_new < 5 || (c.is_internal(w) && deg_kept < 5) {
                        continue;
                    }
                    let j = (i + span) % d;
                    let r = split_vertex(rot, w, i, j);
                    if c.is_external(w) && !outer_is_face(&r, c.outer()) {
                        continue;
                    }
                    keep(canvas_from(r, c.outer()), StarContractionKind::C1, Site::Edge { v1: w, v2: n });
                }
            }
        }
    }
    // inverse 2-contraction: split b with hat a, then a with a hat among
    // the pieces of b
    if n + 2 <= n_max {
        for a in 0..n {
            if !is_internal5(c, a) {
                continue;
            }
            for &b in &rot[a] {
                if !is_internal5(c, b) {
                    continue;
                }
                let p = rot[b].iter().position(|&x| x == a).unwrap();
                for q in 0..5 {
                    if q == p {
                        continue;
                    }
                    for (i, j) in [(p, q), (q, p)] {
                        let r1 = split_vertex(rot, b, i, j);
                        let b2 = n;
                        for hat in [b, b2] {
                            let pa = r1[a].iter().position(|&x| x == hat).unwrap();
                            let da = r1[a].len();
                            for qa in 0..da {
                                if qa == pa {
                                    continue;
                                }
                                for (ia, ja) in [(pa, qa), (qa, pa)] {
                                    let r2 = split_vertex(&r1, a, ia, ja);
                                    let a2 = n + 1;
                                    if [a, a2, b, b2].iter().any(|&v| r2[v].len() != 5) {
                                        continue;
                                    }
                                    let Some(cycle) = square_order(&r2, [a, a2], [b, b2]) else {
                                        continue;
                                    };
                                    keep(canvas_from(r2, c.outer()), StarContractionKind::C2, Site::Square { cycle });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    // inverse 5-contraction
    if n + 5 <= n_max {
        for w in 0..n {
            if is_internal5(c, w) {
                if let Some(ch) = inverse_c5(c, w) {
                    keep(ch, StarContractionKind::C5, Site::Center { v: w });
                }
            }
        }
    }
    // inverse extended 5-contraction: split off an internal piece of degree
    // five, then expand it
    if n + 6 <= n_max {
        for x in 0..n {
            for r in splits(c, rot, x, 5, true) {
                let mid = canvas_from(r, c.outer());
                let piece = n;
                if let Some(ch) = inverse_c5(&mid, piece) {
                    // ring vertices adjacent to x: the pair whose apex is x
                    let site = ext_site(&ch, piece, x);
                    if let Some(site) = site {
                        keep(ch, StarContractionKind::C5Ext, site);
                    }
                }
            }
        }
    }
    // inverse 8-contraction: replace a non-outer edge by an 8-diamond
    if n + 8 <= n_max {
        for a in 0..n {
            for &b in &rot[a] {
                if b < a || is_outer_edge(c, a, b) {
                    continue;
                }
                let g = c.graph();
                let hc = g.next_dart(a, b).1;
                let hd = g.next_dart(b, a).1;
                for (chord, boundary) in [
                    (Chord::X1X3, [a, hc, b, hd]),
                    (Chord::X2Z, [hd, a, hc, b]),
                ] {
                    if let Some(ch) = insert_eight(c, a, b, boundary) {
                        keep(ch, StarContractionKind::C8(chord), Site::Diamond8 { boundary });
                    }
                }
            }
        }
    }
    // inverse 10-contraction: replace a 5-wheel by a 10-diamond
    if n + 4 <= n_max {
        for v in 0..n {
            if check_center(c, v).is_err() {
                continue;
            }
            let ring: Vec<usize> = rot[v].clone();
            let mut k = Vec::with_capacity(5);
            for i in 0..5 {
                match apex_other(c, ring[i], ring[(i + 1) % 5], v) {
                    Some(x) => k.push(x),
                    None => break,
                }
            }
            if k.len() != 5 || k.iter().collect::<HashSet<_>>().len() != 5 {
                continue;
            }
            for s in 0..5 {
                for rev in [false, true] {
                    let boundary: [usize; 5] = std::array::from_fn(|i| {
                        if rev { k[(s + 5 - i) % 5] } else { k[(s + i) % 5] }
                    });
                    if let Some(ch) = insert_ten(c, v, &ring, boundary) {
                        keep(ch, StarContractionKind::C10, Site::Diamond10 { boundary });
                    }
                }
            }
        }
    }
    out
}

/// Children only, deduplicated by canonical code, in code order.
pub fn inverse_star_contractions(c: &Canvas, n_max: usize) -> Vec<Canvas> {
    let mut seen = std::collections::BTreeMap::new();
    for ch in inverse_with_sites(c, n_max) {
        seen.entry(canonical_code(&ch.canvas)).or_insert(ch.canvas);
    }
    seen.into_values().collect()
}

fn is_outer_edge(c: &Canvas, a: usize, b: usize) -> bool {
    let o = c.outer();
    let k = o.len();
    (0..k).any(|i| {
        let (p, q) = (o[i], o[(i + 1) % k]);
        (p == a && q == b) || (p == b && q == a)
    })
}

/// Orders the pieces as a 4-cycle `a? a? b? b?` with a diagonal.
fn square_order(rot: &[Vec<usize>], a: [usize; 2], b: [usize; 2]) -> Option<[usize; 4]> {
    let adj = |x: usize, y: usize| rot[x].contains(&y);
    for (a0, a1) in [(a[0], a[1]), (a[1], a[0])] {
        for (b0, b1) in [(b[0], b[1]), (b[1], b[0])] {
            let cyc = [a0, a1, b0, b1];
            let cycle_ok = (0..4).all(|i| adj(cyc[i], cyc[(i + 1) % 4]));
            let diag = adj(a0, b0) || adj(a1, b1);
            if cycle_ok && diag {
                return Some(cyc);
            }
        }
    }
    None
}

/// Replaces the internal degree-5 vertex `w` by a 5-wheel with center `w`
/// whose rim is joined to the old neighbors in an antiprism band.
fn inverse_c5(c: &Canvas, w: usize) -> Option<Canvas> {
    let x: Vec<usize> = c.neighbors(w).to_vec();
    if x.len() != 5 || c.is_external(w) {
        return None;
    }
    let n = c.vertex_count();
    let mut soup = c.to_soup();
    let ring: Vec<usize> = (n..n + 5).collect();
    let mut add = Vec::with_capacity(15);
    for i in 0..5 {
        let (ri, rj) = (ring[i], ring[(i + 1) % 5]);
        add.push(vec![w, ri, rj]);
        add.push(vec![ri, rj, x[i]]);
        add.push(vec![ri, x[(i + 4) % 5], x[i]]);
    }
    soup.replace_faces_at(&[w], add);
    soup.n = n + 5;
    soup.into_canvas().ok()
}

/// The extended-contraction site of a child in which `center` was expanded
/// next to `x`.
fn ext_site(ch: &Canvas, center: usize, x: usize) -> Option<Site> {
    let r = ch.neighbors(center);
    (0..5).find_map(|i| {
        let (v1, v2) = (r[i], r[(i + 1) % 5]);
        (apex_other(ch, v1, v2, center) == Some(x)).then_some(Site::CenterExt { v: center, v1, v2 })
    })
}

/// Removes the edge `ab` and fills the resulting 4-face (boundary
/// `x1 x2 x3 z`) with the interior of an 8-diamond.
fn insert_eight(c: &Canvas, a: usize, b: usize, boundary: [usize; 4]) -> Option<Canvas> {
    let n = c.vertex_count();
    let mut soup = c.to_soup();
    let remove: Vec<usize> = (0..soup.faces.len())
        .filter(|&fi| fi != soup.outer && soup.faces[fi].len() == 3 && soup.faces[fi].contains(&a) && soup.faces[fi].contains(&b))
        .collect();
    if remove.len() != 2 {
        return None;
    }
    let map = |v: usize| if v < 4 { boundary[v] } else { n + v - 4 };
    let add: Vec<Vec<usize>> = eight_diamond()
        .inner_faces()
        .into_iter()
        .map(|f| f.into_iter().map(map).collect())
        .collect();
    soup.replace_faces(&remove, add);
    soup.n = n + 8;
    soup.into_canvas().ok()
}

/// Replaces the 5-wheel centered at `v` with rim `ring` by a 10-diamond
/// whose outer cycle `z y1 y2 y3 x3` is `boundary`.
fn insert_ten(c: &Canvas, v: usize, ring: &[usize], boundary: [usize; 5]) -> Option<Canvas> {
    let n = c.vertex_count();
    let ten = ten_diamond();
    // reuse the six removed identifiers, then four new ones
    let mut fresh: Vec<usize> = std::iter::once(v).chain(ring.iter().copied()).collect();
    fresh.extend(n..n + 4);
    let outer_ids = [3, 12, 13, 14, 2];
    let mut map = vec![usize::MAX; 15];
    for (i, &t) in outer_ids.iter().enumerate() {
        map[t] = boundary[i];
    }
    let mut it = fresh.into_iter();
    for m in map.iter_mut() {
        if *m == usize::MAX {
            *m = it.next().unwrap();
        }
    }
    let add: Vec<Vec<usize>> = ten
        .inner_faces()
        .into_iter()
        .map(|f| f.into_iter().map(|x| map[x]).collect())
        .collect();
    let mut soup: FaceSoup = c.to_soup();
    let mut removed = vec![v];
    removed.extend_from_slice(ring);
    soup.replace_faces_at(&removed, add);
    soup.n = n + 4;
    soup.into_canvas().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{diamond, eight_diamond, w4};

    #[test]
    fn small_candidates() {
        assert!(is_candidate(&diamond()));
        assert!(!is_candidate(&w4()));
        assert!(is_candidate(&eight_diamond()));
    }

    #[test]
    fn split_keeps_planarity() {
        let e = eight_diamond();
        let rot = e.graph().rotations();
        for w in 0..e.vertex_count() {
            let d = rot[w].len();
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        let r = split_vertex(rot, w, i, j);
                        let g = RotationGraph::new(r).unwrap();
                        assert_eq!(g.trace_faces().len(), 21);
                    }
                }
            }
        }
    }

    #[test]
    fn diamond_children_contain_eight_diamond() {
        let kids = inverse_star_contractions(&diamond(), 12);
        let code = canonical_code(&eight_diamond());
        assert!(kids.iter().any(|k| canonical_code(k) == code));
        assert!(kids.iter().all(is_candidate));
    }

    #[test]
    fn eight_diamond_reduces_by_c8() {
        let e = eight_diamond();
        let sites = diamond8_sites(&e);
        assert_eq!(sites.len(), 1);
        let (kind, _) = reduction_exists(&e).unwrap();
        assert!(matches!(kind, StarContractionKind::C8(_)));
    }

    #[test]
    fn c5_centers_of_eight_diamond() {
        // the antipodes of the deleted edge's ends in the icosahedron
        let e = eight_diamond();
        let mut centers = 0;
        for v in 0..12 {
            match apply_star_contraction(&e, StarContractionKind::C5, &Site::Center { v }) {
                Ok(r) => {
                    centers += 1;
                    assert_eq!(r.canvas.vertex_count(), 7);
                }
                Err(err) => assert!(matches!(err, EnumError::Pattern(_))),
            }
        }
        assert_eq!(centers, 2);
    }

    #[test]
    fn round_trips_from_small_parents() {
        let parents = [diamond(), eight_diamond()];
        for p in &parents {
            let code = canonical_code(p);
            for ch in inverse_with_sites(p, 22) {
                let back = apply_star_contraction(&ch.canvas, ch.kind, &ch.site)
                    .unwrap_or_else(|e| panic!("{:?} {:?}: {e}", ch.kind, ch.site));
                assert_eq!(canonical_code(&back.canvas), code, "{:?}", ch.kind);
                assert!(back.safe);
            }
        }
    }
}
