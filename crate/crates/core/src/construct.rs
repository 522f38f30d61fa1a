//! Named canvases, the fillers `F_k`, the bichromatic-forbidding
//! constructions and the conversion to graphs drawn with one crossing.

use thiserror::Error;

use crate::coloring::Extender;
use crate::plane::{Canvas, FaceSoup, PlaneError, RotationGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("unknown canvas name `{0}`")]
    UnknownName(String),
    #[error("outer face has length {0}, expected 4")]
    OuterLength(usize),
    #[error("outer cycle has a chord")]
    ChordedOuter,
    #[error("vertex {vertex} has degree {degree}, at least 5 required")]
    LowDegree { vertex: usize, degree: usize },
    #[error("edge index {0} out of range")]
    EdgeIndex(usize),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

/// The 4-cycle `0 1 2 3` with the chord `0 2`.
pub fn diamond() -> Canvas {
    Canvas::from_face_list(4, &[vec![0, 1, 2], vec![0, 2, 3]], &[0, 1, 2, 3]).expect("diamond")
}

/// The 4-cycle `0 1 2 3` with a central vertex `4`.
pub fn w4() -> Canvas {
    wheel(4)
}

/// The `k`-wheel: rim `0..k` and center `k`.
pub fn wheel(k: usize) -> Canvas {
    let faces: Vec<Vec<usize>> = (0..k).map(|i| vec![i, (i + 1) % k, k]).collect();
    let outer: Vec<usize> = (0..k).collect();
    Canvas::from_face_list(k + 1, &faces, &outer).expect("wheel")
}

/// The 4-cycle `0 1 2 3` with nothing inside.
pub fn square() -> Canvas {
    Canvas::from_face_list(4, &[vec![0, 1, 2, 3]], &[0, 1, 2, 3]).expect("square")
}

fn icosahedron_faces() -> Vec<Vec<usize>> {
    // top 0, upper ring 1..=5, lower ring 6..=10, bottom 11
    let a = |i: usize| 1 + i % 5;
    let b = |i: usize| 6 + i % 5;
    let mut faces = Vec::new();
    for i in 0..5 {
        faces.push(vec![0, a(i), a(i + 1)]);
        faces.push(vec![a(i), b(i), a(i + 1)]);
        faces.push(vec![a(i + 1), b(i), b(i + 1)]);
        faces.push(vec![11, b(i), b(i + 1)]);
    }
    faces
}

fn sphere_from_faces(n: usize, faces: Vec<Vec<usize>>) -> RotationGraph {
    let soup = FaceSoup { n, faces, outer: 0 };
    soup.into_canvas().expect("sphere graph").graph().clone()
}

pub fn icosahedron() -> RotationGraph {
    sphere_from_faces(12, icosahedron_faces())
}

pub fn octahedron() -> RotationGraph {
    // poles 0 and 5 around the square 1 2 3 4
    let mut faces = Vec::new();
    for i in 0..4 {
        let (p, q) = (1 + i, 1 + (i + 1) % 4);
        faces.push(vec![0, p, q]);
        faces.push(vec![5, q, p]);
    }
    sphere_from_faces(6, faces)
}

/// The icosahedron with one edge deleted, outer cycle `x1 x2 x3 z` on
/// vertices `0 1 2 3`. The eight other vertices have degree five; `x1` and
/// `x3` have degree five and `x2`, `z` degree four.
pub fn eight_diamond() -> Canvas {
    // delete the edge between the top 0 and the ring vertex 1; the merged
    // face is 2 0 5 1, i.e. x1 = 2, x2 = 0, x3 = 5, z = 1
    let mut map = [usize::MAX; 12];
    map[2] = 0;
    map[0] = 1;
    map[5] = 2;
    map[1] = 3;
    let mut next = 4;
    for m in map.iter_mut() {
        if *m == usize::MAX {
            *m = next;
            next += 1;
        }
    }
    let inner: Vec<Vec<usize>> = icosahedron_faces()
        .into_iter()
        .filter(|f| !(f.contains(&0) && f.contains(&1)))
        .map(|f| f.into_iter().map(|v| map[v]).collect())
        .collect();
    Canvas::from_face_list(12, &inner, &[0, 1, 2, 3]).expect("8-diamond")
}

/// Faces inside the 10-diamond: the 8-diamond on `x1 x2 x3 z = 0 1 2 3`
/// plus `y1 y2 y3 = 12 13 14`. The outer 5-cycle is `z y1 y2 y3 x3`.
pub fn ten_diamond() -> Canvas {
    let mut inner = eight_diamond().inner_faces();
    let (x1, x2, x3, z, y1, y2, y3) = (0, 1, 2, 3, 12, 13, 14);
    inner.extend([
        vec![z, y1, x1],
        vec![y1, y2, x1],
        vec![x1, y2, x2],
        vec![y2, y3, x2],
        vec![x2, y3, x3],
    ]);
    Canvas::from_face_list(15, &inner, &[z, y1, y2, y3, x3]).expect("10-diamond")
}

/// `F_4` is the icosahedron minus an edge; `F_k` for `k >= 5` is the
/// `k`-wheel.
pub fn filler(k: usize) -> Option<Canvas> {
    match k {
        4 => Some(eight_diamond()),
        k if k >= 5 => Some(wheel(k)),
        _ => None,
    }
}

/// Canvas by name: `diamond`, `w4`, `square`, `F_k` (or `Fk`),
/// `eight_diamond`, `ten_diamond`.
pub fn make_named(name: &str) -> Result<Canvas, ConstructError> {
    let unknown = || ConstructError::UnknownName(name.to_string());
    match name {
        "diamond" => Ok(diamond()),
        "w4" | "W4" => Ok(w4()),
        "square" => Ok(square()),
        "eight_diamond" | "8-diamond" => Ok(eight_diamond()),
        "ten_diamond" | "10-diamond" => Ok(ten_diamond()),
        _ => {
            let k = name
                .strip_prefix("F_")
                .or_else(|| name.strip_prefix('F'))
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(unknown)?;
            filler(k).ok_or_else(unknown)
        }
    }
}

fn outer4(h: &Canvas) -> Result<[usize; 4], ConstructError> {
    let o = h.outer();
    if o.len() != 4 {
        return Err(ConstructError::OuterLength(o.len()));
    }
    Ok([o[0], o[1], o[2], o[3]])
}

fn induced_outer4(h: &Canvas) -> Result<[usize; 4], ConstructError> {
    let v = outer4(h)?;
    if h.has_edge(v[0], v[2]) || h.has_edge(v[1], v[3]) {
        return Err(ConstructError::ChordedOuter);
    }
    Ok(v)
}

/// Surrounds the outer 4-cycle `v1..v4` by the 8-cycle `x1 y1 .. x4 y4`
/// and a new outer 4-cycle `u1..u4`. Adds 12 vertices.
pub fn extend_10ext(h: &Canvas) -> Result<Canvas, ConstructError> {
    let v = outer4(h)?;
    let n = h.vertex_count();
    let x = |i: usize| n + (i + 3) % 4;
    let y = |i: usize| n + 4 + (i + 3) % 4;
    let u = |i: usize| n + 8 + (i + 3) % 4;
    let vv = |i: usize| v[(i + 3) % 4];
    let mut faces = h.inner_faces();
    for i in 1..=4 {
        // v_i sees x_{i-1}, y_{i-1}, x_i
        faces.push(vec![vv(i), x(i - 1), y(i - 1)]);
        faces.push(vec![vv(i), y(i - 1), x(i)]);
        faces.push(vec![vv(i), x(i), vv(i + 1)]);
        // u_i sees y_{i-1}, x_i, y_i
        faces.push(vec![u(i), y(i - 1), x(i)]);
        faces.push(vec![u(i), x(i), y(i)]);
        faces.push(vec![u(i), y(i), u(i + 1)]);
    }
    let outer: Vec<usize> = (1..=4).map(u).collect();
    Ok(Canvas::from_face_list(n + 12, &faces, &outer)?)
}

/// Adds an outer 4-cycle `u1..u4` with `u_i` adjacent to `v_i` and
/// `v_{i+1}`. The outer cycle of `h` must be induced.
pub fn extend_proj(h: &Canvas) -> Result<Canvas, ConstructError> {
    let v = induced_outer4(h)?;
    let n = h.vertex_count();
    let mut faces = h.inner_faces();
    for i in 0..4 {
        let (ui, uj) = (n + i, n + (i + 1) % 4);
        faces.push(vec![ui, v[i], v[(i + 1) % 4]]);
        faces.push(vec![ui, v[(i + 1) % 4], uj]);
    }
    let outer: Vec<usize> = (n..n + 4).collect();
    Ok(Canvas::from_face_list(n + 4, &faces, &outer)?)
}

/// Deletes the outer edge `v1 v2 = outer[k] outer[k+1]`, and surrounds the
/// result by the 4-cycle `u1 u2 u3 u4`, where `u1` is the apex of the inner
/// triangle on `v1 v2`, and `u_i` is adjacent to `v_i`, `v_{i+1}` for
/// `i = 2, 3, 4`. Requires an induced outer cycle and `deg v1, deg v2 >= 5`.
pub fn extend_proj_prime(h: &Canvas, k: usize) -> Result<Canvas, ConstructError> {
    if k >= 4 {
        return Err(ConstructError::EdgeIndex(k));
    }
    let o = induced_outer4(h)?;
    let v = |i: usize| o[(k + i + 3) % 4];
    for i in [1, 2] {
        if h.degree(v(i)) < 5 {
            return Err(ConstructError::LowDegree {
                vertex: v(i),
                degree: h.degree(v(i)),
            });
        }
    }
    let g = h.graph();
    // the outer walk traverses v1 -> v2, so the inner face is on v2 -> v1
    let u1 = g.next_dart(v(2), v(1)).1;
    let n = h.vertex_count();
    let (u2, u3, u4) = (n, n + 1, n + 2);
    let mut faces: Vec<Vec<usize>> = h
        .inner_faces()
        .into_iter()
        .filter(|f| !(f.contains(&v(1)) && f.contains(&v(2)) && f.contains(&u1)))
        .collect();
    faces.extend([
        vec![u1, v(2), u2],
        vec![u2, v(2), v(3)],
        vec![u2, v(3), u3],
        vec![u3, v(3), v(4)],
        vec![u3, v(4), u4],
        vec![u4, v(4), v(1)],
        vec![u4, v(1), u1],
    ]);
    Ok(Canvas::from_face_list(n + 3, &faces, &[u1, u2, u3, u4])?)
}

/// A plane graph together with two extra edges drawn crossing each other.
#[derive(Clone, Debug)]
pub struct CrossingGraph {
    pub base: RotationGraph,
    pub crossing_pair: [(usize, usize); 2],
}

impl CrossingGraph {
    /// Adjacency lists including the crossing edges.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = self.base.rotations().to_vec();
        for &(a, b) in &self.crossing_pair {
            if !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }

    /// The four endpoints of the crossing edges.
    pub fn endpoints(&self) -> [usize; 4] {
        let [(a, b), (c, d)] = self.crossing_pair;
        [a, c, b, d]
    }

    /// Whether the crossing endpoints induce a clique.
    pub fn endpoints_form_clique(&self) -> bool {
        let adj = self.adjacency();
        let e = self.endpoints();
        (0..4).all(|i| (i + 1..4).all(|j| adj[e[i]].contains(&e[j])))
    }
}

/// Adds both diagonals of the outer 4-cycle `u1 u2 v1 v2` as a crossing
/// pair.
pub fn to_one_crossing(h: &Canvas) -> Result<CrossingGraph, ConstructError> {
    let o = outer4(h)?;
    Ok(CrossingGraph {
        base: h.graph().clone(),
        crossing_pair: [(o[0], o[2]), (o[1], o[3])],
    })
}

pub fn crossing_is_4_colorable(g: &CrossingGraph) -> bool {
    let adj = g.adjacency();
    Extender::new(&adj, &vec![0; adj.len()]).exists()
}

/// A named step of the bichromatic-forbidding constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    TenExt,
    Proj,
    ProjPrime(usize),
}

impl Step {
    pub fn apply(self, h: &Canvas) -> Result<Canvas, ConstructError> {
        match self {
            Step::TenExt => extend_10ext(h),
            Step::Proj => extend_proj(h),
            Step::ProjPrime(k) => extend_proj_prime(h, k),
        }
    }

    pub fn all() -> [Step; 6] {
        [
            Step::TenExt,
            Step::Proj,
            Step::ProjPrime(0),
            Step::ProjPrime(1),
            Step::ProjPrime(2),
            Step::ProjPrime(3),
        ]
    }

    pub fn parse(s: &str) -> Option<Step> {
        match s {
            "10ext" => Some(Step::TenExt),
            "proj" => Some(Step::Proj),
            _ => {
                let k = s.strip_prefix("projprime")?;
                let k = k.trim_start_matches(['_', '(']).trim_end_matches(')');
                let k = if k.is_empty() { 0 } else { k.parse().ok()? };
                (k < 4).then_some(Step::ProjPrime(k))
            }
        }
    }
}

impl std::fmt::Display for Step {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Step::TenExt => write!(f, "10ext"),
            Step::Proj => write!(f, "proj"),
            Step::ProjPrime(k) => write!(f, "projprime({k})"),
        }
    }
}

/// Evaluates a pipeline such as `10ext(diamond)` or
/// `proj(10ext(diamond))` or the left-to-right form `diamond|10ext|proj`.
pub fn run_pipeline(expr: &str) -> Result<Canvas, ConstructError> {
    let expr = expr.trim();
    if expr.contains('|') {
        let mut parts = expr.split('|').map(str::trim);
        let mut c = make_named(parts.next().unwrap_or(""))?;
        for p in parts {
            let step = Step::parse(p).ok_or_else(|| ConstructError::UnknownName(p.into()))?;
            c = step.apply(&c)?;
        }
        return Ok(c);
    }
    if let Some(open) = expr.find('(') {
        if expr.ends_with(')') {
            let head = &expr[..open];
            let inner = &expr[open + 1..expr.len() - 1];
            // projprime(k)(inner) or projprime_k(inner)
            if head == "projprime" {
                if let Some(close) = inner.find(")(") {
                    let k: usize = inner[..close]
                        .parse()
                        .map_err(|_| ConstructError::UnknownName(expr.into()))?;
                    return extend_proj_prime(&run_pipeline(&inner[close + 2..])?, k);
                }
            }
            if let Some(step) = Step::parse(head) {
                return step.apply(&run_pipeline(inner)?);
            }
            return Err(ConstructError::UnknownName(head.into()));
        }
    }
    make_named(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{forbidding_profile, is_bichromatic_forbidding};
    use crate::enumerate::is_candidate;
    use crate::plane::{canonical_code, internally_k_connected, is_thick};

    #[test]
    fn fillers() {
        let f4 = make_named("F_4").unwrap();
        assert_eq!(f4.vertex_count(), 12);
        assert!(is_candidate(&f4));
        let f5 = make_named("F_5").unwrap();
        assert_eq!(f5.vertex_count(), 6);
        assert!(make_named("F_3").is_err());
        assert!(make_named("nonsense").is_err());
    }

    #[test]
    fn eight_diamond_shape() {
        let d = eight_diamond();
        assert_eq!(d.vertex_count(), 12);
        assert_eq!(d.edge_count(), 29);
        assert_eq!(d.internal_vertices().len(), 8);
        assert!(d.internal_vertices().iter().all(|&v| d.degree(v) == 5));
        assert_eq!([0, 1, 2, 3].map(|v| d.degree(v)), [5, 4, 5, 4]);
        assert!(internally_k_connected(&d, 5).unwrap());
        assert!(is_thick(&d));
    }

    #[test]
    fn ten_diamond_shape() {
        let t = ten_diamond();
        assert_eq!(t.vertex_count(), 15);
        assert_eq!(t.internal_count(), 10);
        assert_eq!(t.degree(0), 7);
        assert_eq!(t.degree(1), 6);
        assert!(t.internal_vertices().iter().filter(|&&v| v > 1).all(|&v| t.degree(v) == 5));
        assert!(is_candidate(&t));
    }

    #[test]
    fn ten_ext_of_diamond() {
        let g = extend_10ext(&diamond()).unwrap();
        assert_eq!(g.vertex_count(), 16);
        assert!(is_candidate(&g));
        assert!(is_bichromatic_forbidding(&g).unwrap());
        let w = extend_10ext(&w4()).unwrap();
        assert!(!is_bichromatic_forbidding(&w).unwrap());
        let g2 = extend_10ext(&g).unwrap();
        assert_eq!(g2.vertex_count(), 28);
        assert!(is_candidate(&g2));
        assert!(is_bichromatic_forbidding(&g2).unwrap());
        assert_eq!(g.outer().iter().map(|&v| g.degree(v)).collect::<Vec<_>>(), vec![5; 4]);
    }

    #[test]
    fn proj_family() {
        assert_eq!(extend_proj(&diamond()), Err(ConstructError::ChordedOuter));
        let g = extend_10ext(&diamond()).unwrap();
        let p = extend_proj(&g).unwrap();
        assert_eq!(p.vertex_count(), 20);
        assert!(is_candidate(&p));
        assert!(is_bichromatic_forbidding(&p).unwrap());
        let q = extend_proj_prime(&g, 0).unwrap();
        assert_eq!(q.vertex_count(), 19);
        assert!(is_candidate(&q));
        assert!(is_bichromatic_forbidding(&q).unwrap());
        let degs: Vec<usize> = q.outer().iter().map(|&v| q.degree(v)).collect();
        assert!(degs[0] >= 7 && degs[1..].iter().all(|&d| d == 4));
        // the 180-degree rotation of g pairs up the four edge choices
        let codes: std::collections::BTreeSet<_> = (0..4)
            .map(|k| canonical_code(&extend_proj_prime(&g, k).unwrap()))
            .collect();
        assert!(codes.len() <= 2);
        assert_eq!(
            canonical_code(&extend_proj_prime(&g, 0).unwrap()),
            canonical_code(&extend_proj_prime(&g, 2).unwrap())
        );
    }

    #[test]
    fn crossings() {
        let sq = to_one_crossing(&square()).unwrap();
        assert!(crossing_is_4_colorable(&sq));
        let k5 = to_one_crossing(&w4()).unwrap();
        assert!(!crossing_is_4_colorable(&k5));
        assert!(k5.endpoints_form_clique());
        let rainbow_ok = !forbidding_profile(&w4()).unwrap().forbids_rainbow;
        assert_eq!(crossing_is_4_colorable(&k5), rainbow_ok);
    }

    #[test]
    fn pipelines_parse() {
        let a = run_pipeline("proj(10ext(diamond))").unwrap();
        let b = run_pipeline("diamond|10ext|proj").unwrap();
        assert_eq!(canonical_code(&a), canonical_code(&b));
        let c = run_pipeline("projprime(2)(10ext(diamond))").unwrap();
        assert_eq!(c.vertex_count(), 19);
    }
}
