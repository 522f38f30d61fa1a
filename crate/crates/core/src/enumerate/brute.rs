//! Independent generators used as oracles: 4-connected sphere
//! triangulations by vertex splitting, and the canvases obtained from them
//! by deleting one vertex.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::construct::{diamond, octahedron};
use crate::plane::{
    canonical_code, sphere_canonical_code, Canvas, CanonicalCode, FaceSoup, RotationGraph,
};

use super::is_candidate;
use super::ops::split_vertex;

/// All splits of a sphere triangulation whose pieces have degree at least
/// `min_deg`. Splitting at `(i, j)` and `(j, i)` gives mirror images, so only
/// `i < j` is used.
fn sphere_splits(g: &RotationGraph, min_deg: usize) -> Vec<RotationGraph> {
    let rot = g.rotations();
    let mut out = Vec::new();
    for w in 0..rot.len() {
        let d = rot[w].len();
        for i in 0..d {
            for j in i + 1..d {
                let span = j - i;
                if span + 2 < min_deg || d - span + 2 < min_deg {
                    continue;
                }
                out.push(RotationGraph::from_rotations_unchecked(split_vertex(rot, w, i, j)));
            }
        }
    }
    out
}

fn no_separating_triangle(g: &RotationGraph) -> bool {
    g.adjacency().triangle_count() == 2 * g.vertex_count() - 4
}

fn closure(
    seed: RotationGraph,
    n_max: usize,
    min_deg: usize,
    keep: impl Fn(&RotationGraph) -> bool + Sync,
) -> BTreeMap<usize, Vec<RotationGraph>> {
    let mut out = BTreeMap::new();
    let mut layer: BTreeMap<CanonicalCode, RotationGraph> = BTreeMap::new();
    let n0 = seed.vertex_count();
    layer.insert(sphere_canonical_code(&seed), seed);
    for n in n0..=n_max {
        let graphs: Vec<RotationGraph> = std::mem::take(&mut layer).into_values().collect();
        if n < n_max {
            let kids: Vec<Vec<(CanonicalCode, RotationGraph)>> = graphs
                .par_iter()
                .map(|g| {
                    sphere_splits(g, min_deg)
                        .into_iter()
                        .filter(|h| keep(h))
                        .map(|h| (sphere_canonical_code(&h), h))
                        .collect()
                })
                .collect();
            for (code, h) in kids.into_iter().flatten() {
                layer.entry(code).or_insert(h);
            }
        }
        out.insert(n, graphs);
    }
    out
}

/// 4-connected triangulations of the sphere on at most `n_max` vertices, by
/// vertex count, starting at the octahedron.
pub fn four_connected_triangulations(n_max: usize) -> BTreeMap<usize, Vec<RotationGraph>> {
    closure(octahedron(), n_max, 4, no_separating_triangle)
}

/// All triangulations of the sphere on at most `n_max` vertices, starting
/// at `K4`.
pub fn all_triangulations(n_max: usize) -> BTreeMap<usize, Vec<RotationGraph>> {
    let k4 = RotationGraph::new(vec![vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]])
        .expect("K4");
    closure(k4, n_max, 3, |_| true)
}

/// The canvas `g - s` whose outer face is the link of `s`.
fn delete_vertex(g: &RotationGraph, s: usize) -> Option<Canvas> {
    let mut faces: Vec<Vec<usize>> = g.trace_faces().into_iter().filter(|f| !f.contains(&s)).collect();
    faces.insert(0, g.neighbors(s).to_vec());
    let soup = FaceSoup {
        n: g.vertex_count(),
        faces,
        outer: 0,
    };
    soup.into_canvas().ok()
}

fn dedup(list: impl IntoIterator<Item = Canvas>) -> Vec<Canvas> {
    let mut m = BTreeMap::new();
    for c in list {
        m.entry(canonical_code(&c)).or_insert(c);
    }
    m.into_values().collect()
}

/// Canvases with an outer 4-cycle and every triangle facial, with at most
/// `n_max` vertices. Apart from the diamond, these are exactly the
/// 4-connected triangulations minus a vertex of degree four.
pub fn weak_candidates(n_max: usize) -> Vec<Canvas> {
    let mut all = Vec::new();
    if n_max >= 4 {
        all.push(diamond());
    }
    for list in four_connected_triangulations(n_max + 1).values() {
        for g in list {
            for s in 0..g.vertex_count() {
                if g.degree(s) == 4 {
                    all.extend(delete_vertex(g, s));
                }
            }
        }
    }
    dedup(all)
}

/// All `l`-candidates with at most `n_max` vertices, for `l` in `{4, 5}`.
pub fn candidates(l: usize, n_max: usize) -> Vec<Canvas> {
    match l {
        4 => dedup(weak_candidates(n_max).into_iter().filter(is_candidate)),
        5 => {
            let mut all = Vec::new();
            // chordless outer cycle
            for list in four_connected_triangulations(n_max + 1).values() {
                for g in list {
                    for s in 0..g.vertex_count() {
                        if g.degree(s) == 5 {
                            all.extend(delete_vertex(g, s));
                        }
                    }
                }
            }
            // a chord cuts off an ear from a 4-candidate
            for c in candidates(4, n_max.saturating_sub(1)) {
                let k = c.outer().len();
                for i in 0..k {
                    all.push(glue_ear(&c, i));
                }
            }
            dedup(all.into_iter().filter(is_candidate))
        }
        _ => panic!("brute-force candidates only for outer length 4 or 5"),
    }
}

/// Adds a vertex of degree two on the outer edge `outer[i] outer[i+1]`.
fn glue_ear(c: &Canvas, i: usize) -> Canvas {
    let mut soup = c.to_soup();
    let o = c.outer();
    let (a, b) = (o[i], o[(i + 1) % o.len()]);
    let e = soup.add_vertex();
    soup.faces.push(vec![a, b, e]);
    let outer = &mut soup.faces[soup.outer];
    let p = outer.iter().position(|&x| x == a).unwrap();
    outer.insert(p + 1, e);
    soup.into_canvas().expect("ear")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangulation_counts() {
        let all = all_triangulations(9);
        let counts: Vec<usize> = (4..=9).map(|n| all[&n].len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 50]);
        let four = four_connected_triangulations(12);
        let counts: Vec<usize> = (6..=12).map(|n| four[&n].len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 10, 25, 87]);
    }

    #[test]
    fn four_connected_agree_with_filtered_all() {
        let all = all_triangulations(10);
        let four = four_connected_triangulations(10);
        for n in 6..=10 {
            let filtered = all[&n].iter().filter(|g| no_separating_triangle(g)).count();
            assert_eq!(filtered, four[&n].len());
        }
    }

    #[test]
    fn small_candidates() {
        let c4 = candidates(4, 12);
        assert_eq!(c4.len(), 2);
        let c5 = candidates(5, 6);
        assert_eq!(c5.len(), 2);
    }
}
