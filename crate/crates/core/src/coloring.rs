//! Exact 4-coloring extension: counting extensions of precolorings,
//! forbidding profiles of outer 4-cycles, Kempe recoloring and Fisk parity.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plane::{Canvas, RotationGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("precoloring is improper on edge {0}-{1}")]
    Improper(usize, usize),
    #[error("color {0} is not in 1..=4")]
    BadColor(u8),
    #[error("precoloring has {got} entries for {expected} vertices")]
    Length { expected: usize, got: usize },
    #[error("outer face has length {0}, expected 4")]
    OuterLength(usize),
    #[error("the outer 4-cycle has a chord")]
    ChordedOuter,
    #[error("not a triangulation of the sphere")]
    NotTriangulation,
    #[error("invalid input: {0}")]
    Input(String),
}

/// Type of a proper 4-coloring of the outer 4-cycle `x1 x2 x3 x4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ColoringType {
    /// Four distinct colors.
    Rainbow,
    /// `x1` and `x3` share a color, `x2` and `x4` do not.
    Diagonal1,
    /// `x2` and `x4` share a color, `x1` and `x3` do not.
    Diagonal2,
    /// Both opposite pairs share colors.
    Bichromatic,
}

impl ColoringType {
    pub const ALL: [ColoringType; 4] = [
        ColoringType::Rainbow,
        ColoringType::Diagonal1,
        ColoringType::Diagonal2,
        ColoringType::Bichromatic,
    ];

    /// Type of the colors on `x1 x2 x3 x4`.
    pub fn of(colors: [u8; 4]) -> ColoringType {
        match (colors[0] == colors[2], colors[1] == colors[3]) {
            (false, false) => ColoringType::Rainbow,
            (true, false) => ColoringType::Diagonal1,
            (false, true) => ColoringType::Diagonal2,
            (true, true) => ColoringType::Bichromatic,
        }
    }

    /// A coloring of the 4-cycle with this type.
    pub fn representative(self) -> [u8; 4] {
        match self {
            ColoringType::Rainbow => [1, 2, 3, 4],
            ColoringType::Diagonal1 => [1, 2, 1, 3],
            ColoringType::Diagonal2 => [1, 2, 3, 2],
            ColoringType::Bichromatic => [1, 2, 1, 2],
        }
    }

    /// Neighbors in the auxiliary cycle rainbow, diagonal 1, bichromatic,
    /// diagonal 2.
    pub fn is_adjacent(self, other: ColoringType) -> bool {
        use ColoringType::*;
        matches!(
            (self, other),
            (Rainbow, Diagonal1)
                | (Rainbow, Diagonal2)
                | (Diagonal1, Rainbow)
                | (Diagonal2, Rainbow)
                | (Bichromatic, Diagonal1)
                | (Bichromatic, Diagonal2)
                | (Diagonal1, Bichromatic)
                | (Diagonal2, Bichromatic)
        )
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ColoringType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ColoringType::Rainbow => "rainbow",
            ColoringType::Diagonal1 => "diagonal1",
            ColoringType::Diagonal2 => "diagonal2",
            ColoringType::Bichromatic => "bichromatic",
        };
        f.write_str(s)
    }
}

/// Partial assignment of colors 1..=4; 0 marks an uncolored vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Precoloring {
    colors: Vec<u8>,
}

impl Precoloring {
    pub fn empty(n: usize) -> Self {
        Precoloring { colors: vec![0; n] }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, u8)]) -> Self {
        let mut p = Self::empty(n);
        for &(v, c) in pairs {
            p.colors[v] = c;
        }
        p
    }

    /// A total coloring given as a color per vertex.
    pub fn total(colors: Vec<u8>) -> Self {
        Precoloring { colors }
    }

    /// Colors the outer cycle of `c` with `colors` in outer order.
    pub fn on_outer(c: &Canvas, colors: &[u8]) -> Self {
        let mut p = Self::empty(c.vertex_count());
        for (&v, &col) in c.outer().iter().zip(colors) {
            p.colors[v] = col;
        }
        p
    }

    pub fn set(&mut self, v: usize, c: u8) {
        self.colors[v] = c;
    }

    pub fn get(&self, v: usize) -> Option<u8> {
        match self.colors[v] {
            0 => None,
            c => Some(c),
        }
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(|&c| c != 0)
    }

    /// Checks colors are in range and the assignment is proper.
    pub fn validate(&self, adj: &[Vec<usize>]) -> Result<(), ColoringError> {
        if self.colors.len() != adj.len() {
            return Err(ColoringError::Length {
                expected: adj.len(),
                got: self.colors.len(),
            });
        }
        for (v, &c) in self.colors.iter().enumerate() {
            if c > 4 {
                return Err(ColoringError::BadColor(c));
            }
            if c == 0 {
                continue;
            }
            for &u in &adj[v] {
                if self.colors[u] == c {
                    return Err(ColoringError::Improper(v.min(u), v.max(u)));
                }
            }
        }
        Ok(())
    }
}

/// Backtracking search over extensions of a precoloring. At each step the
/// uncolored vertex with the fewest available colors is branched on, so
/// forced vertices are colored first and dead ends are detected early.
pub struct Extender<'a> {
    adj: &'a [Vec<usize>],
    colors: Vec<u8>,
}

impl<'a> Extender<'a> {
    pub fn new(adj: &'a [Vec<usize>], pre: &[u8]) -> Self {
        Extender {
            adj,
            colors: pre.to_vec(),
        }
    }

    fn available(&self, v: usize) -> u8 {
        let mut used = 0u8;
        for &u in &self.adj[v] {
            let c = self.colors[u];
            if c != 0 {
                used |= 1 << (c - 1);
            }
        }
        0xF & !used
    }

    /// Calls `f` on every extension until it returns `false`. Returns
    /// `false` if stopped early.
    pub fn for_each(&mut self, f: &mut dyn FnMut(&[u8]) -> bool) -> bool {
        let mut best: Option<(usize, u8)> = None;
        for v in 0..self.colors.len() {
            if self.colors[v] != 0 {
                continue;
            }
            let a = self.available(v);
            if a == 0 {
                return true;
            }
            let k = a.count_ones();
            if best.is_none_or(|(_, b)| k < b.count_ones()) {
                best = Some((v, a));
                if k == 1 {
                    break;
                }
            }
        }
        let Some((v, mut a)) = best else {
            return f(&self.colors);
        };
        while a != 0 {
            let c = a.trailing_zeros() as u8 + 1;
            a &= a - 1;
            self.colors[v] = c;
            let go_on = self.for_each(f);
            self.colors[v] = 0;
            if !go_on {
                return false;
            }
        }
        true
    }

    pub fn count(&mut self) -> u64 {
        let mut n = 0u64;
        self.for_each(&mut |_| {
            n += 1;
            true
        });
        n
    }

    pub fn exists(&mut self) -> bool {
        !self.for_each(&mut |_| false)
    }

    pub fn find(&mut self) -> Option<Vec<u8>> {
        let mut out = None;
        self.for_each(&mut |c| {
            out = Some(c.to_vec());
            false
        });
        out
    }
}

/// Exact number of proper 4-colorings of `c` extending `p`.
pub fn count_extensions(c: &Canvas, p: &Precoloring) -> Result<u64, ColoringError> {
    let adj = c.graph().rotations();
    p.validate(adj)?;
    Ok(Extender::new(adj, p.as_slice()).count())
}

/// Whether `p` extends to a proper 4-coloring of the graph.
pub fn extends(g: &RotationGraph, p: &Precoloring) -> Result<bool, ColoringError> {
    let adj = g.rotations();
    p.validate(adj)?;
    Ok(Extender::new(adj, p.as_slice()).exists())
}

/// Which coloring types of the outer 4-cycle fail to extend.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddingProfile {
    pub forbids_rainbow: bool,
    /// Index 0: `x1`-diagonal (`x1` and `x3` equal); index 1: `x2`-diagonal.
    pub forbids_diagonal: [bool; 2],
    pub forbids_bichromatic: bool,
    /// Number of extensions of the representative coloring of each type, in
    /// the order of [`ColoringType::ALL`].
    pub extension_counts: [u64; 4],
}

impl ForbiddingProfile {
    pub fn forbids(&self, t: ColoringType) -> bool {
        self.extension_counts[t.index()] == 0
    }

    pub fn forbids_any_diagonal(&self) -> bool {
        self.forbids_diagonal[0] || self.forbids_diagonal[1]
    }

    /// Rainbow- or diagonal-forbidding.
    pub fn is_restrictive(&self) -> bool {
        self.forbids_rainbow || self.forbids_any_diagonal()
    }

    pub fn forbidden_types(&self) -> Vec<ColoringType> {
        ColoringType::ALL
            .into_iter()
            .filter(|&t| self.forbids(t))
            .collect()
    }

    /// Human-readable summary such as `diagonal+bichromatic forbidding`.
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if self.forbids_rainbow {
            parts.push("rainbow");
        }
        if self.forbids_any_diagonal() {
            parts.push("diagonal");
        }
        if self.forbids_bichromatic {
            parts.push("bichromatic");
        }
        if parts.is_empty() {
            "nothing forbidden".to_string()
        } else {
            format!("{} forbidding", parts.join("+"))
        }
    }

    fn from_counts(extension_counts: [u64; 4]) -> Self {
        ForbiddingProfile {
            forbids_rainbow: extension_counts[0] == 0,
            forbids_diagonal: [extension_counts[1] == 0, extension_counts[2] == 0],
            forbids_bichromatic: extension_counts[3] == 0,
            extension_counts,
        }
    }
}

fn check_outer4(c: &Canvas) -> Result<(), ColoringError> {
    if c.outer_len() != 4 {
        return Err(ColoringError::OuterLength(c.outer_len()));
    }
    Ok(())
}

/// Representative boundary coloring of type `t` as a precoloring of `c`,
/// or `None` if the outer cycle's chords make it improper.
fn representative(c: &Canvas, t: ColoringType) -> Option<Precoloring> {
    let p = Precoloring::on_outer(c, &t.representative());
    p.validate(c.graph().rotations()).ok().map(|_| p)
}

/// Full profile with extension counts of each representative coloring.
pub fn forbidding_profile(c: &Canvas) -> Result<ForbiddingProfile, ColoringError> {
    check_outer4(c)?;
    let adj = c.graph().rotations();
    let mut counts = [0u64; 4];
    for t in ColoringType::ALL {
        if let Some(p) = representative(c, t) {
            counts[t.index()] = Extender::new(adj, p.as_slice()).count();
        }
    }
    Ok(ForbiddingProfile::from_counts(counts))
}

/// Forbidden types only, decided by existence searches (faster than
/// [`forbidding_profile`]).
pub fn forbidden_types(c: &Canvas) -> Result<Vec<ColoringType>, ColoringError> {
    check_outer4(c)?;
    let adj = c.graph().rotations();
    Ok(ColoringType::ALL
        .into_iter()
        .filter(|&t| match representative(c, t) {
            Some(p) => !Extender::new(adj, p.as_slice()).exists(),
            None => true,
        })
        .collect())
}

/// Whether bichromatic colorings of the outer 4-cycle fail to extend.
pub fn is_bichromatic_forbidding(c: &Canvas) -> Result<bool, ColoringError> {
    check_outer4(c)?;
    Ok(match representative(c, ColoringType::Bichromatic) {
        Some(p) => !Extender::new(c.graph().rotations(), p.as_slice()).exists(),
        None => true,
    })
}

/// Profile computed by enumerating every proper 4-coloring of the canvas.
pub fn brute_force_profile(c: &Canvas) -> Result<ForbiddingProfile, ColoringError> {
    check_outer4(c)?;
    let n = c.vertex_count();
    let adj = c.graph().rotations();
    let outer: Vec<usize> = c.outer().to_vec();
    let mut counts = [0u64; 4];
    let mut colors = vec![1u8; n];
    'outer: loop {
        let proper = (0..n).all(|v| adj[v].iter().all(|&u| colors[u] != colors[v]));
        if proper {
            let o = [
                colors[outer[0]],
                colors[outer[1]],
                colors[outer[2]],
                colors[outer[3]],
            ];
            let t = ColoringType::of(o);
            if o == t.representative() {
                counts[t.index()] += 1;
            }
        }
        for v in 0..n {
            if colors[v] < 4 {
                colors[v] += 1;
                continue 'outer;
            }
            colors[v] = 1;
        }
        break;
    }
    Ok(ForbiddingProfile::from_counts(counts))
}

/// Types realized by some 4-coloring, for canvases with an induced outer
/// 4-cycle.
pub fn type_coverage(c: &Canvas) -> Result<BTreeSet<ColoringType>, ColoringError> {
    check_outer4(c)?;
    let o = c.outer();
    if c.has_edge(o[0], o[2]) || c.has_edge(o[1], o[3]) {
        return Err(ColoringError::ChordedOuter);
    }
    let forbidden = forbidden_types(c)?;
    Ok(ColoringType::ALL
        .into_iter()
        .filter(|t| !forbidden.contains(t))
        .collect())
}

/// Type of a total coloring on the outer 4-cycle of `c`.
pub fn outer_type(c: &Canvas, colors: &[u8]) -> ColoringType {
    let o = c.outer();
    ColoringType::of([colors[o[0]], colors[o[1]], colors[o[2]], colors[o[3]]])
}

/// Swaps colors `a` and `b` on the Kempe component containing `start`.
pub fn kempe_swap(adj: &[Vec<usize>], colors: &mut [u8], start: usize, a: u8, b: u8) {
    if colors[start] != a && colors[start] != b {
        return;
    }
    let mut seen = vec![false; colors.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut comp = Vec::new();
    while let Some(v) = stack.pop() {
        comp.push(v);
        for &u in &adj[v] {
            if !seen[u] && (colors[u] == a || colors[u] == b) {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    for v in comp {
        colors[v] = if colors[v] == a { b } else { a };
    }
}

/// A proper coloring whose outer type is adjacent to the input's type in
/// the cycle rainbow, diagonal 1, bichromatic, diagonal 2, obtained by
/// exchanging two colors on one Kempe component through an outer vertex.
pub fn kempe_adjacent_recolor(c: &Canvas, coloring: &Precoloring) -> Result<Precoloring, ColoringError> {
    check_outer4(c)?;
    let adj = c.graph().rotations();
    coloring.validate(adj)?;
    if !coloring.is_total() {
        return Err(ColoringError::Input("coloring must be total".into()));
    }
    let t0 = outer_type(c, coloring.as_slice());
    for &x in c.outer() {
        for a in 1..=4u8 {
            for b in (a + 1)..=4u8 {
                let mut col = coloring.as_slice().to_vec();
                kempe_swap(adj, &mut col, x, a, b);
                if outer_type(c, &col).is_adjacent(t0) {
                    return Ok(Precoloring::total(col));
                }
            }
        }
    }
    Err(ColoringError::Input("no adjacent Kempe recoloring exists".into()))
}

/// Fisk parity: in a proper 4-coloring of a sphere triangulation, the
/// numbers of odd-degree vertices of each color have equal parity.
pub fn fisk_parity_check(g: &RotationGraph, colors: &[u8]) -> Result<bool, ColoringError> {
    if g.trace_faces().iter().any(|f| f.len() != 3) {
        return Err(ColoringError::NotTriangulation);
    }
    let p = Precoloring::total(colors.to_vec());
    p.validate(g.rotations())?;
    if !p.is_total() {
        return Err(ColoringError::Input("coloring must be total".into()));
    }
    Ok(fisk_counts(g, colors).iter().all(|&n| n % 2 == fisk_counts(g, colors)[0] % 2))
}

/// Number of odd-degree vertices of each color 1..=4.
pub fn fisk_counts(g: &RotationGraph, colors: &[u8]) -> [usize; 4] {
    let mut n = [0usize; 4];
    for v in 0..g.vertex_count() {
        if g.degree(v) % 2 == 1 {
            n[colors[v] as usize - 1] += 1;
        }
    }
    n
}

/// Whether a precoloring of a facial path extends. The path (given by its
/// vertices) must run along a face boundary and either have at most two
/// edges, or three edges with equal end colors.
pub fn path_precoloring_extends(
    c: &Canvas,
    p: &Precoloring,
    path: &[usize],
) -> Result<bool, ColoringError> {
    let edges = path.len().saturating_sub(1);
    if path.is_empty() || edges > 3 {
        return Err(ColoringError::Input("path must have at most three edges".into()));
    }
    if !is_facial_path(c, path) {
        return Err(ColoringError::Input("path does not run along a face".into()));
    }
    for (v, &col) in p.as_slice().iter().enumerate() {
        if (col != 0) != path.contains(&v) {
            return Err(ColoringError::Input("precoloring must color exactly the path".into()));
        }
    }
    if edges == 3 && p.get(path[0]) != p.get(path[3]) {
        return Err(ColoringError::Input(
            "a path with three edges needs equal end colors".into(),
        ));
    }
    Ok(count_extensions(c, p)? > 0)
}

fn is_facial_path(c: &Canvas, path: &[usize]) -> bool {
    if path.len() == 1 {
        return true;
    }
    let mut faces = c.graph().trace_faces();
    faces.push(c.outer().to_vec());
    faces.iter().any(|f| {
        let k = f.len();
        if k < path.len() {
            return false;
        }
        (0..k).any(|s| {
            let fwd = (0..path.len()).all(|i| f[(s + i) % k] == path[i]);
            let bwd = (0..path.len()).all(|i| f[(s + k - i) % k] == path[i]);
            fwd || bwd
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{diamond, w4};
    use proptest::prelude::*;

    #[test]
    fn w4_rainbow_rim() {
        let w = w4();
        let p = Precoloring::on_outer(&w, &[1, 2, 3, 4]);
        assert_eq!(count_extensions(&w, &p).unwrap(), 0);
    }

    #[test]
    fn diamond_counts() {
        let d = diamond();
        let p = Precoloring::on_outer(&d, &[1, 2, 1, 3]);
        assert_eq!(count_extensions(&d, &p), Err(ColoringError::Improper(0, 2)));
        let p = Precoloring::on_outer(&d, &[1, 2, 3, 2]);
        assert_eq!(count_extensions(&d, &p).unwrap(), 1);
    }

    #[test]
    fn profiles_of_small_canvases() {
        let d = forbidding_profile(&diamond()).unwrap();
        assert!(d.forbids_diagonal[0] && !d.forbids_diagonal[1]);
        assert!(d.forbids_bichromatic && !d.forbids_rainbow);
        let w = forbidding_profile(&w4()).unwrap();
        assert!(w.forbids_rainbow && !w.forbids_any_diagonal() && !w.forbids_bichromatic);
        assert_eq!(d, brute_force_profile(&diamond()).unwrap());
        assert_eq!(w, brute_force_profile(&w4()).unwrap());
    }

    #[test]
    fn coverage_of_w4_and_square() {
        use ColoringType::*;
        let cov = type_coverage(&w4()).unwrap();
        assert_eq!(cov, [Diagonal1, Diagonal2, Bichromatic].into_iter().collect());
        let sq = Canvas::from_face_list(4, &[vec![0, 1, 2, 3]], &[0, 1, 2, 3]).unwrap();
        assert_eq!(type_coverage(&sq).unwrap().len(), 4);
        assert_eq!(type_coverage(&diamond()), Err(ColoringError::ChordedOuter));
    }

    #[test]
    fn kempe_recolor_w4() {
        let w = w4();
        let col = Precoloring::total(vec![1, 2, 1, 3, 4]);
        let out = kempe_adjacent_recolor(&w, &col).unwrap();
        let t = outer_type(&w, out.as_slice());
        assert!(t == ColoringType::Rainbow || t == ColoringType::Bichromatic);
        let sq = Canvas::from_face_list(4, &[vec![0, 1, 2, 3]], &[0, 1, 2, 3]).unwrap();
        let out = kempe_adjacent_recolor(&sq, &Precoloring::total(vec![1, 2, 1, 2])).unwrap();
        let t = outer_type(&sq, out.as_slice());
        assert!(t == ColoringType::Diagonal1 || t == ColoringType::Diagonal2);
    }

    #[test]
    fn fisk_on_octahedron_and_icosahedron() {
        let oct = crate::construct::octahedron();
        let col = Extender::new(oct.rotations(), &[0; 6]).find().unwrap();
        assert!(fisk_parity_check(&oct, &col).unwrap());
        assert_eq!(fisk_counts(&oct, &col), [0; 4]);
        let ico = crate::construct::icosahedron();
        let col = Extender::new(ico.rotations(), &[0; 12]).find().unwrap();
        assert!(fisk_parity_check(&ico, &col).unwrap());
        assert_eq!(fisk_counts(&ico, &col).iter().sum::<usize>(), 12);
    }

    #[test]
    fn facial_paths() {
        let w = w4();
        let p = Precoloring::from_pairs(5, &[(0, 1), (1, 2), (2, 1)]);
        assert!(path_precoloring_extends(&w, &p, &[0, 1, 2]).unwrap());
        let p = Precoloring::from_pairs(5, &[(0, 1), (1, 2), (2, 3), (3, 1)]);
        assert!(path_precoloring_extends(&w, &p, &[0, 1, 2, 3]).is_err());
        let p = Precoloring::from_pairs(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert!(path_precoloring_extends(&w, &p, &[0, 1, 2, 3]).is_err());
    }

    proptest! {
        #[test]
        fn counts_invariant_under_color_permutation(seed in 0usize..24, t in 0usize..4) {
            let perms: Vec<[u8; 4]> = permutations4();
            let perm = perms[seed];
            let c = crate::construct::make_named("F_4").unwrap();
            let rep = ColoringType::ALL[t].representative();
            let p1 = Precoloring::on_outer(&c, &rep);
            let mapped: Vec<u8> = rep.iter().map(|&x| perm[x as usize - 1]).collect();
            let p2 = Precoloring::on_outer(&c, &mapped);
            prop_assert_eq!(count_extensions(&c, &p1).unwrap(), count_extensions(&c, &p2).unwrap());
        }
    }

    pub(crate) fn permutations4() -> Vec<[u8; 4]> {
        let mut out = Vec::new();
        for a in 1..=4u8 {
            for b in 1..=4u8 {
                for c in 1..=4u8 {
                    for d in 1..=4u8 {
                        let p = [a, b, c, d];
                        let mut s = p;
                        s.sort_unstable();
                        if s == [1, 2, 3, 4] {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}
