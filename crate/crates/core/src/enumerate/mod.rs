//! Isomorph-free generation of candidates by inverting star contractions,
//! starting from the candidates without internal vertices.

pub mod brute;
mod frontier;
mod ops;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::plane::{canonical_code, Canvas, PlaneError};

pub use frontier::{enumerate_candidates, CandidateClass, EnumConfig, EnumStats, LayerStats};
pub use ops::{
    apply_star_contraction, diamond10_sites, diamond8_sites, inverse_star_contractions,
    inverse_with_sites, is_candidate, reduction_exists, star_sites, Child, Chord, Contraction,
    Site, StarContractionKind,
};
pub(crate) use ops::{canvas_from, outer_is_face, split_vertex};

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("site does not match the contraction: {0}")]
    Pattern(String),
    #[error("contraction produced a degenerate graph: {0}")]
    Degenerate(#[from] PlaneError),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("seen-set limit of {0} codes reached; checkpoint written")]
    Limit(usize),
    #[error("interrupted after {0} parents; checkpoint written")]
    Interrupted(u64),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// All non-isomorphic `l`-candidates without internal vertices: the
/// triangulations of an `l`-gon in which every triangle is a face.
pub fn base_candidates(l: usize) -> Result<Vec<Canvas>, EnumError> {
    if l < 4 {
        return Err(EnumError::Input(format!("outer length {l} is below 4")));
    }
    let outer: Vec<usize> = (0..l).collect();
    let mut found = BTreeMap::new();
    let mut tri = Vec::new();
    polygon_triangulations(&outer, &mut tri, &mut |faces| {
        let c = Canvas::from_face_list(l, faces, &outer).expect("polygon triangulation");
        if is_candidate(&c) {
            found.entry(canonical_code(&c)).or_insert(c);
        }
    });
    Ok(found.into_values().collect())
}

/// Calls `f` with every triangulation of the polygon `poly`, extending the
/// faces already in `acc`.
fn polygon_triangulations(
    poly: &[usize],
    acc: &mut Vec<Vec<usize>>,
    f: &mut dyn FnMut(&[Vec<usize>]),
) {
    fn rec(
        stack: &mut Vec<Vec<usize>>,
        acc: &mut Vec<Vec<usize>>,
        f: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        let Some(poly) = stack.pop() else {
            f(acc);
            return;
        };
        if poly.len() == 3 {
            acc.push(poly.clone());
            rec(stack, acc, f);
            acc.pop();
            stack.push(poly);
            return;
        }
        // the triangle on the edge poly[0] poly[k-1] with apex poly[m]
        let k = poly.len();
        for m in 1..k - 1 {
            acc.push(vec![poly[0], poly[m], poly[k - 1]]);
            let before = stack.len();
            if m >= 2 {
                stack.push(poly[..=m].to_vec());
            }
            if k - 1 - m >= 2 {
                stack.push(poly[m..].to_vec());
            }
            rec(stack, acc, f);
            stack.truncate(before);
            acc.pop();
        }
        stack.push(poly);
    }
    let mut stack = vec![poly.to_vec()];
    rec(&mut stack, acc, f);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalan_count(l: usize) -> usize {
        let outer: Vec<usize> = (0..l).collect();
        let mut count = 0;
        polygon_triangulations(&outer, &mut Vec::new(), &mut |_| count += 1);
        count
    }

    #[test]
    fn polygon_triangulation_counts() {
        assert_eq!(catalan_count(4), 2);
        assert_eq!(catalan_count(5), 5);
        assert_eq!(catalan_count(6), 14);
        assert_eq!(catalan_count(7), 42);
    }

    #[test]
    fn base_counts() {
        assert_eq!(base_candidates(4).unwrap().len(), 1);
        assert_eq!(base_candidates(5).unwrap().len(), 1);
        assert_eq!(base_candidates(6).unwrap().len(), 3);
        assert!(base_candidates(3).is_err());
    }
}
