//! Kempe chain reducibility in the annulus between an outer ring `Q` with a
//! fixed coloring and an inner ring `K` around a configuration: chain
//! extracts of colorings, their realizers, the feasibility cone and its
//! boolean restriction, and D-reducibility and reducent checks.

pub(crate) mod cone;
mod realizer;
pub(crate) mod simplex;
pub(crate) mod support;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{ColoringError, Extender};
use crate::plane::{Canvas, PlaneError, RotationGraph};

pub use cone::{
    boolean_feasibility, canonical_colors, check_reducent, cycle_colorings, exact_cone_feasibility,
    exact_feasibility, is_d_reducible, ExtractSpace, FeasibilityReport, MAX_PROGRAM_CELLS, MAX_RING_POSITIONS,
};
pub use realizer::{marked_edges, realizer_exists, region_partitions, ring_edge, Partition, RegionCache};

#[derive(Debug, Error)]
pub enum ReducibilityError {
    #[error("not an environment: {0}")]
    Environment(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{what} has size {size}, above the cap {cap}")]
    TooLarge { what: &'static str, size: usize, cap: usize },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

fn env_err(msg: impl Into<String>) -> ReducibilityError {
    ReducibilityError::Environment(msg.into())
}

/// A pairing of the colors `1..=4` into two pairs, named by the partner of
/// color 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColorPartition(u8);

impl ColorPartition {
    pub const ALL: [ColorPartition; 3] = [ColorPartition(2), ColorPartition(3), ColorPartition(4)];

    /// The partition pairing 1 with `partner` (2, 3 or 4).
    pub fn with_partner(partner: u8) -> Option<Self> {
        (2..=4).contains(&partner).then_some(ColorPartition(partner))
    }

    pub fn partner_of_one(self) -> u8 {
        self.0
    }

    /// 0 for the pair containing color 1, else 1.
    pub fn class(self, c: u8) -> u8 {
        u8::from(!(c == 1 || c == self.0))
    }

    pub fn equivalent(self, c1: u8, c2: u8) -> bool {
        self.class(c1) == self.class(c2)
    }

    pub fn index(self) -> usize {
        self.0 as usize - 2
    }
}

/// A potential Kempe chain extract `(beta, kappa, sigma)`; the colors it was
/// derived from are not part of it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KempeExtract {
    pub beta: Partition,
    pub kappa: Partition,
    pub sigma: Partition,
}

/// `psi / pi`: positions are equivalent when their colors lie in the same
/// pair.
pub fn quotient(psi: &[u8], pi: ColorPartition) -> Partition {
    let labels: Vec<u8> = psi.iter().map(|&c| pi.class(c)).collect();
    Partition::from_labels(&labels)
}

/// The refinement of `kappa` by equal colors.
pub fn sigma_of(kappa: &Partition, psi: &[u8]) -> Partition {
    let labels: Vec<(u8, u8)> = kappa.labels().iter().copied().zip(psi.iter().copied()).collect();
    Partition::from_labels(&labels)
}

fn check_ring_coloring(a: usize, b: usize, psi: &[u8]) -> Result<(), ReducibilityError> {
    if psi.len() != a + b || a < 3 || b < 3 {
        return Err(ReducibilityError::Input(format!(
            "ring coloring of length {} for rings of length {a} and {b}",
            psi.len()
        )));
    }
    if let Some(&c) = psi.iter().find(|&&c| !(1..=4).contains(&c)) {
        return Err(ColoringError::BadColor(c).into());
    }
    for e in 0..a + b {
        let (u, v) = ring_edge(a, b, e);
        if psi[u] == psi[v] {
            return Err(ColoringError::Improper(u, v).into());
        }
    }
    Ok(())
}

/// Whether `e` satisfies conditions (i) to (iv) for `psi` and `pi`.
pub fn is_potential_extract(a: usize, b: usize, psi: &[u8], pi: ColorPartition, e: &KempeExtract) -> bool {
    check_ring_coloring(a, b, psi).is_ok()
        && e.beta == quotient(psi, pi)
        && e.sigma == sigma_of(&e.kappa, psi)
        && realizer_exists(a, b, &e.beta, &e.kappa)
}

pub(crate) fn extracts_with(cache: &mut RegionCache, a: usize, b: usize, psi: &[u8], pi: ColorPartition) -> Vec<KempeExtract> {
    let beta = quotient(psi, pi);
    let marked = marked_edges(a, b, &beta);
    cache
        .get(&marked)
        .iter()
        .filter(|k| k.refines(&beta))
        .map(|k| KempeExtract {
            beta: beta.clone(),
            kappa: k.clone(),
            sigma: sigma_of(k, psi),
        })
        .collect()
}

/// The set of all potential `pi`-Kempe chain extracts for `psi`, a proper
/// coloring of the outer ring (positions `0..a`) and the inner ring
/// (positions `a..a+b`).
pub fn enumerate_potential_extracts(
    a: usize,
    b: usize,
    psi: &[u8],
    pi: ColorPartition,
) -> Result<Vec<KempeExtract>, ReducibilityError> {
    check_ring_coloring(a, b, psi)?;
    Ok(extracts_with(&mut RegionCache::new(a, b), a, b, psi, pi))
}

/// Counterclockwise order of the outer cycle of `c`, starting at
/// `c.outer()[0]`. Outer walks are stored clockwise.
pub fn ring_order(c: &Canvas) -> Vec<usize> {
    let o = c.outer();
    std::iter::once(o[0]).chain(o[1..].iter().rev().copied()).collect()
}

/// A plane graph in which the cycle `q` bounds the outer face, the cycle
/// `k` bounds an inner face, and every other face is a triangle. Both
/// rings are stored counterclockwise.
#[derive(Clone, Debug)]
pub struct Environment {
    graph: RotationGraph,
    q: Vec<usize>,
    k: Vec<usize>,
}

/// The two parts of a canvas split along a ring, with the original label of
/// every vertex.
#[derive(Clone, Debug)]
pub struct Split {
    pub env: Environment,
    pub inner: Canvas,
    pub env_labels: Vec<usize>,
    pub inner_labels: Vec<usize>,
}

fn is_rotation_of(face: &[usize], cycle: &[usize]) -> bool {
    face.len() == cycle.len()
        && (0..face.len()).any(|s| (0..face.len()).all(|i| face[(s + i) % face.len()] == cycle[i]))
}

impl Environment {
    /// `q` and `k` are given counterclockwise.
    pub fn new(graph: RotationGraph, q: Vec<usize>, k: Vec<usize>) -> Result<Self, ReducibilityError> {
        let n = graph.vertex_count();
        if q.len() < 3 || k.len() < 3 {
            return Err(env_err("rings need length at least three"));
        }
        let mut seen = vec![false; n];
        for &v in q.iter().chain(&k) {
            if v >= n || seen[v] {
                return Err(env_err(format!("vertex {v} repeated or out of range")));
            }
            seen[v] = true;
        }
        let q_walk: Vec<usize> = q.iter().rev().copied().collect();
        let faces = graph.trace_faces();
        let mut found = (false, false);
        for f in &faces {
            if !found.0 && is_rotation_of(f, &q_walk) {
                found.0 = true;
            } else if !found.1 && is_rotation_of(f, &k) {
                found.1 = true;
            } else if f.len() != 3 {
                return Err(env_err(format!("face of length {} other than the rings", f.len())));
            }
        }
        if !found.0 {
            return Err(env_err("outer ring does not bound a face"));
        }
        if !found.1 {
            return Err(env_err("inner ring does not bound a face"));
        }
        if faces.len() + n != graph.edge_count() + 2 {
            return Err(env_err("graph is not connected"));
        }
        Ok(Environment { graph, q, k })
    }

    /// The environment formed by a canvas whose outer face is the outer ring
    /// and which has the inner face `k` (in either direction).
    pub fn from_canvas(c: &Canvas, k: &[usize]) -> Result<Self, ReducibilityError> {
        let rev: Vec<usize> = k.iter().rev().copied().collect();
        let ccw = c
            .graph()
            .trace_faces()
            .into_iter()
            .find(|f| is_rotation_of(f, k) || is_rotation_of(f, &rev))
            .ok_or_else(|| env_err("inner ring does not bound a face"))?;
        let s = ccw.iter().position(|&v| v == k[0]).unwrap_or(0);
        let mut kk = ccw;
        kk.rotate_left(s);
        Environment::new(c.graph().clone(), ring_order(c), kk)
    }

    /// Splits a canvas along a cycle `k` disjoint from its outer cycle into
    /// the environment between the two rings and the canvas inside `k`. The
    /// inner canvas's outer walk starts at the image of `k[0]`, so its
    /// [`ring_order`] lists the inner ring in the environment's order.
    pub fn split(g0: &Canvas, k: &[usize]) -> Result<(Environment, Canvas), ReducibilityError> {
        let s = Environment::split_mapped(g0, k)?;
        Ok((s.env, s.inner))
    }

    /// [`Environment::split`], also returning the original label of every
    /// vertex of both parts.
    pub fn split_mapped(g0: &Canvas, k: &[usize]) -> Result<Split, ReducibilityError> {
        let soup = g0.to_soup();
        let inside = soup.disk_faces(k)?;
        let mut outer_part = soup.clone();
        outer_part.replace_faces(&inside, vec![k.to_vec()]);
        let (env_canvas, map) = outer_part.into_canvas_mapped()?;
        let k_env: Vec<usize> = k
            .iter()
            .map(|&v| map[v].ok_or_else(|| env_err("ring vertex vanished")))
            .collect::<Result<_, _>>()?;
        let env = Environment::from_canvas(&env_canvas, &k_env)?;

        let mut faces = vec![k.to_vec()];
        faces.extend(inside.iter().map(|&i| soup.faces[i].clone()));
        let inner = crate::plane::FaceSoup {
            n: soup.n,
            faces,
            outer: 0,
        };
        let (f, fmap) = inner.into_canvas_mapped()?;
        let start = fmap[k[0]].ok_or_else(|| env_err("ring vertex vanished"))?;
        let pos = f.outer().iter().position(|&v| v == start).unwrap_or(0);
        let mut f = f.with_outer_start(pos);
        let back = |m: &[Option<usize>], len: usize| -> Vec<usize> {
            let mut out = vec![usize::MAX; len];
            for (old, new) in m.iter().enumerate() {
                if let Some(n) = new {
                    out[*n] = old;
                }
            }
            out
        };
        let env_labels = back(&map, env.vertex_count());
        let inner_labels = back(&fmap, f.vertex_count());
        // list the inner ring in the environment's direction
        let env_k: Vec<usize> = env.k.iter().map(|&v| env_labels[v]).collect();
        let f_k: Vec<usize> = ring_order(&f).iter().map(|&v| inner_labels[v]).collect();
        if env_k != f_k {
            f = f.mirrored();
        }
        Ok(Split {
            env,
            inner: f,
            env_labels,
            inner_labels,
        })
    }

    pub fn graph(&self) -> &RotationGraph {
        &self.graph
    }

    pub fn q(&self) -> &[usize] {
        &self.q
    }

    pub fn k(&self) -> &[usize] {
        &self.k
    }

    /// Outer ring then inner ring: the vertex at each ring position.
    pub fn ring(&self) -> Vec<usize> {
        self.q.iter().chain(&self.k).copied().collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Calls `f` on every proper 4-coloring (colors `1..=4`).
    pub fn for_each_coloring(&self, f: &mut dyn FnMut(&[u8])) {
        let pre = vec![0u8; self.vertex_count()];
        Extender::new(self.graph.rotations(), &pre).for_each(&mut |c| {
            f(c);
            true
        });
    }

    /// Restriction of a coloring to the ring positions.
    pub fn ring_coloring(&self, phi: &[u8]) -> Vec<u8> {
        self.ring().iter().map(|&v| phi[v]).collect()
    }
}

/// The `pi`-Kempe chain extract of a proper 4-coloring `phi` of the
/// environment: `kappa` joins ring vertices in the same component of the
/// subgraph of edges whose ends have colors in the same pair.
pub fn extract_of_coloring(env: &Environment, phi: &[u8], pi: ColorPartition) -> Result<KempeExtract, ReducibilityError> {
    let g = &env.graph;
    let n = g.vertex_count();
    if phi.len() != n {
        return Err(ColoringError::Length { expected: n, got: phi.len() }.into());
    }
    for v in 0..n {
        if !(1..=4).contains(&phi[v]) {
            return Err(ColoringError::BadColor(phi[v]).into());
        }
        for &u in g.neighbors(v) {
            if phi[u] == phi[v] {
                return Err(ColoringError::Improper(u.min(v), u.max(v)).into());
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = s;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &u in g.neighbors(v) {
                if comp[u] == usize::MAX && pi.equivalent(phi[u], phi[v]) {
                    comp[u] = s;
                    stack.push(u);
                }
            }
        }
    }
    let ring = env.ring();
    let psi = env.ring_coloring(phi);
    let kappa = Partition::from_labels(&ring.iter().map(|&v| comp[v]).collect::<Vec<_>>());
    Ok(KempeExtract {
        beta: quotient(&psi, pi),
        sigma: sigma_of(&kappa, &psi),
        kappa,
    })
}
