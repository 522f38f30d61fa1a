//! The feasibility cone over ring colorings and potential extracts, its
//! boolean restriction, and the reducibility checks built on them.
//!
//! Every constraint is invariant under permuting the four colors, and an
//! extract carries no colors, so the constraints of `psi` and of any color
//! permutation of `psi` coincide. Ring colorings are therefore stored once
//! per orbit.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::coloring::Extender;
use crate::plane::Canvas;

use super::simplex::ConeProgram;
use super::support::maximal_support;
#[cfg(test)]
use num_rational::BigRational;
#[cfg(test)]
use num_traits::Zero;
use super::{extracts_with, quotient, ring_order, ColorPartition, KempeExtract, RegionCache, ReducibilityError};

/// Largest total ring length handled.
pub const MAX_RING_POSITIONS: usize = 12;

/// Largest linear program (rows times columns) solved exactly.
pub const MAX_PROGRAM_CELLS: usize = 4_000_000;

/// Relabels colors in order of first appearance, giving one representative
/// per orbit under color permutations.
pub fn canonical_colors(psi: &[u8]) -> Vec<u8> {
    let mut map = [0u8; 5];
    let mut next = 1;
    psi.iter()
        .map(|&c| {
            if map[c as usize] == 0 {
                map[c as usize] = next;
                next += 1;
            }
            map[c as usize]
        })
        .collect()
}

/// All proper 4-colorings of a cycle of length `len`.
pub fn cycle_colorings(len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; len];
    fn rec(i: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let len = cur.len();
        if i == len {
            if cur[len - 1] != cur[0] {
                out.push(cur.clone());
            }
            return;
        }
        for c in 1..=4 {
            if i > 0 && cur[i - 1] == c {
                continue;
            }
            cur[i] = c;
            rec(i + 1, cur, out);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

/// Ring colorings with their orbits under color permutations, all potential
/// extracts, and the sets `E(psi, pi)`, stored once per orbit.
pub struct ExtractSpace {
    a: usize,
    b: usize,
    reps: Vec<Vec<u8>>,
    extracts: Vec<KempeExtract>,
    extract_ids: HashMap<KempeExtract, u32>,
    sets: Vec<[Vec<u32>; 3]>,
    /// `(orbit, pairing)` pairs whose set contains the extract.
    users: Vec<Vec<(u32, u8)>>,
    psi: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, u32>,
    orbit_of: Vec<u32>,
    /// For each coloring and pairing, the pairing of its orbit
    /// representative with the same set.
    pairing: Vec<[u8; 3]>,
    members: Vec<Vec<u32>>,
}

impl ExtractSpace {
    pub fn new(a: usize, b: usize) -> Result<Self, ReducibilityError> {
        if a < 3 || b < 3 {
            return Err(ReducibilityError::Input("rings need length at least three".into()));
        }
        if a + b > MAX_RING_POSITIONS {
            return Err(ReducibilityError::TooLarge {
                what: "total ring length",
                size: a + b,
                cap: MAX_RING_POSITIONS,
            });
        }
        let kc = cycle_colorings(b);
        let mut psi = Vec::new();
        for q in cycle_colorings(a) {
            for k in &kc {
                let mut p = q.clone();
                p.extend_from_slice(k);
                psi.push(p);
            }
        }
        let index: HashMap<Vec<u8>, u32> = psi.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let reps_set: BTreeSet<Vec<u8>> = psi.iter().map(|p| canonical_colors(p)).collect();
        let reps: Vec<Vec<u8>> = reps_set.into_iter().collect();
        let rep_index: HashMap<&[u8], u32> = reps.iter().enumerate().map(|(i, r)| (r.as_slice(), i as u32)).collect();

        let mut cache = RegionCache::new(a, b);
        let mut extract_ids: HashMap<KempeExtract, u32> = HashMap::new();
        let mut extracts = Vec::new();
        let mut users: Vec<Vec<(u32, u8)>> = Vec::new();
        let mut sets = Vec::with_capacity(reps.len());
        for (o, r) in reps.iter().enumerate() {
            let mut row: [Vec<u32>; 3] = Default::default();
            for pi in ColorPartition::ALL {
                for e in extracts_with(&mut cache, a, b, r, pi) {
                    let id = *extract_ids.entry(e.clone()).or_insert_with(|| {
                        extracts.push(e);
                        users.push(Vec::new());
                        (extracts.len() - 1) as u32
                    });
                    users[id as usize].push((o as u32, pi.index() as u8));
                    row[pi.index()].push(id);
                }
            }
            sets.push(row);
        }

        let mut orbit_of = Vec::with_capacity(psi.len());
        let mut pairing = Vec::with_capacity(psi.len());
        let mut members = vec![Vec::new(); reps.len()];
        for (i, p) in psi.iter().enumerate() {
            let o = rep_index[canonical_colors(p).as_slice()];
            let r = &reps[o as usize];
            let mut m = [0u8; 3];
            for pi in ColorPartition::ALL {
                let beta = quotient(p, pi);
                m[pi.index()] = ColorPartition::ALL
                    .iter()
                    .find(|&&rp| quotient(r, rp) == beta)
                    .expect("some pairing of the representative gives the same quotient")
                    .index() as u8;
            }
            orbit_of.push(o);
            pairing.push(m);
            members[o as usize].push(i as u32);
        }
        Ok(ExtractSpace {
            a,
            b,
            reps,
            extracts,
            extract_ids,
            sets,
            users,
            psi,
            index,
            orbit_of,
            pairing,
            members,
        })
    }

    /// Shared instance for the given ring lengths.
    pub fn shared(a: usize, b: usize) -> Result<Arc<ExtractSpace>, ReducibilityError> {
        static SPACES: OnceLock<Mutex<HashMap<(usize, usize), Arc<ExtractSpace>>>> = OnceLock::new();
        let spaces = SPACES.get_or_init(Default::default);
        if let Some(s) = spaces.lock().expect("space cache").get(&(a, b)) {
            return Ok(s.clone());
        }
        let s = Arc::new(ExtractSpace::new(a, b)?);
        spaces.lock().expect("space cache").insert((a, b), s.clone());
        Ok(s)
    }

    pub fn ring_lengths(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    /// Number of proper colorings of the two rings.
    pub fn coloring_count(&self) -> usize {
        self.psi.len()
    }

    /// Number of ring colorings up to color permutation.
    pub fn orbit_count(&self) -> usize {
        self.reps.len()
    }

    pub fn extract_count(&self) -> usize {
        self.extracts.len()
    }

    pub fn extract(&self, id: usize) -> &KempeExtract {
        &self.extracts[id]
    }

    /// Id of an extract, if it is a potential extract for some coloring.
    pub fn extract_id(&self, e: &KempeExtract) -> Option<usize> {
        self.extract_ids.get(e).map(|&i| i as usize)
    }

    pub fn coloring(&self, i: usize) -> &[u8] {
        &self.psi[i]
    }

    /// Index of a proper ring coloring.
    pub fn coloring_index(&self, psi: &[u8]) -> Option<usize> {
        self.index.get(psi).map(|&i| i as usize)
    }

    /// Extract ids of `E(psi, pi)` for the coloring with index `i`.
    pub fn extracts_for(&self, i: usize, pi: ColorPartition) -> &[u32] {
        &self.sets[self.orbit_of[i] as usize][self.pairing[i][pi.index()] as usize]
    }
}

/// Verdicts for every proper coloring `omega` of the inner ring, listed
/// counterclockwise from the inner canvas's first outer vertex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub theta: Vec<u8>,
    pub omegas: Vec<Vec<u8>>,
    /// Whether `omega` extends to a coloring of the configuration.
    pub extends: Vec<bool>,
    pub infeasible: Vec<bool>,
}

impl FeasibilityReport {
    pub fn all_infeasible(&self) -> bool {
        self.infeasible.iter().all(|&x| x)
    }

    pub fn feasible_count(&self) -> usize {
        self.infeasible.iter().filter(|&&x| !x).count()
    }

    pub fn is_infeasible(&self, omega: &[u8]) -> Option<bool> {
        self.omegas.iter().position(|o| o == omega).map(|i| self.infeasible[i])
    }
}

/// The data shared by the boolean and the exact checks.
pub(crate) struct Instance {
    space: Arc<ExtractSpace>,
    theta: Vec<u8>,
    omegas: Vec<Vec<u8>>,
    extends: Vec<bool>,
    /// Ring colorings forced to zero.
    zero: Vec<bool>,
}

impl Instance {
    pub(crate) fn new(f: &Canvas, theta: &[u8]) -> Result<Self, ReducibilityError> {
        let a = theta.len();
        let b = f.outer_len();
        if a < 3 {
            return Err(ReducibilityError::Input("outer ring needs length at least three".into()));
        }
        for i in 0..a {
            if !(1..=4).contains(&theta[i]) || theta[i] == theta[(i + 1) % a] {
                return Err(ReducibilityError::Input("outer ring coloring is not proper".into()));
            }
        }
        let space = ExtractSpace::shared(a, b)?;
        let ring = ring_order(f);
        let adj = f.graph().rotations();
        let mut memo: HashMap<Vec<u8>, bool> = HashMap::new();
        let mut extends_k = |omega: &[u8]| {
            *memo.entry(canonical_colors(omega)).or_insert_with(|| {
                let mut pre = vec![0u8; f.vertex_count()];
                for (&v, &c) in ring.iter().zip(omega) {
                    pre[v] = c;
                }
                Extender::new(adj, &pre).exists()
            })
        };
        let omegas = cycle_colorings(b);
        let extends: Vec<bool> = omegas.iter().map(|o| extends_k(o)).collect();
        let zero = space
            .psi
            .iter()
            .map(|p| p[..a] == *theta && extends_k(&p[a..]))
            .collect();
        Ok(Instance {
            space,
            theta: theta.to_vec(),
            omegas,
            extends,
            zero,
        })
    }

    fn target(&self, omega: &[u8]) -> usize {
        let mut psi = self.theta.clone();
        psi.extend_from_slice(omega);
        self.space.coloring_index(&psi).expect("every proper ring coloring is indexed")
    }

    /// Fixpoint of the boolean propagation; returns the ring colorings and
    /// extracts forced to zero.
    fn propagate(&self) -> (Vec<bool>, Vec<bool>) {
        let s = &*self.space;
        let mut psi_false = vec![false; s.psi.len()];
        let mut eps_false = vec![false; s.extracts.len()];
        let mut alive: Vec<[u32; 3]> = (0..s.psi.len())
            .map(|i| ColorPartition::ALL.map(|pi| s.extracts_for(i, pi).len() as u32))
            .collect();
        let mut work: Vec<usize> = (0..s.psi.len())
            .filter(|&i| self.zero[i] || alive[i].contains(&0))
            .collect();
        for &i in &work {
            psi_false[i] = true;
        }
        while let Some(i) = work.pop() {
            for pi in ColorPartition::ALL {
                for &e in s.extracts_for(i, pi) {
                    let e = e as usize;
                    if eps_false[e] {
                        continue;
                    }
                    eps_false[e] = true;
                    for &(o, rp) in &s.users[e] {
                        for &j in &s.members[o as usize] {
                            let j = j as usize;
                            for k in 0..3 {
                                if s.pairing[j][k] != rp {
                                    continue;
                                }
                                alive[j][k] -= 1;
                                if alive[j][k] == 0 && !psi_false[j] {
                                    psi_false[j] = true;
                                    work.push(j);
                                }
                            }
                        }
                    }
                }
            }
        }
        (psi_false, eps_false)
    }

    fn report(&self, infeasible: Vec<bool>) -> FeasibilityReport {
        FeasibilityReport {
            theta: self.theta.clone(),
            omegas: self.omegas.clone(),
            extends: self.extends.clone(),
            infeasible,
        }
    }

    fn boolean(&self) -> FeasibilityReport {
        let (psi_false, _) = self.propagate();
        let infeasible = self.omegas.iter().map(|o| psi_false[self.target(o)]).collect();
        self.report(infeasible)
    }

    /// The equality rows of the cone over the live extracts, with the column
    /// of every extract (`usize::MAX` when it is forced to zero).
    fn program_rows(&self, psi_false: &[bool], eps_false: &[bool]) -> Result<(Vec<Vec<(usize, i64)>>, Vec<usize>, usize), ReducibilityError> {
        let s = &*self.space;
        let live: Vec<usize> = (0..s.extracts.len()).filter(|&e| !eps_false[e]).collect();
        let mut column = vec![usize::MAX; s.extracts.len()];
        for (j, &e) in live.iter().enumerate() {
            column[e] = j;
        }
        let pi0 = ColorPartition::ALL[0];
        // the sum over E(psi, pi0) equals the sums over the other pairings
        let mut rows: BTreeSet<Vec<(usize, i64)>> = BTreeSet::new();
        for i in (0..s.psi.len()).filter(|&i| !psi_false[i]) {
            for &other in &ColorPartition::ALL[1..] {
                let mut row: HashMap<usize, i64> = HashMap::new();
                for &e in s.extracts_for(i, pi0).iter().filter(|&&e| !eps_false[e as usize]) {
                    *row.entry(column[e as usize]).or_default() += 1;
                }
                for &e in s.extracts_for(i, other).iter().filter(|&&e| !eps_false[e as usize]) {
                    *row.entry(column[e as usize]).or_default() -= 1;
                }
                let mut row: Vec<(usize, i64)> = row.into_iter().filter(|&(_, v)| v != 0).collect();
                row.sort_unstable();
                if !row.is_empty() {
                    rows.insert(row);
                }
            }
        }
        let rows: Vec<Vec<(usize, i64)>> = rows.into_iter().collect();
        if rows.len() * live.len() > MAX_PROGRAM_CELLS {
            return Err(ReducibilityError::TooLarge {
                what: "cone program",
                size: rows.len() * live.len(),
                cap: MAX_PROGRAM_CELLS,
            });
        }
        Ok((rows, column, live.len()))
    }

    #[cfg(test)]
    pub(crate) fn program(&self) -> Result<ConeProgram, ReducibilityError> {
        let (psi_false, eps_false) = self.propagate();
        let (rows, _, cols) = self.program_rows(&psi_false, &eps_false)?;
        Ok(ConeProgram::new(&rows, cols))
    }

    /// Exact verdicts: an inner coloring is feasible when some point of the
    /// cone gives positive weight to an extract in `E(theta + omega, pi)`.
    fn exact(&self, only: Option<usize>) -> Result<FeasibilityReport, ReducibilityError> {
        let s = &*self.space;
        let (psi_false, eps_false) = self.propagate();
        let (rows, column, cols) = self.program_rows(&psi_false, &eps_false)?;
        let pi0 = ColorPartition::ALL[0];
        let targets: Vec<usize> = self.omegas.iter().map(|o| self.target(o)).collect();
        let mut infeasible: Vec<bool> = targets.iter().map(|&t| psi_false[t]).collect();
        let unknown: Vec<usize> = (0..targets.len())
            .filter(|&i| !infeasible[i] && only.is_none_or(|w| w == i))
            .collect();
        if !unknown.is_empty() {
            let program = ConeProgram::new(&rows, cols);
            let support = maximal_support(&program);
            for i in unknown {
                infeasible[i] = !s
                    .extracts_for(targets[i], pi0)
                    .iter()
                    .any(|&e| column[e as usize] != usize::MAX && support[column[e as usize]]);
            }
        }
        let mut r = self.report(infeasible);
        if let Some(w) = only {
            r.omegas = vec![r.omegas[w].clone()];
            r.extends = vec![r.extends[w]];
            r.infeasible = vec![r.infeasible[w]];
        }
        Ok(r)
    }
}

/// Boolean propagation: the inner ring colorings (of the configuration `f`,
/// whose outer cycle is the inner ring) that are infeasible for the outer
/// ring coloring `theta`.
pub fn boolean_feasibility(f: &Canvas, theta: &[u8]) -> Result<FeasibilityReport, ReducibilityError> {
    Ok(Instance::new(f, theta)?.boolean())
}

/// Exact verdicts for every inner ring coloring, by rational linear
/// programming over the cone.
pub fn exact_feasibility(f: &Canvas, theta: &[u8]) -> Result<FeasibilityReport, ReducibilityError> {
    Instance::new(f, theta)?.exact(None)
}

/// Whether the inner ring coloring `omega` is feasible in the exact cone.
pub fn exact_cone_feasibility(f: &Canvas, theta: &[u8], omega: &[u8]) -> Result<bool, ReducibilityError> {
    let inst = Instance::new(f, theta)?;
    let w = inst
        .omegas
        .iter()
        .position(|o| o == omega)
        .ok_or_else(|| ReducibilityError::Input("inner ring coloring is not proper".into()))?;
    Ok(!inst.exact(Some(w))?.infeasible[0])
}

/// D-reducible: `f` has a vertex off its outer cycle and every coloring of
/// the inner ring is infeasible under boolean propagation.
pub fn is_d_reducible(f: &Canvas, theta: &[u8]) -> Result<bool, ReducibilityError> {
    if f.vertex_count() <= f.outer_len() {
        return Ok(false);
    }
    Ok(boolean_feasibility(f, theta)?.all_infeasible())
}

/// Whether `(f1, vertex_map)` is a `theta`-reducent for `f`: every coloring
/// of `f1` restricted to the images of the inner ring must pull back to an
/// infeasible inner ring coloring. `vertex_map[i]` is the vertex of `f1`
/// matched with inner ring position `i` (counterclockwise order of `f`).
pub fn check_reducent(
    f: &Canvas,
    theta: &[u8],
    f1: &Canvas,
    vertex_map: &[usize],
) -> Result<bool, ReducibilityError> {
    if vertex_map.len() != f.outer_len() {
        return Err(ReducibilityError::Input(format!(
            "vertex map has length {}, inner ring has length {}",
            vertex_map.len(),
            f.outer_len()
        )));
    }
    if let Some(&v) = vertex_map.iter().find(|&&v| v >= f1.vertex_count()) {
        return Err(ReducibilityError::Input(format!("vertex {v} is not in the reducent")));
    }
    let report = boolean_feasibility(f, theta)?;
    let adj = f1.graph().rotations();
    let mut images: Vec<usize> = vertex_map.to_vec();
    images.sort_unstable();
    images.dedup();
    let mut colors = vec![1u8; images.len()];
    loop {
        let mut pre = vec![0u8; f1.vertex_count()];
        for (&v, &c) in images.iter().zip(&colors) {
            pre[v] = c;
        }
        let proper = images.iter().all(|&v| adj[v].iter().all(|&u| pre[u] != pre[v]));
        if proper && Extender::new(adj, &pre).exists() {
            let omega: Vec<u8> = vertex_map.iter().map(|&v| pre[v]).collect();
            // improper pull-backs cannot occur in the replaced graph
            if let Some(false) = report.is_infeasible(&omega) {
                return Ok(false);
            }
        }
        let mut i = 0;
        while i < colors.len() && colors[i] == 4 {
            colors[i] = 1;
            i += 1;
        }
        if i == colors.len() {
            break;
        }
        colors[i] += 1;
    }
    Ok(true)
}

/// Checks a point against the cone constraints.
#[cfg(test)]
pub(crate) fn in_cone(
    space: &ExtractSpace,
    zero: &dyn Fn(&[u8]) -> bool,
    x_psi: &dyn Fn(&[u8]) -> BigRational,
    x_eps: &dyn Fn(usize) -> BigRational,
) -> bool {
    for (i, p) in space.psi.iter().enumerate() {
        let xp = x_psi(p);
        if xp < BigRational::zero() || (zero(p) && !xp.is_zero()) {
            return false;
        }
        for pi in ColorPartition::ALL {
            let sum = space
                .extracts_for(i, pi)
                .iter()
                .fold(BigRational::zero(), |acc, &e| acc + x_eps(e as usize));
            if sum != xp {
                return false;
            }
        }
    }
    (0..space.extracts.len()).all(|e| x_eps(e) >= BigRational::zero())
}
