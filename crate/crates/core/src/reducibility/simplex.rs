//! Exact rational simplex for `max c.x` subject to `Ax = 0`, `sum x <= 1`,
//! `x >= 0`, on sparse rows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type Row = Vec<(usize, BigRational)>;

pub(crate) fn get(row: &Row, j: usize) -> Option<&BigRational> {
    row.binary_search_by_key(&j, |e| e.0).ok().map(|i| &row[i].1)
}

/// `row -= f * pivot`.
pub(crate) fn sub_scaled(row: &mut Row, pivot: &Row, f: &BigRational) {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut k) = (0, 0);
    while i < row.len() || k < pivot.len() {
        let take_row = k == pivot.len() || (i < row.len() && row[i].0 < pivot[k].0);
        let take_pivot = i == row.len() || (k < pivot.len() && pivot[k].0 < row[i].0);
        if take_row {
            out.push(std::mem::take(&mut row[i]));
            i += 1;
        } else if take_pivot {
            out.push((pivot[k].0, -(&pivot[k].1 * f)));
            k += 1;
        } else {
            let v = &row[i].1 - &pivot[k].1 * f;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            k += 1;
        }
    }
    *row = out;
}

pub(crate) fn scale(row: &mut Row, p: &BigRational) {
    for e in row.iter_mut() {
        e.1 /= p;
    }
}

/// Reduced row echelon form of sparse rows over columns `0..cols`: the
/// independent rows, each scaled to a unit entry in its pivot column, which
/// no other row touches. Returns the rows with their pivot columns.
pub(crate) fn reduce(mut rows: Vec<Row>, cols: usize) -> (Vec<Row>, Vec<usize>) {
    let mut kept: Vec<Row> = Vec::new();
    let mut basis: Vec<usize> = Vec::new();
    let mut pivot_row = vec![usize::MAX; cols];
    rows.sort_by_key(|r| r.len());
    for mut row in rows {
        while let Some((j, f)) = row.iter().find(|e| pivot_row[e.0] != usize::MAX).map(|e| (e.0, e.1.clone())) {
            sub_scaled(&mut row, &kept[pivot_row[j]], &f);
        }
        let Some(j) = row.iter().min_by_key(|e| e.1.numer().bits() + e.1.denom().bits()).map(|e| e.0) else {
            continue;
        };
        let p = get(&row, j).expect("pivot entry").clone();
        scale(&mut row, &p);
        for k in kept.iter_mut() {
            if let Some(f) = get(k, j).cloned() {
                sub_scaled(k, &row, &f);
            }
        }
        pivot_row[j] = kept.len();
        kept.push(row);
        basis.push(j);
    }
    (kept, basis)
}

/// The cone program after reducing the equality rows to echelon form.
pub(crate) struct ConeProgram {
    cols: usize,
    /// Independent equality rows, each with a unit entry in its basic column.
    rows: Vec<Row>,
    basis: Vec<usize>,
}

impl ConeProgram {
    pub(crate) fn new(rows: &[Vec<(usize, i64)>], cols: usize) -> Self {
        let rows = rows.iter().map(|r| {
            let mut row: Row = r.iter().map(|&(j, v)| (j, BigRational::from_integer(BigInt::from(v)))).collect();
            row.sort_by_key(|e| e.0);
            row
        });
        let (rows, basis) = reduce(rows.collect(), cols);
        ConeProgram { cols, rows, basis }
    }

    #[cfg(test)]
    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn cols(&self) -> usize {
        self.cols
    }

    pub(crate) fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// The full system: equality rows, then the normalization row with the
    /// slack in column `cols` and the right-hand side in column `cols + 1`.
    fn system(&self) -> Vec<Row> {
        let (slack, rhs) = (self.cols, self.cols + 1);
        let mut rows = self.rows.clone();
        let mut norm: Row = (0..self.cols).map(|j| (j, BigRational::one())).collect();
        norm.push((slack, BigRational::one()));
        norm.push((rhs, BigRational::one()));
        rows.push(norm);
        rows
    }

    /// An optimal point of `max sum_{j in objective} x_j`.
    pub(crate) fn maximize(&self, objective: &[usize]) -> Vec<BigRational> {
        let mut c = vec![false; self.cols + 1];
        for &j in objective {
            c[j] = true;
        }
        self.exact_simplex(&c)
    }

    /// Exact tableau simplex: most negative reduced cost, switching to
    /// Bland's rule after a run of degenerate pivots.
    fn exact_simplex(&self, c: &[bool]) -> Vec<BigRational> {
        let rhs = self.cols + 1;
        let mut rows = self.system();
        let mut basis = self.basis.clone();
        basis.push(self.cols);
        // the normalization row still holds the basic columns
        let norm = rows.len() - 1;
        for i in 0..norm {
            if let Some(f) = get(&rows[norm], basis[i]).cloned() {
                let r = rows[i].clone();
                sub_scaled(&mut rows[norm], &r, &f);
            }
        }
        let mut z: Row = (0..=self.cols).filter(|&j| c[j]).map(|j| (j, -BigRational::one())).collect();
        for (i, r) in rows.iter().enumerate() {
            if let Some(f) = get(&z, basis[i]).cloned() {
                sub_scaled(&mut z, r, &f);
            }
        }
        let mut degenerate = 0;
        loop {
            let mut negative = z.iter().filter(|e| e.0 < rhs && e.1.is_negative());
            let enter = if degenerate > 50 {
                negative.next().map(|e| e.0)
            } else {
                negative.min_by(|a, b| a.1.cmp(&b.1)).map(|e| e.0)
            };
            let Some(enter) = enter else { break };
            let mut leave: Option<(usize, BigRational)> = None;
            for (i, r) in rows.iter().enumerate() {
                let Some(a) = get(r, enter) else { continue };
                if !a.is_positive() {
                    continue;
                }
                let ratio = get(r, rhs).cloned().unwrap_or_else(BigRational::zero) / a;
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            // the normalization row bounds every column
            let (l, ratio) = leave.expect("bounded program");
            degenerate = if ratio.is_zero() { degenerate + 1 } else { 0 };
            let p = get(&rows[l], enter).expect("pivot entry").clone();
            scale(&mut rows[l], &p);
            let pivot = std::mem::take(&mut rows[l]);
            for r in rows.iter_mut() {
                if let Some(f) = get(r, enter).cloned() {
                    sub_scaled(r, &pivot, &f);
                }
            }
            if let Some(f) = get(&z, enter).cloned() {
                sub_scaled(&mut z, &pivot, &f);
            }
            rows[l] = pivot;
            basis[l] = enter;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (i, &j) in basis.iter().enumerate() {
            if j < self.cols {
                if let Some(v) = get(&rows[i], rhs) {
                    x[j] = v.clone();
                }
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn objective_value(x: &[BigRational], objective: &[usize]) -> BigRational {
        objective.iter().fold(BigRational::zero(), |a, &j| a + &x[j])
    }

    #[test]
    fn finds_positive_direction() {
        // x0 = x1 + x2, x1 = x2
        let rows = vec![vec![(0, 1), (1, -1), (2, -1)], vec![(1, 1), (2, -1)]];
        let p = ConeProgram::new(&rows, 4);
        assert_eq!(p.rank(), 2);
        assert_eq!(objective_value(&p.maximize(&[0]), &[0]), q(1, 2));
        assert_eq!(p.exact_simplex(&[true, false, false, false, false]), vec![q(1, 2), q(1, 4), q(1, 4), q(0, 1)]);
    }

    #[test]
    fn zero_when_forced() {
        // x0 + x1 = 0 forces both to zero
        let p = ConeProgram::new(&[vec![(0, 1), (1, 1)]], 3);
        let x = p.maximize(&[0, 1]);
        assert!(x[0].is_zero() && x[1].is_zero());
    }

    #[test]
    fn dependent_rows_are_dropped() {
        let rows = vec![vec![(0, 1), (1, -1)], vec![(0, 2), (1, -2)], vec![(1, 1), (2, -1)]];
        let p = ConeProgram::new(&rows, 3);
        assert_eq!(p.rank(), 2);
        assert_eq!(p.maximize(&[2]), vec![q(1, 3), q(1, 3), q(1, 3)]);
    }

    /// Kernel of the dense matrix restricted to `cols`, when it is one
    /// dimensional.
    fn kernel_line(rows: &[Vec<BigRational>], cols: &[usize]) -> Option<Vec<BigRational>> {
        let mut m: Vec<Vec<BigRational>> = rows.iter().map(|r| cols.iter().map(|&j| r[j].clone()).collect()).collect();
        let mut pivots = Vec::new();
        let mut r0 = 0;
        for c in 0..cols.len() {
            let Some(p) = (r0..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r0, p);
            let pv = m[r0][c].clone();
            for x in m[r0].iter_mut() {
                *x /= &pv;
            }
            for i in 0..m.len() {
                if i != r0 && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    let prow = m[r0].clone();
                    for (x, y) in m[i].iter_mut().zip(&prow) {
                        *x -= y * &f;
                    }
                }
            }
            pivots.push(c);
            r0 += 1;
        }
        let free: Vec<usize> = (0..cols.len()).filter(|c| !pivots.contains(c)).collect();
        if free.len() != 1 {
            return None;
        }
        let mut v = vec![BigRational::zero(); cols.len()];
        v[free[0]] = BigRational::one();
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = -m[i][free[0]].clone();
        }
        Some(v)
    }

    #[test]
    fn optimum_matches_vertex_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let cols = rng.gen_range(2..7);
            let rows: Vec<Vec<(usize, i64)>> = (0..rng.gen_range(1..5))
                .map(|_| (0..cols).map(|j| (j, rng.gen_range(-2..=2))).filter(|e| e.1 != 0).collect())
                .collect();
            let objective: Vec<usize> = (0..cols).filter(|_| rng.gen_bool(0.5)).collect();
            let p = ConeProgram::new(&rows, cols);
            let x = p.maximize(&objective);
            let mut c = vec![false; cols + 1];
            for &j in &objective {
                c[j] = true;
            }
            let slow = p.exact_simplex(&c);
            assert!(x.iter().all(|v| !v.is_negative()));
            let total = x.iter().fold(BigRational::zero(), |a, v| a + v);
            assert!(total <= BigRational::one());
            for r in &rows {
                let s = r.iter().fold(BigRational::zero(), |a, &(j, v)| a + &x[j] * BigRational::from_integer(v.into()));
                assert!(s.is_zero());
            }
            let value = objective_value(&x, &objective);
            assert_eq!(value, objective_value(&slow, &objective));

            // the optimum sits at the origin or at a vertex with sum one,
            // which spans a one dimensional positive kernel on its support
            let dense: Vec<Vec<BigRational>> = rows
                .iter()
                .map(|r| {
                    let mut d = vec![BigRational::zero(); cols];
                    for &(j, v) in r {
                        d[j] = BigRational::from_integer(v.into());
                    }
                    d
                })
                .collect();
            let mut best = BigRational::zero();
            for mask in 1u32..(1 << cols) {
                let support: Vec<usize> = (0..cols).filter(|&j| mask >> j & 1 == 1).collect();
                let Some(v) = kernel_line(&dense, &support) else { continue };
                let v = if v.iter().all(|x| !x.is_negative()) {
                    v
                } else if v.iter().all(|x| !x.is_positive()) {
                    v.into_iter().map(|x| -x).collect()
                } else {
                    continue;
                };
                if v.iter().any(|x| x.is_zero()) {
                    continue;
                }
                let sum = v.iter().fold(BigRational::zero(), |a, x| a + x);
                let obj = support
                    .iter()
                    .zip(&v)
                    .filter(|(j, _)| objective.contains(j))
                    .fold(BigRational::zero(), |a, (_, x)| a + x);
                let obj = obj / sum;
                if obj > best {
                    best = obj;
                }
            }
            assert_eq!(value, best, "{rows:?} {objective:?}");
        }
    }
}
