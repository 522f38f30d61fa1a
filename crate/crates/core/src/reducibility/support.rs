//! The maximal support of the cone `{x >= 0 : Ax = 0}`: the set of columns
//! that some point of the cone makes positive.
//!
//! A floating point primal-dual interior point method on the normalized
//! cone converges to a strictly complementary pair, which proposes the
//! support together with Farkas multipliers for the remaining columns. Both
//! halves are then certified in exact arithmetic: a rational kernel point
//! positive on the whole support, and a rational combination of the rows
//! vanishing on the support and strictly positive elsewhere. When either
//! certificate fails, the exact simplex decides.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::simplex::{reduce, ConeProgram, Row};

/// Denominator used when rounding floating point certificates.
const ROUNDING: i64 = 1 << 40;

pub(crate) fn maximal_support(program: &ConeProgram) -> Vec<bool> {
    certified_support(program).unwrap_or_else(|| simplex_support(program))
}

/// Grows the support one optimal point at a time until the remaining
/// columns admit no positive weight.
pub(crate) fn simplex_support(program: &ConeProgram) -> Vec<bool> {
    let mut support = vec![false; program.cols()];
    loop {
        let objective: Vec<usize> = (0..program.cols()).filter(|&j| !support[j]).collect();
        if objective.is_empty() {
            return support;
        }
        let x = program.maximize(&objective);
        let mut grew = false;
        for (j, v) in x.iter().enumerate() {
            if !v.is_zero() && !support[j] {
                support[j] = true;
                grew = true;
            }
        }
        if !grew {
            return support;
        }
    }
}

/// The support proposed by the interior point method, if both exact
/// certificates check out.
pub(crate) fn certified_support(program: &ConeProgram) -> Option<Vec<bool>> {
    let (g, n) = (program.rows(), program.cols());
    if g.is_empty() {
        return Some(vec![true; n]);
    }
    let (x, s, y) = interior_point(g, n);
    let support: Vec<bool> = (0..n).map(|j| x[j] > s[j]).collect();
    if support.iter().any(|&b| b) {
        kernel_point(g, n, &support, &x)?;
    }
    if support.iter().any(|&b| !b) {
        let z: Vec<f64> = y[..g.len()].iter().map(|v| -v).collect();
        separating_combination(g, n, &support, &z)?;
    }
    Some(support)
}

fn round(v: f64, scale: f64) -> Option<BigRational> {
    let r = (v / scale * ROUNDING as f64).round();
    if !r.is_finite() {
        return None;
    }
    Some(BigRational::new(BigInt::from(r as i64), BigInt::from(ROUNDING)))
}

fn dot(row: &Row, x: &[BigRational]) -> BigRational {
    row.iter().fold(BigRational::zero(), |a, (j, v)| a + v * &x[*j])
}

/// A rational point with `Gx = 0`, positive exactly on `support`, near the
/// floating point guess `approx`.
pub(crate) fn kernel_point(g: &[Row], n: usize, support: &[bool], approx: &[f64]) -> Option<Vec<BigRational>> {
    let restricted: Vec<Row> = g.iter().map(|r| r.iter().filter(|e| support[e.0]).cloned().collect()).collect();
    let (rows, pivots) = reduce(restricted, n);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let scale = (0..n).filter(|&j| support[j]).map(|j| approx[j].abs()).fold(0.0, f64::max);
    if scale <= 0.0 {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for j in (0..n).filter(|&j| support[j] && !is_pivot[j]) {
        x[j] = round(approx[j], scale)?;
        if !x[j].is_positive() {
            return None;
        }
    }
    for (r, &p) in rows.iter().zip(&pivots) {
        let v = -r.iter().filter(|e| e.0 != p).fold(BigRational::zero(), |a, (j, v)| a + v * &x[*j]);
        if !v.is_positive() {
            return None;
        }
        x[p] = v;
    }
    g.iter().all(|r| dot(r, &x).is_zero()).then_some(x)
}

/// Rational multipliers `z` with `z.G` zero on `support` and strictly
/// positive on every other column, near the floating point guess `approx`.
pub(crate) fn separating_combination(g: &[Row], n: usize, support: &[bool], approx: &[f64]) -> Option<Vec<BigRational>> {
    let m = g.len();
    let mut columns: Vec<Row> = vec![Vec::new(); n];
    for (i, r) in g.iter().enumerate() {
        for (j, v) in r {
            columns[*j].push((i, v.clone()));
        }
    }
    let on_support: Vec<Row> = (0..n).filter(|&j| support[j]).map(|j| columns[j].clone()).collect();
    let (rows, pivots) = reduce(on_support, m);
    let mut is_pivot = vec![false; m];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let scale = approx.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale <= 0.0 {
        return None;
    }
    let mut z = vec![BigRational::zero(); m];
    for i in (0..m).filter(|&i| !is_pivot[i]) {
        z[i] = round(approx[i], scale)?;
    }
    for (r, &p) in rows.iter().zip(&pivots) {
        z[p] = -r.iter().filter(|e| e.0 != p).fold(BigRational::zero(), |a, (i, v)| a + v * &z[*i]);
    }
    (0..n)
        .all(|j| {
            let v = dot(&columns[j], &z);
            if support[j] {
                v.is_zero()
            } else {
                v.is_positive()
            }
        })
        .then_some(z)
}

/// Mehrotra predictor-corrector on
/// `min w` subject to `Gx = 0`, `sum x + w = 1`, `x, w >= 0`.
/// Returns the primal point, the dual slacks and the dual multipliers, with
/// the variable `w` last in the first two.
fn interior_point(g: &[Row], cols: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let m = g.len() + 1;
    let n = cols + 1;
    let norm = g.len();
    let mut a: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, r) in g.iter().enumerate() {
        for (j, v) in r {
            a[*j].push((i, v.to_f64().unwrap_or(0.0)));
        }
    }
    for col in a.iter_mut() {
        col.push((norm, 1.0));
    }
    let mut c = vec![0.0; n];
    c[cols] = 1.0;
    let mut b = vec![0.0; m];
    b[norm] = 1.0;

    let (mut x, mut s, mut y) = (vec![1.0; n], vec![1.0; n], vec![0.0; m]);
    let mul = |v: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; m];
        for (col, vj) in a.iter().zip(v) {
            for &(i, aij) in col {
                out[i] += aij * vj;
            }
        }
        out
    };
    let mul_t = |u: &[f64]| -> Vec<f64> { a.iter().map(|col| col.iter().map(|&(i, aij)| aij * u[i]).sum()).collect() };
    let max_step = |v: &[f64], dv: &[f64]| -> f64 {
        v.iter().zip(dv).filter(|(_, d)| **d < 0.0).map(|(v, d)| -v / d).fold(f64::INFINITY, f64::min)
    };

    for _ in 0..200 {
        let ax = mul(&x);
        let rp: Vec<f64> = b.iter().zip(&ax).map(|(b, v)| b - v).collect();
        let aty = mul_t(&y);
        let rd: Vec<f64> = (0..n).map(|j| c[j] - aty[j] - s[j]).collect();
        let mu = x.iter().zip(&s).map(|(x, s)| x * s).sum::<f64>() / n as f64;
        let inf = |v: &[f64]| v.iter().fold(0.0, |a: f64, b| a.max(b.abs()));
        if mu < 1e-13 && inf(&rp) < 1e-10 && inf(&rd) < 1e-10 {
            break;
        }
        let d: Vec<f64> = x.iter().zip(&s).map(|(x, s)| x / s).collect();
        let mut normal = vec![0.0; m * m];
        for (col, dj) in a.iter().zip(&d) {
            for &(i, ai) in col {
                for &(k, ak) in col {
                    if k <= i {
                        normal[i * m + k] += dj * ai * ak;
                    }
                }
            }
        }
        let factor = cholesky(normal, m);
        let solve = |rc: &[f64]| -> (Vec<f64>, Vec<f64>, Vec<f64>) {
            let v: Vec<f64> = (0..n).map(|j| d[j] * rd[j] - rc[j] / s[j]).collect();
            let av = mul(&v);
            let rhs: Vec<f64> = rp.iter().zip(&av).map(|(r, v)| r + v).collect();
            let dy = factor.solve(rhs);
            let atdy = mul_t(&dy);
            let ds: Vec<f64> = (0..n).map(|j| rd[j] - atdy[j]).collect();
            let dx: Vec<f64> = (0..n).map(|j| (rc[j] - x[j] * ds[j]) / s[j]).collect();
            (dx, dy, ds)
        };
        let rc: Vec<f64> = x.iter().zip(&s).map(|(x, s)| -x * s).collect();
        let (dxa, _, dsa) = solve(&rc);
        let (ap, ad) = (max_step(&x, &dxa).min(1.0), max_step(&s, &dsa).min(1.0));
        let mu_aff = (0..n).map(|j| (x[j] + ap * dxa[j]) * (s[j] + ad * dsa[j])).sum::<f64>() / n as f64;
        let sigma = (mu_aff / mu).powi(3).min(1.0);
        let rc: Vec<f64> = (0..n).map(|j| -x[j] * s[j] - dxa[j] * dsa[j] + sigma * mu).collect();
        let (dx, dy, ds) = solve(&rc);
        let ap = (0.995 * max_step(&x, &dx)).min(1.0);
        let ad = (0.995 * max_step(&s, &ds)).min(1.0);
        for j in 0..n {
            x[j] += ap * dx[j];
            s[j] += ad * ds[j];
        }
        for i in 0..m {
            y[i] += ad * dy[i];
        }
    }
    (x, s, y)
}

/// Lower triangular Cholesky factor; pivots that vanish numerically are
/// replaced by a huge value, which zeroes the matching solution component.
struct Cholesky {
    l: Vec<f64>,
    m: usize,
}

fn cholesky(mut a: Vec<f64>, m: usize) -> Cholesky {
    let scale = (0..m).map(|i| a[i * m + i]).fold(0.0, f64::max).max(1.0);
    for j in 0..m {
        let mut djj = a[j * m + j];
        for k in 0..j {
            djj -= a[j * m + k] * a[j * m + k];
        }
        let djj = if djj <= 1e-14 * scale { 1e64 } else { djj.sqrt() };
        a[j * m + j] = djj;
        for i in j + 1..m {
            let mut v = a[i * m + j];
            for k in 0..j {
                v -= a[i * m + k] * a[j * m + k];
            }
            a[i * m + j] = v / djj;
        }
    }
    Cholesky { l: a, m }
}

impl Cholesky {
    fn solve(&self, mut v: Vec<f64>) -> Vec<f64> {
        let (l, m) = (&self.l, self.m);
        for i in 0..m {
            for k in 0..i {
                v[i] -= l[i * m + k] * v[k];
            }
            v[i] /= l[i * m + i];
        }
        for i in (0..m).rev() {
            for k in i + 1..m {
                v[i] -= l[k * m + i] * v[k];
            }
            v[i] /= l[i * m + i];
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn certifies_small_supports() {
        // x0 = x1 + x2 and x3 + x4 = 0: the support is {0, 1, 2}
        let rows = vec![vec![(0, 1), (1, -1), (2, -1)], vec![(3, 1), (4, 1)]];
        let p = ConeProgram::new(&rows, 5);
        assert_eq!(certified_support(&p), Some(vec![true, true, true, false, false]));
    }

    #[test]
    fn empty_support_is_certified() {
        let rows = vec![vec![(0, 1), (1, 1)], vec![(1, 1), (2, 2)]];
        let p = ConeProgram::new(&rows, 3);
        assert_eq!(certified_support(&p), Some(vec![false; 3]));
    }

    #[test]
    fn agrees_with_simplex_on_random_cones() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut certified = 0;
        for _ in 0..300 {
            let cols = rng.gen_range(2..12);
            let rows: Vec<Vec<(usize, i64)>> = (0..rng.gen_range(1..8))
                .map(|_| (0..cols).map(|j| (j, if rng.gen_bool(0.4) { rng.gen_range(-2..=2) } else { 0 })).filter(|e| e.1 != 0).collect())
                .filter(|r: &Vec<(usize, i64)>| !r.is_empty())
                .collect();
            let p = ConeProgram::new(&rows, cols);
            let exact = simplex_support(&p);
            if let Some(s) = certified_support(&p) {
                assert_eq!(s, exact, "{rows:?}");
                certified += 1;
            }
            assert_eq!(maximal_support(&p), exact);
        }
        assert!(certified >= 290, "only {certified} certified");
    }
}
