//! Integer relations among four complex numbers by lattice reduction, and
//! the shape commensurability test built on them.

use super::{CuspShape, CuspShapeError};
use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationOptions {
    /// Largest coefficient searched for.
    pub bound: i64,
    /// Absolute accuracy of the inputs.
    pub tolerance: f64,
}

impl Default for RelationOptions {
    fn default() -> Self {
        RelationOptions { bound: 10_000, tolerance: 1e-12 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ShapeRelation {
    /// `(c α + d) α' = a α + b` with `ad - bc != 0`.
    Yes { a: i64, b: i64, c: i64, d: i64 },
    /// No relation with coefficients up to `bound`: every nonzero lattice
    /// vector is longer than such a relation could be.
    No { bound: i64, shortest_lower_bound: f64, needed: f64 },
}

/// Gram-Schmidt vectors and coefficients, in floating point.
fn gram_schmidt(b: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = b.len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut v: Vec<f64> = b[i].iter().map(|&x| x as f64).collect();
        for j in 0..i {
            let sj: f64 = star[j].iter().map(|x| x * x).sum();
            let m = b[i].iter().zip(&star[j]).map(|(&a, s)| a as f64 * s).sum::<f64>() / sj;
            mu[i][j] = m;
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= m * s;
            }
        }
        star.push(v);
    }
    (star, mu)
}

/// LLL reduction with `δ = 0.99`.
fn lll(b: &mut [Vec<i128>]) {
    let n = b.len();
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (_, mu) = gram_schmidt(b);
            let q = mu[k][j].round();
            if q != 0.0 {
                let q = q as i128;
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
            }
        }
        let (star, mu) = gram_schmidt(b);
        let nk: f64 = star[k].iter().map(|x| x * x).sum();
        let nk1: f64 = star[k - 1].iter().map(|x| x * x).sum();
        if nk >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * nk1 {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
}

/// Integer vectors `n` with `Σ n_i x_i = 0` found by reducing the lattice
/// spanned by `(e_i, W Re x_i, W Im x_i)` with `W = 1 / tolerance`, plus a
/// lower bound on the length of every nonzero vector of that lattice.
pub fn integer_relations(x: &[Complex64], opts: &RelationOptions) -> (Vec<Vec<i64>>, f64) {
    let n = x.len();
    let w = 1.0 / opts.tolerance;
    let mut b: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut row = vec![0i128; n + 2];
            row[i] = 1;
            row[n] = (w * x[i].re).round() as i128;
            row[n + 1] = (w * x[i].im).round() as i128;
            row
        })
        .collect();
    lll(&mut b);
    let (star, _) = gram_schmidt(&b);
    let lower = star.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt()).fold(f64::INFINITY, f64::min);
    let scale: f64 = x.iter().map(|v| v.norm().max(1.0)).fold(0.0, f64::max);
    let rels = b
        .iter()
        .filter_map(|row| {
            let coeffs: Vec<i64> = row[..n].iter().map(|&c| c as i64).collect();
            let l1: f64 = coeffs.iter().map(|c| c.unsigned_abs() as f64).sum();
            let resid: Complex64 = coeffs.iter().zip(x).map(|(&c, v)| v * c as f64).sum();
            let small = coeffs.iter().all(|c| c.abs() <= opts.bound);
            (small && resid.norm() <= 10.0 * opts.tolerance * l1 * scale).then_some(coeffs)
        })
        .collect();
    (rels, lower)
}

fn normalized(w: [i64; 4]) -> [i64; 4] {
    let g = w.iter().fold(0i64, |g, x| g.gcd(x)).max(1);
    let s = if w.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) { -1 } else { 1 };
    w.map(|x| s * x / g)
}

/// Whether `α' = (a α + b) / (c α + d)` for rationals `a, b, c, d`, i.e.
/// whether `{1, α, α', α α'}` is linearly dependent over the rationals.
/// Among witnesses, diagonal ones (`b = c = 0`) and then small ones are
/// preferred.
pub fn commensurable_shapes(
    alpha: &CuspShape,
    alpha2: &CuspShape,
    opts: &RelationOptions,
) -> Result<ShapeRelation, CuspShapeError> {
    let (x, y) = (alpha.z, alpha2.z);
    let (rels, lower) = integer_relations(&[Complex64::new(1.0, 0.0), x, y, x * y], opts);
    if rels.is_empty() {
        let scale: f64 = [1.0, x.norm(), y.norm(), (x * y).norm()].into_iter().fold(0.0, f64::max);
        let b = opts.bound as f64;
        // Longest lattice vector a relation with |n_i| <= bound could give:
        // coefficient part plus two rounded, error-scaled residual entries.
        let needed = (4.0 * b * b + 2.0 * (4.0 * b * (scale + 0.5)).powi(2)).sqrt();
        if lower > needed {
            return Ok(ShapeRelation::No { bound: opts.bound, shortest_lower_bound: lower, needed });
        }
        return Err(CuspShapeError::Inconclusive { bound: opts.bound });
    }
    let mut best: Option<((bool, i64), [i64; 4])> = None;
    let span: Vec<i64> = (-2..=2).collect();
    let k = rels.len();
    let mut combos: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..k {
        combos = combos.into_iter().flat_map(|c| span.iter().map(move |&s| [c.clone(), vec![s]].concat())).collect();
    }
    for coeffs in combos {
        let mut n = [0i64; 4];
        for (r, &s) in rels.iter().zip(&coeffs) {
            for i in 0..4 {
                n[i] += s * r[i];
            }
        }
        // n0 + n1 α + n2 α' + n3 α α' = 0  <=>  (n3 α + n2) α' = -n1 α - n0.
        let w = normalized([-n[1], -n[0], n[3], n[2]]);
        let [a, b, c, d] = w;
        if a * d - b * c == 0 || w.iter().any(|v| v.abs() > opts.bound) {
            continue;
        }
        let key = (b != 0 || c != 0, w.iter().map(|v| v.abs()).sum::<i64>());
        if best.as_ref().is_none_or(|(k0, w0)| (key, w) < (*k0, *w0)) {
            best = Some((key, w));
        }
    }
    let (_, [a, b, c, d]) = best.ok_or(CuspShapeError::Inconclusive { bound: opts.bound })?;
    Ok(ShapeRelation::Yes { a, b, c, d })
}
