//! Hyperbolic shapes from the gluing and completeness equations.

use super::cusp_graph::{dlog_param, edge_param, CuspGraph, EDGE_KIND};
use super::IdealTriangulation;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeAssignment {
    pub shapes: Vec<Complex64>,
    /// Requested precision in decimal digits.
    pub precision: u32,
    /// Largest residual over all gluing and completeness equations.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub precision: u32,
    /// Shapes with `Im z <= eps_geom` are rejected as flat.
    pub eps_geom: f64,
    pub seed: u64,
    pub max_iterations: usize,
    pub retries: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { precision: 30, eps_geom: 1e-9, seed: 0x5eed, max_iterations: 100, retries: 8 }
    }
}

impl SolveOptions {
    pub fn with_precision(precision: u32) -> Self {
        SolveOptions { precision, ..Default::default() }
    }

    /// Residual target: `10^(5 - precision)`, floored at what `f64` can reach.
    pub fn tolerance(&self) -> f64 {
        let requested = 10f64.powi(5 - self.precision as i32);
        requested.max(1e-13)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShapeError {
    #[error("Newton iteration did not converge (residual {residual:e})")]
    NoConvergence { residual: f64 },
    #[error("flat tetrahedron: tet {tet} has shape {re}+{im}i")]
    FlatTetrahedron { tet: usize, re: f64, im: f64 },
}

struct System {
    edges: Vec<Vec<(usize, usize)>>,
    cusp: CuspGraph,
}

impl System {
    fn new(tri: &IdealTriangulation) -> Self {
        let edges = tri
            .edge_members()
            .into_iter()
            .map(|m| m.into_iter().map(|(t, e)| (t, EDGE_KIND[e])).collect())
            .collect();
        System { edges, cusp: CuspGraph::new(tri) }
    }

    fn rows(&self) -> usize {
        self.edges.len() + self.cusp.cycles.len()
    }

    fn residual(&self, z: &[Complex64]) -> DVector<Complex64> {
        let mut r = DVector::zeros(self.rows());
        for (k, members) in self.edges.iter().enumerate() {
            let s: Complex64 = members.iter().map(|&(t, kind)| edge_param(z[t], kind).ln()).sum();
            r[k] = s - Complex64::new(0.0, 2.0 * PI);
        }
        for (k, c) in self.cusp.cycles.iter().enumerate() {
            r[self.edges.len() + k] = c.holonomy.value_mod_2pi(z);
        }
        r
    }

    fn jacobian(&self, z: &[Complex64]) -> DMatrix<Complex64> {
        let n = z.len();
        let mut j = DMatrix::zeros(self.rows(), n);
        for (k, members) in self.edges.iter().enumerate() {
            for &(t, kind) in members {
                j[(k, t)] += dlog_param(z[t], kind);
            }
        }
        for (k, c) in self.cusp.cycles.iter().enumerate() {
            for (t, g) in c.holonomy.gradient(z).into_iter().enumerate() {
                j[(self.edges.len() + k, t)] = g;
            }
        }
        j
    }
}

fn max_norm(r: &DVector<Complex64>) -> f64 {
    r.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn sum_sq(r: &DVector<Complex64>) -> f64 {
    r.iter().map(|x| x.norm_sqr()).sum()
}

struct Iterate {
    u: Vec<Complex64>,
    z: Vec<Complex64>,
    r: DVector<Complex64>,
    merit: f64,
}

impl Iterate {
    fn new(sys: &System, u: Vec<Complex64>) -> Self {
        let z: Vec<Complex64> = u.iter().map(|x| x.exp()).collect();
        let r = sys.residual(&z);
        let merit = sum_sq(&r);
        Iterate { u, z, r, merit }
    }

    /// Backtracks along `step`, keeping `0 < Im log z < π` where the
    /// equations are smooth; true if the sum of squares decreased.
    fn advance(&mut self, sys: &System, step: &DVector<Complex64>) -> bool {
        let mut lambda = 1.0;
        while lambda > 1e-6 {
            let trial: Vec<Complex64> = self.u.iter().zip(step.iter()).map(|(a, d)| a + d * lambda).collect();
            if trial.iter().all(|x| x.im > 0.0 && x.im < PI) {
                let next = Iterate::new(sys, trial);
                if next.merit.is_finite() && next.merit < self.merit {
                    *self = next;
                    return true;
                }
            }
            lambda *= 0.5;
        }
        false
    }
}

/// Damped Gauss-Newton in log-shape coordinates from the given start,
/// falling back to Levenberg-Marquardt steps when the line search stalls.
fn newton(sys: &System, start: Vec<Complex64>, opts: &SolveOptions) -> (Vec<Complex64>, f64) {
    let tol = opts.tolerance();
    let mut it = Iterate::new(sys, start.iter().map(|z| z.ln()).collect());
    let mut mu: f64 = 1e-3;
    for _ in 0..opts.max_iterations {
        if max_norm(&it.r) < tol {
            break;
        }
        let j = sys.jacobian(&it.z);
        let gn = j.clone().svd(true, true).solve(&(-&it.r), 1e-12).ok();
        if gn.is_some_and(|step| it.advance(sys, &step)) {
            mu = (mu * 0.3).max(1e-9);
            continue;
        }
        let jh = j.adjoint();
        let (jhj, g) = (&jh * &j, -(&jh * &it.r));
        let mut improved = false;
        while mu < 1e8 && !improved {
            let mut a = jhj.clone();
            for k in 0..a.nrows() {
                a[(k, k)] += Complex64::new(mu, 0.0);
            }
            improved = a.lu().solve(&g).is_some_and(|step| it.advance(sys, &step));
            if !improved {
                mu *= 10.0;
            }
        }
        if !improved {
            break;
        }
    }
    let err = max_norm(&it.r);
    (it.z, err)
}

/// Solves the gluing and completeness equations, starting every shape at
/// `exp(iπ/3)`, then from the volume-maximizing angle structure, then from
/// deterministic random shapes.
pub fn solve_shapes(tri: &IdealTriangulation, opts: &SolveOptions) -> Result<ShapeAssignment, ShapeError> {
    let n = tri.tet_count();
    let sys = System::new(tri);
    let regular = Complex64::from_polar(1.0, PI / 3.0);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let tol = opts.tolerance();
    let mut best: Option<(Vec<Complex64>, f64)> = None;
    let mut starts = vec![vec![regular; n]];
    starts.extend(super::angles::volume_maximizing_shapes(tri));
    let fixed = starts.len();
    for attempt in 0..fixed + opts.retries {
        let start: Vec<Complex64> = if attempt < fixed {
            starts[attempt].clone()
        } else {
            (0..n)
                .map(|_| {
                    let r: f64 = rng.gen_range(0.5..2.0);
                    let a: f64 = rng.gen_range(0.15..(PI - 0.15));
                    Complex64::from_polar(r, a)
                })
                .collect()
        };
        let (z, err) = newton(&sys, start, opts);
        let flat = z.iter().any(|w| w.im <= opts.eps_geom);
        if err < tol && !flat {
            return Ok(ShapeAssignment { shapes: z, precision: opts.precision, residual: err });
        }
        if best.as_ref().is_none_or(|b| err < b.1) {
            best = Some((z, err));
        }
    }
    let (z, err) = best.unwrap();
    if err < tol {
        let (tet, w) = z.iter().enumerate().find(|(_, w)| w.im <= opts.eps_geom).unwrap();
        return Err(ShapeError::FlatTetrahedron { tet, re: w.re, im: w.im });
    }
    Err(ShapeError::NoConvergence { residual: err })
}

/// Newton refinement from given approximate shapes, e.g. after a local
/// retriangulation.
pub fn refine_shapes(tri: &IdealTriangulation, start: &[Complex64], opts: &SolveOptions) -> Result<ShapeAssignment, ShapeError> {
    let sys = System::new(tri);
    let (z, err) = newton(&sys, start.to_vec(), opts);
    if err >= opts.tolerance() {
        return Err(ShapeError::NoConvergence { residual: err });
    }
    if let Some((tet, w)) = z.iter().enumerate().find(|(_, w)| w.im <= opts.eps_geom) {
        return Err(ShapeError::FlatTetrahedron { tet, re: w.re, im: w.im });
    }
    Ok(ShapeAssignment { shapes: z, precision: opts.precision, residual: err })
}

/// Largest gluing-equation and completeness-equation residuals.
pub fn shape_residuals(tri: &IdealTriangulation, shapes: &[Complex64]) -> (f64, f64) {
    let sys = System::new(tri);
    let r = sys.residual(shapes);
    let e = sys.edges.len();
    let edge = r.iter().take(e).map(|x| x.norm()).fold(0.0, f64::max);
    let cusp = r.iter().skip(e).map(|x| x.norm()).fold(0.0, f64::max);
    (edge, cusp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;

    #[test]
    fn figure_eight_is_regular() {
        let tri = assets::figure_eight();
        let s = solve_shapes(&tri, &SolveOptions::default()).unwrap();
        let w = Complex64::from_polar(1.0, PI / 3.0);
        for z in &s.shapes {
            assert!((z - w).norm() < 1e-9, "{z}");
        }
        let (e, c) = shape_residuals(&tri, &s.shapes);
        assert!(e < 1e-9 && c < 1e-9);
    }

    #[test]
    fn borromean_residuals_small() {
        let tri = assets::borromean();
        let s = solve_shapes(&tri, &SolveOptions::default()).unwrap();
        let (e, c) = shape_residuals(&tri, &s.shapes);
        assert!(e < 1e-9 && c < 1e-9, "{e} {c}");
    }

    #[test]
    fn tolerance_floor() {
        assert_eq!(SolveOptions::with_precision(10).tolerance(), 1e-5);
        assert_eq!(SolveOptions::default().tolerance(), 1e-13);
    }
}
