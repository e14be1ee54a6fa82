//! Angle structures and volume maximization, used to find a starting point
//! for the shape solver inside the geometric region.

use super::cusp_graph::EDGE_KIND;
use super::IdealTriangulation;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Equality constraints `A x = b` on the `3n` angles: each tetrahedron's
/// angles sum to π, and the angles around each edge to 2π.
fn constraints(tri: &IdealTriangulation) -> (DMatrix<f64>, DVector<f64>) {
    let n = tri.tet_count();
    let members = tri.edge_members();
    let rows = n + members.len();
    let mut a = DMatrix::zeros(rows, 3 * n);
    let mut b = DVector::zeros(rows);
    for t in 0..n {
        for k in 0..3 {
            a[(t, 3 * t + k)] = 1.0;
        }
        b[t] = PI;
    }
    for (e, m) in members.iter().enumerate() {
        for &(t, i) in m {
            a[(n + e, 3 * t + EDGE_KIND[i])] += 1.0;
        }
        b[n + e] = 2.0 * PI;
    }
    (a, b)
}

/// Solves the KKT system `[H Aᵀ; A 0] [dx; ν] = [-g; -r]` in the
/// least-squares sense (the constraints are redundant).
fn kkt_step(h: &DVector<f64>, a: &DMatrix<f64>, g: &DVector<f64>, r: &DVector<f64>) -> Option<DVector<f64>> {
    let (m, k) = (a.nrows(), a.ncols());
    let mut kkt = DMatrix::zeros(k + m, k + m);
    for i in 0..k {
        kkt[(i, i)] = h[i];
    }
    kkt.view_mut((0, k), (k, m)).copy_from(&a.transpose());
    kkt.view_mut((k, 0), (m, k)).copy_from(a);
    let mut rhs = DVector::zeros(k + m);
    rhs.rows_mut(0, k).copy_from(&(-g));
    rhs.rows_mut(k, m).copy_from(&(-r));
    let sol = kkt.svd(true, true).solve(&rhs, 1e-12).ok()?;
    Some(sol.rows(0, k).into_owned())
}

/// Analytic centre of the angle polytope by infeasible-start Newton on
/// `-Σ log x`; `None` if there is no strictly positive angle structure.
fn analytic_centre(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let k = a.ncols();
    let mut x = DVector::from_element(k, PI / 3.0);
    for _ in 0..200 {
        let r = a * &x - b;
        let g = x.map(|v| -1.0 / v);
        let h = x.map(|v| 1.0 / (v * v));
        let dx = kkt_step(&h, a, &g, &r)?;
        let feasible = r.amax() < 1e-12;
        if feasible && dx.dot(&h.component_mul(&dx)) < 1e-20 {
            return Some(x);
        }
        let mut t: f64 = 1.0;
        while (0..k).any(|i| x[i] + t * dx[i] <= 0.0) {
            t *= 0.5;
            if t < 1e-12 {
                return None;
            }
        }
        x += dx * t;
        if !feasible && t == 1.0 {
            continue;
        }
    }
    (a * &x - b).amax().lt(&1e-9).then_some(x)
}

fn lobachevsky_grad(v: f64) -> f64 {
    -(2.0 * v.sin()).ln()
}

/// Volume-maximizing angle structure (Newton with equality constraints),
/// converted to shapes. `None` if no angle structure exists.
pub fn volume_maximizing_shapes(tri: &IdealTriangulation) -> Option<Vec<Complex64>> {
    let (a, b) = constraints(tri);
    let mut x = analytic_centre(&a, &b)?;
    let k = x.len();
    let zero = DVector::zeros(a.nrows());
    for _ in 0..200 {
        // Maximize V: minimize -V, gradient log(2 sin x), Hessian cot x.
        // On the constraint set the Hessian is positive definite, but
        // entries above π/2 are negative; regularize the diagonal.
        let g = x.map(|v| -lobachevsky_grad(v));
        let h = x.map(|v| (1.0 / v.tan()).max(1e-3) + 1e-9);
        let Some(dx) = kkt_step(&h, &a, &g, &zero) else { break };
        let dec = -g.dot(&dx);
        if dec < 1e-22 {
            break;
        }
        let mut t: f64 = 1.0;
        let obj = |y: &DVector<f64>| y.iter().map(|&v| super::volume::lobachevsky(v)).sum::<f64>();
        let f0 = obj(&x);
        let mut moved = false;
        while t > 1e-12 {
            let y = &x + &dx * t;
            if (0..k).all(|i| y[i] > 0.0 && y[i] < PI) && obj(&y) >= f0 - 1e-15 {
                x = y;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    Some(
        (0..tri.tet_count())
            .map(|t| {
                let (a0, a1, a2) = (x[3 * t], x[3 * t + 1], x[3 * t + 2]);
                Complex64::from_polar(a1.sin() / a2.sin(), a0)
            })
            .collect(),
    )
}
