//! Volumes of ideal tetrahedra via the Bloch-Wigner dilogarithm.

use super::shapes::{ShapeAssignment, ShapeError};
use super::IdealTriangulation;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Bernoulli numbers B_0..B_40 (B_1 = -1/2, odd ones above 1 vanish).
fn bernoulli() -> [f64; 41] {
    let mut b = [0.0f64; 41];
    b[0] = 1.0;
    for m in 1..=40usize {
        let mut s = 0.0;
        let mut binom = 1.0; // C(m+1, k)
        for (k, bk) in b.iter().enumerate().take(m) {
            s += binom * bk;
            binom = binom * (m + 1 - k) as f64 / (k + 1) as f64;
        }
        b[m] = -s / (m + 1) as f64;
    }
    b
}

/// Complex dilogarithm.
pub fn dilog(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let pi2_6 = Complex64::new(PI * PI / 6.0, 0.0);
    if z.norm() < 1e-300 {
        return Complex64::new(0.0, 0.0);
    }
    if (z - one).norm() < 1e-300 {
        return pi2_6;
    }
    if z.norm() > 1.0 {
        // Li2(z) = -Li2(1/z) - π²/6 - log²(-z)/2
        let l = (-z).ln();
        return -dilog(one / z) - pi2_6 - l * l * 0.5;
    }
    if z.re > 0.5 {
        // Li2(z) = -Li2(1-z) + π²/6 - log z log(1-z)
        return -dilog(one - z) + pi2_6 - z.ln() * (one - z).ln();
    }
    // Bernoulli series in u = -log(1-z), |u| < ~1.05 here.
    let b = bernoulli();
    let u = -(one - z).ln();
    let mut term = u; // u^(n+1)/(n+1)!
    let mut sum = Complex64::new(0.0, 0.0);
    for (n, bn) in b.iter().enumerate() {
        if n > 1 && n % 2 == 1 {
            term = term * u / (n + 2) as f64;
            continue;
        }
        sum += term * *bn;
        term = term * u / (n + 2) as f64;
    }
    sum
}

/// Bloch-Wigner dilogarithm `D(z) = Im Li2(z) + arg(1-z) log|z|`; for
/// `Im z > 0` it is the volume of the ideal tetrahedron of shape `z`.
pub fn bloch_wigner(z: Complex64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    dilog(z).im + (one - z).arg() * z.norm().ln()
}

/// Lobachevsky function `Λ(θ) = D(e^{2iθ}) / 2`.
pub(crate) fn lobachevsky(theta: f64) -> f64 {
    bloch_wigner(Complex64::from_polar(1.0, 2.0 * theta)) / 2.0
}

/// Volume of the ideal tetrahedron with shape `z`.
pub fn tetrahedron_volume(z: Complex64) -> Result<f64, ShapeError> {
    if !(z.im > 0.0) || !z.is_finite() {
        return Err(ShapeError::FlatTetrahedron { tet: 0, re: z.re, im: z.im });
    }
    Ok(bloch_wigner(z))
}

/// Sum of the tetrahedron volumes.
pub fn volume(tri: &IdealTriangulation, shapes: &ShapeAssignment) -> Result<f64, ShapeError> {
    debug_assert_eq!(tri.tet_count(), shapes.shapes.len());
    let mut v = 0.0;
    for (t, &z) in shapes.shapes.iter().enumerate() {
        v += tetrahedron_volume(z).map_err(|_| ShapeError::FlatTetrahedron { tet: t, re: z.re, im: z.im })?;
    }
    Ok(v)
}
