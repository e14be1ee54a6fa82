//! Maximal cusp neighbourhoods and cusp density.

use super::flips::{canonical_decomposition, CanonOptions};
use super::{minkowski_inner, EpError, SizeVector};
use crate::triangulation::{tetrahedron_volume, IdealTriangulation};
use num_complex::Complex64;

/// Largest common size of all cusps for which the horoball neighbourhoods
/// stay disjoint. Sizes are square roots of cross-section areas.
///
/// Closest horoball pairs span edges of the canonical decomposition at
/// equal sizes, so the minimum runs over its cell edges.
pub fn maximal_cusp_sizes(tri: &IdealTriangulation, shapes: &[Complex64]) -> Result<SizeVector, EpError> {
    let c = tri.cusp_count();
    let dec = canonical_decomposition(tri, shapes, &SizeVector::ones(c), &CanonOptions::default())?;
    let mut lam = f64::INFINITY;
    for cell in &dec.cells {
        for (a, b) in cell.edges() {
            let l = (-2.0 * minkowski_inner(&cell.vertices[a].lift, &cell.vertices[b].lift)).sqrt();
            lam = lam.min(l);
        }
    }
    // Horoballs are tangent when λ = 2, and λ scales inversely with size.
    SizeVector::new(vec![lam / 2.0; c])
}

/// Volume of the maximal cusp over the volume of the manifold.
pub fn cusp_density(tri: &IdealTriangulation, shapes: &[Complex64]) -> Result<f64, EpError> {
    if tri.cusp_count() != 1 {
        return Err(EpError::NotOneCusped(tri.cusp_count()));
    }
    let s = maximal_cusp_sizes(tri, shapes)?[0];
    let volume: f64 = shapes.iter().map(|&z| tetrahedron_volume(z)).sum::<Result<f64, _>>()?;
    Ok(s * s / 2.0 / volume)
}
