//! The maximal horoball packing seen from one cusp: that cusp sits at
//! infinity and every other horoball is a disk on the boundary plane.

use super::{deck_translations, lattice_basis, CuspShapeError};
use crate::epstein_penner::geometry::lambda_lengths;
use crate::epstein_penner::maximal_cusp_sizes;
use crate::perm::edge_index;
use crate::triangulation::cusp_graph::CuspGraph;
use crate::triangulation::IdealTriangulation;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Horoball {
    pub center: Complex64,
    pub diameter: f64,
    pub cusp: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoroballView {
    pub cusp: usize,
    pub sizes: Vec<f64>,
    /// Height of the horosphere at infinity.
    pub height: f64,
    /// One developed copy of each cusp triangle.
    pub triangles: Vec<[Complex64; 3]>,
    /// Horoballs at the corners of `triangles`, without repeats.
    pub balls: Vec<Horoball>,
    /// Basis of the deck translations.
    pub translations: (Complex64, Complex64),
}

/// Positions are scaled so the cusp torus has area 1 at height 1. A ball
/// at the far end of an edge with λ-length `λ` then has diameter
/// `4 s / λ²` for its cusp size `s`, and the horosphere at infinity sits
/// at height `1 / s` for the viewed cusp.
pub fn horoball_view(tri: &IdealTriangulation, shapes: &[Complex64], cusp: usize) -> Result<HoroballView, CuspShapeError> {
    if cusp >= tri.cusp_count() {
        return Err(CuspShapeError::NoSuchCusp(cusp));
    }
    let sizes = maximal_cusp_sizes(tri, shapes)?.into_inner();
    let lam = lambda_lengths(tri, shapes);
    let g = CuspGraph::new(tri);
    let pos = g.develop(tri, shapes);
    let mut area = 0.0;
    for (i, t) in g.triangles.iter().enumerate().filter(|(i, _)| g.cusp_of[*i] == cusp) {
        let [a, b, c] = t.ccw();
        area += ((pos[i][b] - pos[i][a]).conj() * (pos[i][c] - pos[i][a])).im / 2.0;
    }
    let k = 1.0 / area.sqrt();
    let mut triangles = Vec::new();
    let mut balls: Vec<Horoball> = Vec::new();
    for (i, t) in g.triangles.iter().enumerate().filter(|(i, _)| g.cusp_of[*i] == cusp) {
        let corners = t.ccw();
        triangles.push(corners.map(|u| pos[i][u] * k));
        for u in corners {
            let center = pos[i][u] * k;
            let c = tri.cusp_of(t.tet, u);
            let l = lam[t.tet][edge_index(t.vertex, u)];
            if !balls.iter().any(|b| (b.center - center).norm() < 1e-9) {
                balls.push(Horoball { center, diameter: 4.0 * sizes[c] / (l * l), cusp: c });
            }
        }
    }
    let gens: Vec<Complex64> = deck_translations(&g, &pos, cusp)?.into_iter().map(|x| x * k).collect();
    let translations = lattice_basis(&gens).ok_or(CuspShapeError::DegenerateHolonomy { cusp })?;
    Ok(HoroballView { cusp, height: 1.0 / sizes[cusp], sizes, triangles, balls, translations })
}
