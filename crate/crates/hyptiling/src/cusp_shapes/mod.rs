//! Cusp shape parameters, their `SL(2,Z)` normal form, and the `GL(2,Q)`
//! commensurability test for shapes.

mod relation;
mod view;

pub use relation::{commensurable_shapes, integer_relations, RelationOptions, ShapeRelation};
pub use view::{horoball_view, Horoball, HoroballView};

use crate::epstein_penner::{CellDecomposition, EpError};
use crate::tiling_isometry::{symmetry_classes, IsomOptions, LabeledDecomposition, Mode, TilingError};
use crate::triangulation::cusp_graph::CuspGraph;
use crate::triangulation::IdealTriangulation;
use num_complex::Complex64;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CuspShapeError {
    #[error("cusp {0} does not exist")]
    NoSuchCusp(usize),
    #[error("cusp {cusp}: holonomy is not a lattice of translations")]
    DegenerateHolonomy { cusp: usize },
    #[error("shape {0} is not in the upper half-plane")]
    NotInUpperHalfPlane(Complex64),
    #[error("no relation with coefficients up to {bound}, and none ruled out")]
    Inconclusive { bound: i64 },
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Canonical(#[from] EpError),
}

/// An integer matrix acting by `z -> (a z + b) / (c z + d)`.
pub type Mat2 = [[i64; 2]; 2];

fn mat_mul(x: Mat2, y: Mat2) -> Mat2 {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

pub fn mobius(m: Mat2, z: Complex64) -> Complex64 {
    (z * m[0][0] as f64 + m[0][1] as f64) / (z * m[1][0] as f64 + m[1][1] as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuspShape {
    /// Reduced: `|Re z| <= 1/2`, `|z| >= 1`.
    pub z: Complex64,
    /// Shape before reduction.
    pub raw: Complex64,
    /// `z = mobius(reduction, raw)`, determinant 1.
    pub reduction: Mat2,
    pub cusp: Option<usize>,
}

impl CuspShape {
    pub fn new(raw: Complex64, cusp: Option<usize>) -> Result<Self, CuspShapeError> {
        if !(raw.im > 0.0) || !raw.is_finite() {
            return Err(CuspShapeError::NotInUpperHalfPlane(raw));
        }
        let (z, reduction) = sl2z_reduce(raw);
        Ok(CuspShape { z, raw, reduction, cusp })
    }
}

/// Moves `z` into the standard fundamental domain of `SL(2,Z)`, returning
/// the matrix used.
pub fn sl2z_reduce(z: Complex64) -> (Complex64, Mat2) {
    let mut z = z;
    let mut m: Mat2 = [[1, 0], [0, 1]];
    for _ in 0..10_000 {
        let n = z.re.round();
        z.re -= n;
        m = mat_mul([[1, -(n as i64)], [0, 1]], m);
        if z.norm_sqr() < 1.0 - 1e-12 {
            z = -z.inv();
            m = mat_mul([[0, -1], [1, 0]], m);
        } else {
            break;
        }
    }
    (z, m)
}

/// A reduced basis of the lattice generated by `gens`, or `None` if the
/// generators span less than a lattice of rank 2.
pub fn lattice_basis(gens: &[Complex64]) -> Option<(Complex64, Complex64)> {
    let scale = gens.iter().map(|g| g.norm()).fold(0.0, f64::max);
    let tol = 1e-9 * scale;
    let mut gens: Vec<Complex64> = gens.iter().copied().filter(|g| g.norm() > tol).collect();
    for _ in 0..100 {
        gens.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        let mut b1 = *gens.first()?;
        let mut b2 = *gens.iter().find(|g| (*g / b1).im.abs() > 1e-9)?;
        loop {
            if b2.norm() < b1.norm() {
                std::mem::swap(&mut b1, &mut b2);
            }
            let m = (b2 / b1).re.round();
            if m == 0.0 {
                break;
            }
            b2 -= b1 * m;
        }
        let tau = b2 / b1;
        let fresh: Vec<Complex64> = gens
            .iter()
            .filter_map(|&g| {
                let w = g / b1;
                let t = w.im / tau.im;
                let s = (w - tau * t).re;
                let r = g - b1 * s.round() - b2 * t.round();
                (r.norm() > tol).then_some(r)
            })
            .collect();
        if fresh.is_empty() {
            return Some((b1, b2));
        }
        gens = [b1, b2].into_iter().chain(fresh).collect();
    }
    None
}

/// Shape of a cusp torus from the translations of its developed cusp
/// triangulation at the complete structure.
pub fn cusp_shape(tri: &IdealTriangulation, shapes: &[Complex64], cusp: usize) -> Result<CuspShape, CuspShapeError> {
    if cusp >= tri.cusp_count() {
        return Err(CuspShapeError::NoSuchCusp(cusp));
    }
    let g = CuspGraph::new(tri);
    let pos = g.develop(tri, shapes);
    let gens = deck_translations(&g, &pos, cusp)?;
    let (b1, b2) = lattice_basis(&gens).ok_or(CuspShapeError::DegenerateHolonomy { cusp })?;
    let z = b2 / b1;
    CuspShape::new(if z.im < 0.0 { -z } else { z }, Some(cusp))
}

/// Deck translations of the developed cusp triangulation, one per
/// non-tree dual edge.
fn deck_translations(g: &CuspGraph, pos: &[[Complex64; 4]], cusp: usize) -> Result<Vec<Complex64>, CuspShapeError> {
    let mut gens = Vec::new();
    for c in g.cycles.iter().filter(|c| c.cusp == cusp) {
        let ((x, y), (x2, y2)) = (c.xy, c.xy2);
        let side = pos[c.a][y] - pos[c.a][x];
        let side2 = pos[c.b][y2] - pos[c.b][x2];
        if (side - side2).norm() > 1e-8 * (1.0 + side.norm()) {
            return Err(CuspShapeError::DegenerateHolonomy { cusp });
        }
        gens.push(pos[c.b][x2] - pos[c.a][x]);
    }
    Ok(gens)
}

pub fn cusp_shapes(tri: &IdealTriangulation, shapes: &[Complex64]) -> Result<Vec<CuspShape>, CuspShapeError> {
    (0..tri.cusp_count()).map(|c| cusp_shape(tri, shapes, c)).collect()
}

/// Orbits of the cusps under the symmetries preserving `dec`.
pub fn symmetry_orbits(dec: &CellDecomposition, opts: &IsomOptions) -> Result<Vec<Vec<usize>>, CuspShapeError> {
    let labeled = LabeledDecomposition::from_cells(dec, Mode::Geometric);
    let n = dec.tri.cusp_count();
    let mut uf = UnionFind::<usize>::new(n);
    for class in symmetry_classes(&labeled, opts)?.iter().filter(|c| c.is_symmetry) {
        let t = &class.iset.triples[0];
        for (v, &w) in t.j.iter().enumerate() {
            uf.union(dec.cells[t.p].vertices[v].cusp, dec.cells[t.p_prime].vertices[w].cusp);
        }
    }
    Ok(groups(&mut uf, n))
}

fn groups(uf: &mut UnionFind<usize>, n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut root_of = std::collections::HashMap::new();
    for c in 0..n {
        let r = uf.find_mut(c);
        let k = *root_of.entry(r).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[k].push(c);
    }
    out
}

/// `c - d`: symmetry orbits of cusps minus commensurability classes of
/// cusp shapes. Zero means any one size vector suffices when searching
/// for the commensurator.
pub fn cusp_search_dimension(
    orbits: &[Vec<usize>],
    shapes: &[CuspShape],
    opts: &RelationOptions,
) -> Result<usize, CuspShapeError> {
    let reps: Vec<&CuspShape> = orbits.iter().map(|o| &shapes[o[0]]).collect();
    let mut uf = UnionFind::<usize>::new(reps.len());
    for i in 0..reps.len() {
        for k in i + 1..reps.len() {
            if !uf.equiv(i, k) {
                if let ShapeRelation::Yes { .. } = commensurable_shapes(reps[i], reps[k], opts)? {
                    uf.union(i, k);
                }
            }
        }
    }
    let d = groups(&mut uf, reps.len()).len();
    Ok(orbits.len() - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;
    use crate::triangulation::{solve_shapes, SolveOptions};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reduction_examples() {
        let (z, m) = sl2z_reduce(c(5.0, 1.0));
        assert!((z - c(0.0, 1.0)).norm() < 1e-12);
        assert_eq!(m, [[1, -5], [0, 1]]);
        let (z, m) = sl2z_reduce(c(0.0, 0.25));
        assert!((z - c(0.0, 4.0)).norm() < 1e-12);
        assert!((mobius(m, c(0.0, 0.25)) - z).norm() < 1e-12);
        let w = c(0.3, 1.7);
        assert_eq!(sl2z_reduce(w), (w, [[1, 0], [0, 1]]));
    }

    #[test]
    fn reduction_matrix_has_determinant_one() {
        for w in [c(3.7, 0.01), c(-12.2, 0.3), c(0.49, 0.9)] {
            let (z, m) = sl2z_reduce(w);
            assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1);
            assert!((mobius(m, w) - z).norm() < 1e-9 * (1.0 + z.norm()));
            assert!(z.re.abs() <= 0.5 + 1e-12 && z.norm() >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn square_lattice() {
        let (b1, b2) = lattice_basis(&[c(3.0, 1.0), c(-1.0, 3.0), c(2.0, 4.0), c(1.0, -3.0)]).unwrap();
        let s = CuspShape::new(b2 / b1 * if (b2 / b1).im < 0.0 { -1.0 } else { 1.0 }, None).unwrap();
        assert!((s.z - c(0.0, 1.0)).norm() < 1e-12);
        assert!(lattice_basis(&[c(1.0, 0.0), c(2.0, 0.0)]).is_none());
    }

    #[test]
    fn figure_eight_shape() {
        let tri = assets::figure_eight();
        let z = solve_shapes(&tri, &SolveOptions::default()).unwrap().shapes;
        let s = cusp_shape(&tri, &z, 0).unwrap();
        assert!((s.z - c(0.0, 2.0 * 3f64.sqrt())).norm() < 1e-9, "{}", s.z);
    }
}
