//! Isometries between tilings: triples matching cells of two
//! decompositions, the closed sets they generate, and the common covers
//! and commensurability tests built from them.
//!
//! A decomposition is given abstractly as cells with ordered vertex
//! lists for their faces and face gluings. Cells of ideal polyhedra carry
//! their ideal vertices, planar cells their Euclidean corners; in
//! combinatorial mode only the face structure is compared.

mod classes;
mod commensurability;
mod iso;
pub mod plane;

pub use classes::{common_cover, compute_theta, extend_across, find_isometry_classes, is_unbranched, CoveringSpec, ISet, IsomTriple};
pub use commensurability::{
    commensurable, commensurator_data, symmetry_classes, Commensurability, CommensuratorData, SymmetryClass,
};

use crate::epstein_penner::geometry::Spinor;
use crate::epstein_penner::{CellDecomposition, FaceRef};
use crate::triangulation::{bloch_wigner, IdealTriangulation};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Geometric,
    Combinatorial,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsomOptions {
    /// Tolerance for cross ratios and side lengths, relative to their size.
    pub eps: f64,
    pub orientation_preserving_only: bool,
}

impl Default for IsomOptions {
    fn default() -> Self {
        IsomOptions { eps: 1e-6, orientation_preserving_only: false }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TilingError {
    #[error("a Euclidean tiling has no discrete commensurator")]
    NotDiscrete,
    #[error("cell {cell} face {face}: gluing is not reciprocal")]
    BadGluing { cell: usize, face: usize },
    #[error("no tilings given")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CellShape {
    /// Ideal vertices, in one frame.
    Ideal(Vec<Spinor>),
    /// Euclidean corners.
    Planar(Vec<[f64; 2]>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledCell {
    pub vertices: usize,
    /// Vertex lists: polygons in cyclic order, or the two ends of a side.
    pub faces: Vec<Vec<usize>>,
    pub neighbors: Vec<FaceRef>,
    pub shape: CellShape,
    pub volume: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledDecomposition {
    /// 2 for surfaces, 3 for 3-manifolds.
    pub dim: usize,
    pub hyperbolic: bool,
    pub mode: Mode,
    pub cells: Vec<LabeledCell>,
}

impl LabeledDecomposition {
    pub fn from_cells(dec: &CellDecomposition, mode: Mode) -> Self {
        let vols = dec.volumes();
        let cells = dec
            .cells
            .iter()
            .enumerate()
            .map(|(c, cell)| LabeledCell {
                vertices: cell.vertices.len(),
                faces: cell.faces.iter().map(|f| f.vertices.clone()).collect(),
                neighbors: cell.faces.iter().map(|f| f.neighbor.clone()).collect(),
                shape: CellShape::Ideal(dec.cell_spinors(c)),
                volume: vols[c],
            })
            .collect();
        LabeledDecomposition { dim: 3, hyperbolic: true, mode, cells }
    }

    /// Tetrahedra as cells; geometric when shapes are given. Without
    /// shapes every tetrahedron counts as volume 1.
    pub fn from_triangulation(tri: &IdealTriangulation, shapes: Option<&[Complex64]>) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let cells = (0..tri.tet_count())
            .map(|t| {
                let faces: Vec<Vec<usize>> = (0..4).map(|f| (0..4).filter(|&v| v != f).collect()).collect();
                let neighbors = (0..4)
                    .map(|f| {
                        let g = tri.gluing(t, f);
                        FaceRef {
                            cell: g.tet,
                            face: g.perm.apply(f),
                            vertex_map: faces[f].iter().map(|&v| g.perm.apply(v)).collect(),
                        }
                    })
                    .collect();
                let z = shapes.map_or(Complex64::from_polar(1.0, std::f64::consts::PI / 3.0), |s| s[t]);
                LabeledCell {
                    vertices: 4,
                    faces,
                    neighbors,
                    shape: CellShape::Ideal(vec![[one, zero], [zero, one], [one, one], [z, one]]),
                    volume: shapes.map_or(1.0, |_| bloch_wigner(z)),
                }
            })
            .collect();
        let mode = if shapes.is_some() { Mode::Geometric } else { Mode::Combinatorial };
        LabeledDecomposition { dim: 3, hyperbolic: true, mode, cells }
    }

    pub fn with_mode(&self, mode: Mode) -> Self {
        LabeledDecomposition { mode, ..self.clone() }
    }

    pub fn volume(&self) -> f64 {
        self.cells.iter().map(|c| c.volume).sum()
    }

    /// Checks that every gluing is matched by the reverse one.
    pub fn validate(&self) -> Result<(), TilingError> {
        for (c, cell) in self.cells.iter().enumerate() {
            for (f, nb) in cell.neighbors.iter().enumerate() {
                let bad = TilingError::BadGluing { cell: c, face: f };
                let back = self.cells.get(nb.cell).and_then(|o| o.neighbors.get(nb.face)).ok_or(bad.clone())?;
                let there = &self.cells[nb.cell].faces[nb.face];
                let ok = back.cell == c
                    && back.face == f
                    && nb.vertex_map.len() == cell.faces[f].len()
                    && cell.faces[f].iter().zip(&nb.vertex_map).all(|(&x, &y)| {
                        there.iter().position(|&w| w == y).is_some_and(|k| back.vertex_map[k] == x)
                    });
                if !ok {
                    return Err(bad);
                }
            }
        }
        Ok(())
    }

    /// The face of `cell` with exactly the given vertices.
    pub fn face_with(&self, cell: usize, vertices: &[usize]) -> Option<usize> {
        let mut want = vertices.to_vec();
        want.sort();
        self.cells[cell].faces.iter().position(|f| {
            let mut s = f.clone();
            s.sort();
            s == want
        })
    }

    /// Codimension-two faces of a cell, as sorted vertex sets, each with
    /// one face containing it: sides of the polygons of a polyhedron, or
    /// corners of a polygon.
    pub fn ridges(&self, cell: usize) -> Vec<(usize, Vec<usize>)> {
        let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
        for (k, f) in self.cells[cell].faces.iter().enumerate() {
            let n = f.len();
            for i in 0..n {
                let mut r = if self.dim == 3 { vec![f[i], f[(i + 1) % n]] } else { vec![f[i]] };
                r.sort();
                if !out.iter().any(|(_, o)| *o == r) {
                    out.push((k, r));
                }
            }
        }
        out
    }

    /// Crosses `face` of `cell` and turns to the other face of the
    /// neighbor containing the image of `ridge`.
    pub(crate) fn turn(&self, cell: usize, face: usize, ridge: &[usize]) -> (usize, usize, Vec<usize>) {
        let c = &self.cells[cell];
        let nb = &c.neighbors[face];
        let mut r2: Vec<usize> = ridge
            .iter()
            .map(|x| nb.vertex_map[c.faces[face].iter().position(|y| y == x).expect("ridge in face")])
            .collect();
        r2.sort();
        let g = self.cells[nb.cell]
            .faces
            .iter()
            .enumerate()
            .find(|(k, f)| *k != nb.face && r2.iter().all(|x| f.contains(x)))
            .map(|(k, _)| k)
            .expect("every ridge lies in two faces");
        (nb.cell, g, r2)
    }

    /// Number of cell corners around the ridge.
    pub fn ridge_order(&self, cell: usize, face: usize, ridge: &[usize]) -> usize {
        let start = (cell, face, ridge.to_vec());
        let mut cur = start.clone();
        let mut n = 0;
        loop {
            cur = self.turn(cur.0, cur.1, &cur.2);
            n += 1;
            if cur == start {
                return n;
            }
        }
    }

    /// Orders of all ridge classes, sorted.
    pub fn ridge_orders(&self) -> Vec<usize> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for c in 0..self.cells.len() {
            for (f, r) in self.ridges(c) {
                if seen.contains(&(c, r.clone())) {
                    continue;
                }
                let start = (c, f, r);
                let mut cur = start.clone();
                let mut n = 0;
                loop {
                    seen.insert((cur.0, cur.2.clone()));
                    cur = self.turn(cur.0, cur.1, &cur.2);
                    n += 1;
                    if cur == start {
                        break;
                    }
                }
                out.push(n);
            }
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;

    #[test]
    fn triangulation_gluings_are_reciprocal() {
        let d = LabeledDecomposition::from_triangulation(&assets::borromean(), None);
        d.validate().unwrap();
        let tri = assets::borromean();
        let mut valences: Vec<usize> = tri.edge_members().iter().map(Vec::len).collect();
        valences.sort();
        assert_eq!(d.ridge_orders(), valences);
        let f = LabeledDecomposition::from_triangulation(&assets::figure_eight(), None);
        assert_eq!(f.ridge_orders(), vec![6, 6]);
    }

    #[test]
    fn broken_gluing_is_reported() {
        let mut d = LabeledDecomposition::from_triangulation(&assets::figure_eight(), None);
        d.cells[0].neighbors[0].vertex_map.swap(0, 1);
        assert_eq!(d.validate(), Err(TilingError::BadGluing { cell: 0, face: 0 }));
    }
}
