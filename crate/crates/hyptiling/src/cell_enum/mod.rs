//! All canonical cell decompositions of a multi-cusped manifold, by a sweep
//! over integer area vectors or by building the tilt polytope
//! `T = {v : Σ_D·v < 1 for every canonical D}`, whose faces are the
//! parameter cells.

mod area;
mod polytope;
mod svg;

pub use area::{area_vectors, distinct_areas, enumerate_area_vectors, set_partitions, AreaVector};
pub use polytope::{rank, Constraint, HVertex};
pub use svg::projective_svg;

use crate::epstein_penner::{
    canonical_decomposition, classify, CanonOptions, CellDecomposition, EpError, SizeVector, TiltClass, TiltSystem,
};
use crate::triangulation::IdealTriangulation;
use num_complex::Complex64;
use polytope::Kernel;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CellEnumError {
    #[error(transparent)]
    Canonical(#[from] EpError),
    #[error("no top-dimensional cell found near {0:?}")]
    PerturbationBudget(Vec<f64>),
    #[error("half-space refinement cycles at vertex {0:?}")]
    Cycling(Vec<f64>),
    #[error("tilt polytope not finished after {0} half-spaces")]
    TooManyHalfSpaces(usize),
}

/// Coplanarity rows below this size are treated as absent.
pub const ZERO_ROW: f64 = 1e-7;

/// `Σ_D`: the entrywise sum of the rows of `F_D`.
pub fn sigma_row(f_rows: &[Vec<f64>]) -> Vec<f64> {
    let n = f_rows.first().map_or(0, |r| r.len());
    let mut s = vec![0.0; n];
    for r in f_rows {
        for (a, b) in s.iter_mut().zip(r) {
            *a += b;
        }
    }
    s
}

/// The parameter cell `P_D = {v : L_D v = 0, F_D v > 0}` of the canonical
/// decomposition at `sample`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParameterCell {
    pub decomposition: CellDecomposition,
    /// Dimension of the cone, `c - rank L_D`.
    pub dimension: usize,
    pub sample: Vec<f64>,
    /// `Σ_D` for a top cell. Below top dimension the row sum is only
    /// meaningful modulo the rows of `L_D`; the tilt polytope replaces it by
    /// the mean of the surrounding top cells' `Σ`.
    pub sigma: Vec<f64>,
    /// Coplanarity rows dropped as numerically zero.
    pub dropped_rows: usize,
}

impl ParameterCell {
    pub fn at(tri: &IdealTriangulation, shapes: &[Complex64], v: &[f64], opts: &CanonOptions) -> Result<Self, CellEnumError> {
        let size = SizeVector::new(v.to_vec())?;
        let decomposition = canonical_decomposition(tri, shapes, &size, opts)?;
        let c = tri.cusp_count();
        let (kept, dropped): (Vec<_>, Vec<_>) = decomposition
            .tilts
            .l_rows
            .iter()
            .cloned()
            .partition(|r| r.iter().any(|x| x.abs() >= ZERO_ROW));
        let dimension = c - rank(&kept, 1e-7);
        let sigma = sigma_row(&decomposition.tilts.f_rows);
        Ok(ParameterCell { decomposition, dimension, sample: v.to_vec(), sigma, dropped_rows: dropped.len() })
    }

    pub fn tilts(&self) -> &TiltSystem {
        &self.decomposition.tilts
    }

    pub fn is_top(&self) -> bool {
        self.dimension == self.tilts().cusps
    }

    /// `v` in `P_D`.
    pub fn contains(&self, v: &[f64], eps: f64) -> bool {
        self.tilts().admits(v, eps)
    }

    /// `v` in the closure of `P_D`.
    pub fn closure_contains(&self, v: &[f64], eps: f64) -> bool {
        let t = self.tilts();
        t.l_rows.iter().all(|r| classify(r, v, eps).1 == TiltClass::Zero)
            && t.f_rows.iter().all(|r| classify(r, v, eps).1 != TiltClass::Negative)
    }
}

/// Whether two decompositions are the same, i.e. each one's size vector
/// lies in the other's parameter cell.
pub fn same_decomposition(a: &CellDecomposition, b: &CellDecomposition, eps: f64) -> bool {
    a.tilts.cusps == b.tilts.cusps && a.tilts.admits(&b.size, eps) && b.tilts.admits(&a.size, eps)
}

/// Combinatorial key: per cell, the sorted vertex cusps and, per face, the
/// face's vertex cusps with the neighbor's vertex cusps. Equal
/// decompositions have equal keys.
pub fn decomposition_key(d: &CellDecomposition) -> String {
    let cusps = |c: usize| {
        let mut v: Vec<usize> = d.cells[c].vertices.iter().map(|x| x.cusp).collect();
        v.sort();
        v
    };
    let mut cells: Vec<String> = (0..d.cells.len())
        .map(|c| {
            let mut faces: Vec<String> = d.cells[c]
                .faces
                .iter()
                .map(|f| {
                    let mut fv: Vec<usize> = f.vertices.iter().map(|&i| d.cells[c].vertices[i].cusp).collect();
                    fv.sort();
                    format!("{fv:?}>{:?}", cusps(f.neighbor.cell))
                })
                .collect();
            faces.sort();
            format!("{:?}[{}]", cusps(c), faces.join(","))
        })
        .collect();
    cells.sort();
    cells.join(";")
}

/// Hyperbolic volume of each cell.
pub fn cell_volumes(d: &CellDecomposition) -> Vec<f64> {
    d.volumes()
}

/// A map from the cells of `fine` onto the cells of `coarse` that
/// preserves volume and only sends a cell into one containing all its
/// cusps, if one exists.
pub fn merge_map(fine: &CellDecomposition, coarse: &CellDecomposition) -> Option<Vec<usize>> {
    let (fv, cv) = (cell_volumes(fine), cell_volumes(coarse));
    let cusp_set = |d: &CellDecomposition, c: usize| {
        let mut v: Vec<usize> = d.cells[c].vertices.iter().map(|x| x.cusp).collect();
        v.sort();
        v.dedup();
        v
    };
    let mut order: Vec<usize> = (0..fv.len()).collect();
    order.sort_by(|&a, &b| fv[b].total_cmp(&fv[a]));
    let tol = 1e-8 * cv.iter().sum::<f64>().max(1.0);
    fn go(
        k: usize,
        order: &[usize],
        fv: &[f64],
        left: &mut [f64],
        fits: &dyn Fn(usize, usize) -> bool,
        map: &mut [usize],
        tol: f64,
    ) -> bool {
        if k == order.len() {
            return left.iter().all(|x| x.abs() <= tol);
        }
        let f = order[k];
        for c in 0..left.len() {
            if left[c] >= fv[f] - tol && fits(f, c) {
                left[c] -= fv[f];
                map[f] = c;
                if go(k + 1, order, fv, left, fits, map, tol) {
                    return true;
                }
                left[c] += fv[f];
            }
        }
        false
    }
    let fits = |f: usize, c: usize| {
        let cs = cusp_set(coarse, c);
        cusp_set(fine, f).iter().all(|x| cs.contains(x))
    };
    let mut left = cv.clone();
    let mut map = vec![0; fv.len()];
    go(0, &order, &fv, &mut left, &fits, &mut map, tol).then_some(map)
}

/// Moves `v` into a nearby top-dimensional parameter cell. Coordinates are
/// nudged one at a time, by `δ·max v` along the first axis that leaves the
/// kernel of `L_D`; `δ` starts at `1e-4` and is halved after a failure.
pub fn perturb_to_top_cell(
    tri: &IdealTriangulation,
    shapes: &[Complex64],
    v: &[f64],
    opts: &CanonOptions,
) -> Result<(Vec<f64>, ParameterCell), CellEnumError> {
    let start = ParameterCell::at(tri, shapes, v, opts)?;
    if start.is_top() {
        return Ok((v.to_vec(), start));
    }
    let c = v.len();
    let scale = v.iter().fold(0.0f64, |a, x| a.max(*x));
    let mut delta = 1e-4;
    for _ in 0..20 {
        let mut w = v.to_vec();
        let mut cell = start.clone();
        for _ in 0..c {
            let l = &cell.tilts().l_rows;
            let axis = (0..c).find(|&i| l.iter().any(|r| r[i].abs() >= ZERO_ROW && r[i].abs() >= 1e-7 * r.iter().fold(0.0f64, |a, x| a.max(x.abs()))));
            let Some(i) = axis else { break };
            w[i] += delta * scale;
            match ParameterCell::at(tri, shapes, &w, opts) {
                Ok(next) if next.is_top() => return Ok((w, next)),
                Ok(next) => cell = next,
                Err(_) => break,
            }
        }
        delta /= 2.0;
    }
    Err(CellEnumError::PerturbationBudget(v.to_vec()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeFace {
    /// Indices into the vertex list.
    pub vertices: Vec<usize>,
    /// Dimension as a face of the polytope; its cone has one more.
    pub dimension: usize,
    /// Index of its parameter cell, unless the face lies in the boundary
    /// of the positive orthant.
    pub cell: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TiltPolytope {
    pub cusps: usize,
    /// Rows `Σ_D` of the half-spaces `Σ_D·x < 1`, one per top cell found.
    pub halfspaces: Vec<Vec<f64>>,
    pub vertices: Vec<HVertex>,
    pub faces: Vec<PolytopeFace>,
}

impl TiltPolytope {
    /// Largest Euclidean norm of a finite vertex.
    pub fn bound(&self) -> f64 {
        self.vertices
            .iter()
            .filter(|v| !v.at_infinity)
            .map(|v| v.point().iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    pub fn is_bounded(&self) -> bool {
        self.vertices.iter().all(|v| !v.at_infinity)
    }

    pub fn to_json(&self, cells: &[ParameterCell]) -> Value {
        json!({
            "schema": 1,
            "cusps": self.cusps,
            "halfspaces": self.halfspaces,
            "vertices": self.vertices.iter().map(|v| json!({"coords": v.coords, "at_infinity": v.at_infinity})).collect::<Vec<_>>(),
            "faces": self.faces.iter().map(|f| json!({"vertices": f.vertices, "dimension": f.dimension, "cell": f.cell})).collect::<Vec<_>>(),
            "cells": cells.iter().map(|c| json!({
                "dimension": c.dimension,
                "projective_dimension": c.dimension - 1,
                "sample": c.sample,
                "cell_types": c.decomposition.cell_types(),
                "cell_count": c.decomposition.cell_count(),
                "key": decomposition_key(&c.decomposition),
                "sigma": c.sigma,
                "l_rows": c.tilts().l_rows,
                "f_rows": c.tilts().f_rows,
                "dropped_rows": c.dropped_rows,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Moves a point on the orthant boundary toward the barycenter.
fn inward(w: &[f64], delta: f64) -> Vec<f64> {
    let max = w.iter().fold(0.0f64, |a, x| a.max(*x));
    if w.iter().all(|x| *x > polytope::TOL * max) {
        return w.to_vec();
    }
    let mean = w.iter().sum::<f64>() / w.len() as f64;
    w.iter().map(|x| (1.0 - delta) * x + delta * mean).collect()
}

/// Builds `T` by repeated refinement: starting from the half-space of the
/// top cell near `(1, ..., 1)`, each vertex of a face `Σ_D·x = 1` that is
/// not in the closure of `P_D` yields the half-space of the top cell at
/// (a perturbation of) that vertex, until none remain.
pub fn build_tilt_polytope(
    tri: &IdealTriangulation,
    shapes: &[Complex64],
    opts: &CanonOptions,
) -> Result<(TiltPolytope, Vec<ParameterCell>), CellEnumError> {
    let c = tri.cusp_count();
    let eps = opts.eps_tilt;
    if c == 1 {
        let cell = ParameterCell::at(tri, shapes, &[1.0], opts)?;
        let sigma = cell.sigma.clone();
        let x = 1.0 / sigma[0];
        let vertices = vec![HVertex { coords: vec![x.min(1.0), (1.0 / x).min(1.0)], at_infinity: false }];
        let faces = vec![PolytopeFace { vertices: vec![0], dimension: 0, cell: Some(0) }];
        return Ok((TiltPolytope { cusps: 1, halfspaces: vec![sigma], vertices, faces }, vec![cell]));
    }
    let mut kernel = Kernel::new(c);
    let mut tops: Vec<ParameterCell> = Vec::new();
    let (_, first) = perturb_to_top_cell(tri, shapes, &vec![1.0; c], opts)?;
    kernel.push_halfspace(0, &first.sigma);
    tops.push(first);
    let limit = 64 * c * c;
    let verts = loop {
        if tops.len() > limit {
            return Err(CellEnumError::TooManyHalfSpaces(tops.len()));
        }
        let verts = kernel.extreme_rays();
        let mut offending = Vec::new();
        for (k, (con, _)) in kernel.rows.iter().enumerate() {
            let Constraint::HalfSpace(h) = *con else { continue };
            for v in verts.iter().filter(|v| kernel.incident(k, v)) {
                let w = v.point();
                if !tops[h].closure_contains(&w, eps) && !offending.contains(&w) {
                    offending.push(w);
                }
            }
        }
        // A vertex at infinity is never in a closed parameter cell's face.
        for v in verts.iter().filter(|v| v.at_infinity) {
            let w = v.point();
            if !offending.contains(&w) {
                offending.push(w);
            }
        }
        if offending.is_empty() {
            break verts;
        }
        let mut added = false;
        for w in &offending {
            let (_, cell) = perturb_to_top_cell(tri, shapes, &inward(w, 1e-4), opts)?;
            if tops.iter().any(|t| same_decomposition(&t.decomposition, &cell.decomposition, eps)) {
                continue;
            }
            kernel.push_halfspace(tops.len(), &cell.sigma);
            tops.push(cell);
            added = true;
            break;
        }
        if !added {
            return Err(CellEnumError::Cycling(offending.swap_remove(0)));
        }
    };
    let lattice = kernel.face_lattice(&verts);
    let mut faces = Vec::new();
    let mut samples = Vec::new();
    for (set, dim) in lattice {
        let in_boundary = (0..c).any(|i| set.iter().all(|&v| verts[v].coords[i].abs() <= polytope::TOL));
        let cell = if in_boundary || set.iter().any(|&v| verts[v].at_infinity) {
            None
        } else {
            let mut s = vec![0.0; c];
            for &v in &set {
                for (a, b) in s.iter_mut().zip(verts[v].point()) {
                    *a += b / set.len() as f64;
                }
            }
            samples.push(s);
            Some(samples.len() - 1)
        };
        faces.push(PolytopeFace { vertices: set, dimension: dim, cell });
    }
    let mut cells = samples
        .par_iter()
        .map(|s| ParameterCell::at(tri, shapes, s, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let facets: Vec<(&Vec<usize>, usize)> =
        faces.iter().filter(|f| f.dimension + 1 == c).filter_map(|f| f.cell.map(|k| (&f.vertices, k))).collect();
    for f in faces.iter().filter(|f| f.dimension + 1 < c) {
        let Some(k) = f.cell else { continue };
        let around: Vec<usize> =
            facets.iter().filter(|(vs, _)| f.vertices.iter().all(|x| vs.contains(x))).map(|&(_, j)| j).collect();
        let mut mean = vec![0.0; c];
        for &j in &around {
            for (a, b) in mean.iter_mut().zip(&cells[j].sigma) {
                *a += b / around.len() as f64;
            }
        }
        cells[k].sigma = mean;
    }
    let halfspaces = tops.iter().map(|t| t.sigma.clone()).collect();
    Ok((TiltPolytope { cusps: c, halfspaces, vertices: verts, faces }, cells))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    TiltPolytope,
    /// Sizes `sqrt(a)` for every area vector with total at most the budget.
    AreaSweep(u64),
}

/// Pushes `d` unless an equal decomposition is already present.
fn push_distinct(out: &mut Vec<CellDecomposition>, d: CellDecomposition, eps: f64) {
    let key = decomposition_key(&d);
    if !out.iter().any(|e| decomposition_key(e) == key && same_decomposition(e, &d, eps)) {
        out.push(d);
    }
}

/// Every canonical decomposition found by `strategy`, without repeats.
pub fn all_canonical_decompositions(
    tri: &IdealTriangulation,
    shapes: &[Complex64],
    strategy: Strategy,
    opts: &CanonOptions,
) -> Result<Vec<CellDecomposition>, CellEnumError> {
    let c = tri.cusp_count();
    if c == 1 {
        return Ok(vec![canonical_decomposition(tri, shapes, &SizeVector::ones(1), opts)?]);
    }
    let found: Vec<CellDecomposition> = match strategy {
        Strategy::TiltPolytope => build_tilt_polytope(tri, shapes, opts)?.1.into_iter().map(|p| p.decomposition).collect(),
        Strategy::AreaSweep(budget) => {
            let areas = distinct_areas(&enumerate_area_vectors(c, budget));
            areas
                .par_iter()
                .map(|a| {
                    let v = a.iter().map(|&x| (x as f64).sqrt()).collect();
                    canonical_decomposition(tri, shapes, &SizeVector::new(v)?, opts)
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let mut out = Vec::new();
    for d in found {
        push_distinct(&mut out, d, opts.eps_tilt);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;
    use crate::triangulation::{solve_shapes, SolveOptions};

    fn borromean() -> (IdealTriangulation, Vec<Complex64>) {
        let tri = assets::borromean();
        let s = solve_shapes(&tri, &SolveOptions::default()).unwrap().shapes;
        (tri, s)
    }

    #[test]
    fn sigma_of_rows() {
        assert_eq!(sigma_row(&[vec![1.0, -2.0, 3.0]]), vec![1.0, -2.0, 3.0]);
        assert_eq!(sigma_row(&[vec![1.0, -2.0], vec![-1.0, 2.0]]), vec![0.0, 0.0]);
    }

    #[test]
    fn sigma_is_sum_of_tilt_rows() {
        let (tri, s) = borromean();
        let cell = ParameterCell::at(&tri, &s, &[1.2, 1.0, 1.0], &CanonOptions::default()).unwrap();
        assert_eq!(cell.decomposition.cell_count(), 8);
        assert_eq!(cell.tilts().f_rows.len(), 16);
        let mut sum = [0.0; 3];
        for r in &cell.tilts().f_rows {
            for i in 0..3 {
                sum[i] += r[i];
            }
        }
        for (a, b) in cell.sigma.iter().zip(sum) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn centre_perturbs_into_eight_simplices() {
        let (tri, s) = borromean();
        let opts = CanonOptions::default();
        let (v, cell) = perturb_to_top_cell(&tri, &s, &[1.0, 1.0, 1.0], &opts).unwrap();
        assert_eq!(v, vec![1.0 + 1e-4, 1.0, 1.0]);
        assert!(cell.is_top());
        assert_eq!(cell.decomposition.cell_count(), 8);
        assert!(cell.decomposition.is_simplicial());
    }

    #[test]
    fn top_cell_is_left_alone() {
        let (tri, s) = borromean();
        let (v, cell) = perturb_to_top_cell(&tri, &s, &[3.0, 1.0, 1.0], &CanonOptions::default()).unwrap();
        assert_eq!(v, vec![3.0, 1.0, 1.0]);
        assert_eq!(cell.decomposition.cell_count(), 4);
    }

    #[test]
    fn off_the_octahedron_segment() {
        let (tri, s) = borromean();
        let opts = CanonOptions::default();
        let here = ParameterCell::at(&tri, &s, &[2.0, 1.0, 1.0], &opts).unwrap();
        assert_eq!(here.dimension, 2);
        let (v, cell) = perturb_to_top_cell(&tri, &s, &[2.0, 1.0, 1.0], &opts).unwrap();
        assert!(v != vec![2.0, 1.0, 1.0]);
        assert!(cell.is_top());
        assert!(cell.closure_contains(&[2.0, 1.0, 1.0], 1e-7));
        assert!(merge_map(&cell.decomposition, &here.decomposition).is_some());
    }

    #[test]
    fn one_cusp_is_a_single_cell() {
        let tri = assets::figure_eight();
        let s = solve_shapes(&tri, &SolveOptions::default()).unwrap().shapes;
        let opts = CanonOptions::default();
        let all = all_canonical_decompositions(&tri, &s, Strategy::TiltPolytope, &opts).unwrap();
        assert_eq!(all.len(), 1);
        let (poly, cells) = build_tilt_polytope(&tri, &s, &opts).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(poly.faces.len(), 1);
        assert_eq!(cells[0].decomposition.cell_count(), 2);
    }
}
