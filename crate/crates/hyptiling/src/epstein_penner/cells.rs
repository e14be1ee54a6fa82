//! Merging tetrahedra across zero-tilt faces into polyhedral cells, the
//! tilt system `(L_D, F_D)`, and lifts of cells in chosen frames.

use super::flips::Geom;
use super::geometry::{lift, Spinor};
use super::tilt::{classify, face_tilt_row, normalized, tilt_row, TiltClass, TiltSystem};
use super::{minkowski_inner, EpError, MinkowskiVector, SizeVector};
use crate::perm::Perm4;
use crate::triangulation::bloch_wigner;
use crate::triangulation::IdealTriangulation;
use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap, VecDeque};

/// Coplanarity threshold for the scale-free determinant of four lifts.
const COPLANAR_EPS: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellVertex {
    pub cusp: usize,
    /// `(tet, vertex)` corners of the subdividing tetrahedra at this vertex.
    pub slots: Vec<(usize, usize)>,
    /// Light-like lift at reference sizes, in the cell's developed frame.
    pub lift: MinkowskiVector,
}

/// The face of a neighboring cell glued to a given face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRef {
    pub cell: usize,
    pub face: usize,
    /// Neighbor-cell vertex for each vertex of this face, in face order.
    pub vertex_map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellFace {
    /// Cell vertex indices around the polygon.
    pub vertices: Vec<usize>,
    /// Subdividing triangles as `(tet, face)`.
    pub triangles: Vec<(usize, usize)>,
    pub neighbor: FaceRef,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub tets: Vec<usize>,
    /// Ordered by cusp, then by smallest slot.
    pub vertices: Vec<CellVertex>,
    pub faces: Vec<CellFace>,
}

impl Cell {
    pub fn is_tetrahedron(&self) -> bool {
        self.vertices.len() == 4
    }

    /// Sorted polygon sizes of the faces.
    pub fn face_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.faces.iter().map(|f| f.vertices.len()).collect();
        s.sort();
        s
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .faces
            .iter()
            .flat_map(|f| {
                let k = f.vertices.len();
                (0..k).map(move |i| {
                    let (a, b) = (f.vertices[i], f.vertices[(i + 1) % k]);
                    (a.min(b), a.max(b))
                })
            })
            .collect();
        e.sort();
        e.dedup();
        e
    }
}

/// Placement of a lifted cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Frame {
    /// As developed from the first tetrahedron of the reference cell in
    /// standard position.
    Developed,
    /// The reference cell centered on the time axis with its first vertex
    /// on the positive `x1` axis, rescaled so its mean `x4` is 1.
    Balanced,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellDecomposition {
    /// The size vector the decomposition was computed for.
    pub size: Vec<f64>,
    pub cells: Vec<Cell>,
    pub tilts: TiltSystem,
    /// The subdividing triangulation and its shapes.
    pub tri: IdealTriangulation,
    pub shapes: Vec<Complex64>,
    lam: Vec<[f64; 6]>,
    cell_of_tet: Vec<usize>,
    slot_vertex: Vec<usize>,
    on_boundary: Vec<bool>,
}

fn scale_free_det(p: [&MinkowskiVector; 4]) -> f64 {
    let m = Matrix4::from_fn(|r, c| p[r].0[c] / p[r].norm());
    m.determinant()
}

impl CellDecomposition {
    pub(crate) fn from_geom(g: Geom, v: &SizeVector, eps: f64) -> Result<Self, EpError> {
        let n = g.tri.tet_count();
        let mut tets = UnionFind::<usize>::new(n);
        let mut slots = UnionFind::<usize>::new(4 * n);
        let mut boundary = Vec::new();
        for (t, f) in g.faces() {
            let row = g.face_row(t, f)?;
            let gl = g.tri.gluing(t, f);
            match classify(&row, v, eps).1 {
                TiltClass::Positive => {
                    boundary.push((t, f));
                    boundary.push((gl.tet, gl.perm.apply(f)));
                }
                _ => {
                    tets.union(t, gl.tet);
                    for w in (0..4).filter(|&w| w != f) {
                        slots.union(4 * t + w, 4 * gl.tet + gl.perm.apply(w));
                    }
                }
            }
        }
        let mut on_boundary = vec![false; 4 * n];
        for &(t, f) in &boundary {
            on_boundary[4 * t + f] = true;
        }
        // Cells numbered by smallest tetrahedron.
        let mut cell_of_tet = vec![usize::MAX; n];
        let mut cell_tets: Vec<Vec<usize>> = Vec::new();
        let mut root_cell = HashMap::new();
        for t in 0..n {
            let r = tets.find(t);
            let c = *root_cell.entry(r).or_insert_with(|| {
                cell_tets.push(Vec::new());
                cell_tets.len() - 1
            });
            cell_of_tet[t] = c;
            cell_tets[c].push(t);
        }
        let mut slot_vertex = vec![usize::MAX; 4 * n];
        let mut cells = Vec::new();
        for ts in &cell_tets {
            let mut classes: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
            for &t in ts {
                for w in 0..4 {
                    classes.entry(slots.find(4 * t + w)).or_default().push((t, w));
                }
            }
            let mut groups: Vec<Vec<(usize, usize)>> = classes.into_values().collect();
            groups.sort_by_key(|s| (g.tri.cusp_of(s[0].0, s[0].1), s[0]));
            let spin = develop_cell(&g, &on_boundary, ts[0], g.spinors(ts[0]));
            let vertices: Vec<CellVertex> = groups
                .into_iter()
                .map(|s| CellVertex { cusp: g.tri.cusp_of(s[0].0, s[0].1), lift: lift(&spin[&s[0].0][s[0].1]), slots: s })
                .collect();
            for (i, vx) in vertices.iter().enumerate() {
                for &(t, w) in &vx.slots {
                    slot_vertex[4 * t + w] = i;
                }
            }
            cells.push(Cell { tets: ts.clone(), vertices, faces: Vec::new() });
        }

        // Boundary triangles, oriented consistently, grouped into polygons.
        let mut tri_face: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for (c, cell) in cells.iter_mut().enumerate() {
            let mine: Vec<(usize, usize)> = boundary.iter().copied().filter(|&(t, _)| cell_of_tet[t] == c).collect();
            let corners: Vec<[usize; 3]> = mine
                .iter()
                .map(|&(t, f)| {
                    let p = Perm4::even_with_first(f);
                    [1, 2, 3].map(|i| slot_vertex[4 * t + p.apply(i)])
                })
                .collect();
            let mut groups = UnionFind::<usize>::new(mine.len());
            let mut by_edge: HashMap<(usize, usize), usize> = HashMap::new();
            for (i, tr) in corners.iter().enumerate() {
                for k in 0..3 {
                    by_edge.insert((tr[k], tr[(k + 1) % 3]), i);
                }
            }
            for (i, tr) in corners.iter().enumerate() {
                for k in 0..3 {
                    let Some(&j) = by_edge.get(&(tr[(k + 1) % 3], tr[k])) else { continue };
                    let d = corners[j].iter().find(|x| !tr.contains(x)).copied();
                    if let Some(d) = d {
                        let l = |x: usize| &cell.vertices[x].lift;
                        if scale_free_det([l(tr[0]), l(tr[1]), l(tr[2]), l(d)]).abs() < COPLANAR_EPS {
                            groups.union(i, j);
                        }
                    }
                }
            }
            let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for i in 0..mine.len() {
                members.entry(groups.find(i)).or_default().push(i);
            }
            let mut faces: Vec<CellFace> = members
                .into_values()
                .map(|ids| {
                    let mut next = HashMap::new();
                    let dir: Vec<(usize, usize)> =
                        ids.iter().flat_map(|&i| (0..3).map(move |k| (i, k))).map(|(i, k)| (corners[i][k], corners[i][(k + 1) % 3])).collect();
                    for &(a, b) in &dir {
                        if !dir.contains(&(b, a)) {
                            next.insert(a, b);
                        }
                    }
                    let start = *next.keys().min().unwrap();
                    let mut poly = vec![start];
                    let mut x = next[&start];
                    while x != start {
                        poly.push(x);
                        x = next[&x];
                    }
                    let mut triangles: Vec<(usize, usize)> = ids.iter().map(|&i| mine[i]).collect();
                    triangles.sort();
                    CellFace { vertices: poly, triangles, neighbor: FaceRef { cell: usize::MAX, face: usize::MAX, vertex_map: Vec::new() } }
                })
                .collect();
            faces.sort_by_key(|f| f.triangles[0]);
            for (k, face) in faces.iter().enumerate() {
                for &tr in &face.triangles {
                    tri_face.insert(tr, (c, k));
                }
            }
            cell.faces = faces;
        }
        for c in 0..cells.len() {
            for k in 0..cells[c].faces.len() {
                let face = &cells[c].faces[k];
                let mut map = HashMap::new();
                let mut target = None;
                for &(t, f) in &face.triangles {
                    let gl = g.tri.gluing(t, f);
                    target = Some(tri_face[&(gl.tet, gl.perm.apply(f))]);
                    for w in (0..4).filter(|&w| w != f) {
                        map.insert(slot_vertex[4 * t + w], slot_vertex[4 * gl.tet + gl.perm.apply(w)]);
                    }
                }
                let (nc, nf) = target.unwrap();
                let vertex_map = face.vertices.iter().map(|x| map[x]).collect();
                cells[c].faces[k].neighbor = FaceRef { cell: nc, face: nf, vertex_map };
            }
        }
        let mut dec = CellDecomposition {
            size: v.to_vec(),
            cells,
            tilts: TiltSystem { cusps: g.tri.cusp_count(), l_rows: Vec::new(), f_rows: Vec::new() },
            lam: g.lam,
            tri: g.tri,
            shapes: g.shapes,
            cell_of_tet,
            slot_vertex,
            on_boundary,
        };
        dec.tilts = dec.tilt_system()?;
        Ok(dec)
    }

    fn geom(&self) -> Geom {
        Geom { tri: self.tri.clone(), shapes: self.shapes.clone(), lam: self.lam.clone() }
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn is_simplicial(&self) -> bool {
        self.cells.iter().all(Cell::is_tetrahedron)
    }

    /// Spinors of the cell's vertices, in vertex order, in the cell's own
    /// developed frame.
    pub fn cell_spinors(&self, cell: usize) -> Vec<Spinor> {
        let spin = self.own_spinors(cell);
        self.cells[cell].vertices.iter().map(|vx| spin[&vx.slots[0].0][vx.slots[0].1]).collect()
    }

    /// Hyperbolic volume of every cell.
    pub fn volumes(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.tets.iter().map(|&t| bloch_wigner(self.shapes[t])).sum()).collect()
    }

    /// Face pairs, each once: `(cell, face)` with the smaller side first.
    pub fn face_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (c, cell) in self.cells.iter().enumerate() {
            for (k, f) in cell.faces.iter().enumerate() {
                if (c, k) <= (f.neighbor.cell, f.neighbor.face) {
                    out.push((c, k));
                }
            }
        }
        out
    }

    /// Vertex lifts of `cell` developed from its first tetrahedron, or of
    /// the neighbor across face `across` in the same frame.
    fn developed(&self, cell: usize, across: Option<usize>, from: &HashMap<usize, [Spinor; 4]>) -> Vec<MinkowskiVector> {
        let g = self.geom();
        let (c, spin) = match across {
            None => (cell, from.clone()),
            Some(k) => {
                let (t, f) = self.cells[cell].faces[k].triangles[0];
                let (u, su) = g.across(t, &from[&t], f);
                let c2 = self.cell_of_tet[u];
                (c2, develop_cell(&g, &self.on_boundary, u, su))
            }
        };
        self.cells[c].vertices.iter().map(|vx| lift(&spin[&vx.slots[0].0][vx.slots[0].1])).collect()
    }

    fn own_spinors(&self, cell: usize) -> HashMap<usize, [Spinor; 4]> {
        let g = self.geom();
        let t = self.cells[cell].tets[0];
        develop_cell(&g, &self.on_boundary, t, g.spinors(t))
    }

    /// Spinors of the cell reached from `cell` by crossing the faces in
    /// `path`, in `cell`'s developed frame.
    fn walk(&self, cell: usize, path: &[usize]) -> (usize, HashMap<usize, [Spinor; 4]>) {
        let g = self.geom();
        let mut c = cell;
        let mut spin = self.own_spinors(cell);
        for &k in path {
            let (t, f) = self.cells[c].faces[k].triangles[0];
            let (u, su) = g.across(t, &spin[&t], f);
            c = self.cell_of_tet[u];
            spin = develop_cell(&g, &self.on_boundary, u, su);
        }
        (c, spin)
    }

    /// Four independent vertices, preferring `first`.
    fn defining(lifts: &[MinkowskiVector], first: &[usize]) -> Option<[usize; 4]> {
        let mut chosen: Vec<usize> = Vec::new();
        for i in first.iter().copied().chain(0..lifts.len()) {
            if chosen.contains(&i) || chosen.len() == 4 {
                continue;
            }
            let mut trial = chosen.clone();
            trial.push(i);
            if rank(&trial.iter().map(|&j| lifts[j]).collect::<Vec<_>>()) == trial.len() {
                chosen = trial;
            }
        }
        (chosen.len() == 4).then(|| [chosen[0], chosen[1], chosen[2], chosen[3]])
    }

    /// Tilt row of face `k` of `cell`, weighted by the face's area over π
    /// (sides minus two), so that `Σ_D·v` is `3/π` times the integral over
    /// the manifold of the piecewise-linear function cut out by the
    /// decomposition's hyperplanes. That integral is convex in `v`.
    pub fn face_row(&self, cell: usize, k: usize) -> Result<Vec<f64>, EpError> {
        let spin = self.own_spinors(cell);
        let here = self.developed(cell, None, &spin);
        let there = self.developed(cell, Some(k), &spin);
        let face = &self.cells[cell].faces[k];
        let nb = &face.neighbor;
        let def = |lifts: &[MinkowskiVector], c: usize, first: &[usize]| {
            let idx = Self::defining(lifts, first).ok_or(EpError::DegenerateCell)?;
            Ok::<_, EpError>(idx.map(|i| (lifts[i], self.cells[c].vertices[i].cusp)))
        };
        let a = def(&here, cell, &face.vertices[..3])?;
        let b = def(&there, nb.cell, &nb.vertex_map[..3])?;
        let far = (0..there.len()).find(|x| !nb.vertex_map.contains(x)).ok_or(EpError::DegenerateCell)?;
        let tri = [a[0].0, a[1].0, a[2].0];
        let weight = (face.vertices.len() - 2) as f64;
        let row = face_tilt_row(&a, &b, tri, &there[far], self.tri.cusp_count())?;
        Ok(row.into_iter().map(|x| weight * x).collect())
    }

    /// Coplanarity rows `L_C` of one cell.
    pub fn coplanarity_rows(&self, cell: usize) -> Result<Vec<Vec<f64>>, EpError> {
        let lifts: Vec<MinkowskiVector> = self.cells[cell].vertices.iter().map(|v| v.lift).collect();
        let idx = Self::defining(&lifts, &[]).ok_or(EpError::DegenerateCell)?;
        let def = idx.map(|i| (lifts[i], self.cells[cell].vertices[i].cusp));
        let mut rows = Vec::new();
        for (i, vx) in self.cells[cell].vertices.iter().enumerate() {
            if idx.contains(&i) {
                continue;
            }
            rows.push(tilt_row(&def, (lifts[i], vx.cusp), self.tri.cusp_count())?);
        }
        Ok(rows)
    }

    pub fn tilt_system(&self) -> Result<TiltSystem, EpError> {
        let mut l_rows = Vec::new();
        for c in 0..self.cells.len() {
            l_rows.extend(self.coplanarity_rows(c)?);
        }
        let f_rows = self.face_pairs().into_iter().map(|(c, k)| self.face_row(c, k)).collect::<Result<_, _>>()?;
        Ok(TiltSystem { cusps: self.tri.cusp_count(), l_rows, f_rows })
    }

    /// Combinatorial summary: sorted list of (vertex count, face sizes).
    pub fn cell_types(&self) -> Vec<(usize, Vec<usize>)> {
        let mut t: Vec<_> = self.cells.iter().map(|c| (c.vertices.len(), c.face_sizes())).collect();
        t.sort();
        t
    }

    /// JSON record with lifts printed to 20 significant digits.
    pub fn to_json(&self) -> Value {
        let num = |x: f64| format!("{x:.19e}");
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|c| {
                json!({
                    "tets": c.tets,
                    "vertices": c.vertices.iter().map(|v| json!({
                        "cusp": v.cusp,
                        "lift": v.lift.0.iter().map(|&x| num(x)).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                    "faces": c.faces.iter().map(|f| json!({
                        "vertices": f.vertices,
                        "neighbor": { "cell": f.neighbor.cell, "face": f.neighbor.face, "vertex_map": f.neighbor.vertex_map },
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "size": self.size,
            "cells": cells,
            "L": self.tilts.l_rows.iter().map(|r| normalized(r)).collect::<Vec<_>>(),
            "F": self.tilts.f_rows.iter().map(|r| normalized(r)).collect::<Vec<_>>(),
        })
    }
}

fn rank(vs: &[MinkowskiVector]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let m = nalgebra::DMatrix::from_fn(vs.len(), 4, |r, c| vs[r].0[c] / vs[r].norm());
    m.svd(false, false).singular_values.iter().filter(|&&s| s > 1e-9).count()
}

/// Spinors of all tetrahedra of `cell`, developed from `root` with vertices
/// `s` across the cell's internal faces.
fn develop_cell(g: &Geom, on_boundary: &[bool], root: usize, s: [Spinor; 4]) -> HashMap<usize, [Spinor; 4]> {
    let mut out = HashMap::from([(root, s)]);
    let mut queue = VecDeque::from([root]);
    while let Some(t) = queue.pop_front() {
        for f in 0..4 {
            if on_boundary[4 * t + f] || out.contains_key(&g.tri.gluing(t, f).tet) {
                continue;
            }
            let (u, su) = g.across(t, &out[&t], f);
            out.insert(u, su);
            queue.push_back(u);
        }
    }
    out
}

/// The balancing transform of a set of light-like lifts.
fn balancing(lifts: &[MinkowskiVector]) -> Result<Matrix4<f64>, EpError> {
    let mut c = MinkowskiVector([0.0; 4]);
    for l in lifts {
        for i in 0..4 {
            c.0[i] += l.0[i];
        }
    }
    let q = -minkowski_inner(&c, &c);
    if !(q > 0.0) {
        return Err(EpError::DegenerateCell);
    }
    let u = c.scaled(1.0 / q.sqrt());
    let eta = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, 1.0, -1.0));
    let mut m = Matrix4::identity();
    if u.0[3] - 1.0 > 1e-14 {
        // Minkowski reflection swapping u and the time axis.
        let w = Vector4::new(u.0[0], u.0[1], u.0[2], u.0[3] - 1.0);
        let ww = (w.transpose() * eta * w)[0];
        m = Matrix4::identity() - (w * (eta * w).transpose()) * (2.0 / ww);
    }
    let p: Vec<Vector4<f64>> = lifts.iter().map(|l| m * Vector4::from(l.0)).collect();
    let spatial = |v: &Vector4<f64>| nalgebra::Vector3::new(v[0], v[1], v[2]);
    let e1 = spatial(&p[0]).normalize();
    let e2 = p
        .iter()
        .map(|v| spatial(v) - e1 * e1.dot(&spatial(v)))
        .find(|r| r.norm() > 1e-8 * spatial(&p[0]).norm())
        .ok_or(EpError::DegenerateCell)?
        .normalize();
    let mut e3 = e1.cross(&e2);
    if let Some(x) = p.iter().map(|v| e3.dot(&spatial(v))).find(|x| x.abs() > 1e-8 * spatial(&p[0]).norm()) {
        if x < 0.0 {
            e3 = -e3;
        }
    }
    let mut r = Matrix4::identity();
    for (i, e) in [e1, e2, e3].iter().enumerate() {
        for j in 0..3 {
            r[(i, j)] = e[j];
        }
    }
    let mean: f64 = p.iter().map(|v| v[3]).sum::<f64>() / p.len() as f64;
    Ok(r * m / mean)
}

/// Vertex lifts of the cell reached from `reference` by crossing the faces
/// in `path` (face indices of successive cells), in the frame fixed by the
/// reference cell.
pub fn lift_cell(dec: &CellDecomposition, reference: usize, path: &[usize], frame: Frame) -> Result<Vec<MinkowskiVector>, EpError> {
    let (c, spin) = dec.walk(reference, path);
    let lifts: Vec<MinkowskiVector> = dec.cells[c].vertices.iter().map(|vx| lift(&spin[&vx.slots[0].0][vx.slots[0].1])).collect();
    match frame {
        Frame::Developed => Ok(lifts),
        Frame::Balanced => {
            let m = balancing(&dec.developed(reference, None, &dec.own_spinors(reference)))?;
            Ok(lifts.iter().map(|l| MinkowskiVector((m * Vector4::from(l.0)).into())).collect())
        }
    }
}
