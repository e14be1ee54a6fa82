//! Tilt-driven 2-3 and 3-2 moves towards the canonical retriangulation.

use super::cells::CellDecomposition;
use super::geometry::{cross_ratio, develop_across, lambda_lengths, lift, standard_spinors, Spinor};
use super::tilt::{classify, face_tilt_row, TiltClass};
use super::{EpError, SizeVector};
use crate::perm::{edge_index, Perm4};
use crate::triangulation::{refine_shapes, Gluing, IdealTriangulation, SolveOptions};
use num_complex::Complex64;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonOptions {
    /// Relative tolerance for classifying tilts as zero.
    pub eps_tilt: f64,
    /// Shapes with imaginary part at most this are flat.
    pub eps_geom: f64,
    /// Maximum number of moves; `None` for `50 n + 200`.
    pub move_budget: Option<usize>,
    pub solve: SolveOptions,
}

impl Default for CanonOptions {
    fn default() -> Self {
        CanonOptions { eps_tilt: 1e-7, eps_geom: 1e-9, move_budget: None, solve: SolveOptions::default() }
    }
}

/// A triangulation with shapes and horosphere distances at reference sizes.
#[derive(Clone, Debug)]
pub struct Geom {
    pub tri: IdealTriangulation,
    pub shapes: Vec<Complex64>,
    pub lam: Vec<[f64; 6]>,
}

impl Geom {
    pub fn new(tri: IdealTriangulation, shapes: Vec<Complex64>) -> Self {
        let lam = lambda_lengths(&tri, &shapes);
        Geom { tri, shapes, lam }
    }

    pub fn spinors(&self, t: usize) -> [Spinor; 4] {
        standard_spinors(self.shapes[t], &self.lam[t])
    }

    pub fn across(&self, t: usize, s: &[Spinor; 4], f: usize) -> (usize, [Spinor; 4]) {
        develop_across(&self.tri, &self.shapes, &self.lam, t, s, f)
    }

    fn lifts(&self, t: usize, s: &[Spinor; 4]) -> [(super::MinkowskiVector, usize); 4] {
        [0, 1, 2, 3].map(|v| (lift(&s[v]), self.tri.cusp_of(t, v)))
    }

    /// Tilt row of face `f` of `t`.
    pub fn face_row(&self, t: usize, f: usize) -> Result<Vec<f64>, EpError> {
        let s = self.spinors(t);
        let (u, su) = self.across(t, &s, f);
        let b = self.tri.gluing(t, f).perm.apply(f);
        let face: Vec<usize> = (0..4).filter(|&v| v != f).collect();
        let lift_t = self.lifts(t, &s);
        let face = [lift_t[face[0]].0, lift_t[face[1]].0, lift_t[face[2]].0];
        face_tilt_row(&lift_t, &self.lifts(u, &su), face, &lift(&su[b]), self.tri.cusp_count())
    }

    /// Each face once, as `(tet, face)` with the smaller side first.
    pub fn faces(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for t in 0..self.tri.tet_count() {
            for f in 0..4 {
                let g = self.tri.gluing(t, f);
                if (t, f) <= (g.tet, g.perm.apply(f)) {
                    out.push((t, f));
                }
            }
        }
        out
    }
}

/// Replaces the `old` tetrahedra (each with the point ids of its vertices)
/// by `new` ones spanning the same points. Faces are matched by point sets.
fn retriangulate(
    g: &Geom,
    old: &[(usize, [usize; 4])],
    new: &[([usize; 4], Complex64)],
    opts: &CanonOptions,
) -> Result<Geom, EpError> {
    let tri = &g.tri;
    let n = tri.tet_count();
    let removed: HashMap<usize, [usize; 4]> = old.iter().copied().collect();
    let mut index = vec![usize::MAX; n];
    let mut k = 0;
    for t in 0..n {
        if !removed.contains_key(&t) {
            index[t] = k;
            k += 1;
        }
    }
    let total = k + new.len();
    let mut point_cusp = HashMap::new();
    for (t, pts) in old {
        for v in 0..4 {
            point_cusp.insert(pts[v], tri.cusp_of(*t, v));
        }
    }
    let face_key = |pts: &[usize; 4], f: usize| {
        let mut k: Vec<usize> = (0..4).filter(|&v| v != f).map(|v| pts[v]).collect();
        k.sort();
        k
    };
    // Where each external face of an old tet goes: new tet, face, and the
    // relabeling from old vertex labels to new ones.
    let mut new_faces: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
    for (i, (pts, _)) in new.iter().enumerate() {
        for f in 0..4 {
            new_faces.entry(face_key(pts, f)).or_default().push((i, f));
        }
    }
    let relabel = |from: &[usize; 4], to: &[usize; 4]| -> Perm4 {
        let mut p = [0u8; 4];
        let mut used = [false; 4];
        for v in 0..4 {
            if let Some(w) = to.iter().position(|&x| x == from[v]) {
                p[v] = w as u8;
                used[w] = true;
            }
        }
        // The one unmatched vertex goes to the one unused label.
        if let Some(v) = (0..4).find(|&v| !to.contains(&from[v])) {
            p[v] = (0..4).find(|&w| !used[w]).unwrap() as u8;
        }
        Perm4::new(p).expect("faces match")
    };
    let mut old_face_map: HashMap<(usize, usize), (usize, usize, Perm4)> = HashMap::new();
    for (t, pts) in old {
        for f in 0..4 {
            if let Some(list) = new_faces.get(&face_key(pts, f)) {
                if list.len() == 1 {
                    let (i, nf) = list[0];
                    old_face_map.insert((*t, f), (k + i, nf, relabel(pts, &new[i].0)));
                }
            }
        }
    }

    let mut raw: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; total];
    let mut cusps = vec![[0usize; 4]; total];
    for t in 0..n {
        if index[t] == usize::MAX {
            continue;
        }
        cusps[index[t]] = tri.cusp_assignment()[t];
        for f in 0..4 {
            let gl = tri.gluing(t, f);
            if index[gl.tet] != usize::MAX {
                raw[index[t]][f] = Some(Gluing { tet: index[gl.tet], perm: gl.perm });
            }
        }
    }
    for (i, (pts, _)) in new.iter().enumerate() {
        let nt = k + i;
        cusps[nt] = pts.map(|p| point_cusp[&p]);
        for f in 0..4 {
            let list = &new_faces[&face_key(pts, f)];
            if list.len() == 2 {
                let &(j, f2) = list.iter().find(|&&(j, f2)| (j, f2) != (i, f)).unwrap();
                raw[nt][f] = Some(Gluing { tet: k + j, perm: relabel(pts, &new[j].0) });
                let _ = f2;
                continue;
            }
            // External: find the old face with this point set.
            let (&(ot, of), &(_, _, to_new)) = old_face_map.iter().find(|(_, &(t2, f2, _))| (t2, f2) == (nt, f)).expect("external face of the old cluster");
            let gl = tri.gluing(ot, of);
            let of2 = gl.perm.apply(of);
            let from_new = to_new.inverse();
            let perm_out = match old_face_map.get(&(gl.tet, of2)) {
                Some(&(nt2, _, to_new2)) => (nt2, to_new2.compose(gl.perm).compose(from_new)),
                None => (index[gl.tet], gl.perm.compose(from_new)),
            };
            raw[nt][f] = Some(Gluing { tet: perm_out.0, perm: perm_out.1 });
        }
    }
    let tri2 = IdealTriangulation::from_gluings(raw, Some(cusps)).expect("retriangulation stays valid");
    debug_assert!(tri2.gluings().iter().flatten().all(|g| !g.perm.is_even()));
    let mut start: Vec<Complex64> = (0..n).filter(|&t| index[t] != usize::MAX).map(|t| g.shapes[t]).collect();
    start.extend(new.iter().map(|(_, z)| *z));
    let solved = refine_shapes(&tri2, &start, &SolveOptions { eps_geom: opts.eps_geom, ..opts.solve })?;
    Ok(Geom::new(tri2, solved.shapes))
}

/// A new tetrahedron on the given points, reordered to be positively
/// oriented; `None` if it is flat.
fn oriented(points: [usize; 4], sp: &HashMap<usize, Spinor>, eps: f64) -> Option<([usize; 4], Complex64)> {
    let z = |p: &[usize; 4]| cross_ratio(&sp[&p[0]], &sp[&p[1]], &sp[&p[2]], &sp[&p[3]]);
    let mut p = points;
    let mut w = z(&p);
    if w.im < 0.0 {
        p.swap(2, 3);
        w = z(&p);
    }
    (w.im > eps && w.is_finite()).then_some((p, w))
}

fn two_three(g: &Geom, t: usize, f: usize, opts: &CanonOptions) -> Option<Result<Geom, EpError>> {
    let gl = g.tri.gluing(t, f);
    if gl.tet == t {
        return None;
    }
    let s = g.spinors(t);
    let (u, su) = g.across(t, &s, f);
    let b = gl.perm.apply(f);
    let mut sp: HashMap<usize, Spinor> = (0..4).map(|v| (v, s[v])).collect();
    sp.insert(4, su[b]);
    let inv = gl.perm.inverse();
    let upts: [usize; 4] = [0, 1, 2, 3].map(|v| if v == b { 4 } else { inv.apply(v) });
    let face: Vec<usize> = (0..4).filter(|&v| v != f).collect();
    let mut new = Vec::new();
    for (x, y) in [(face[0], face[1]), (face[1], face[2]), (face[2], face[0])] {
        new.push(oriented([f, 4, x, y], &sp, opts.eps_geom)?);
    }
    Some(retriangulate(g, &[(t, [0, 1, 2, 3]), (u, upts)], &new, opts))
}

fn three_two(g: &Geom, t: usize, a: usize, b: usize, opts: &CanonOptions) -> Option<Result<Geom, EpError>> {
    let cycle = g.tri.edge_cycle(t, a, b);
    if cycle.len() != 3 {
        return None;
    }
    let tets: Vec<usize> = cycle.iter().map(|c| c.0).collect();
    if tets[0] == tets[1] || tets[1] == tets[2] || tets[0] == tets[2] {
        return None;
    }
    // Points: t's vertices 0..3, and 4 for the far vertex of the next tet.
    let others: Vec<usize> = (0..4).filter(|&x| x != a && x != b).collect();
    let (c, d) = (others[0], others[1]);
    let s = g.spinors(t);
    let g1 = g.tri.gluing(t, c);
    let (t1, s1) = g.across(t, &s, c);
    let p1 = g1.perm;
    let mut sp: HashMap<usize, Spinor> = (0..4).map(|v| (v, s[v])).collect();
    sp.insert(4, s1[p1.apply(c)]);
    let mut pts1 = [0usize; 4];
    for v in 0..4 {
        pts1[p1.apply(v)] = if v == c { 4 } else { v };
    }
    let g2 = g.tri.gluing(t1, p1.apply(d));
    let mut pts2 = [0usize; 4];
    for v in 0..4 {
        pts2[g2.perm.apply(v)] = if v == p1.apply(d) { c } else { pts1[v] };
    }
    debug_assert_eq!(g2.tet, tets[2]);
    let new = vec![oriented([c, d, 4, a], &sp, opts.eps_geom)?, oriented([c, d, 4, b], &sp, opts.eps_geom)?];
    Some(retriangulate(g, &[(t, [0, 1, 2, 3]), (t1, pts1), (g2.tet, pts2)], &new, opts))
}

/// The tet across face `f` of `t`, its point labels and spinors, where `t`
/// has point labels `pts` and the far vertex gets point `far`.
fn step(g: &Geom, t: usize, pts: &[usize; 4], s: &[Spinor; 4], f: usize, far: usize) -> (usize, [usize; 4], [Spinor; 4]) {
    let gl = g.tri.gluing(t, f);
    let (u, su) = g.across(t, s, f);
    let mut out = [0; 4];
    for v in 0..4 {
        out[gl.perm.apply(v)] = if v == f { far } else { pts[v] };
    }
    (u, out, su)
}

/// Replaces the octahedron of four tets around the order-4 edge `xy` of
/// face `f` of `t` by the four tets around the diagonal a 2-3 move on
/// that face would create.
fn four_four(g: &Geom, t: usize, f: usize, x: usize, y: usize, opts: &CanonOptions) -> Option<Result<Geom, EpError>> {
    let cycle = g.tri.edge_cycle(t, x, y);
    let mut tets: Vec<usize> = cycle.iter().map(|c| c.0).collect();
    tets.sort();
    tets.dedup();
    if cycle.len() != 4 || tets.len() != 4 {
        return None;
    }
    // Points 0..3 are t's vertices; 4 and 5 are the remaining equator points.
    let p = f;
    let q = (0..4).find(|&v| v != x && v != y && v != p).unwrap();
    let s0 = g.spinors(t);
    let pts0 = [0, 1, 2, 3];
    let mut sp: HashMap<usize, Spinor> = (0..4).map(|v| (v, s0[v])).collect();
    let (u, pts1, s1) = step(g, t, &pts0, &s0, p, 4);
    let r_local = pts1.iter().position(|&a| a == 4).unwrap();
    sp.insert(4, s1[r_local]);
    let q1 = pts1.iter().position(|&a| a == q).unwrap();
    let (w, pts2, s2) = step(g, u, &pts1, &s1, q1, 5);
    sp.insert(5, s2[pts2.iter().position(|&a| a == 5).unwrap()]);
    let r2 = pts2.iter().position(|&a| a == 4).unwrap();
    let (z, pts3, _) = step(g, w, &pts2, &s2, r2, p);
    let mut seen = [t, u, w, z];
    seen.sort();
    if seen.to_vec() != tets {
        return None;
    }
    let ring = [x, q, y, 5];
    let mut new = Vec::new();
    for i in 0..4 {
        new.push(oriented([p, 4, ring[i], ring[(i + 1) % 4]], &sp, opts.eps_geom)?);
    }
    Some(retriangulate(g, &[(t, pts0), (u, pts1), (w, pts2), (z, pts3)], &new, opts))
}

/// Flips until no face has negative tilt at `v`.
pub fn flip_to_canonical(mut g: Geom, v: &[f64], opts: &CanonOptions) -> Result<Geom, EpError> {
    let budget = opts.move_budget.unwrap_or(50 * g.tri.tet_count() + 200);
    for _ in 0..budget {
        let mut worst: Option<(f64, usize, usize)> = None;
        for (t, f) in g.faces() {
            let row = g.face_row(t, f)?;
            let (tilt, class) = classify(&row, v, opts.eps_tilt);
            if class == TiltClass::Negative && worst.is_none_or(|w| tilt < w.0) {
                worst = Some((tilt, t, f));
            }
        }
        let Some((tilt, t, f)) = worst else { return Ok(g) };
        if let Some(next) = two_three(&g, t, f, opts) {
            g = next?;
            continue;
        }
        let face: Vec<usize> = (0..4).filter(|&x| x != f).collect();
        let edges = [(face[0], face[1]), (face[1], face[2]), (face[0], face[2])];
        let order = |x: usize, y: usize| g.tri.edge_orders()[g.tri.edge_class(t, edge_index(x, y))];
        let mut next = None;
        for &(x, y) in &edges {
            if next.is_none() && order(x, y) == 3 {
                next = three_two(&g, t, x, y, opts);
            }
        }
        for &(x, y) in &edges {
            if next.is_none() && order(x, y) == 4 {
                next = four_four(&g, t, f, x, y, opts);
            }
        }
        if let Some(n) = next {
            g = n?;
        } else {
            return Err(EpError::FlipFailed { tet: t, face: f, tilt });
        }
    }
    Err(EpError::MoveBudget(budget))
}

/// The triangulation after flipping to non-negative tilts at `v`, with its
/// shapes; zero-tilt faces are kept.
pub fn canonical_retriangulation(
    tri: &IdealTriangulation,
    shapes: &[Complex64],
    v: &SizeVector,
    opts: &CanonOptions,
) -> Result<(IdealTriangulation, Vec<Complex64>), EpError> {
    if v.len() != tri.cusp_count() {
        return Err(EpError::SizeMismatch { got: v.len(), cusps: tri.cusp_count() });
    }
    let g = flip_to_canonical(Geom::new(tri.clone(), shapes.to_vec()), v, opts)?;
    Ok((g.tri, g.shapes))
}

/// The canonical cell decomposition `D(v)`.
pub fn canonical_decomposition(
    tri: &IdealTriangulation,
    shapes: &[Complex64],
    v: &SizeVector,
    opts: &CanonOptions,
) -> Result<CellDecomposition, EpError> {
    if v.len() != tri.cusp_count() {
        return Err(EpError::SizeMismatch { got: v.len(), cusps: tri.cusp_count() });
    }
    let g = flip_to_canonical(Geom::new(tri.clone(), shapes.to_vec()), v, opts)?;
    CellDecomposition::from_geom(g, v, opts.eps_tilt)
}
