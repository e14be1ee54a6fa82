//! The cusp triangulation T0: horizontal strips of triangles, one triangle
//! per letter, stacked by reflection. Everything is stored on the quotient
//! by Γ0 (four strips times one period).

use super::{Letter, LRWord, PtbError};
use crate::perm::edge_index;
use crate::triangulation::cusp_graph::{across, CuspTriangle};
use crate::triangulation::IdealTriangulation;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A triangle of T0/Γ0. Corners are counterclockwise; side `k` joins
/// corners `k` and `k+1`, and side 0 is always the horizontal one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct T0Triangle {
    pub strip: usize,
    pub letter: usize,
    pub vertices: [usize; 3],
    pub edges: [usize; 3],
    /// Neighbor triangle and its side index across each side.
    pub neighbors: [(usize, usize); 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct T0Edge {
    pub horizontal: bool,
    pub ends: [usize; 2],
    /// Strip of a crossing edge; the lower line of a horizontal one.
    pub strip: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuspTriangulationT0 {
    pub word: LRWord,
    pub triangles: Vec<T0Triangle>,
    pub edges: Vec<T0Edge>,
    /// `(line, index)` of each vertex; even lines carry one vertex per L.
    pub vertex_pos: Vec<(usize, i64)>,
    /// Horizontal coordinate for drawing.
    pub vertex_x: Vec<f64>,
    pub vertex_order: Vec<usize>,
    /// `-1` for right to left, `+1` for left to right. Strip 0 runs right
    /// to left and the directions alternate.
    pub strip_direction: [i8; 4],
    /// Γ0 generators as `(strips, periods)`.
    pub gamma0: [(i64, i64); 2],
    /// Edge-of-T label of every vertex and edge.
    pub vertex_label: Vec<usize>,
    pub edge_label: Vec<usize>,
    pub label_count: usize,
}

struct Builder<'a> {
    w: &'a LRWord,
    n: i64,
    count: [i64; 2],
    pos: [Vec<i64>; 2],
}

fn kind(l: Letter) -> usize {
    match l {
        Letter::L => 0,
        Letter::R => 1,
    }
}

impl Builder<'_> {
    /// Letters of type `k` strictly before position `i` (any integer).
    fn before(&self, k: usize, i: i64) -> i64 {
        let q = i.div_euclid(self.n);
        let r = i.rem_euclid(self.n) as usize;
        q * self.count[k] + self.w.letters[..r].iter().filter(|l| kind(**l) == k).count() as i64
    }

    fn shift(&self, periods: i64) -> i64 {
        if self.w.positive {
            0
        } else {
            2 * periods
        }
    }

    fn vertex(&self, line: i64, u: i64) -> (usize, i64) {
        let p = self.count[line.rem_euclid(2) as usize];
        let k = u.div_euclid(p);
        ((line - self.shift(k)).rem_euclid(4) as usize, u - k * p)
    }

    fn triangle(&self, strip: i64, i: i64) -> (usize, usize) {
        let k = i.div_euclid(self.n);
        ((strip - self.shift(k)).rem_euclid(4) as usize, i.rem_euclid(self.n) as usize)
    }

    fn x(&self, line: usize, u: i64) -> f64 {
        let k = line % 2;
        let p = self.count[k];
        (self.pos[k][u.rem_euclid(p) as usize] + self.n * u.div_euclid(p)) as f64
    }

    /// Base line, base-left, base-right and apex of triangle `(strip, i)`,
    /// as unreduced `(line, index)` pairs.
    fn corners(&self, strip: i64, i: i64) -> (i64, [(i64, i64); 3]) {
        let l = self.w.letters[i.rem_euclid(self.n) as usize];
        let k = kind(l);
        let base_on_bottom = (k == 0) == (strip.rem_euclid(2) == 0);
        let (base_line, apex_line) = if base_on_bottom { (strip, strip + 1) } else { (strip + 1, strip) };
        let u = self.before(k, i);
        let a = self.before(1 - k, i);
        (base_line, [(base_line, u), (base_line, u + 1), (apex_line, a)])
    }
}

/// Builds T0/Γ0 for a hyperbolic word, with edge-of-T labels.
pub fn cusp_triangulation(w: &LRWord) -> Result<CuspTriangulationT0, PtbError> {
    if !w.is_hyperbolic() {
        return Err(PtbError::NotHyperbolic(w.to_string()));
    }
    let n = w.len() as i64;
    let mut pos = [Vec::new(), Vec::new()];
    for (i, l) in w.letters.iter().enumerate() {
        pos[kind(*l)].push(i as i64);
    }
    let b = Builder { w, n, count: [pos[0].len() as i64, pos[1].len() as i64], pos };

    let mut vertex_pos = Vec::new();
    let mut vertex_x = Vec::new();
    let mut vid = HashMap::new();
    for line in 0..4usize {
        for u in 0..b.count[line % 2] {
            vid.insert((line, u), vertex_pos.len());
            vertex_pos.push((line, u));
            vertex_x.push(b.x(line, u));
        }
    }
    let tid = |(s, i): (usize, usize)| s * w.len() + i;

    let mut triangles = Vec::new();
    let mut edges: Vec<T0Edge> = Vec::new();
    let mut horizontal_id = HashMap::new();
    // Crossing edge to the right of triangle t has id t.
    for s in 0..4 {
        for i in 0..n {
            let (_, c) = b.corners(s, i);
            let ends = [vid[&b.vertex(c[1].0, c[1].1)], vid[&b.vertex(c[2].0, c[2].1)]];
            edges.push(T0Edge { horizontal: false, ends, strip: s as usize });
        }
    }
    for s in 0..4i64 {
        for i in 0..n {
            let (base_line, c) = b.corners(s, i);
            let v: Vec<usize> = c.iter().map(|&(l, u)| vid[&b.vertex(l, u)]).collect();
            let (bl, br, apex) = (v[0], v[1], v[2]);
            let left = tid(b.triangle(s, i - 1));
            let right = tid(b.triangle(s, i));
            let hkey = b.vertex(c[0].0, c[0].1);
            let h = *horizontal_id.entry(hkey).or_insert_with(|| {
                edges.push(T0Edge { horizontal: true, ends: [bl, br], strip: base_line.rem_euclid(4) as usize });
                edges.len() - 1
            });
            let other_strip = if base_line == s { s - 1 } else { s + 1 };
            let across_base = (tid(b.triangle(other_strip, i)), 0);
            let next = tid(b.triangle(s, i + 1));
            let prev = left;
            let bottom = base_line == s;
            // Side 1 and 2 are the crossing sides; which is left depends on
            // whether the base is on the bottom.
            let (vertices, es, nbrs) = if bottom {
                ([bl, br, apex], [h, right, left], [across_base, (next, 2), (prev, 1)])
            } else {
                ([br, bl, apex], [h, left, right], [across_base, (prev, 2), (next, 1)])
            };
            triangles.push(T0Triangle { strip: s as usize, letter: i as usize, vertices, edges: es, neighbors: nbrs });
        }
    }
    // Fix neighbor side indices: the neighbor's side holding the same edge.
    for t in 0..triangles.len() {
        for k in 0..3 {
            let (u, _) = triangles[t].neighbors[k];
            let e = triangles[t].edges[k];
            let k2 = (0..3).find(|&k2| triangles[u].edges[k2] == e && (u != t || k2 != k)).expect("edge shared");
            triangles[t].neighbors[k].1 = k2;
        }
    }

    let nv = vertex_pos.len();
    let mut vertex_order = vec![0; nv];
    for t in &triangles {
        for &v in &t.vertices {
            vertex_order[v] += 1;
        }
    }
    let strip_direction = [-1, 1, -1, 1];
    let gamma0 = if w.positive { [(4, 0), (0, 1)] } else { [(4, 0), (2, 1)] };

    let mut t0 = CuspTriangulationT0 {
        word: w.clone(),
        triangles,
        edges,
        vertex_pos,
        vertex_x,
        vertex_order,
        strip_direction,
        gamma0,
        vertex_label: Vec::new(),
        edge_label: Vec::new(),
        label_count: 0,
    };
    let (vl, el, count) = edge_correspondence(&t0);
    t0.vertex_label = vl;
    t0.edge_label = el;
    t0.label_count = count;
    Ok(t0)
}

impl CuspTriangulationT0 {
    /// The triangle on the side of crossing edge `e` that its strip's
    /// direction points to, with the side index of `e` in it.
    pub fn ahead(&self, e: usize) -> (usize, usize) {
        let t = e; // crossing edge ids coincide with the triangle on their left
        let right_side = (1..3).find(|&k| self.triangles[t].edges[k] == e).unwrap();
        if self.strip_direction[self.edges[e].strip] < 0 {
            (t, right_side)
        } else {
            self.triangles[t].neighbors[right_side]
        }
    }

    fn opposite(&self, t: usize, side: usize) -> usize {
        self.triangles[t].vertices[(side + 2) % 3]
    }
}

/// Labels every vertex and edge of T0 by an edge of T. Vertices two strips
/// apart share a label; a crossing edge gets
/// the label of the vertex opposite it in the triangle its strip direction
/// points to; a horizontal edge that of the opposite vertices on both
/// sides. Returns vertex labels, edge labels and the number of labels.
pub fn edge_correspondence(t0: &CuspTriangulationT0) -> (Vec<usize>, Vec<usize>, usize) {
    let nv = t0.vertex_pos.len();
    let ne = t0.edges.len();
    let mut uf = UnionFind::<usize>::new(nv + ne);
    // The two ends of an edge of T are swapped by the central symmetry,
    // the shift by two strips.
    for (v, &(line, u)) in t0.vertex_pos.iter().enumerate() {
        let w = t0.vertex_pos.iter().position(|&p| p == ((line + 2) % 4, u)).unwrap();
        uf.union(v, w);
    }
    for (e, edge) in t0.edges.iter().enumerate() {
        if edge.horizontal {
            for (t, tri) in t0.triangles.iter().enumerate() {
                if tri.edges[0] == e {
                    uf.union(nv + e, t0.opposite(t, 0));
                }
            }
        } else {
            let (t, side) = t0.ahead(e);
            uf.union(nv + e, t0.opposite(t, side));
        }
    }
    let mut ids = HashMap::new();
    let mut label = |x: usize| {
        let r = uf.find(x);
        let next = ids.len();
        *ids.entry(r).or_insert(next)
    };
    let vl: Vec<usize> = (0..nv).map(&mut label).collect();
    let el: Vec<usize> = (0..ne).map(|e| label(nv + e)).collect();
    (vl, el, ids.len())
}

/// A closed triangulated surface: neighbor across each side and a label at
/// each corner. Adjacent triangles traverse their common side oppositely.
pub(crate) struct Surface {
    pub nbr: Vec<[(usize, usize); 3]>,
    pub corner_label: Vec<[usize; 3]>,
    pub side_label: Vec<[usize; 3]>,
}

/// Triangle map `t -> (image, r, reflect)`: corner `k` goes to corner
/// `k + r`, or `r - k` when reflecting.
pub(crate) type SurfaceMap = Vec<(usize, usize, bool)>;

fn corner_image(r: usize, reflect: bool, k: usize) -> usize {
    if reflect {
        (r + 3 - k) % 3
    } else {
        (k + r) % 3
    }
}

fn side_image(r: usize, reflect: bool, k: usize) -> usize {
    if reflect {
        (r + 5 - k) % 3
    } else {
        (k + r) % 3
    }
}

/// Extends `0 -> (t, r, reflect)` to an isomorphism. Labels must
/// correspond bijectively, or be equal when `equal_labels` is set.
pub(crate) fn extend_surface_map(
    a: &Surface,
    b: &Surface,
    t: usize,
    r: usize,
    reflect: bool,
    equal_labels: bool,
) -> Option<SurfaceMap> {
    let n = a.nbr.len();
    if b.nbr.len() != n {
        return None;
    }
    let mut map: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut used = vec![false; n];
    let mut labels: HashMap<usize, usize> = HashMap::new();
    let mut inverse: HashMap<usize, usize> = HashMap::new();
    map[0] = Some((t, r));
    used[t] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        let (j, r) = map[i].unwrap();
        for k in 0..3 {
            let la = a.corner_label[i][k];
            let lb = b.corner_label[j][corner_image(r, reflect, k)];
            let sa = a.side_label[i][k];
            let sb = b.side_label[j][side_image(r, reflect, k)];
            for (la, lb) in [(la, lb), (sa, sb)] {
                if equal_labels {
                    if la != lb {
                        return None;
                    }
                } else if *labels.entry(la).or_insert(lb) != lb || *inverse.entry(lb).or_insert(la) != la {
                    return None;
                }
            }
            let (i2, k2) = a.nbr[i][k];
            let (j2, s2) = b.nbr[j][side_image(r, reflect, k)];
            let r2 = if reflect { (s2 + k2 + 1) % 3 } else { (s2 + 3 - k2) % 3 };
            match map[i2] {
                Some(m) if m == (j2, r2) => {}
                Some(_) => return None,
                None => {
                    if used[j2] {
                        return None;
                    }
                    used[j2] = true;
                    map[i2] = Some((j2, r2));
                    stack.push(i2);
                }
            }
        }
    }
    Some(
        map.into_iter()
            .map(|m| {
                let (j, r) = m.unwrap();
                (j, r, reflect)
            })
            .collect(),
    )
}

impl CuspTriangulationT0 {
    pub(crate) fn surface(&self) -> Surface {
        Surface {
            nbr: self.triangles.iter().map(|t| t.neighbors).collect(),
            corner_label: self.triangles.iter().map(|t| t.vertices.map(|v| self.vertex_label[v])).collect(),
            side_label: self.triangles.iter().map(|t| t.edges.map(|e| self.edge_label[e])).collect(),
        }
    }

    /// Order of the edge of T each label stands for.
    pub fn label_orders(&self) -> Vec<usize> {
        let mut out = vec![0; self.label_count];
        for (v, &l) in self.vertex_label.iter().enumerate() {
            out[l] = self.vertex_order[v];
        }
        out
    }

    /// The surface with every label replaced by the order of its edge of T.
    fn order_surface(&self) -> Surface {
        let orders = self.label_orders();
        let mut s = self.surface();
        for row in s.corner_label.iter_mut().chain(s.side_label.iter_mut()) {
            *row = row.map(|l| orders[l]);
        }
        s
    }
}

/// The cusp link of a one-cusped triangulation as a surface whose corners
/// are labeled by edge classes.
pub(crate) fn cusp_link_surface(tri: &IdealTriangulation) -> Surface {
    let n = tri.tet_count();
    let mut nbr = Vec::with_capacity(4 * n);
    let mut corner_label = Vec::with_capacity(4 * n);
    let mut side_label = Vec::with_capacity(4 * n);
    for t in 0..n {
        for v in 0..4 {
            let ct = CuspTriangle { tet: t, vertex: v };
            let c = ct.ccw();
            corner_label.push(c.map(|u| tri.edge_class(t, edge_index(v, u))));
            // A side lies in a face of T; its label is the face's edge
            // opposite this cusp.
            side_label.push([0, 1, 2].map(|k| tri.edge_class(t, edge_index(c[k], c[(k + 1) % 3]))));
            let mut row = [(0, 0); 3];
            for k in 0..3 {
                let (nb, x2, _) = across(tri, ct, c[k], c[(k + 1) % 3]);
                let c2 = nb.ccw();
                // Sides are traversed oppositely, so x2 is the second corner
                // of the neighbor's side.
                let k2 = (c2.iter().position(|&u| u == x2).unwrap() + 2) % 3;
                row[k] = (4 * nb.tet + nb.vertex, k2);
            }
            nbr.push(row);
        }
    }
    Surface { nbr, corner_label, side_label }
}

/// Whether T0/Γ0 is isomorphic to the cusp link of `tri`, with edge-of-T
/// labels corresponding to edge classes.
pub fn matches_cusp_link(t0: &CuspTriangulationT0, tri: &IdealTriangulation) -> bool {
    let a = t0.surface();
    let b = cusp_link_surface(tri);
    (0..b.nbr.len()).any(|t| (0..3).any(|r| [false, true].iter().any(|&f| extend_surface_map(&a, &b, t, r, f, false).is_some())))
}

/// A simplicial automorphism of T0/Γ0 preserving the order labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct T0Automorphism {
    /// Image triangle and corner offset for each triangle.
    pub triangles: Vec<(usize, usize)>,
    pub orientation_reversing: bool,
    pub preserves_strips: bool,
    pub preserves_directions: bool,
}

pub const T0_BRUTEFORCE_MAX_LEN: usize = 16;

/// Every automorphism of T0/Γ0 that preserves the order of the edge of T
/// labeling each vertex and edge, found by trying all images of one flag.
pub fn t0_symmetry_bruteforce(w: &LRWord) -> Result<Vec<T0Automorphism>, PtbError> {
    if w.len() > T0_BRUTEFORCE_MAX_LEN {
        return Err(PtbError::TooLong { len: w.len(), bound: T0_BRUTEFORCE_MAX_LEN });
    }
    let t0 = cusp_triangulation(w)?;
    let s = t0.order_surface();
    let mut out = Vec::new();
    for t in 0..s.nbr.len() {
        for r in 0..3 {
            for reflect in [false, true] {
                let Some(map) = extend_surface_map(&s, &s, t, r, reflect, true) else { continue };
                let preserves_strips = map.iter().all(|&(_, r, f)| side_image(r, f, 0) == 0);
                let preserves_directions = preserves_strips
                    && t0.edges.iter().enumerate().filter(|(_, e)| !e.horizontal).all(|(e, _)| {
                        let (ta, ka) = t0.ahead(e);
                        let (img, r, f) = map[ta];
                        let e2 = t0.triangles[img].edges[side_image(r, f, ka)];
                        t0.ahead(e2) == (img, side_image(r, f, ka))
                    });
                out.push(T0Automorphism {
                    triangles: map.iter().map(|&(j, r, _)| (j, r)).collect(),
                    orientation_reversing: reflect,
                    preserves_strips,
                    preserves_directions,
                });
            }
        }
    }
    Ok(out)
}
