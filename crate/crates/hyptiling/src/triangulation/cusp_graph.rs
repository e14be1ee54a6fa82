//! Cusp cross-sections: the triangles cut off each ideal vertex, a spanning
//! tree of each cusp's dual graph, and symbolic holonomies of the
//! fundamental cycles.

use super::IdealTriangulation;
use crate::perm::{edge_index, Perm4};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Which edge parameter an edge of a tetrahedron carries:
/// 0 for `z`, 1 for `1/(1-z)`, 2 for `(z-1)/z`.
pub const EDGE_KIND: [usize; 6] = [0, 1, 2, 2, 1, 0];

pub fn edge_param(z: Complex64, kind: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    match kind {
        0 => z,
        1 => one / (one - z),
        _ => (z - one) / z,
    }
}

/// Derivative of `log(edge_param(z, kind))` with respect to `log z`.
pub fn dlog_param(z: Complex64, kind: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    match kind {
        0 => one,
        1 => z / (one - z),
        _ => one / (z - one),
    }
}

/// An integer combination of `log(edge parameter)` terms plus a multiple
/// of `iπ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogExpr {
    pub coeffs: Vec<i32>,
    pub ipi: i32,
}

impl LogExpr {
    pub fn zero(n: usize) -> Self {
        LogExpr { coeffs: vec![0; 3 * n], ipi: 0 }
    }

    fn add_term(&mut self, tet: usize, kind: usize, c: i32) {
        self.coeffs[3 * tet + kind] += c;
    }

    fn sub(&self, other: &LogExpr) -> LogExpr {
        LogExpr {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
            ipi: self.ipi - other.ipi,
        }
    }

    /// Value using principal logarithms.
    pub fn value(&self, shapes: &[Complex64]) -> Complex64 {
        let mut s = Complex64::new(0.0, PI * self.ipi as f64);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                s += edge_param(shapes[i / 3], i % 3).ln() * c as f64;
            }
        }
        s
    }

    /// Value reduced so that the imaginary part lies in `(-π, π]`.
    pub fn value_mod_2pi(&self, shapes: &[Complex64]) -> Complex64 {
        let v = self.value(shapes);
        let k = (v.im / (2.0 * PI)).round();
        Complex64::new(v.re, v.im - 2.0 * PI * k)
    }

    /// Gradient with respect to the log-shapes.
    pub fn gradient(&self, shapes: &[Complex64]) -> Vec<Complex64> {
        let mut g = vec![Complex64::new(0.0, 0.0); shapes.len()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                g[i / 3] += dlog_param(shapes[i / 3], i % 3) * c as f64;
            }
        }
        g
    }
}

/// A corner `u` of the cusp triangle at vertex `v` of `tet`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CuspTriangle {
    pub tet: usize,
    pub vertex: usize,
}

impl CuspTriangle {
    /// The other three vertices of the tet, counterclockwise as seen from
    /// `vertex`.
    pub fn ccw(&self) -> [usize; 3] {
        let p = Perm4::even_with_first(self.vertex);
        [p.apply(1), p.apply(2), p.apply(3)]
    }
}

/// Non-tree dual edge: the segment `x→y` of triangle `a` is the segment
/// `x2→y2` of triangle `b`.
#[derive(Clone, Debug)]
pub struct CuspCycle {
    pub cusp: usize,
    pub a: usize,
    pub xy: (usize, usize),
    pub b: usize,
    pub xy2: (usize, usize),
    pub holonomy: LogExpr,
}

#[derive(Clone, Debug)]
pub struct CuspGraph {
    pub triangles: Vec<CuspTriangle>,
    pub cusp_of: Vec<usize>,
    /// Triangle index of `(tet, vertex)` is `4 * tet + vertex`.
    /// Parent triangle and the shared corner pair (in the child's labels).
    pub parent: Vec<Option<(usize, usize, usize)>>,
    /// BFS order per cusp.
    pub order: Vec<Vec<usize>>,
    /// Expression for the side `a→b`, `(a, b, c)` the ccw corners.
    pub reference: Vec<LogExpr>,
    pub cycles: Vec<CuspCycle>,
}

/// Offset of side `x→y` relative to the reference side `a→b`.
fn side_offset(tri: CuspTriangle, x: usize, y: usize, n: usize) -> LogExpr {
    let [a, b, c] = tri.ccw();
    let mut e = LogExpr::zero(n);
    let kind = |u: usize| EDGE_KIND[edge_index(tri.vertex, u)];
    match (x, y) {
        _ if (x, y) == (a, b) => {}
        _ if (x, y) == (b, a) => e.ipi = 1,
        _ if (x, y) == (a, c) => e.add_term(tri.tet, kind(a), 1),
        _ if (x, y) == (c, a) => {
            e.add_term(tri.tet, kind(a), 1);
            e.ipi = 1;
        }
        _ if (x, y) == (c, b) => e.add_term(tri.tet, kind(b), -1),
        _ if (x, y) == (b, c) => {
            e.add_term(tri.tet, kind(b), -1);
            e.ipi = 1;
        }
        _ => panic!("({x},{y}) is not a side of the cusp triangle"),
    }
    e
}

/// The neighbor across the side `x y` of a cusp triangle, with the
/// images of `x` and `y`.
pub fn across(tri: &IdealTriangulation, t: CuspTriangle, x: usize, y: usize) -> (CuspTriangle, usize, usize) {
    let c = (0..4).find(|&u| u != t.vertex && u != x && u != y).unwrap();
    let g = tri.gluing(t.tet, c);
    (CuspTriangle { tet: g.tet, vertex: g.perm.apply(t.vertex) }, g.perm.apply(x), g.perm.apply(y))
}

impl CuspGraph {
    pub fn new(tri: &IdealTriangulation) -> Self {
        let n = tri.tet_count();
        let triangles: Vec<CuspTriangle> =
            (0..4 * n).map(|i| CuspTriangle { tet: i / 4, vertex: i % 4 }).collect();
        let cusp_of: Vec<usize> = triangles.iter().map(|t| tri.cusp_of(t.tet, t.vertex)).collect();
        let mut parent = vec![None; 4 * n];
        let mut reference: Vec<Option<LogExpr>> = vec![None; 4 * n];
        let mut order = vec![Vec::new(); tri.cusp_count()];
        let mut cycles = Vec::new();
        let idx = |t: CuspTriangle| 4 * t.tet + t.vertex;
        for root in 0..4 * n {
            if reference[root].is_some() {
                continue;
            }
            let cusp = cusp_of[root];
            reference[root] = Some(LogExpr::zero(n));
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(i) = queue.pop_front() {
                order[cusp].push(i);
                let t = triangles[i];
                let [a, b, c] = t.ccw();
                for (x, y) in [(a, b), (b, c), (c, a)] {
                    let here = reference[i].as_ref().unwrap();
                    let off = side_offset(t, x, y, n);
                    let mut seg = here.clone();
                    for (s, o) in seg.coeffs.iter_mut().zip(&off.coeffs) {
                        *s += o;
                    }
                    seg.ipi += off.ipi;
                    let (nb, x2, y2) = across(tri, t, x, y);
                    let j = idx(nb);
                    match &reference[j] {
                        None => {
                            let off2 = side_offset(nb, x2, y2, n);
                            reference[j] = Some(seg.sub(&off2));
                            parent[j] = Some((i, x2, y2));
                            queue.push_back(j);
                        }
                        Some(r2) => {
                            // Each dual edge once: skip the tree edge back to the
                            // parent, and record a non-tree edge from its smaller end.
                            let side = |a: usize, b: usize| (a.min(b), a.max(b));
                            let is_tree = parent[j].is_some_and(|(p, px, py)| p == i && side(px, py) == side(x2, y2))
                                || parent[i].is_some_and(|(p, px, py)| p == j && side(px, py) == side(x, y));
                            if is_tree || (j, side(x2, y2)) < (i, side(x, y)) {
                                continue;
                            }
                            let off2 = side_offset(nb, x2, y2, n);
                            let mut seg2 = r2.clone();
                            for (s, o) in seg2.coeffs.iter_mut().zip(&off2.coeffs) {
                                *s += o;
                            }
                            seg2.ipi += off2.ipi;
                            cycles.push(CuspCycle { cusp, a: i, xy: (x, y), b: j, xy2: (x2, y2), holonomy: seg2.sub(&seg) });
                        }
                    }
                }
            }
        }
        CuspGraph {
            triangles,
            cusp_of,
            parent,
            order,
            reference: reference.into_iter().map(|r| r.unwrap()).collect(),
            cycles,
        }
    }

    /// Developed corner positions of every cusp triangle (indexed by tet
    /// vertex; the entry at the cusp vertex itself is unused). Each cusp's
    /// root triangle has its reference side from 0 to 1.
    pub fn develop(&self, tri: &IdealTriangulation, shapes: &[Complex64]) -> Vec<[Complex64; 4]> {
        let n = shapes.len();
        let zero = Complex64::new(0.0, 0.0);
        let mut pos = vec![[zero; 4]; 4 * n];
        let mut placed = vec![false; 4 * n];
        for ord in &self.order {
            for &i in ord {
                let t = self.triangles[i];
                let [a, b, c] = t.ccw();
                let s_ab = self.reference[i].value(shapes).exp();
                let pa = match self.parent[i] {
                    None => zero,
                    Some((p, x2, y2)) => {
                        let (_, bx, _) = across(tri, t, x2, y2);
                        let px = pos[p][bx];
                        if x2 == a {
                            px
                        } else {
                            px - s_ab * side_offset(t, a, x2, n).value(shapes).exp()
                        }
                    }
                };
                let kind = |u: usize| EDGE_KIND[edge_index(t.vertex, u)];
                pos[i][a] = pa;
                pos[i][b] = pa + s_ab;
                pos[i][c] = pa + s_ab * edge_param(shapes[t.tet], kind(a));
                placed[i] = true;
            }
        }
        debug_assert!(placed.iter().all(|&p| p));
        pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;

    #[test]
    fn cycle_count_per_cusp() {
        let tri = assets::borromean();
        let g = CuspGraph::new(&tri);
        for c in 0..tri.cusp_count() {
            let tris = g.order[c].len();
            let cyc = g.cycles.iter().filter(|k| k.cusp == c).count();
            assert_eq!(cyc, tris / 2 + 1);
        }
    }

    #[test]
    fn developed_sides_agree_with_expressions() {
        let tri = assets::figure_eight();
        let z = Complex64::from_polar(1.0, PI / 3.0);
        let shapes = vec![z; 2];
        let g = CuspGraph::new(&tri);
        let pos = g.develop(&tri, &shapes);
        for (i, t) in g.triangles.iter().enumerate() {
            let [a, b, _] = t.ccw();
            let s = pos[i][b] - pos[i][a];
            assert!((s - g.reference[i].value(&shapes).exp()).norm() < 1e-12);
            if let Some((p, x2, y2)) = g.parent[i] {
                let (back, bx, by) = across(&tri, *t, x2, y2);
                assert_eq!(g.triangles[p], back);
                assert!((pos[p][bx] - pos[i][x2]).norm() < 1e-12);
                assert!((pos[p][by] - pos[i][y2]).norm() < 1e-12);
            }
        }
    }
}
