//! Spinor coordinates for ideal vertices with horospheres, their light-like
//! lifts, and developing tetrahedra.

use super::MinkowskiVector;
use crate::perm::{edge_index, Perm4};
use crate::triangulation::cusp_graph::{edge_param, CuspGraph, EDGE_KIND};
use crate::triangulation::IdealTriangulation;
use num_complex::Complex64;

/// A point of `C^2`: the ideal point `s[0]/s[1]` with a horosphere whose
/// size is encoded by the magnitude. A common phase is irrelevant.
pub type Spinor = [Complex64; 2];

pub fn det(a: &Spinor, b: &Spinor) -> Complex64 {
    a[0] * b[1] - a[1] * b[0]
}

/// The light-like Minkowski vector of a spinor. For two spinors,
/// `lift(a) * lift(b) = -|det(a, b)|^2 / 2`.
pub fn lift(s: &Spinor) -> MinkowskiVector {
    let (a, b) = (s[0].norm_sqr(), s[1].norm_sqr());
    let m = s[0] * s[1].conj();
    MinkowskiVector([m.re, m.im, (a - b) / 2.0, (a + b) / 2.0])
}

/// Cross ratio `[x, y; u, w]` of four ideal points. For an even ordering
/// `(x, y, u, w)` of a positively oriented tetrahedron it is the edge
/// parameter of the edge `xy`.
pub fn cross_ratio(x: &Spinor, y: &Spinor, u: &Spinor, w: &Spinor) -> Complex64 {
    det(x, u) * det(y, w) / (det(x, w) * det(y, u))
}

/// The shape parameter of a tetrahedron (edge `01`) from its vertices.
pub fn shape_of(s: &[Spinor; 4]) -> Complex64 {
    cross_ratio(&s[0], &s[1], &s[2], &s[3])
}

/// Horosphere distances `λ` of the six edges of every tetrahedron (indexed
/// by `edge_index`), for cusp cross-sections of area 1.
///
/// With `ℓ_i(jk)` the length of the side `jk` of the cusp triangle at `i`,
/// `λ_ij = 2 / sqrt(ℓ_i(jk) ℓ_j(ik))`.
pub fn lambda_lengths(tri: &IdealTriangulation, shapes: &[Complex64]) -> Vec<[f64; 6]> {
    let g = CuspGraph::new(tri);
    let pos = g.develop(tri, shapes);
    let mut area = vec![0.0; tri.cusp_count()];
    for (i, t) in g.triangles.iter().enumerate() {
        let [a, b, c] = t.ccw();
        let (u, w) = (pos[i][b] - pos[i][a], pos[i][c] - pos[i][a]);
        area[tri.cusp_of(t.tet, t.vertex)] += (u.conj() * w).im / 2.0;
    }
    let side = |t: usize, i: usize, j: usize, k: usize| {
        let p = &pos[4 * t + i];
        (p[k] - p[j]).norm() / area[tri.cusp_of(t, i)].sqrt()
    };
    (0..tri.tet_count())
        .map(|t| {
            let mut lam = [0.0; 6];
            for i in 0..4 {
                for j in i + 1..4 {
                    let k = (0..4).find(|&k| k != i && k != j).unwrap();
                    lam[edge_index(i, j)] = 2.0 / (side(t, i, j, k) * side(t, j, i, k)).sqrt();
                }
            }
            lam
        })
        .collect()
}

/// Vertices at `∞, 0, 1, z` with horospheres realizing `λ`.
pub fn standard_spinors(z: Complex64, lam: &[f64; 6]) -> [Spinor; 4] {
    let a0 = (lam[0] * lam[1] / lam[3]).sqrt();
    let b = [lam[0] / a0, lam[1] / a0, lam[2] / a0];
    let c = |x: f64| Complex64::new(x, 0.0);
    [[c(a0), c(0.0)], [c(0.0), c(b[0])], [c(b[1]), c(b[1])], [z * b[2], c(b[2])]]
}

/// Fills in the one missing vertex of a tetrahedron of shape `z` and
/// horosphere distances `lam` from the other three.
pub fn complete_tet(z: Complex64, lam: &[f64; 6], known: [Option<Spinor>; 4]) -> [Spinor; 4] {
    let b = known.iter().position(|s| s.is_none()).expect("one vertex missing");
    let mut k: Vec<usize> = (0..4).filter(|&v| v != b).collect();
    if !Perm4([k[0] as u8, k[1] as u8, k[2] as u8, b as u8]).is_even() {
        k.swap(0, 1);
    }
    let (x, y, u) = (k[0], k[1], k[2]);
    let [sx, sy, su] = [known[x].unwrap(), known[y].unwrap(), known[u].unwrap()];
    let zxy = edge_param(z, EDGE_KIND[edge_index(x, y)]);
    let (dxu, dyu, dxy) = (det(&sx, &su), det(&sy, &su), det(&sx, &sy));
    let scale = lam[edge_index(x, b)] / (dxu.norm() * dxy.norm());
    let sb = [(zxy * dyu * sx[0] - dxu * sy[0]) * scale, (zxy * dyu * sx[1] - dxu * sy[1]) * scale];
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 4];
    for v in 0..4 {
        out[v] = if v == b { sb } else { known[v].unwrap() };
    }
    out
}

/// Vertices of the tetrahedron across face `f` of `tet`, whose vertices are
/// `s`, in the same frame. Returns the neighbor and its vertices in its
/// own labels.
pub fn develop_across(
    tri: &IdealTriangulation,
    shapes: &[Complex64],
    lam: &[[f64; 6]],
    tet: usize,
    s: &[Spinor; 4],
    f: usize,
) -> (usize, [Spinor; 4]) {
    let g = tri.gluing(tet, f);
    let mut known = [None; 4];
    for v in (0..4).filter(|&v| v != f) {
        known[g.perm.apply(v)] = Some(s[v]);
    }
    (g.tet, complete_tet(shapes[g.tet], &lam[g.tet], known))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;
    use crate::epstein_penner::minkowski_inner;
    use crate::triangulation::{solve_shapes, SolveOptions};

    #[test]
    fn standard_position_realizes_lambda() {
        for tri in [assets::figure_eight(), assets::borromean(), assets::figure_eight_sister()] {
            let shapes = solve_shapes(&tri, &SolveOptions::default()).unwrap().shapes;
            let lam = lambda_lengths(&tri, &shapes);
            for t in 0..tri.tet_count() {
                let s = standard_spinors(shapes[t], &lam[t]);
                assert!((shape_of(&s) - shapes[t]).norm() < 1e-10);
                for i in 0..4 {
                    for j in i + 1..4 {
                        let d = det(&s[i], &s[j]).norm();
                        assert!((d - lam[t][edge_index(i, j)]).abs() < 1e-9 * d, "{t} {i}{j}");
                        let m = minkowski_inner(&lift(&s[i]), &lift(&s[j]));
                        assert!((m + d * d / 2.0).abs() < 1e-9 * d * d);
                    }
                }
            }
            // λ is a function of the edge class.
            for members in tri.edge_members() {
                let (t0, e0) = members[0];
                for &(t, e) in &members {
                    assert!((lam[t][e] - lam[t0][e0]).abs() < 1e-9 * lam[t0][e0]);
                }
            }
        }
    }

    #[test]
    fn development_matches_across_faces() {
        let tri = assets::borromean();
        let shapes = solve_shapes(&tri, &SolveOptions::default()).unwrap().shapes;
        let lam = lambda_lengths(&tri, &shapes);
        for t in 0..tri.tet_count() {
            let s = standard_spinors(shapes[t], &lam[t]);
            for f in 0..4 {
                let (u, su) = develop_across(&tri, &shapes, &lam, t, &s, f);
                assert!((shape_of(&su) - shapes[u]).norm() < 1e-9);
                for i in 0..4 {
                    for j in i + 1..4 {
                        assert!((det(&su[i], &su[j]).norm() - lam[u][edge_index(i, j)]).abs() < 1e-9);
                    }
                }
            }
        }
    }
}
