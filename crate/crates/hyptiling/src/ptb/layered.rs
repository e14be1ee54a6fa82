//! The layered (monodromy) triangulation of a punctured torus bundle.
//!
//! Each letter flips one diagonal of the current triangulation of the
//! torus. The flip is a tetrahedron over the parallelogram with corners
//! `0, x, x+y, y`: its bottom faces contain the old diagonal `x+y`, its top
//! faces the new diagonal `y-x`.

use super::{word_to_matrix, Letter, LRWord, PtbError};
use crate::perm::Perm4;
use crate::triangulation::{Gluing, IdealTriangulation};

type V2 = [i64; 2];

fn apply(m: [[i64; 2]; 2], v: V2) -> V2 {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

fn neg(v: V2) -> V2 {
    [-v[0], -v[1]]
}

fn add(a: V2, b: V2) -> V2 {
    [a[0] + b[0], a[1] + b[1]]
}

/// A face of a layer tetrahedron: its counterclockwise side vectors and the
/// tet vertex at the start of each side.
#[derive(Clone, Copy, Debug)]
struct LayerFace {
    face: usize,
    sides: [V2; 3],
    corner: [usize; 3],
}

impl LayerFace {
    /// Rotation-invariant key of the underlying triangle of the torus.
    fn key(&self) -> [V2; 3] {
        (0..3).map(|r| [self.sides[r], self.sides[(r + 1) % 3], self.sides[(r + 2) % 3]]).min().unwrap()
    }

    fn corner_of(&self, side: V2) -> usize {
        self.corner[self.sides.iter().position(|s| *s == side).unwrap()]
    }

    fn transformed(&self, m: [[i64; 2]; 2]) -> LayerFace {
        LayerFace { sides: self.sides.map(|s| apply(m, s)), ..*self }
    }
}

// Tet vertex labels: A = 0, B = 1, D = 2, C = 3, which makes every layer
// tetrahedron positively oriented.
const A: usize = 0;
const B: usize = 1;
const D: usize = 2;
const C: usize = 3;

struct Layer {
    bottom: [LayerFace; 2],
    top: [LayerFace; 2],
}

fn layer(x: V2, y: V2) -> Layer {
    let xy = add(x, y);
    let f = |face, sides, corner| LayerFace { face, sides, corner };
    Layer {
        bottom: [f(D, [x, y, neg(xy)], [A, B, C]), f(B, [xy, neg(x), neg(y)], [A, C, D])],
        top: [f(C, [x, add(y, neg(x)), neg(y)], [A, B, D]), f(A, [y, neg(x), add(x, neg(y))], [B, C, D])],
    }
}

fn layers(w: &LRWord) -> Vec<Layer> {
    let mut a = [[1i64, 0], [0, 1]];
    let mut out = Vec::with_capacity(w.len());
    for &l in &w.letters {
        let (x, y) = match l {
            Letter::R => (apply(a, [1, 1]), apply(a, [-1, 0])),
            Letter::L => (apply(a, [0, -1]), apply(a, [1, 1])),
        };
        out.push(layer(x, y));
        let m = l.matrix();
        a = [
            [a[0][0] * m[0][0] + a[0][1] * m[1][0], a[0][0] * m[0][1] + a[0][1] * m[1][1]],
            [a[1][0] * m[0][0] + a[1][1] * m[1][0], a[1][0] * m[0][1] + a[1][1] * m[1][1]],
        ];
    }
    out
}

fn glue(raw: &mut [[Option<Gluing>; 4]], t: usize, top: &LayerFace, u: usize, bottoms: &[LayerFace; 2]) {
    let b = bottoms.iter().find(|b| b.key() == top.key()).expect("layers share a triangulation");
    let mut p = [0u8; 4];
    for (i, s) in top.sides.iter().enumerate() {
        p[top.corner[i]] = b.corner_of(*s) as u8;
    }
    p[top.face] = b.face as u8;
    raw[t][top.face] = Some(Gluing { tet: u, perm: Perm4::new(p).unwrap() });
}

/// Layered triangulation for any nonempty word; non-hyperbolic words give
/// triangulations without a geometric solution.
pub fn layered_triangulation_unchecked(w: &LRWord) -> IdealTriangulation {
    let ls = layers(w);
    let n = ls.len();
    let mut raw = vec![[None; 4]; n];
    for t in 0..n - 1 {
        for top in &ls[t].top {
            glue(&mut raw, t, top, t + 1, &ls[t + 1].bottom);
        }
    }
    // Top of the last layer lies over φ(τ0); pull it back by ±φ^{-1}.
    let phi = word_to_matrix(w);
    let inv = [[phi[1][1], -phi[0][1]], [-phi[1][0], phi[0][0]]];
    for top in &ls[n - 1].top {
        glue(&mut raw, n - 1, &top.transformed(inv), 0, &ls[0].bottom);
    }
    IdealTriangulation::from_gluings(raw, None).expect("layered triangulation is valid")
}

/// The layered triangulation of the bundle with monodromy `±φ_w`, one
/// tetrahedron per letter.
pub fn monodromy_triangulation(w: &LRWord) -> Result<IdealTriangulation, PtbError> {
    if !w.is_hyperbolic() {
        return Err(PtbError::NotHyperbolic(w.to_string()));
    }
    Ok(layered_triangulation_unchecked(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{solve_shapes, volume, SolveOptions};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn tri(s: &str) -> IdealTriangulation {
        monodromy_triangulation(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn lr_is_figure_eight() {
        let t = tri("LR");
        assert_eq!((t.tet_count(), t.cusp_count()), (2, 1));
        let s = solve_shapes(&t, &SolveOptions::default()).unwrap();
        let w = Complex64::from_polar(1.0, PI / 3.0);
        assert!(s.shapes.iter().all(|z| (z - w).norm() < 1e-9), "{:?}", s.shapes);
        assert!((volume(&t, &s).unwrap() - 2.029883212819307).abs() < 1e-9);
        assert!(t.gluings().iter().flatten().all(|g| !g.perm.is_even()));
    }

    #[test]
    fn minus_lr_is_sister() {
        let t = tri("-LR");
        let s = solve_shapes(&t, &SolveOptions::default()).unwrap();
        assert!((volume(&t, &s).unwrap() - 2.029883212819307).abs() < 1e-9);
    }

    #[test]
    fn one_tet_per_letter() {
        for word in ["LRRLR", "LLLRRR", "-LRLLR", "LLRLRR"] {
            let t = tri(word);
            let n = word.trim_start_matches('-').len();
            assert_eq!(t.tet_count(), n);
            assert_eq!(t.edge_class_count(), n);
            assert_eq!(t.cusp_count(), 1);
            assert!(solve_shapes(&t, &SolveOptions::default()).is_ok(), "{word}");
        }
    }

    #[test]
    fn rejects_parabolic() {
        assert!(monodromy_triangulation(&"LLL".parse().unwrap()).is_err());
    }
}
