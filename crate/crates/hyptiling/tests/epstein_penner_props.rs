//! Property tests for tilts and canonical decompositions.

use hyptiling::assets;
use hyptiling::epstein_penner::{
    canonical_decomposition, lift_cell, tilt_row, CanonOptions, CellDecomposition, Frame, MinkowskiVector, SizeVector,
};
use hyptiling::triangulation::{solve_shapes, SolveOptions};
use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::OnceLock;

fn borromean_shapes() -> &'static Vec<Complex64> {
    static S: OnceLock<Vec<Complex64>> = OnceLock::new();
    S.get_or_init(|| solve_shapes(&assets::borromean(), &SolveOptions::default()).unwrap().shapes)
}

fn decompose(v: &[f64]) -> CellDecomposition {
    let tri = assets::borromean();
    canonical_decomposition(&tri, borromean_shapes(), &SizeVector::new(v.to_vec()).unwrap(), &CanonOptions::default()).unwrap()
}

fn unit(row: &[f64]) -> Vec<f64> {
    let n = row.iter().map(|x| x * x).sum::<f64>().sqrt();
    row.iter().map(|x| x / n).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One-sided tilt row of face `k` of cell `c`, from lifts in `frame`.
fn row_in_frame(d: &CellDecomposition, c: usize, k: usize, frame: Frame) -> Vec<f64> {
    let here = lift_cell(d, c, &[], frame).unwrap();
    let there = lift_cell(d, c, &[k], frame).unwrap();
    let cell = &d.cells[c];
    let face = &cell.faces[k];
    let off = (0..here.len()).find(|i| !face.vertices.contains(i)).unwrap();
    let idx = [face.vertices[0], face.vertices[1], face.vertices[2], off];
    let def: [(MinkowskiVector, usize); 4] = idx.map(|i| (here[i], cell.vertices[i].cusp));
    let nb = &d.cells[face.neighbor.cell];
    let far = (0..there.len()).find(|i| !face.neighbor.vertex_map.contains(i)).unwrap();
    tilt_row(&def, (there[far], nb.vertices[far].cusp), 3).unwrap()
}

fn size() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.3f64..3.0, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projectivity(v in size()) {
        let d = decompose(&v);
        for lambda in [0.5, 3.0] {
            let w: Vec<f64> = v.iter().map(|x| x * lambda).collect();
            prop_assert_eq!(decompose(&w).cell_types(), d.cell_types());
        }
    }

    #[test]
    fn closure(v in size()) {
        let d = decompose(&v);
        let scale = v.iter().fold(0.0f64, |m, x| m.max(*x));
        for r in &d.tilts.l_rows {
            prop_assert!(dot(r, &v).abs() < 1e-7 * scale.max(1.0) * r.iter().fold(1.0f64, |m, x| m.max(x.abs())));
        }
        prop_assert!(d.tilts.admits(&v, 1e-7));
    }

    #[test]
    fn tilt_linearity(v in size(), u in size(), w in size(), a in 0.1f64..4.0, b in 0.1f64..4.0) {
        let d = decompose(&v);
        for r in &d.tilts.f_rows {
            let mix: Vec<f64> = u.iter().zip(&w).map(|(x, y)| a * x + b * y).collect();
            let lhs = dot(r, &mix);
            let rhs = a * dot(r, &u) + b * dot(r, &w);
            prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn frame_independence(v in size()) {
        let d = decompose(&v);
        for (c, k) in d.face_pairs() {
            let base = unit(&d.face_row(c, k).unwrap());
            let nb = &d.cells[c].faces[k].neighbor;
            for (cc, kk) in [(c, k), (nb.cell, nb.face)] {
                for frame in [Frame::Developed, Frame::Balanced] {
                    let r = unit(&row_in_frame(&d, cc, kk, frame));
                    for i in 0..3 {
                        prop_assert!((r[i] - base[i]).abs() < 1e-8, "{:?} vs {:?}", r, base);
                    }
                }
            }
        }
    }
}
