//! Hyperplane normals, tilt rows and the linear system `L_D v = 0`,
//! `F_D v > 0` of a decomposition.

use super::{minkowski_inner, EpError, MinkowskiVector};
use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

fn matrix(defining: &[(MinkowskiVector, usize); 4]) -> Result<Matrix4<f64>, EpError> {
    let m = Matrix4::from_fn(|r, c| defining[r].0 .0[c]);
    // Scale-free singularity test: compare with the product of row norms.
    let scale: f64 = defining.iter().map(|d| d.0.norm()).product();
    if m.determinant().abs() <= 1e-10 * scale {
        return Err(EpError::DegenerateCell);
    }
    Ok(m)
}

/// `N_v` as a linear map of `v`: a `4 × c` matrix with
/// `(n_j / v_{c(j)}) · N_v = 1` for the four defining vertices.
pub fn hyperplane_normal_map(defining: &[(MinkowskiVector, usize); 4], cusps: usize) -> Result<Vec<[f64; 4]>, EpError> {
    let inv = matrix(defining)?.try_inverse().ok_or(EpError::DegenerateCell)?;
    let mut cols = vec![[0.0; 4]; cusps];
    for (j, (_, c)) in defining.iter().enumerate() {
        for r in 0..4 {
            cols[*c][r] += inv[(r, j)];
        }
    }
    Ok(cols)
}

/// `N_v` for a particular `v`.
pub fn hyperplane_normal(defining: &[(MinkowskiVector, usize); 4], v: &[f64]) -> Result<MinkowskiVector, EpError> {
    let cols = hyperplane_normal_map(defining, v.len())?;
    let mut n = [0.0; 4];
    for (c, col) in cols.iter().enumerate() {
        for r in 0..4 {
            n[r] += col[r] * v[c];
        }
    }
    Ok(MinkowskiVector(n))
}

/// The row `F` with `F v = n' · N_v - v_{c'}`: positive when `n'/v_{c'}`
/// lies beyond the hyperplane through the defining vertices. The same row
/// with `n'` a further vertex of the same cell is a coplanarity row.
pub fn tilt_row(defining: &[(MinkowskiVector, usize); 4], other: (MinkowskiVector, usize), cusps: usize) -> Result<Vec<f64>, EpError> {
    let m = matrix(defining)?;
    let r = m.transpose().lu().solve(&Vector4::from(other.0 .0)).ok_or(EpError::DegenerateCell)?;
    let mut row = vec![0.0; cusps];
    for (j, (_, c)) in defining.iter().enumerate() {
        row[*c] += r[j];
    }
    row[other.1] -= 1.0;
    Ok(row)
}

/// Unit space-like Minkowski normal of the span of three lifts, pointing
/// to the side of `towards`.
fn face_normal(face: [MinkowskiVector; 3], towards: &MinkowskiVector) -> Result<MinkowskiVector, EpError> {
    // Rows of the system m * n_a = 0 in Euclidean form.
    let rows: Vec<[f64; 4]> = face.iter().map(|n| [n.0[0], n.0[1], n.0[2], -n.0[3]]).collect();
    let mut m = [0.0; 4];
    for (i, mi) in m.iter_mut().enumerate() {
        let cols: Vec<usize> = (0..4).filter(|&c| c != i).collect();
        let minor = nalgebra::Matrix3::from_fn(|r, c| rows[r][cols[c]]);
        *mi = if i % 2 == 0 { minor.determinant() } else { -minor.determinant() };
    }
    let m = MinkowskiVector(m);
    let q = minkowski_inner(&m, &m);
    if !(q > 0.0) {
        return Err(EpError::DegenerateCell);
    }
    let sign = if minkowski_inner(&m, towards) >= 0.0 { 1.0 } else { -1.0 };
    Ok(m.scaled(sign / q.sqrt()))
}

/// Tilt row of a face between cells `c` and `c2` (four defining lifts of
/// each, in a common frame), with `face` three vertices of the face and
/// `far` a vertex of `c2` off it.
///
/// The row is `(P' - P) * m` with `P`, `P'` the Minkowski duals of the two
/// cells' hyperplanes (`x * P = -1` on the hyperplane) and `m` the unit
/// normal of the face pointing into `c2`. It has the sign and zero set of
/// `tilt_row`, and its scale depends only on the two hyperplanes, so a face
/// keeps its row when a neighboring cell is merged or subdivided within the
/// same hyperplane.
pub fn face_tilt_row(
    c: &[(MinkowskiVector, usize); 4],
    c2: &[(MinkowskiVector, usize); 4],
    face: [MinkowskiVector; 3],
    far: &MinkowskiVector,
    cusps: usize,
) -> Result<Vec<f64>, EpError> {
    let (n, n2) = (hyperplane_normal_map(c, cusps)?, hyperplane_normal_map(c2, cusps)?);
    let m = face_normal(face, far)?;
    // P = -η N, so (P' - P) * m = (N - N') · m in Euclidean terms.
    Ok((0..cusps).map(|k| (0..4).map(|r| (n[k][r] - n2[k][r]) * m.0[r]).sum()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TiltClass {
    Positive,
    Zero,
    Negative,
}

/// Classifies `row · v` with a tolerance relative to `|row| |v|`. A raw row
/// always has a unit entry before cancellation, so `|row|` is floored at 1
/// and rows that vanish identically read as zero.
pub fn classify(row: &[f64], v: &[f64], eps: f64) -> (f64, TiltClass) {
    let t: f64 = row.iter().zip(v).map(|(a, b)| a * b).sum();
    let scale = row.iter().fold(1.0f64, |m, x| m.max(x.abs())) * v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let class = if t > eps * scale {
        TiltClass::Positive
    } else if t < -eps * scale {
        TiltClass::Negative
    } else {
        TiltClass::Zero
    };
    (t, class)
}

/// `L_D` (coplanarity rows) and `F_D` (one tilt row per face pair).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TiltSystem {
    pub cusps: usize,
    pub l_rows: Vec<Vec<f64>>,
    pub f_rows: Vec<Vec<f64>>,
}

impl TiltSystem {
    /// Sum of the rows of `F_D`.
    pub fn sigma(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.cusps];
        for r in &self.f_rows {
            for (a, b) in s.iter_mut().zip(r) {
                *a += b;
            }
        }
        s
    }

    /// Whether `L_D v = 0` and `F_D v > 0` within `eps` (relative).
    pub fn admits(&self, v: &[f64], eps: f64) -> bool {
        self.l_rows.iter().all(|r| classify(r, v, eps).1 == TiltClass::Zero)
            && self.f_rows.iter().all(|r| classify(r, v, eps).1 == TiltClass::Positive)
    }
}

/// Scales a row so its largest entry has magnitude 1.
pub fn normalized(row: &[f64]) -> Vec<f64> {
    let m = row.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if m == 0.0 {
        row.to_vec()
    } else {
        row.iter().map(|x| x / m).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mv(a: [f64; 4]) -> MinkowskiVector {
        MinkowskiVector(a)
    }

    // The octahedron normalization with vertices (±1,0,0,1), ... as cusp 0,1,2.
    fn octa() -> [(MinkowskiVector, usize); 6] {
        [
            (mv([1., 0., 0., 1.]), 0),
            (mv([0., 1., 0., 1.]), 1),
            (mv([0., 0., 1., 1.]), 2),
            (mv([-1., 0., 0., 1.]), 0),
            (mv([0., -1., 0., 1.]), 1),
            (mv([0., 0., -1., 1.]), 2),
        ]
    }

    #[test]
    fn normal_map_of_octahedron() {
        let o = octa();
        let d = [o[0], o[1], o[2], o[3]];
        let cols = hyperplane_normal_map(&d, 3).unwrap();
        // N_v = (0, v1 - v0, v2 - v0, v0)
        let expect = [[0.0, -1.0, -1.0, 1.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]];
        for c in 0..3 {
            for r in 0..4 {
                assert!((cols[c][r] - expect[c][r]).abs() < 1e-12);
            }
        }
        let n = hyperplane_normal(&d, &[1.0, 1.0, 1.0]).unwrap();
        assert!((n.0[3] - 1.0).abs() < 1e-12 && n.0[..3].iter().all(|x| x.abs() < 1e-12));
        assert_eq!(tilt_row(&d, o[4], 3).unwrap(), vec![2.0, -2.0, 0.0]);
        assert_eq!(tilt_row(&d, o[5], 3).unwrap(), vec![2.0, 0.0, -2.0]);
        assert_eq!(tilt_row(&d, (mv([1., 2., 2., 3.]), 0), 3).unwrap(), vec![-2.0, 2.0, 2.0]);
    }

    #[test]
    fn pyramid_normal() {
        let o = octa();
        let d = [o[0], o[1], o[3], (mv([1., 2., 2., 3.]), 0)];
        let cols = hyperplane_normal_map(&d, 3).unwrap();
        let expect = [[0.0, -1.0, 0.0, 1.0], [0.0, 1.0, -1.0, 0.0], [0.0; 4]];
        for c in 0..3 {
            for r in 0..4 {
                assert!((cols[c][r] - expect[c][r]).abs() < 1e-12, "{cols:?}");
            }
        }
        // Square base {n0, n3, n3', n0'} against the other apex n2.
        let row = tilt_row(&[o[0], o[3], (mv([1., 2., 2., 3.]), 0), o[1]], o[2], 3).unwrap();
        let r = normalized(&row);
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] + 1.0).abs() < 1e-12 && (r[2] + 1.0).abs() < 1e-12, "{row:?}");
    }

    #[test]
    fn intrinsic_face_row() {
        let o = octa();
        let c = [o[0], o[1], o[2], o[3]];
        let n3 = (mv([1., 2., 2., 3.]), 0);
        let c2 = [o[0], o[1], o[2], n3];
        let row = face_tilt_row(&c, &c2, [o[0].0, o[1].0, o[2].0], &n3.0, 3).unwrap();
        let h = std::f64::consts::SQRT_2;
        for (a, b) in row.iter().zip([-h, h, h]) {
            assert!((a - b).abs() < 1e-12, "{row:?}");
        }
        // Symmetric in the two cells.
        let back = face_tilt_row(&c2, &c, [o[0].0, o[1].0, o[2].0], &o[3].0, 3).unwrap();
        for (a, b) in row.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_rejected() {
        let o = octa();
        assert!(hyperplane_normal_map(&[o[0], o[1], o[3], o[4]], 3).is_err());
    }
}
