//! Floating-point polytope kernel in homogeneous coordinates `(x, t)`:
//! extreme rays of the cone `x >= 0, t >= 0, t - σ·x >= 0` and its face
//! lattice. Rays with `t = 0` are vertices at infinity.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Incidence tolerance for unit rows against max-normalized rays.
pub const TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Constraint {
    Orthant(usize),
    Infinity,
    HalfSpace(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HVertex {
    /// `(x, t)`, scaled so the largest entry is 1.
    pub coords: Vec<f64>,
    pub at_infinity: bool,
}

impl HVertex {
    /// The finite point `x / t`, or the direction `x` at infinity.
    pub fn point(&self) -> Vec<f64> {
        let c = self.coords.len() - 1;
        let t = self.coords[c];
        if self.at_infinity {
            self.coords[..c].to_vec()
        } else {
            self.coords[..c].iter().map(|x| x / t).collect()
        }
    }

    /// Whether the point lies in a coordinate hyperplane `x_i = 0`.
    pub fn on_orthant_boundary(&self) -> bool {
        let c = self.coords.len() - 1;
        self.coords[..c].iter().any(|x| x.abs() <= TOL)
    }
}

#[derive(Clone, Debug)]
pub struct Kernel {
    pub c: usize,
    pub rows: Vec<(Constraint, Vec<f64>)>,
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Generalized cross product of `k` vectors in `R^{k+1}`; zero when they
/// are dependent.
fn null_vector(rows: &[&Vec<f64>]) -> Vec<f64> {
    let k = rows.len();
    (0..=k)
        .map(|i| {
            let cols: Vec<usize> = (0..=k).filter(|&c| c != i).collect();
            let d = DMatrix::from_fn(k, k, |r, c| rows[r][cols[c]]).determinant();
            if i % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Numerical rank of a set of vectors, each normalized first.
pub fn rank(vectors: &[Vec<f64>], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let n = vectors[0].len();
    let rows: Vec<Vec<f64>> = vectors
        .iter()
        .filter(|v| v.iter().any(|x| x.abs() > 0.0))
        .map(|v| unit(v.clone()))
        .collect();
    if rows.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), n, |r, c| rows[r][c]);
    m.svd(false, false).singular_values.iter().filter(|&&s| s > tol).count()
}

impl Kernel {
    pub fn new(c: usize) -> Self {
        let mut rows = Vec::new();
        for i in 0..=c {
            let mut r = vec![0.0; c + 1];
            r[i] = 1.0;
            rows.push((if i < c { Constraint::Orthant(i) } else { Constraint::Infinity }, r));
        }
        Kernel { c, rows }
    }

    /// Adds `σ·x <= t` as constraint `HalfSpace(index)`.
    pub fn push_halfspace(&mut self, index: usize, sigma: &[f64]) {
        let mut r: Vec<f64> = sigma.iter().map(|x| -x).collect();
        r.push(1.0);
        self.rows.push((Constraint::HalfSpace(index), unit(r)));
    }

    pub fn incident(&self, k: usize, v: &HVertex) -> bool {
        dot(&self.rows[k].1, &v.coords).abs() <= TOL
    }

    pub fn extreme_rays(&self) -> Vec<HVertex> {
        let mut out: Vec<HVertex> = Vec::new();
        for comb in combinations(self.rows.len(), self.c) {
            let sel: Vec<&Vec<f64>> = comb.iter().map(|&i| &self.rows[i].1).collect();
            let m = null_vector(&sel);
            let size = m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            if size < 1e-10 {
                continue;
            }
            for s in [1.0, -1.0] {
                let y: Vec<f64> = m.iter().map(|x| s * x / size).collect();
                if self.rows.iter().all(|(_, r)| dot(r, &y) >= -TOL) {
                    let c = self.c;
                    let at_infinity = y[c] <= TOL;
                    let max = y.iter().fold(0.0f64, |a, x| a.max(x.abs()));
                    let coords: Vec<f64> = y.iter().map(|x| x / max).collect();
                    if !out.iter().any(|v| v.coords.iter().zip(&coords).all(|(a, b)| (a - b).abs() <= 1e-7)) {
                        out.push(HVertex { coords, at_infinity });
                    }
                    break;
                }
            }
        }
        out
    }

    /// Faces as sorted vertex-index sets, with their dimension as faces of
    /// the polytope (one less than the rank of the ray set). The polytope
    /// itself is not included.
    pub fn face_lattice(&self, verts: &[HVertex]) -> Vec<(Vec<usize>, usize)> {
        let rank_of = |set: &[usize]| {
            let vs: Vec<Vec<f64>> = set.iter().map(|&i| verts[i].coords.clone()).collect();
            rank(&vs, 1e-7)
        };
        let mut facets: Vec<Vec<usize>> = Vec::new();
        for k in 0..self.rows.len() {
            let set: Vec<usize> = (0..verts.len()).filter(|&i| self.incident(k, &verts[i])).collect();
            if rank_of(&set) == self.c && !facets.contains(&set) {
                facets.push(set);
            }
        }
        let mut faces: Vec<(Vec<usize>, usize)> = facets.iter().map(|f| (f.clone(), self.c - 1)).collect();
        let mut i = 0;
        while i < faces.len() {
            for f in &facets {
                let meet: Vec<usize> = faces[i].0.iter().copied().filter(|x| f.contains(x)).collect();
                if meet.is_empty() || faces.iter().any(|(g, _)| *g == meet) {
                    continue;
                }
                let r = rank_of(&meet);
                faces.push((meet, r - 1));
            }
            i += 1;
        }
        faces
    }
}
