//! Epstein-Penner canonical cell decompositions for a cusp size vector:
//! Minkowski lifts, tilts, the flip algorithm and merging into cells.

mod cells;
mod cusp;
pub mod flips;
pub mod geometry;
mod tilt;

pub use cells::{lift_cell, Cell, CellDecomposition, CellFace, CellVertex, FaceRef, Frame};
pub use cusp::{cusp_density, maximal_cusp_sizes};
pub use flips::{canonical_decomposition, canonical_retriangulation, CanonOptions};
pub use tilt::{classify, face_tilt_row, hyperplane_normal, hyperplane_normal_map, normalized, tilt_row, TiltClass, TiltSystem};

use serde::{Deserialize, Serialize};
use std::ops::Deref;
use thiserror::Error;

use crate::triangulation::ShapeError;

/// A vector `(x1, x2, x3, x4)` in Minkowski space, last coordinate
/// time-like.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiVector(pub [f64; 4]);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Causal {
    Space,
    Light,
    Time,
}

impl MinkowskiVector {
    pub fn euclidean_dot(&self, o: &MinkowskiVector) -> f64 {
        (0..4).map(|i| self.0[i] * o.0[i]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.euclidean_dot(self).sqrt()
    }

    pub fn scaled(&self, k: f64) -> MinkowskiVector {
        MinkowskiVector(self.0.map(|x| x * k))
    }

    pub fn classify(&self, eps: f64) -> Causal {
        let q = minkowski_inner(self, self);
        let scale = self.norm().powi(2).max(f64::MIN_POSITIVE);
        if q.abs() <= eps * scale {
            Causal::Light
        } else if q > 0.0 {
            Causal::Space
        } else {
            Causal::Time
        }
    }
}

/// `x*y = x1 y1 + x2 y2 + x3 y3 - x4 y4`.
pub fn minkowski_inner(x: &MinkowskiVector, y: &MinkowskiVector) -> f64 {
    x.0[0] * y.0[0] + x.0[1] * y.0[1] + x.0[2] * y.0[2] - x.0[3] * y.0[3]
}

/// Cusp sizes, one positive entry per cusp; size is the square root of the
/// cross-section area. Only the ray matters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeVector(Vec<f64>);

impl SizeVector {
    pub fn new(v: Vec<f64>) -> Result<Self, EpError> {
        if v.is_empty() || v.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
            return Err(EpError::BadSizeVector(v));
        }
        Ok(SizeVector(v))
    }

    pub fn ones(c: usize) -> Self {
        SizeVector(vec![1.0; c])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for SizeVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EpError {
    #[error("size vector must have positive finite entries: {0:?}")]
    BadSizeVector(Vec<f64>),
    #[error("size vector has {got} entries for {cusps} cusps")]
    SizeMismatch { got: usize, cusps: usize },
    #[error("degenerate cell: lifted vertices do not span")]
    DegenerateCell,
    #[error("face {tet}:{face} has tilt {tilt:e} but neither a 2-3 nor a 3-2 move applies")]
    FlipFailed { tet: usize, face: usize, tilt: f64 },
    #[error("move budget of {0} exceeded")]
    MoveBudget(usize),
    #[error("shape error after retriangulation: {0}")]
    Shapes(#[from] ShapeError),
    #[error("cusp density needs exactly one cusp, got {0}")]
    NotOneCusped(usize),
}
