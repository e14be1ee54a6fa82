//! Symmetries, the commensurator quotient and commensurability of two
//! manifolds from their canonical tilings.

use super::classes::{common_cover, find_isometry_classes, is_unbranched, CoveringSpec, ISet};
use super::{IsomOptions, LabeledDecomposition, TilingError};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryClass {
    pub iset: ISet,
    pub degree: f64,
    /// Degree one: a symmetry of the quotient preserving the tiling.
    pub is_symmetry: bool,
}

/// Closed sets of self-triples of a hyperbolic tiling. Each corresponds
/// to a double coset of the tiling's symmetry group by `Γ`.
pub fn symmetry_classes(s: &LabeledDecomposition, opts: &IsomOptions) -> Result<Vec<SymmetryClass>, TilingError> {
    if !s.hyperbolic {
        return Err(TilingError::NotDiscrete);
    }
    Ok(find_isometry_classes(s, s, opts)
        .into_iter()
        .map(|iset| {
            let degree = common_cover(&iset, s, s).degree;
            SymmetryClass { iset, degree, is_symmetry: (degree - 1.0).abs() < 1e-6 }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommensuratorData {
    /// Largest index `[Symm(T) : Γ]` over the given tilings.
    pub quotient_degree: usize,
    pub quotient_volume: f64,
    /// Order of the symmetry group of the manifold.
    pub symmetry_order: usize,
    pub hidden: bool,
    /// Index into the tilings of one attaining the degree.
    pub tiling: usize,
    pub caveat: String,
}

/// `[Symm(T) : Γ]`: the number of self-triples with source cell 0 lying
/// in closed sets. Every symmetry of the tiling is determined by where it
/// sends one lifted cell, so the count is the same for every source cell.
fn symmetry_index(t: &LabeledDecomposition, opts: &IsomOptions) -> Result<usize, TilingError> {
    let classes = symmetry_classes(t, opts)?;
    let count = |p: usize| classes.iter().map(|c| c.iset.triples.iter().filter(|x| x.p == p).count()).sum::<usize>();
    let n = count(0);
    debug_assert!((0..t.cells.len()).all(|p| count(p) == n));
    Ok(n)
}

/// Commensurator data from the tiling for equal cusp sizes, which every
/// symmetry preserves, and the canonical tilings of all parameter cells.
/// The largest symmetry group of a canonical tiling is the commensurator
/// only when the manifold is non-arithmetic; this is not checked.
pub fn commensurator_data(
    base: &LabeledDecomposition,
    tilings: &[LabeledDecomposition],
    opts: &IsomOptions,
) -> Result<CommensuratorData, TilingError> {
    let symmetry_order = symmetry_classes(base, opts)?.iter().filter(|c| c.is_symmetry).count();
    let mut best = (symmetry_index(base, opts)?, None);
    for (i, t) in tilings.iter().enumerate() {
        let n = symmetry_index(t, opts)?;
        if n > best.0 {
            best = (n, Some(i));
        }
    }
    let (degree, at) = best;
    Ok(CommensuratorData {
        quotient_degree: degree,
        quotient_volume: base.volume() / degree as f64,
        symmetry_order,
        hidden: degree > symmetry_order,
        tiling: at.unwrap_or(0),
        caveat: "equals the commensurator quotient only for non-arithmetic manifolds".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Commensurability {
    /// Indices of the two tilings that match.
    pub first: usize,
    pub second: usize,
    pub iset: ISet,
    pub cover: CoveringSpec,
}

/// A common cover witnessing commensurability, searching every pair of
/// canonical tilings; `None` once all pairs are exhausted.
pub fn commensurable(a: &[LabeledDecomposition], b: &[LabeledDecomposition], opts: &IsomOptions) -> Option<Commensurability> {
    for (i, s) in a.iter().enumerate() {
        for (k, s2) in b.iter().enumerate() {
            for iset in find_isometry_classes(s, s2, opts) {
                if is_unbranched(&iset, s, s2) {
                    let cover = common_cover(&iset, s, s2);
                    return Some(Commensurability { first: i, second: k, iset, cover });
                }
            }
        }
    }
    None
}
