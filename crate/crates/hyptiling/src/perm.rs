//! Permutations of the four vertices of a tetrahedron.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A permutation of `{0,1,2,3}`; `p.0[v]` is the image of vertex `v`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm4(pub [u8; 4]);

/// Vertex pairs of the six edges of a tetrahedron, in edge-index order.
pub const EDGE_VERTICES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index of the edge joining vertices `a` and `b`.
pub fn edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("no edge between vertices {a} and {b}"),
    }
}

/// The edge opposite `e` (sharing no vertex with it).
pub fn opposite_edge(e: usize) -> usize {
    5 - e
}

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm4(images))
    }

    #[inline]
    pub fn apply(self, v: usize) -> usize {
        self.0[v] as usize
    }

    pub fn inverse(self) -> Perm4 {
        let mut out = [0u8; 4];
        for v in 0..4 {
            out[self.0[v] as usize] = v as u8;
        }
        Perm4(out)
    }

    /// `self.compose(other)` applies `other` first, then `self`.
    pub fn compose(self, other: Perm4) -> Perm4 {
        let mut out = [0u8; 4];
        for v in 0..4 {
            out[v] = self.0[other.0[v] as usize];
        }
        Perm4(out)
    }

    pub fn is_even(self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 0
    }

    pub fn transposition(a: usize, b: usize) -> Perm4 {
        let mut p = [0u8, 1, 2, 3];
        p.swap(a, b);
        Perm4(p)
    }

    /// All 24 permutations in lexicographic order of their image arrays.
    pub fn all() -> Vec<Perm4> {
        let mut out = Vec::with_capacity(24);
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        if let Some(p) = Perm4::new([a, b, c, d]) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }

    /// Even permutation sending 0 to `v`; its images of 1,2,3 list the other
    /// vertices in counterclockwise order as seen from `v`.
    pub fn even_with_first(v: usize) -> Perm4 {
        const TABLE: [[u8; 4]; 4] = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 0, 1, 3], [3, 0, 2, 1]];
        Perm4(TABLE[v])
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        for p in Perm4::all() {
            assert_eq!(p.compose(p.inverse()), Perm4::IDENTITY);
            assert_eq!(p.inverse().compose(p), Perm4::IDENTITY);
        }
        assert_eq!(Perm4::all().len(), 24);
        assert_eq!(Perm4::all().iter().filter(|p| p.is_even()).count(), 12);
    }

    #[test]
    fn ccw_table_is_even() {
        for v in 0..4 {
            let p = Perm4::even_with_first(v);
            assert!(p.is_even());
            assert_eq!(p.apply(0), v);
        }
    }

    #[test]
    fn edges_roundtrip() {
        for (e, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
            assert_eq!(edge_index(a, b), e);
            assert_eq!(edge_index(b, a), e);
            let (c, d) = EDGE_VERTICES[opposite_edge(e)];
            assert!(c != a && c != b && d != a && d != b);
        }
    }
}
