//! Flat tori tiled by unit squares, as small test inputs.

use super::{CellShape, LabeledCell, LabeledDecomposition, Mode};
use crate::epstein_penner::FaceRef;

const SQUARE: [[f64; 2]; 4] = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];

/// Sides of a square with corners `0..4` counterclockwise from the lower
/// left: bottom, right, top, left.
const SIDES: [[usize; 2]; 4] = [[0, 1], [1, 2], [2, 3], [3, 0]];

/// Unit squares tiling a `width × height` rectangle with opposite sides
/// identified. Cell `x + width * y` is the square in column `x`, row `y`.
pub fn square_torus(width: usize, height: usize) -> LabeledDecomposition {
    let at = |x: usize, y: usize| (x % width) + width * (y % height);
    let mut cells = Vec::new();
    for y in 0..height {
        for x in 0..width {
            let nb = |cell, face, vertex_map: [usize; 2]| FaceRef { cell, face, vertex_map: vertex_map.to_vec() };
            cells.push(LabeledCell {
                vertices: 4,
                faces: SIDES.iter().map(|s| s.to_vec()).collect(),
                neighbors: vec![
                    nb(at(x, y + height - 1), 2, [3, 2]),
                    nb(at(x + 1, y), 3, [0, 3]),
                    nb(at(x, y + 1), 0, [1, 0]),
                    nb(at(x + width - 1, y), 1, [2, 1]),
                ],
                shape: CellShape::Planar(SQUARE.to_vec()),
                volume: 1.0,
            });
        }
    }
    LabeledDecomposition { dim: 2, hyperbolic: false, mode: Mode::Geometric, cells }
}

/// Cuts square `cell` along the diagonal from corner 0 to corner 2. The
/// triangle `(0, 1, 2)` keeps the index `cell`; `(0, 2, 3)` is appended.
pub fn subdivide(dec: &LabeledDecomposition, cell: usize) -> LabeledDecomposition {
    let second = dec.cells.len();
    // Old side -> (triangle, side, square corner -> triangle corner).
    let place = |side: usize| -> (usize, usize, fn(usize) -> usize) {
        match side {
            0 | 1 => (cell, side, |v| v),
            2 => (second, 1, |v| if v == 2 { 1 } else { 2 }),
            _ => (second, 2, |v| if v == 3 { 2 } else { 0 }),
        }
    };
    let sq = dec.cells[cell].clone();
    let tri = |corners: [usize; 3], faces: Vec<Vec<usize>>, neighbors: Vec<FaceRef>| LabeledCell {
        vertices: 3,
        faces,
        neighbors,
        shape: CellShape::Planar(corners.iter().map(|&c| SQUARE[c]).collect()),
        volume: 0.5,
    };
    let placeholder = FaceRef { cell: usize::MAX, face: 0, vertex_map: vec![] };
    let mut cells = dec.cells.clone();
    cells[cell] = tri(
        [0, 1, 2],
        vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        vec![sq.neighbors[0].clone(), sq.neighbors[1].clone(), placeholder.clone()],
    );
    cells.push(tri(
        [0, 2, 3],
        vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        vec![placeholder, sq.neighbors[2].clone(), sq.neighbors[3].clone()],
    ));
    for c in cells.iter_mut() {
        for nb in c.neighbors.iter_mut() {
            if nb.cell == cell {
                let (t, side, corner) = place(nb.face);
                *nb = FaceRef { cell: t, face: side, vertex_map: nb.vertex_map.iter().map(|&v| corner(v)).collect() };
            }
        }
    }
    cells[cell].neighbors[2] = FaceRef { cell: second, face: 0, vertex_map: vec![1, 0] };
    cells[second].neighbors[0] = FaceRef { cell, face: 2, vertex_map: vec![0, 2] };
    LabeledDecomposition { cells, ..dec.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gluings_are_reciprocal() {
        for (w, h) in [(1, 1), (1, 3), (2, 1), (3, 2)] {
            square_torus(w, h).validate().unwrap();
        }
        subdivide(&square_torus(2, 1), 1).validate().unwrap();
        subdivide(&square_torus(1, 1), 0).validate().unwrap();
    }

    #[test]
    fn corner_orders() {
        assert_eq!(square_torus(2, 1).ridge_orders(), vec![4, 4]);
        assert_eq!(subdivide(&square_torus(2, 1), 1).ridge_orders(), vec![5, 5]);
    }
}
