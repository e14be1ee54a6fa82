//! Vertex bijections between two cells that carry faces to faces and, in
//! geometric mode, are realized by isometries.

use super::{CellShape, IsomOptions, LabeledCell, Mode};
use crate::epstein_penner::geometry::cross_ratio;
use std::collections::HashSet;

fn adjacency(c: &LabeledCell) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; c.vertices]; c.vertices];
    for f in &c.faces {
        let n = f.len();
        for i in 0..n {
            let (x, y) = (f[i], f[(i + 1) % n]);
            a[x][y] = true;
            a[y][x] = true;
        }
    }
    a
}

fn sorted(v: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut s: Vec<usize> = v.into_iter().collect();
    s.sort();
    s
}

struct Search<'a> {
    a: &'a LabeledCell,
    b: &'a LabeledCell,
    adj_a: Vec<Vec<bool>>,
    adj_b: Vec<Vec<bool>>,
    faces_b: HashSet<Vec<usize>>,
    mode: Mode,
    opts: IsomOptions,
    limit: usize,
    out: Vec<(Vec<usize>, Option<bool>)>,
}

impl Search<'_> {
    fn run(&mut self, j: &mut Vec<Option<usize>>, used: &mut Vec<bool>, i: usize) {
        if self.out.len() >= self.limit {
            return;
        }
        if i == j.len() {
            let full: Vec<usize> = j.iter().map(|x| x.unwrap()).collect();
            let faces_ok = self.a.faces.iter().all(|f| self.faces_b.contains(&sorted(f.iter().map(|&v| full[v]))));
            if faces_ok {
                if let Some(o) = realized(self.a, self.b, &full, self.mode, &self.opts) {
                    self.out.push((full, o));
                }
            }
            return;
        }
        if let Some(y) = j[i] {
            if self.consistent(j, i, y) {
                self.run(j, used, i + 1);
            }
            return;
        }
        for y in 0..self.b.vertices {
            if used[y] || !self.consistent(j, i, y) {
                continue;
            }
            j[i] = Some(y);
            used[y] = true;
            self.run(j, used, i + 1);
            used[y] = false;
            j[i] = None;
        }
    }

    fn consistent(&self, j: &[Option<usize>], i: usize, y: usize) -> bool {
        (0..i).all(|u| j[u].is_none_or(|yu| self.adj_a[u][i] == self.adj_b[yu][y]))
    }
}

/// All isomorphisms `a -> b` extending `partial`, at most `limit` of them,
/// in lexicographic order, with their orientation character where known.
pub(crate) fn isomorphisms(
    a: &LabeledCell,
    b: &LabeledCell,
    partial: &[Option<usize>],
    mode: Mode,
    opts: &IsomOptions,
    limit: usize,
) -> Vec<(Vec<usize>, Option<bool>)> {
    let sizes = |c: &LabeledCell| sorted(c.faces.iter().map(Vec::len));
    if a.vertices != b.vertices || a.faces.len() != b.faces.len() || sizes(a) != sizes(b) {
        return Vec::new();
    }
    let mut s = Search {
        a,
        b,
        adj_a: adjacency(a),
        adj_b: adjacency(b),
        faces_b: b.faces.iter().map(|f| sorted(f.iter().copied())).collect(),
        mode,
        opts: *opts,
        limit,
        out: Vec::new(),
    };
    let mut j = partial.to_vec();
    let mut used = vec![false; b.vertices];
    for y in j.iter().flatten() {
        if used[*y] {
            return Vec::new();
        }
        used[*y] = true;
    }
    s.run(&mut j, &mut used, 0);
    s.out
}

fn close(x: f64, y: f64, eps: f64) -> bool {
    (x - y).abs() <= eps * (1.0 + x.abs().max(y.abs()))
}

/// Whether `j` is realized by an isometry: `Some(orientation preserving)`
/// if so (`Some(None)` in combinatorial mode), `None` otherwise.
fn realized(a: &LabeledCell, b: &LabeledCell, j: &[usize], mode: Mode, opts: &IsomOptions) -> Option<Option<bool>> {
    if mode == Mode::Combinatorial {
        return Some(None);
    }
    let (pres, rev) = match (&a.shape, &b.shape) {
        (CellShape::Ideal(sa), CellShape::Ideal(sb)) => {
            let r = &a.faces[0];
            let (r0, r1, r2) = (r[0], r[1], r[2]);
            let (mut pres, mut rev) = (true, true);
            for x in (0..a.vertices).filter(|x| ![r0, r1, r2].contains(x)) {
                let ca = cross_ratio(&sa[r0], &sa[r1], &sa[r2], &sa[x]);
                let cb = cross_ratio(&sb[j[r0]], &sb[j[r1]], &sb[j[r2]], &sb[j[x]]);
                let tol = opts.eps * (1.0 + ca.norm().max(cb.norm()));
                pres &= (ca - cb).norm() <= tol;
                rev &= (ca - cb.conj()).norm() <= tol;
            }
            (pres, rev)
        }
        (CellShape::Planar(pa), CellShape::Planar(pb)) => {
            let d = |p: &[[f64; 2]], u: usize, v: usize| (p[u][0] - p[v][0]).hypot(p[u][1] - p[v][1]);
            let n = a.vertices;
            let lengths = (0..n).all(|u| (u + 1..n).all(|v| close(d(pa, u, v), d(pb, j[u], j[v]), opts.eps)));
            let area = |p: &[[f64; 2]], x: usize, y: usize, z: usize| {
                (p[y][0] - p[x][0]) * (p[z][1] - p[x][1]) - (p[y][1] - p[x][1]) * (p[z][0] - p[x][0])
            };
            let same = area(pa, 0, 1, 2) * area(pb, j[0], j[1], j[2]) > 0.0;
            (lengths && same, lengths && !same)
        }
        _ => (false, false),
    };
    if pres {
        Some(Some(true))
    } else if rev && !opts.orientation_preserving_only {
        Some(Some(false))
    } else {
        None
    }
}
