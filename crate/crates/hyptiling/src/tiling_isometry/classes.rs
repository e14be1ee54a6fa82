//! Triples `(j, p, p')`, their extension across faces, closed sets of
//! triples and the common covers they describe.

use super::iso::isomorphisms;
use super::{IsomOptions, LabeledDecomposition, Mode};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::HashMap;
use std::fmt::Write as _;

/// An isomorphism `j` from cell `p` of the first decomposition onto cell
/// `p_prime` of the second; `j[v]` is the image of vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IsomTriple {
    pub p: usize,
    pub p_prime: usize,
    pub j: Vec<usize>,
    /// `None` in combinatorial mode.
    pub orientation_preserving: Option<bool>,
}

impl IsomTriple {
    fn key(&self) -> (usize, usize, Vec<usize>) {
        (self.p, self.p_prime, self.j.clone())
    }
}

fn mode(s: &LabeledDecomposition, s2: &LabeledDecomposition) -> Mode {
    if s.mode == Mode::Geometric && s2.mode == Mode::Geometric {
        Mode::Geometric
    } else {
        Mode::Combinatorial
    }
}

/// All valid triples, sorted lexicographically by `(p, p', j)`.
pub fn compute_theta(s: &LabeledDecomposition, s2: &LabeledDecomposition, opts: &IsomOptions) -> Vec<IsomTriple> {
    let m = mode(s, s2);
    let mut out = Vec::new();
    for (p, a) in s.cells.iter().enumerate() {
        for (q, b) in s2.cells.iter().enumerate() {
            for (j, o) in isomorphisms(a, b, &vec![None; a.vertices], m, opts, usize::MAX) {
                out.push(IsomTriple { p, p_prime: q, j, orientation_preserving: o });
            }
        }
    }
    out
}

/// The triple induced across face `face` of `t.p`, with the face of the
/// new source cell that was crossed into, or `None` if the neighbors are
/// not related by an extension of `t.j`.
pub fn extend_across(
    s: &LabeledDecomposition,
    s2: &LabeledDecomposition,
    t: &IsomTriple,
    face: usize,
    opts: &IsomOptions,
) -> Option<(IsomTriple, usize)> {
    let a = &s.cells[t.p];
    let fa = &a.faces[face];
    let nb = &a.neighbors[face];
    let image: Vec<usize> = fa.iter().map(|&v| t.j[v]).collect();
    let g = s2.face_with(t.p_prime, &image)?;
    let fb = &s2.cells[t.p_prime].faces[g];
    let nb2 = &s2.cells[t.p_prime].neighbors[g];
    let (q, q2) = (&s.cells[nb.cell], &s2.cells[nb2.cell]);
    let mut partial = vec![None; q.vertices];
    for (k, &v) in fa.iter().enumerate() {
        let k2 = fb.iter().position(|&w| w == t.j[v])?;
        partial[nb.vertex_map[k]] = Some(nb2.vertex_map[k2]);
    }
    let (j, o) = isomorphisms(q, q2, &partial, mode(s, s2), opts, 1).pop()?;
    Some((IsomTriple { p: nb.cell, p_prime: nb2.cell, j, orientation_preserving: o }, nb.face))
}

/// A set of triples closed under extension across every face.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ISet {
    /// In discovery order from the seed.
    pub triples: Vec<IsomTriple>,
    /// For each member and face of its source cell: the member reached
    /// and the face crossed into.
    pub extensions: Vec<Vec<(usize, usize)>>,
}

impl ISet {
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: &IsomTriple) -> bool {
        self.triples.iter().any(|u| u.key() == t.key())
    }

    /// Whether every extension of every member is again a member.
    pub fn is_closed(&self, s: &LabeledDecomposition, s2: &LabeledDecomposition, opts: &IsomOptions) -> bool {
        self.triples.iter().all(|t| {
            (0..s.cells[t.p].faces.len())
                .all(|f| extend_across(s, s2, t, f, opts).is_some_and(|(u, _)| self.contains(&u)))
        })
    }
}

/// Partitions the triples that extend indefinitely into closed sets.
/// Seeds are taken in lexicographic order; a set whose closure meets a
/// failed extension is discarded whole.
pub fn find_isometry_classes(s: &LabeledDecomposition, s2: &LabeledDecomposition, opts: &IsomOptions) -> Vec<ISet> {
    let theta = compute_theta(s, s2, opts);
    let index: HashMap<_, usize> = theta.iter().enumerate().map(|(i, t)| (t.key(), i)).collect();
    let mut alive = vec![true; theta.len()];
    let mut out = Vec::new();
    while let Some(seed) = alive.iter().position(|&a| a) {
        let mut members = vec![seed];
        let mut slot: HashMap<usize, usize> = HashMap::from([(seed, 0)]);
        let mut extensions = Vec::new();
        let mut ok = true;
        let mut k = 0;
        'grow: while k < members.len() {
            let t = &theta[members[k]];
            let mut row = Vec::new();
            for f in 0..s.cells[t.p].faces.len() {
                let Some((u, fq)) = extend_across(s, s2, t, f, opts) else {
                    ok = false;
                    break 'grow;
                };
                let Some(&i) = index.get(&u.key()) else {
                    ok = false;
                    break 'grow;
                };
                let next = members.len();
                let m = *slot.entry(i).or_insert(next);
                if m == next {
                    members.push(i);
                }
                row.push((m, fq));
            }
            extensions.push(row);
            k += 1;
        }
        for &i in &members {
            alive[i] = false;
        }
        if ok {
            out.push(ISet { triples: members.iter().map(|&i| theta[i].clone()).collect(), extensions });
        }
    }
    out
}

/// The cover of both quotients assembled from one copy of `p` per member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringSpec {
    /// `(p, p')` under each cell of the cover.
    pub cells: Vec<(usize, usize)>,
    /// Glued `(cell, face)` pairs of the cover, each once.
    pub gluings: Vec<((usize, usize), (usize, usize))>,
    /// Degree over the first decomposition's quotient.
    pub degree: f64,
    pub degree_prime: f64,
}

impl CoveringSpec {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "cells": self.cells,
            "gluings": self.gluings,
            "degree": self.degree,
            "degree_prime": self.degree_prime,
        })
    }

    /// Face-pairing graph in Graphviz format.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph cover {\n");
        for (r, (p, q)) in self.cells.iter().enumerate() {
            let _ = writeln!(s, "  c{r} [label=\"{p}/{q}\"];");
        }
        for ((a, fa), (b, fb)) in &self.gluings {
            let _ = writeln!(s, "  c{a} -- c{b} [label=\"{fa}:{fb}\"];");
        }
        s.push_str("}\n");
        s
    }
}

pub fn common_cover(iset: &ISet, s: &LabeledDecomposition, s2: &LabeledDecomposition) -> CoveringSpec {
    let cells: Vec<(usize, usize)> = iset.triples.iter().map(|t| (t.p, t.p_prime)).collect();
    let mut gluings = Vec::new();
    for (r, row) in iset.extensions.iter().enumerate() {
        for (f, &(m, fq)) in row.iter().enumerate() {
            if (r, f) <= (m, fq) {
                gluings.push(((r, f), (m, fq)));
            }
        }
    }
    let degree = cells.iter().map(|&(p, _)| s.cells[p].volume).sum::<f64>() / s.volume();
    let degree_prime = cells.iter().map(|&(_, q)| s2.cells[q].volume).sum::<f64>() / s2.volume();
    CoveringSpec { cells, gluings, degree, degree_prime }
}

/// Whether the cover is unbranched over both quotients: going once
/// around each ridge of the cover covers the ridge below it exactly once.
pub fn is_unbranched(iset: &ISet, s: &LabeledDecomposition, s2: &LabeledDecomposition) -> bool {
    let mut orders: HashMap<(bool, usize, Vec<usize>), usize> = HashMap::new();
    let mut order = |second: bool, d: &LabeledDecomposition, c: usize, f: usize, r: &[usize]| {
        *orders.entry((second, c, r.to_vec())).or_insert_with(|| d.ridge_order(c, f, r))
    };
    for (r, t) in iset.triples.iter().enumerate() {
        for (f, ridge) in s.ridges(t.p) {
            let start = (r, f, ridge.clone());
            let mut cur = start.clone();
            let mut len = 0;
            loop {
                let (q, g, r2) = s.turn(iset.triples[cur.0].p, cur.1, &cur.2);
                let m = iset.extensions[cur.0][cur.1].0;
                debug_assert_eq!(iset.triples[m].p, q);
                cur = (m, g, r2);
                len += 1;
                if cur == start {
                    break;
                }
            }
            let face_img: Vec<usize> = s.cells[t.p].faces[f].iter().map(|&v| t.j[v]).collect();
            let g2 = s2.face_with(t.p_prime, &face_img).expect("triple maps faces to faces");
            let mut r_img: Vec<usize> = ridge.iter().map(|&v| t.j[v]).collect();
            r_img.sort();
            if len != order(false, s, t.p, f, &ridge) || len != order(true, s2, t.p_prime, g2, &r_img) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;

    #[test]
    fn combinatorial_theta_counts() {
        let a = LabeledDecomposition::from_triangulation(&assets::figure_eight(), None);
        let b = LabeledDecomposition::from_triangulation(&assets::figure_eight_sister(), None);
        assert_eq!(compute_theta(&a, &b, &IsomOptions::default()).len(), 96);
    }

    #[test]
    fn all_order_six_means_unbranched() {
        let a = LabeledDecomposition::from_triangulation(&assets::figure_eight(), None);
        let b = LabeledDecomposition::from_triangulation(&assets::figure_eight_sister(), None);
        let opts = IsomOptions::default();
        let sets = find_isometry_classes(&a, &b, &opts);
        assert!(!sets.is_empty());
        for i in &sets {
            assert!(i.is_closed(&a, &b, &opts));
            assert!(is_unbranched(i, &a, &b));
        }
    }
}
