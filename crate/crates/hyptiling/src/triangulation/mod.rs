//! Ideal triangulations: combinatorics, file formats, shapes and volume.

mod angles;
mod census;
pub(crate) mod cusp_graph;
mod shapes;
mod volume;

pub use census::parse_census;
pub use self::cusp_graph::CuspTriangle;
pub use shapes::{refine_shapes, solve_shapes, shape_residuals, ShapeAssignment, ShapeError, SolveOptions};
pub use volume::{bloch_wigner, tetrahedron_volume, volume};

use crate::perm::{edge_index, Perm4, EDGE_VERTICES};
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

/// Where a face is glued: face `f` of tet `t` goes to face `perm[f]` of
/// `tet`, vertex `v` going to vertex `perm[v]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TriangulationError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unglued face: tet {tet} face {face}")]
    UngluedFace { tet: usize, face: usize },
    #[error("non-involutive gluing at tet {tet} face {face}")]
    NonInvolutive { tet: usize, face: usize },
    #[error("inconsistent cusp assignment at tet {tet} vertex {vertex}")]
    InconsistentCusp { tet: usize, vertex: usize },
    #[error("{edges} edge classes for {tets} tetrahedra; not a cusped manifold triangulation")]
    EulerCharacteristic { edges: usize, tets: usize },
    #[error("empty triangulation")]
    Empty,
}

/// An ideal triangulation of a cusped 3-manifold.
///
/// Construction validates the gluings and, if the input is not coherently
/// oriented, relabels tetrahedra so that every gluing permutation is odd. A
/// non-orientable input is replaced by its orientation double cover and
/// `double_cover` is set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealTriangulation {
    gluings: Vec<[Gluing; 4]>,
    cusp_of_vertex: Vec<[usize; 4]>,
    cusp_count: usize,
    edge_class: Vec<[usize; 6]>,
    edge_orders: Vec<usize>,
    /// Whether the input was orientable.
    pub orientable: bool,
    /// Whether this is the orientation double cover of the input.
    pub double_cover: bool,
}

impl IdealTriangulation {
    /// Builds and validates a triangulation from (possibly one-sided) gluing
    /// data. Missing reverse gluings are filled in; a cusp assignment may be
    /// supplied or derived from vertex classes.
    pub fn from_gluings(
        raw: Vec<[Option<Gluing>; 4]>,
        cusps: Option<Vec<[usize; 4]>>,
    ) -> Result<Self, TriangulationError> {
        let n = raw.len();
        if n == 0 {
            return Err(TriangulationError::Empty);
        }
        let mut full: Vec<[Option<Gluing>; 4]> = raw.clone();
        for t in 0..n {
            for f in 0..4 {
                if let Some(g) = raw[t][f] {
                    if g.tet >= n {
                        return Err(TriangulationError::NonInvolutive { tet: t, face: f });
                    }
                    let back = Gluing { tet: t, perm: g.perm.inverse() };
                    let f2 = g.perm.apply(f);
                    match full[g.tet][f2] {
                        None => full[g.tet][f2] = Some(back),
                        Some(existing) if existing == back => {}
                        Some(_) => return Err(TriangulationError::NonInvolutive { tet: t, face: f }),
                    }
                }
            }
        }
        let mut gluings = Vec::with_capacity(n);
        for (t, row) in full.iter().enumerate() {
            let mut out = [Gluing { tet: 0, perm: Perm4::IDENTITY }; 4];
            for f in 0..4 {
                out[f] = row[f].ok_or(TriangulationError::UngluedFace { tet: t, face: f })?;
            }
            gluings.push(out);
        }
        for t in 0..n {
            for f in 0..4 {
                let g = gluings[t][f];
                let back = gluings[g.tet][g.perm.apply(f)];
                if back.tet != t || back.perm != g.perm.inverse() {
                    return Err(TriangulationError::NonInvolutive { tet: t, face: f });
                }
                if g.tet == t && g.perm.apply(f) == f {
                    return Err(TriangulationError::NonInvolutive { tet: t, face: f });
                }
            }
        }
        let classes = vertex_classes(&gluings);
        let (cusp_of_vertex, cusp_count) = match cusps {
            Some(c) => {
                if c.len() != n {
                    return Err(TriangulationError::InconsistentCusp { tet: c.len().min(n), vertex: 0 });
                }
                let mut rep: Vec<Option<usize>> = vec![None; 4 * n];
                for t in 0..n {
                    for v in 0..4 {
                        let r = classes[4 * t + v];
                        match rep[r] {
                            None => rep[r] = Some(c[t][v]),
                            Some(k) if k == c[t][v] => {}
                            Some(_) => return Err(TriangulationError::InconsistentCusp { tet: t, vertex: v }),
                        }
                    }
                }
                let count = c.iter().flatten().copied().max().unwrap_or(0) + 1;
                // Distinct vertex classes must carry distinct cusp labels.
                let mut owner: Vec<Option<usize>> = vec![None; count];
                for t in 0..n {
                    for v in 0..4 {
                        let r = classes[4 * t + v];
                        match owner[c[t][v]] {
                            None => owner[c[t][v]] = Some(r),
                            Some(o) if o == r => {}
                            Some(_) => return Err(TriangulationError::InconsistentCusp { tet: t, vertex: v }),
                        }
                    }
                }
                if owner.iter().any(|o| o.is_none()) {
                    return Err(TriangulationError::InconsistentCusp { tet: 0, vertex: 0 });
                }
                (c, count)
            }
            None => number_classes(&classes, n),
        };
        let mut tri = Self::assemble(gluings, cusp_of_vertex, cusp_count);
        if tri.edge_orders.len() != n {
            return Err(TriangulationError::EulerCharacteristic { edges: tri.edge_orders.len(), tets: n });
        }
        match orientation_signs(&tri.gluings) {
            Some(signs) => {
                tri.orientable = true;
                if signs.iter().any(|&s| !s) {
                    tri = tri.relabeled(&signs);
                }
                Ok(tri)
            }
            None => Ok(tri.orientation_double_cover()),
        }
    }

    fn assemble(gluings: Vec<[Gluing; 4]>, cusp_of_vertex: Vec<[usize; 4]>, cusp_count: usize) -> Self {
        let (edge_class, edge_orders) = edge_classes(&gluings);
        IdealTriangulation {
            gluings,
            cusp_of_vertex,
            cusp_count,
            edge_class,
            edge_orders,
            orientable: true,
            double_cover: false,
        }
    }

    /// Relabels tetrahedra whose sign is `false` by swapping vertices 2, 3.
    fn relabeled(&self, signs: &[bool]) -> Self {
        let sigma = |t: usize| if signs[t] { Perm4::IDENTITY } else { Perm4::transposition(2, 3) };
        let n = self.tet_count();
        let mut gluings = self.gluings.clone();
        let mut cusps = self.cusp_of_vertex.clone();
        for t in 0..n {
            let st = sigma(t);
            for i in 0..4 {
                let old = self.gluings[t][st.apply(i)];
                let s2 = sigma(old.tet);
                gluings[t][i] = Gluing { tet: old.tet, perm: s2.inverse().compose(old.perm).compose(st) };
                cusps[t][i] = self.cusp_of_vertex[t][st.apply(i)];
            }
        }
        let mut out = Self::assemble(gluings, cusps, self.cusp_count);
        out.orientable = self.orientable;
        out.double_cover = self.double_cover;
        out
    }

    /// The orientation double cover; cusps are renumbered from vertex classes.
    fn orientation_double_cover(&self) -> Self {
        let n = self.tet_count();
        let sigma = |a: usize| if a == 0 { Perm4::IDENTITY } else { Perm4::transposition(2, 3) };
        let mut gluings = vec![[Gluing { tet: 0, perm: Perm4::IDENTITY }; 4]; 2 * n];
        for a in 0..2 {
            for t in 0..n {
                for i in 0..4 {
                    let old = self.gluings[t][sigma(a).apply(i)];
                    let odd = usize::from(!old.perm.is_even());
                    let b = (1 + odd + a) % 2;
                    gluings[t + a * n][i] = Gluing {
                        tet: old.tet + b * n,
                        perm: sigma(b).compose(old.perm).compose(sigma(a)),
                    };
                }
            }
        }
        let classes = vertex_classes(&gluings);
        let (cusps, count) = number_classes(&classes, 2 * n);
        let mut out = Self::assemble(gluings, cusps, count);
        out.orientable = false;
        out.double_cover = true;
        out
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn cusp_count(&self) -> usize {
        self.cusp_count
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Gluing {
        self.gluings[tet][face]
    }

    pub fn gluings(&self) -> &[[Gluing; 4]] {
        &self.gluings
    }

    pub fn cusp_of(&self, tet: usize, vertex: usize) -> usize {
        self.cusp_of_vertex[tet][vertex]
    }

    pub fn cusp_assignment(&self) -> &[[usize; 4]] {
        &self.cusp_of_vertex
    }

    /// Edge class of edge `e` (see [`crate::perm::EDGE_VERTICES`]) of `tet`.
    pub fn edge_class(&self, tet: usize, e: usize) -> usize {
        self.edge_class[tet][e]
    }

    pub fn edge_class_count(&self) -> usize {
        self.edge_orders.len()
    }

    /// Number of tetrahedron edges incident to each edge class.
    pub fn edge_orders(&self) -> &[usize] {
        &self.edge_orders
    }

    /// The cyclic sequence of `(tet, a, b)` edge incidences around the edge
    /// `ab` of `tet`, starting there.
    pub fn edge_cycle(&self, tet: usize, a: usize, b: usize) -> Vec<(usize, usize, usize)> {
        let others: Vec<usize> = (0..4).filter(|&x| x != a && x != b).collect();
        let start = (tet, a, b, others[0], others[1]);
        let mut state = start;
        let mut out = Vec::new();
        loop {
            let (t, a, b, c, d) = state;
            out.push((t, a, b));
            let g = self.gluings[t][c];
            let p = g.perm;
            state = (g.tet, p.apply(a), p.apply(b), p.apply(d), p.apply(c));
            if state == start || out.len() > 6 * self.tet_count() {
                break;
            }
        }
        out
    }

    /// Members `(tet, edge)` of every edge class.
    pub fn edge_members(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.edge_class_count()];
        for t in 0..self.tet_count() {
            for e in 0..6 {
                out[self.edge_class[t][e]].push((t, e));
            }
        }
        out
    }

    /// Text in the TRI v1 format; each glued face pair is listed once.
    pub fn to_tri(&self) -> String {
        let mut s = String::new();
        if self.double_cover {
            s.push_str("# orientation double cover of a non-orientable input\n");
        }
        let _ = writeln!(s, "tri 1");
        let _ = writeln!(s, "tets {}", self.tet_count());
        let _ = writeln!(s, "cusps {}", self.cusp_count);
        for t in 0..self.tet_count() {
            for f in 0..4 {
                let g = self.gluings[t][f];
                let f2 = g.perm.apply(f);
                if (t, f) <= (g.tet, f2) {
                    let p = g.perm.0;
                    let _ = writeln!(s, "glue {t} {f} {} {f2} {} {} {} {}", g.tet, p[0], p[1], p[2], p[3]);
                }
            }
        }
        for t in 0..self.tet_count() {
            for v in 0..4 {
                let _ = writeln!(s, "cusp {t} {v} {}", self.cusp_of_vertex[t][v]);
            }
        }
        s
    }

    /// The same triangulation with tetrahedra permuted (`new index = order[old]`)
    /// and vertices of tet `t` relabeled by `relabel[t]` (old vertex `v` becomes
    /// `relabel[t][v]`).
    pub fn relabel(&self, order: &[usize], relabel: &[Perm4]) -> Result<Self, TriangulationError> {
        let n = self.tet_count();
        let mut raw = vec![[None; 4]; n];
        let mut cusps = vec![[0usize; 4]; n];
        for t in 0..n {
            let rt = relabel[t];
            for f in 0..4 {
                let g = self.gluings[t][f];
                let r2 = relabel[g.tet];
                raw[order[t]][rt.apply(f)] = Some(Gluing { tet: order[g.tet], perm: r2.compose(g.perm).compose(rt.inverse()) });
                cusps[order[t]][rt.apply(f)] = self.cusp_of_vertex[t][f];
            }
        }
        Self::from_gluings(raw, Some(cusps))
    }
}

/// `edge_orders` as a free function.
pub fn edge_orders(tri: &IdealTriangulation) -> Vec<usize> {
    tri.edge_orders().to_vec()
}

fn vertex_classes(gluings: &[[Gluing; 4]]) -> Vec<usize> {
    let n = gluings.len();
    let mut uf = UnionFind::<usize>::new(4 * n);
    for t in 0..n {
        for f in 0..4 {
            let g = gluings[t][f];
            for v in (0..4).filter(|&v| v != f) {
                uf.union(4 * t + v, 4 * g.tet + g.perm.apply(v));
            }
        }
    }
    (0..4 * n).map(|i| uf.find(i)).collect()
}

fn number_classes(classes: &[usize], n: usize) -> (Vec<[usize; 4]>, usize) {
    let mut id = std::collections::HashMap::new();
    let mut out = vec![[0usize; 4]; n];
    for t in 0..n {
        for v in 0..4 {
            let next = id.len();
            out[t][v] = *id.entry(classes[4 * t + v]).or_insert(next);
        }
    }
    (out, id.len())
}

fn edge_classes(gluings: &[[Gluing; 4]]) -> (Vec<[usize; 6]>, Vec<usize>) {
    let n = gluings.len();
    let mut uf = UnionFind::<usize>::new(6 * n);
    for t in 0..n {
        for f in 0..4 {
            let g = gluings[t][f];
            for (e, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
                if a != f && b != f {
                    uf.union(6 * t + e, 6 * g.tet + edge_index(g.perm.apply(a), g.perm.apply(b)));
                }
            }
        }
    }
    let mut id = std::collections::HashMap::new();
    let mut class = vec![[0usize; 6]; n];
    let mut orders = Vec::new();
    for t in 0..n {
        for e in 0..6 {
            let next = id.len();
            let k = *id.entry(uf.find(6 * t + e)).or_insert(next);
            if k == orders.len() {
                orders.push(0);
            }
            orders[k] += 1;
            class[t][e] = k;
        }
    }
    (class, orders)
}

/// Per-tet orientation signs making every gluing odd, if they exist.
fn orientation_signs(gluings: &[[Gluing; 4]]) -> Option<Vec<bool>> {
    let n = gluings.len();
    let mut sign: Vec<Option<bool>> = vec![None; n];
    for root in 0..n {
        if sign[root].is_some() {
            continue;
        }
        sign[root] = Some(true);
        let mut stack = vec![root];
        while let Some(t) = stack.pop() {
            let st = sign[t].unwrap();
            for f in 0..4 {
                let g = gluings[t][f];
                // Odd gluing keeps the sign, even gluing flips it.
                let want = if g.perm.is_even() { !st } else { st };
                match sign[g.tet] {
                    None => {
                        sign[g.tet] = Some(want);
                        stack.push(g.tet);
                    }
                    Some(s) if s == want => {}
                    Some(_) => return None,
                }
            }
        }
    }
    Some(sign.into_iter().map(|s| s.unwrap()).collect())
}

/// Parses the TRI v1 text format.
pub fn parse_triangulation(text: &str) -> Result<IdealTriangulation, TriangulationError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with("% Triangulation") {
        return parse_census(text);
    }
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let syntax = |line: usize, msg: &str| TriangulationError::Syntax { line, msg: msg.to_string() };
    let mut header = |key: &str| -> Result<(usize, usize), TriangulationError> {
        let (ln, l) = lines.next().ok_or_else(|| syntax(0, &format!("missing `{key}` line")))?;
        let mut it = l.split_whitespace();
        if it.next() != Some(key) {
            return Err(syntax(ln, &format!("expected `{key}`")));
        }
        let v = it
            .next()
            .and_then(|x| x.parse::<usize>().ok())
            .ok_or_else(|| syntax(ln, &format!("`{key}` needs a non-negative integer")))?;
        if it.next().is_some() {
            return Err(syntax(ln, "trailing tokens"));
        }
        Ok((ln, v))
    };
    let (ln, version) = header("tri")?;
    if version != 1 {
        return Err(syntax(ln, "unsupported version"));
    }
    let (ln, n) = header("tets")?;
    if n == 0 {
        return Err(syntax(ln, "need at least one tetrahedron"));
    }
    let (_, c) = header("cusps")?;
    let mut raw: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; n];
    let mut cusps: Vec<[Option<usize>; 4]> = vec![[None; 4]; n];
    let mut any_cusp = false;
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let nums: Result<Vec<usize>, _> = toks[1..].iter().map(|x| x.parse::<usize>()).collect();
        let nums = nums.map_err(|_| syntax(ln, "expected non-negative integers"))?;
        match toks[0] {
            "glue" => {
                if nums.len() != 8 {
                    return Err(syntax(ln, "`glue` takes 8 integers"));
                }
                let (t, f, t2, f2) = (nums[0], nums[1], nums[2], nums[3]);
                if t >= n || t2 >= n || f > 3 || f2 > 3 {
                    return Err(syntax(ln, "index out of range"));
                }
                let imgs = [nums[4], nums[5], nums[6], nums[7]];
                if imgs.iter().any(|&x| x > 3) {
                    return Err(syntax(ln, "permutation entry out of range"));
                }
                let perm = Perm4::new(imgs.map(|x| x as u8)).ok_or_else(|| syntax(ln, "not a permutation"))?;
                if perm.apply(f) != f2 {
                    return Err(syntax(ln, "permutation does not carry face f to face f'"));
                }
                let g = Gluing { tet: t2, perm };
                if let Some(old) = raw[t][f] {
                    if old != g {
                        return Err(syntax(ln, "face glued twice"));
                    }
                }
                raw[t][f] = Some(g);
            }
            "cusp" => {
                if nums.len() != 3 {
                    return Err(syntax(ln, "`cusp` takes 3 integers"));
                }
                let (t, v, k) = (nums[0], nums[1], nums[2]);
                if t >= n || v > 3 || k >= c {
                    return Err(syntax(ln, "index out of range"));
                }
                cusps[t][v] = Some(k);
                any_cusp = true;
            }
            other => return Err(syntax(ln, &format!("unknown directive `{other}`"))),
        }
    }
    let cusp_table = if any_cusp {
        let mut table = vec![[0usize; 4]; n];
        for t in 0..n {
            for v in 0..4 {
                table[t][v] = cusps[t][v].ok_or(TriangulationError::InconsistentCusp { tet: t, vertex: v })?;
            }
        }
        Some(table)
    } else {
        None
    };
    let tri = IdealTriangulation::from_gluings(raw, cusp_table)?;
    if !tri.double_cover && tri.cusp_count() != c {
        return Err(syntax(3, "cusp count does not match the vertex classes"));
    }
    Ok(tri)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;

    #[test]
    fn figure_eight_basics() {
        let tri = assets::figure_eight();
        assert_eq!(tri.tet_count(), 2);
        assert_eq!(tri.edge_orders(), &[6, 6]);
        assert_eq!(tri.cusp_count(), 1);
        assert!(tri.orientable && !tri.double_cover);
    }

    #[test]
    fn unglued_face_rejected() {
        let text = "tri 1\ntets 1\ncusps 1\nglue 0 1 0 2 0 2 1 3\nglue 0 3 0 3 1 0 2 3\n";
        // face 3 -> face 3 of the same tet with a non-trivial perm, face 0 never glued
        let err = parse_triangulation(text).unwrap_err();
        assert!(matches!(err, TriangulationError::UngluedFace { tet: 0, face: 0 }), "{err:?}");
    }

    #[test]
    fn syntax_error_has_line_number() {
        let err = parse_triangulation("tri 1\ntets 2\ncusps 1\nglue 0 0 1\n").unwrap_err();
        assert!(matches!(err, TriangulationError::Syntax { line: 4, .. }), "{err:?}");
    }

    #[test]
    fn non_involutive_rejected() {
        let text = "tri 1\ntets 2\ncusps 1\nglue 0 0 1 1 1 0 2 3\nglue 1 1 0 0 2 0 1 3\n";
        assert!(matches!(parse_triangulation(text), Err(TriangulationError::NonInvolutive { .. })));
    }

    #[test]
    fn round_trip() {
        for tri in [assets::figure_eight(), assets::figure_eight_sister(), assets::borromean()] {
            let again = parse_triangulation(&tri.to_tri()).unwrap();
            assert_eq!(again, tri);
        }
    }

    #[test]
    fn edge_cycle_lengths_match_orders() {
        let tri = assets::borromean();
        for t in 0..tri.tet_count() {
            for (e, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
                let cyc = tri.edge_cycle(t, a, b);
                assert_eq!(cyc.len(), tri.edge_orders()[tri.edge_class(t, e)]);
            }
        }
    }

    #[test]
    fn non_orientable_gets_double_cover() {
        // Gieseking manifold: one tetrahedron, non-orientable.
        let tri = parse_triangulation(include_str!("../../assets/m000.census")).unwrap();
        assert!(tri.double_cover && !tri.orientable);
        assert_eq!(tri.tet_count(), 2);
        assert_eq!(tri.cusp_count(), 1);
        assert_eq!(tri.edge_orders(), &[6, 6]);
        for t in 0..2 {
            for f in 0..4 {
                assert!(!tri.gluing(t, f).perm.is_even());
            }
        }
    }
}
