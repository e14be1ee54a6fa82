//! Reader for the subset of the census triangulation file format we use:
//! header, neighbor table, permutation table and cusp table. Peripheral
//! curves and stored shapes are skipped.

use super::{Gluing, IdealTriangulation, TriangulationError};
use crate::perm::Perm4;

struct Tokens<'a> {
    toks: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, &'a str), TriangulationError> {
        let last_line = self.toks.last().map(|t| t.0).unwrap_or(0);
        let t = self.toks.get(self.pos).copied().ok_or(TriangulationError::Syntax {
            line: last_line,
            msg: format!("unexpected end of file, expected {what}"),
        })?;
        self.pos += 1;
        Ok(t)
    }

    fn int(&mut self, what: &str) -> Result<(usize, i64), TriangulationError> {
        let (ln, s) = self.next(what)?;
        s.parse::<i64>()
            .map(|v| (ln, v))
            .map_err(|_| TriangulationError::Syntax { line: ln, msg: format!("expected integer {what}, found `{s}`") })
    }
}

/// Parses a census-format triangulation.
pub fn parse_census(text: &str) -> Result<IdealTriangulation, TriangulationError> {
    let lines: Vec<&str> = text.lines().collect();
    let first = lines.iter().position(|l| !l.trim().is_empty()).unwrap_or(0);
    if !lines.get(first).is_some_and(|l| l.trim_start().starts_with("% Triangulation")) {
        return Err(TriangulationError::Syntax { line: first + 1, msg: "expected `% Triangulation`".into() });
    }
    // name, solution type, orientability, Chern-Simons line
    let body_start = first + 5;
    if lines.len() < body_start {
        return Err(TriangulationError::Syntax { line: lines.len(), msg: "truncated header".into() });
    }
    let mut toks = Tokens { toks: Vec::new(), pos: 0 };
    for (i, l) in lines.iter().enumerate().skip(body_start) {
        for t in l.split_whitespace() {
            toks.toks.push((i + 1, t));
        }
    }
    let (_, or_cusps) = toks.int("orientable cusp count")?;
    let (_, nonor_cusps) = toks.int("non-orientable cusp count")?;
    let cusp_total = (or_cusps + nonor_cusps) as usize;
    for _ in 0..cusp_total {
        let (ln, kind) = toks.next("cusp type")?;
        if kind != "torus" && kind != "Klein" {
            return Err(TriangulationError::Syntax { line: ln, msg: format!("unknown cusp type `{kind}`") });
        }
        toks.next("meridian filling")?;
        toks.next("longitude filling")?;
    }
    let (ln, n) = toks.int("tetrahedron count")?;
    if n <= 0 {
        return Err(TriangulationError::Syntax { line: ln, msg: "need at least one tetrahedron".into() });
    }
    let n = n as usize;
    let mut raw = vec![[None; 4]; n];
    let mut cusps = vec![[0usize; 4]; n];
    for t in 0..n {
        let mut nbr = [0usize; 4];
        for f in 0..4 {
            let (ln, v) = toks.int("neighbor")?;
            if v < 0 || v as usize >= n {
                return Err(TriangulationError::Syntax { line: ln, msg: "neighbor out of range".into() });
            }
            nbr[f] = v as usize;
        }
        for f in 0..4 {
            let (ln, s) = toks.next("permutation")?;
            let digits: Vec<u8> = s.bytes().map(|b| b.wrapping_sub(b'0')).collect();
            let perm = (digits.len() == 4)
                .then(|| Perm4::new([digits[0], digits[1], digits[2], digits[3]]))
                .flatten()
                .ok_or_else(|| TriangulationError::Syntax { line: ln, msg: format!("bad permutation `{s}`") })?;
            raw[t][f] = Some(Gluing { tet: nbr[f], perm });
        }
        for v in 0..4 {
            let (ln, k) = toks.int("cusp index")?;
            if k < 0 || k as usize >= cusp_total {
                return Err(TriangulationError::Syntax { line: ln, msg: "finite or out-of-range vertex".into() });
            }
            cusps[t][v] = k as usize;
        }
        for _ in 0..64 {
            toks.int("peripheral curve entry")?;
        }
        toks.next("shape real part")?;
        toks.next("shape imaginary part")?;
    }
    IdealTriangulation::from_gluings(raw, Some(cusps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_file_reports_line() {
        let text = "% Triangulation\nm004\ngeometric_solution 2.0\noriented_manifold\nCS_known 0\n\n1 0\n torus 0 0\n\n2\n1 1 1 1\n";
        match parse_census(text) {
            Err(TriangulationError::Syntax { line, .. }) => assert_eq!(line, 11),
            other => panic!("{other:?}"),
        }
    }
}
