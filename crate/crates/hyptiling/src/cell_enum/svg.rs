//! Picture of a three-cusp tilt polytope projected to the triangle
//! `v_0 + v_1 + v_2 = 1`.

use super::{ParameterCell, TiltPolytope};
use std::fmt::Write;

const SIDE: f64 = 600.0;
const MARGIN: f64 = 40.0;

fn project(p: &[f64]) -> (f64, f64) {
    let s: f64 = p.iter().sum();
    let (a, b, c) = (p[0] / s, p[1] / s, p[2] / s);
    let h = SIDE * 3f64.sqrt() / 2.0;
    // Corners: cusp 0 at the top, cusp 1 bottom left, cusp 2 bottom right.
    let x = MARGIN + a * SIDE / 2.0 + c * SIDE;
    let y = MARGIN + (b + c) * h;
    (x, y)
}

/// SVG drawing of the parameter cells, or `None` unless there are three
/// cusps.
pub fn projective_svg(poly: &TiltPolytope, cells: &[ParameterCell]) -> Option<String> {
    if poly.cusps != 3 {
        return None;
    }
    let h = SIDE * 3f64.sqrt() / 2.0;
    let mut s = String::new();
    let (w, ht) = (SIDE + 2.0 * MARGIN, h + 2.0 * MARGIN);
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{ht}" viewBox="0 0 {w} {ht}">"#).ok()?;
    let corners = [project(&[1.0, 0.0, 0.0]), project(&[0.0, 1.0, 0.0]), project(&[0.0, 0.0, 1.0])];
    let pts: Vec<String> = corners.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    writeln!(s, r#"<polygon points="{}" fill="none" stroke="black"/>"#, pts.join(" ")).ok()?;
    for (i, (x, y)) in corners.iter().enumerate() {
        let dy = if i == 0 { -10.0 } else { 24.0 };
        writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="14">v{i}</text>"#, y + dy).ok()?;
    }
    for f in &poly.faces {
        let Some(c) = f.cell else { continue };
        let p: Vec<(f64, f64)> = f.vertices.iter().map(|&v| project(&poly.vertices[v].point())).collect();
        match f.dimension {
            0 => {
                writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="black"/>"#, p[0].0, p[0].1).ok()?;
            }
            1 => {
                let colour = if cells[c].decomposition.is_simplicial() { "steelblue" } else { "firebrick" };
                writeln!(
                    s,
                    r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="2"/>"#,
                    p[0].0, p[0].1, p[1].0, p[1].1
                )
                .ok()?;
            }
            _ => {
                let (x, y) = project(&cells[c].sample);
                writeln!(
                    s,
                    r#"<text x="{x:.2}" y="{y:.2}" text-anchor="middle" font-size="12">{}</text>"#,
                    cells[c].decomposition.cell_count()
                )
                .ok()?;
            }
        }
    }
    s.push_str("</svg>\n");
    Some(s)
}
