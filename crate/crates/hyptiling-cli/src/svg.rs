use hyptiling::cusp_shapes::HoroballView;
use hyptiling::ptb::{CuspTriangulationT0, Letter};
use std::fmt::Write;

const UNIT_X: f64 = 50.0;
const UNIT_Y: f64 = 70.0;
const MARGIN: f64 = 30.0;

/// One period of T0 in the four strips, with the edge-of-T label of every
/// edge and vertex.
pub fn t0_svg(t0: &CuspTriangulationT0) -> String {
    let letters = &t0.word.letters;
    let n = letters.len() as f64;
    // Position of the first letter of the given kind at or after i.
    let next = |kind: Letter, i: usize| -> f64 {
        let k = (i..i + letters.len()).find(|&j| letters[j % letters.len()] == kind).expect("hyperbolic word has both letters");
        k as f64
    };
    let (w, h) = (n * UNIT_X + 2.0 * MARGIN, 4.0 * UNIT_Y + 2.0 * MARGIN);
    let px = |x: f64| MARGIN + x * UNIT_X;
    let py = |line: f64| MARGIN + (4.0 - line) * UNIT_Y;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#);
    let _ = writeln!(s, r#"<title>T0 for {}</title>"#, t0.word);
    for t in &t0.triangles {
        let i = t.letter;
        let l = letters[i];
        let other = l.swapped();
        let strip = t.strip as f64;
        let bottom = (l == Letter::L) == (t.strip % 2 == 0);
        let (base, apex) = if bottom { (strip, strip + 1.0) } else { (strip + 1.0, strip) };
        let bl = (i as f64, base);
        let br = (next(l, i + 1), base);
        let ap = (next(other, i), apex);
        let corners = if bottom { [bl, br, ap] } else { [br, bl, ap] };
        let pts: Vec<String> = corners.iter().map(|&(x, y)| format!("{:.1},{:.1}", px(x), py(y))).collect();
        let _ = writeln!(s, r##"<polygon points="{}" fill="#f4f4f4" stroke="black" stroke-width="1"/>"##, pts.join(" "));
        for k in 0..3 {
            let (a, b) = (corners[k], corners[(k + 1) % 3]);
            let (mx, my) = (px((a.0 + b.0) / 2.0), py((a.1 + b.1) / 2.0));
            let label = t0.edge_label[t.edges[k]];
            let _ = writeln!(s, r#"<text x="{mx:.1}" y="{my:.1}" font-size="10" text-anchor="middle" fill="blue">{label}</text>"#);
        }
    }
    for (v, &(line, _)) in t0.vertex_pos.iter().enumerate() {
        let (x, y) = (px(t0.vertex_x[v]), py(line as f64));
        let _ = writeln!(s, r#"<circle cx="{x:.1}" cy="{y:.1}" r="3" fill="black"/>"#);
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{:.1}" font-size="11" text-anchor="middle" fill="red">{}</text>"#, y - 6.0, t0.vertex_label[v]);
    }
    for line in 0..=4 {
        let dir = if line < 4 && t0.strip_direction[line] < 0 { "&#8592;" } else { "&#8594;" };
        if line < 4 {
            let y = py(line as f64 + 0.5);
            let _ = writeln!(s, r#"<text x="{:.1}" y="{y:.1}" font-size="12" text-anchor="end">{dir}</text>"#, MARGIN - 6.0);
        }
    }
    s.push_str("</svg>\n");
    s
}

/// The horoballs at maximal packing seen from the cusp at infinity, with
/// the developed cusp triangulation and its eight nearest translates.
pub fn horoball_svg(view: &HoroballView) -> String {
    let (b1, b2) = view.translations;
    let shifts: Vec<(f64, f64)> = (-1..=1)
        .flat_map(|m| (-1..=1).map(move |k| (m as f64, k as f64)))
        .map(|(m, k)| (m * b1.re + k * b2.re, m * b1.im + k * b2.im))
        .collect();
    let pts = view.triangles.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in pts {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    let pad = 0.5 * b1.norm().max(b2.norm());
    let (x0, x1, y0, y1) = (x0 - pad, x1 + pad, y0 - pad, y1 + pad);
    let scale = 500.0 / (x1 - x0).max(y1 - y0);
    let (w, h) = ((x1 - x0) * scale, (y1 - y0) * scale);
    let tx = |x: f64| (x - x0) * scale;
    let ty = |y: f64| (y1 - y) * scale;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.1} {h:.1}">"#);
    let _ = writeln!(s, r#"<title>cusp {} at height {:.6}</title>"#, view.cusp, view.height);
    let _ = writeln!(s, r#"<clipPath id="window"><rect x="0" y="0" width="{w:.1}" height="{h:.1}"/></clipPath>"#);
    s.push_str("<g clip-path=\"url(#window)\">\n");
    for &(dx, dy) in &shifts {
        for b in &view.balls {
            let full = (b.diameter - view.height).abs() < 1e-9 * view.height;
            let fill = if full { "#9ecae1" } else { "#deebf7" };
            let _ = writeln!(
                s,
                r##"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="{fill}" stroke="#3182bd" stroke-width="0.5"/>"##,
                tx(b.center.re + dx),
                ty(b.center.im + dy),
                b.diameter / 2.0 * scale
            );
        }
    }
    for &(dx, dy) in &shifts {
        let central = dx == 0.0 && dy == 0.0;
        let stroke = if central { "black" } else { "#999999" };
        for t in &view.triangles {
            let p: Vec<String> = t.iter().map(|z| format!("{:.2},{:.2}", tx(z.re + dx), ty(z.im + dy))).collect();
            let _ = writeln!(s, r#"<polygon points="{}" fill="none" stroke="{stroke}" stroke-width="0.8"/>"#, p.join(" "));
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}
