use crate::config::{load_triangulation, parse_sizes, parse_strategy, parse_torus, usage, JobConfig, UsageError};
use crate::svg;
use hyptiling::cell_enum::{
    all_canonical_decompositions, build_tilt_polytope, decomposition_key, enumerate_area_vectors, perturb_to_top_cell, projective_svg,
    sigma_row, CellEnumError, Strategy,
};
use hyptiling::cusp_shapes::{
    commensurable_shapes, cusp_search_dimension, cusp_shapes, horoball_view, symmetry_orbits, CuspShape, CuspShapeError, RelationOptions,
    ShapeRelation,
};
use hyptiling::dt_codes::{crossing_table, parse_alpha, parse_numeric, serialize, validate, validate_entry, DTCode, DtError};
use hyptiling::epstein_penner::{canonical_decomposition, cusp_density, maximal_cusp_sizes, CellDecomposition, EpError, SizeVector};
use hyptiling::ptb::{
    classify_symmetries, cusp_triangulation, edge_correspondence, is_hyperbolic, monodromy_triangulation, t0_symmetry_bruteforce,
    word_to_matrix, LRWord, PtbError, T0_BRUTEFORCE_MAX_LEN,
};
use hyptiling::tiling_isometry::plane::{square_torus, subdivide};
use hyptiling::tiling_isometry::{
    commensurable, commensurator_data, common_cover, compute_theta, find_isometry_classes, is_unbranched, symmetry_classes,
    LabeledDecomposition, Mode, TilingError,
};
use hyptiling::triangulation::{edge_orders, solve_shapes, volume, ShapeError, TriangulationError};
use hyptiling::IdealTriangulation;
use num_complex::Complex64;
use serde_json::{json, Map, Value};
use std::fmt::Write;

/// Subcommand -> library operations it exposes.
#[cfg(test)]
pub const OPERATIONS: &[(&str, &[&str])] = &[
    ("parse", &["parse_triangulation", "edge_orders"]),
    ("solve", &["solve_shapes", "volume"]),
    ("canonize", &["canonical_decomposition", "minkowski_inner", "lift_cell", "hyperplane_normal", "tilt_row", "tilt_system"]),
    ("cells", &["enumerate_area_vectors", "sigma_row", "perturb_to_top_cell", "build_tilt_polytope", "all_canonical_decompositions"]),
    ("isom", &["compute_theta", "extend_across", "find_isometry_classes", "common_cover", "is_unbranched"]),
    ("symm", &["symmetry_classes", "commensurator_data"]),
    ("commensurate", &["commensurable"]),
    ("cuspdensity", &["maximal_cusp_sizes", "cusp_density", "render_cusp_svg:horoballs"]),
    ("shapes", &["cusp_shape", "sl2z_reduce", "commensurable_shapes", "cusp_search_dimension"]),
    (
        "ptb",
        &[
            "word_to_matrix",
            "is_hyperbolic",
            "monodromy_triangulation",
            "cusp_triangulation",
            "edge_correspondence",
            "classify_symmetries",
            "t0_symmetry_bruteforce",
            "render_cusp_svg:t0",
        ],
    ),
    ("dt", &["parse_alpha", "serialize", "validate", "crossing_table"]),
];

/// Every operation the library offers to the command line.
#[cfg(test)]
pub const LIBRARY_OPERATIONS: &[&str] = &[
    "parse_triangulation",
    "solve_shapes",
    "edge_orders",
    "volume",
    "minkowski_inner",
    "lift_cell",
    "hyperplane_normal",
    "tilt_row",
    "tilt_system",
    "canonical_decomposition",
    "maximal_cusp_sizes",
    "cusp_density",
    "compute_theta",
    "extend_across",
    "find_isometry_classes",
    "common_cover",
    "is_unbranched",
    "symmetry_classes",
    "commensurator_data",
    "commensurable",
    "enumerate_area_vectors",
    "sigma_row",
    "perturb_to_top_cell",
    "build_tilt_polytope",
    "all_canonical_decompositions",
    "cusp_shape",
    "sl2z_reduce",
    "commensurable_shapes",
    "cusp_search_dimension",
    "word_to_matrix",
    "is_hyperbolic",
    "monodromy_triangulation",
    "cusp_triangulation",
    "edge_correspondence",
    "classify_symmetries",
    "t0_symmetry_bruteforce",
    "parse_alpha",
    "serialize",
    "validate",
    "crossing_table",
    "render_cusp_svg:t0",
    "render_cusp_svg:horoballs",
];

pub struct Output {
    pub json: Value,
    pub text: String,
}

impl Output {
    pub fn render(&self, cfg: &JobConfig) -> String {
        if cfg.json {
            let mut obj = Map::new();
            obj.insert("schema".into(), json!(1));
            obj.insert("command".into(), json!(cfg.command));
            if let Value::Object(m) = rounded(&self.json, cfg.precision) {
                obj.extend(m);
            }
            format!("{}\n", serde_json::to_string(&Value::Object(obj)).expect("JSON values serialize"))
        } else {
            self.text.clone()
        }
    }
}

fn round_sig(x: f64, digits: u32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits as usize - 1, x).parse().unwrap_or(x)
}

fn rounded(v: &Value, digits: u32) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => json!(round_sig(n.as_f64().unwrap(), digits)),
        Value::Array(a) => Value::Array(a.iter().map(|x| rounded(x, digits)).collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, x)| (k.clone(), rounded(x, digits))).collect()),
        other => other.clone(),
    }
}

fn error_code(e: &anyhow::Error) -> &'static str {
    if e.is::<UsageError>() {
        "usage"
    } else if e.is::<std::io::Error>() {
        "io"
    } else if e.is::<TriangulationError>() {
        "triangulation"
    } else if e.is::<ShapeError>() {
        "shapes"
    } else if e.is::<EpError>() {
        "canonical"
    } else if e.is::<CellEnumError>() {
        "cell_enum"
    } else if e.is::<TilingError>() {
        "tiling"
    } else if let Some(c) = e.downcast_ref::<CuspShapeError>() {
        if matches!(c, CuspShapeError::Inconclusive { .. }) {
            "inconclusive"
        } else {
            "cusp_shape"
        }
    } else if e.is::<PtbError>() {
        "ptb"
    } else if e.is::<DtError>() {
        "dt"
    } else {
        "error"
    }
}

pub fn error_json(cfg: &JobConfig, e: &anyhow::Error) -> String {
    let v = json!({
        "schema": 1,
        "command": cfg.command,
        "error": { "code": error_code(e), "message": format!("{e:#}") },
    });
    serde_json::to_string(&v).expect("JSON values serialize")
}

fn fmt(cfg: &JobConfig, x: f64) -> String {
    format!("{}", round_sig(x, cfg.precision))
}

/// Parts below the printed precision relative to `|z|` print as zero.
fn cfmt(cfg: &JobConfig, z: Complex64) -> String {
    let tiny = 10f64.powi(-(cfg.precision as i32)) * z.norm();
    let clean = |x: f64| if x.abs() < tiny { 0.0 } else { x };
    let z = Complex64::new(clean(z.re), clean(z.im));
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", fmt(cfg, z.re), fmt(cfg, z.im.abs()))
}

fn cjson(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn write_file(path: &str, contents: &str) -> anyhow::Result<()> {
    if path.trim().is_empty() {
        return Err(usage("empty output path"));
    }
    std::fs::write(path, contents)?;
    Ok(())
}


fn solved(cfg: &JobConfig, input: &str) -> anyhow::Result<(IdealTriangulation, Vec<Complex64>)> {
    let tri = load_triangulation(input)?;
    let shapes = solve_shapes(&tri, &cfg.solve())?.shapes;
    Ok((tri, shapes))
}

fn canonical_at_ones(cfg: &JobConfig, tri: &IdealTriangulation, shapes: &[Complex64]) -> anyhow::Result<CellDecomposition> {
    Ok(canonical_decomposition(tri, shapes, &SizeVector::ones(tri.cusp_count()), &cfg.canon())?)
}

/// Canonical tilings of every parameter cell; just `D(1)` with one cusp.
fn all_tilings(cfg: &JobConfig, tri: &IdealTriangulation, shapes: &[Complex64]) -> anyhow::Result<Vec<LabeledDecomposition>> {
    let decs = all_canonical_decompositions(tri, shapes, Strategy::TiltPolytope, &cfg.canon())?;
    Ok(decs.iter().map(|d| LabeledDecomposition::from_cells(d, Mode::Geometric)).collect())
}

fn cell_types_json(d: &CellDecomposition) -> Value {
    json!(d.cell_types().iter().map(|(v, f)| json!({"vertices": v, "face_sizes": f})).collect::<Vec<_>>())
}

fn cell_types_text(d: &CellDecomposition) -> String {
    let mut counts: Vec<(String, usize)> = Vec::new();
    for (v, f) in d.cell_types() {
        let name = match (v, f.len()) {
            (4, 4) => "tetrahedron".to_string(),
            (6, 8) => "octahedron".to_string(),
            (5, 5) => "square pyramid".to_string(),
            _ => format!("{v}-vertex cell"),
        };
        match counts.iter_mut().find(|c| c.0 == name) {
            Some(c) => c.1 += 1,
            None => counts.push((name, 1)),
        }
    }
    counts.iter().map(|(n, k)| format!("{k} {n}")).collect::<Vec<_>>().join(", ")
}

pub fn parse(_cfg: &JobConfig, input: &str) -> anyhow::Result<Output> {
    let tri = load_triangulation(input)?;
    let orders = edge_orders(&tri);
    let text = format!(
        "tetrahedra: {}\ncusps: {}\nedge orders: {:?}\n{}",
        tri.tet_count(),
        tri.cusp_count(),
        orders,
        if tri.double_cover { "orientation double cover of a non-orientable input\n" } else { "" }
    );
    let json = json!({
        "tetrahedra": tri.tet_count(),
        "cusps": tri.cusp_count(),
        "edge_orders": orders,
        "double_cover": tri.double_cover,
    });
    Ok(Output { json, text })
}

pub fn solve(cfg: &JobConfig, input: &str) -> anyhow::Result<Output> {
    let tri = load_triangulation(input)?;
    let sa = solve_shapes(&tri, &cfg.solve())?;
    let vol = volume(&tri, &sa)?;
    let mut text = String::new();
    for (i, &z) in sa.shapes.iter().enumerate() {
        writeln!(text, "z{i} = {}", cfmt(cfg, z))?;
    }
    writeln!(text, "volume: {}\nresidual: {:e}", fmt(cfg, vol), sa.residual)?;
    let json = json!({
        "shapes": sa.shapes.iter().map(|&z| cjson(z)).collect::<Vec<_>>(),
        "volume": vol,
        "residual": sa.residual,
    });
    Ok(Output { json, text })
}

pub fn canonize(cfg: &JobConfig, input: &str, v: Option<&str>) -> anyhow::Result<Output> {
    let (tri, shapes) = solved(cfg, input)?;
    let v = match v {
        Some(s) => parse_sizes(s, tri.cusp_count())?,
        None => vec![1.0; tri.cusp_count()],
    };
    let dec = canonical_decomposition(&tri, &shapes, &SizeVector::new(v.clone())?, &cfg.canon())?;
    let tilts = dec.tilt_system()?;
    let volumes = dec.volumes();
    let mut text = format!("{} cells: {}\n", dec.cell_count(), cell_types_text(&dec));
    for (i, vol) in volumes.iter().enumerate() {
        writeln!(text, "cell {i}: {} vertices, volume {}", dec.cells[i].vertices.len(), fmt(cfg, *vol))?;
    }
    writeln!(text, "{} coplanarity rows, {} tilt rows", tilts.l_rows.len(), tilts.f_rows.len())?;
    let json = json!({
        "v": v,
        "cell_count": dec.cell_count(),
        "cell_types": cell_types_json(&dec),
        "volumes": volumes,
        "decomposition": dec.to_json(),
    });
    Ok(Output { json, text })
}

pub fn cells(cfg: &JobConfig, input: &str, strategy: &str, v: Option<&str>, svg_path: Option<&str>) -> anyhow::Result<Output> {
    let strategy = parse_strategy(strategy)?;
    let (tri, shapes) = solved(cfg, input)?;
    let c = tri.cusp_count();
    let opts = cfg.canon();
    let mut json = Map::new();
    let mut text = String::new();
    if let Some(v) = v {
        let v = parse_sizes(v, c)?;
        let (w, cell) = perturb_to_top_cell(&tri, &shapes, &v, &opts)?;
        writeln!(text, "top cell at {:?}: {}", w.iter().map(|x| fmt(cfg, *x)).collect::<Vec<_>>(), cell_types_text(&cell.decomposition))?;
        json.insert("perturbed".into(), json!({"v": w, "sigma": cell.sigma, "key": decomposition_key(&cell.decomposition)}));
    }
    if strategy == Strategy::TiltPolytope && c > 1 {
        let (poly, cells) = build_tilt_polytope(&tri, &shapes, &opts)?;
        writeln!(text, "tilt polytope: {} half-spaces, {} vertices, {} parameter cells", poly.halfspaces.len(), poly.vertices.len(), cells.len())?;
        for (i, p) in cells.iter().enumerate() {
            writeln!(text, "cell {i}: projective dimension {}, {}", p.dimension - 1, cell_types_text(&p.decomposition))?;
        }
        if let Some(path) = svg_path {
            let drawing = projective_svg(&poly, &cells).ok_or_else(|| usage("--svg needs a three-cusped manifold"))?;
            write_file(path, &drawing)?;
        }
        json.insert("tilt_polytope".into(), poly.to_json(&cells));
    } else {
        if svg_path.is_some() {
            return Err(usage("--svg needs the tilt strategy"));
        }
        if let Strategy::AreaSweep(d) = strategy {
            json.insert("area_vectors".into(), json!(enumerate_area_vectors(c, d).len()));
        }
        let decs = all_canonical_decompositions(&tri, &shapes, strategy, &opts)?;
        let mut list = Vec::new();
        for (i, d) in decs.iter().enumerate() {
            let sigma = sigma_row(&d.tilt_system()?.f_rows);
            writeln!(text, "decomposition {i}: {}", cell_types_text(d))?;
            list.push(json!({"cell_types": cell_types_json(d), "sigma": sigma, "key": decomposition_key(d)}));
        }
        json.insert("decompositions".into(), Value::Array(list));
    }
    Ok(Output { json: Value::Object(json), text })
}

fn labeled(cfg: &JobConfig, input: &str, mode: Mode) -> anyhow::Result<LabeledDecomposition> {
    if let Some((w, h, cell)) = parse_torus(input)? {
        let t = square_torus(w, h);
        return Ok(match cell {
            Some(k) => subdivide(&t, k),
            None => t,
        }
        .with_mode(mode));
    }
    let (tri, shapes) = solved(cfg, input)?;
    Ok(LabeledDecomposition::from_cells(&canonical_at_ones(cfg, &tri, &shapes)?, mode))
}

pub fn isom(cfg: &JobConfig, first: &str, second: &str, combinatorial: bool, dot: Option<&str>) -> anyhow::Result<Output> {
    let mode = if combinatorial { Mode::Combinatorial } else { Mode::Geometric };
    let (a, b) = (labeled(cfg, first, mode)?, labeled(cfg, second, mode)?);
    a.validate()?;
    b.validate()?;
    let opts = cfg.isom();
    let theta = compute_theta(&a, &b, &opts);
    let classes = find_isometry_classes(&a, &b, &opts);
    let mut text = format!("|Θ| = {}\n{} isometry classes\n", theta.len(), classes.len());
    let mut list = Vec::new();
    let mut first_cover = None;
    for (i, iset) in classes.iter().enumerate() {
        let cover = common_cover(iset, &a, &b);
        let unbranched = is_unbranched(iset, &a, &b);
        writeln!(
            text,
            "class {i}: {} triples, degrees ({}, {}), {}",
            iset.len(),
            fmt(cfg, cover.degree),
            fmt(cfg, cover.degree_prime),
            if unbranched { "unbranched" } else { "branched" }
        )?;
        list.push(json!({"size": iset.len(), "unbranched": unbranched, "cover": cover.to_json()}));
        if unbranched && first_cover.is_none() {
            first_cover = Some(cover);
        }
    }
    if let Some(path) = dot {
        let cover = first_cover.as_ref().ok_or_else(|| anyhow::anyhow!("no unbranched class to export"))?;
        write_file(path, &cover.to_dot())?;
    }
    let json = json!({"theta": theta.len(), "classes": list});
    Ok(Output { json, text })
}

pub fn symm(cfg: &JobConfig, input: &str) -> anyhow::Result<Output> {
    let (tri, shapes) = solved(cfg, input)?;
    let base = LabeledDecomposition::from_cells(&canonical_at_ones(cfg, &tri, &shapes)?, Mode::Geometric);
    let tilings = if tri.cusp_count() > 1 { all_tilings(cfg, &tri, &shapes)? } else { Vec::new() };
    let opts = cfg.isom();
    let classes = symmetry_classes(&base, &opts)?;
    let data = commensurator_data(&base, &tilings, &opts)?;
    let text = format!(
        "symmetry group order: {}\nlargest tiling symmetry degree: {}\nquotient volume: {}\nhidden symmetries: {}\nnote: {}\n",
        data.symmetry_order,
        data.quotient_degree,
        fmt(cfg, data.quotient_volume),
        if data.hidden { "yes" } else { "no" },
        data.caveat
    );
    let json = json!({
        "symmetry_order": data.symmetry_order,
        "classes": classes.iter().map(|c| json!({"size": c.iset.len(), "degree": c.degree, "is_symmetry": c.is_symmetry})).collect::<Vec<_>>(),
        "quotient_degree": data.quotient_degree,
        "quotient_volume": data.quotient_volume,
        "hidden": data.hidden,
        "tiling": data.tiling,
        "caveat": data.caveat,
    });
    Ok(Output { json, text })
}

pub fn commensurate(cfg: &JobConfig, first: &str, second: &str, dot: Option<&str>) -> anyhow::Result<Output> {
    let (ta, sa) = solved(cfg, first)?;
    let (tb, sb) = solved(cfg, second)?;
    let a = all_tilings(cfg, &ta, &sa)?;
    let b = all_tilings(cfg, &tb, &sb)?;
    match commensurable(&a, &b, &cfg.isom()) {
        Some(found) => {
            if let Some(path) = dot {
                write_file(path, &found.cover.to_dot())?;
            }
            let text = format!(
                "commensurable: yes\ncommon cover of degrees ({}, {}) with {} cells\n",
                fmt(cfg, found.cover.degree),
                fmt(cfg, found.cover.degree_prime),
                found.cover.cells.len()
            );
            let json = json!({
                "commensurable": true,
                "tilings": [found.first, found.second],
                "iset_size": found.iset.len(),
                "cover": found.cover.to_json(),
            });
            Ok(Output { json, text })
        }
        None => {
            if dot.is_some() {
                return Err(anyhow::anyhow!("no common cover to export"));
            }
            let text = "commensurable: no\n".to_string();
            Ok(Output { json: json!({"commensurable": false, "tilings_compared": [a.len(), b.len()]}), text })
        }
    }
}

pub fn cuspdensity(cfg: &JobConfig, input: &str, svg_path: Option<&str>, cusp: usize) -> anyhow::Result<Output> {
    let (tri, shapes) = solved(cfg, input)?;
    let sizes = maximal_cusp_sizes(&tri, &shapes)?.into_inner();
    let density = if tri.cusp_count() == 1 { Some(cusp_density(&tri, &shapes)?) } else { None };
    let mut text = format!("maximal cusp sizes: {:?}\n", sizes.iter().map(|x| fmt(cfg, *x)).collect::<Vec<_>>());
    match density {
        Some(d) => writeln!(text, "cusp density: {}", fmt(cfg, d))?,
        None => writeln!(text, "cusp density: undefined for {} cusps", tri.cusp_count())?,
    }
    if let Some(path) = svg_path {
        let view = horoball_view(&tri, &shapes, cusp)?;
        write_file(path, &svg::horoball_svg(&view))?;
    }
    Ok(Output { json: json!({"sizes": sizes, "density": density}), text })
}

fn shape_json(s: &CuspShape) -> Value {
    json!({"cusp": s.cusp, "shape": cjson(s.z), "raw": cjson(s.raw), "reduction": s.reduction})
}

pub fn shapes(cfg: &JobConfig, input: &str, against: Option<&str>) -> anyhow::Result<Output> {
    let (tri, z) = solved(cfg, input)?;
    let list = cusp_shapes(&tri, &z)?;
    let dec = canonical_at_ones(cfg, &tri, &z)?;
    let orbits = symmetry_orbits(&dec, &cfg.isom())?;
    let ropts = RelationOptions::default();
    let dim = cusp_search_dimension(&orbits, &list, &ropts)?;
    let mut text = String::new();
    for s in &list {
        writeln!(text, "cusp {}: {}", s.cusp.unwrap_or(0), cfmt(cfg, s.z))?;
    }
    writeln!(text, "symmetry orbits: {orbits:?}\nsearch dimension: {dim}")?;
    let mut json = json!({
        "cusps": list.iter().map(shape_json).collect::<Vec<_>>(),
        "orbits": orbits,
        "search_dimension": dim,
    });
    if let Some(other) = against {
        let (tri2, z2) = solved(cfg, other)?;
        let s2 = cusp_shapes(&tri2, &z2)?;
        let rel = commensurable_shapes(&list[0], &s2[0], &ropts)?;
        let rel_json = match rel {
            ShapeRelation::Yes { a, b, c, d } => {
                writeln!(text, "cusp shapes commensurable: ({c} z + {d}) z' = {a} z + {b}")?;
                json!({"commensurable": true, "witness": [a, b, c, d]})
            }
            ShapeRelation::No { bound, shortest_lower_bound, needed } => {
                writeln!(text, "cusp shapes not commensurable (no relation with coefficients up to {bound})")?;
                json!({"commensurable": false, "bound": bound, "shortest_lower_bound": shortest_lower_bound, "needed": needed})
            }
        };
        json["against"] = json!({"cusp": shape_json(&s2[0]), "relation": rel_json});
    }
    Ok(Output { json, text })
}

pub fn ptb(_cfg: &JobConfig, word: &str, svg_path: Option<&str>) -> anyhow::Result<Output> {
    if word.trim().is_empty() {
        return Err(usage("empty LR word"));
    }
    let w: LRWord = word.parse()?;
    let m = word_to_matrix(&w);
    let hyperbolic = is_hyperbolic(m);
    let tri = monodromy_triangulation(&w)?;
    let t0 = cusp_triangulation(&w)?;
    let (_, _, labels) = edge_correspondence(&t0);
    let sym = classify_symmetries(&w);
    let brute = if w.len() <= T0_BRUTEFORCE_MAX_LEN { Some(t0_symmetry_bruteforce(&w)?.len()) } else { None };
    if let Some(path) = svg_path {
        write_file(path, &svg::t0_svg(&t0))?;
    }
    let text = format!(
        "word: {w}\nmonodromy: {m:?} (trace {}, {})\ntetrahedra: {}\nT0: {} triangles, {} edge labels\nsymmetry types: {:?}\npredicted T0 symmetries: {}\nbrute-force T0 symmetries: {}\nexceptional: {}\n",
        m[0][0] + m[1][1],
        if hyperbolic { "hyperbolic" } else { "not hyperbolic" },
        tri.tet_count(),
        t0.triangles.len(),
        labels,
        sym.types,
        sym.predicted_order(),
        brute.map_or("skipped".to_string(), |b| b.to_string()),
        sym.exceptional
    );
    let json = json!({
        "word": w.to_string(),
        "matrix": m,
        "hyperbolic": hyperbolic,
        "tetrahedra": tri.tet_count(),
        "t0": {"triangles": t0.triangles.len(), "labels": labels, "label_orders": t0.label_orders()},
        "symmetry": sym,
        "predicted_order": sym.predicted_order(),
        "bruteforce_order": brute,
    });
    Ok(Output { json, text })
}

fn dt_entry(name: Option<&str>, code: &DTCode) -> (Value, String) {
    let report = match name {
        Some(n) => validate_entry(n, code),
        None => validate(code),
    };
    let alpha = serialize(code).ok();
    let table = crossing_table(code);
    let mut text = String::new();
    if let Some(n) = name {
        text.push_str(&format!("{n}: "));
    }
    text.push_str(&format!(
        "{code}{}{}\n",
        alpha.as_ref().map_or(String::new(), |a| format!("  [{a}]")),
        if report.is_valid() { String::new() } else { format!("  INVALID {:?}", report.violations) }
    ));
    let json = json!({
        "name": name,
        "n": code.crossings(),
        "k": code.components(),
        "sequence": code.sequence(),
        "valid": report.is_valid(),
        "numeric": code.to_string(),
        "brackets": code.brackets,
        "alpha": alpha,
        "validation": report,
        "crossings": table,
    });
    (json, text)
}

pub fn dt(_cfg: &JobConfig, codes: &[String], table: Option<&str>) -> anyhow::Result<Output> {
    let mut entries: Vec<(Option<String>, String)> = codes.iter().map(|c| (None, c.clone())).collect();
    if let Some(path) = table {
        let text = std::fs::read_to_string(path)?;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            match line.split_once('\t') {
                Some((name, code)) => entries.push((Some(name.trim().to_string()), code.trim().to_string())),
                None => entries.push((None, line.trim().to_string())),
            }
        }
    }
    if entries.is_empty() || entries.iter().any(|(_, c)| c.trim().is_empty()) {
        return Err(usage("no DT code given"));
    }
    let mut list = Vec::new();
    let mut text = String::new();
    for (name, raw) in &entries {
        let code = if raw.trim_start().starts_with('(') { parse_numeric(raw)? } else { parse_alpha(raw)? };
        let (j, t) = dt_entry(name.as_deref(), &code);
        list.push(j);
        text.push_str(&t);
    }
    Ok(Output { json: json!({"codes": list}), text })
}
