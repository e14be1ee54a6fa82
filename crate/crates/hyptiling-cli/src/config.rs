use crate::GlobalArgs;
use hyptiling::cell_enum::Strategy;
use hyptiling::epstein_penner::CanonOptions;
use hyptiling::tiling_isometry::IsomOptions;
use hyptiling::{assets, parse_triangulation, IdealTriangulation, SolveOptions};
use std::path::Path;

/// Bad input that clap cannot catch; exits with status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    pub command: &'static str,
    pub json: bool,
    pub precision: u32,
    pub eps_tilt: Option<f64>,
    pub eps_geom: Option<f64>,
    pub eps_isom: Option<f64>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
}

impl JobConfig {
    pub fn from_args(command: &'static str, g: &GlobalArgs) -> Self {
        JobConfig {
            command,
            json: g.json,
            precision: g.precision,
            eps_tilt: g.eps_tilt,
            eps_geom: g.eps_geom,
            eps_isom: g.eps_isom,
            seed: g.seed,
            jobs: g.jobs,
        }
    }

    pub fn solve(&self) -> SolveOptions {
        let mut o = SolveOptions::default();
        if let Some(e) = self.eps_geom {
            o.eps_geom = e;
        }
        if let Some(s) = self.seed {
            o.seed = s;
        }
        o
    }

    pub fn canon(&self) -> CanonOptions {
        let mut o = CanonOptions { solve: self.solve(), ..Default::default() };
        if let Some(e) = self.eps_tilt {
            o.eps_tilt = e;
        }
        if let Some(e) = self.eps_geom {
            o.eps_geom = e;
        }
        o
    }

    pub fn isom(&self) -> IsomOptions {
        let mut o = IsomOptions::default();
        if let Some(e) = self.eps_isom {
            o.eps = e;
        }
        o
    }
}

/// A triangulation file, or the bundled `m003`, `m004` or `borromean` when
/// no such file exists.
pub fn load_triangulation(input: &str) -> anyhow::Result<IdealTriangulation> {
    if input.trim().is_empty() {
        return Err(usage("empty input path"));
    }
    let path = Path::new(input);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        return Ok(parse_triangulation(&text)?);
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(input);
    match stem {
        "m004" | "figure-eight" => Ok(assets::figure_eight()),
        "m003" | "figure-eight-sister" => Ok(assets::figure_eight_sister()),
        "borromean" => Ok(assets::borromean()),
        _ => Err(usage(format!("{input}: no such file or bundled triangulation"))),
    }
}

pub fn parse_sizes(s: &str, cusps: usize) -> anyhow::Result<Vec<f64>> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| usage(format!("bad size `{x}` in --v"))))
        .collect::<anyhow::Result<Vec<f64>>>()?;
    if v.len() != cusps {
        return Err(usage(format!("--v has {} entries for {cusps} cusps", v.len())));
    }
    Ok(v)
}

pub fn parse_strategy(s: &str) -> anyhow::Result<Strategy> {
    match s.split_once(':') {
        None if s == "tilt" => Ok(Strategy::TiltPolytope),
        Some(("sweep", d)) => d.parse().map(Strategy::AreaSweep).map_err(|_| usage(format!("bad sweep budget `{d}`"))),
        _ => Err(usage(format!("unknown strategy `{s}`; expected `tilt` or `sweep:D`"))),
    }
}

/// `torus:WxH`, optionally with `/k` to split square `k` along a diagonal.
pub fn parse_torus(s: &str) -> anyhow::Result<Option<(usize, usize, Option<usize>)>> {
    let Some(rest) = s.strip_prefix("torus:") else { return Ok(None) };
    let bad = || usage(format!("bad torus `{s}`; expected torus:WxH or torus:WxH/k"));
    let (dims, cell) = match rest.split_once('/') {
        Some((d, k)) => (d, Some(k.parse().map_err(|_| bad())?)),
        None => (rest, None),
    };
    let (w, h) = dims.split_once('x').ok_or_else(bad)?;
    let (w, h): (usize, usize) = (w.parse().map_err(|_| bad())?, h.parse().map_err(|_| bad())?);
    if w == 0 || h == 0 || cell.is_some_and(|k| k >= w * h) {
        return Err(bad());
    }
    Ok(Some((w, h, cell)))
}
