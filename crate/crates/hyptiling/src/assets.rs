//! Bundled test triangulations.

use crate::triangulation::{parse_triangulation, IdealTriangulation};

pub const M004_TRI: &str = include_str!("../assets/m004.tri");
pub const M003_TRI: &str = include_str!("../assets/m003.tri");
pub const BORROMEAN_TRI: &str = include_str!("../assets/borromean.tri");

/// The figure-eight knot complement.
pub fn figure_eight() -> IdealTriangulation {
    parse_triangulation(M004_TRI).expect("bundled m004 parses")
}

/// The figure-eight sister manifold.
pub fn figure_eight_sister() -> IdealTriangulation {
    parse_triangulation(M003_TRI).expect("bundled m003 parses")
}

/// The Borromean rings complement as eight tetrahedra.
pub fn borromean() -> IdealTriangulation {
    parse_triangulation(BORROMEAN_TRI).expect("bundled Borromean triangulation parses")
}

pub const TABLE5_TSV: &str = include_str!("../assets/table5.tsv");

/// Named DT codes, one `name<TAB>code` per line.
pub fn table5() -> Vec<(&'static str, &'static str)> {
    TABLE5_TSV.lines().filter_map(|l| l.split_once('\t')).map(|(n, c)| (n.trim(), c.trim())).collect()
}
