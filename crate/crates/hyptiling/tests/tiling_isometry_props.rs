use hyptiling::assets;
use hyptiling::cell_enum::{all_canonical_decompositions, Strategy};
use hyptiling::epstein_penner::{canonical_decomposition, CanonOptions, SizeVector};
use hyptiling::tiling_isometry::plane::{square_torus, subdivide};
use hyptiling::tiling_isometry::*;
use hyptiling::triangulation::solve_shapes;
use hyptiling::{IdealTriangulation, SolveOptions};
use num_complex::Complex64;
use std::collections::HashSet;
use std::sync::OnceLock;

fn opts() -> IsomOptions {
    IsomOptions::default()
}

fn canonical(tri: &IdealTriangulation) -> LabeledDecomposition {
    let z = solve_shapes(tri, &SolveOptions::default()).unwrap().shapes;
    let d = canonical_decomposition(tri, &z, &SizeVector::ones(tri.cusp_count()), &CanonOptions::default()).unwrap();
    LabeledDecomposition::from_cells(&d, Mode::Geometric)
}

fn figure_eight() -> &'static LabeledDecomposition {
    static F: OnceLock<LabeledDecomposition> = OnceLock::new();
    F.get_or_init(|| canonical(&assets::figure_eight()))
}

fn sister() -> &'static LabeledDecomposition {
    static F: OnceLock<LabeledDecomposition> = OnceLock::new();
    F.get_or_init(|| canonical(&assets::figure_eight_sister()))
}

fn borromean() -> &'static (LabeledDecomposition, Vec<LabeledDecomposition>) {
    static F: OnceLock<(LabeledDecomposition, Vec<LabeledDecomposition>)> = OnceLock::new();
    F.get_or_init(|| {
        let tri = assets::borromean();
        let z = solve_shapes(&tri, &SolveOptions::default()).unwrap().shapes;
        let all = all_canonical_decompositions(&tri, &z, Strategy::TiltPolytope, &CanonOptions::default()).unwrap();
        let all = all.iter().map(|d| LabeledDecomposition::from_cells(d, Mode::Geometric)).collect();
        (canonical(&tri), all)
    })
}

fn triple(p: usize, q: usize, j: [usize; 4]) -> IsomTriple {
    IsomTriple { p, p_prime: q, j: j.to_vec(), orientation_preserving: Some(true) }
}

/// Closes `seed` under extension, or `None` if some extension fails.
fn closure_of(s: &LabeledDecomposition, s2: &LabeledDecomposition, seed: IsomTriple) -> Option<Vec<IsomTriple>> {
    let mut out = vec![seed];
    let mut k = 0;
    while k < out.len() {
        for f in 0..s.cells[out[k].p].faces.len() {
            let (u, _) = extend_across(s, s2, &out[k], f, &opts())?;
            if !out.iter().any(|x| x.p == u.p && x.p_prime == u.p_prime && x.j == u.j) {
                out.push(u);
            }
        }
        k += 1;
    }
    Some(out)
}

#[test]
fn torus_theta_and_translation_class() {
    let (m, m2) = (square_torus(1, 3), square_torus(2, 1));
    assert_eq!(compute_theta(&m, &m2, &opts()).len(), 48);
    // Across the top of A: B above it, P above itself.
    let (t, face) = extend_across(&m, &m2, &triple(0, 0, [0, 1, 2, 3]), 2, &opts()).unwrap();
    assert_eq!((t.p, t.p_prime, t.j.clone(), face), (1, 0, vec![0, 1, 2, 3], 0));

    let translations = closure_of(&m, &m2, triple(0, 0, [0, 1, 2, 3])).unwrap();
    assert_eq!(translations.len(), 6);
    assert!(translations.iter().all(|t| t.j == [0, 1, 2, 3]));
    let rotations = closure_of(&m, &m2, triple(0, 0, [1, 2, 3, 0])).unwrap();
    assert!(rotations.iter().all(|r| !translations.contains(r)));

    let sets = find_isometry_classes(&m, &m2, &opts());
    let tr = sets.iter().find(|i| i.triples[0].j == [0, 1, 2, 3]).unwrap();
    assert_eq!(tr.len(), 6);
    let cover = common_cover(tr, &m, &m2);
    assert!((cover.degree - 2.0).abs() < 1e-12 && (cover.degree_prime - 3.0).abs() < 1e-12);
    let rot = sets.iter().find(|i| i.contains(&triple(0, 0, [1, 2, 3, 0]))).unwrap();
    let cover = common_cover(rot, &m, &m2);
    assert!((cover.degree - 2.0).abs() < 1e-12 && (cover.degree_prime - 3.0).abs() < 1e-12);
    assert!(is_unbranched(tr, &m, &m2) && is_unbranched(rot, &m, &m2));
}

#[test]
fn subdivided_torus_has_no_classes() {
    let (m, m2) = (square_torus(1, 3), subdivide(&square_torus(2, 1), 1));
    assert_eq!(compute_theta(&m, &m2, &opts()).len(), 24);
    assert!(extend_across(&m, &m2, &triple(0, 0, [0, 1, 2, 3]), 1, &opts()).is_none());
    assert!(find_isometry_classes(&m, &m2, &opts()).is_empty());
}

#[test]
fn torus_self_cover_has_degree_one() {
    let m = square_torus(1, 3);
    let sets = find_isometry_classes(&m, &m, &opts());
    let id = sets.iter().find(|i| i.contains(&triple(0, 0, [0, 1, 2, 3]))).unwrap();
    assert_eq!(common_cover(id, &m, &m).degree, 1.0);
    assert_eq!(symmetry_classes(&m, &opts()), Err(TilingError::NotDiscrete));
}

#[test]
fn partition_and_closure() {
    let cases: Vec<(LabeledDecomposition, LabeledDecomposition)> = vec![
        (square_torus(1, 3), square_torus(2, 1)),
        (square_torus(2, 2), square_torus(1, 2)),
        (figure_eight().clone(), sister().clone()),
        (borromean().0.clone(), borromean().0.clone()),
    ];
    for (s, s2) in &cases {
        let theta: HashSet<IsomTriple> = compute_theta(s, s2, &opts()).into_iter().collect();
        let mut seen = HashSet::new();
        for i in find_isometry_classes(s, s2, &opts()) {
            assert!(i.is_closed(s, s2, &opts()));
            for t in &i.triples {
                assert!(theta.contains(t));
                assert!(seen.insert(t.clone()), "classes overlap");
            }
            let c = common_cover(&i, s, s2);
            for d in [c.degree, c.degree_prime] {
                assert!((d - d.round()).abs() < 1e-6 && d >= 1.0 - 1e-6, "degree {d}");
            }
        }
        // Everything left over fails to extend somewhere.
        for t in theta.iter().filter(|t| !seen.contains(*t)) {
            assert!(closure_of(s, s2, t.clone()).is_none());
        }
    }
}

#[test]
fn figure_eight_self_triples() {
    let m = figure_eight();
    assert_eq!(m.cells.len(), 2);
    assert_eq!(compute_theta(m, m, &opts()).len(), 96);
    let sets = find_isometry_classes(m, m, &opts());
    assert_eq!(sets.iter().map(ISet::len).sum::<usize>(), 96);
}

/// Oracle: automorphisms of the cell complex by brute force over cell
/// permutations and face-preserving vertex bijections.
fn automorphism_count(s: &LabeledDecomposition) -> usize {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for k in 0..n {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out
    }
    let face_set = |c: usize, f: &[usize]| {
        let mut v = f.to_vec();
        v.sort();
        s.cells[c].faces.iter().position(|g| {
            let mut w = g.clone();
            w.sort();
            w == v
        })
    };
    let n = s.cells.len();
    // Face-preserving bijections from cell a onto cell b.
    let maps: Vec<Vec<Vec<Vec<usize>>>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    if s.cells[a].vertices != s.cells[b].vertices {
                        return vec![];
                    }
                    perms(s.cells[a].vertices)
                        .into_iter()
                        .filter(|pi| {
                            s.cells[a].faces.iter().all(|f| face_set(b, &f.iter().map(|&v| pi[v]).collect::<Vec<_>>()).is_some())
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let compatible = |assign: &[(usize, Vec<usize>)], c: usize| {
        let (sc, pc) = &assign[c];
        s.cells[c].faces.iter().enumerate().all(|(f, fv)| {
            let nb = &s.cells[c].neighbors[f];
            if nb.cell > c {
                return true;
            }
            let (sn, pn) = &assign[nb.cell];
            let g = face_set(*sc, &fv.iter().map(|&v| pc[v]).collect::<Vec<_>>()).unwrap();
            let nb2 = &s.cells[*sc].neighbors[g];
            let gv = &s.cells[*sc].faces[g];
            nb2.cell == *sn
                && fv.iter().enumerate().all(|(k, &v)| {
                    let k2 = gv.iter().position(|&w| w == pc[v]).unwrap();
                    pn[nb.vertex_map[k]] == nb2.vertex_map[k2]
                })
        })
    };
    fn rec(
        c: usize,
        n: usize,
        assign: &mut Vec<(usize, Vec<usize>)>,
        used: &mut Vec<bool>,
        maps: &[Vec<Vec<Vec<usize>>>],
        ok: &dyn Fn(&[(usize, Vec<usize>)], usize) -> bool,
    ) -> usize {
        if c == n {
            return 1;
        }
        let mut total = 0;
        for b in 0..n {
            if used[b] {
                continue;
            }
            for pi in &maps[c][b] {
                assign.push((b, pi.clone()));
                if ok(assign, c) {
                    used[b] = true;
                    total += rec(c + 1, n, assign, used, maps, ok);
                    used[b] = false;
                }
                assign.pop();
            }
        }
        total
    }
    rec(0, n, &mut Vec::new(), &mut vec![false; n], &maps, &compatible)
}

#[test]
fn symmetry_classes_match_automorphism_oracle() {
    for (name, m, expected) in [("m004", figure_eight(), Some(8)), ("m003", sister(), None), ("borromean", &borromean().0, Some(48))] {
        let classes = symmetry_classes(m, &opts()).unwrap();
        let symmetries = classes.iter().filter(|c| c.is_symmetry).count();
        let oracle = automorphism_count(m);
        println!("{name}: {symmetries} symmetries, oracle {oracle}");
        assert_eq!(symmetries, oracle, "{name}");
        if let Some(e) = expected {
            assert_eq!(symmetries, e, "{name}");
        }
    }
}

#[test]
fn perturbed_label_is_rejected() {
    let m = figure_eight();
    let mut bent = m.clone();
    let eps = opts().eps;
    let CellShape::Ideal(s) = &mut bent.cells[0].shape else { panic!() };
    let scale = s[3][1].norm().max(s[3][0].norm());
    s[3][0] += Complex64::new(10.0 * eps * scale, 0.0);
    let between = |d: &LabeledDecomposition| compute_theta(d, m, &opts()).iter().filter(|t| t.p == 0 && t.p_prime == 1).count();
    assert_eq!(between(m), 24);
    assert_eq!(between(&bent), 0);
}

#[test]
fn sister_manifolds_are_commensurable() {
    let w = commensurable(&[figure_eight().clone()], &[sister().clone()], &opts()).unwrap();
    assert!(w.cover.degree >= 1.0);
    assert!(is_unbranched(&w.iset, figure_eight(), sister()));
    let comb = |t| LabeledDecomposition::from_triangulation(&t, None);
    let (a, b) = (comb(assets::figure_eight()), comb(assets::figure_eight_sister()));
    assert!(a.ridge_orders().iter().chain(&b.ridge_orders()).all(|&k| k == 6));
    let sets = find_isometry_classes(&a, &b, &opts());
    assert!(!sets.is_empty() && sets.iter().all(|i| is_unbranched(i, &a, &b)));
}

#[test]
fn mismatched_edge_orders_branch() {
    let comb = |t| LabeledDecomposition::from_triangulation(&t, None);
    let (a, b) = (comb(assets::figure_eight()), comb(assets::borromean()));
    let sets = find_isometry_classes(&a, &b, &opts());
    assert!(!sets.is_empty());
    assert!(sets.iter().all(|i| !is_unbranched(i, &a, &b)));
}

#[test]
fn figure_eight_and_borromean_are_not_commensurable() {
    let (_, all) = borromean();
    assert_eq!(all.len(), 13);
    assert!(commensurable(&[figure_eight().clone()], all, &opts()).is_none());
}

#[test]
fn figure_eight_commensurator() {
    let m = figure_eight();
    let data = commensurator_data(m, &[m.clone()], &opts()).unwrap();
    assert_eq!(data.symmetry_order, 8);
    assert_eq!(data.quotient_degree, 48);
    assert!(data.hidden);
    assert!((data.quotient_volume - 2.029883212819307 / 48.0).abs() < 1e-9);
}

#[test]
fn borromean_commensurator_is_consistent() {
    let (base, all) = borromean();
    let data = commensurator_data(base, all, &opts()).unwrap();
    println!("{data:?}");
    assert_eq!(data.symmetry_order, 48);
    assert!(data.quotient_degree >= data.symmetry_order);
    assert!((data.quotient_volume * data.quotient_degree as f64 - base.volume()).abs() < 1e-9);
}

#[test]
fn cover_exports() {
    let (m, m2) = (square_torus(1, 3), square_torus(2, 1));
    let i = &find_isometry_classes(&m, &m2, &opts())[0];
    let c = common_cover(i, &m, &m2);
    assert_eq!(c.gluings.len(), 2 * c.cells.len());
    let dot = c.to_dot();
    assert_eq!(dot.matches(" -- ").count(), c.gluings.len());
    assert_eq!(c.to_json()["schema"], 1);
}
