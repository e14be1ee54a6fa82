//! Integer area vectors of quotient cusp cross-sections.

use serde::{Deserialize, Serialize};

/// Cusp areas `a_i` of a degree-`d` quotient whose cusps lift along the
/// blocks of `partition`: each block sums to `degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AreaVector {
    pub areas: Vec<u64>,
    pub partition: Vec<Vec<usize>>,
    pub degree: u64,
}

impl AreaVector {
    pub fn total(&self) -> u64 {
        self.areas.iter().sum()
    }

    /// Size vector with `v_i = sqrt(a_i)`.
    pub fn sizes(&self) -> Vec<f64> {
        self.areas.iter().map(|&a| (a as f64).sqrt()).collect()
    }
}

/// All set partitions of `0..m`, blocks in order of their least element.
pub fn set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for i in 0..m {
        let mut next = Vec::new();
        for p in out {
            for b in 0..p.len() {
                let mut q = p.clone();
                q[b].push(i);
                next.push(q);
            }
            let mut q = p;
            q.push(vec![i]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// Compositions of `d` into `k` positive parts.
fn compositions(d: u64, k: usize) -> Vec<Vec<u64>> {
    if k == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if k == 1 {
        return if d >= 1 { vec![vec![d]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..d {
        for mut rest in compositions(d - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Area vectors for one partition and degree.
pub fn area_vectors(partition: &[Vec<usize>], degree: u64) -> Vec<AreaVector> {
    let m = partition.iter().map(|b| b.len()).sum();
    let mut out = vec![vec![0u64; m]];
    for block in partition {
        let parts = compositions(degree, block.len());
        out = out
            .into_iter()
            .flat_map(|a| {
                parts.iter().map(move |p| {
                    let mut a = a.clone();
                    for (&i, &x) in block.iter().zip(p) {
                        a[i] = x;
                    }
                    a
                })
            })
            .collect();
    }
    out.into_iter().map(|areas| AreaVector { areas, partition: partition.to_vec(), degree }).collect()
}

/// Every (partition, degree, areas) triple with total area at most `budget`.
pub fn enumerate_area_vectors(m: usize, budget: u64) -> Vec<AreaVector> {
    let mut out = Vec::new();
    for p in set_partitions(m) {
        let blocks = p.len() as u64;
        for d in 1..=budget / blocks {
            out.extend(area_vectors(&p, d));
        }
    }
    out
}

/// The distinct area vectors of `enumerate_area_vectors`, sorted.
pub fn distinct_areas(vectors: &[AreaVector]) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = vectors.iter().map(|v| v.areas.clone()).collect();
    a.sort();
    a.dedup();
    a
}
