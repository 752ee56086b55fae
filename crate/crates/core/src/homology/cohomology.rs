//! Vietoris-Rips persistence straight from a point cloud, by reducing the
//! coboundary matrix with clearing.
//!
//! Simplices are never stored wholesale: cofacets are enumerated from the
//! threshold graph when a column is needed. The pairs coincide with those of
//! the boundary-matrix reduction of the same filtration order (value, then
//! dimension, then lexicographic vertices), so the diagrams are identical.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use super::{Interval, PersistenceDiagram};
use crate::complexes::FlagGraph;
use crate::error::{Error, Result};
use crate::metric_space::PointCloud;

/// Vertices padded with `u32::MAX`; at most four (tetrahedra).
type Verts = [u32; 4];

#[derive(Clone, Copy, Debug)]
struct Entry {
    value: f64,
    verts: Verts,
}

impl Entry {
    fn cmp_filtration(&self, other: &Self) -> Ordering {
        self.value.total_cmp(&other.value).then_with(|| self.verts.cmp(&other.verts))
    }
}

fn add_columns(col: &mut Vec<Entry>, other: &[Entry], scratch: &mut Vec<Entry>) {
    scratch.clear();
    let (mut i, mut j) = (0, 0);
    while i < col.len() && j < other.len() {
        match col[i].cmp_filtration(&other[j]) {
            Ordering::Less => {
                scratch.push(col[i]);
                i += 1;
            }
            Ordering::Greater => {
                scratch.push(other[j]);
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    scratch.extend_from_slice(&col[i..]);
    scratch.extend_from_slice(&other[j..]);
    std::mem::swap(col, scratch);
}

struct Complex<'a> {
    cloud: &'a PointCloud,
    graph: FlagGraph,
}

impl Complex<'_> {
    /// Cofacets of `s` (with `len` vertices), ascending in filtration order.
    fn coboundary(&self, s: &Entry, len: usize, out: &mut Vec<Entry>) {
        out.clear();
        let adjacency = self.graph.adjacency();
        let verts = &s.verts[..len];
        let mut common: Vec<usize> = adjacency[verts[0] as usize].clone();
        for &v in &verts[1..] {
            let nbrs = &adjacency[v as usize];
            common.retain(|c| nbrs.binary_search(c).is_ok());
        }
        for c in common {
            let c32 = c as u32;
            if verts.contains(&c32) {
                continue;
            }
            let value = verts
                .iter()
                .map(|&v| self.cloud.dist(v as usize, c))
                .fold(s.value, f64::max);
            let mut vs = [u32::MAX; 4];
            let pos = verts.partition_point(|&v| v < c32);
            vs[..pos].copy_from_slice(&verts[..pos]);
            vs[pos] = c32;
            vs[pos + 1..=len].copy_from_slice(&verts[pos..]);
            out.push(Entry { value, verts: vs });
        }
        out.sort_unstable_by(Entry::cmp_filtration);
    }

    /// All simplices with `len` vertices, in filtration order.
    fn simplices(&self, len: usize) -> Vec<Entry> {
        let mut out = Vec::new();
        for clique in self.graph.cliques(len - 1) {
            if clique.len() != len {
                continue;
            }
            let mut verts = [u32::MAX; 4];
            let mut value = 0.0f64;
            for (k, &v) in clique.iter().enumerate() {
                verts[k] = v as u32;
                for &w in &clique[..k] {
                    value = value.max(self.cloud.dist(w, v));
                }
            }
            out.push(Entry { value, verts });
        }
        out.sort_unstable_by(Entry::cmp_filtration);
        out
    }
}

/// Persistence diagram of the Vietoris-Rips filtration of `cloud` up to
/// `threshold`, degrees `0..=max_degree`. Same result as reducing
/// `vr_filtration(cloud, max_degree + 1, threshold)` with
/// [`persistent_homology`](super::persistent_homology), at a fraction of the
/// memory.
pub fn vr_persistence(cloud: &PointCloud, max_degree: usize, threshold: f64) -> Result<PersistenceDiagram> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::NonPositiveScale(threshold));
    }
    if max_degree > 2 {
        return Err(Error::InvalidFiltration(format!(
            "implicit persistence supports degrees up to 2, got {max_degree}"
        )));
    }
    if cloud.len() >= u32::MAX as usize {
        return Err(Error::InvalidFiltration("too many points".into()));
    }
    let complex = Complex {
        cloud,
        graph: FlagGraph::threshold(cloud, threshold)?,
    };
    let mut degrees = vec![Vec::new(); max_degree + 1];
    // Simplices of dimension q that are pivots of dimension q-1 columns.
    let mut cleared: HashSet<Verts> = HashSet::new();
    let mut cob = Vec::new();
    let mut scratch = Vec::new();
    for (q, intervals) in degrees.iter_mut().enumerate() {
        let len = q + 1;
        let columns = complex.simplices(len);
        let mut pivot_owner: HashMap<Verts, usize> = HashMap::new();
        // Reduced columns, stored only once a column needed an addition;
        // otherwise the reduced column is the plain coboundary.
        let mut reduced: HashMap<usize, Vec<Entry>> = HashMap::new();
        let mut next_cleared = HashSet::new();
        for (idx, sigma) in columns.iter().enumerate().rev() {
            if cleared.contains(&sigma.verts) {
                continue;
            }
            complex.coboundary(sigma, len, &mut cob);
            let mut col = std::mem::take(&mut cob);
            let mut modified = false;
            while let Some(pivot) = col.first() {
                let Some(&owner) = pivot_owner.get(&pivot.verts) else {
                    break;
                };
                match reduced.get(&owner) {
                    Some(other) => add_columns(&mut col, other, &mut scratch),
                    None => {
                        let mut other = Vec::new();
                        complex.coboundary(&columns[owner], len, &mut other);
                        add_columns(&mut col, &other, &mut scratch);
                    }
                }
                modified = true;
            }
            match col.first() {
                Some(pivot) => {
                    if pivot.value > sigma.value {
                        intervals.push(Interval::new(sigma.value, pivot.value));
                    }
                    pivot_owner.insert(pivot.verts, idx);
                    next_cleared.insert(pivot.verts);
                    if modified {
                        reduced.insert(idx, col);
                    }
                }
                None => intervals.push(Interval::essential(sigma.value)),
            }
        }
        cleared = next_cleared;
    }
    PersistenceDiagram::from_degrees(degrees)
}
