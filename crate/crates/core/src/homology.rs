//! Persistent homology over the two-element field by left-to-right column
//! reduction of the boundary matrix.

mod cohomology;

pub use cohomology::vr_persistence;

use std::collections::HashMap;

use crate::complexes::{vr_filtration, Filtration, FlagGraph, Simplex, Vertices};
use crate::error::{Error, Result};
use crate::metric_space::PointCloud;

/// A half-open interval `[birth, death)`; `death` is `f64::INFINITY` for
/// classes that never die.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub birth: f64,
    pub death: f64,
}

impl Interval {
    pub fn new(birth: f64, death: f64) -> Self {
        Interval { birth, death }
    }

    pub fn essential(birth: f64) -> Self {
        Interval {
            birth,
            death: f64::INFINITY,
        }
    }

    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

/// Intervals per homology degree `0..=max_degree`, each list sorted by
/// `(birth, death)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PersistenceDiagram {
    degrees: Vec<Vec<Interval>>,
}

impl PersistenceDiagram {
    /// Builds a diagram from per-degree interval lists, dropping zero-length
    /// intervals and sorting. Fails if some interval has `death < birth`.
    pub fn from_degrees(mut degrees: Vec<Vec<Interval>>) -> Result<Self> {
        for (q, list) in degrees.iter_mut().enumerate() {
            if let Some(bad) = list.iter().find(|iv| iv.birth.is_nan() || iv.death.is_nan() || iv.death < iv.birth || iv.birth.is_infinite()) {
                return Err(Error::InvalidFiltration(format!(
                    "degree {q} interval [{}, {}) is malformed",
                    bad.birth, bad.death
                )));
            }
            list.retain(|iv| iv.birth < iv.death);
            list.sort_by(|a, b| a.birth.total_cmp(&b.birth).then(a.death.total_cmp(&b.death)));
        }
        Ok(PersistenceDiagram { degrees })
    }

    /// Number of degrees stored (`max_degree + 1`).
    pub fn num_degrees(&self) -> usize {
        self.degrees.len()
    }

    /// Intervals in degree `q`; empty for degrees beyond the stored range.
    pub fn degree(&self, q: usize) -> &[Interval] {
        self.degrees.get(q).map_or(&[], Vec::as_slice)
    }

    pub fn degrees(&self) -> &[Vec<Interval>] {
        &self.degrees
    }

    /// Number of essential intervals in degree `q`.
    pub fn betti(&self, q: usize) -> usize {
        self.degree(q).iter().filter(|iv| iv.is_essential()).count()
    }
}

/// Result of reducing a boundary matrix: for each column, its lowest
/// non-zero row after reduction (if any).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub lows: Vec<Option<usize>>,
    /// Column additions performed.
    pub additions: usize,
}

/// Standard reduction over ℤ/2. `columns[j]` lists the row indices of the
/// non-zero entries of column `j`, ascending. Columns are processed left to
/// right; column `j` only ever has an earlier column added to it.
pub fn reduce_boundary(mut columns: Vec<Vec<u32>>) -> Pairing {
    let mut pivot_col: Vec<u32> = vec![u32::MAX; columns.len()];
    let mut lows = vec![None; columns.len()];
    let mut additions = 0;
    let mut scratch = Vec::new();
    for j in 0..columns.len() {
        let mut col = std::mem::take(&mut columns[j]);
        while let Some(&low) = col.last() {
            let k = pivot_col[low as usize];
            if k == u32::MAX {
                break;
            }
            debug_assert!((k as usize) < j, "only earlier columns are added");
            add_sorted(&mut col, &columns[k as usize], &mut scratch);
            additions += 1;
        }
        if let Some(&low) = col.last() {
            pivot_col[low as usize] = j as u32;
            lows[j] = Some(low as usize);
        }
        columns[j] = col;
    }
    Pairing { lows, additions }
}

/// `col ← col + other` over ℤ/2 (symmetric difference of sorted lists).
fn add_sorted(col: &mut Vec<u32>, other: &[u32], scratch: &mut Vec<u32>) {
    scratch.clear();
    scratch.reserve(col.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < col.len() && j < other.len() {
        match col[i].cmp(&other[j]) {
            std::cmp::Ordering::Less => {
                scratch.push(col[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                scratch.push(other[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    scratch.extend_from_slice(&col[i..]);
    scratch.extend_from_slice(&other[j..]);
    std::mem::swap(col, scratch);
}

/// Boundary columns of the simplices of dimension at most `top_dim`, in
/// filtration order. Returns the columns and the positions (into
/// `simplices`) they correspond to.
fn boundary_columns(simplices: &[Simplex], top_dim: usize) -> Result<(Vec<Vec<u32>>, Vec<usize>)> {
    let kept: Vec<usize> = (0..simplices.len()).filter(|&i| simplices[i].dim() <= top_dim).collect();
    if kept.len() > u32::MAX as usize {
        return Err(Error::InvalidFiltration("too many simplices".into()));
    }
    // Faces of top-dimensional simplices are never looked up as cofaces, so
    // only lower dimensions need an index.
    let mut index: HashMap<&[usize], u32> = HashMap::new();
    for (col, &i) in kept.iter().enumerate() {
        if simplices[i].dim() < top_dim {
            index.insert(&simplices[i].vertices, col as u32);
        }
    }
    let mut columns = Vec::with_capacity(kept.len());
    for (col, &i) in kept.iter().enumerate() {
        let s = &simplices[i];
        let mut rows: Vec<u32> = Vec::with_capacity(s.vertices.len());
        for facet in s.facets() {
            let row = *index.get(facet.as_slice()).ok_or_else(|| {
                Error::InvalidFiltration(format!("facet {:?} of {:?} missing", facet.as_slice(), s.vertices.as_slice()))
            })?;
            if row as usize >= col {
                return Err(Error::InvalidFiltration(format!(
                    "facet {:?} appears after {:?}",
                    facet.as_slice(),
                    s.vertices.as_slice()
                )));
            }
            rows.push(row);
        }
        rows.sort_unstable();
        columns.push(rows);
    }
    Ok((columns, kept))
}

/// Persistence diagram of `filtration` in degrees `0..=max_degree`.
///
/// Requires `max_degree < filtration.max_dim()`: degree-`q` deaths need the
/// `(q + 1)`-simplices. Simplices above dimension `max_degree + 1` are ignored.
pub fn persistent_homology(filtration: &Filtration, max_degree: usize) -> Result<PersistenceDiagram> {
    if max_degree >= filtration.max_dim() {
        return Err(Error::InvalidFiltration(format!(
            "degree {max_degree} needs simplices of dimension {} but the filtration stops at {}",
            max_degree + 1,
            filtration.max_dim()
        )));
    }
    let simplices = filtration.simplices();
    let (columns, kept) = boundary_columns(simplices, max_degree + 1)?;
    let pairing = reduce_boundary(columns);
    let mut is_birth_paired = vec![false; kept.len()];
    let mut degrees: Vec<Vec<Interval>> = vec![Vec::new(); max_degree + 1];
    for (col, low) in pairing.lows.iter().enumerate() {
        if let Some(row) = *low {
            is_birth_paired[row] = true;
            let birth = &simplices[kept[row]];
            degrees[birth.dim()].push(Interval::new(birth.value, simplices[kept[col]].value));
        }
    }
    for (col, low) in pairing.lows.iter().enumerate() {
        let s = &simplices[kept[col]];
        if low.is_none() && !is_birth_paired[col] && s.dim() <= max_degree {
            degrees[s.dim()].push(Interval::essential(s.value));
        }
    }
    PersistenceDiagram::from_degrees(degrees)
}

/// Betti numbers of the Vietoris-Rips complex of `cloud` at `scale`, degrees
/// `0..=max_degree`.
pub fn betti_numbers(cloud: &PointCloud, scale: f64, max_degree: usize) -> Result<Vec<usize>> {
    if cloud.is_empty() {
        return Ok(vec![0; max_degree + 1]);
    }
    let filtration = vr_filtration(cloud, max_degree + 1, scale)?;
    let diagram = persistent_homology(&filtration, max_degree)?;
    Ok((0..=max_degree).map(|q| diagram.betti(q)).collect())
}

/// Betti numbers of the flag complex of `graph`, degrees `0..=max_degree`.
pub fn flag_betti_numbers(graph: &FlagGraph, max_degree: usize) -> Result<Vec<usize>> {
    let simplices: Vec<Simplex> = graph
        .cliques(max_degree + 1)
        .into_iter()
        .map(|vertices: Vertices| Simplex { vertices, value: 0.0 })
        .collect();
    let filtration = Filtration::new(simplices, max_degree + 1, 0.0)?;
    let diagram = persistent_homology(&filtration, max_degree)?;
    Ok((0..=max_degree).map(|q| diagram.betti(q)).collect())
}
