//! Finite metric spaces: point storage, distances, closed δ-neighborhoods and
//! the percentile rule for choosing δ.

mod kdtree;

pub use kdtree::KdTree;

use crate::error::{Error, Result};

/// Largest ambient dimension for which the KD-tree is used by [`neighborhoods`].
pub const KD_TREE_MAX_DIM: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    PrecomputedMatrix,
}

#[derive(Clone, Debug, PartialEq)]
enum Storage {
    /// Row-major coordinates, `dim` values per point.
    Coordinates { dim: usize, coords: Vec<f64> },
    /// Row-major `n × n` distance matrix.
    Matrix { n: usize, entries: Vec<f64> },
}

/// An immutable finite metric space, either points in ℝ^d with the Euclidean
/// metric or an explicit distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    storage: Storage,
}

impl PointCloud {
    /// An empty Euclidean cloud of the given dimension.
    pub fn empty(dim: usize) -> Self {
        PointCloud {
            storage: Storage::Coordinates {
                dim,
                coords: Vec::new(),
            },
        }
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Ok(Self::empty(0));
        };
        let dim = first.as_ref().len();
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut coords = Vec::with_capacity(dim * points.len());
        for (index, p) in points.iter().enumerate() {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                    index,
                });
            }
            if let Some(&bad) = p.iter().find(|x| !x.is_finite()) {
                return Err(Error::NonFiniteCoordinate(bad));
            }
            coords.extend_from_slice(p);
        }
        Ok(PointCloud {
            storage: Storage::Coordinates { dim, coords },
        })
    }

    /// Builds a cloud from a distance matrix. The matrix must be square,
    /// symmetric, with zero diagonal and non-negative finite entries.
    pub fn from_matrix<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(Error::InvalidMatrix(format!("diagonal entry {i} is not zero")));
            }
            for j in 0..n {
                let v = entries[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({i}, {j}) = {v} is not a non-negative finite number"
                    )));
                }
                if v != entries[j * n + i] {
                    return Err(Error::InvalidMatrix(format!("entries ({i}, {j}) and ({j}, {i}) differ")));
                }
            }
        }
        Ok(PointCloud {
            storage: Storage::Matrix { n, entries },
        })
    }

    pub fn metric(&self) -> Metric {
        match self.storage {
            Storage::Coordinates { .. } => Metric::Euclidean,
            Storage::Matrix { .. } => Metric::PrecomputedMatrix,
        }
    }

    pub fn len(&self) -> usize {
        match &self.storage {
            Storage::Coordinates { dim, coords } => {
                if *dim == 0 {
                    0
                } else {
                    coords.len() / dim
                }
            }
            Storage::Matrix { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Ambient dimension for coordinate clouds, `None` for matrix input.
    pub fn dim(&self) -> Option<usize> {
        match &self.storage {
            Storage::Coordinates { dim, .. } => Some(*dim),
            Storage::Matrix { .. } => None,
        }
    }

    /// Coordinates of point `i`, if this is a coordinate cloud.
    pub fn point(&self, i: usize) -> Option<&[f64]> {
        match &self.storage {
            Storage::Coordinates { dim, coords } if i < self.len() => Some(&coords[i * dim..(i + 1) * dim]),
            _ => None,
        }
    }

    /// Row `i` of the distance matrix, if this is a matrix cloud.
    pub fn matrix_row(&self, i: usize) -> Option<&[f64]> {
        match &self.storage {
            Storage::Matrix { n, entries } if i < *n => Some(&entries[i * n..(i + 1) * n]),
            _ => None,
        }
    }

    /// Distance between points `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> Result<f64> {
        let len = self.len();
        for index in [i, j] {
            if index >= len {
                return Err(Error::IndexOutOfRange { index, len });
            }
        }
        Ok(self.dist(i, j))
    }

    /// Unchecked distance; panics on out-of-range indices.
    #[inline]
    pub(crate) fn dist(&self, i: usize, j: usize) -> f64 {
        match &self.storage {
            Storage::Coordinates { dim, coords } => {
                euclidean(&coords[i * dim..(i + 1) * dim], &coords[j * dim..(j + 1) * dim])
            }
            Storage::Matrix { n, entries } => entries[i * n + j],
        }
    }

    /// The sub-space on `indices`, in the given order. Distances between
    /// retained points are bit-identical to those in `self`.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let len = self.len();
        if let Some(&index) = indices.iter().find(|&&i| i >= len) {
            return Err(Error::IndexOutOfRange { index, len });
        }
        let storage = match &self.storage {
            Storage::Coordinates { dim, coords } => Storage::Coordinates {
                dim: *dim,
                coords: indices
                    .iter()
                    .flat_map(|&i| coords[i * dim..(i + 1) * dim].iter().copied())
                    .collect(),
            },
            Storage::Matrix { n, entries } => Storage::Matrix {
                n: indices.len(),
                entries: indices
                    .iter()
                    .flat_map(|&i| indices.iter().map(move |&j| entries[i * n + j]))
                    .collect(),
            },
        };
        Ok(PointCloud { storage })
    }

    /// Largest pairwise distance, 0 for fewer than two points.
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut best = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(self.dist(i, j));
            }
        }
        best
    }

    pub(crate) fn coords(&self) -> Option<(usize, &[f64])> {
        match &self.storage {
            Storage::Coordinates { dim, coords } => Some((*dim, coords)),
            Storage::Matrix { .. } => None,
        }
    }
}

/// Euclidean distance. The summation order is fixed (coordinate 0 first) so
/// that the KD-tree's box bounds are comparable bit-for-bit.
#[inline]
pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Free-function form of [`PointCloud::distance`].
pub fn pairwise_distance(cloud: &PointCloud, i: usize, j: usize) -> Result<f64> {
    cloud.distance(i, j)
}

/// Closed δ-neighborhoods of every point: `N(i) = { j : d(i, j) ≤ δ }`,
/// each stored as a strictly ascending index list containing `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct NeighborGraph {
    delta: f64,
    neighborhoods: Vec<Vec<usize>>,
}

impl NeighborGraph {
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn len(&self) -> usize {
        self.neighborhoods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighborhoods.is_empty()
    }

    pub fn neighborhood(&self, i: usize) -> &[usize] {
        &self.neighborhoods[i]
    }

    pub fn neighborhoods(&self) -> &[Vec<usize>] {
        &self.neighborhoods
    }

    pub fn into_neighborhoods(self) -> Vec<Vec<usize>> {
        self.neighborhoods
    }

    /// Checks reflexivity, symmetry and strict sorting.
    pub fn check_invariants(&self) -> Result<()> {
        check_closed_graph(&self.neighborhoods)
    }
}

/// Which neighbor-search backend [`neighborhoods_with`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NeighborSearch {
    /// KD-tree for Euclidean clouds of dimension ≤ [`KD_TREE_MAX_DIM`], brute force otherwise.
    #[default]
    Auto,
    BruteForce,
    /// Falls back to brute force for matrix input.
    KdTree,
}

/// Closed δ-neighborhoods. Boundary points (`d == δ`) are included.
pub fn neighborhoods(cloud: &PointCloud, delta: f64) -> Result<NeighborGraph> {
    neighborhoods_with(cloud, delta, NeighborSearch::Auto)
}

pub fn neighborhoods_with(cloud: &PointCloud, delta: f64, search: NeighborSearch) -> Result<NeighborGraph> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::NonPositiveScale(delta));
    }
    Ok(NeighborGraph {
        delta,
        neighborhoods: closed_neighborhoods(cloud, delta, search),
    })
}

/// Neighborhood computation without the `δ > 0` precondition, for threshold
/// graphs at scale zero.
pub(crate) fn closed_neighborhoods(cloud: &PointCloud, radius: f64, search: NeighborSearch) -> Vec<Vec<usize>> {
    let use_tree = match search {
        NeighborSearch::Auto => cloud.dim().is_some_and(|d| d <= KD_TREE_MAX_DIM),
        NeighborSearch::BruteForce => false,
        NeighborSearch::KdTree => cloud.dim().is_some(),
    };
    match (use_tree, cloud.coords()) {
        (true, Some((dim, coords))) => {
            let tree = KdTree::build(dim, coords);
            (0..cloud.len())
                .map(|i| {
                    let mut nbrs = tree.within(&coords[i * dim..(i + 1) * dim], radius);
                    nbrs.sort_unstable();
                    nbrs
                })
                .collect()
        }
        _ => brute_force_neighborhoods(cloud, radius),
    }
}

fn brute_force_neighborhoods(cloud: &PointCloud, radius: f64) -> Vec<Vec<usize>> {
    let n = cloud.len();
    let mut out: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for i in 0..n {
        for j in i + 1..n {
            if cloud.dist(i, j) <= radius {
                out[i].push(j);
                out[j].push(i);
            }
        }
    }
    for nbrs in &mut out {
        nbrs.sort_unstable();
    }
    out
}

pub(crate) fn check_closed_graph(adjacency: &[Vec<usize>]) -> Result<()> {
    let n = adjacency.len();
    for (i, nbrs) in adjacency.iter().enumerate() {
        if nbrs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGraph(format!("neighborhood of {i} is not strictly ascending")));
        }
        if nbrs.binary_search(&i).is_err() {
            return Err(Error::InvalidGraph(format!("neighborhood of {i} does not contain {i}")));
        }
        for &j in nbrs {
            if j >= n {
                return Err(Error::IndexOutOfRange { index: j, len: n });
            }
            if adjacency[j].binary_search(&i).is_err() {
                return Err(Error::InvalidGraph(format!("{j} is adjacent to {i} but not vice versa")));
            }
        }
    }
    Ok(())
}

/// Nearest-rank `p`-th percentile of the distances over distinct pairs
/// `i < j`: the element at 1-based position `⌈p·m/100⌉` of the sorted list.
pub fn delta_from_percentile(cloud: &PointCloud, p: f64) -> Result<f64> {
    let n = cloud.len();
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    if !(p > 0.0 && p <= 100.0) {
        return Err(Error::InvalidPercentile(p));
    }
    let mut dists = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            dists.push(cloud.dist(i, j));
        }
    }
    dists.sort_unstable_by(f64::total_cmp);
    let m = dists.len();
    let rank = ((p * m as f64) / 100.0).ceil() as usize;
    Ok(dists[rank.clamp(1, m) - 1])
}
