//! δ-core subsampling by iterated removal of dominated points, the
//! δ-equivalence test between subsamples, and farthest-point sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metric_space::{neighborhoods, NeighborGraph, PointCloud};

/// Membership mask over point indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveSet(Vec<bool>);

impl ActiveSet {
    pub fn all(n: usize) -> Self {
        ActiveSet(vec![true; n])
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut mask = vec![false; n];
        for &i in indices {
            *mask.get_mut(i).ok_or(Error::IndexOutOfRange { index: i, len: n })? = true;
        }
        Ok(ActiveSet(mask))
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.get(i).copied().unwrap_or(false)
    }

    pub fn remove(&mut self, i: usize) {
        if let Some(slot) = self.0.get_mut(i) {
            *slot = false;
        }
    }

    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter_map(|(i, &a)| a.then_some(i)).collect()
    }

    pub(crate) fn mask(&self) -> &[bool] {
        &self.0
    }
}

/// One removal step of a core computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Removal {
    pub removed: usize,
    pub dominator: usize,
    /// 1-based sweep in which the point was marked.
    pub sweep: usize,
}

/// Outcome of a δ-core or flag-core reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreResult {
    /// Surviving original indices, ascending.
    pub surviving: Vec<usize>,
    /// Removals in the order they were marked.
    pub removed: Vec<Removal>,
    /// Number of full sweeps, including the final sweep that marks nothing.
    pub sweeps: usize,
}

impl CoreResult {
    /// Re-checks the result against the closed neighborhoods it was computed
    /// from: survivors and removals partition the vertex set, replaying the
    /// trace one removal at a time only ever removes a dominated vertex, and
    /// no survivor is dominated by another survivor.
    pub fn verify(&self, adjacency: &[Vec<usize>]) -> Result<()> {
        let n = adjacency.len();
        let mut seen = vec![false; n];
        for &i in self.surviving.iter().chain(self.removed.iter().map(|r| &r.removed)) {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidGraph(format!("vertex {i} reported twice")));
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidGraph(format!("vertex {missing} missing from result")));
        }
        let mut active = vec![true; n];
        for r in &self.removed {
            if !active[r.dominator] || r.dominator == r.removed {
                return Err(Error::InvalidGraph(format!(
                    "vertex {} removed by inactive dominator {}",
                    r.removed, r.dominator
                )));
            }
            if !dominated_by(adjacency, &active, r.removed, r.dominator) {
                return Err(Error::InvalidGraph(format!(
                    "vertex {} was not dominated by {} when removed",
                    r.removed, r.dominator
                )));
            }
            active[r.removed] = false;
        }
        if let Some((i, j)) = find_dominated_pair(adjacency, &active) {
            return Err(Error::InvalidGraph(format!("survivor {i} is dominated by survivor {j}")));
        }
        Ok(())
    }
}

/// `(N(i) ∩ active) ⊆ (N(j) ∩ active)`, by a linear merge of the sorted lists.
pub(crate) fn dominated_by(adjacency: &[Vec<usize>], active: &[bool], i: usize, j: usize) -> bool {
    let big = &adjacency[j];
    let mut k = 0;
    for &v in &adjacency[i] {
        if !active[v] {
            continue;
        }
        while k < big.len() && big[k] < v {
            k += 1;
        }
        if k == big.len() || big[k] != v {
            return false;
        }
        k += 1;
    }
    true
}

/// A pair `(i, j)` of active vertices with `i` dominated by `j`, if any.
pub(crate) fn find_dominated_pair(adjacency: &[Vec<usize>], active: &[bool]) -> Option<(usize, usize)> {
    (0..adjacency.len()).filter(|&i| active[i]).find_map(|i| {
        adjacency[i]
            .iter()
            .find(|&&j| j != i && active[j] && dominated_by(adjacency, active, i, j))
            .map(|&j| (i, j))
    })
}

/// Whether active point `i` is dominated by active point `j` in `graph`.
pub fn is_dominated(graph: &NeighborGraph, active: &ActiveSet, i: usize, j: usize) -> Result<bool> {
    let n = graph.len();
    for index in [i, j] {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, len: n });
        }
        if !active.contains(index) {
            return Err(Error::Inactive(index));
        }
    }
    if i == j {
        return Err(Error::SelfDomination(i));
    }
    Ok(dominated_by(graph.neighborhoods(), active.mask(), i, j))
}

/// Core of the flag complex given by closed neighborhoods `adjacency`.
///
/// Each sweep visits the active vertices in ascending order. A vertex is
/// marked on its first active, unmarked neighbor whose active neighborhood
/// contains its own; marked vertices cannot dominate later in the same sweep.
/// Marks are applied when the sweep ends, and the loop stops after a sweep
/// that marks nothing.
pub fn strong_collapse(adjacency: &[Vec<usize>]) -> CoreResult {
    let n = adjacency.len();
    let mut active = vec![true; n];
    let mut marked = vec![false; n];
    let mut removed = Vec::new();
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let mut marks = Vec::new();
        for i in 0..n {
            if !active[i] {
                continue;
            }
            let dominator = adjacency[i]
                .iter()
                .copied()
                .filter(|&j| j != i && active[j] && !marked[j])
                .find(|&j| dominated_by(adjacency, &active, i, j));
            if let Some(j) = dominator {
                marked[i] = true;
                marks.push(Removal {
                    removed: i,
                    dominator: j,
                    sweep: sweeps,
                });
            }
        }
        if marks.is_empty() {
            break;
        }
        for r in &marks {
            active[r.removed] = false;
        }
        removed.extend(marks);
    }
    CoreResult {
        surviving: (0..n).filter(|&i| active[i]).collect(),
        removed,
        sweeps,
    }
}

/// δ-core of `cloud`: a subsample with no δ-dominated points.
pub fn delta_core(cloud: &PointCloud, delta: f64) -> Result<CoreResult> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let graph = neighborhoods(cloud, delta)?;
    Ok(strong_collapse(graph.neighborhoods()))
}

/// Largest subsample size for which [`delta_equivalent`] runs the exact search.
pub const EXACT_EQUIVALENCE_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    NotEquivalent,
    /// Cheap invariants agree but the clouds are too large for the exact search.
    Inconclusive,
}

/// Whether some bijection `Y → Z` preserves the relation `d ≤ δ` both ways,
/// i.e. whether the δ-neighborhood graphs are isomorphic.
pub fn delta_equivalent(y: &PointCloud, z: &PointCloud, delta: f64) -> Result<Equivalence> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::NonPositiveScale(delta));
    }
    if y.len() != z.len() {
        return Ok(Equivalence::NotEquivalent);
    }
    if y.is_empty() {
        return Ok(Equivalence::Equivalent);
    }
    let gy = neighborhoods(y, delta)?;
    let gz = neighborhoods(z, delta)?;
    if degree_sequence(gy.neighborhoods()) != degree_sequence(gz.neighborhoods()) {
        return Ok(Equivalence::NotEquivalent);
    }
    if y.len() > EXACT_EQUIVALENCE_LIMIT {
        return Ok(Equivalence::Inconclusive);
    }
    Ok(if graphs_isomorphic(gy.neighborhoods(), gz.neighborhoods()) {
        Equivalence::Equivalent
    } else {
        Equivalence::NotEquivalent
    })
}

fn degree_sequence(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let mut degrees: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    degrees.sort_unstable();
    degrees
}

/// Exact isomorphism test for graphs given as closed neighborhoods, by
/// backtracking with degree pruning. Exponential in the worst case.
pub fn graphs_isomorphic(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    let n = a.len();
    if n != b.len() || degree_sequence(a) != degree_sequence(b) {
        return false;
    }
    let adj = |g: &[Vec<usize>]| {
        let mut m = vec![false; n * n];
        for (i, nbrs) in g.iter().enumerate() {
            for &j in nbrs {
                m[i * n + j] = true;
            }
        }
        m
    };
    let (ma, mb) = (adj(a), adj(b));
    // Most-constrained vertices first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(a[v].len()));

    struct Search<'s> {
        n: usize,
        a: &'s [Vec<usize>],
        b: &'s [Vec<usize>],
        ma: &'s [bool],
        mb: &'s [bool],
        order: &'s [usize],
        map: Vec<usize>,
        used: Vec<bool>,
    }

    impl Search<'_> {
        fn extend(&mut self, depth: usize) -> bool {
            if depth == self.n {
                return true;
            }
            let u = self.order[depth];
            for v in 0..self.n {
                if self.used[v] || self.b[v].len() != self.a[u].len() {
                    continue;
                }
                let consistent = self.order[..depth].iter().all(|&w| {
                    self.ma[u * self.n + w] == self.mb[v * self.n + self.map[w]]
                });
                if !consistent {
                    continue;
                }
                self.map[u] = v;
                self.used[v] = true;
                if self.extend(depth + 1) {
                    return true;
                }
                self.used[v] = false;
            }
            false
        }
    }

    Search {
        n,
        a,
        b,
        ma: &ma,
        mb: &mb,
        order: &order,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    }
    .extend(0)
}

/// Farthest-point (maxmin) sampling of `k` points. The first point is drawn
/// uniformly from `seed`; returns the selected indices in ascending order.
pub fn fps_subsample(cloud: &PointCloud, k: usize, seed: u64) -> Result<Vec<usize>> {
    let n = cloud.len();
    if k == 0 || k > n {
        return Err(Error::SampleSizeOutOfRange { k, n });
    }
    let first = ChaCha8Rng::seed_from_u64(seed).gen_range(0..n);
    let mut picked = fps_order(cloud, k, first)?;
    picked.sort_unstable();
    Ok(picked)
}

/// Farthest-point sampling from a fixed first index, in selection order.
/// Each new point maximizes the distance to the nearest selected point; ties
/// go to the lowest index.
pub fn fps_order(cloud: &PointCloud, k: usize, first: usize) -> Result<Vec<usize>> {
    let n = cloud.len();
    if k == 0 || k > n {
        return Err(Error::SampleSizeOutOfRange { k, n });
    }
    if first >= n {
        return Err(Error::IndexOutOfRange { index: first, len: n });
    }
    let mut selected = vec![false; n];
    let mut nearest = vec![f64::INFINITY; n];
    let mut order = Vec::with_capacity(k);
    let mut next = first;
    loop {
        selected[next] = true;
        order.push(next);
        if order.len() == k {
            return Ok(order);
        }
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if selected[j] {
                continue;
            }
            nearest[j] = nearest[j].min(cloud.dist(next, j));
            if best.is_none_or(|(_, d)| nearest[j] > d) {
                best = Some((j, nearest[j]));
            }
        }
        next = best.expect("k <= n leaves an unselected point").0;
    }
}
