//! Vietoris-Rips filtrations and cores of flag complexes.
//!
//! A flag complex is determined by its 1-skeleton, so it is stored as a
//! [`FlagGraph`] of closed neighborhoods and its simplices (cliques) are
//! enumerated only when needed.

use std::cmp::Ordering;
use std::collections::HashSet;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::metric_space::{check_closed_graph, closed_neighborhoods, NeighborSearch, PointCloud};
use crate::subsampling::strong_collapse;

pub type Vertices = SmallVec<[usize; 4]>;

#[derive(Clone, Debug, PartialEq)]
pub struct Simplex {
    /// Strictly ascending vertex indices.
    pub vertices: Vertices,
    /// Filtration value. For Vietoris-Rips simplices this is the longest edge.
    pub value: f64,
}

impl Simplex {
    pub fn new(vertices: impl IntoIterator<Item = usize>, value: f64) -> Self {
        Simplex {
            vertices: vertices.into_iter().collect(),
            value,
        }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Filtration order: value, then dimension, then lexicographic vertices.
    pub fn filtration_cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.vertices.len().cmp(&other.vertices.len()))
            .then_with(|| self.vertices.cmp(&other.vertices))
    }

    /// Codimension-one faces, in the order obtained by dropping vertex 0, 1, ...
    pub fn facets(&self) -> impl Iterator<Item = Vertices> + '_ {
        let k = self.vertices.len();
        (0..if k > 1 { k } else { 0 }).map(move |skip| {
            self.vertices
                .iter()
                .enumerate()
                .filter_map(|(i, &v)| (i != skip).then_some(v))
                .collect()
        })
    }
}

/// Simplices in filtration order, every face before its cofaces.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration {
    simplices: Vec<Simplex>,
    max_dim: usize,
    threshold: f64,
}

impl Filtration {
    /// Sorts `simplices` into filtration order and validates the result:
    /// vertices strictly ascending, no duplicates, dimension at most
    /// `max_dim`, values at most `threshold`, and every facet present with a
    /// value no larger than its coface.
    pub fn new(mut simplices: Vec<Simplex>, max_dim: usize, threshold: f64) -> Result<Self> {
        simplices.sort_by(Simplex::filtration_cmp);
        let mut seen: HashSet<&[usize]> = HashSet::with_capacity(simplices.len());
        for s in &simplices {
            if s.vertices.is_empty() {
                return Err(Error::InvalidFiltration("empty simplex".into()));
            }
            if s.vertices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidFiltration(format!(
                    "vertices {:?} not strictly ascending",
                    s.vertices.as_slice()
                )));
            }
            if s.dim() > max_dim {
                return Err(Error::InvalidFiltration(format!(
                    "simplex {:?} exceeds max dimension {max_dim}",
                    s.vertices.as_slice()
                )));
            }
            if s.value.is_nan() || s.value > threshold {
                return Err(Error::InvalidFiltration(format!(
                    "simplex {:?} has value {} above threshold {threshold}",
                    s.vertices.as_slice(),
                    s.value
                )));
            }
            for facet in s.facets() {
                if !seen.contains(facet.as_slice()) {
                    return Err(Error::InvalidFiltration(format!(
                        "facet {:?} of {:?} does not appear earlier",
                        facet.as_slice(),
                        s.vertices.as_slice()
                    )));
                }
            }
            if !seen.insert(&s.vertices) {
                return Err(Error::InvalidFiltration(format!(
                    "duplicate simplex {:?}",
                    s.vertices.as_slice()
                )));
            }
        }
        Ok(Filtration {
            simplices,
            max_dim,
            threshold,
        })
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }
}

/// A flag complex via its 1-skeleton: sorted closed neighborhoods.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagGraph {
    adjacency: Vec<Vec<usize>>,
}

impl FlagGraph {
    /// Validates symmetry, reflexivity and sorting.
    pub fn new(adjacency: Vec<Vec<usize>>) -> Result<Self> {
        check_closed_graph(&adjacency)?;
        Ok(FlagGraph { adjacency })
    }

    /// Builds a graph from undirected edges, adding the self-loops.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        for &(a, b) in edges {
            for index in [a, b] {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, len: n });
                }
            }
            if a != b {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
            nbrs.dedup();
        }
        Ok(FlagGraph { adjacency })
    }

    /// The threshold graph of `cloud` at `scale`: edges between points at
    /// distance at most `scale`. Scale zero is allowed.
    pub fn threshold(cloud: &PointCloud, scale: f64) -> Result<Self> {
        if scale.is_nan() || scale < 0.0 {
            return Err(Error::NonPositiveScale(scale));
        }
        Ok(FlagGraph {
            adjacency: closed_neighborhoods(cloud, scale, NeighborSearch::Auto),
        })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|n| n.len() - 1).sum::<usize>() / 2
    }

    /// Induced subgraph on `vertices` (ascending), relabelled `0..k`.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut relabel = vec![usize::MAX; n];
        for (new, &old) in vertices.iter().enumerate() {
            if old >= n {
                return Err(Error::IndexOutOfRange { index: old, len: n });
            }
            relabel[old] = new;
        }
        let mut adjacency: Vec<Vec<usize>> = vertices
            .iter()
            .map(|&old| {
                self.adjacency[old]
                    .iter()
                    .filter_map(|&j| (relabel[j] != usize::MAX).then_some(relabel[j]))
                    .collect()
            })
            .collect();
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        FlagGraph::new(adjacency)
    }

    /// Number of cliques of each size `1..=max_dim + 1`, i.e. simplices of the
    /// flag complex per dimension.
    pub fn clique_counts(&self, max_dim: usize) -> Vec<usize> {
        let mut counts = vec![0usize; max_dim + 1];
        let mut members = Vec::with_capacity(max_dim + 1);
        for v in 0..self.n() {
            members.push(v);
            let cands = self.upper_neighbors(v);
            self.expand(&mut members, &cands, max_dim, &mut |m| counts[m.len() - 1] += 1);
            members.pop();
        }
        counts
    }

    /// All cliques with at most `max_dim + 1` vertices, each ascending,
    /// grouped by lowest vertex.
    pub fn cliques(&self, max_dim: usize) -> Vec<Vertices> {
        let mut out = Vec::new();
        let mut members = Vec::with_capacity(max_dim + 1);
        for v in 0..self.n() {
            members.push(v);
            let cands = self.upper_neighbors(v);
            self.expand(&mut members, &cands, max_dim, &mut |m| out.push(m.iter().copied().collect()));
            members.pop();
        }
        out
    }

    fn upper_neighbors(&self, v: usize) -> Vec<usize> {
        self.adjacency[v].iter().copied().filter(|&u| u > v).collect()
    }

    /// Ordered clique expansion: `members` is a clique, `cands` the common
    /// neighbors above its largest vertex.
    fn expand(&self, members: &mut Vec<usize>, cands: &[usize], max_dim: usize, visit: &mut impl FnMut(&[usize])) {
        visit(members);
        if members.len() > max_dim {
            return;
        }
        for (k, &u) in cands.iter().enumerate() {
            let next = intersect_sorted(&cands[k + 1..], &self.adjacency[u]);
            members.push(u);
            self.expand(members, &next, max_dim, visit);
            members.pop();
        }
    }
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// The `max_dim`-skeleton of the Vietoris-Rips filtration of `cloud`, cut
/// off at `threshold`.
pub fn vr_filtration(cloud: &PointCloud, max_dim: usize, threshold: f64) -> Result<Filtration> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::NonPositiveScale(threshold));
    }
    let graph = FlagGraph::threshold(cloud, threshold)?;
    let mut simplices = Vec::new();
    let mut members = Vec::with_capacity(max_dim + 1);
    let mut values = Vec::with_capacity(max_dim + 1);
    for v in 0..graph.n() {
        members.push(v);
        values.push(0.0);
        let cands = graph.upper_neighbors(v);
        vr_expand(cloud, &graph, &mut members, &mut values, &cands, max_dim, &mut simplices);
        members.pop();
        values.pop();
    }
    simplices.sort_by(Simplex::filtration_cmp);
    Ok(Filtration {
        simplices,
        max_dim,
        threshold,
    })
}

/// Like [`FlagGraph::expand`] but tracks the running maximum edge length;
/// `values[k]` is the value of the clique `members[..=k]`.
fn vr_expand(
    cloud: &PointCloud,
    graph: &FlagGraph,
    members: &mut Vec<usize>,
    values: &mut Vec<f64>,
    cands: &[usize],
    max_dim: usize,
    out: &mut Vec<Simplex>,
) {
    out.push(Simplex {
        vertices: members.iter().copied().collect(),
        value: *values.last().unwrap(),
    });
    if members.len() > max_dim {
        return;
    }
    for (k, &u) in cands.iter().enumerate() {
        let next = intersect_sorted(&cands[k + 1..], &graph.adjacency[u]);
        let value = members
            .iter()
            .map(|&m| cloud.dist(m, u))
            .fold(*values.last().unwrap(), f64::max);
        members.push(u);
        values.push(value);
        vr_expand(cloud, graph, members, values, &next, max_dim, out);
        members.pop();
        values.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexCount {
    /// Count per dimension `0..=max_dim`.
    pub per_dim: Vec<usize>,
    pub total: usize,
}

pub fn simplex_count(filtration: &Filtration) -> SimplexCount {
    let mut per_dim = vec![0; filtration.max_dim + 1];
    for s in &filtration.simplices {
        per_dim[s.dim()] += 1;
    }
    SimplexCount {
        total: filtration.len(),
        per_dim,
    }
}

/// Core of a flag complex: repeatedly removes dominated vertices (same sweep
/// discipline as the δ-core) and returns the induced graph on the survivors
/// together with their original indices.
pub fn flag_core(graph: &FlagGraph) -> (FlagGraph, Vec<usize>) {
    let result = strong_collapse(&graph.adjacency);
    let core = graph
        .induced(&result.surviving)
        .expect("survivors are valid vertices");
    (core, result.surviving)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReductionRow {
    pub scale: f64,
    pub simplices_before: usize,
    pub simplices_after: usize,
    pub reduction_pct: f64,
}

fn reduction_pct(before: usize, after: usize) -> f64 {
    if before == 0 {
        0.0
    } else {
        100.0 * (1.0 - after as f64 / before as f64)
    }
}

/// For each scale, the number of simplices in the `max_dim`-skeleton of the
/// flag complex of the threshold graph, before and after taking its core.
pub fn core_reduction_table(cloud: &PointCloud, scales: &[f64], max_dim: usize) -> Result<Vec<ReductionRow>> {
    if scales.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidFiltration("scales must be ascending".into()));
    }
    scales
        .iter()
        .map(|&scale| {
            let graph = FlagGraph::threshold(cloud, scale)?;
            let before: usize = graph.clique_counts(max_dim).iter().sum();
            let (core, _) = flag_core(&graph);
            let after: usize = core.clique_counts(max_dim).iter().sum();
            Ok(ReductionRow {
                scale,
                simplices_before: before,
                simplices_after: after,
                reduction_pct: reduction_pct(before, after),
            })
        })
        .collect()
}

/// Aggregate row over a table: summed counts and the overall reduction.
pub fn reduction_total(rows: &[ReductionRow]) -> (usize, usize, f64) {
    let before = rows.iter().map(|r| r.simplices_before).sum();
    let after = rows.iter().map(|r| r.simplices_after).sum();
    (before, after, reduction_pct(before, after))
}
