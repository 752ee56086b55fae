//! Bottleneck and 1-Wasserstein distances between persistence diagrams of a
//! single degree, with the sup-norm as ground cost.
//!
//! Essential intervals are handled separately: they are matched to each other
//! by sorted birth, and if the two diagrams have different numbers of them the
//! distance is infinite. Finite intervals may also be matched to the diagonal,
//! at cost half their persistence.

mod hopcroft_karp;
mod hungarian;

pub use hopcroft_karp::max_bipartite_matching;
pub use hungarian::min_cost_assignment;

use crate::homology::Interval;

fn split(diagram: &[Interval]) -> (Vec<Interval>, Vec<f64>) {
    let mut finite = Vec::new();
    let mut essential = Vec::new();
    for iv in diagram {
        if iv.is_essential() {
            essential.push(iv.birth);
        } else {
            finite.push(*iv);
        }
    }
    essential.sort_unstable_by(f64::total_cmp);
    finite.sort_unstable_by(|p, q| p.birth.total_cmp(&q.birth).then(p.death.total_cmp(&q.death)));
    (finite, essential)
}

/// Finite parts in a canonical order, so that swapping the arguments performs
/// exactly the same floating-point operations.
fn canonical<'a>(a: &'a [Interval], b: &'a [Interval]) -> (&'a [Interval], &'a [Interval]) {
    let key = |iv: &Interval| (iv.birth.to_bits(), iv.death.to_bits());
    if a.iter().map(key).cmp(b.iter().map(key)).is_gt() {
        (b, a)
    } else {
        (a, b)
    }
}

/// Costs of matching essential intervals by sorted birth, or `None` when the
/// counts differ.
fn essential_costs(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    (a.len() == b.len()).then(|| a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect())
}

pub(crate) fn sup_cost(p: &Interval, q: &Interval) -> f64 {
    (p.birth - q.birth).abs().max((p.death - q.death).abs())
}

pub(crate) fn diagonal_cost(p: &Interval) -> f64 {
    (p.death - p.birth) / 2.0
}

/// The `(m + n) × (m + n)` cost matrix of the matching problem with diagonal
/// copies: rows are `a` then one diagonal slot per point of `b`, columns are
/// `b` then one diagonal slot per point of `a`.
fn augmented_costs(a: &[Interval], b: &[Interval]) -> Vec<Vec<f64>> {
    let (m, n) = (a.len(), b.len());
    let mut cost = vec![vec![0.0; m + n]; m + n];
    for (i, p) in a.iter().enumerate() {
        for (j, q) in b.iter().enumerate() {
            cost[i][j] = sup_cost(p, q);
        }
        cost[i][n..].fill(diagonal_cost(p));
    }
    for (j, q) in b.iter().enumerate() {
        for row in cost.iter_mut().skip(m) {
            row[j] = diagonal_cost(q);
        }
    }
    cost
}

/// Bottleneck distance between two diagrams of the same degree.
pub fn bottleneck_distance(d: &[Interval], e: &[Interval]) -> f64 {
    let (df, dinf) = split(d);
    let (ef, einf) = split(e);
    let Some(inf_costs) = essential_costs(&dinf, &einf) else {
        return f64::INFINITY;
    };
    let inf_part = inf_costs.into_iter().fold(0.0, f64::max);
    let (a, b) = canonical(&df, &ef);
    inf_part.max(finite_bottleneck(a, b))
}

/// Exact bottleneck cost of the finite parts: the smallest candidate cost at
/// which the threshold graph of the augmented matching problem has a perfect
/// matching.
fn finite_bottleneck(a: &[Interval], b: &[Interval]) -> f64 {
    let size = a.len() + b.len();
    if size == 0 {
        return 0.0;
    }
    let cost = augmented_costs(a, b);
    let mut candidates: Vec<f64> = cost.iter().flatten().copied().collect();
    candidates.push(0.0);
    candidates.sort_unstable_by(f64::total_cmp);
    candidates.dedup();
    let feasible = |limit: f64| {
        let adjacency: Vec<Vec<usize>> = cost
            .iter()
            .map(|row| (0..size).filter(|&j| row[j] <= limit).collect())
            .collect();
        max_bipartite_matching(&adjacency, size) == size
    };
    // The largest candidate always admits a perfect matching.
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// 1-Wasserstein distance between two diagrams of the same degree.
pub fn wasserstein1_distance(d: &[Interval], e: &[Interval]) -> f64 {
    let (df, dinf) = split(d);
    let (ef, einf) = split(e);
    let Some(inf_costs) = essential_costs(&dinf, &einf) else {
        return f64::INFINITY;
    };
    let inf_part = inf_costs.into_iter().fold(0.0, |acc, c| acc + c);
    if df.is_empty() && ef.is_empty() {
        return inf_part;
    }
    let (a, b) = canonical(&df, &ef);
    let cost = augmented_costs(a, b);
    let (total, _) = min_cost_assignment(&cost);
    inf_part + total
}
