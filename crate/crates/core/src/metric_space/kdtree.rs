//! A static KD-tree for exact fixed-radius queries.
//!
//! Pruning uses a box lower bound evaluated with the same floating-point
//! operations, in the same order, as [`euclidean`], so a pruned subtree can
//! never contain a point whose computed distance is within the radius. Query
//! results are therefore identical to a brute-force scan.

use super::euclidean;

const LEAF_SIZE: usize = 16;

#[derive(Debug)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        lo: Vec<f64>,
        hi: Vec<f64>,
        left: Box<Node>,
        right: Box<Node>,
    },
}

#[derive(Debug)]
pub struct KdTree<'a> {
    dim: usize,
    coords: &'a [f64],
    order: Vec<usize>,
    root: Node,
}

impl<'a> KdTree<'a> {
    /// Builds a tree over row-major `coords` with `dim` values per point.
    pub fn build(dim: usize, coords: &'a [f64]) -> Self {
        let n = coords.len().checked_div(dim).unwrap_or(0);
        let mut order: Vec<usize> = (0..n).collect();
        let root = build_node(dim, coords, &mut order, 0);
        KdTree {
            dim,
            coords,
            order,
            root,
        }
    }

    fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Indices of all points `p` with `euclidean(query, p) <= radius`, unordered.
    pub fn within(&self, query: &[f64], radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![&self.root];
        while let Some(node) = stack.pop() {
            match node {
                Node::Leaf { start, end } => {
                    for &i in &self.order[*start..*end] {
                        if euclidean(query, self.point(i)) <= radius {
                            out.push(i);
                        }
                    }
                }
                Node::Split { lo, hi, left, right } => {
                    if box_lower_bound(query, lo, hi) <= radius {
                        stack.push(right);
                        stack.push(left);
                    }
                }
            }
        }
        out
    }
}

fn box_lower_bound(query: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    query
        .iter()
        .zip(lo.iter().zip(hi))
        .map(|(&q, (&l, &h))| {
            let d = if q < l {
                q - l
            } else if q > h {
                q - h
            } else {
                0.0
            };
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn build_node(dim: usize, coords: &[f64], order: &mut [usize], offset: usize) -> Node {
    if order.len() <= LEAF_SIZE {
        return Node::Leaf {
            start: offset,
            end: offset + order.len(),
        };
    }
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for &i in order.iter() {
        for k in 0..dim {
            let x = coords[i * dim + k];
            lo[k] = lo[k].min(x);
            hi[k] = hi[k].max(x);
        }
    }
    let axis = (0..dim)
        .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
        .unwrap_or(0);
    let mid = order.len() / 2;
    order.select_nth_unstable_by(mid, |&a, &b| {
        coords[a * dim + axis].total_cmp(&coords[b * dim + axis])
    });
    let (left_idx, right_idx) = order.split_at_mut(mid);
    let left = build_node(dim, coords, left_idx, offset);
    let right = build_node(dim, coords, right_idx, offset + mid);
    Node::Split {
        lo,
        hi,
        left: Box::new(left),
        right: Box::new(right),
    }
}
