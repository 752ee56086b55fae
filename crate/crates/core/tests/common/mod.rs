//! Independent oracles and random generators shared by the integration
//! tests. Nothing here calls the reduction or matching code under test.

#![allow(dead_code)]

use deltacore::complexes::{Filtration, Simplex};
use deltacore::homology::Interval;
use deltacore::metric_space::PointCloud;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random points in `[0, 1]^dim`.
pub fn random_cloud(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> PointCloud {
    let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect();
    PointCloud::from_points(&pts).unwrap()
}

pub fn permuted(cloud: &PointCloud, rng: &mut ChaCha8Rng) -> (PointCloud, Vec<usize>) {
    let mut perm: Vec<usize> = (0..cloud.len()).collect();
    perm.shuffle(rng);
    (cloud.subset(&perm).unwrap(), perm)
}

/// Nearest-rank percentile by direct computation, for choosing scales.
pub fn percentile(cloud: &PointCloud, p: f64) -> f64 {
    let n = cloud.len();
    let mut d: Vec<f64> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| cloud.distance(i, j).unwrap())
        .collect();
    d.sort_by(f64::total_cmp);
    let idx = ((p * d.len() as f64) / 100.0).ceil() as usize;
    d[idx.clamp(1, d.len()) - 1]
}

/// A random Vietoris-Rips filtration on a small integer-valued distance
/// matrix (so that values tie often), truncated to a prefix of at most
/// `max_len` simplices. Prefixes of a filtration are filtrations.
pub fn random_filtration(rng: &mut ChaCha8Rng, max_len: usize) -> (Filtration, usize) {
    let n = rng.gen_range(2..=7);
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(1..=5) as f64;
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    let cloud = PointCloud::from_matrix(&m).unwrap();
    let max_dim = rng.gen_range(1..=3);
    let full = deltacore::vr_filtration(&cloud, max_dim, 5.0).unwrap();
    let len = rng.gen_range(1..=max_len.min(full.len()));
    let prefix: Vec<Simplex> = full.simplices()[..len].to_vec();
    (Filtration::new(prefix, max_dim, 5.0).unwrap(), max_dim - 1)
}

/// Rank over ℤ/2 of the matrix whose columns are given as row-index sets.
pub fn gf2_rank(columns: &[Vec<usize>], nrows: usize) -> usize {
    let words = nrows.div_ceil(64).max(1);
    let mut rows: Vec<Vec<u64>> = columns
        .iter()
        .map(|c| {
            let mut bits = vec![0u64; words];
            for &r in c {
                bits[r / 64] ^= 1 << (r % 64);
            }
            bits
        })
        .collect();
    let mut rank = 0;
    for bit in 0..nrows {
        let (w, b) = (bit / 64, 1u64 << (bit % 64));
        let Some(p) = (rank..rows.len()).find(|&k| rows[k][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != rank && row[w] & b != 0 {
                row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
            }
        }
        rank += 1;
    }
    rank
}

/// Persistence diagram by rank computations alone. For each pair of value
/// levels `a ≤ b`, the persistent Betti number is
/// `dim Z_q(K_a) − dim(B_q(K_b) ∩ C_q(K_a))`, with the intersection's
/// dimension obtained by rank-nullity as `rank ∂ − rank(P ∂)` where `P`
/// projects onto the q-simplices outside `K_a`. Interval multiplicities then
/// follow by inclusion-exclusion.
pub fn ph_oracle(filtration: &Filtration, max_degree: usize) -> Vec<Vec<(f64, f64)>> {
    let simplices = filtration.simplices();
    let mut levels: Vec<f64> = simplices.iter().map(|s| s.value).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let nl = levels.len();

    let mut out = vec![Vec::new(); max_degree + 1];
    for (q, intervals) in out.iter_mut().enumerate() {
        let qs: Vec<&Simplex> = simplices.iter().filter(|s| s.dim() == q).collect();
        let cofaces: Vec<&Simplex> = simplices.iter().filter(|s| s.dim() == q + 1).collect();
        let lower: Vec<&Simplex> = if q == 0 {
            Vec::new()
        } else {
            simplices.iter().filter(|s| s.dim() == q - 1).collect()
        };
        let pos = |set: &[&Simplex], v: &[usize]| set.iter().position(|s| s.vertices.as_slice() == v).unwrap();
        let facet_sets = |s: &Simplex| -> Vec<Vec<usize>> {
            (0..s.vertices.len())
                .map(|k| {
                    let mut f = s.vertices.to_vec();
                    f.remove(k);
                    f
                })
                .collect()
        };
        // Betti^{a,b} for 1-based levels a ≤ b; a = 0 means the empty complex.
        let beta = |a: usize, b: usize| -> i64 {
            if a == 0 {
                return 0;
            }
            let (va, vb) = (levels[a - 1], levels[b - 1]);
            let in_a: Vec<usize> = (0..qs.len()).filter(|&i| qs[i].value <= va).collect();
            let boundary_q: Vec<Vec<usize>> = if q == 0 {
                Vec::new()
            } else {
                in_a.iter()
                    .map(|&i| facet_sets(qs[i]).iter().map(|f| pos(&lower, f)).collect())
                    .collect()
            };
            let z = in_a.len() - gf2_rank(&boundary_q, lower.len());
            let d_b: Vec<Vec<usize>> = cofaces
                .iter()
                .filter(|s| s.value <= vb)
                .map(|s| facet_sets(s).iter().map(|f| pos(&qs, f)).collect())
                .collect();
            let outside: Vec<Vec<usize>> = d_b
                .iter()
                .map(|c| c.iter().copied().filter(|&r| qs[r].value > va).collect())
                .collect();
            let inter = gf2_rank(&d_b, qs.len()) - gf2_rank(&outside, qs.len());
            z as i64 - inter as i64
        };
        for i in 1..=nl {
            for j in i + 1..=nl {
                let mu = beta(i, j - 1) - beta(i, j) - beta(i - 1, j - 1) + beta(i - 1, j);
                assert!(mu >= 0, "negative multiplicity");
                for _ in 0..mu {
                    intervals.push((levels[i - 1], levels[j - 1]));
                }
            }
            let mu = beta(i, nl) - beta(i - 1, nl);
            assert!(mu >= 0, "negative multiplicity");
            for _ in 0..mu {
                intervals.push((levels[i - 1], f64::INFINITY));
            }
        }
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    }
    out
}

fn sup(p: &Interval, q: &Interval) -> f64 {
    (p.birth - q.birth).abs().max((p.death - q.death).abs())
}

/// Bottleneck and 1-Wasserstein distances by enumerating every partial
/// matching of the finite points (unmatched points go to the diagonal) and
/// every bijection of the essential points.
pub fn matching_oracle(d: &[Interval], e: &[Interval]) -> (f64, f64) {
    let (df, dinf): (Vec<Interval>, Vec<Interval>) = d.iter().partition(|iv| iv.death.is_finite());
    let (ef, einf): (Vec<Interval>, Vec<Interval>) = e.iter().partition(|iv| iv.death.is_finite());
    if dinf.len() != einf.len() {
        return (f64::INFINITY, f64::INFINITY);
    }
    let mut best_inf = (f64::INFINITY, f64::INFINITY);
    permutations(einf.len(), &mut |perm| {
        let costs: Vec<f64> = perm.iter().enumerate().map(|(i, &j)| (dinf[i].birth - einf[j].birth).abs()).collect();
        let m = costs.iter().copied().fold(0.0, f64::max);
        let s: f64 = costs.iter().sum();
        best_inf.0 = best_inf.0.min(m);
        best_inf.1 = best_inf.1.min(s);
    });
    let diag = |p: &Interval| (p.death - p.birth) / 2.0;
    let mut best = (f64::INFINITY, f64::INFINITY);
    let mut used = vec![false; ef.len()];
    fn rec(
        i: usize,
        df: &[Interval],
        ef: &[Interval],
        used: &mut Vec<bool>,
        acc: (f64, f64),
        best: &mut (f64, f64),
        diag: &dyn Fn(&Interval) -> f64,
    ) {
        if i == df.len() {
            let mut acc = acc;
            for (j, q) in ef.iter().enumerate() {
                if !used[j] {
                    acc = (acc.0.max(diag(q)), acc.1 + diag(q));
                }
            }
            best.0 = best.0.min(acc.0);
            best.1 = best.1.min(acc.1);
            return;
        }
        let p = &df[i];
        rec(i + 1, df, ef, used, (acc.0.max(diag(p)), acc.1 + diag(p)), best, diag);
        for j in 0..ef.len() {
            if !used[j] {
                used[j] = true;
                let c = sup(p, &ef[j]);
                rec(i + 1, df, ef, used, (acc.0.max(c), acc.1 + c), best, diag);
                used[j] = false;
            }
        }
    }
    rec(0, &df, &ef, &mut used, (0.0, 0.0), &mut best, &diag);
    (best.0.max(best_inf.0), best.1 + best_inf.1)
}

fn permutations(n: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(k: usize, perm: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if k == perm.len() {
            visit(perm);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            go(k + 1, perm, visit);
            perm.swap(k, i);
        }
    }
    go(0, &mut (0..n).collect(), visit);
}

/// Random diagram with up to `max_points` finite intervals on a coarse grid
/// (to exercise ties) and occasionally an essential interval.
pub fn random_diagram(rng: &mut ChaCha8Rng, max_points: usize, essential: bool) -> Vec<Interval> {
    let k = rng.gen_range(0..=max_points);
    let mut out: Vec<Interval> = (0..k)
        .map(|_| {
            let b = rng.gen_range(0..20) as f64 * 0.25;
            let len = rng.gen_range(1..12) as f64 * 0.25 + if rng.gen_bool(0.3) { rng.gen::<f64>() } else { 0.0 };
            Interval::new(b, b + len)
        })
        .collect();
    if essential {
        out.push(Interval::essential(rng.gen_range(0..8) as f64 * 0.5));
    }
    out
}

pub fn as_pairs(intervals: &[Interval]) -> Vec<(f64, f64)> {
    intervals.iter().map(|iv| (iv.birth, iv.death)).collect()
}
