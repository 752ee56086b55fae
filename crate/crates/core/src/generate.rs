//! Seeded synthetic point clouds.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::metric_space::PointCloud;

pub const TORUS_MAJOR_RADIUS: f64 = 2.0;
pub const TORUS_MINOR_RADIUS: f64 = 1.0;

/// Fraction of heterogeneous-cube points drawn uniformly; the rest come from
/// three Gaussian clusters.
const CUBE_BACKGROUND_FRACTION: f64 = 0.7;
const CUBE_CLUSTERS: usize = 3;
const CUBE_CLUSTER_SIGMA: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Sphere,
    Torus,
    CubeHeterogeneous,
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(Shape::Sphere),
            "torus" => Ok(Shape::Torus),
            "cube-heterogeneous" => Ok(Shape::CubeHeterogeneous),
            other => Err(Error::UnknownShape(other.to_string())),
        }
    }
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::Sphere => "sphere",
            Shape::Torus => "torus",
            Shape::CubeHeterogeneous => "cube-heterogeneous",
        }
    }
}

pub fn generate(shape: Shape, n: usize, noise: f64, seed: u64) -> Result<PointCloud> {
    match shape {
        Shape::Sphere => sphere(n, noise, seed),
        Shape::Torus => torus(n, noise, seed),
        Shape::CubeHeterogeneous => cube_heterogeneous(n, seed),
    }
}

fn noise_dist(noise: f64) -> Result<Option<Normal<f64>>> {
    if !(noise.is_finite() && noise >= 0.0) {
        return Err(Error::InvalidNoise(noise));
    }
    if noise == 0.0 {
        return Ok(None);
    }
    Normal::new(0.0, noise)
        .map(Some)
        .map_err(|_| Error::InvalidNoise(noise))
}

/// Uniform points on the unit sphere in ℝ³ (normalized Gaussian triples),
/// plus optional Gaussian coordinate noise.
pub fn sphere(n: usize, noise: f64, seed: u64) -> Result<PointCloud> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter = noise_dist(noise)?;
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let g: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
        if norm < 1e-12 {
            continue;
        }
        let mut p = g.map(|x| x / norm);
        if let Some(j) = &jitter {
            p.iter_mut().for_each(|x| *x += j.sample(&mut rng));
        }
        points.push(p);
    }
    PointCloud::from_points(&points)
}

/// Torus with radii 2 and 1, angles uniform, plus Gaussian coordinate noise.
pub fn torus(n: usize, noise: f64, seed: u64) -> Result<PointCloud> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter = noise_dist(noise)?;
    let tau = std::f64::consts::TAU;
    let points: Vec<[f64; 3]> = (0..n)
        .map(|_| {
            let u: f64 = rng.gen_range(0.0..tau);
            let v: f64 = rng.gen_range(0.0..tau);
            let ring = TORUS_MAJOR_RADIUS + TORUS_MINOR_RADIUS * v.cos();
            let mut p = [ring * u.cos(), ring * u.sin(), TORUS_MINOR_RADIUS * v.sin()];
            if let Some(j) = &jitter {
                p.iter_mut().for_each(|x| *x += j.sample(&mut rng));
            }
            p
        })
        .collect();
    PointCloud::from_points(&points)
}

/// Density-varying sample of `[0, 1]³`: a uniform background plus three
/// Gaussian clusters with seeded centers, clamped to the cube.
pub fn cube_heterogeneous(n: usize, seed: u64) -> Result<PointCloud> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<[f64; 3]> = (0..CUBE_CLUSTERS)
        .map(|_| std::array::from_fn(|_| rng.gen_range(0.2..0.8)))
        .collect();
    let spread = Normal::new(0.0, CUBE_CLUSTER_SIGMA).expect("positive sigma");
    let background = (n as f64 * CUBE_BACKGROUND_FRACTION).round() as usize;
    let points: Vec<[f64; 3]> = (0..n)
        .map(|i| {
            if i < background {
                std::array::from_fn(|_| rng.gen_range(0.0..=1.0))
            } else {
                let c = centers[(i - background) % CUBE_CLUSTERS];
                c.map(|x| (x + spread.sample(&mut rng)).clamp(0.0, 1.0))
            }
        })
        .collect();
    PointCloud::from_points(&points)
}
