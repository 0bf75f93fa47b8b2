#![allow(dead_code)]

use std::f64::consts::TAU;

use polarmask::geometry::{Point2, Polygon};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Radially perturbed ring: star-convex with respect to `center`.
pub fn random_star(
    rng: &mut ChaCha8Rng,
    k: usize,
    center: (f64, f64),
    r: (f64, f64),
) -> Polygon<f64> {
    let base = rng.gen_range(r.0..r.1);
    let points = rng.gen_range(3..=8) as f64;
    let amp = rng.gen_range(0.1..0.5);
    let phase = rng.gen_range(0.0..TAU);
    let vertices = (0..k)
        .map(|i| {
            let t = i as f64 * TAU / k as f64;
            let rad = base * (1.0 + amp * (points * t + phase).cos()) * rng.gen_range(0.9..1.1);
            Point2::new(center.0 + rad * t.cos(), center.1 + rad * t.sin())
        })
        .collect();
    Polygon::new(vertices).unwrap()
}

/// Simple polygon from sorted random angles with random radii.
pub fn random_simple(
    rng: &mut ChaCha8Rng,
    k: usize,
    center: (f64, f64),
    r: (f64, f64),
) -> Polygon<f64> {
    let mut angles: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..TAU)).collect();
    angles.sort_by(f64::total_cmp);
    let vertices = angles
        .iter()
        .map(|&t| {
            let rad = rng.gen_range(r.0..r.1);
            Point2::new(center.0 + rad * t.cos(), center.1 + rad * t.sin())
        })
        .collect();
    Polygon::new(vertices).unwrap()
}

pub fn regular(k: usize, r: f64, center: (f64, f64)) -> Polygon<f64> {
    Polygon::new(
        (0..k)
            .map(|i| {
                let t = i as f64 * TAU / k as f64;
                Point2::new(center.0 + r * t.cos(), center.1 + r * t.sin())
            })
            .collect(),
    )
    .unwrap()
}

/// Farthest intersection of the ray from `c` at angle `theta` with any edge.
pub fn brute_force_ray(poly: &Polygon<f64>, c: Point2<f64>, theta: f64) -> Option<f64> {
    let (ux, uy) = (theta.cos(), theta.sin());
    let v = poly.vertices();
    let mut best: Option<f64> = None;
    for i in 0..v.len() {
        let (a, b) = (v[i], v[(i + 1) % v.len()]);
        let (ex, ey) = (b.x - a.x, b.y - a.y);
        let (wx, wy) = (a.x - c.x, a.y - c.y);
        // solve c + t·u = a + s·e
        let det = ex * uy - ey * ux;
        if det.abs() < 1e-15 {
            continue;
        }
        let t = (ex * wy - ey * wx) / det;
        let s = (ux * wy - uy * wx) / det;
        if t >= 0.0 && (-1e-12..=1.0 + 1e-12).contains(&s) {
            best = Some(best.map_or(t, |b: f64| b.max(t)));
        }
    }
    best
}
