//! Seeded synthetic shape corpora.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{box_center, Point2, Polygon};

/// Side of the square canvas synthetic shapes are placed on, in pixels.
pub const CANVAS: f64 = 512.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SynthKind {
    /// Regular 90-gons.
    Circles,
    /// Convex hulls of 8 to 20 random points.
    Convex,
    /// Radially perturbed star-convex rings.
    Stars,
    /// A disk with an offset disk removed; the box center falls in the bite.
    Crescents,
}

impl SynthKind {
    pub const ALL: [SynthKind; 4] = [
        SynthKind::Circles,
        SynthKind::Convex,
        SynthKind::Stars,
        SynthKind::Crescents,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SynthKind::Circles => "circles",
            SynthKind::Convex => "convex",
            SynthKind::Stars => "stars",
            SynthKind::Crescents => "crescents",
        }
    }
}

impl fmt::Display for SynthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SynthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SynthKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown shape kind `{s}`")))
    }
}

/// `count` polygons of one kind, deterministic in `seed`.
pub fn synth_corpus(kind: SynthKind, count: usize, seed: u64) -> Vec<Polygon<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| match kind {
            SynthKind::Circles => circle(&mut rng),
            SynthKind::Convex => convex(&mut rng),
            SynthKind::Stars => star(&mut rng),
            SynthKind::Crescents => crescent(&mut rng),
        })
        .collect()
}

/// `count_each` shapes of every kind, concatenated in [`SynthKind::ALL`] order.
/// Each kind draws from its own stream derived from `seed`.
pub fn mixed_corpus(count_each: usize, seed: u64) -> Vec<Polygon<f64>> {
    SynthKind::ALL
        .into_iter()
        .enumerate()
        .flat_map(|(i, kind)| synth_corpus(kind, count_each, kind_seed(seed, i)))
        .collect()
}

/// Seed of the `index`-th kind inside [`mixed_corpus`].
pub fn kind_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index as u64 + 1)
}

fn placed(rng: &mut ChaCha8Rng, radius: f64, local: Vec<Point2<f64>>) -> Polygon<f64> {
    let margin = radius.min(CANVAS / 2.0);
    let c = Point2::new(
        rng.gen_range(margin..=CANVAS - margin),
        rng.gen_range(margin..=CANVAS - margin),
    );
    let theta = rng.gen_range(0.0..TAU);
    Polygon::new(local.into_iter().map(|p| p.rotate(theta) + c).collect())
        .expect("synthetic shapes are valid rings")
}

fn ring(k: usize, mut radius: impl FnMut(f64) -> f64) -> Vec<Point2<f64>> {
    (0..k)
        .map(|i| {
            let t = i as f64 * TAU / k as f64;
            Point2::new(t.cos(), t.sin()) * radius(t)
        })
        .collect()
}

fn circle(rng: &mut ChaCha8Rng) -> Polygon<f64> {
    let r = rng.gen_range(20.0..100.0);
    placed(rng, r, ring(90, |_| r))
}

fn convex(rng: &mut ChaCha8Rng) -> Polygon<f64> {
    loop {
        let r = rng.gen_range(30.0..100.0);
        let k = rng.gen_range(8..=20);
        let pts: Vec<Point2<f64>> = (0..k)
            .map(|_| Point2::new(rng.gen_range(-r..r), rng.gen_range(-r..r)))
            .collect();
        let hull = convex_hull(pts);
        if hull.len() >= 3 && matches!(Polygon::new(hull.clone()), Ok(p) if p.area() > 1.0) {
            return placed(rng, r * std::f64::consts::SQRT_2, hull);
        }
    }
}

fn star(rng: &mut ChaCha8Rng) -> Polygon<f64> {
    let r = rng.gen_range(30.0..90.0);
    let points = rng.gen_range(3..=8) as f64;
    let amp = rng.gen_range(0.15..0.45);
    let phase = rng.gen_range(0.0..TAU);
    let jitter: Vec<f64> = (0..72).map(|_| rng.gen_range(-0.08..0.08)).collect();
    let mut i = 0;
    let local = ring(72, |t| {
        let j = jitter[i];
        i += 1;
        r * (1.0 + amp * (points * t + phase).cos()) * (1.0 + j)
    });
    placed(rng, r * 1.6, local)
}

fn crescent(rng: &mut ChaCha8Rng) -> Polygon<f64> {
    loop {
        let big = rng.gen_range(30.0..100.0);
        let offset = big * rng.gen_range(0.45..0.75);
        let small = big * rng.gen_range(0.8..1.05);
        let local = crescent_ring(big, offset, small, 64);
        let Ok(poly) = Polygon::new(local.clone()) else {
            continue;
        };
        if !poly.contains(box_center(&poly)) {
            return placed(rng, big, local);
        }
    }
}

/// Disk of radius `big` at the origin minus the disk of radius `small`
/// centered at `(offset, 0)`. Requires the circles to cross.
pub fn crescent_ring(big: f64, offset: f64, small: f64, samples: usize) -> Vec<Point2<f64>> {
    let x = (big * big - small * small + offset * offset) / (2.0 * offset);
    let y = (big * big - x * x).max(0.0).sqrt();
    let outer_start = y.atan2(x);
    let inner_end = y.atan2(x - offset);
    let mut out = Vec::with_capacity(2 * samples);
    // outer arc through 180°, from (x, y) to (x, -y)
    for i in 0..=samples {
        let t = outer_start + (TAU - 2.0 * outer_start) * i as f64 / samples as f64;
        out.push(Point2::new(big * t.cos(), big * t.sin()));
    }
    // inner arc back through the bite's far side, endpoints excluded
    for i in 1..samples {
        let t = (TAU - inner_end) - (TAU - 2.0 * inner_end) * i as f64 / samples as f64;
        out.push(Point2::new(offset + small * t.cos(), small * t.sin()));
    }
    out
}

/// Andrew's monotone chain; returns the hull without collinear points.
fn convex_hull(mut pts: Vec<Point2<f64>>) -> Vec<Point2<f64>> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Point2<f64>, a: Point2<f64>, b: Point2<f64>| (a - o).cross(b - o);
    let mut hull: Vec<Point2<f64>> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2<f64>>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::mass_center;

    #[test]
    fn deterministic() {
        assert_eq!(
            synth_corpus(SynthKind::Circles, 5, 7),
            synth_corpus(SynthKind::Circles, 5, 7)
        );
        assert_ne!(
            synth_corpus(SynthKind::Circles, 5, 7),
            synth_corpus(SynthKind::Circles, 5, 8)
        );
    }

    #[test]
    fn circles_are_90_gons() {
        assert!(synth_corpus(SynthKind::Circles, 10, 1)
            .iter()
            .all(|p| p.len() == 90));
    }

    #[test]
    fn hull_is_convex() {
        for poly in synth_corpus(SynthKind::Convex, 50, 3) {
            let v = poly.vertices();
            let n = v.len();
            let signs: Vec<bool> = (0..n)
                .map(|i| (v[(i + 1) % n] - v[i]).cross(v[(i + 2) % n] - v[(i + 1) % n]) > 0.0)
                .collect();
            assert!(signs.iter().all(|&s| s == signs[0]));
        }
    }

    #[test]
    fn crescent_box_center_outside() {
        for poly in synth_corpus(SynthKind::Crescents, 50, 11) {
            assert!(!poly.contains(box_center(&poly)));
            assert!(mass_center(&poly).is_ok());
        }
    }

    #[test]
    fn mixed_layout() {
        let all = mixed_corpus(3, 42);
        assert_eq!(all.len(), 12);
        assert_eq!(
            &all[9..],
            &synth_corpus(SynthKind::Crescents, 3, kind_seed(42, 3))[..]
        );
    }

    #[test]
    fn kind_parsing() {
        for k in SynthKind::ALL {
            assert_eq!(k.as_str().parse::<SynthKind>().unwrap(), k);
        }
        assert!("blobs".parse::<SynthKind>().is_err());
    }
}
