//! Center-plus-rays encoding of contours.
//!
//! Ray `i` of an `n`-ray mask points at angle `θ_i = i · 2π / n`, starting at
//! `+x` and turning towards `+y`. A ray's length is the distance from the
//! center to the farthest point where it meets the contour; rays that miss
//! the contour borrow the length of the nearest ray that hits it (searching
//! at most `n / 8` rays either side) and otherwise get [`Scalar::ray_epsilon`].

mod sweep;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Polygon};
use crate::scalar::{from_usize, lit, Scalar};

pub use sweep::{round_trip_iou, upper_bound_sweep, CenterMode, UpperBoundRow};

/// Contour sample spacing used by [`encode`], in pixels.
pub const DEFAULT_MAX_STEP: f64 = 0.5;

/// An instance center and `n` ray lengths at uniform angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarMask<T> {
    center: Point2<T>,
    rays: Vec<T>,
}

impl<T: Scalar> PolarMask<T> {
    /// Validates the ray count and lengths; lengths in `(0, ε)` are raised to `ε`.
    pub fn new(center: Point2<T>, mut rays: Vec<T>) -> Result<Self> {
        check_ray_count(rays.len())?;
        if !center.is_finite() {
            return Err(Error::InvalidArgument("center must be finite".into()));
        }
        if rays.iter().any(|r| !r.is_finite() || *r <= T::zero()) {
            return Err(Error::NonPositiveRay);
        }
        let eps = T::ray_epsilon();
        for r in &mut rays {
            *r = r.max(eps);
        }
        Ok(Self { center, rays })
    }

    pub fn center(&self) -> Point2<T> {
        self.center
    }

    pub fn rays(&self) -> &[T] {
        &self.rays
    }

    pub fn n(&self) -> usize {
        self.rays.len()
    }

    pub fn angle(&self, i: usize) -> T {
        from_usize::<T>(i) * T::TAU() / from_usize(self.n())
    }

    pub fn translate(&self, offset: Point2<T>) -> Self {
        Self {
            center: self.center + offset,
            rays: self.rays.clone(),
        }
    }

    /// Scales every ray by `factor > 0` about the center.
    pub fn scale_rays(&self, factor: T) -> Result<Self> {
        Self::new(self.center, self.rays.iter().map(|&r| r * factor).collect())
    }
}

pub(crate) fn check_ray_count(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::InvalidRayCount(n));
    }
    Ok(())
}

/// Unit direction of every ray. Multiples of 90° are exact.
pub fn ray_directions<T: Scalar>(n: usize) -> Vec<Point2<T>> {
    (0..n)
        .map(|i| {
            if (4 * i) % n == 0 {
                match 4 * i / n {
                    0 => Point2::new(T::one(), T::zero()),
                    1 => Point2::new(T::zero(), T::one()),
                    2 => Point2::new(-T::one(), T::zero()),
                    _ => Point2::new(T::zero(), -T::one()),
                }
            } else {
                let theta = from_usize::<T>(i) * T::TAU() / from_usize(n);
                let (s, c) = theta.sin_cos();
                Point2::new(c, s)
            }
        })
        .collect()
}

/// Inserts evenly spaced points on every edge longer than `max_step`.
/// Original vertices are kept, in order.
pub fn densify<T: Scalar>(contour: &Polygon<T>, max_step: T) -> Result<Polygon<T>> {
    if !max_step.is_finite() || max_step <= T::zero() {
        return Err(Error::InvalidArgument(format!(
            "max_step must be positive, got {max_step}"
        )));
    }
    let mut out = Vec::with_capacity(contour.len());
    for (a, b) in contour.edges() {
        let len = a.distance(b);
        let pieces = (len / max_step).ceil().to_usize().unwrap_or(1).max(1);
        out.push(a);
        for j in 1..pieces {
            let t = from_usize::<T>(j) / from_usize(pieces);
            out.push(a + (b - a) * t);
        }
    }
    Ok(Polygon::from_vertices_unchecked(out))
}

/// Encodes `contour` as `n` rays around `center`, sampling the contour at
/// [`DEFAULT_MAX_STEP`].
pub fn encode<T: Scalar>(
    contour: &Polygon<T>,
    center: Point2<T>,
    n: usize,
) -> Result<PolarMask<T>> {
    encode_with_step(contour, center, n, lit(DEFAULT_MAX_STEP))
}

pub fn encode_with_step<T: Scalar>(
    contour: &Polygon<T>,
    center: Point2<T>,
    n: usize,
    max_step: T,
) -> Result<PolarMask<T>> {
    check_ray_count(n)?;
    if contour.area() < T::area_epsilon() {
        return Err(Error::DegeneratePolygon);
    }
    if !center.is_finite() {
        return Err(Error::InvalidArgument("center must be finite".into()));
    }
    let samples = densify(contour, max_step)?;
    let hits = cast_rays(&samples, center, n);
    let rays = fill_missing(&hits);
    PolarMask::new(center, rays)
}

/// Farthest intersection of each ray with the sampled contour, if any.
fn cast_rays<T: Scalar>(samples: &Polygon<T>, center: Point2<T>, n: usize) -> Vec<Option<T>> {
    let dirs = ray_directions::<T>(n);
    let step = T::TAU() / from_usize(n);
    let slack = lit::<T>(1e-9);
    let mut best: Vec<Option<T>> = vec![None; n];
    let n_i = n as i64;

    for (a, b) in samples.edges() {
        let (ra, rb) = (a - center, b - center);
        let seg = rb - ra;
        let seg_len = seg.norm();
        if seg_len == T::zero() {
            continue;
        }
        let start = ra.angle();
        let sweep = ra.cross(rb).atan2(ra.dot(rb));
        let (lo, hi) = if sweep >= T::zero() {
            (start, start + sweep)
        } else {
            (start + sweep, start)
        };
        let k_lo = ((lo / step) - slack).ceil().to_i64().unwrap_or(0);
        let k_hi = ((hi / step) + slack).floor().to_i64().unwrap_or(-1);
        for k in k_lo..=k_hi {
            let idx = k.rem_euclid(n_i) as usize;
            let u = dirs[idx];
            let denom = u.cross(seg);
            let dist = if denom.abs() <= slack * seg_len {
                // segment lies along the ray direction
                if u.cross(ra).abs() > slack * (ra.norm() + T::one()) {
                    continue;
                }
                u.dot(ra).max(u.dot(rb))
            } else {
                let s = -u.cross(ra) / denom;
                if s < -slack || s > T::one() + slack {
                    continue;
                }
                u.dot(ra + seg * s)
            };
            if dist < T::zero() {
                continue;
            }
            // strict comparison keeps the first of equal maxima
            match best[idx] {
                Some(d) if d >= dist => {}
                _ => best[idx] = Some(dist),
            }
        }
    }
    best
}

/// Nearest-ray fallback for missing rays, then the ε floor.
fn fill_missing<T: Scalar>(hits: &[Option<T>]) -> Vec<T> {
    let n = hits.len();
    let radius = n / 8;
    let eps = T::ray_epsilon();
    (0..n)
        .map(|i| {
            let found = hits[i].or_else(|| {
                (1..=radius).find_map(|off| hits[(i + off) % n].or(hits[(i + n - off) % n]))
            });
            found.map_or(eps, |d| d.max(eps))
        })
        .collect()
}

/// Contour points `center + d_i · (cos θ_i, sin θ_i)` in angle order from 0°.
pub fn decode<T: Scalar>(pm: &PolarMask<T>) -> Polygon<T> {
    let vertices = ray_directions::<T>(pm.n())
        .into_iter()
        .zip(pm.rays())
        .map(|(u, &d)| pm.center + u * d)
        .collect();
    Polygon::from_vertices_unchecked(vertices)
}
