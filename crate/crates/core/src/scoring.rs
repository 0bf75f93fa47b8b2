//! Sample-quality scores and positive-sample selection.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{BBox, Point2};
use crate::scalar::{from_usize, lit, Scalar};

/// Aggregate applied to each quadrant subset by [`soft_polar_centerness`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SoftVariant {
    MeanOfSubset,
    MaxOfSubset,
    /// Ray with the lowest angle index in the subset.
    FirstOfSubset,
}

impl SoftVariant {
    pub const ALL: [SoftVariant; 3] = [
        SoftVariant::MeanOfSubset,
        SoftVariant::MaxOfSubset,
        SoftVariant::FirstOfSubset,
    ];

    fn aggregate<T: Scalar>(self, subset: &[T]) -> T {
        match self {
            SoftVariant::MeanOfSubset => {
                subset.iter().fold(T::zero(), |a, &b| a + b) / from_usize(subset.len())
            }
            SoftVariant::MaxOfSubset => subset.iter().fold(T::neg_infinity(), |a, &b| a.max(b)),
            SoftVariant::FirstOfSubset => subset[0],
        }
    }
}

impl fmt::Display for SoftVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SoftVariant::MeanOfSubset => "mean",
            SoftVariant::MaxOfSubset => "max",
            SoftVariant::FirstOfSubset => "first",
        })
    }
}

impl FromStr for SoftVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(SoftVariant::MeanOfSubset),
            "max" => Ok(SoftVariant::MaxOfSubset),
            "first" => Ok(SoftVariant::FirstOfSubset),
            other => Err(Error::InvalidArgument(format!(
                "unknown soft variant `{other}`"
            ))),
        }
    }
}

fn check_positive<T: Scalar>(rays: &[T]) -> Result<()> {
    if rays.is_empty() || rays.iter().any(|r| !r.is_finite() || *r <= T::zero()) {
        return Err(Error::NonPositiveRay);
    }
    Ok(())
}

/// `sqrt(min(rays) / max(rays))`.
pub fn polar_centerness<T: Scalar>(rays: &[T]) -> Result<T> {
    check_positive(rays)?;
    let (lo, hi) = rays
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &r| {
            (lo.min(r), hi.max(r))
        });
    Ok((lo / hi).sqrt())
}

/// Quadrant form of polar centerness.
///
/// Rays are split in index order into four equal subsets `D1..D4`
/// (`[0°, 90°)`, `[90°, 180°)`, ...). With `a = F(D1)/F(D3)` and
/// `b = F(D2)/F(D4)` the score is `sqrt(min(a, 1/a) · min(b, 1/b))`; folding
/// each ratio below one keeps the score in `(0, 1]`.
pub fn soft_polar_centerness<T: Scalar>(rays: &[T], variant: SoftVariant) -> Result<T> {
    if rays.len() < 4 || !rays.len().is_multiple_of(4) {
        return Err(Error::InvalidRayCount(rays.len()));
    }
    check_positive(rays)?;
    let q = rays.len() / 4;
    let f: Vec<T> = rays.chunks_exact(q).map(|d| variant.aggregate(d)).collect();
    let fold = |r: T| r.min(r.recip());
    Ok((fold(f[0] / f[2]) * fold(f[1] / f[3])).sqrt())
}

/// Feature strides and sampling radius for positive center samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterSampleConfig {
    pub strides: Vec<u32>,
    pub radius_multiplier: f64,
}

impl Default for CenterSampleConfig {
    fn default() -> Self {
        Self {
            strides: vec![8, 16, 32, 64, 128],
            radius_multiplier: 1.5,
        }
    }
}

impl CenterSampleConfig {
    pub fn new(strides: Vec<u32>, radius_multiplier: f64) -> Result<Self> {
        let cfg = Self {
            strides,
            radius_multiplier,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.strides.is_empty()
            || self.strides[0] == 0
            || self.strides.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidArgument(
                "strides must be positive and strictly increasing".into(),
            ));
        }
        if !self.radius_multiplier.is_finite() || self.radius_multiplier <= 0.0 {
            return Err(Error::InvalidArgument(
                "radius_multiplier must be > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Feature-grid locations treated as positive samples for one instance.
///
/// Grid points sit at cell centers `((j + 0.5)·s, (i + 0.5)·s)` of a
/// `ceil(image_w / s) × ceil(image_h / s)` feature map. A point is kept when
/// it lies within `radius_multiplier · s` of `mass_center` on both axes and
/// inside `instance_bbox` (bounds inclusive). When nothing qualifies, the
/// single grid point nearest the mass center is returned. Samples are listed
/// row by row.
pub fn center_samples<T: Scalar>(
    mass_center: Point2<T>,
    instance_bbox: &BBox<T>,
    stride: u32,
    cfg: &CenterSampleConfig,
    image_w: u32,
    image_h: u32,
) -> Result<Vec<Point2<T>>> {
    cfg.validate()?;
    if !cfg.strides.contains(&stride) {
        return Err(Error::InvalidArgument(format!(
            "stride {stride} not among configured strides {:?}",
            cfg.strides
        )));
    }
    if image_w == 0 || image_h == 0 {
        return Err(Error::InvalidRasterSize(image_w as usize, image_h as usize));
    }
    if !mass_center.is_finite() {
        return Err(Error::InvalidArgument("mass center must be finite".into()));
    }
    let s: T = lit(f64::from(stride));
    let radius = s * lit(cfg.radius_multiplier);
    let cols = image_w.div_ceil(stride) as i64;
    let rows = image_h.div_ceil(stride) as i64;
    let half = lit::<T>(0.5);

    let x_lo = (mass_center.x - radius).max(instance_bbox.x_min);
    let x_hi = (mass_center.x + radius).min(instance_bbox.x_max);
    let y_lo = (mass_center.y - radius).max(instance_bbox.y_min);
    let y_hi = (mass_center.y + radius).min(instance_bbox.y_max);

    // grid index range whose centers fall in [lo, hi]
    let index_range = |lo: T, hi: T, count: i64| -> (i64, i64) {
        let first = (lo / s - half).ceil().to_i64().unwrap_or(i64::MAX).max(0);
        let last = (hi / s - half)
            .floor()
            .to_i64()
            .unwrap_or(i64::MIN)
            .min(count - 1);
        (first, last)
    };
    let (c0, c1) = index_range(x_lo, x_hi, cols);
    let (r0, r1) = index_range(y_lo, y_hi, rows);

    let at = |i: i64, j: i64| {
        Point2::new(
            (lit::<T>(j as f64) + half) * s,
            (lit::<T>(i as f64) + half) * s,
        )
    };
    let mut out = Vec::new();
    if x_lo <= x_hi && y_lo <= y_hi {
        for i in r0..=r1 {
            for j in c0..=c1 {
                out.push(at(i, j));
            }
        }
    }
    if out.is_empty() {
        let nearest = |v: T, count: i64| (v / s).floor().to_i64().unwrap_or(0).clamp(0, count - 1);
        out.push(at(
            nearest(mass_center.y, rows),
            nearest(mass_center.x, cols),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polar_centerness_values() {
        assert_eq!(polar_centerness(&[2.0; 8]).unwrap(), 1.0);
        assert_abs_diff_eq!(
            polar_centerness(&[1.0, 2.0, 4.0, 3.0]).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        let mut rays = vec![1.0; 36];
        rays[7] = 1e-6;
        assert_abs_diff_eq!(polar_centerness(&rays).unwrap(), 1e-3, epsilon = 1e-15);
        assert!(matches!(
            polar_centerness(&[1.0, 0.0, 1.0, 1.0]),
            Err(Error::NonPositiveRay)
        ));
        assert!(matches!(
            polar_centerness::<f64>(&[]),
            Err(Error::NonPositiveRay)
        ));
    }

    #[test]
    fn soft_centerness_values() {
        for v in SoftVariant::ALL {
            assert_eq!(soft_polar_centerness(&[3.0; 12], v).unwrap(), 1.0);
        }
        // D1 = {2, 2}, D2 = {5, 5}, D3 = {1, 1}, D4 = {5, 5}
        let rays = [2.0, 2.0, 5.0, 5.0, 1.0, 1.0, 5.0, 5.0];
        assert_abs_diff_eq!(
            soft_polar_centerness(&rays, SoftVariant::MeanOfSubset).unwrap(),
            0.5f64.sqrt(),
            epsilon = 1e-15
        );
        assert!(matches!(
            soft_polar_centerness(&[1.0; 6], SoftVariant::MaxOfSubset),
            Err(Error::InvalidRayCount(6))
        ));
    }

    #[test]
    fn first_of_subset_uses_lowest_index() {
        let rays = [4.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        // a = 4 / 1 folded to 1/4, b = 1
        assert_abs_diff_eq!(
            soft_polar_centerness(&rays, SoftVariant::FirstOfSubset).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        let rays = [1.0, 4.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        assert_eq!(
            soft_polar_centerness(&rays, SoftVariant::FirstOfSubset).unwrap(),
            1.0
        );
    }

    #[test]
    fn single_spike_is_softened() {
        let mut rays = vec![1.0; 36];
        rays[3] = 1e-6;
        let hard = polar_centerness(&rays).unwrap();
        let soft = soft_polar_centerness(&rays, SoftVariant::MeanOfSubset).unwrap();
        assert!(soft >= hard);
        assert!(soft > 0.9);
    }

    #[test]
    fn variant_parsing() {
        for v in SoftVariant::ALL {
            assert_eq!(v.to_string().parse::<SoftVariant>().unwrap(), v);
        }
    }

    fn big_box() -> BBox<f64> {
        BBox::new(0.0, 0.0, 1000.0, 1000.0).unwrap()
    }

    #[test]
    fn grid_point_center_gives_nine() {
        let cfg = CenterSampleConfig::default();
        // grid point (j + 0.5)·16 with j = 20
        let c = Point2::new(328.0, 328.0);
        let s = center_samples(c, &big_box(), 16, &cfg, 1000, 1000).unwrap();
        assert_eq!(s.len(), 9);
        assert!(s.contains(&c));
    }

    #[test]
    fn mid_cell_center_gives_sixteen() {
        let cfg = CenterSampleConfig::default();
        let c = Point2::new(336.0, 336.0);
        let s = center_samples(c, &big_box(), 16, &cfg, 1000, 1000).unwrap();
        assert_eq!(s.len(), 16);
    }

    #[test]
    fn tiny_box_falls_back_to_nearest() {
        let cfg = CenterSampleConfig::default();
        let bbox = BBox::new(100.0, 100.0, 103.0, 103.0).unwrap();
        let s = center_samples(Point2::new(101.0, 102.0), &bbox, 32, &cfg, 640, 480).unwrap();
        assert_eq!(s, vec![Point2::new(112.0, 112.0)]);
    }

    #[test]
    fn clipped_by_image() {
        let cfg = CenterSampleConfig::default();
        let s = center_samples(Point2::new(4.0, 4.0), &big_box(), 8, &cfg, 16, 16).unwrap();
        // columns and rows {0, 1}
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn config_validation() {
        assert!(CenterSampleConfig::new(vec![8, 8], 1.5).is_err());
        assert!(CenterSampleConfig::new(vec![0, 8], 1.5).is_err());
        assert!(CenterSampleConfig::new(vec![8, 16], 0.0).is_err());
        let cfg = CenterSampleConfig::default();
        assert!(center_samples(Point2::new(0.0, 0.0), &big_box(), 12, &cfg, 10, 10).is_err());
    }
}
