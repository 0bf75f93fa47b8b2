use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codec::{check_ray_count, decode, encode};
use crate::error::{Error, Result};
use crate::geometry::{box_center, mask_iou, mass_center, rasterize, Point2, Polygon};
use crate::scalar::{lit, Scalar};

/// Where the rays of an instance originate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CenterMode {
    Mass,
    Box,
}

impl CenterMode {
    pub fn center_of<T: Scalar>(self, p: &Polygon<T>) -> Result<Point2<T>> {
        match self {
            CenterMode::Mass => mass_center(p),
            CenterMode::Box => Ok(box_center(p)),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CenterMode::Mass => "mass",
            CenterMode::Box => "box",
        }
    }
}

impl fmt::Display for CenterMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CenterMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mass" => Ok(CenterMode::Mass),
            "box" => Ok(CenterMode::Box),
            other => Err(Error::InvalidArgument(format!(
                "unknown center mode `{other}`"
            ))),
        }
    }
}

/// Mean encode/decode IoU for one ray count and center choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundRow {
    pub n_rays: usize,
    pub center_mode: CenterMode,
    pub mean_iou: f64,
    pub instance_count: usize,
    /// Instances dropped because their reconstruction was degenerate.
    pub skipped: usize,
}

/// IoU between `contour` and its `n`-ray reconstruction around `center`.
///
/// Both shapes are rasterized in a frame covering the union of their boxes,
/// inflated by 5% and scaled so its longer side spans `raster_size` pixels.
pub fn round_trip_iou<T: Scalar>(
    contour: &Polygon<T>,
    center: Point2<T>,
    n: usize,
    raster_size: usize,
) -> Result<f64> {
    if raster_size == 0 {
        return Err(Error::InvalidRasterSize(0, 0));
    }
    let decoded = decode(&encode(contour, center, n)?);
    let frame = contour.bbox().union(&decoded.bbox()).inflate(lit(0.05));
    let side = frame.width().max(frame.height());
    if side.is_nan() || side <= T::zero() {
        return Err(Error::DegeneratePolygon);
    }
    let size = T::from_usize(raster_size).expect("raster size representable");
    let scale = size / side;
    let origin = Point2::new(frame.x_min, frame.y_min);
    let to_raster = |p: Point2<T>| (p - origin) * scale;
    let extent = |len: T| ((len * scale).ceil().to_usize().unwrap_or(1)).clamp(1, raster_size);
    let (w, h) = (extent(frame.width()), extent(frame.height()));

    let truth = rasterize(&contour.map(to_raster), w, h)?;
    let recon = rasterize(&decoded.map(to_raster), w, h)?;
    mask_iou(&truth, &recon)
}

/// Mean round-trip IoU over `instances` for every ray count in `n_list`.
///
/// Rows follow `n_list` order. Instances whose center or reconstruction is
/// degenerate are counted in `skipped` rather than failing the sweep.
pub fn upper_bound_sweep<T: Scalar>(
    instances: &[Polygon<T>],
    n_list: &[usize],
    center_mode: CenterMode,
    raster_size: usize,
) -> Result<Vec<UpperBoundRow>> {
    if instances.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    for &n in n_list {
        check_ray_count(n)?;
    }
    let centers: Vec<Option<Point2<T>>> = instances
        .iter()
        .map(|p| center_mode.center_of(p).ok())
        .collect();

    n_list
        .iter()
        .map(|&n| {
            let mut total = 0.0;
            let mut count = 0;
            let mut skipped = 0;
            for (poly, center) in instances.iter().zip(&centers) {
                let iou = center
                    .ok_or(Error::DegeneratePolygon)
                    .and_then(|c| round_trip_iou(poly, c, n, raster_size));
                match iou {
                    Ok(v) => {
                        total += v;
                        count += 1;
                    }
                    Err(Error::DegeneratePolygon) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
            if count == 0 {
                return Err(Error::EmptyCorpus);
            }
            Ok(UpperBoundRow {
                n_rays: n,
                center_mode,
                mean_iou: total / count as f64,
                instance_count: count,
                skipped,
            })
        })
        .collect()
}
