//! Test-time assembly: minimal boxes of decoded masks, top-k and box NMS.

use crate::codec::{decode, PolarMask};
use crate::error::{Error, Result};
use crate::geometry::BBox;
use crate::scalar::Scalar;

pub const DEFAULT_IOU_THRESHOLD: f64 = 0.5;
pub const DEFAULT_TOP_K: usize = 1000;

/// A scored, class-labelled polar mask.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection<T> {
    pub mask: PolarMask<T>,
    pub score: T,
    pub class_id: u32,
}

impl<T: Scalar> Detection<T> {
    pub fn new(mask: PolarMask<T>, score: T, class_id: u32) -> Result<Self> {
        if !score.is_finite() || score < T::zero() || score > T::one() {
            return Err(Error::InvalidArgument(format!(
                "score {score} outside [0, 1]"
            )));
        }
        Ok(Self {
            mask,
            score,
            class_id,
        })
    }
}

/// Axis-aligned box of the decoded contour.
pub fn min_bbox<T: Scalar>(pm: &PolarMask<T>) -> BBox<T> {
    decode(pm).bbox()
}

pub fn box_iou<T: Scalar>(a: &BBox<T>, b: &BBox<T>) -> T {
    let iw = (a.x_max.min(b.x_max) - a.x_min.max(b.x_min)).max(T::zero());
    let ih = (a.y_max.min(b.y_max) - a.y_min.max(b.y_min)).max(T::zero());
    let inter = iw * ih;
    let union = a.area() + b.area() - inter;
    if union <= T::zero() {
        return T::zero();
    }
    inter / union
}

/// Indices sorted by descending score, ties by ascending index.
fn score_order<T: Scalar>(dets: &[Detection<T>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| {
        dets[b]
            .score
            .partial_cmp(&dets[a].score)
            .expect("scores are finite")
    });
    order
}

/// Greedy NMS; returns indices into `dets` of the kept detections, in
/// descending-score order.
pub fn nms_indices<T: Scalar>(
    dets: &[Detection<T>],
    iou_threshold: T,
    class_aware: bool,
) -> Result<Vec<usize>> {
    if !(iou_threshold > T::zero() && iou_threshold < T::one()) {
        return Err(Error::InvalidArgument(format!(
            "iou threshold {iou_threshold} outside (0, 1)"
        )));
    }
    let boxes: Vec<BBox<T>> = dets.iter().map(|d| min_bbox(&d.mask)).collect();
    let mut kept: Vec<usize> = Vec::new();
    for i in score_order(dets) {
        let suppressed = kept.iter().any(|&k| {
            (!class_aware || dets[k].class_id == dets[i].class_id)
                && box_iou(&boxes[k], &boxes[i]) >= iou_threshold
        });
        if !suppressed {
            kept.push(i);
        }
    }
    Ok(kept)
}

/// Greedy NMS over minimal boxes. A detection survives iff its box IoU with
/// every previously kept detection (of the same class when `class_aware`)
/// is below `iou_threshold`.
pub fn nms<T: Scalar>(
    dets: &[Detection<T>],
    iou_threshold: T,
    class_aware: bool,
) -> Result<Vec<Detection<T>>> {
    Ok(nms_indices(dets, iou_threshold, class_aware)?
        .into_iter()
        .map(|i| dets[i].clone())
        .collect())
}

/// The `k` highest-scoring detections; equal scores keep input order.
pub fn top_k<T: Scalar>(dets: &[Detection<T>], k: usize) -> Vec<Detection<T>> {
    score_order(dets)
        .into_iter()
        .take(k)
        .map(|i| dets[i].clone())
        .collect()
}
