//! Polar representation of instance masks.
//!
//! An instance is described by a center and `n` ray lengths sampled at
//! uniform angles. This crate encodes contours into that form, decodes it
//! back, scores sample quality with (soft) polar centerness, evaluates the
//! Polar IoU loss with its gradient, and runs the box-NMS post-processing
//! pipeline. Exact raster geometry is provided alongside as an oracle.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*F64` / `*F32` aliases below name the concrete instantiations.

pub mod codec;
pub mod error;
pub mod geometry;
pub mod io;
pub mod loss;
pub mod postprocess;
pub mod scalar;
pub mod scoring;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Point2F64 = geometry::Point2<f64>;
pub type PolygonF64 = geometry::Polygon<f64>;
pub type BBoxF64 = geometry::BBox<f64>;
pub type PolarMaskF64 = codec::PolarMask<f64>;
pub type RayPairF64 = loss::RayPair<f64>;
pub type DetectionF64 = postprocess::Detection<f64>;

pub type Point2F32 = geometry::Point2<f32>;
pub type PolygonF32 = geometry::Polygon<f32>;
pub type BBoxF32 = geometry::BBox<f32>;
pub type PolarMaskF32 = codec::PolarMask<f32>;
pub type RayPairF32 = loss::RayPair<f32>;
pub type DetectionF32 = postprocess::Detection<f32>;
