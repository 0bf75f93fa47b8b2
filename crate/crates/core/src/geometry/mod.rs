//! Continuous and raster geometry primitives.
//!
//! All coordinates use the image frame: `+x` to the right, `+y` down, and
//! angles measured from `+x` towards `+y` (clockwise on screen). With this
//! convention `x = cos(θ)·d + xc`, `y = sin(θ)·d + yc` maps a ray of length
//! `d` at angle `θ` to a contour point.

mod bbox;
mod contour;
mod point;
mod polygon;
mod raster;

pub use bbox::BBox;
pub use contour::extract_contour;
pub use point::Point2;
pub use polygon::{box_center, mass_center, point_in_polygon, polygon_area, Polygon};
pub use raster::{mask_iou, rasterize, RasterMask};
