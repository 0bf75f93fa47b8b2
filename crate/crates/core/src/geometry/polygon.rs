use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BBox, Point2};
use crate::scalar::{lit, Scalar};

/// Closed ring of vertices; the last vertex connects back to the first.
///
/// Constructed through [`Polygon::new`], which enforces at least three
/// finite vertices and a non-degenerate signed area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polygon<T> {
    vertices: Vec<Point2<T>>,
}

impl<T: Scalar> Polygon<T> {
    pub fn new(vertices: Vec<Point2<T>>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(format!(
                "{} vertices, need at least 3",
                vertices.len()
            )));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidPolygon(format!(
                "non-finite vertex ({}, {})",
                p.x, p.y
            )));
        }
        let poly = Self { vertices };
        let area = poly.signed_area().abs();
        if !area.is_finite() {
            return Err(Error::InvalidPolygon("area overflows".into()));
        }
        if area < T::area_epsilon() {
            return Err(Error::DegeneratePolygon);
        }
        Ok(poly)
    }

    /// Builds a ring whose invariants are guaranteed by construction
    /// (for example the output of `decode`).
    pub(crate) fn from_vertices_unchecked(vertices: Vec<Point2<T>>) -> Self {
        debug_assert!(vertices.len() >= 3);
        Self { vertices }
    }

    pub fn from_xy(coords: &[(T, T)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(x, y)| Point2::new(x, y)).collect())
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point2<T>> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Iterates over the ring's edges `(v[i], v[i + 1 mod n])`.
    pub fn edges(&self) -> impl Iterator<Item = (Point2<T>, Point2<T>)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Shoelace signed area. Positive for rings that run clockwise on screen
    /// (counter-clockwise in a `+y` up frame).
    pub fn signed_area(&self) -> T {
        // Relative to the first vertex so large offsets do not cost precision.
        let origin = self.vertices[0];
        let twice = self.edges().fold(T::zero(), |acc, (a, b)| {
            acc + (a - origin).cross(b - origin)
        });
        twice * lit(0.5)
    }

    pub fn area(&self) -> T {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> T {
        self.edges()
            .fold(T::zero(), |acc, (a, b)| acc + a.distance(b))
    }

    pub fn bbox(&self) -> BBox<T> {
        BBox::from_points(&self.vertices)
    }

    pub fn translate(&self, offset: Point2<T>) -> Self {
        self.map(|p| p + offset)
    }

    /// Applies `f` to every vertex. The caller is responsible for producing
    /// a non-degenerate ring (affine maps with non-zero determinant do).
    pub fn map(&self, f: impl Fn(Point2<T>) -> Point2<T>) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&p| f(p)).collect(),
        }
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self { vertices }
    }

    pub fn contains(&self, p: Point2<T>) -> bool {
        point_in_polygon(&self.vertices, p)
    }

    pub fn cast<U: Scalar>(&self) -> Polygon<U> {
        Polygon {
            vertices: self.vertices.iter().map(|p| p.cast()).collect(),
        }
    }
}

/// Even-odd crossing test with the half-open rule `(a.y > y) != (b.y > y)`.
///
/// A point exactly on a left-facing edge counts as inside, on a right-facing
/// edge as outside; `rasterize` uses the same rule.
pub fn point_in_polygon<T: Scalar>(ring: &[Point2<T>], p: Point2<T>) -> bool {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

/// Area-weighted centroid of the ring.
pub fn mass_center<T: Scalar>(p: &Polygon<T>) -> Result<Point2<T>> {
    let origin = p.vertices[0];
    let mut twice_area = T::zero();
    let mut cx = T::zero();
    let mut cy = T::zero();
    for (a, b) in p.edges() {
        let (a, b) = (a - origin, b - origin);
        let w = a.cross(b);
        twice_area = twice_area + w;
        cx = cx + (a.x + b.x) * w;
        cy = cy + (a.y + b.y) * w;
    }
    if (twice_area * lit(0.5)).abs() < T::area_epsilon() {
        return Err(Error::DegeneratePolygon);
    }
    let denom = twice_area * lit(3.0);
    Ok(Point2::new(origin.x + cx / denom, origin.y + cy / denom))
}

/// Center of the vertices' axis-aligned bounding box.
pub fn box_center<T: Scalar>(p: &Polygon<T>) -> Point2<T> {
    p.bbox().center()
}

pub fn polygon_area<T: Scalar>(p: &Polygon<T>) -> T {
    p.area()
}
