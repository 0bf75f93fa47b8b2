use crate::error::{Error, Result};
use crate::geometry::Polygon;
use crate::scalar::{lit, Scalar};

/// Row-major binary occupancy grid. Pixel `(x, y)` covers
/// `[x, x + 1) × [y, y + 1)` and has its center at `(x + 0.5, y + 0.5)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RasterMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl RasterMask {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidRasterSize(width, height));
        }
        Ok(Self {
            width,
            height,
            bits: vec![false; width * height],
        })
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 || bits.len() != width * height {
            return Err(Error::InvalidRasterSize(width, height));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    /// Builds a mask from rows of `'#'` (set) and any other character (unset).
    pub fn from_ascii(rows: &[&str]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        if rows.iter().any(|r| r.chars().count() != width) {
            return Err(Error::InvalidRasterSize(width, height));
        }
        let bits = rows
            .iter()
            .flat_map(|r| r.chars().map(|c| c == '#'))
            .collect();
        Self::from_bits(width, height, bits)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }
}

/// Scanline even-odd fill: pixel `(x, y)` is set iff its center lies inside
/// the ring under the same half-open rule as `point_in_polygon`.
pub fn rasterize<T: Scalar>(p: &Polygon<T>, width: usize, height: usize) -> Result<RasterMask> {
    if p.area() < T::area_epsilon() {
        return Err(Error::DegeneratePolygon);
    }
    let mut mask = RasterMask::new(width, height)?;
    let half = lit::<T>(0.5);
    let mut crossings: Vec<f64> = Vec::new();
    for row in 0..height {
        let y = T::from_usize(row).expect("row index representable") + half;
        crossings.clear();
        for (a, b) in p.edges() {
            if (a.y > y) != (b.y > y) {
                let x = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
                crossings.push(x.to_f64().expect("finite crossing"));
            }
        }
        crossings.sort_by(f64::total_cmp);
        for span in crossings.chunks_exact(2) {
            // center cx = i + 0.5 is inside iff span[0] <= cx < span[1]
            let start = (span[0] - 0.5).ceil().max(0.0);
            let end = (span[1] - 0.5).ceil().min(width as f64);
            if start >= end {
                continue;
            }
            let base = row * width;
            for bit in &mut mask.bits[base + start as usize..base + end as usize] {
                *bit = true;
            }
        }
    }
    Ok(mask)
}

/// `|a ∧ b| / |a ∨ b|`; two empty masks are considered identical (IoU 1).
pub fn mask_iou(a: &RasterMask, b: &RasterMask) -> Result<f64> {
    if a.width != b.width || a.height != b.height {
        return Err(Error::DimensionMismatch(
            a.width, a.height, b.width, b.height,
        ));
    }
    let (inter, union) = a
        .bits
        .iter()
        .zip(&b.bits)
        .fold((0usize, 0usize), |(i, u), (&x, &y)| {
            (i + usize::from(x && y), u + usize::from(x || y))
        });
    if union == 0 {
        return Ok(1.0);
    }
    Ok(inter as f64 / union as f64)
}
