use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Polygon, RasterMask};
use crate::scalar::{lit, Scalar};

/// Traces the outer boundary of every 4-connected component of `m`.
///
/// Marching squares runs on the dual grid whose corners are pixel centers, so
/// contour vertices sit on midpoints between neighbouring pixel centers and a
/// single pixel yields a diamond around its center. Saddle cells keep the two
/// diagonal pixels apart, consistent with 4-connectivity. Collinear vertices
/// are dropped and every ring is oriented to positive signed area. Components
/// are returned in raster-scan order of their first pixel.
pub fn extract_contour<T: Scalar>(m: &RasterMask) -> Result<Vec<Polygon<T>>> {
    if m.is_empty() {
        return Err(Error::EmptyMask);
    }
    let (w, h) = (m.width(), m.height());
    let labels = label_components(m);
    let count = labels.iter().flatten().max().map_or(0, |&l| l + 1);
    let mut polygons = Vec::with_capacity(count);
    for label in 0..count {
        let ring = trace_outer(&labels, w, h, label);
        let vertices = ring
            .into_iter()
            .map(|(x, y)| Point2::new(lit::<T>(x as f64 * 0.5), lit::<T>(y as f64 * 0.5)))
            .collect();
        let mut poly = Polygon::new(vertices)?;
        if poly.signed_area() < T::zero() {
            poly = poly.reversed();
        }
        polygons.push(poly);
    }
    Ok(polygons)
}

fn label_components(m: &RasterMask) -> Vec<Option<usize>> {
    let (w, h) = (m.width(), m.height());
    let mut labels = vec![None; w * h];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        if !m.bits()[start] || labels[start].is_some() {
            continue;
        }
        labels[start] = Some(next);
        queue.push_back(start);
        while let Some(idx) = queue.pop_front() {
            let (x, y) = (idx % w, idx / w);
            let mut visit = |nx: usize, ny: usize| {
                let n = ny * w + nx;
                if m.bits()[n] && labels[n].is_none() {
                    labels[n] = Some(next);
                    queue.push_back(n);
                }
            };
            if x > 0 {
                visit(x - 1, y);
            }
            if x + 1 < w {
                visit(x + 1, y);
            }
            if y > 0 {
                visit(x, y - 1);
            }
            if y + 1 < h {
                visit(x, y + 1);
            }
        }
        next += 1;
    }
    labels
}

/// Returns the outer ring of component `label` in doubled integer coordinates.
fn trace_outer(labels: &[Option<usize>], w: usize, h: usize, label: usize) -> Vec<(i64, i64)> {
    let inside = |i: i64, j: i64| {
        i >= 0
            && j >= 0
            && (i as usize) < w
            && (j as usize) < h
            && labels[j as usize * w + i as usize] == Some(label)
    };

    // Directed segments start -> end, with the component on a fixed side.
    let mut next: BTreeMap<(i64, i64), (i64, i64)> = BTreeMap::new();
    for j in -1..h as i64 {
        for i in -1..w as i64 {
            // corners clockwise on screen: TL, TR, BR, BL
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let set = corners.map(|(ci, cj)| inside(ci, cj));
            if set.iter().all(|&s| s) || !set.iter().any(|&s| s) {
                continue;
            }
            // edge k joins corner k to corner k + 1; midpoints in doubled coordinates
            let mids = [
                (2 * i + 2, 2 * j + 1),
                (2 * i + 3, 2 * j + 2),
                (2 * i + 2, 2 * j + 3),
                (2 * i + 1, 2 * j + 2),
            ];
            for k in 0..4 {
                let entry = !set[k] && set[(k + 1) % 4];
                if !entry {
                    continue;
                }
                // pair each entry with the next exit clockwise
                let exit = (1..4)
                    .map(|d| (k + d) % 4)
                    .find(|&e| set[e] && !set[(e + 1) % 4])
                    .expect("every entry has an exit");
                next.insert(mids[k], mids[exit]);
            }
        }
    }

    let mut best: Vec<(i64, i64)> = Vec::new();
    let mut best_area = 0i64;
    while let Some((&start, _)) = next.iter().next() {
        let mut ring = vec![start];
        let mut cur = next.remove(&start).expect("present");
        while cur != start {
            ring.push(cur);
            cur = next
                .remove(&cur)
                .expect("boundary segments form closed loops");
        }
        let area = twice_area(&ring).abs();
        if area > best_area {
            best_area = area;
            best = ring;
        }
    }
    drop_collinear(best)
}

fn twice_area(ring: &[(i64, i64)]) -> i64 {
    let n = ring.len();
    (0..n)
        .map(|k| {
            let (a, b) = (ring[k], ring[(k + 1) % n]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum()
}

fn drop_collinear(ring: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    let n = ring.len();
    (0..n)
        .filter(|&k| {
            let p = ring[(k + n - 1) % n];
            let c = ring[k];
            let q = ring[(k + 1) % n];
            (c.0 - p.0) * (q.1 - c.1) - (c.1 - p.1) * (q.0 - c.0) != 0
        })
        .map(|k| ring[k])
        .collect()
}
