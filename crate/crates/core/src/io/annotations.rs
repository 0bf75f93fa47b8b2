//! COCO-style polygon annotations.

use std::collections::HashSet;
use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{Point2, Polygon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageInfo {
    pub id: u64,
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub image_id: u64,
    pub category_id: u64,
    pub polygons: Vec<Polygon<f64>>,
}

impl Instance {
    /// The polygon with the largest area; instances always hold at least one.
    pub fn largest_polygon(&self) -> &Polygon<f64> {
        self.polygons
            .iter()
            .max_by(|a, b| a.area().total_cmp(&b.area()))
            .expect("instance has at least one polygon")
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AnnotationSet {
    pub images: Vec<ImageInfo>,
    pub instances: Vec<Instance>,
    /// Annotations rejected for malformed polygons or unknown image ids.
    pub skipped: usize,
    /// RLE (typically crowd) annotations, which have no polygon form.
    pub rle_skipped: usize,
}

impl AnnotationSet {
    pub fn instances_of(&self, image_id: u64) -> impl Iterator<Item = &Instance> {
        self.instances
            .iter()
            .filter(move |i| i.image_id == image_id)
    }

    pub fn vertex_count(&self) -> usize {
        self.instances
            .iter()
            .flat_map(|i| &i.polygons)
            .map(Polygon::len)
            .sum()
    }

    /// One polygon per instance (its largest) plus the number of parts dropped.
    pub fn largest_polygons(&self) -> (Vec<Polygon<f64>>, usize) {
        let dropped = self.instances.iter().map(|i| i.polygons.len() - 1).sum();
        let polys = self
            .instances
            .iter()
            .map(|i| i.largest_polygon().clone())
            .collect();
        (polys, dropped)
    }
}

#[derive(Deserialize)]
struct RawDataset {
    images: Vec<ImageInfo>,
    annotations: Vec<RawAnnotation>,
}

#[derive(Deserialize)]
struct RawAnnotation {
    image_id: u64,
    category_id: u64,
    segmentation: Value,
}

pub(crate) fn json_error(e: serde_json::Error) -> Error {
    use serde_json::error::Category;
    match e.classify() {
        Category::Syntax | Category::Eof => Error::MalformedJson {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
        Category::Data => Error::SchemaError(e.to_string()),
        Category::Io => Error::Io(e.into()),
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })
}

pub fn load_annotations(path: impl AsRef<Path>) -> Result<AnnotationSet> {
    parse_annotations(&read_text(path.as_ref())?)
}

enum Segmentation {
    Polygons(Vec<Polygon<f64>>),
    Rle,
    Invalid,
}

fn parse_segmentation(seg: &Value) -> Segmentation {
    match seg {
        Value::Object(_) => Segmentation::Rle,
        Value::Array(parts) if !parts.is_empty() => {
            let mut polys = Vec::with_capacity(parts.len());
            for part in parts {
                let Some(flat) = part.as_array() else {
                    return Segmentation::Invalid;
                };
                if flat.len() < 6 || flat.len() % 2 != 0 {
                    return Segmentation::Invalid;
                }
                let Some(coords) = flat.iter().map(Value::as_f64).collect::<Option<Vec<_>>>()
                else {
                    return Segmentation::Invalid;
                };
                let vertices = coords
                    .chunks_exact(2)
                    .map(|xy| Point2::new(xy[0], xy[1]))
                    .collect();
                match Polygon::new(vertices) {
                    Ok(p) => polys.push(p),
                    Err(_) => return Segmentation::Invalid,
                }
            }
            Segmentation::Polygons(polys)
        }
        _ => Segmentation::Invalid,
    }
}

/// Parses annotation JSON text.
///
/// An annotation is skipped when any of its flat coordinate arrays has fewer
/// than six numbers, an odd length, non-numeric entries or a degenerate
/// ring, and when it references an unknown image id.
pub fn parse_annotations(text: &str) -> Result<AnnotationSet> {
    let raw: RawDataset = serde_json::from_str(text).map_err(json_error)?;
    let ids: HashSet<u64> = raw.images.iter().map(|i| i.id).collect();
    let mut set = AnnotationSet {
        images: raw.images,
        ..Default::default()
    };
    for ann in raw.annotations {
        if !ids.contains(&ann.image_id) {
            set.skipped += 1;
            continue;
        }
        match parse_segmentation(&ann.segmentation) {
            Segmentation::Polygons(polygons) => set.instances.push(Instance {
                image_id: ann.image_id,
                category_id: ann.category_id,
                polygons,
            }),
            Segmentation::Rle => set.rle_skipped += 1,
            Segmentation::Invalid => set.skipped += 1,
        }
    }
    Ok(set)
}

#[derive(Serialize)]
struct OutAnnotation {
    id: usize,
    image_id: u64,
    category_id: u64,
    iscrowd: u8,
    segmentation: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct OutDataset<'a> {
    images: &'a [ImageInfo],
    annotations: Vec<OutAnnotation>,
}

/// Serializes `set` as compact annotation JSON.
pub fn annotations_to_json(set: &AnnotationSet) -> String {
    let annotations = set
        .instances
        .iter()
        .enumerate()
        .map(|(i, inst)| OutAnnotation {
            id: i + 1,
            image_id: inst.image_id,
            category_id: inst.category_id,
            iscrowd: 0,
            segmentation: inst
                .polygons
                .iter()
                .map(|p| p.vertices().iter().flat_map(|v| [v.x, v.y]).collect())
                .collect(),
        })
        .collect();
    let out = OutDataset {
        images: &set.images,
        annotations,
    };
    serde_json::to_string(&out).expect("annotation set serializes")
}
