//! Detections JSON input and pipeline JSON output.

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::codec::PolarMask;
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::io::annotations::{json_error, read_text};
use crate::postprocess::Detection;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub center: [f64; 2],
    pub rays: Vec<f64>,
    pub score: f64,
    pub class_id: u32,
}

impl DetectionRecord {
    pub fn from_detection(d: &Detection<f64>) -> Self {
        let c = d.mask.center();
        Self {
            center: [c.x, c.y],
            rays: d.mask.rays().to_vec(),
            score: d.score,
            class_id: d.class_id,
        }
    }

    pub fn to_detection(&self) -> Result<Detection<f64>> {
        let mask = PolarMask::new(
            Point2::new(self.center[0], self.center[1]),
            self.rays.clone(),
        )?;
        Detection::new(mask, self.score, self.class_id)
    }
}

pub fn parse_detections(text: &str) -> Result<Vec<Detection<f64>>> {
    let records: Vec<DetectionRecord> = serde_json::from_str(text).map_err(json_error)?;
    records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.to_detection()
                .map_err(|e| Error::SchemaError(format!("detection {i}: {e}")))
        })
        .collect()
}

pub fn load_detections(path: impl AsRef<Path>) -> Result<Vec<Detection<f64>>> {
    parse_detections(&read_text(path.as_ref())?)
}

pub fn detections_to_json(dets: &[Detection<f64>]) -> String {
    let records: Vec<DetectionRecord> = dets.iter().map(DetectionRecord::from_detection).collect();
    to_fixed_json(&records)
}

/// A kept detection with its decoded contour and minimal box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineRecord {
    pub center: [f64; 2],
    pub rays: Vec<f64>,
    pub score: f64,
    pub class_id: u32,
    pub bbox: [f64; 4],
    pub contour: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOutput {
    pub detections: Vec<PipelineRecord>,
}

/// Serializes with every float written to four decimal places.
pub fn to_fixed_json<S: Serialize>(value: &S) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDecimals);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

struct FixedDecimals;

impl serde_json::ser::Formatter for FixedDecimals {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        let s = format!("{value:.4}");
        // avoid "-0.0000" for tiny negatives
        if s.trim_start_matches('-')
            .chars()
            .all(|c| c == '0' || c == '.')
        {
            writer.write_all(b"0.0000")
        } else {
            writer.write_all(s.as_bytes())
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}
