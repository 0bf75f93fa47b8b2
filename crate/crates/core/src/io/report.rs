//! CSV outputs of the sweep and loss-check commands.
//!
//! Numbers are written with six significant digits, `.` as decimal separator
//! and LF line endings.

use serde::{Deserialize, Serialize};

use crate::codec::{CenterMode, UpperBoundRow};
use crate::error::{Error, Result};

pub const SWEEP_HEADER: [&str; 5] = [
    "n_rays",
    "center_mode",
    "mean_iou",
    "instance_count",
    "skipped",
];
pub const LOSSCHECK_HEADER: [&str; 5] = ["trial", "step", "objective", "loss", "polar_iou"];

/// Formats `x` like C's `%.6g`: six significant digits, trailing zeros
/// removed, scientific notation outside `[1e-4, 1e6)`.
pub fn format_sig6(x: f64) -> String {
    const DIGITS: i32 = 6;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (DIGITS - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Tabular upper-bound sweep result.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub corpus_name: String,
    pub rows: Vec<UpperBoundRow>,
    /// Instances and polygon parts dropped before the sweep ran.
    pub skipped: usize,
}

impl SweepReport {
    /// Row-level `skipped` values written to CSV include the report-level count.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(SWEEP_HEADER).expect("in-memory write");
        for row in &self.rows {
            w.write_record([
                row.n_rays.to_string(),
                row.center_mode.to_string(),
                format_sig6(row.mean_iou),
                row.instance_count.to_string(),
                (row.skipped + self.skipped).to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 csv")
    }

    /// Parses CSV written by [`SweepReport::to_csv`]. The report-level skip
    /// count is recovered as the minimum over rows.
    pub fn from_csv(corpus_name: &str, text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let header = r.headers().map_err(csv_error)?.clone();
        if header.iter().ne(SWEEP_HEADER) {
            return Err(Error::MalformedCsv(format!("unexpected header {header:?}")));
        }
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(csv_error)?;
            let field = |i: usize| rec.get(i).expect("record length checked by csv");
            rows.push(UpperBoundRow {
                n_rays: parse(field(0))?,
                center_mode: field(1).parse()?,
                mean_iou: parse(field(2))?,
                instance_count: parse(field(3))?,
                skipped: parse(field(4))?,
            });
        }
        let skipped = rows.iter().map(|r| r.skipped).min().unwrap_or(0);
        for row in &mut rows {
            row.skipped -= skipped;
        }
        Ok(Self {
            corpus_name: corpus_name.to_string(),
            rows,
            skipped,
        })
    }

    pub fn row(&self, n_rays: usize, mode: CenterMode) -> Option<&UpperBoundRow> {
        self.rows
            .iter()
            .find(|r| r.n_rays == n_rays && r.center_mode == mode)
    }
}

/// One line of the loss-check trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossTraceRow {
    pub trial: usize,
    pub step: usize,
    pub objective: String,
    pub loss: f64,
    pub polar_iou: f64,
}

pub fn losscheck_csv(rows: &[LossTraceRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(LOSSCHECK_HEADER).expect("in-memory write");
    for row in rows {
        w.write_record([
            row.trial.to_string(),
            row.step.to_string(),
            row.objective.clone(),
            format_sig6(row.loss),
            format_sig6(row.polar_iou),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 csv")
}

pub fn parse_losscheck_csv(text: &str) -> Result<Vec<LossTraceRow>> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_error)?.clone();
    if header.iter().ne(LOSSCHECK_HEADER) {
        return Err(Error::MalformedCsv(format!("unexpected header {header:?}")));
    }
    r.deserialize().map(|rec| rec.map_err(csv_error)).collect()
}

fn parse<V: std::str::FromStr>(s: &str) -> Result<V> {
    s.parse()
        .map_err(|_| Error::MalformedCsv(format!("cannot parse field `{s}`")))
}

fn csv_error(e: csv::Error) -> Error {
    Error::MalformedCsv(e.to_string())
}
