//! File formats, synthetic corpora and the command implementations.

pub mod annotations;
pub mod commands;
pub mod detections;
pub mod report;
pub mod synth;

pub use annotations::{load_annotations, parse_annotations, AnnotationSet, ImageInfo, Instance};
pub use detections::{load_detections, parse_detections, PipelineOutput, PipelineRecord};
pub use report::{LossTraceRow, SweepReport};
pub use synth::{mixed_corpus, synth_corpus, SynthKind};
