//! Phone-level pronunciation error analysis for learners of Korean.
//!
//! Pipeline: Hangul text to canonical phones ([`g2p`]), alignment against
//! realized phones ([`align`]), per-group confusion matrices
//! ([`confusion`]), and two pattern analyses ([`patterns`]).

pub mod align;
pub mod confusion;
pub mod error;
pub mod g2p;
pub mod manifest;
pub mod patterns;
pub mod phoneset;
pub mod pipeline;
pub mod report;
pub mod simulator;
pub mod stats;

pub use align::{align, per, Alignment, EditCounts, EditKind, EditOp, Weights};
pub use confusion::{ConfusionCounts, ConfusionPercent, GroupKey, Proficiency, L1};
pub use error::{Error, Result};
pub use g2p::{g2p, G2pOutput, Mode, RuleTrace};
pub use phoneset::{Phone, PhoneSeq, Token};
pub use pipeline::{run_pipeline, AnalysisReport, PipelineConfig};
