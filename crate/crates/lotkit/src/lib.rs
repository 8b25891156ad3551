//! Std companion to `lotkit-core`: text formats, JSON documents, a
//! parallel exact search, the census verification harness and the
//! command line.

pub mod analysis;
pub mod cli;
pub mod document;
pub mod formats;
pub mod parallel;
pub mod verify;

pub use lotkit_core as core;

pub use analysis::{analyze_text, AnalyzeOptions};
pub use document::{AnalysisDocument, CertificateDoc};
pub use formats::{export_dot, parse_lot_file, parse_presentation, serialize_lot, ParseError};
pub use parallel::exact_complexity_par;
