//! IO companion to `steerage-core`: state and protocol documents, report
//! serialization, and the reference demos driven by the `steerage` binary.

pub mod demo;
pub mod formats;
pub mod report;

pub use formats::{
    emit_protocol_file, emit_state_file, parse_protocol_file, parse_protocol_shorthand,
    parse_state_file, FormatError,
};
pub use report::ReportDocument;
