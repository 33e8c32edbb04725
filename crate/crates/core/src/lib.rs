//! Layered information-system architecture models with explicit derivation
//! links between layers.
//!
//! A model is written in the `.arch` language ([`parser`]), sealed into an
//! immutable [`ArchitectureModel`], checked for derivation gaps and orphans
//! ([`validate`]), queried for traces, impact sets, coverage and version
//! differences ([`trace`]), and rendered into reports ([`docgen`]).

pub mod cli;
pub mod diagnostic;
pub mod docgen;
pub mod model;
pub mod par;
pub mod parser;
pub mod synth;
pub mod trace;
pub mod validate;

pub use diagnostic::{Code, Diagnostic, Severity, SourceSpan};
pub use model::{
    build_model, export_canonical, import_canonical, neighbors, ArchElement, ArchitectureModel,
    Direction, ElementKind, Layer, Link, LinkKind, Meta,
};
pub use par::Execution;
pub use parser::{locate, parse, ParseResult, SourceFile};
pub use validate::{exit_status, validate, ExitStatus, RuleConfig};
pub use docgen::{emit_dsl, render, Format, ReportKind, ReportSpec};
pub use trace::{coverage, diff, impact, trace, CoverageReport, ModelDiff, TraceOptions, TraceResult};
