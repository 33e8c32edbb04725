//! Operational documentation rendered from a model, plus the canonical DSL
//! emitter used by `fmt`.

pub(crate) mod emit;
mod matrix;
mod render;

use std::fmt;
use std::str::FromStr;

use crate::diagnostic::{Code, Diagnostic};
use crate::model::{ArchElement, ArchitectureModel, ElementKind, LinkKind, ATTR_DESC, ATTR_FORM};
use crate::par::{self, Execution};

pub use emit::{emit_dsl, emit_dsl_file};
pub use matrix::{trace_matrix, MATRIX_COLUMNS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReportKind {
    DialogReport,
    ViewfnModules,
    ModuleMethods,
    TraceMatrix,
    FullBook,
}

impl ReportKind {
    pub const ALL: [ReportKind; 5] = [
        ReportKind::DialogReport,
        ReportKind::ViewfnModules,
        ReportKind::ModuleMethods,
        ReportKind::TraceMatrix,
        ReportKind::FullBook,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReportKind::DialogReport => "dialog-report",
            ReportKind::ViewfnModules => "viewfn-modules",
            ReportKind::ModuleMethods => "module-methods",
            ReportKind::TraceMatrix => "trace-matrix",
            ReportKind::FullBook => "full-book",
        }
    }

    /// The element kind a subject must have, if the report takes one.
    pub fn subject_kind(self) -> Option<ElementKind> {
        match self {
            ReportKind::DialogReport => Some(ElementKind::Dialog),
            ReportKind::ViewfnModules => Some(ElementKind::ViewFunction),
            ReportKind::ModuleMethods => Some(ElementKind::Module),
            ReportKind::TraceMatrix | ReportKind::FullBook => None,
        }
    }
}

impl fmt::Display for ReportKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReportKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ReportKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown report kind {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Markdown,
    Html,
    Csv,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Markdown, Format::Html, Format::Csv];

    pub fn name(self) -> &'static str {
        match self {
            Format::Markdown => "markdown",
            Format::Html => "html",
            Format::Csv => "csv",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Format::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown format {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportSpec {
    pub kind: ReportKind,
    pub subject: Option<String>,
    pub format: Format,
}

impl ReportSpec {
    pub fn new(kind: ReportKind, subject: Option<&str>, format: Format) -> Self {
        Self {
            kind,
            subject: subject.map(str::to_string),
            format,
        }
    }
}

/// One heading, an optional block of prose, and a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Section {
    pub heading: String,
    pub intro: Option<String>,
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

const DIALOG_HEADER: &[&str] = &["View function", "Function definition"];
const MODULE_HEADER: &[&str] = &["Module", "Parameters", "Component", "Comments"];
const METHOD_HEADER: &[&str] = &["Method", "Parameters", "Class", "Comments"];

fn desc(e: &ArchElement) -> String {
    e.attr(ATTR_DESC).unwrap_or("").to_string()
}

fn container_name(model: &ArchitectureModel, e: &ArchElement) -> String {
    model.parent(&e.id).map(|p| p.name.clone()).unwrap_or_default()
}

fn dialog_section(model: &ArchitectureModel, dialog: &ArchElement) -> Section {
    let rows = model
        .children(&dialog.id)
        .into_iter()
        .filter(|c| c.kind == ElementKind::ViewFunction)
        .map(|vf| vec![format!("{}. {}", vf.id, vf.name), desc(vf)])
        .collect();
    Section {
        heading: format!("Dialog {}. {}", dialog.id, dialog.name),
        intro: dialog.attr(ATTR_FORM).map(str::to_string),
        header: DIALOG_HEADER,
        rows,
    }
}

fn realizer_rows(model: &ArchitectureModel, subject: &ArchElement) -> Vec<Vec<String>> {
    model
        .sources_of(&subject.id, LinkKind::Realizes)
        .into_iter()
        .map(|r| {
            vec![
                r.name.clone(),
                r.params().join(", "),
                container_name(model, r),
                desc(r),
            ]
        })
        .collect()
}

fn viewfn_section(model: &ArchitectureModel, vf: &ArchElement) -> Section {
    Section {
        heading: format!("Modules realizing view function {}. {}", vf.id, vf.name),
        intro: None,
        header: MODULE_HEADER,
        rows: realizer_rows(model, vf),
    }
}

fn module_section(model: &ArchitectureModel, module: &ArchElement) -> Section {
    Section {
        heading: format!("Methods realizing module {}", module.name),
        intro: None,
        header: METHOD_HEADER,
        rows: realizer_rows(model, module),
    }
}

fn sorted_by_id(model: &ArchitectureModel, kind: ElementKind) -> Vec<&ArchElement> {
    let mut v: Vec<&ArchElement> = model.elements_of(kind).collect();
    v.sort_by(|a, b| a.id.cmp(&b.id));
    v
}

fn check_spec<'m>(model: &'m ArchitectureModel, spec: &ReportSpec) -> Result<Option<&'m ArchElement>, Diagnostic> {
    if spec.format == Format::Csv && spec.kind != ReportKind::TraceMatrix {
        return Err(Diagnostic::new(
            Code::E106,
            format!("csv output is only available for trace-matrix, not {}", spec.kind),
        ));
    }
    match (spec.kind.subject_kind(), spec.subject.as_deref()) {
        (None, None) => Ok(None),
        (None, Some(id)) => Err(Diagnostic::new(
            Code::E105,
            format!("{} takes no subject, got {id}", spec.kind),
        )
        .with_element(id)),
        (Some(kind), None) => Err(Diagnostic::new(
            Code::E105,
            format!("{} requires a {kind} subject", spec.kind),
        )),
        (Some(kind), Some(id)) => {
            let e = model.require(id)?;
            if e.kind != kind {
                return Err(Diagnostic::new(
                    Code::E105,
                    format!("{} requires a {kind} subject, but {id} is a {}", spec.kind, e.kind),
                )
                .with_element(id)
                .with_span(e.src.clone()));
            }
            Ok(Some(e))
        }
    }
}

pub fn render(model: &ArchitectureModel, spec: &ReportSpec) -> Result<String, Diagnostic> {
    render_with(model, spec, Execution::default())
}

pub fn render_with(model: &ArchitectureModel, spec: &ReportSpec, exec: Execution) -> Result<String, Diagnostic> {
    let subject = check_spec(model, spec)?;
    let (title, sections) = match (spec.kind, subject) {
        (ReportKind::TraceMatrix, _) => {
            let rows = trace_matrix(model);
            if spec.format == Format::Csv {
                return Ok(render::csv(&MATRIX_COLUMNS, &rows));
            }
            let section = Section {
                heading: "Trace matrix".to_string(),
                intro: None,
                header: &MATRIX_COLUMNS,
                rows,
            };
            (section.heading.clone(), vec![section])
        }
        (ReportKind::FullBook, _) => {
            let dialogs = sorted_by_id(model, ElementKind::Dialog);
            let viewfns = sorted_by_id(model, ElementKind::ViewFunction);
            let modules = sorted_by_id(model, ElementKind::Module);
            let mut sections = par::map(exec, &dialogs, |d| dialog_section(model, d));
            sections.extend(par::map(exec, &viewfns, |v| viewfn_section(model, v)));
            sections.extend(par::map(exec, &modules, |m| module_section(model, m)));
            let title = if model.meta().name.is_empty() {
                "Architecture documentation".to_string()
            } else {
                model.meta().name.clone()
            };
            (title, sections)
        }
        (kind, Some(e)) => {
            let section = match kind {
                ReportKind::DialogReport => dialog_section(model, e),
                ReportKind::ViewfnModules => viewfn_section(model, e),
                _ => module_section(model, e),
            };
            (section.heading.clone(), vec![section])
        }
        (_, None) => unreachable!("subject checked above"),
    };
    Ok(match spec.format {
        Format::Html => render::html(&title, &sections),
        _ => render::markdown(&sections),
    })
}
