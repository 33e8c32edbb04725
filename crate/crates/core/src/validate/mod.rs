//! Derivation-completeness rules.
//!
//! Gaps are elements nothing more detailed derives from; orphans are
//! elements that derive from nothing. Every rule is a pure function of the
//! model and looks only at kinds and links, never at names or prose.

mod config;

use crate::diagnostic::{Code, Diagnostic, Severity};
use crate::model::{ArchElement, ArchitectureModel, ElementKind, LinkKind};
use crate::par::{self, Execution};

pub use config::RuleConfig;

/// Outcome classes for CI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitStatus {
    Clean = 0,
    Warnings = 1,
    Errors = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

type Rule = fn(&ArchitectureModel) -> Vec<Diagnostic>;

const RULES: &[Rule] = &[
    uncovered_automated_functions,
    unrealized_view_functions,
    unrealized_modules,
    orphan_modules,
    orphan_methods,
    empty_dialogs,
    services_without_dialogs,
    services_without_operation,
    classes_without_methods,
    operations_without_service,
    implicit_coverage,
    cross_service_coverage,
];

pub fn validate(model: &ArchitectureModel, config: &RuleConfig) -> Vec<Diagnostic> {
    validate_with(model, config, Execution::default())
}

pub fn validate_with(model: &ArchitectureModel, config: &RuleConfig, exec: Execution) -> Vec<Diagnostic> {
    config.apply(findings(model, exec))
}

/// Every rule hit at its default severity, unsorted.
pub(crate) fn findings(model: &ArchitectureModel, exec: Execution) -> Vec<Diagnostic> {
    par::map(exec, RULES, |rule| rule(model))
        .into_iter()
        .flatten()
        .collect()
}

/// 2 if any error remains after overrides, 1 if any warning, else 0.
pub fn exit_status(diags: &[Diagnostic], config: &RuleConfig) -> ExitStatus {
    let applied = config.apply(diags.iter().cloned());
    if applied.iter().any(|d| d.severity == Severity::Error) {
        ExitStatus::Errors
    } else if applied.iter().any(|d| d.severity == Severity::Warning) {
        ExitStatus::Warnings
    } else {
        ExitStatus::Clean
    }
}

fn hit(code: Code, element: &ArchElement, message: String) -> Diagnostic {
    Diagnostic::new(code, message)
        .with_element(&element.id)
        .with_span(element.src.clone())
}

fn each<'m>(
    model: &'m ArchitectureModel,
    kind: ElementKind,
    code: Code,
    pred: impl Fn(&'m ArchElement) -> bool,
    message: impl Fn(&ArchElement) -> String,
) -> Vec<Diagnostic> {
    model
        .elements_of(kind)
        .filter(|e| pred(e))
        .map(|e| hit(code, e, message(e)))
        .collect()
}

fn has_incoming(model: &ArchitectureModel, id: &str, kind: LinkKind) -> bool {
    model.incoming(id).any(|l| l.kind == kind)
}

fn has_outgoing(model: &ArchitectureModel, id: &str, kind: LinkKind) -> bool {
    model.outgoing(id).any(|l| l.kind == kind && !l.external)
}

fn has_child(model: &ArchitectureModel, id: &str, kind: ElementKind) -> bool {
    model.children(id).iter().any(|c| c.kind == kind)
}

fn service_id<'m>(model: &'m ArchitectureModel, id: &str) -> Option<&'m str> {
    model.owning_service(id).map(|s| s.id.as_str())
}

/// W101
fn uncovered_automated_functions(model: &ArchitectureModel) -> Vec<Diagnostic> {
    each(
        model,
        ElementKind::AutomatedFunction,
        Code::W101,
        |af| {
            let own = service_id(model, &af.id);
            own.is_none()
                || !model
                    .sources_of(&af.id, LinkKind::Covers)
                    .iter()
                    .any(|vf| service_id(model, &vf.id) == own)
        },
        |af| format!("automated function {} is not covered by any view function of its service", af.id),
    )
}

/// W102
fn unrealized_view_functions(model: &ArchitectureModel) -> Vec<Diagnostic> {
    each(
        model,
        ElementKind::ViewFunction,
        Code::W102,
        |vf| !has_incoming(model, &vf.id, LinkKind::Realizes),
        |vf| format!("view function {} is not realized by any module", vf.id),
    )
}

/// W103
fn unrealized_modules(model: &ArchitectureModel) -> Vec<Diagnostic> {
    each(
        model,
        ElementKind::Module,
        Code::W103,
        |m| !has_incoming(model, &m.id, LinkKind::Realizes),
        |m| format!("module {} is not realized by any method", m.id),
    )
}

/// W104
fn orphan_modules(model: &ArchitectureModel) -> Vec<Diagnostic> {
    each(
        model,
        ElementKind::Module,
        Code::W104,
        |m| !has_outgoing(model, &m.id, LinkKind::Realizes),
        |m| format!("module {} realizes no view function", m.id),
    )
}

/// W105
fn orphan_methods(model: &ArchitectureModel) -> Vec<Diagnostic> {
    each(
        model,
        ElementKind::Method,
        Code::W105,
        |m| !has_outgoing(model, &m.id, LinkKind::Realizes),
        |m| format!("method {} realizes no module", m.id),
    )
}

/// W106
fn empty_dialogs(model: &ArchitectureModel) -> Vec<Diagnostic> {
    each(
        model,
        ElementKind::Dialog,
        Code::W106,
        |d| !has_child(model, &d.id, ElementKind::ViewFunction),
        |d| format!("dialog {} contains no view functions", d.id),
    )
}

/// W107
fn services_without_dialogs(model: &ArchitectureModel) -> Vec<Diagnostic> {
    each(
        model,
        ElementKind::OperationalService,
        Code::W107,
        |s| !has_child(model, &s.id, ElementKind::Dialog),
        |s| format!("operational service {} contains no dialogs", s.id),
    )
}

/// W108
fn services_without_operation(model: &ArchitectureModel) -> Vec<Diagnostic> {
    each(
        model,
        ElementKind::OperationalService,
        Code::W108,
        |s| !has_outgoing(model, &s.id, LinkKind::Implements),
        |s| format!("operational service {} implements no business operation", s.id),
    )
}

/// W109
fn classes_without_methods(model: &ArchitectureModel) -> Vec<Diagnostic> {
    each(
        model,
        ElementKind::Class,
        Code::W109,
        |c| !has_child(model, &c.id, ElementKind::Method),
        |c| format!("class {} contains no methods", c.id),
    )
}

/// I201
fn operations_without_service(model: &ArchitectureModel) -> Vec<Diagnostic> {
    each(
        model,
        ElementKind::BusinessOperation,
        Code::I201,
        |op| !has_incoming(model, &op.id, LinkKind::Implements),
        |op| format!("business operation {} has no operational service", op.id),
    )
}

/// I202
fn implicit_coverage(model: &ArchitectureModel) -> Vec<Diagnostic> {
    each(
        model,
        ElementKind::ViewFunction,
        Code::I202,
        |vf| {
            !has_outgoing(model, &vf.id, LinkKind::Covers)
                && model
                    .owning_service(&vf.id)
                    .is_some_and(|s| has_child(model, &s.id, ElementKind::AutomatedFunction))
        },
        |vf| format!("view function {} does not name the automated functions it covers", vf.id),
    )
}

/// E110
fn cross_service_coverage(model: &ArchitectureModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for vf in model.elements_of(ElementKind::ViewFunction) {
        let Some(own) = service_id(model, &vf.id) else { continue };
        for af in model.targets_of(&vf.id, LinkKind::Covers) {
            match service_id(model, &af.id) {
                Some(other) if other != own => out.push(hit(
                    Code::E110,
                    vf,
                    format!(
                        "view function {} of service {own} covers automated function {} of service {other}",
                        vf.id, af.id
                    ),
                )),
                _ => {}
            }
        }
    }
    out
}
