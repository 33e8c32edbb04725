use crate::model::{ArchElement, ArchitectureModel, ElementKind, LinkKind};

pub const MATRIX_COLUMNS: [&str; 6] = ["operation", "service", "dialog", "viewfn", "module", "method"];

const KINDS: [ElementKind; 6] = [
    ElementKind::BusinessOperation,
    ElementKind::OperationalService,
    ElementKind::Dialog,
    ElementKind::ViewFunction,
    ElementKind::Module,
    ElementKind::Method,
];

fn of_kind(v: Vec<&ArchElement>, kind: ElementKind) -> Vec<&ArchElement> {
    v.into_iter().filter(|e| e.kind == kind).collect()
}

/// Elements in column `col + 1` that continue a chain through `e`.
fn next<'m>(model: &'m ArchitectureModel, col: usize, e: &ArchElement) -> Vec<&'m ArchElement> {
    match col {
        0 => model.sources_of(&e.id, LinkKind::Implements),
        1 | 2 => of_kind(model.children(&e.id), KINDS[col + 1]),
        3 | 4 => model.sources_of(&e.id, LinkKind::Realizes),
        _ => Vec::new(),
    }
}

fn has_prev(model: &ArchitectureModel, col: usize, e: &ArchElement) -> bool {
    match col {
        1 => !model.targets_of(&e.id, LinkKind::Implements).is_empty(),
        2 | 3 => model.parent(&e.id).is_some_and(|p| p.kind == KINDS[col - 1]),
        4 | 5 => !model.targets_of(&e.id, LinkKind::Realizes).is_empty(),
        _ => false,
    }
}

/// Every maximal derivation path through the six matrix columns, padded
/// with empty cells and sorted.
pub fn trace_matrix(model: &ArchitectureModel) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (col, &kind) in KINDS.iter().enumerate() {
        for start in model.elements_of(kind) {
            if has_prev(model, col, start) {
                continue;
            }
            let mut row = vec![String::new(); KINDS.len()];
            walk(model, col, start, &mut row, &mut rows);
        }
    }
    rows.sort();
    rows
}

fn walk(
    model: &ArchitectureModel,
    col: usize,
    e: &ArchElement,
    row: &mut Vec<String>,
    rows: &mut Vec<Vec<String>>,
) {
    row[col] = e.id.clone();
    let next = next(model, col, e);
    if next.is_empty() {
        rows.push(row.clone());
    } else {
        for n in next {
            walk(model, col + 1, n, row, rows);
        }
    }
    row[col].clear();
}
