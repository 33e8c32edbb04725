use std::collections::BTreeMap;

use serde::Serialize;

use crate::diagnostic::Code;
use crate::model::{ArchitectureModel, Direction, ElementKind, Layer, LinkKind};
use crate::par::{self, Execution};
use crate::validate;

const GAPS: [Code; 5] = [Code::W101, Code::W102, Code::W103, Code::W106, Code::W107];
const ORPHANS: [Code; 4] = [Code::W104, Code::W105, Code::W108, Code::W109];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LayerCoverage {
    pub total: usize,
    pub orphans: usize,
    pub gaps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    /// Every layer is present, including empty ones.
    pub layers: BTreeMap<Layer, LayerCoverage>,
    pub chains_complete: usize,
    pub chains_total: usize,
}

impl CoverageReport {
    pub fn layer(&self, layer: Layer) -> LayerCoverage {
        self.layers.get(&layer).copied().unwrap_or_default()
    }

    /// Plain-text table, one row per layer.
    pub fn render_table(&self) -> String {
        let mut out = format!("{:<20} {:>7} {:>7} {:>7}\n", "layer", "total", "gaps", "orphans");
        for (layer, c) in &self.layers {
            out.push_str(&format!(
                "{:<20} {:>7} {:>7} {:>7}\n",
                layer.name(),
                c.total,
                c.gaps,
                c.orphans
            ));
        }
        out.push_str(&format!("chains {}/{}\n", self.chains_complete, self.chains_total));
        out
    }
}

pub fn coverage(model: &ArchitectureModel) -> CoverageReport {
    coverage_with(model, Execution::default())
}

/// Gap and orphan counts are taken from the unconfigured rule findings, so
/// they always agree with `check` run without a rule configuration.
pub fn coverage_with(model: &ArchitectureModel, exec: Execution) -> CoverageReport {
    let mut layers: BTreeMap<Layer, LayerCoverage> =
        Layer::ALL.iter().map(|&l| (l, LayerCoverage::default())).collect();
    for e in model.elements() {
        layers.entry(e.layer()).or_default().total += 1;
    }
    for d in validate::findings(model, exec) {
        let Some(e) = d.element.as_deref().and_then(|id| model.element(id)) else {
            continue;
        };
        let c = layers.entry(e.layer()).or_default();
        if GAPS.contains(&d.code) {
            c.gaps += 1;
        } else if ORPHANS.contains(&d.code) {
            c.orphans += 1;
        }
    }

    let implemented: Vec<usize> = model
        .elements_of(ElementKind::BusinessOperation)
        .filter(|op| !model.sources_of(&op.id, LinkKind::Implements).is_empty())
        .filter_map(|op| model.position(&op.id))
        .collect();
    let complete = par::map(exec, &implemented, |&op| {
        let reach = super::closure(model, &[op], Direction::Down);
        reach
            .iter()
            .enumerate()
            .any(|(i, &hit)| hit && model.element_at(i).kind == ElementKind::Method)
    });

    CoverageReport {
        layers,
        chains_complete: complete.iter().filter(|&&c| c).count(),
        chains_total: implemented.len(),
    }
}
