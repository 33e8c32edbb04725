use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::model::{ArchElement, ArchitectureModel};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ModelDiff {
    pub added: BTreeSet<String>,
    pub removed: BTreeSet<String>,
    pub modified: BTreeSet<String>,
    pub impact: BTreeSet<String>,
}

impl ModelDiff {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty() && self.modified.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (mark, set) in [("+", &self.added), ("-", &self.removed), ("~", &self.modified)] {
            for id in set {
                out.push_str(&format!("{mark} {id}\n"));
            }
        }
        for id in &self.impact {
            out.push_str(&format!("! {id}\n"));
        }
        out
    }
}

type LinkSig<'m> = (&'m str, &'m str, &'static str, bool);

fn incident(model: &ArchitectureModel) -> HashMap<&str, Vec<LinkSig<'_>>> {
    let mut out: HashMap<&str, Vec<LinkSig<'_>>> = HashMap::new();
    for l in model.links() {
        let sig = (l.from.as_str(), l.to.as_str(), l.kind.name(), l.external);
        out.entry(l.from.as_str()).or_default().push(sig);
        if !l.external && l.to != l.from {
            out.entry(l.to.as_str()).or_default().push(sig);
        }
    }
    for v in out.values_mut() {
        v.sort_unstable();
    }
    out
}

fn same_element(a: &ArchElement, b: &ArchElement) -> bool {
    a.kind == b.kind && a.name == b.name && a.attrs == b.attrs
}

/// Compares two model versions by element id.
pub fn diff(old: &ArchitectureModel, new: &ArchitectureModel) -> ModelDiff {
    let old_links = incident(old);
    let new_links = incident(new);
    let none = Vec::new();
    let mut d = ModelDiff::default();

    for e in new.elements() {
        match old.element(&e.id) {
            None => {
                d.added.insert(e.id.clone());
            }
            Some(prev) => {
                let before = old_links.get(e.id.as_str()).unwrap_or(&none);
                let after = new_links.get(e.id.as_str()).unwrap_or(&none);
                if !same_element(prev, e) || before != after {
                    d.modified.insert(e.id.clone());
                }
            }
        }
    }
    for e in old.elements() {
        if !new.contains(&e.id) {
            d.removed.insert(e.id.clone());
        }
    }

    let changed: Vec<usize> = d
        .added
        .iter()
        .chain(&d.modified)
        .filter_map(|id| new.position(id))
        .collect();
    let gone: Vec<usize> = d.removed.iter().filter_map(|id| old.position(id)).collect();
    d.impact = super::impact_of_positions(new, &changed);
    d.impact.extend(super::impact_of_positions(old, &gone));
    d
}
