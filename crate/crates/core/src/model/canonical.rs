//! Canonical JSON interchange: `meta`, `elements` sorted by id, `links`
//! sorted by `(from, to, kind)`. Source locations are not part of the format.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{build_model_with_meta, link_order, ArchElement, ArchitectureModel, Link, Meta};
use crate::diagnostic::{Code, Diagnostic, SourceSpan};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    meta: Meta,
    elements: Vec<ElementDoc>,
    links: Vec<LinkDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementDoc {
    id: String,
    kind: String,
    name: String,
    #[serde(default)]
    attrs: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkDoc {
    from: String,
    to: String,
    kind: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    external: bool,
}

/// Serializes the model as compact canonical JSON. Output is byte-stable.
pub fn export_canonical(model: &ArchitectureModel) -> Vec<u8> {
    let mut elements: Vec<&ArchElement> = model.elements().iter().collect();
    elements.sort_by(|a, b| a.id.cmp(&b.id));
    let mut links: Vec<&Link> = model.links().iter().collect();
    links.sort_by(|a, b| link_order(a, b));

    let doc = Document {
        meta: model.meta().clone(),
        elements: elements
            .into_iter()
            .map(|e| ElementDoc {
                id: e.id.clone(),
                kind: e.kind.name().to_string(),
                name: e.name.clone(),
                attrs: e.attrs.clone(),
            })
            .collect(),
        links: links
            .into_iter()
            .map(|l| LinkDoc {
                from: l.from.clone(),
                to: l.to.clone(),
                kind: l.kind.name().to_string(),
                external: l.external,
            })
            .collect(),
    };
    serde_json::to_vec(&doc).expect("canonical document serializes")
}

/// Reads a canonical JSON document back into a sealed model.
pub fn import_canonical(bytes: &[u8]) -> Result<ArchitectureModel, Vec<Diagnostic>> {
    let doc: Document = serde_json::from_slice(bytes).map_err(|err| {
        vec![Diagnostic::new(Code::E102, format!("malformed model document: {err}"))
            .with_span(Some(SourceSpan::new("<json>", err.line().max(1), err.column().max(1), 0)))]
    })?;

    let mut diags = Vec::new();
    let mut elements = Vec::with_capacity(doc.elements.len());
    for e in doc.elements {
        match e.kind.parse() {
            Ok(kind) => elements.push(ArchElement {
                id: e.id,
                kind,
                name: e.name,
                attrs: e.attrs,
                src: None,
            }),
            Err(()) => diags.push(
                Diagnostic::new(Code::E103, format!("unknown element kind {:?} for {}", e.kind, e.id))
                    .with_element(e.id),
            ),
        }
    }
    let mut links = Vec::with_capacity(doc.links.len());
    for l in doc.links {
        match l.kind.parse() {
            Ok(kind) => links.push(Link {
                from: l.from,
                to: l.to,
                kind,
                external: l.external,
                src: None,
            }),
            Err(()) => diags.push(
                Diagnostic::new(
                    Code::E103,
                    format!("unknown link kind {:?} on {} -> {}", l.kind, l.from, l.to),
                )
                .with_element(l.from),
            ),
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    build_model_with_meta(doc.meta, elements, links)
}
