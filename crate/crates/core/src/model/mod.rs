//! The layered metamodel and the immutable, resolved model graph.

mod canonical;
mod kinds;

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::diagnostic::{Code, Diagnostic, SourceSpan};

pub use canonical::{export_canonical, import_canonical};
pub use kinds::{Direction, ElementKind, Layer, LinkKind};

pub const ATTR_DESC: &str = "desc";
pub const ATTR_FORM: &str = "form";
pub const ATTR_PARAMS: &str = "params";
pub const ATTR_KIND_TAG: &str = "kind-tag";

/// True for tokens matching `[A-Za-z][A-Za-z0-9_.]*`.
pub fn is_valid_id(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchElement {
    pub id: String,
    pub kind: ElementKind,
    pub name: String,
    pub attrs: BTreeMap<String, String>,
    pub src: Option<SourceSpan>,
}

impl ArchElement {
    pub fn new(id: impl Into<String>, kind: ElementKind, name: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            kind,
            name: name.into(),
            attrs: BTreeMap::new(),
            src: None,
        }
    }

    pub fn with_attr(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.attrs.insert(key.into(), value.into());
        self
    }

    pub fn with_src(mut self, src: Option<SourceSpan>) -> Self {
        self.src = src;
        self
    }

    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attrs.get(key).map(String::as_str)
    }

    pub fn layer(&self) -> Layer {
        self.kind.layer()
    }

    /// Parameter list stored in the `params` attribute, split on commas.
    pub fn params(&self) -> Vec<&str> {
        self.attr(ATTR_PARAMS)
            .map(|p| p.split(',').map(str::trim).filter(|s| !s.is_empty()).collect())
            .unwrap_or_default()
    }
}

/// A directed, typed edge. When `external` is set the link is a `FlowsTo`
/// whose `to` is free text naming something outside the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub from: String,
    pub to: String,
    pub kind: LinkKind,
    pub external: bool,
    pub src: Option<SourceSpan>,
}

impl Link {
    pub fn new(from: impl Into<String>, to: impl Into<String>, kind: LinkKind) -> Self {
        Self {
            from: from.into(),
            to: to.into(),
            kind,
            external: false,
            src: None,
        }
    }

    pub fn external_flow(from: impl Into<String>, target: impl Into<String>) -> Self {
        Self {
            external: true,
            ..Link::new(from, target, LinkKind::FlowsTo)
        }
    }

    pub fn with_src(mut self, src: Option<SourceSpan>) -> Self {
        self.src = src;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub name: String,
    pub version: String,
}

impl Default for Meta {
    fn default() -> Self {
        Self {
            name: String::new(),
            version: "1".to_string(),
        }
    }
}

/// A sealed model: every link endpoint resolves, every link is legal for its
/// endpoint kinds and containment forms a forest.
///
/// Elements keep the order they were supplied in, which for parsed models is
/// declaration order.
#[derive(Debug, Clone)]
pub struct ArchitectureModel {
    meta: Meta,
    elements: Vec<ArchElement>,
    index: HashMap<String, usize>,
    links: Vec<Link>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
}

impl Default for ArchitectureModel {
    fn default() -> Self {
        build_model(Vec::new(), Vec::new()).expect("empty model is valid")
    }
}

/// Builds a model with default metadata.
pub fn build_model(
    elements: Vec<ArchElement>,
    links: Vec<Link>,
) -> Result<ArchitectureModel, Vec<Diagnostic>> {
    build_model_with_meta(Meta::default(), elements, links)
}

/// Resolves and checks raw elements and links, reporting every violation
/// found rather than stopping at the first.
pub fn build_model_with_meta(
    meta: Meta,
    elements: Vec<ArchElement>,
    links: Vec<Link>,
) -> Result<ArchitectureModel, Vec<Diagnostic>> {
    let mut diags = Vec::new();

    let mut kept = Vec::with_capacity(elements.len());
    let mut index: HashMap<String, usize> = HashMap::with_capacity(elements.len());
    let mut duplicated = HashSet::new();
    for element in elements {
        check_element(&element, &mut diags);
        if let Some(&first) = index.get(&element.id) {
            let first: &ArchElement = &kept[first];
            let mut msg = format!("duplicate element id {}", element.id);
            if let Some(src) = &first.src {
                msg.push_str(&format!(" (first declared at {src})"));
            }
            diags.push(
                Diagnostic::new(Code::E001, msg)
                    .with_element(&element.id)
                    .with_span(element.src.clone()),
            );
            duplicated.insert(element.id);
            continue;
        }
        index.insert(element.id.clone(), kept.len());
        kept.push(element);
    }

    let mut seen = HashSet::new();
    let mut resolved = Vec::with_capacity(links.len());
    for link in links {
        if !check_link(&link, &kept, &index, &mut diags) {
            continue;
        }
        let key = (link.from.clone(), link.to.clone(), link.kind, link.external);
        if seen.insert(key) {
            resolved.push(link);
        }
    }

    let n = kept.len();
    let mut outgoing = vec![Vec::new(); n];
    let mut incoming = vec![Vec::new(); n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    for (li, link) in resolved.iter().enumerate() {
        let from = index[&link.from];
        outgoing[from].push(li);
        if link.external {
            continue;
        }
        let to = index[&link.to];
        incoming[to].push(li);
        if link.kind == LinkKind::Contains {
            match parent[to] {
                None => parent[to] = Some(from),
                // Already reported as E001.
                Some(_) if duplicated.contains(&link.to) => {}
                Some(existing) => diags.push(
                    Diagnostic::new(
                        Code::E005,
                        format!(
                            "element {} has two containers: {} and {}",
                            link.to, kept[existing].id, link.from
                        ),
                    )
                    .with_element(&link.to)
                    .with_span(link.src.clone()),
                ),
            }
        }
    }

    // Each node has at most one recorded parent, so a cycle shows up as a
    // parent chain that revisits a node.
    let mut state = vec![0u8; n]; // 0 unvisited, 1 on current chain, 2 done
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut chain = Vec::new();
        let mut cur = Some(start);
        while let Some(c) = cur {
            match state[c] {
                0 => {
                    state[c] = 1;
                    chain.push(c);
                    cur = parent[c];
                }
                1 => {
                    let pos = chain.iter().position(|&x| x == c).unwrap_or(0);
                    let mut ids: Vec<&str> = chain[pos..].iter().map(|&i| kept[i].id.as_str()).collect();
                    ids.sort_unstable();
                    diags.push(
                        Diagnostic::new(
                            Code::E005,
                            format!("containment cycle through {}", ids.join(", ")),
                        )
                        .with_element(ids[0])
                        .with_span(kept[index[ids[0]]].src.clone()),
                    );
                    break;
                }
                _ => break,
            }
        }
        for c in chain {
            state[c] = 2;
        }
    }

    if !diags.is_empty() {
        crate::diagnostic::sort_diagnostics(&mut diags);
        return Err(diags);
    }

    Ok(ArchitectureModel {
        meta,
        elements: kept,
        index,
        links: resolved,
        outgoing,
        incoming,
        parent,
    })
}

fn check_element(element: &ArchElement, diags: &mut Vec<Diagnostic>) {
    let mut bad = |msg: String| {
        diags.push(
            Diagnostic::new(Code::E004, msg)
                .with_element(&element.id)
                .with_span(element.src.clone()),
        )
    };
    if !is_valid_id(&element.id) {
        bad(format!("invalid element id {:?}", element.id));
    }
    if element.name.is_empty() {
        bad(format!("element {} has an empty name", element.id));
    }
    let allowed_on = |key: &str| -> bool {
        match key {
            ATTR_FORM => element.kind == ElementKind::Dialog,
            ATTR_KIND_TAG => element.kind == ElementKind::Component,
            ATTR_PARAMS => matches!(element.kind, ElementKind::Module | ElementKind::Method),
            _ => true,
        }
    };
    for key in element.attrs.keys() {
        if !allowed_on(key) {
            bad(format!(
                "attribute {key} is not allowed on {} {}",
                element.kind, element.id
            ));
        }
    }
}

fn check_link(
    link: &Link,
    elements: &[ArchElement],
    index: &HashMap<String, usize>,
    diags: &mut Vec<Diagnostic>,
) -> bool {
    let unresolved = |id: &str| {
        Diagnostic::new(Code::E002, format!("unresolved reference {id}"))
            .with_element(id)
            .with_span(link.src.clone())
    };
    let Some(&from) = index.get(&link.from) else {
        diags.push(unresolved(&link.from));
        return false;
    };
    let from_kind = elements[from].kind;
    if link.external {
        let ok = link.kind == LinkKind::FlowsTo
            && from_kind == ElementKind::ViewFunction
            && !link.to.is_empty();
        if !ok {
            diags.push(
                Diagnostic::new(
                    Code::E003,
                    format!(
                        "illegal external link {} -> {:?}: only view functions may flow to external targets",
                        link.from, link.to
                    ),
                )
                .with_element(&link.from)
                .with_span(link.src.clone()),
            );
        }
        return ok;
    }
    let Some(&to) = index.get(&link.to) else {
        diags.push(unresolved(&link.to));
        return false;
    };
    let to_kind = elements[to].kind;
    if !link.kind.allows(from_kind, to_kind) {
        diags.push(
            Diagnostic::new(
                Code::E003,
                format!(
                    "illegal link {} -> {}: {} from {from_kind} to {to_kind} is not allowed",
                    link.from, link.to, link.kind
                ),
            )
            .with_element(&link.from)
            .with_span(link.src.clone()),
        );
        return false;
    }
    true
}

impl ArchitectureModel {
    pub fn meta(&self) -> &Meta {
        &self.meta
    }

    pub fn with_meta(mut self, meta: Meta) -> Self {
        self.meta = meta;
        self
    }

    pub fn elements(&self) -> &[ArchElement] {
        &self.elements
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, id: &str) -> Option<&ArchElement> {
        self.index.get(id).map(|&i| &self.elements[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Looks up an element, failing with E101.
    pub fn require(&self, id: &str) -> Result<&ArchElement, Diagnostic> {
        self.element(id).ok_or_else(|| Diagnostic::unknown_element(id))
    }

    pub fn elements_of(&self, kind: ElementKind) -> impl Iterator<Item = &ArchElement> {
        self.elements.iter().filter(move |e| e.kind == kind)
    }

    /// The containing element, if any.
    pub fn parent(&self, id: &str) -> Option<&ArchElement> {
        let i = *self.index.get(id)?;
        self.parent[i].map(|p| &self.elements[p])
    }

    /// Contained elements in declaration order.
    pub fn children(&self, id: &str) -> Vec<&ArchElement> {
        let Some(&i) = self.index.get(id) else {
            return Vec::new();
        };
        let mut kids: Vec<usize> = self.outgoing[i]
            .iter()
            .map(|&l| &self.links[l])
            .filter(|l| l.kind == LinkKind::Contains)
            .map(|l| self.index[&l.to])
            .collect();
        kids.sort_unstable();
        kids.into_iter().map(|k| &self.elements[k]).collect()
    }

    /// Links whose `from` is `id`, including external flows.
    pub fn outgoing(&self, id: &str) -> impl Iterator<Item = &Link> {
        let list = self.index.get(id).map(|&i| self.outgoing[i].as_slice()).unwrap_or(&[]);
        list.iter().map(|&l| &self.links[l])
    }

    /// Links whose `to` is `id`.
    pub fn incoming(&self, id: &str) -> impl Iterator<Item = &Link> {
        let list = self.index.get(id).map(|&i| self.incoming[i].as_slice()).unwrap_or(&[]);
        list.iter().map(|&l| &self.links[l])
    }

    /// Elements with a `kind` link into `id`, i.e. the sources of
    /// `source -kind-> id`, in declaration order.
    pub fn sources_of(&self, id: &str, kind: LinkKind) -> Vec<&ArchElement> {
        let mut idx: Vec<usize> = self
            .incoming(id)
            .filter(|l| l.kind == kind)
            .map(|l| self.index[&l.from])
            .collect();
        idx.sort_unstable();
        idx.into_iter().map(|i| &self.elements[i]).collect()
    }

    /// Resolved targets of `id -kind-> target`, in declaration order.
    pub fn targets_of(&self, id: &str, kind: LinkKind) -> Vec<&ArchElement> {
        let mut idx: Vec<usize> = self
            .outgoing(id)
            .filter(|l| l.kind == kind && !l.external)
            .map(|l| self.index[&l.to])
            .collect();
        idx.sort_unstable();
        idx.into_iter().map(|i| &self.elements[i]).collect()
    }

    /// The operational service an automated function, dialog or view
    /// function ultimately belongs to.
    pub fn owning_service(&self, id: &str) -> Option<&ArchElement> {
        let mut cur = self.element(id)?;
        loop {
            if cur.kind == ElementKind::OperationalService {
                return Some(cur);
            }
            cur = self.parent(&cur.id)?;
        }
    }

    pub(crate) fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub(crate) fn element_at(&self, i: usize) -> &ArchElement {
        &self.elements[i]
    }

    /// Single-step neighbours by index, unsorted; may repeat a target when
    /// two links of different kinds connect the same pair.
    pub(crate) fn step(
        &self,
        i: usize,
        direction: Direction,
        filter: Option<&[LinkKind]>,
        mut visit: impl FnMut(usize, LinkKind),
    ) {
        let wanted = |k: LinkKind| filter.is_none_or(|f| f.contains(&k));
        for &li in &self.outgoing[i] {
            let link = &self.links[li];
            if link.external || !wanted(link.kind) {
                continue;
            }
            if link.kind.points_down() == (direction == Direction::Down) {
                visit(self.index[&link.to], link.kind);
            }
        }
        for &li in &self.incoming[i] {
            let link = &self.links[li];
            if !wanted(link.kind) {
                continue;
            }
            if link.kind.points_down() != (direction == Direction::Down) {
                visit(self.index[&link.from], link.kind);
            }
        }
    }
}

/// One derivation step from `id`: `Down` yields contained elements and the
/// elements that implement, cover or realize `id`; `Up` is the exact inverse.
/// `FlowsTo` counts as a downward step from the view function to its target
/// dialog. Sorted by element id, then link kind.
pub fn neighbors<'m>(
    model: &'m ArchitectureModel,
    id: &str,
    direction: Direction,
    kinds: Option<&[LinkKind]>,
) -> Result<Vec<(&'m ArchElement, LinkKind)>, Diagnostic> {
    let i = model.position(id).ok_or_else(|| Diagnostic::unknown_element(id))?;
    let mut out = Vec::new();
    model.step(i, direction, kinds, |j, kind| out.push((model.element_at(j), kind)));
    out.sort_by(|a, b| (&a.0.id, a.1).cmp(&(&b.0.id, b.1)));
    out.dedup_by(|a, b| a.0.id == b.0.id && a.1 == b.1);
    Ok(out)
}

/// Canonical sort order for links: by `(from, to, kind name)`, then internal
/// before external.
pub(crate) fn link_order(a: &Link, b: &Link) -> std::cmp::Ordering {
    (&a.from, &a.to, a.kind.name(), a.external).cmp(&(&b.from, &b.to, b.kind.name(), b.external))
}
