//! Traceability closures, impact sets, coverage metrics and model diffs.

mod coverage;
mod diff;

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::diagnostic::Diagnostic;
use crate::model::{ArchitectureModel, Direction, Layer, LinkKind};

pub use coverage::{coverage, coverage_with, CoverageReport, LayerCoverage};
pub use diff::{diff, ModelDiff};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceOptions {
    pub direction: Direction,
    /// `None` means unlimited.
    pub max_depth: Option<usize>,
    /// Also follow `FlowsTo` control transfers between dialogs.
    pub include_flows: bool,
}

impl TraceOptions {
    pub fn new(direction: Direction) -> Self {
        Self {
            direction,
            max_depth: None,
            include_flows: false,
        }
    }

    pub fn depth(mut self, max_depth: usize) -> Self {
        self.max_depth = Some(max_depth);
        self
    }

    pub fn with_flows(mut self, include_flows: bool) -> Self {
        self.include_flows = include_flows;
        self
    }

    fn filter(&self) -> &'static [LinkKind] {
        if self.include_flows {
            &LinkKind::STORED
        } else {
            &LinkKind::DERIVATION
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TraceNode {
    pub depth: usize,
    pub id: String,
    pub layer: Layer,
}

/// An edge in traversal orientation: `from` is the endpoint nearer the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TraceEdge {
    pub from: String,
    pub to: String,
    pub kind: LinkKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceResult {
    pub root: String,
    pub direction: Direction,
    /// Sorted by `(depth, id)`; the root is the single depth-0 node.
    pub nodes: Vec<TraceNode>,
    /// Sorted by `(from, to, kind)`.
    pub edges: Vec<TraceEdge>,
    /// A node at the depth limit still had unexplored neighbours.
    pub truncated: bool,
}

impl TraceResult {
    pub fn contains(&self, id: &str) -> bool {
        self.nodes.iter().any(|n| n.id == id)
    }

    pub fn depth_of(&self, id: &str) -> Option<usize> {
        self.nodes.iter().find(|n| n.id == id).map(|n| n.depth)
    }

    pub fn ids_at_depth(&self, depth: usize) -> Vec<&str> {
        self.nodes
            .iter()
            .filter(|n| n.depth == depth)
            .map(|n| n.id.as_str())
            .collect()
    }

    pub fn ids(&self) -> BTreeSet<&str> {
        self.nodes.iter().map(|n| n.id.as_str()).collect()
    }
}

/// Breadth-first closure from `id`. Depths are minimal hop counts.
pub fn trace(model: &ArchitectureModel, id: &str, options: TraceOptions) -> Result<TraceResult, Diagnostic> {
    let root = model.position(id).ok_or_else(|| Diagnostic::unknown_element(id))?;
    let filter = Some(options.filter());
    let mut depth: Vec<Option<usize>> = vec![None; model.len()];
    depth[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    let mut edges = BTreeSet::new();
    let mut truncated = false;

    while let Some(cur) = queue.pop_front() {
        let d = depth[cur].unwrap_or_default();
        if options.max_depth.is_some_and(|max| d >= max) {
            model.step(cur, options.direction, filter, |_, _| truncated = true);
            continue;
        }
        model.step(cur, options.direction, filter, |next, kind| {
            edges.insert(TraceEdge {
                from: model.element_at(cur).id.clone(),
                to: model.element_at(next).id.clone(),
                kind,
            });
            if depth[next].is_none() {
                depth[next] = Some(d + 1);
                queue.push_back(next);
            }
        });
    }

    let mut nodes: Vec<TraceNode> = depth
        .iter()
        .enumerate()
        .filter_map(|(i, d)| {
            d.map(|depth| {
                let e = model.element_at(i);
                TraceNode {
                    depth,
                    id: e.id.clone(),
                    layer: e.layer(),
                }
            })
        })
        .collect();
    nodes.sort();

    Ok(TraceResult {
        root: id.to_string(),
        direction: options.direction,
        nodes,
        edges: edges.into_iter().collect(),
        truncated,
    })
}

/// Multi-source reachability over derivation links.
pub(crate) fn closure(model: &ArchitectureModel, starts: &[usize], direction: Direction) -> Vec<bool> {
    let mut seen = vec![false; model.len()];
    let mut stack = Vec::with_capacity(starts.len());
    for &s in starts {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(cur) = stack.pop() {
        model.step(cur, direction, Some(&LinkKind::DERIVATION), |next, _| {
            if !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        });
    }
    seen
}

/// Elements to re-verify when `seeds` change: everything derived from the
/// seeds (their down-closure) plus every element that any of those derives
/// from (the up-closure of that set). Seeds are included.
pub fn impact<S: AsRef<str>>(model: &ArchitectureModel, seeds: &[S]) -> Result<BTreeSet<String>, Diagnostic> {
    let starts = seeds
        .iter()
        .map(|s| {
            let s = s.as_ref();
            model.position(s).ok_or_else(|| Diagnostic::unknown_element(s))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(impact_of_positions(model, &starts))
}

pub(crate) fn impact_of_positions(model: &ArchitectureModel, starts: &[usize]) -> BTreeSet<String> {
    let down = closure(model, starts, Direction::Down);
    let derived: Vec<usize> = down
        .iter()
        .enumerate()
        .filter_map(|(i, &hit)| hit.then_some(i))
        .collect();
    let up = closure(model, &derived, Direction::Up);
    up.iter()
        .enumerate()
        .filter(|(_, &hit)| hit)
        .map(|(i, _)| model.element_at(i).id.clone())
        .collect()
}
