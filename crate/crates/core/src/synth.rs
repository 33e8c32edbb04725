//! Seeded generator of syntactically valid `.arch` sources, for tests and
//! benchmarks.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::docgen::emit::quote;
use crate::model::ElementKind;
use crate::parser::SourceFile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthOptions {
    pub seed: u64,
    /// Exact number of elements generated.
    pub elements: usize,
    /// Top-level declarations are spread round-robin over this many files.
    pub files: usize,
    /// Probability that a derivation link which would normally be written
    /// is left out.
    pub defect_rate: f64,
}

impl Default for SynthOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            elements: 100,
            files: 1,
            defect_rate: 0.1,
        }
    }
}

struct Node {
    id: String,
    kind: ElementKind,
    name: String,
    parent: Option<usize>,
    children: Vec<usize>,
    desc: Option<String>,
    params: Option<Vec<String>>,
}

const KINDS: [(ElementKind, u32); 11] = [
    (ElementKind::BusinessProcess, 1),
    (ElementKind::BusinessFunction, 3),
    (ElementKind::BusinessOperation, 6),
    (ElementKind::OperationalService, 4),
    (ElementKind::AutomatedFunction, 6),
    (ElementKind::Dialog, 5),
    (ElementKind::ViewFunction, 12),
    (ElementKind::Component, 2),
    (ElementKind::Module, 10),
    (ElementKind::Class, 4),
    (ElementKind::Method, 14),
];

fn slot(kind: ElementKind) -> usize {
    KINDS.iter().position(|&(k, _)| k == kind).unwrap_or(0)
}

fn prefix(kind: ElementKind) -> &'static str {
    use ElementKind::*;
    match kind {
        BusinessProcess => "BP",
        BusinessFunction => "F",
        BusinessOperation => "OP",
        OperationalService => "S",
        AutomatedFunction => "AF",
        Dialog => "D",
        ViewFunction => "VF",
        Component => "C",
        Module => "M",
        Class => "K",
        Method => "X",
    }
}

/// Kinds that may hold an element of `kind`; empty for roots.
fn parent_kinds(kind: ElementKind) -> &'static [ElementKind] {
    use ElementKind::*;
    match kind {
        BusinessFunction => &[BusinessProcess, BusinessFunction],
        BusinessOperation => &[BusinessFunction],
        AutomatedFunction | Dialog => &[OperationalService],
        ViewFunction => &[Dialog],
        Module | Class => &[Component],
        Method => &[Class],
        _ => &[],
    }
}

const WORDS: [&str; 12] = [
    "status", "Vehicle", "check", "dialog", "\"quoted\"", "back\\slash", "ünïcödé", "регистрация", "a|b",
    "<tag>", "&", "x",
];

fn text(rng: &mut ChaCha8Rng, max_words: usize) -> String {
    let n = rng.gen_range(1..=max_words);
    let mut out = String::new();
    for i in 0..n {
        if i > 0 {
            out.push(if rng.gen_bool(0.1) { '\n' } else { ' ' });
        }
        out.push_str(WORDS.choose(rng).copied().unwrap_or("x"));
    }
    out
}

struct Gen {
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
    by_kind: Vec<Vec<usize>>,
    defect_rate: f64,
}

impl Gen {
    fn of(&self, kind: ElementKind) -> &[usize] {
        &self.by_kind[slot(kind)]
    }

    fn pick(&mut self, kind: ElementKind) -> Option<usize> {
        self.by_kind[slot(kind)].choose(&mut self.rng).copied()
    }

    fn keep(&mut self) -> bool {
        !self.rng.gen_bool(self.defect_rate)
    }

    fn add(&mut self, kind: ElementKind) {
        let i = self.nodes.len();
        let parents = parent_kinds(kind);
        let parent = if parents.is_empty() {
            None
        } else {
            let candidates: Vec<usize> = parents.iter().flat_map(|&k| self.of(k).to_vec()).collect();
            candidates.choose(&mut self.rng).copied()
        };
        let realizer = matches!(kind, ElementKind::Module | ElementKind::Method);
        let id = format!("{}{i}", prefix(kind));
        let name = if realizer { id.clone() } else { text(&mut self.rng, 4) };
        let desc = (matches!(
            kind,
            ElementKind::BusinessOperation | ElementKind::ViewFunction | ElementKind::Module | ElementKind::Method
        ) && self.rng.gen_bool(0.5))
        .then(|| text(&mut self.rng, 12));
        let params = (realizer && self.rng.gen_bool(0.5)).then(|| {
            let n = self.rng.gen_range(0..=3);
            (0..n).map(|k| format!("P{k}_{}", self.rng.gen_range(0..100))).collect()
        });
        if let Some(p) = parent {
            self.nodes[p].children.push(i);
        }
        self.nodes.push(Node {
            id,
            kind,
            name,
            parent,
            children: Vec::new(),
            desc,
            params,
        });
        self.by_kind[slot(kind)].push(i);
    }

    fn feasible(&self, kind: ElementKind) -> bool {
        let parents = parent_kinds(kind);
        let has_parent = parents.is_empty() || parents.iter().any(|&k| !self.of(k).is_empty());
        has_parent && (kind != ElementKind::OperationalService || !self.of(ElementKind::BusinessOperation).is_empty())
    }
}

/// Generates sources for a random model of exactly `options.elements`
/// elements. Every output parses without errors; warnings depend on
/// `defect_rate` and chance.
pub fn generate(options: &SynthOptions) -> Vec<SourceFile> {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(options.seed),
        nodes: Vec::with_capacity(options.elements),
        by_kind: vec![Vec::new(); KINDS.len()],
        defect_rate: options.defect_rate.clamp(0.0, 1.0),
    };
    while g.nodes.len() < options.elements {
        let options: Vec<(ElementKind, u32)> = KINDS.iter().copied().filter(|&(k, _)| g.feasible(k)).collect();
        let dist = WeightedIndex::new(options.iter().map(|&(_, w)| w)).expect("roots are always feasible");
        let kind = options[dist.sample(&mut g.rng)].0;
        g.add(kind);
    }

    let files = options.files.max(1);
    let mut texts = vec![String::new(); files];
    let roots: Vec<usize> = (0..g.nodes.len())
        .filter(|&i| parent_kinds(g.nodes[i].kind).is_empty() || g.nodes[i].kind == ElementKind::Class)
        .collect();
    for (n, &root) in roots.iter().enumerate() {
        let mut out = String::new();
        if g.rng.gen_bool(0.1) {
            out.push_str("# generated\n");
        }
        write_node(&mut g, root, 0, &mut out);
        let file = &mut texts[n % files];
        file.push_str(&out);
        file.push('\n');
    }
    texts
        .into_iter()
        .enumerate()
        .map(|(i, text)| SourceFile::new(format!("synth{i}.arch"), text))
        .collect()
}

fn refs(g: &Gen, ids: &[usize]) -> String {
    ids.iter().map(|&i| g.nodes[i].id.as_str()).collect::<Vec<_>>().join(", ")
}

fn sample(g: &mut Gen, pool: &[usize], max: usize) -> Vec<usize> {
    let n = g.rng.gen_range(1..=max).min(pool.len());
    pool.choose_multiple(&mut g.rng, n).copied().collect()
}

fn write_node(g: &mut Gen, i: usize, depth: usize, out: &mut String) {
    use ElementKind::*;
    let pad = "  ".repeat(depth);
    let kind = g.nodes[i].kind;
    let id = g.nodes[i].id.clone();
    let name = quote(&g.nodes[i].name);
    let children = g.nodes[i].children.clone();
    let mut head = match kind {
        BusinessProcess => format!("process {id} {name}"),
        BusinessFunction => format!("function {id} {name}"),
        BusinessOperation => format!("operation {id} {name}"),
        OperationalService => {
            let op = g.pick(BusinessOperation).expect("feasibility checked");
            format!("service {id} {name} implements {}", g.nodes[op].id)
        }
        AutomatedFunction => format!("autofn {id} {name}"),
        Dialog => format!("dialog {id} {name}"),
        ViewFunction => {
            let mut h = format!("viewfn {id} {name}");
            let service = g.nodes[i].parent.and_then(|d| g.nodes[d].parent);
            let afs: Vec<usize> = service
                .map(|s| g.nodes[s].children.iter().copied().filter(|&c| g.nodes[c].kind == AutomatedFunction).collect())
                .unwrap_or_default();
            if !afs.is_empty() && g.keep() {
                let covered = sample(g, &afs, 2);
                h.push_str(&format!(" covers {}", refs(g, &covered)));
            }
            if g.rng.gen_bool(0.2) {
                if g.rng.gen_bool(0.5) {
                    let d = g.pick(Dialog).expect("a viewfn has a dialog");
                    h.push_str(&format!(" flows -> {}", g.nodes[d].id));
                } else {
                    h.push_str(&format!(" flows -> external {}", quote(&text(&mut g.rng, 3))));
                }
            }
            h
        }
        Component => {
            let tag = if g.rng.gen_bool(0.2) { "external" } else { "subsystem" };
            format!("component {id} {name} kind {tag}")
        }
        Class => {
            let c = g.nodes[i].parent.expect("classes have components");
            format!("class {id} {name} in {}", g.nodes[c].id)
        }
        Module | Method => {
            let mut h = format!("{} {id}", if kind == Module { "module" } else { "method" });
            if let Some(p) = &g.nodes[i].params {
                h.push_str(&format!(" params({})", p.join(", ")));
            }
            let target = if kind == Module { ViewFunction } else { Module };
            let pool = g.of(target).to_vec();
            if !pool.is_empty() && g.keep() {
                let chosen = sample(g, &pool, 3);
                h.push_str(&format!(" realizes {}", refs(g, &chosen)));
            }
            h
        }
    };

    let block = matches!(
        kind,
        BusinessProcess | BusinessFunction | OperationalService | Dialog | Component | Class
    );
    if block {
        out.push_str(&format!("{pad}{head} {{\n"));
        if kind == Dialog {
            out.push_str(&format!("{pad}  form {}\n", quote(&text(&mut g.rng, 8))));
        }
        // Services list automated functions before dialogs.
        let mut ordered = children;
        ordered.sort_by_key(|&c| g.nodes[c].kind != AutomatedFunction);
        for c in ordered {
            if g.nodes[c].kind == Class {
                continue;
            }
            write_node(g, c, depth + 1, out);
        }
        out.push_str(&format!("{pad}}}\n"));
    } else if let Some(d) = g.nodes[i].desc.clone() {
        head.push_str(" {");
        out.push_str(&format!("{pad}{head}\n{pad}  desc {}\n{pad}}}\n", quote(&d)));
    } else {
        out.push_str(&format!("{pad}{head}\n"));
    }
}
