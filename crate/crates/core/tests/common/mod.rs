//! Shared fixtures and independent oracles. Nothing here calls the graph
//! traversal code under test; the oracles work from raw element and link
//! lists.
#![allow(dead_code)]

pub mod mutations;
pub mod props;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use archloom::synth::{generate, SynthOptions};
use archloom::{parse, ArchitectureModel, Direction, ElementKind, LinkKind, SourceFile};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const FIXTURE_FILES: [&str; 4] = ["business.arch", "functional.arch", "components.arch", "data.arch"];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture_paths() -> Vec<PathBuf> {
    FIXTURE_FILES
        .iter()
        .map(|f| crate_dir().join("fixtures/vehreg").join(f))
        .collect()
}

/// Fixture sources named relative to the crate root.
pub fn fixture_files() -> Vec<SourceFile> {
    FIXTURE_FILES
        .iter()
        .map(|f| {
            let rel = format!("fixtures/vehreg/{f}");
            let text = std::fs::read_to_string(crate_dir().join(&rel)).expect("fixture readable");
            SourceFile::new(rel, text)
        })
        .collect()
}

pub fn fixture() -> ArchitectureModel {
    let r = parse(&fixture_files());
    r.model.unwrap_or_else(|| panic!("fixture does not parse: {:?}", r.diagnostics))
}

pub fn golden_path(name: &str) -> PathBuf {
    crate_dir().join("tests/golden").join(name)
}

pub fn set(ids: &[&str]) -> BTreeSet<String> {
    ids.iter().map(|s| s.to_string()).collect()
}

/// Legal (from, kind, to) triples, written out independently of the crate.
pub fn legal_triples() -> BTreeSet<(ElementKind, LinkKind, ElementKind)> {
    use ElementKind::*;
    use LinkKind::*;
    [
        (BusinessProcess, Contains, BusinessFunction),
        (BusinessFunction, Contains, BusinessFunction),
        (BusinessFunction, Contains, BusinessOperation),
        (OperationalService, Contains, AutomatedFunction),
        (OperationalService, Contains, Dialog),
        (Dialog, Contains, ViewFunction),
        (Component, Contains, Module),
        (Component, Contains, Class),
        (Class, Contains, Method),
        (OperationalService, Implements, BusinessOperation),
        (ViewFunction, Covers, AutomatedFunction),
        (Module, Realizes, ViewFunction),
        (Method, Realizes, Module),
        (ViewFunction, FlowsTo, Dialog),
    ]
    .into_iter()
    .collect()
}

/// Stored links as (more abstract, more detailed) pairs.
pub fn down_edges(model: &ArchitectureModel, include_flows: bool) -> Vec<(String, String, LinkKind)> {
    let mut out = Vec::new();
    for l in model.links() {
        if l.external {
            continue;
        }
        let pair = match l.kind {
            LinkKind::Contains => (l.from.clone(), l.to.clone()),
            LinkKind::FlowsTo if include_flows => (l.from.clone(), l.to.clone()),
            LinkKind::FlowsTo => continue,
            LinkKind::Implements | LinkKind::Covers | LinkKind::Realizes => (l.to.clone(), l.from.clone()),
            LinkKind::BelongsTo => continue,
        };
        out.push((pair.0, pair.1, l.kind));
    }
    out
}

fn oriented(model: &ArchitectureModel, direction: Direction, include_flows: bool) -> Vec<(String, String)> {
    down_edges(model, include_flows)
        .into_iter()
        .map(|(a, b, _)| if direction == Direction::Down { (a, b) } else { (b, a) })
        .collect()
}

/// Minimal hop depth of everything reachable from `seeds`, by relaxing
/// every edge until nothing changes.
pub fn depths(
    model: &ArchitectureModel,
    seeds: &[&str],
    direction: Direction,
    include_flows: bool,
) -> BTreeMap<String, usize> {
    let edges = oriented(model, direction, include_flows);
    let mut d: BTreeMap<String, usize> = seeds.iter().map(|s| (s.to_string(), 0)).collect();
    loop {
        let mut changed = false;
        for (a, b) in &edges {
            if let Some(&da) = d.get(a) {
                let better = d.get(b).is_none_or(|&db| da + 1 < db);
                if better {
                    d.insert(b.clone(), da + 1);
                    changed = true;
                }
            }
        }
        if !changed {
            return d;
        }
    }
}

pub fn closure(model: &ArchitectureModel, seeds: &[&str], direction: Direction, include_flows: bool) -> BTreeSet<String> {
    depths(model, seeds, direction, include_flows).into_keys().collect()
}

pub fn impact_oracle(model: &ArchitectureModel, seeds: &[&str]) -> BTreeSet<String> {
    let down = closure(model, seeds, Direction::Down, false);
    let down: Vec<&str> = down.iter().map(String::as_str).collect();
    closure(model, &down, Direction::Up, false)
}

pub type ElementKey = (String, ElementKind, String, BTreeMap<String, String>);
pub type LinkKey = (String, String, LinkKind, bool);

/// Model content with order, spans and metadata stripped.
pub fn content(model: &ArchitectureModel) -> (BTreeSet<ElementKey>, BTreeSet<LinkKey>) {
    let elements = model
        .elements()
        .iter()
        .map(|e| (e.id.clone(), e.kind, e.name.clone(), e.attrs.clone()))
        .collect();
    let links = model
        .links()
        .iter()
        .map(|l| (l.from.clone(), l.to.clone(), l.kind, l.external))
        .collect();
    (elements, links)
}

/// All maximal operation→service→dialog→viewfn→module→method paths, found
/// by trying every sequence of elements against the raw link list.
pub fn matrix_oracle(model: &ArchitectureModel) -> Vec<Vec<String>> {
    use ElementKind::*;
    let cols = [BusinessOperation, OperationalService, Dialog, ViewFunction, Module, Method];
    let kind_of: BTreeMap<&str, ElementKind> = model.elements().iter().map(|e| (e.id.as_str(), e.kind)).collect();
    let links: BTreeSet<(&str, &str, LinkKind)> = model
        .links()
        .iter()
        .filter(|l| !l.external)
        .map(|l| (l.from.as_str(), l.to.as_str(), l.kind))
        .collect();
    let step = |col: usize, a: &str, b: &str| -> bool {
        match col {
            0 => links.contains(&(b, a, LinkKind::Implements)),
            1 | 2 => links.contains(&(a, b, LinkKind::Contains)),
            _ => links.contains(&(b, a, LinkKind::Realizes)),
        }
    };
    let members = |col: usize| -> Vec<&str> {
        kind_of
            .iter()
            .filter(|(_, &k)| k == cols[col])
            .map(|(&id, _)| id)
            .collect()
    };
    let mut rows = Vec::new();
    for start in 0..cols.len() {
        for end in start..cols.len() {
            // Every chain of elements covering columns start..=end.
            let mut chains: Vec<Vec<&str>> = members(start).into_iter().map(|e| vec![e]).collect();
            for col in start + 1..=end {
                let mut next = Vec::new();
                for c in &chains {
                    for e in members(col) {
                        if step(col - 1, c[c.len() - 1], e) {
                            let mut c2 = c.clone();
                            c2.push(e);
                            next.push(c2);
                        }
                    }
                }
                chains = next;
            }
            for c in chains {
                let extend_left = start > 0 && members(start - 1).iter().any(|p| step(start - 1, p, c[0]));
                let extend_right = end + 1 < cols.len() && members(end + 1).iter().any(|n| step(end, c[c.len() - 1], n));
                if extend_left || extend_right {
                    continue;
                }
                let mut row = vec![String::new(); cols.len()];
                for (i, id) in c.into_iter().enumerate() {
                    row[start + i] = id.to_string();
                }
                rows.push(row);
            }
        }
    }
    rows.sort();
    rows
}

/// Random model inputs: seed, element count ≤ 50, file count, defect rate.
pub fn small_model_params() -> impl Strategy<Value = SynthOptions> {
    (any::<u64>(), 0usize..=50, 1usize..=3, 0.0f64..0.5).prop_map(|(seed, elements, files, defect_rate)| SynthOptions {
        seed,
        elements,
        files,
        defect_rate,
    })
}

pub fn synth_model(options: &SynthOptions) -> ArchitectureModel {
    let r = parse(&generate(options));
    r.model.unwrap_or_else(|| panic!("synthetic model does not parse: {:?}", r.diagnostics))
}

/// Runs `test` on `cases` inputs drawn with a fixed seed.
pub fn check_property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        rng_algorithm: RngAlgorithm::ChaCha,
        ..Config::default()
    };
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[0x5e; 32]);
    let mut runner = TestRunner::new_with_rng(config, rng);
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn ids(model: &ArchitectureModel) -> Vec<String> {
    model.elements().iter().map(|e| e.id.clone()).collect()
}

/// Frozen reports: golden file name and the report it holds.
pub fn golden_reports() -> Vec<(&'static str, archloom::ReportSpec)> {
    use archloom::{Format, ReportKind, ReportSpec};
    vec![
        ("d01_03_03.md", ReportSpec::new(ReportKind::DialogReport, Some("D01.03.03"), Format::Markdown)),
        ("vf05_modules.md", ReportSpec::new(ReportKind::ViewfnModules, Some("VF05"), Format::Markdown)),
        ("getprocessstatus_methods.md", ReportSpec::new(ReportKind::ModuleMethods, Some("GetProcessStatus"), Format::Markdown)),
        ("trace_matrix.csv", ReportSpec::new(ReportKind::TraceMatrix, None, Format::Csv)),
    ]
}

/// Compares `actual` with a golden file; `UPDATE_GOLDENS=1` rewrites it.
pub fn golden_matches(name: &str, actual: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDENS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).map_err(|e| e.to_string())?;
        std::fs::write(&path, actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!("{name} differs:\n--- golden\n{expected}\n--- actual\n{actual}"))
    }
}

pub fn run_cli(args: &[&str]) -> std::process::Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_archloom"))
        .args(args)
        .current_dir(crate_dir())
        .env_remove("ARCHLOOM_CONFIG")
        .output()
        .expect("binary runs")
}

pub fn fixture_args() -> Vec<String> {
    FIXTURE_FILES.iter().map(|f| format!("fixtures/vehreg/{f}")).collect()
}
