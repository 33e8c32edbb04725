//! Randomized properties, parameterized by case count so the acceptance
//! target can run them at full strength.

use std::collections::BTreeSet;

use archloom::docgen::{emit_dsl, render, trace_matrix, Format, ReportKind, ReportSpec};
use archloom::parser::parse_bytes;
use archloom::trace::{coverage, diff, impact, trace, TraceOptions};
use archloom::{
    build_model, export_canonical, import_canonical, neighbors, parse, validate, ArchElement, Code, Direction,
    ElementKind, Layer, Link, LinkKind, RuleConfig, SourceFile,
};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

pub const MIB: usize = 1 << 20;

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

pub fn neighbors_inversion(cases: u32) -> Result<(), String> {
    check_property(cases, small_model_params(), |opts| {
        let m = synth_model(&opts);
        for x in m.elements() {
            for dir in [Direction::Down, Direction::Up] {
                for (y, kind) in neighbors(&m, &x.id, dir, None).map_err(|d| fail(d.to_string()))? {
                    let back = neighbors(&m, &y.id, dir.reverse(), None).map_err(|d| fail(d.to_string()))?;
                    prop_assert!(
                        back.iter().any(|(z, k)| z.id == x.id && *k == kind),
                        "{} -{kind:?}-> {} not inverted",
                        x.id,
                        y.id
                    );
                }
            }
        }
        Ok(())
    })
}

/// All 11 × 11 × 5 (from kind, to kind, stored link kind) combinations.
pub fn legal_table_closure() -> Result<usize, String> {
    let legal = legal_triples();
    let mut checked = 0;
    for from in ElementKind::ALL {
        for to in ElementKind::ALL {
            for kind in LinkKind::STORED {
                let a = ArchElement::new("A", from, "a");
                let b = ArchElement::new("B", to, "b");
                let accepted = build_model(vec![a, b], vec![Link::new("A", "B", kind)]).is_ok();
                if accepted != legal.contains(&(from, kind, to)) {
                    return Err(format!("{from} -{kind}-> {to}: accepted = {accepted}"));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

pub fn canonical_round_trip(cases: u32) -> Result<(), String> {
    check_property(cases, small_model_params(), |opts| {
        let m = synth_model(&opts);
        let bytes = export_canonical(&m);
        let back = import_canonical(&bytes).map_err(|d| fail(format!("{d:?}")))?;
        prop_assert_eq!(content(&back), content(&m));
        prop_assert_eq!(export_canonical(&back), bytes);
        Ok(())
    })
}

pub fn dsl_round_trip(cases: u32) -> Result<(), String> {
    check_property(cases, small_model_params(), |opts| {
        let m = synth_model(&opts);
        let text = emit_dsl(&m).map_err(|d| fail(format!("{d:?}")))?;
        let r = parse(&[SourceFile::new("emitted.arch", text.clone())]);
        let back = r.model.ok_or_else(|| fail(format!("{:?}\n{text}", r.diagnostics)))?;
        prop_assert_eq!(content(&back), content(&m));
        let again = emit_dsl(&back).map_err(|d| fail(format!("{d:?}")))?;
        prop_assert_eq!(again, text);
        Ok(())
    })
}

pub fn trace_matches_closure(cases: u32) -> Result<(), String> {
    check_property(cases, (small_model_params(), any::<bool>()), |(opts, flows)| {
        let m = synth_model(&opts);
        for x in m.elements() {
            for dir in [Direction::Down, Direction::Up] {
                let t = trace(&m, &x.id, TraceOptions::new(dir).with_flows(flows)).map_err(|d| fail(d.to_string()))?;
                let got: std::collections::BTreeMap<String, usize> =
                    t.nodes.iter().map(|n| (n.id.clone(), n.depth)).collect();
                prop_assert_eq!(&got, &depths(&m, &[&x.id], dir, flows), "{} {:?}", x.id, dir);
                prop_assert!(!t.truncated);
                // Symmetry: y below x iff x above y.
                for y in got.keys() {
                    let rev = closure(&m, &[y], dir.reverse(), flows);
                    prop_assert!(rev.contains(&x.id));
                }
            }
        }
        Ok(())
    })
}

pub fn impact_monotone(cases: u32) -> Result<(), String> {
    let strategy = (small_model_params(), vec(any::<bool>(), 50), vec(any::<bool>(), 50));
    check_property(cases, strategy, |(opts, pick, extra)| {
        let m = synth_model(&opts);
        let all = ids(&m);
        let small: Vec<&str> = all.iter().zip(&pick).filter(|(_, &p)| p).map(|(s, _)| s.as_str()).collect();
        let large: Vec<&str> = all
            .iter()
            .zip(pick.iter().zip(&extra))
            .filter(|(_, (&p, &e))| p || e)
            .map(|(s, _)| s.as_str())
            .collect();
        let a = impact(&m, &small).map_err(|d| fail(d.to_string()))?;
        let b = impact(&m, &large).map_err(|d| fail(d.to_string()))?;
        prop_assert!(a.is_subset(&b));
        prop_assert_eq!(&a, &impact_oracle(&m, &small));
        Ok(())
    })
}

pub fn diff_laws(cases: u32) -> Result<(), String> {
    check_property(cases, (small_model_params(), small_model_params()), |(oa, ob)| {
        let a = synth_model(&oa);
        let b = synth_model(&ob);
        let same = diff(&a, &a);
        prop_assert!(same.is_empty() && same.impact.is_empty());
        let ab = diff(&a, &b);
        let ba = diff(&b, &a);
        prop_assert_eq!(&ab.added, &ba.removed);
        prop_assert_eq!(&ab.removed, &ba.added);
        prop_assert_eq!(&ab.modified, &ba.modified);
        Ok(())
    })
}

const SOUP: [&str; 40] = [
    "process", "function", "operation", "service", "implements", "autofn", "dialog", "form", "viewfn", "covers",
    "flows", "external", "component", "kind", "subsystem", "module", "params", "realizes", "class", "in", "method",
    "desc", "{", "}", "(", ")", ",", "->", "-", "\"text\"", "\"\"\"\nblock\n\"\"\"", "\"open", "\"\"\"", "# c\n",
    "\n", "VF05", "1x", "é", "\\", "@",
];

/// Inputs up to 1 MiB: either raw bytes or a soup of language tokens.
pub fn fuzz_input() -> impl Strategy<Value = (bool, u64, usize)> {
    let len = prop_oneof![0usize..=1024, 0usize..=64 * 1024, 0usize..=MIB, Just(MIB)];
    (any::<bool>(), any::<u64>(), len)
}

pub fn fuzz_bytes(soup: bool, seed: u64, len: usize) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if !soup {
        let mut b = vec![0u8; len];
        rng.fill(b.as_mut_slice());
        return b;
    }
    let mut s = String::with_capacity(len + 16);
    while s.len() < len {
        s.push_str(SOUP[rng.gen_range(0..SOUP.len())]);
        s.push(if rng.gen_bool(0.2) { '\n' } else { ' ' });
    }
    let mut b = s.into_bytes();
    b.truncate(len);
    b
}

pub fn parser_fuzz(cases: u32) -> Result<(), String> {
    check_property(cases, fuzz_input(), |(soup, seed, len)| {
        let bytes = fuzz_bytes(soup, seed, len);
        let r = parse_bytes("fuzz.arch", &bytes);
        // A result is either a model or carries at least one error.
        prop_assert!(r.model.is_some() || r.diagnostics.iter().any(|d| d.is_error()));
        Ok(())
    })
}

pub fn matrix_matches_paths(cases: u32) -> Result<(), String> {
    check_property(cases, small_model_params(), |opts| {
        let m = synth_model(&opts);
        prop_assert_eq!(trace_matrix(&m), matrix_oracle(&m));
        Ok(())
    })
}

pub fn report_row_counts(cases: u32) -> Result<(), String> {
    check_property(cases, small_model_params(), |opts| {
        let m = synth_model(&opts);
        for (kind, subject_kind) in [
            (ReportKind::ViewfnModules, ElementKind::ViewFunction),
            (ReportKind::ModuleMethods, ElementKind::Module),
        ] {
            for e in m.elements().iter().filter(|e| e.kind == subject_kind) {
                let md = render(&m, &ReportSpec::new(kind, Some(&e.id), Format::Markdown))
                    .map_err(|d| fail(d.to_string()))?;
                let rows = md.lines().filter(|l| l.starts_with('|')).count() - 2;
                let expected = neighbors(&m, &e.id, Direction::Down, Some(&[LinkKind::Realizes]))
                    .map_err(|d| fail(d.to_string()))?
                    .len();
                prop_assert_eq!(rows, expected, "{}", e.id);
            }
        }
        Ok(())
    })
}

pub fn coverage_matches_rules(cases: u32) -> Result<(), String> {
    const GAPS: [Code; 5] = [Code::W101, Code::W102, Code::W103, Code::W106, Code::W107];
    const ORPHANS: [Code; 4] = [Code::W104, Code::W105, Code::W108, Code::W109];
    check_property(cases, small_model_params(), |opts| {
        let m = synth_model(&opts);
        let report = coverage(&m);
        let diags = validate(&m, &RuleConfig::default());
        let layer_of = |d: &archloom::Diagnostic| m.element(d.element.as_deref().unwrap_or("")).map(|e| e.layer());
        for layer in Layer::ALL {
            let c = report.layer(layer);
            let gaps = diags.iter().filter(|d| GAPS.contains(&d.code) && layer_of(d) == Some(layer)).count();
            let orphans = diags.iter().filter(|d| ORPHANS.contains(&d.code) && layer_of(d) == Some(layer)).count();
            prop_assert_eq!((c.gaps, c.orphans), (gaps, orphans), "{}", layer);
            prop_assert!(c.gaps <= c.total && c.orphans <= c.total);
            prop_assert_eq!(c.total, m.elements().iter().filter(|e| e.layer() == layer).count());
        }
        prop_assert!(report.chains_complete <= report.chains_total);
        Ok(())
    })
}

pub fn html_well_formed(cases: u32) -> Result<(), String> {
    check_property(cases, small_model_params(), |opts| {
        let m = synth_model(&opts);
        let html = render(&m, &ReportSpec::new(ReportKind::FullBook, None, Format::Html)).map_err(|d| fail(d.to_string()))?;
        let mut stack: Vec<String> = Vec::new();
        let mut rest = html.as_str();
        while let Some(i) = rest.find('<') {
            rest = &rest[i + 1..];
            let j = rest.find('>').ok_or_else(|| fail("unclosed tag".into()))?;
            let tag = &rest[..j];
            rest = &rest[j + 1..];
            if tag.starts_with('!') || tag.starts_with("meta") || tag == "br" {
                continue;
            }
            if let Some(name) = tag.strip_prefix('/') {
                let top = stack.pop();
                prop_assert_eq!(top.as_deref(), Some(name));
            } else {
                stack.push(tag.split_whitespace().next().unwrap_or("").to_string());
            }
        }
        prop_assert!(stack.is_empty(), "{:?}", stack);
        Ok(())
    })
}

pub fn ids_set(m: &archloom::ArchitectureModel) -> BTreeSet<String> {
    ids(m).into_iter().collect()
}

/// Deleting one Realizes link either adds a gap or orphan finding, or
/// leaves the findings unchanged.
pub fn realizes_deletion_sound(cases: u32) -> Result<(), String> {
    const NEW: [Code; 4] = [Code::W102, Code::W103, Code::W104, Code::W105];
    check_property(cases, (small_model_params(), any::<prop::sample::Index>()), |(opts, pick)| {
        let m = synth_model(&opts);
        let realizes: Vec<usize> = (0..m.links().len()).filter(|&i| m.links()[i].kind == LinkKind::Realizes).collect();
        if realizes.is_empty() {
            return Ok(());
        }
        let drop = *pick.get(&realizes);
        let links = m.links().iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, l)| l.clone()).collect();
        let cut = build_model(m.elements().to_vec(), links).map_err(|d| fail(format!("{d:?}")))?;
        let before = mutations::findings(&m);
        let after = mutations::findings(&cut);
        let added = mutations::minus(&after, &before);
        prop_assert!(mutations::minus(&before, &after).is_empty());
        prop_assert!(added.is_empty() || added.iter().any(|(c, _)| NEW.contains(c)), "{:?}", added);
        Ok(())
    })
}
