//! Seeded defects applied to the fixture, each with the exact change it
//! must cause in the validator's output.

use archloom::{build_model, validate, ArchitectureModel, Code, LinkKind, RuleConfig};

use super::fixture_files;

pub type Finding = (Code, String);

pub enum Edit {
    /// Replace one exact occurrence of `from` in the named fixture file.
    Text { file: &'static str, from: &'static str, to: &'static str },
    /// Drop every stored link of this kind leaving the given element.
    DropLinks { from: &'static str, kind: LinkKind },
}

pub struct Mutation {
    pub name: &'static str,
    pub edits: Vec<Edit>,
    pub added: Vec<(Code, &'static str)>,
    pub removed: Vec<(Code, &'static str)>,
}

fn text(file: &'static str, from: &'static str, to: &'static str) -> Edit {
    Edit::Text { file, from, to }
}

pub fn mutations() -> Vec<Mutation> {
    use Code::*;
    vec![
        Mutation {
            name: "all realizations of VF05 deleted",
            edits: vec![
                text("components.arch", "SelectProcessType params(OptionID, ProcessStatus) realizes VF05", "SelectProcessType params(OptionID, ProcessStatus)"),
                text("components.arch", "GetProcessStatus params(UserID, ProcessCondition) realizes VF05", "GetProcessStatus params(UserID, ProcessCondition)"),
                text("components.arch", "realizes VF05, VF10", "realizes VF10"),
            ],
            added: vec![(W102, "VF05"), (W104, "SelectProcessType"), (W104, "GetProcessStatus")],
            removed: vec![],
        },
        Mutation {
            name: "one realization of VF05 deleted",
            edits: vec![text(
                "components.arch",
                "GetProcessStatus params(UserID, ProcessCondition) realizes VF05",
                "GetProcessStatus params(UserID, ProcessCondition)",
            )],
            added: vec![(W104, "GetProcessStatus")],
            removed: vec![],
        },
        Mutation {
            name: "orphaned method",
            edits: vec![text("data.arch", "method StartProcess params(UserID) realizes OpenPreparation", "method StartProcess params(UserID)")],
            added: vec![(W105, "StartProcess"), (W103, "OpenPreparation")],
            removed: vec![],
        },
        Mutation {
            name: "orphaned module",
            edits: vec![text("components.arch", "component DS \"Data storage\" kind subsystem {", "component DS \"Data storage\" kind subsystem {\n  module Unused")],
            added: vec![(W104, "Unused"), (W103, "Unused")],
            removed: vec![],
        },
        Mutation {
            name: "empty dialog",
            edits: vec![text(
                "functional.arch",
                "  dialog D01.03.02 ",
                "  dialog D01.03.04 \"Spare\" {\n    form \"Nothing yet.\"\n  }\n  dialog D01.03.02 ",
            )],
            added: vec![(W106, "D01.03.04")],
            removed: vec![],
        },
        Mutation {
            name: "cross-service covers",
            edits: vec![text(
                "functional.arch",
                "service SRTS01.03 ",
                "service SRTS02.01 \"Visit booking\" implements OPTC02.01 {\n  autofn AF02.01.1 \"Book a visit\"\n  dialog D02.01.01 \"Booking\" {\n    form \"Department list.\"\n    viewfn VF20 \"Book\" covers AF01.03.4\n  }\n}\n\nservice SRTS01.03 ",
            )],
            added: vec![(E110, "VF20"), (W101, "AF02.01.1"), (W102, "VF20")],
            removed: vec![(I201, "OPTC02.01")],
        },
        Mutation {
            name: "automated function left uncovered",
            edits: vec![text("functional.arch", "VF09 \"Go to appointment of vehicle registration\" covers AF01.03.5", "VF09 \"Go to appointment of vehicle registration\"")],
            added: vec![(W101, "AF01.03.5"), (I202, "VF09")],
            removed: vec![],
        },
        Mutation {
            name: "module without methods",
            edits: vec![text("data.arch", "method SetProcessType params(ProcessID, OptionID) realizes SelectProcessType", "method SetProcessType params(ProcessID, OptionID)")],
            added: vec![(W105, "SetProcessType"), (W103, "SelectProcessType")],
            removed: vec![],
        },
        Mutation {
            name: "service without dialogs",
            edits: vec![text(
                "functional.arch",
                "service SRTS01.03 ",
                "service SRTS04.02 \"Issuing\" implements OPTC04.02 {\n  autofn AF04.02.1 \"Print the certificate\"\n}\n\nservice SRTS01.03 ",
            )],
            added: vec![(W107, "SRTS04.02"), (W101, "AF04.02.1")],
            removed: vec![(I201, "OPTC04.02")],
        },
        Mutation {
            name: "class without methods",
            edits: vec![text("data.arch", "class PROCESS \"PROCESS\" in DS {", "class ARCHIVE \"ARCHIVE\" in DS {\n}\n\nclass PROCESS \"PROCESS\" in DS {")],
            added: vec![(W109, "ARCHIVE")],
            removed: vec![],
        },
        Mutation {
            name: "service implementing nothing",
            edits: vec![Edit::DropLinks {
                from: "SRTS01.03",
                kind: LinkKind::Implements,
            }],
            added: vec![(W108, "SRTS01.03"), (I201, "OPTC01.03")],
            removed: vec![],
        },
    ]
}

pub fn findings(model: &ArchitectureModel) -> Vec<Finding> {
    let mut out: Vec<Finding> = validate(model, &RuleConfig::default())
        .into_iter()
        .map(|d| (d.code, d.element.unwrap_or_default()))
        .collect();
    out.sort();
    out
}

pub fn apply(m: &Mutation) -> Result<ArchitectureModel, String> {
    let mut files = fixture_files();
    let mut drops = Vec::new();
    for e in &m.edits {
        match e {
            Edit::Text { file, from, to } => {
                let f = files
                    .iter_mut()
                    .find(|f| f.name.ends_with(file))
                    .ok_or_else(|| format!("no file {file}"))?;
                if f.text.matches(from).count() != 1 {
                    return Err(format!("{from:?} does not occur exactly once in {file}"));
                }
                f.text = f.text.replacen(from, to, 1);
            }
            Edit::DropLinks { from, kind } => drops.push((*from, *kind)),
        }
    }
    let r = archloom::parse(&files);
    let model = r.model.ok_or_else(|| format!("mutant does not parse: {:?}", r.diagnostics))?;
    if drops.is_empty() {
        return Ok(model);
    }
    let links = model
        .links()
        .iter()
        .filter(|l| !drops.iter().any(|&(f, k)| l.from == f && l.kind == k))
        .cloned()
        .collect();
    build_model(model.elements().to_vec(), links).map_err(|d| format!("{d:?}"))
}

/// Multiset difference `a - b`.
pub fn minus(a: &[Finding], b: &[Finding]) -> Vec<Finding> {
    let mut rest = b.to_vec();
    let mut out = Vec::new();
    for x in a {
        match rest.iter().position(|y| y == x) {
            Some(i) => {
                rest.remove(i);
            }
            None => out.push(x.clone()),
        }
    }
    out
}

/// Checks one mutation against the unmutated baseline.
pub fn check(m: &Mutation, baseline: &[Finding]) -> Result<(), String> {
    let got = findings(&apply(m)?);
    let added = minus(&got, baseline);
    let removed = minus(baseline, &got);
    let want = |v: &[(Code, &str)]| {
        let mut w: Vec<Finding> = v.iter().map(|(c, e)| (*c, e.to_string())).collect();
        w.sort();
        w
    };
    if added != want(&m.added) || removed != want(&m.removed) {
        return Err(format!("{}: added {added:?}, removed {removed:?}", m.name));
    }
    Ok(())
}
