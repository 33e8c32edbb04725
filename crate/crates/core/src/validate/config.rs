use std::collections::BTreeSet;

use crate::diagnostic::{sort_diagnostics, Code, Diagnostic, Severity, SourceSpan};

/// Severity overrides applied after the rule catalog runs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleConfig {
    promote: BTreeSet<Code>,
    demote: BTreeSet<Code>,
    suppress: BTreeSet<Code>,
}

impl RuleConfig {
    /// Builds a config, rejecting overlapping sets and attempts to demote or
    /// silence error-class codes.
    pub fn new(
        promote: impl IntoIterator<Item = Code>,
        demote: impl IntoIterator<Item = Code>,
        suppress: impl IntoIterator<Item = Code>,
    ) -> Result<Self, Vec<Diagnostic>> {
        let mut config = RuleConfig::default();
        let mut diags = Vec::new();
        for code in promote {
            config.add("promote", code, None, &mut diags);
        }
        for code in demote {
            config.add("demote", code, None, &mut diags);
        }
        for code in suppress {
            config.add("suppress", code, None, &mut diags);
        }
        if diags.is_empty() {
            Ok(config)
        } else {
            Err(diags)
        }
    }

    /// Reads lines of the form `promote W102`, `demote W106`, `suppress I202`.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str, file: &str) -> Result<Self, Vec<Diagnostic>> {
        let mut config = RuleConfig::default();
        let mut diags = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let span = Some(SourceSpan::new(file, n + 1, 1, raw.chars().count()));
            let mut words = line.split_whitespace();
            let (Some(action), Some(code), None) = (words.next(), words.next(), words.next()) else {
                diags.push(
                    Diagnostic::new(Code::E104, format!("expected `<action> <code>`, found {line:?}"))
                        .with_span(span),
                );
                continue;
            };
            if !matches!(action, "promote" | "demote" | "suppress") {
                diags.push(
                    Diagnostic::new(Code::E104, format!("unknown action {action:?}")).with_span(span),
                );
                continue;
            }
            match code.parse::<Code>() {
                Ok(code) => config.add(action, code, span, &mut diags),
                Err(()) => diags.push(
                    Diagnostic::new(Code::E104, format!("unknown diagnostic code {code:?}"))
                        .with_span(span),
                ),
            }
        }
        if diags.is_empty() {
            Ok(config)
        } else {
            Err(diags)
        }
    }

    fn add(&mut self, action: &str, code: Code, span: Option<SourceSpan>, diags: &mut Vec<Diagnostic>) {
        let conflict = match action {
            "promote" => self.demote.contains(&code) || self.suppress.contains(&code),
            "demote" => self.promote.contains(&code) || self.suppress.contains(&code),
            _ => self.promote.contains(&code) || self.demote.contains(&code),
        };
        if conflict {
            diags.push(
                Diagnostic::new(Code::E104, format!("{code} appears under more than one action"))
                    .with_span(span),
            );
            return;
        }
        if action != "promote" && code.is_error_class() {
            diags.push(
                Diagnostic::new(Code::E104, format!("{code} is an error and cannot be {action}ed"))
                    .with_span(span),
            );
            return;
        }
        match action {
            "promote" => self.promote.insert(code),
            "demote" => self.demote.insert(code),
            _ => self.suppress.insert(code),
        };
    }

    /// Adds `--deny` codes as promotions. A code the config already demotes
    /// or suppresses keeps its config setting; a note is returned for each.
    pub fn deny(&mut self, codes: impl IntoIterator<Item = Code>) -> Vec<String> {
        let mut notes = Vec::new();
        for code in codes {
            if self.demote.contains(&code) || self.suppress.contains(&code) {
                notes.push(format!(
                    "note: --deny {code} ignored; the rule configuration overrides it"
                ));
            } else {
                self.promote.insert(code);
            }
        }
        notes
    }

    pub fn promoted(&self) -> &BTreeSet<Code> {
        &self.promote
    }

    pub fn demoted(&self) -> &BTreeSet<Code> {
        &self.demote
    }

    pub fn suppressed(&self) -> &BTreeSet<Code> {
        &self.suppress
    }

    /// Applies overrides and sorts. Idempotent.
    pub fn apply(&self, diags: impl IntoIterator<Item = Diagnostic>) -> Vec<Diagnostic> {
        let mut out: Vec<Diagnostic> = diags
            .into_iter()
            .filter(|d| !self.suppress.contains(&d.code))
            .map(|mut d| {
                if self.promote.contains(&d.code) {
                    d.severity = Severity::Error;
                } else if self.demote.contains(&d.code) {
                    d.severity = Severity::Info;
                }
                d
            })
            .collect();
        sort_diagnostics(&mut out);
        out
    }
}
