//! The `.arch` source language.
//!
//! Parsing runs in two passes. Each file is tokenized and parsed into raw
//! declarations independently (in parallel when enabled); the merged
//! declarations are then resolved by [`build_model`], so references may
//! point forward or into other files.
//!
//! ```text
//! process     := "process" ID STR "{" bfunc* "}"
//! bfunc       := "function" ID STR "{" (bfunc | boper)* "}"
//! boper       := "operation" ID STR ("{" "desc" STR "}")?
//! service     := "service" ID STR "implements" REF "{" autofn* dialog* "}"
//! autofn      := "autofn" ID STR
//! dialog      := "dialog" ID STR "{" "form" STR viewfn* "}"
//! viewfn      := "viewfn" ID STR ("covers" REF ("," REF)*)?
//!                ("flows" "->" (REF | "external" STR))? ("{" "desc" STR "}")?
//! component   := "component" ID STR "kind" ("subsystem" | "external") "{" module* "}"
//! module      := "module" ID ("params" "(" IDLIST? ")")? ("realizes" REF ("," REF)*)?
//!                ("{" "desc" STR "}")?
//! class       := "class" ID STR "in" REF "{" method* "}"
//! method      := "method" ID ("params" "(" IDLIST? ")")? ("realizes" REF ("," REF)*)?
//!                ("{" "desc" STR "}")?
//! ```

mod lexer;

use std::collections::HashSet;
use std::path::Path;

use crate::diagnostic::{has_errors, sort_diagnostics, Code, Diagnostic, SourceSpan};
use crate::model::{
    build_model, ArchElement, ArchitectureModel, ElementKind, Link, LinkKind, ATTR_DESC, ATTR_FORM,
    ATTR_KIND_TAG, ATTR_PARAMS,
};
use crate::par::{self, Execution};

use lexer::{span, Pos, Tok, Token};

pub const TOP_LEVEL_KEYWORDS: [&str; 4] = ["process", "service", "component", "class"];

/// A named source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub name: String,
    pub text: String,
}

impl SourceFile {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            text: text.into(),
        }
    }

    /// Reads a file from disk, naming it by the path as given.
    pub fn read(path: &Path) -> std::io::Result<SourceFile> {
        Ok(SourceFile::new(path.display().to_string(), std::fs::read_to_string(path)?))
    }
}

#[derive(Debug, Clone)]
pub struct ParseResult {
    /// Present iff no diagnostic is an error.
    pub model: Option<ArchitectureModel>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseResult {
    pub fn is_ok(&self) -> bool {
        self.model.is_some()
    }
}

/// Parses and resolves a set of files with the default execution mode.
pub fn parse(files: &[SourceFile]) -> ParseResult {
    parse_with(files, Execution::default())
}

pub fn parse_with(files: &[SourceFile], exec: Execution) -> ParseResult {
    let outputs = par::map(exec, files, |f| parse_file(&f.name, &f.text));

    let mut elements = Vec::new();
    let mut links = Vec::new();
    let mut diagnostics = Vec::new();
    for out in outputs {
        elements.extend(out.elements);
        links.extend(out.links);
        diagnostics.extend(out.diagnostics);
    }

    let model = if has_errors(&diagnostics) {
        None
    } else {
        match build_model(elements, links) {
            Ok(model) => Some(model),
            Err(errs) => {
                diagnostics.extend(errs);
                None
            }
        }
    };
    sort_diagnostics(&mut diagnostics);
    ParseResult { model, diagnostics }
}

/// Parses raw bytes as a single file; invalid UTF-8 is a lexical error.
pub fn parse_bytes(name: &str, bytes: &[u8]) -> ParseResult {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(&[SourceFile::new(name, text)]),
        Err(err) => {
            let valid = &bytes[..err.valid_up_to()];
            let prefix = String::from_utf8_lossy(valid);
            let line = prefix.matches('\n').count() + 1;
            let column = prefix.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            ParseResult {
                model: None,
                diagnostics: vec![Diagnostic::new(Code::P001, "input is not valid UTF-8")
                    .with_span(Some(SourceSpan::new(name, line, column, 1)))],
            }
        }
    }
}

/// Span of the keyword that declares `id`.
pub fn locate(result: &ParseResult, id: &str) -> Result<SourceSpan, Diagnostic> {
    result
        .model
        .as_ref()
        .and_then(|m| m.element(id))
        .and_then(|e| e.src.clone())
        .ok_or_else(|| Diagnostic::unknown_element(id))
}

struct FileOutput {
    elements: Vec<ArchElement>,
    links: Vec<Link>,
    diagnostics: Vec<Diagnostic>,
}

fn parse_file(file: &str, text: &str) -> FileOutput {
    let mut diagnostics = Vec::new();
    let tokens = lexer::tokenize(file, text, &mut diagnostics);
    let mut parser = Parser {
        file,
        tokens: &tokens,
        pos: 0,
        out: FileOutput {
            elements: Vec::new(),
            links: Vec::new(),
            diagnostics,
        },
    };
    parser.parse_file();
    parser.out
}

/// Marker for a reported syntax error; the parser unwinds to the next
/// top-level declaration.
struct Failed;

type PResult<T> = Result<T, Failed>;

struct Parser<'a> {
    file: &'a str,
    tokens: &'a [Token],
    pos: usize,
    out: FileOutput,
}

/// Ids declared in one block, for P003.
#[derive(Default)]
struct Scope(HashSet<String>);

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_tok(&self) -> &Tok {
        &self.peek().tok
    }

    fn at_word(&self, word: &str) -> bool {
        matches!(self.peek_tok(), Tok::Ident(w) if w == word)
    }

    fn bump(&mut self) -> &'a Token {
        let t = &self.tokens[self.pos];
        if !matches!(t.tok, Tok::Eof) {
            self.pos += 1;
        }
        t
    }

    fn span_of(&self, pos: Pos) -> SourceSpan {
        span(self.file, pos)
    }

    fn fail<T>(&mut self, expected: &str) -> PResult<T> {
        let t = self.peek();
        let msg = format!("expected {expected}, found {}", t.tok.describe());
        let sp = self.span_of(t.pos);
        self.out
            .diagnostics
            .push(Diagnostic::new(Code::P002, msg).with_span(Some(sp)));
        Err(Failed)
    }

    fn expect_word(&mut self, word: &str) -> PResult<SourceSpan> {
        if self.at_word(word) {
            let t = self.bump();
            Ok(self.span_of(t.pos))
        } else {
            self.fail(&format!("`{word}`"))
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<(String, SourceSpan)> {
        match &self.peek().tok {
            Tok::Ident(w) => {
                let w = w.clone();
                let t = self.bump();
                Ok((w, self.span_of(t.pos)))
            }
            _ => self.fail(what),
        }
    }

    fn expect_str(&mut self, what: &str) -> PResult<String> {
        match &self.peek().tok {
            Tok::Str(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.fail(what),
        }
    }

    fn expect_tok(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek_tok() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&tok.describe())
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek_tok() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn parse_file(&mut self) {
        let mut scope = Scope::default();
        loop {
            let start = self.pos;
            let result = match self.peek_tok() {
                Tok::Eof => break,
                Tok::Ident(w) => match w.as_str() {
                    "process" => self.process(&mut scope),
                    "service" => self.service(&mut scope),
                    "component" => self.component(&mut scope),
                    "class" => self.class(&mut scope),
                    _ => self.fail("`process`, `service`, `component` or `class`"),
                },
                _ => self.fail("`process`, `service`, `component` or `class`"),
            };
            if result.is_err() {
                self.recover(start);
            }
        }
    }

    /// Skips to the next top-level keyword that starts a line or follows a
    /// closing brace, always moving past the declaration that began at
    /// `start`.
    fn recover(&mut self, start: usize) {
        if self.pos == start {
            self.bump();
        }
        loop {
            let t = self.peek();
            match &t.tok {
                Tok::Eof => return,
                Tok::Ident(w) if TOP_LEVEL_KEYWORDS.contains(&w.as_str()) => {
                    let after_brace =
                        self.pos > 0 && matches!(self.tokens[self.pos - 1].tok, Tok::RBrace);
                    if (t.line_start || after_brace) && self.pos > start {
                        return;
                    }
                }
                _ => {}
            }
            self.bump();
        }
    }

    /// Records a declaration. Returns false (and reports P003) when the id was
    /// already declared in the same block.
    fn declare(&mut self, scope: &mut Scope, element: ArchElement, parent: Option<&str>) -> bool {
        if !scope.0.insert(element.id.clone()) {
            self.out.diagnostics.push(
                Diagnostic::new(
                    Code::P003,
                    format!("{} is declared twice in the same block", element.id),
                )
                .with_element(&element.id)
                .with_span(element.src.clone()),
            );
            return false;
        }
        if let Some(parent) = parent {
            self.out.links.push(
                Link::new(parent, &element.id, LinkKind::Contains).with_src(element.src.clone()),
            );
        }
        self.out.elements.push(element);
        true
    }

    fn link(&mut self, from: &str, to: &str, kind: LinkKind, src: SourceSpan) {
        self.out.links.push(Link::new(from, to, kind).with_src(Some(src)));
    }

    /// `REF ("," REF)*`; repeated references are P003.
    fn ref_list(&mut self, owner: &str, kind: LinkKind, what: &str) -> PResult<()> {
        let mut seen = HashSet::new();
        loop {
            let (target, sp) = self.expect_ident(what)?;
            if seen.insert(target.clone()) {
                self.link(owner, &target, kind, sp);
            } else {
                self.out.diagnostics.push(
                    Diagnostic::new(Code::P003, format!("{target} is listed twice"))
                        .with_element(&target)
                        .with_span(Some(sp)),
                );
            }
            if !self.eat(&Tok::Comma) {
                return Ok(());
            }
        }
    }

    /// Optional `{ desc STR }` trailer.
    fn desc_block(&mut self, element: &mut ArchElement) -> PResult<()> {
        if self.eat(&Tok::LBrace) {
            self.expect_word("desc")?;
            let text = self.expect_str("description string")?;
            element.attrs.insert(ATTR_DESC.to_string(), text);
            self.expect_tok(Tok::RBrace)?;
        }
        Ok(())
    }

    fn header(&mut self, keyword: &str, kind: ElementKind, named: bool) -> PResult<ArchElement> {
        let kw = self.expect_word(keyword)?;
        let (id, _) = self.expect_ident("identifier")?;
        let name = if named {
            self.expect_str("display name string")?
        } else {
            id.clone()
        };
        Ok(ArchElement::new(id, kind, name).with_src(Some(kw)))
    }

    fn process(&mut self, top: &mut Scope) -> PResult<()> {
        let process = self.header("process", ElementKind::BusinessProcess, true)?;
        let id = process.id.clone();
        self.declare(top, process, None);
        self.expect_tok(Tok::LBrace)?;
        let mut scope = Scope::default();
        loop {
            if self.eat(&Tok::RBrace) {
                return Ok(());
            }
            if self.at_word("function") {
                self.function(&id, &mut scope)?;
            } else {
                return self.fail("`function` or `}`");
            }
        }
    }

    fn function(&mut self, parent: &str, outer: &mut Scope) -> PResult<()> {
        let function = self.header("function", ElementKind::BusinessFunction, true)?;
        let id = function.id.clone();
        self.declare(outer, function, Some(parent));
        self.expect_tok(Tok::LBrace)?;
        let mut scope = Scope::default();
        loop {
            if self.eat(&Tok::RBrace) {
                return Ok(());
            }
            if self.at_word("function") {
                self.function(&id, &mut scope)?;
            } else if self.at_word("operation") {
                let mut op = self.header("operation", ElementKind::BusinessOperation, true)?;
                self.desc_block(&mut op)?;
                self.declare(&mut scope, op, Some(&id));
            } else {
                return self.fail("`function`, `operation` or `}`");
            }
        }
    }

    fn service(&mut self, top: &mut Scope) -> PResult<()> {
        let service = self.header("service", ElementKind::OperationalService, true)?;
        let id = service.id.clone();
        self.expect_word("implements")?;
        let (op, sp) = self.expect_ident("business operation reference")?;
        self.declare(top, service, None);
        self.link(&id, &op, LinkKind::Implements, sp);
        self.expect_tok(Tok::LBrace)?;
        let mut scope = Scope::default();
        let mut in_dialogs = false;
        loop {
            if self.eat(&Tok::RBrace) {
                return Ok(());
            }
            if !in_dialogs && self.at_word("autofn") {
                let af = self.header("autofn", ElementKind::AutomatedFunction, true)?;
                self.declare(&mut scope, af, Some(&id));
            } else if self.at_word("dialog") {
                in_dialogs = true;
                self.dialog(&id, &mut scope)?;
            } else if in_dialogs {
                return self.fail("`dialog` or `}`");
            } else {
                return self.fail("`autofn`, `dialog` or `}`");
            }
        }
    }

    fn dialog(&mut self, service: &str, outer: &mut Scope) -> PResult<()> {
        let mut dialog = self.header("dialog", ElementKind::Dialog, true)?;
        let id = dialog.id.clone();
        self.expect_tok(Tok::LBrace)?;
        self.expect_word("form")?;
        let form = self.expect_str("form text string")?;
        dialog.attrs.insert(ATTR_FORM.to_string(), form);
        self.declare(outer, dialog, Some(service));
        let mut scope = Scope::default();
        loop {
            if self.eat(&Tok::RBrace) {
                return Ok(());
            }
            if self.at_word("viewfn") {
                self.viewfn(&id, &mut scope)?;
            } else {
                return self.fail("`viewfn` or `}`");
            }
        }
    }

    fn viewfn(&mut self, dialog: &str, scope: &mut Scope) -> PResult<()> {
        let mut vf = self.header("viewfn", ElementKind::ViewFunction, true)?;
        let id = vf.id.clone();
        let mark = self.out.links.len();
        if self.at_word("covers") {
            self.bump();
            self.ref_list(&id, LinkKind::Covers, "automated function reference")?;
        }
        if self.at_word("flows") {
            self.bump();
            self.expect_tok(Tok::Arrow)?;
            let (target, sp) = self.expect_ident("dialog reference or `external`")?;
            if target == "external" && matches!(self.peek_tok(), Tok::Str(_)) {
                let text = self.expect_str("external target")?;
                self.out
                    .links
                    .push(Link::external_flow(&id, text).with_src(Some(sp)));
            } else {
                self.link(&id, &target, LinkKind::FlowsTo, sp);
            }
        }
        self.desc_block(&mut vf)?;
        if !self.declare(scope, vf, Some(dialog)) {
            self.out.links.truncate(mark);
        }
        Ok(())
    }

    fn component(&mut self, top: &mut Scope) -> PResult<()> {
        let mut component = self.header("component", ElementKind::Component, true)?;
        let id = component.id.clone();
        self.expect_word("kind")?;
        let tag = if self.at_word("subsystem") || self.at_word("external") {
            self.expect_ident("component kind")?.0
        } else {
            return self.fail("`subsystem` or `external`");
        };
        component.attrs.insert(ATTR_KIND_TAG.to_string(), tag);
        self.declare(top, component, None);
        self.expect_tok(Tok::LBrace)?;
        let mut scope = Scope::default();
        loop {
            if self.eat(&Tok::RBrace) {
                return Ok(());
            }
            if self.at_word("module") {
                self.realizer("module", ElementKind::Module, &id, &mut scope)?;
            } else {
                return self.fail("`module` or `}`");
            }
        }
    }

    fn class(&mut self, top: &mut Scope) -> PResult<()> {
        let class = self.header("class", ElementKind::Class, true)?;
        let id = class.id.clone();
        self.expect_word("in")?;
        let (component, sp) = self.expect_ident("component reference")?;
        let src = class.src.clone();
        if self.declare(top, class, None) {
            self.out.links.push(
                Link::new(&component, &id, LinkKind::Contains).with_src(Some(sp).or(src)),
            );
        }
        self.expect_tok(Tok::LBrace)?;
        let mut scope = Scope::default();
        loop {
            if self.eat(&Tok::RBrace) {
                return Ok(());
            }
            if self.at_word("method") {
                self.realizer("method", ElementKind::Method, &id, &mut scope)?;
            } else {
                return self.fail("`method` or `}`");
            }
        }
    }

    /// Modules and methods share one shape.
    fn realizer(
        &mut self,
        keyword: &str,
        kind: ElementKind,
        parent: &str,
        scope: &mut Scope,
    ) -> PResult<()> {
        let mut element = self.header(keyword, kind, false)?;
        let id = element.id.clone();
        if self.at_word("params") {
            self.bump();
            self.expect_tok(Tok::LParen)?;
            let mut params = Vec::new();
            if !self.eat(&Tok::RParen) {
                loop {
                    params.push(self.expect_ident("parameter name")?.0);
                    if self.eat(&Tok::RParen) {
                        break;
                    }
                    self.expect_tok(Tok::Comma)?;
                }
            }
            if !params.is_empty() {
                element
                    .attrs
                    .insert(ATTR_PARAMS.to_string(), params.join(", "));
            }
        }
        let mark = self.out.links.len();
        if self.at_word("realizes") {
            self.bump();
            let what = if kind == ElementKind::Module {
                "view function reference"
            } else {
                "module reference"
            };
            self.ref_list(&id, LinkKind::Realizes, what)?;
        }
        self.desc_block(&mut element)?;
        if !self.declare(scope, element, Some(parent)) {
            self.out.links.truncate(mark);
        }
        Ok(())
    }
}
