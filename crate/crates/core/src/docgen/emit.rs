use crate::diagnostic::{sort_diagnostics, Code, Diagnostic};
use crate::model::{
    is_valid_id, ArchElement, ArchitectureModel, ElementKind, LinkKind, ATTR_DESC, ATTR_FORM,
    ATTR_KIND_TAG, ATTR_PARAMS,
};

pub(crate) fn quote(s: &str) -> String {
    if !s.contains('\n') {
        let mut out = String::with_capacity(s.len() + 2);
        out.push('"');
        for c in s.chars() {
            if c == '"' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('"');
        return out;
    }
    // Triple-quoted: only a quote that could start the closing delimiter
    // needs escaping.
    let mut out = String::from("\"\"\"\n");
    let chars: Vec<char> = s.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        let escape = match c {
            '\\' => true,
            '"' => chars.get(i + 1).is_none_or(|&n| n == '"'),
            _ => false,
        };
        if escape {
            out.push('\\');
        }
        out.push(c);
    }
    out.push_str("\"\"\"");
    out
}

fn allowed_attrs(kind: ElementKind) -> &'static [&'static str] {
    use ElementKind::*;
    match kind {
        BusinessOperation | ViewFunction => &[ATTR_DESC],
        Module | Method => &[ATTR_DESC, ATTR_PARAMS],
        Dialog => &[ATTR_FORM],
        Component => &[ATTR_KIND_TAG],
        _ => &[],
    }
}

fn is_root(kind: ElementKind) -> bool {
    matches!(
        kind,
        ElementKind::BusinessProcess
            | ElementKind::OperationalService
            | ElementKind::Component
            | ElementKind::Class
    )
}

/// Reports everything the source language cannot express.
fn check(model: &ArchitectureModel) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for e in model.elements() {
        let mut bad = |msg: String| {
            diags.push(
                Diagnostic::new(Code::E107, format!("{} {}: {msg}", e.kind, e.id))
                    .with_element(&e.id)
                    .with_span(e.src.clone()),
            )
        };
        let parent = model.parent(&e.id);
        let needs_parent = !is_root(e.kind) || e.kind == ElementKind::Class;
        if needs_parent && parent.is_none() {
            bad("has no container".into());
        }
        for key in e.attrs.keys() {
            if !allowed_attrs(e.kind).contains(&key.as_str()) {
                bad(format!("attribute {key} has no place in the source language"));
            }
        }
        match e.kind {
            ElementKind::Module | ElementKind::Method => {
                if e.name != e.id {
                    bad(format!("name {:?} differs from the id", e.name));
                }
                if let Some(raw) = e.attr(ATTR_PARAMS) {
                    let params = e.params();
                    if params.is_empty()
                        || !params.iter().all(|p| is_valid_id(p))
                        || params.join(", ") != raw
                    {
                        bad(format!("parameter list {raw:?} is not a list of identifiers"));
                    }
                }
            }
            ElementKind::Dialog if e.attr(ATTR_FORM).is_none() => bad("has no form".into()),
            ElementKind::Component
                if !matches!(e.attr(ATTR_KIND_TAG), Some("subsystem" | "external")) =>
            {
                bad("component kind must be subsystem or external".into())
            }
            ElementKind::OperationalService => {
                let n = model.targets_of(&e.id, LinkKind::Implements).len();
                if n != 1 {
                    bad(format!("implements {n} operations; exactly one is required"));
                }
            }
            ElementKind::ViewFunction => {
                let n = model.outgoing(&e.id).filter(|l| l.kind == LinkKind::FlowsTo).count();
                if n > 1 {
                    bad(format!("has {n} control transfers; at most one is allowed"));
                }
            }
            _ => {}
        }
    }
    sort_diagnostics(&mut diags);
    diags
}

struct Emitter<'m> {
    model: &'m ArchitectureModel,
    out: String,
}

impl<'m> Emitter<'m> {
    fn line(&mut self, depth: usize, text: &str) {
        for _ in 0..depth {
            self.out.push_str("  ");
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn refs(&self, ids: Vec<&ArchElement>) -> String {
        ids.iter().map(|e| e.id.as_str()).collect::<Vec<_>>().join(", ")
    }

    /// Writes `head`, then an optional `{ desc ... }` trailer.
    fn leaf(&mut self, depth: usize, head: String, e: &ArchElement) {
        match e.attr(ATTR_DESC) {
            None => self.line(depth, &head),
            Some(d) => {
                self.line(depth, &format!("{head} {{"));
                self.line(depth + 1, &format!("desc {}", quote(d)));
                self.line(depth, "}");
            }
        }
    }

    fn children(&self, id: &str, kind: ElementKind) -> Vec<&'m ArchElement> {
        self.model
            .children(id)
            .into_iter()
            .filter(|c| c.kind == kind)
            .collect()
    }

    fn business(&mut self, depth: usize, e: &ArchElement) {
        match e.kind {
            ElementKind::BusinessOperation => {
                let head = format!("operation {} {}", e.id, quote(&e.name));
                self.leaf(depth, head, e);
            }
            _ => {
                let word = if e.kind == ElementKind::BusinessProcess { "process" } else { "function" };
                self.line(depth, &format!("{word} {} {} {{", e.id, quote(&e.name)));
                for c in self.model.children(&e.id) {
                    self.business(depth + 1, c);
                }
                self.line(depth, "}");
            }
        }
    }

    fn service(&mut self, e: &ArchElement) {
        let op = self.refs(self.model.targets_of(&e.id, LinkKind::Implements));
        self.line(0, &format!("service {} {} implements {op} {{", e.id, quote(&e.name)));
        for af in self.children(&e.id, ElementKind::AutomatedFunction) {
            self.line(1, &format!("autofn {} {}", af.id, quote(&af.name)));
        }
        for d in self.children(&e.id, ElementKind::Dialog) {
            self.line(1, &format!("dialog {} {} {{", d.id, quote(&d.name)));
            self.line(2, &format!("form {}", quote(d.attr(ATTR_FORM).unwrap_or(""))));
            for vf in self.children(&d.id, ElementKind::ViewFunction) {
                let mut head = format!("viewfn {} {}", vf.id, quote(&vf.name));
                let covers = self.model.targets_of(&vf.id, LinkKind::Covers);
                if !covers.is_empty() {
                    head.push_str(&format!(" covers {}", self.refs(covers)));
                }
                if let Some(flow) = self.model.outgoing(&vf.id).find(|l| l.kind == LinkKind::FlowsTo) {
                    if flow.external {
                        head.push_str(&format!(" flows -> external {}", quote(&flow.to)));
                    } else {
                        head.push_str(&format!(" flows -> {}", flow.to));
                    }
                }
                self.leaf(2, head, vf);
            }
            self.line(1, "}");
        }
        self.line(0, "}");
    }

    fn realizer(&mut self, word: &str, e: &ArchElement) {
        let mut head = format!("{word} {}", e.id);
        let params = e.params();
        if !params.is_empty() {
            head.push_str(&format!(" params({})", params.join(", ")));
        }
        let realizes = self.model.targets_of(&e.id, LinkKind::Realizes);
        if !realizes.is_empty() {
            head.push_str(&format!(" realizes {}", self.refs(realizes)));
        }
        self.leaf(1, head, e);
    }

    fn root(&mut self, e: &ArchElement) {
        match e.kind {
            ElementKind::BusinessProcess => self.business(0, e),
            ElementKind::OperationalService => self.service(e),
            ElementKind::Component => {
                let tag = e.attr(ATTR_KIND_TAG).unwrap_or("");
                self.line(0, &format!("component {} {} kind {tag} {{", e.id, quote(&e.name)));
                for m in self.children(&e.id, ElementKind::Module) {
                    self.realizer("module", m);
                }
                self.line(0, "}");
            }
            _ => {
                let owner = self.model.parent(&e.id).map(|p| p.id.as_str()).unwrap_or("");
                self.line(0, &format!("class {} {} in {owner} {{", e.id, quote(&e.name)));
                for m in self.children(&e.id, ElementKind::Method) {
                    self.realizer("method", m);
                }
                self.line(0, "}");
            }
        }
    }
}

fn emit_filtered(
    model: &ArchitectureModel,
    keep: impl Fn(&ArchElement) -> bool,
) -> Result<String, Vec<Diagnostic>> {
    let diags = check(model);
    if !diags.is_empty() {
        return Err(diags);
    }
    let mut em = Emitter {
        model,
        out: String::new(),
    };
    for e in model.elements() {
        if !is_root(e.kind) || !keep(e) {
            continue;
        }
        if !em.out.is_empty() {
            em.out.push('\n');
        }
        em.root(e);
    }
    Ok(em.out)
}

/// Canonical source text for the whole model, top-level declarations in
/// model order. Fails with E107 for models the language cannot express.
pub fn emit_dsl(model: &ArchitectureModel) -> Result<String, Vec<Diagnostic>> {
    emit_filtered(model, |_| true)
}

/// Canonical text of the declarations that came from `file`.
pub fn emit_dsl_file(model: &ArchitectureModel, file: &str) -> Result<String, Vec<Diagnostic>> {
    emit_filtered(model, |e| e.src.as_ref().is_some_and(|s| s.file == file))
}
