use super::Section;

/// Splits prose into paragraphs on blank lines.
fn paragraphs(text: &str) -> Vec<Vec<&str>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for line in text.lines() {
        let line = line.trim_end();
        if line.trim().is_empty() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(line);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Table cell content: single newlines become `<br>`, several paragraphs
/// are wrapped in `<p>` elements.
fn cell_html(text: &str, escape: impl Fn(&str) -> String) -> String {
    let paras: Vec<String> = paragraphs(text)
        .into_iter()
        .map(|lines| lines.iter().map(|l| escape(l)).collect::<Vec<_>>().join("<br>"))
        .collect();
    match paras.len() {
        0 => String::new(),
        1 => paras.into_iter().next().unwrap_or_default(),
        _ => paras.iter().map(|p| format!("<p>{p}</p>")).collect(),
    }
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}

fn md_row<S: AsRef<str>>(cells: &[S]) -> String {
    let mut line = String::from("|");
    for c in cells {
        let c = c.as_ref();
        if c.is_empty() {
            line.push_str(" |");
        } else {
            line.push(' ');
            line.push_str(c);
            line.push_str(" |");
        }
    }
    line.push('\n');
    line
}

fn md_section(s: &Section) -> String {
    let mut out = format!("## {}\n\n", md_escape(&s.heading));
    if let Some(intro) = s.intro.as_deref().map(str::trim_end).filter(|t| !t.is_empty()) {
        out.push_str(intro);
        out.push_str("\n\n");
    }
    out.push_str(&md_row(s.header));
    out.push_str(&md_row(&vec!["---"; s.header.len()]));
    for row in &s.rows {
        let cells: Vec<String> = row.iter().map(|c| cell_html(c, md_escape)).collect();
        out.push_str(&md_row(&cells));
    }
    out
}

pub(crate) fn markdown(sections: &[Section]) -> String {
    sections.iter().map(md_section).collect::<Vec<_>>().join("\n")
}

pub(crate) fn escape_html(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

const STYLE: &str = "body{font-family:sans-serif}table{border-collapse:collapse;margin-bottom:1.5em}\
th,td{border:1px solid #999;padding:4px 8px;text-align:left;vertical-align:top}";

pub(crate) fn html(title: &str, sections: &[Section]) -> String {
    let mut out = String::from("<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n");
    out.push_str(&format!("<title>{}</title>\n", escape_html(title)));
    out.push_str(&format!("<style>{STYLE}</style>\n</head>\n<body>\n"));
    for s in sections {
        out.push_str(&format!("<h2>{}</h2>\n", escape_html(&s.heading)));
        if let Some(intro) = &s.intro {
            for p in paragraphs(intro) {
                let lines: Vec<String> = p.iter().map(|l| escape_html(l)).collect();
                out.push_str(&format!("<p>{}</p>\n", lines.join("<br>")));
            }
        }
        out.push_str("<table>\n<thead><tr>");
        for h in s.header {
            out.push_str(&format!("<th>{}</th>", escape_html(h)));
        }
        out.push_str("</tr></thead>\n<tbody>\n");
        for row in &s.rows {
            out.push_str("<tr>");
            for c in row {
                out.push_str(&format!("<td>{}</td>", cell_html(c, escape_html)));
            }
            out.push_str("</tr>\n");
        }
        out.push_str("</tbody>\n</table>\n");
    }
    out.push_str("</body>\n</html>\n");
    out
}

pub(crate) fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    // Writing to a Vec cannot fail.
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(row).expect("in-memory csv");
    }
    let bytes = w.into_inner().expect("in-memory csv");
    String::from_utf8(bytes).expect("csv of utf-8 input")
}
