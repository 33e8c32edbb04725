use crate::diagnostic::{Code, Diagnostic, SourceSpan};

/// Lexing stops after this many errors in one file.
const MAX_LEX_ERRORS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Arrow,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(_) => "string".to_string(),
            Tok::LBrace => "`{`".to_string(),
            Tok::RBrace => "`}`".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::Comma => "`,`".to_string(),
            Tok::Arrow => "`->`".to_string(),
            Tok::Eof => "end of file".to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
    /// No other token precedes this one on its line.
    pub line_start: bool,
}

struct Cursor<'a> {
    text: &'a str,
    offset: usize,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.offset..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.text[self.offset..].chars().nth(n)
    }

    fn starts_with(&self, s: &str) -> bool {
        self.text[self.offset..].starts_with(s)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn pos(&self, length: usize) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
            length,
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

pub(crate) fn span(file: &str, pos: Pos) -> SourceSpan {
    SourceSpan::new(file, pos.line, pos.column, pos.length)
}

/// Splits source text into tokens. Lexical errors are reported and skipped,
/// so the token stream always ends with `Eof`.
pub(crate) fn tokenize(file: &str, text: &str, diags: &mut Vec<Diagnostic>) -> Vec<Token> {
    let mut cur = Cursor {
        text,
        offset: 0,
        line: 1,
        column: 1,
    };
    let mut tokens: Vec<Token> = Vec::new();
    let mut errors = 0usize;
    let mut last_line = 0usize;

    let mut error = |diags: &mut Vec<Diagnostic>, pos: Pos, msg: String| -> bool {
        errors += 1;
        diags.push(Diagnostic::new(Code::P001, msg).with_span(Some(span(file, pos))));
        if errors >= MAX_LEX_ERRORS {
            diags.push(
                Diagnostic::new(Code::P001, "too many lexical errors; giving up on this file")
                    .with_span(Some(span(file, Pos { length: 0, ..pos }))),
            );
            return false;
        }
        true
    };

    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }

        let start = cur.pos(0);
        let simple = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        let tok = if let Some(tok) = simple {
            cur.bump();
            Some((tok, 1))
        } else if c == '-' && cur.peek_at(1) == Some('>') {
            cur.bump();
            cur.bump();
            Some((Tok::Arrow, 2))
        } else if is_ident_start(c) {
            let from = cur.offset;
            while cur.peek().is_some_and(is_ident_continue) {
                cur.bump();
            }
            let word = &text[from..cur.offset];
            Some((Tok::Ident(word.to_string()), word.chars().count()))
        } else if is_ident_continue(c) {
            let from = cur.offset;
            while cur.peek().is_some_and(is_ident_continue) {
                cur.bump();
            }
            let word = &text[from..cur.offset];
            let pos = Pos {
                length: word.chars().count(),
                ..start
            };
            if !error(diags, pos, format!("invalid identifier `{word}`")) {
                break;
            }
            None
        } else if cur.starts_with("\"\"\"") {
            for _ in 0..3 {
                cur.bump();
            }
            if cur.peek() == Some('\n') {
                cur.bump();
            } else if cur.starts_with("\r\n") {
                cur.bump();
                cur.bump();
            }
            match read_string(&mut cur, true) {
                Ok(s) => Some((Tok::Str(s), 3)),
                Err((pos, msg)) => {
                    let pos = pos.unwrap_or(Pos { length: 3, ..start });
                    if !error(diags, pos, msg) {
                        break;
                    }
                    None
                }
            }
        } else if c == '"' {
            cur.bump();
            match read_string(&mut cur, false) {
                Ok(s) => Some((Tok::Str(s), cur.column - start.column)),
                Err((pos, msg)) => {
                    let pos = pos.unwrap_or(Pos { length: 1, ..start });
                    if !error(diags, pos, msg) {
                        break;
                    }
                    None
                }
            }
        } else {
            cur.bump();
            let pos = Pos { length: 1, ..start };
            if !error(diags, pos, format!("unexpected character {c:?}")) {
                break;
            }
            None
        };

        if let Some((tok, length)) = tok {
            tokens.push(Token {
                tok,
                pos: Pos { length, ..start },
                line_start: start.line != last_line,
            });
            last_line = start.line;
        }
    }

    tokens.push(Token {
        tok: Tok::Eof,
        pos: cur.pos(0),
        line_start: cur.line != last_line,
    });
    tokens
}

/// Reads string contents after the opening delimiter. On failure returns the
/// position to blame (`None` means the opening quote) and a message; an
/// unterminated string consumes the rest of its line (or file, for
/// triple-quoted strings).
fn read_string(cur: &mut Cursor<'_>, triple: bool) -> Result<String, (Option<Pos>, String)> {
    let mut out = String::new();
    let mut bad_escape = None;
    loop {
        if triple && cur.starts_with("\"\"\"") {
            for _ in 0..3 {
                cur.bump();
            }
            break;
        }
        match cur.peek() {
            None => return Err((None, "unterminated string".to_string())),
            Some('\n') if !triple => return Err((None, "unterminated string".to_string())),
            Some('"') if !triple => {
                cur.bump();
                break;
            }
            Some('\\') => {
                let pos = cur.pos(2);
                cur.bump();
                match cur.peek() {
                    Some(c @ ('"' | '\\')) => {
                        cur.bump();
                        out.push(c);
                    }
                    Some(c) if c != '\n' => {
                        cur.bump();
                        bad_escape.get_or_insert((pos, c));
                    }
                    _ => {
                        bad_escape.get_or_insert((Pos { length: 1, ..pos }, ' '));
                    }
                }
            }
            Some(c) => {
                cur.bump();
                out.push(c);
            }
        }
    }
    match bad_escape {
        Some((pos, c)) => Err((Some(pos), format!("invalid escape sequence `\\{c}`"))),
        None => Ok(out),
    }
}
