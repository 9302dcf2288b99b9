use std::collections::HashSet;

use thiserror::Error;

use super::{Constant, PenmanTree, Slot, SlotValue};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("offset {offset}: {kind}")]
pub struct PenmanError {
    /// Byte offset into the parsed text.
    pub offset: usize,
    pub kind: PenmanErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PenmanErrorKind {
    #[error("empty input")]
    Empty,
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("expected \"/\" after variable {0:?}")]
    MissingSlash(String),
    #[error("expected a concept label")]
    MissingConcept,
    #[error("role :{0} has no value")]
    RoleWithoutValue(String),
    #[error("empty role name")]
    EmptyRole,
    #[error("unterminated string literal")]
    UnterminatedString,
    #[error("empty string constant")]
    EmptyConstant,
    #[error("variable {0:?} is defined more than once")]
    DuplicateVariable(String),
    #[error("reference to undefined variable {0:?}")]
    UndefinedVariable(String),
    #[error("unexpected {0}")]
    Unexpected(String),
    #[error("trailing input after the expression")]
    TrailingInput,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Slash,
    Role(String),
    Str(String),
    Sym(String),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Open => "\"(\"".into(),
            Tok::Close => "\")\"".into(),
            Tok::Slash => "\"/\"".into(),
            Tok::Role(r) => format!("role :{r}"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Sym(s) => format!("symbol {s:?}"),
        }
    }
}

fn err(offset: usize, kind: PenmanErrorKind) -> PenmanError {
    PenmanError { offset, kind }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, PenmanError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    let mut line_start = true;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'\n' => {
                line_start = true;
                i += 1;
                continue;
            }
            c if c.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            // metadata / comment lines
            b'#' if line_start => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            _ => {}
        }
        line_start = false;
        let start = i;
        match c {
            b'(' => {
                toks.push((start, Tok::Open));
                i += 1;
            }
            b')' => {
                toks.push((start, Tok::Close));
                i += 1;
            }
            b'/' => {
                toks.push((start, Tok::Slash));
                i += 1;
            }
            b'"' => {
                i += 1;
                let mut s = String::new();
                loop {
                    let Some(ch) = text[i..].chars().next() else {
                        return Err(err(start, PenmanErrorKind::UnterminatedString));
                    };
                    i += ch.len_utf8();
                    match ch {
                        '"' => break,
                        '\\' => {
                            let Some(esc) = text[i..].chars().next() else {
                                return Err(err(start, PenmanErrorKind::UnterminatedString));
                            };
                            i += esc.len_utf8();
                            s.push(esc);
                        }
                        ch => s.push(ch),
                    }
                }
                let end = symbol_end(bytes, i);
                if !is_alignment(&text[i..end]) {
                    return Err(err(i, PenmanErrorKind::Unexpected(format!("text {:?} after string", &text[i..end]))));
                }
                i = end;
                toks.push((start, Tok::Str(s)));
            }
            b':' => {
                let end = symbol_end(bytes, i + 1);
                let role = strip_alignment(&text[i + 1..end]);
                if role.is_empty() {
                    return Err(err(start, PenmanErrorKind::EmptyRole));
                }
                toks.push((start, Tok::Role(role.to_owned())));
                i = end;
            }
            _ => {
                let end = symbol_end(bytes, i);
                toks.push((start, Tok::Sym(strip_alignment(&text[i..end]).to_owned())));
                i = end;
            }
        }
    }
    Ok(toks)
}

fn symbol_end(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && !bytes[i].is_ascii_whitespace() && !matches!(bytes[i], b'(' | b')' | b'/' | b'"') {
        i += 1;
    }
    i
}

/// `~e.3`, `~e.3,4`, `~3`
fn is_alignment(s: &str) -> bool {
    if s.is_empty() {
        return true;
    }
    let Some(rest) = s.strip_prefix('~') else {
        return false;
    };
    let rest = rest.strip_prefix("e.").unwrap_or(rest);
    !rest.is_empty() && rest.split(',').all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()))
}

fn strip_alignment(s: &str) -> &str {
    match s.find('~') {
        Some(pos) if pos > 0 && is_alignment(&s[pos..]) => &s[..pos],
        _ => s,
    }
}

/// Tokens shaped like PENMAN variables: a lowercase letter alone, or
/// lowercase alphanumerics starting with a letter and containing a digit.
pub(crate) fn looks_like_variable(s: &str) -> bool {
    let b = s.as_bytes();
    match b.first() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    b.iter().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit()) && (b.len() == 1 || b.iter().any(u8::is_ascii_digit))
}

fn is_number(s: &str) -> bool {
    let s = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], Some(&s[p + 1..])),
        None => (s, None),
    };
    let mut parts = mantissa.splitn(2, '.');
    let int = parts.next().unwrap_or("");
    let frac = parts.next();
    let digits = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
    let mantissa_ok = match frac {
        None => digits(int),
        Some(f) => (digits(int) || int.is_empty()) && digits(f),
    };
    let exp_ok = exp.is_none_or(|e| digits(e.strip_prefix(['+', '-']).unwrap_or(e)));
    mantissa_ok && exp_ok
}

enum RawValue {
    Node(String),
    Sym(usize, String),
    Str(String),
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end_offset: usize,
    variables: Vec<(String, String)>,
    raw_slots: Vec<(String, String, RawValue)>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_offset, |(o, _)| *o)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn node(&mut self, incoming: Option<(String, String)>) -> Result<String, PenmanError> {
        let open_at = self.offset();
        match self.next() {
            Some((_, Tok::Open)) => {}
            Some((o, t)) => return Err(err(o, PenmanErrorKind::Unexpected(t.describe()))),
            None => return Err(err(open_at, PenmanErrorKind::Empty)),
        }
        let var = match self.next() {
            Some((_, Tok::Sym(v))) => v,
            Some((_, Tok::Close)) => return Err(err(open_at, PenmanErrorKind::Unexpected("empty node".into()))),
            Some((o, t)) => return Err(err(o, PenmanErrorKind::Unexpected(t.describe()))),
            None => return Err(err(open_at, PenmanErrorKind::Unbalanced)),
        };
        match self.next() {
            Some((_, Tok::Slash)) => {}
            Some((o, _)) => return Err(err(o, PenmanErrorKind::MissingSlash(var))),
            None => return Err(err(self.end_offset, PenmanErrorKind::MissingSlash(var))),
        }
        let concept = match self.next() {
            Some((_, Tok::Sym(c))) | Some((_, Tok::Str(c))) if !c.is_empty() => c,
            Some((o, _)) => return Err(err(o, PenmanErrorKind::MissingConcept)),
            None => return Err(err(self.end_offset, PenmanErrorKind::MissingConcept)),
        };
        if self.variables.iter().any(|(v, _)| *v == var) {
            return Err(err(open_at, PenmanErrorKind::DuplicateVariable(var)));
        }
        self.variables.push((var.clone(), concept));
        if let Some((owner, role)) = incoming {
            self.raw_slots.push((owner, role, RawValue::Node(var.clone())));
        }

        loop {
            let at = self.offset();
            match self.next() {
                Some((_, Tok::Close)) => return Ok(var),
                Some((_, Tok::Role(role))) => match self.peek() {
                    Some(Tok::Open) => {
                        self.node(Some((var.clone(), role)))?;
                    }
                    Some(Tok::Sym(_)) | Some(Tok::Str(_)) => {
                        let (o, tok) = self.next().unwrap();
                        let value = match tok {
                            Tok::Sym(s) => RawValue::Sym(o, s),
                            Tok::Str(s) if s.is_empty() => return Err(err(o, PenmanErrorKind::EmptyConstant)),
                            Tok::Str(s) => RawValue::Str(s),
                            _ => unreachable!(),
                        };
                        self.raw_slots.push((var.clone(), role, value));
                    }
                    _ => return Err(err(at, PenmanErrorKind::RoleWithoutValue(role))),
                },
                Some((o, t)) => return Err(err(o, PenmanErrorKind::Unexpected(t.describe()))),
                None => return Err(err(open_at, PenmanErrorKind::Unbalanced)),
            }
        }
    }
}

/// Parses a single PENMAN expression.
pub fn parse_penman(text: &str) -> Result<PenmanTree, PenmanError> {
    parse_penman_with(text, &HashSet::new())
}

/// Parses a single PENMAN expression, accepting `free_symbols` as constants
/// even where they look like variables.
///
/// Any other variable-shaped symbol that names no defined variable is an
/// undefined reference.
pub fn parse_penman_with(text: &str, free_symbols: &HashSet<String>) -> Result<PenmanTree, PenmanError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(err(0, PenmanErrorKind::Empty));
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end_offset: text.len(),
        variables: Vec::new(),
        raw_slots: Vec::new(),
    };
    let root = p.node(None)?;
    if let Some((o, t)) = p.next() {
        let kind = if t == Tok::Close {
            PenmanErrorKind::Unbalanced
        } else {
            PenmanErrorKind::TrailingInput
        };
        return Err(err(o, kind));
    }

    let defined: HashSet<&str> = p.variables.iter().map(|(v, _)| v.as_str()).collect();
    let mut slots = Vec::with_capacity(p.raw_slots.len());
    for (owner, role, raw) in p.raw_slots {
        let value = match raw {
            RawValue::Node(v) => SlotValue::Node(v),
            RawValue::Str(s) => SlotValue::Constant(Constant::String(s)),
            RawValue::Sym(_, s) if defined.contains(s.as_str()) => SlotValue::Reference(s),
            RawValue::Sym(o, s) if looks_like_variable(&s) && !free_symbols.contains(&s) => {
                return Err(err(o, PenmanErrorKind::UndefinedVariable(s)));
            }
            RawValue::Sym(_, s) if is_number(&s) => SlotValue::Constant(Constant::Number(s)),
            RawValue::Sym(_, s) => SlotValue::Constant(Constant::Symbol(s)),
        };
        slots.push(Slot { owner, role, value });
    }
    Ok(PenmanTree {
        root,
        variables: p.variables,
        slots,
    })
}

/// Splits text into blank-line separated blocks, skipping blocks that hold
/// only comments. Yields `(byte offset, block)`.
pub(crate) fn blocks(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if line.trim().is_empty() {
            if let Some(s) = start.take() {
                out.push((s, &text[s..offset]));
            }
        } else if start.is_none() {
            start = Some(offset);
        }
        offset += line.len();
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out.retain(|(_, b)| b.lines().any(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#')));
    out
}

/// Parses a file of blank-line separated PENMAN expressions.
pub fn parse_amr_file(text: &str) -> Result<Vec<PenmanTree>, PenmanError> {
    let trees = blocks(text)
        .into_iter()
        .map(|(offset, block)| {
            parse_penman(block).map_err(|e| PenmanError {
                offset: e.offset + offset,
                kind: e.kind,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    if trees.is_empty() {
        return Err(err(0, PenmanErrorKind::Empty));
    }
    Ok(trees)
}
