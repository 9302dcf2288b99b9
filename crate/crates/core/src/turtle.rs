//! A Turtle subset.
//!
//! Supported: `@prefix` / `PREFIX` directives, prefixed names, IRIs in angle
//! brackets, the `a` keyword, string literals (short and long forms) with an
//! optional language tag or datatype, numeric and boolean literals,
//! predicate lists (`;`), object lists (`,`) and `#` comments. Blank nodes,
//! collections and `@base` are rejected as unsupported.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// `iri` is fully expanded; `name` is the prefixed form when one is
    /// known, otherwise the bare IRI.
    Resource { iri: String, name: String },
    Literal {
        lexical: String,
        datatype: Option<String>,
        lang: Option<String>,
    },
}

impl Term {
    pub fn is_resource(&self) -> bool {
        matches!(self, Term::Resource { .. })
    }

    /// Prefixed name of a resource, or the lexical form of a literal.
    pub fn text(&self) -> &str {
        match self {
            Term::Resource { name, .. } => name,
            Term::Literal { lexical, .. } => lexical,
        }
    }

    pub fn iri(&self) -> Option<&str> {
        match self {
            Term::Resource { iri, .. } => Some(iri),
            Term::Literal { .. } => None,
        }
    }

    /// True for a resource written as `name` or expanding to `iri`.
    pub fn is(&self, name: &str, iri: &str) -> bool {
        matches!(self, Term::Resource { iri: i, name: n } if n == name || i == iri)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Resource { name, .. } => f.write_str(name),
            Term::Literal { lexical, datatype, lang } => {
                write!(f, "{lexical:?}")?;
                if let Some(l) = lang {
                    write!(f, "@{l}")?;
                }
                if let Some(d) = datatype {
                    write!(f, "^^<{d}>")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TripleStore {
    pub prefixes: BTreeMap<String, String>,
    pub triples: Vec<Triple>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct TurtleError {
    pub line: usize,
    pub column: usize,
    pub kind: TurtleErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TurtleErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown prefix {0:?}")]
    UnknownPrefix(String),
    #[error("unsupported construct: {0}")]
    Unsupported(String),
}

pub fn parse_turtle(text: &str) -> Result<TripleStore, TurtleError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        store: TripleStore::default(),
    };
    p.document()?;
    Ok(p.store)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    store: TripleStore,
}

impl Parser<'_> {
    fn error_at(&self, pos: usize, kind: TurtleErrorKind) -> TurtleError {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(before.chars().count(), |nl| before[nl + 1..].chars().count()) + 1;
        TurtleError { line, column, kind }
    }

    fn syntax(&self, msg: impl Into<String>) -> TurtleError {
        self.error_at(self.pos, TurtleErrorKind::Syntax(msg.into()))
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            let skipped = rest.len() - trimmed.len();
            let comment = trimmed.starts_with('#').then(|| trimmed.find('\n').unwrap_or(trimmed.len()));
            self.pos += skipped;
            if let Some(len) = comment {
                self.pos += len;
            } else {
                return;
            }
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), TurtleError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected {c:?}, found {}", self.describe_next())))
        }
    }

    fn describe_next(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(_) => {
                let word: String = self.rest().chars().take_while(|c| !c.is_whitespace()).take(20).collect();
                format!("{word:?}")
            }
        }
    }

    fn document(&mut self) -> Result<(), TurtleError> {
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(());
            }
            let rest = self.rest();
            if rest.starts_with("@prefix") {
                self.pos += "@prefix".len();
                self.prefix_decl()?;
                self.expect('.')?;
            } else if rest.len() >= 7 && rest[..7].eq_ignore_ascii_case("prefix ") {
                self.pos += "prefix".len();
                self.prefix_decl()?;
            } else if rest.starts_with("@base") || (rest.len() >= 5 && rest[..5].eq_ignore_ascii_case("base ")) {
                return Err(self.error_at(self.pos, TurtleErrorKind::Unsupported("base IRI declarations".into())));
            } else {
                self.triples()?;
                self.expect('.')?;
            }
        }
    }

    fn prefix_decl(&mut self) -> Result<(), TurtleError> {
        self.skip_ws();
        let start = self.pos;
        let name: String = self.rest().chars().take_while(|c| *c != ':' && !c.is_whitespace()).collect();
        self.pos += name.len();
        if self.peek() != Some(':') || !name.chars().all(is_pn_char) {
            self.pos = start;
            return Err(self.syntax("expected a prefix name ending in ':'"));
        }
        self.pos += 1;
        self.skip_ws();
        if self.peek() != Some('<') {
            return Err(self.syntax("expected <IRI> in prefix declaration"));
        }
        let iri = self.iri_ref()?;
        self.store.prefixes.insert(name, iri);
        Ok(())
    }

    fn triples(&mut self) -> Result<(), TurtleError> {
        let subject = self.term(Position::Subject)?;
        loop {
            let predicate = self.term(Position::Predicate)?;
            loop {
                let object = self.term(Position::Object)?;
                self.store.triples.push(Triple {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                if !self.eat(',') {
                    break;
                }
            }
            if !self.eat(';') {
                return Ok(());
            }
            while self.eat(';') {}
            self.skip_ws();
            if matches!(self.peek(), Some('.') | None) {
                return Ok(());
            }
        }
    }

    fn term(&mut self, at: Position) -> Result<Term, TurtleError> {
        self.skip_ws();
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Err(self.syntax("unexpected end of input"));
        };
        let term = match c {
            '[' => return Err(self.error_at(start, TurtleErrorKind::Unsupported("blank node property lists".into()))),
            '(' => return Err(self.error_at(start, TurtleErrorKind::Unsupported("collections".into()))),
            '_' if self.rest().starts_with("_:") => {
                return Err(self.error_at(start, TurtleErrorKind::Unsupported("blank nodes".into())))
            }
            '<' => {
                let iri = self.iri_ref()?;
                let name = self.compact(&iri);
                Term::Resource { iri, name }
            }
            '"' | '\'' => self.literal()?,
            c if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => self.number()?,
            _ => {
                let word = self.word();
                match word.as_str() {
                    "a" if at == Position::Predicate => Term::Resource {
                        iri: format!("{RDF}type"),
                        name: "rdf:type".into(),
                    },
                    "true" | "false" => Term::Literal {
                        lexical: word,
                        datatype: Some(format!("{XSD}boolean")),
                        lang: None,
                    },
                    _ if word.contains(':') => self.prefixed(start, &word)?,
                    "" => return Err(self.syntax(format!("unexpected {}", self.describe_next()))),
                    _ => {
                        self.pos = start;
                        return Err(self.syntax(format!("expected a term, found {word:?}")));
                    }
                }
            }
        };
        if at != Position::Object && !term.is_resource() {
            return Err(self.error_at(start, TurtleErrorKind::Syntax(format!("{at:?} must be a resource"))));
        }
        Ok(term)
    }

    fn word(&mut self) -> String {
        let rest = self.rest();
        let mut end = rest
            .find(|c: char| c.is_whitespace() || matches!(c, ';' | ',' | '"' | '\'' | '<' | '>' | '[' | ']' | '(' | ')' | '#'))
            .unwrap_or(rest.len());
        // a trailing dot terminates the statement
        while end > 0 && rest[..end].ends_with('.') {
            end -= 1;
        }
        let w = rest[..end].to_owned();
        self.pos += end;
        w
    }

    fn prefixed(&self, start: usize, word: &str) -> Result<Term, TurtleError> {
        let (prefix, local) = word.split_once(':').unwrap();
        let Some(ns) = self.store.prefixes.get(prefix) else {
            return Err(self.error_at(start, TurtleErrorKind::UnknownPrefix(prefix.to_owned())));
        };
        if !prefix.chars().all(is_pn_char) {
            return Err(self.error_at(start, TurtleErrorKind::Syntax(format!("invalid prefixed name {word:?}"))));
        }
        Ok(Term::Resource {
            iri: format!("{ns}{local}"),
            name: word.to_owned(),
        })
    }

    fn compact(&self, iri: &str) -> String {
        self.store
            .prefixes
            .iter()
            .filter(|(_, ns)| !ns.is_empty() && iri.starts_with(ns.as_str()))
            .filter(|(_, ns)| {
                let local = &iri[ns.len()..];
                !local.is_empty() && local.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-'))
            })
            .max_by_key(|(_, ns)| ns.len())
            .map(|(p, ns)| format!("{p}:{}", &iri[ns.len()..]))
            .unwrap_or_else(|| iri.to_owned())
    }

    fn iri_ref(&mut self) -> Result<String, TurtleError> {
        let start = self.pos;
        self.pos += 1;
        let Some(len) = self.rest().find('>') else {
            return Err(self.error_at(start, TurtleErrorKind::Syntax("unterminated IRI".into())));
        };
        let iri = &self.rest()[..len];
        if iri.chars().any(|c| c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`')) {
            return Err(self.error_at(start, TurtleErrorKind::Syntax(format!("invalid IRI <{iri}>"))));
        }
        let iri = iri.to_owned();
        self.pos += len + 1;
        Ok(iri)
    }

    fn literal(&mut self) -> Result<Term, TurtleError> {
        let start = self.pos;
        let quote = self.peek().unwrap();
        let long: String = std::iter::repeat_n(quote, 3).collect();
        let is_long = self.rest().starts_with(&long);
        self.pos += if is_long { 3 } else { 1 };
        let mut lexical = String::new();
        loop {
            if is_long && self.rest().starts_with(&long) {
                self.pos += 3;
                break;
            }
            let Some(c) = self.peek() else {
                return Err(self.error_at(start, TurtleErrorKind::Syntax("unterminated string".into())));
            };
            self.pos += c.len_utf8();
            match c {
                c if c == quote && !is_long => break,
                '\n' | '\r' if !is_long => {
                    return Err(self.error_at(start, TurtleErrorKind::Syntax("unterminated string".into())));
                }
                '\\' => lexical.push(self.escape()?),
                c => lexical.push(c),
            }
        }
        let mut lang = None;
        let mut datatype = None;
        if self.peek() == Some('@') {
            self.pos += 1;
            let tag: String = self
                .rest()
                .chars()
                .take_while(|c| c.is_ascii_alphanumeric() || *c == '-')
                .collect();
            if tag.is_empty() {
                return Err(self.syntax("empty language tag"));
            }
            self.pos += tag.len();
            lang = Some(tag);
        } else if self.rest().starts_with("^^") {
            self.pos += 2;
            let at = self.pos;
            let dt = if self.peek() == Some('<') {
                self.iri_ref()?
            } else {
                let w = self.word();
                match self.prefixed(at, &w)? {
                    Term::Resource { iri, .. } => iri,
                    Term::Literal { .. } => unreachable!(),
                }
            };
            datatype = Some(dt);
        }
        Ok(Term::Literal { lexical, datatype, lang })
    }

    fn escape(&mut self) -> Result<char, TurtleError> {
        let at = self.pos - 1;
        let Some(c) = self.peek() else {
            return Err(self.error_at(at, TurtleErrorKind::Syntax("dangling escape".into())));
        };
        self.pos += c.len_utf8();
        Ok(match c {
            't' => '\t',
            'n' => '\n',
            'r' => '\r',
            'b' => '\u{8}',
            'f' => '\u{c}',
            '"' | '\'' | '\\' => c,
            'u' | 'U' => {
                let n = if c == 'u' { 4 } else { 8 };
                let hex = self.rest().get(..n).unwrap_or("");
                let code = u32::from_str_radix(hex, 16)
                    .ok()
                    .filter(|_| hex.len() == n)
                    .and_then(char::from_u32)
                    .ok_or_else(|| self.error_at(at, TurtleErrorKind::Syntax("invalid unicode escape".into())))?;
                self.pos += n;
                code
            }
            other => return Err(self.error_at(at, TurtleErrorKind::Syntax(format!("invalid escape \\{other}")))),
        })
    }

    fn number(&mut self) -> Result<Term, TurtleError> {
        let start = self.pos;
        let word = self.word();
        let body = word.strip_prefix(['+', '-']).unwrap_or(&word);
        let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        let kind = if digits(body) {
            "integer"
        } else if body.contains(['e', 'E']) {
            "double"
        } else if body.split_once('.').is_some_and(|(i, f)| (i.is_empty() || digits(i)) && digits(f)) {
            "decimal"
        } else {
            return Err(self.error_at(start, TurtleErrorKind::Syntax(format!("invalid number {word:?}"))));
        };
        if kind == "double" {
            let (m, e) = body.split_once(['e', 'E']).unwrap();
            let e = e.strip_prefix(['+', '-']).unwrap_or(e);
            let m_ok = digits(m) || m.split_once('.').is_some_and(|(i, f)| (i.is_empty() || digits(i)) && (f.is_empty() || digits(f)));
            if !m_ok || !digits(e) {
                return Err(self.error_at(start, TurtleErrorKind::Syntax(format!("invalid number {word:?}"))));
            }
        }
        Ok(Term::Literal {
            lexical: word,
            datatype: Some(format!("{XSD}{kind}")),
            lang: None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Position {
    Subject,
    Predicate,
    Object,
}

fn is_pn_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.')
}

#[cfg(test)]
mod tests {
    use super::*;

    const PREFIXES: &str = "@prefix sem: <http://x/> .\n@prefix wd: <http://www.wikidata.org/entity/> .\n@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n";

    fn parse(body: &str) -> Result<TripleStore, TurtleError> {
        parse_turtle(&format!("{PREFIXES}{body}"))
    }

    #[test]
    fn a_expands_to_rdf_type() {
        let s = parse("wd:Q1 a sem:Event .").unwrap();
        assert_eq!(s.triples.len(), 1);
        let t = &s.triples[0];
        assert_eq!(t.subject.text(), "wd:Q1");
        assert_eq!(t.subject.iri(), Some("http://www.wikidata.org/entity/Q1"));
        assert!(t.predicate.is("rdf:type", &format!("{RDF}type")));
        assert_eq!(t.object.text(), "sem:Event");
    }

    #[test]
    fn predicate_and_object_lists() {
        let s = parse("wd:Q1 rdfs:label \"A\" ; sem:subEventOf wd:Q2 .").unwrap();
        assert_eq!(s.triples.len(), 2);
        assert_eq!(s.triples[0].subject, s.triples[1].subject);
        let s = parse("wd:Q1 rdfs:label \"A\"@fr, \"B\"@en ;\n  sem:x wd:Q2, wd:Q3 ; .").unwrap();
        assert_eq!(s.triples.len(), 4);
        assert!(matches!(&s.triples[1].object, Term::Literal { lang: Some(l), .. } if l == "en"));
    }

    #[test]
    fn literal_forms() {
        let s = parse(
            "wd:Q1 sem:a \"x\\\"y\\u00e9\" ; sem:b 'single' ; sem:c \"\"\"multi\nline\"\"\" ; sem:d \"5\"^^<http://www.w3.org/2001/XMLSchema#integer> ; sem:e 42 ; sem:f -1.5 ; sem:g true ; sem:h 1e3 .",
        )
        .unwrap();
        let texts: Vec<&str> = s.triples.iter().map(|t| t.object.text()).collect();
        assert_eq!(texts, ["x\"yé", "single", "multi\nline", "5", "42", "-1.5", "true", "1e3"]);
        assert!(matches!(&s.triples[4].object, Term::Literal { datatype: Some(d), .. } if d.ends_with("integer")));
    }

    #[test]
    fn full_iris_are_compacted() {
        let s = parse("<http://www.wikidata.org/entity/Q5> <http://x/p> <http://other/Z> .").unwrap();
        let t = &s.triples[0];
        assert_eq!(t.subject.text(), "wd:Q5");
        assert_eq!(t.predicate.text(), "sem:p");
        assert_eq!(t.object.text(), "http://other/Z");
    }

    #[test]
    fn comments_and_sparql_prefix() {
        let s = parse_turtle("PREFIX ex: <http://ex/>\n# comment\nex:a ex:b ex:c . # trailing\n").unwrap();
        assert_eq!(s.triples.len(), 1);
    }

    #[test]
    fn unsupported_constructs() {
        for body in ["wd:Q1 sem:x [ sem:y wd:Q2 ] .", "wd:Q1 sem:x ( wd:Q2 ) .", "_:b sem:x wd:Q2 .", "@base <http://x/> ."] {
            let err = parse(body).unwrap_err();
            assert!(matches!(err.kind, TurtleErrorKind::Unsupported(_)), "{body}: {err}");
        }
    }

    #[test]
    fn errors_are_located() {
        let err = parse("wd:Q1 nope:x wd:Q2 .").unwrap_err();
        assert_eq!(err.kind, TurtleErrorKind::UnknownPrefix("nope".into()));
        assert_eq!((err.line, err.column), (4, 7));

        let err = parse("wd:Q1 sem:x wd:Q2").unwrap_err();
        assert!(matches!(err.kind, TurtleErrorKind::Syntax(_)));
        let err = parse("\"lit\" sem:x wd:Q2 .").unwrap_err();
        assert!(matches!(err.kind, TurtleErrorKind::Syntax(_)));
        let err = parse("wd:Q1 sem:x \"open .").unwrap_err();
        assert!(matches!(err.kind, TurtleErrorKind::Syntax(_)));
    }
}
