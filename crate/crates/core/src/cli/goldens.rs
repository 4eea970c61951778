//! Parser for the goldens file.
//!
//! The file is a sequence of block records:
//!
//! ```text
//! # comment
//! record A0
//! kind    coefficient
//! anchor  A-family coefficients, first closed form
//! quote   -\frac{(m+1)(m+2)\cdot\cdot\cdot(2m+1)}{2^{2m+2}}
//! numer   (/ 1 m)
//!   ...   (indented lines continue the previous field)
//! end
//! ```
//!
//! Every record needs `kind`, `anchor` and `quote`. The remaining fields
//! depend on the kind:
//!
//! | kind          | fields                                                        |
//! |---------------|---------------------------------------------------------------|
//! | `coefficient` | `numer`, `pole`, `order`, `closed`, optional `alt_order`      |
//! | `input`       | `expr`, optional `derive` (an expression that must agree)     |
//! | `display`     | `source`, `value`, `complete` (`yes` or `no`)                 |
//! | `case`        | `theorem`, `case`, `left` (repeatable), `right`, `j`, `k`, `alpha`, `expect` |
//! | `theorem`     | `theorem`, `expect`                                           |
//!
//! Expression-valued fields use the syntax of [`super::expr`] and are
//! syntax-checked at load time.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use super::expr::{self, Sexp};

/// The goldens shipped with the crate.
pub const BUILTIN: &str = include_str!("../../data/goldens.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoldensError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: record `{name}` is missing field `{field}`")]
    MissingField { line: usize, name: String, field: String },
    #[error("line {line}: duplicate record `{name}` (first defined on line {first})")]
    Duplicate { line: usize, name: String, first: usize },
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Coefficient,
    Input,
    Display,
    Case,
    Theorem,
}

impl Kind {
    fn parse(s: &str) -> Option<Kind> {
        Some(match s {
            "coefficient" => Kind::Coefficient,
            "input" => Kind::Input,
            "display" => Kind::Display,
            "case" => Kind::Case,
            "theorem" => Kind::Theorem,
            _ => return None,
        })
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            Kind::Coefficient => &["numer", "pole", "order", "closed"],
            Kind::Input => &["expr"],
            Kind::Display => &["source", "value", "complete"],
            Kind::Case => &["theorem", "case", "left", "right", "j", "k", "alpha", "expect"],
            Kind::Theorem => &["theorem", "expect"],
        }
    }

    fn optional(self) -> &'static [&'static str] {
        match self {
            Kind::Coefficient => &["alt_order"],
            Kind::Input => &["derive"],
            _ => &[],
        }
    }

    /// Whether `key` holds an expression (as opposed to plain text) for this kind.
    pub fn is_expr_field(self, key: &str) -> bool {
        !matches!((self, key), (Kind::Case, "theorem" | "case") | (Kind::Theorem, "theorem") | (Kind::Display, "complete"))
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Coefficient => "coefficient",
            Kind::Input => "input",
            Kind::Display => "display",
            Kind::Case => "case",
            Kind::Theorem => "theorem",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub name: String,
    pub kind: Kind,
    pub line: usize,
    pub anchor: String,
    pub quote: String,
    fields: Vec<Field>,
}

impl Record {
    /// All fields in file order.
    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn field(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|f| f.key == key)
    }

    pub fn fields_named<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a Field> + 'a {
        self.fields.iter().filter(move |f| f.key == key)
    }

    /// A plain-text field. Panics only if the record skipped validation.
    pub fn text(&self, key: &str) -> &str {
        &self.field(key).unwrap_or_else(|| panic!("validated record `{}` lacks `{}`", self.name, key)).value
    }

    pub fn expr(&self, key: &str) -> Option<Sexp> {
        self.field(key).map(|f| expr::parse(&f.value, f.line).expect("expression fields are checked at load"))
    }

    pub fn exprs(&self, key: &str) -> Vec<Sexp> {
        self.fields_named(key)
            .map(|f| expr::parse(&f.value, f.line).expect("expression fields are checked at load"))
            .collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Goldens {
    records: Vec<Record>,
    index: HashMap<String, usize>,
}

impl Goldens {
    pub fn builtin() -> Goldens {
        Goldens::parse(BUILTIN).expect("the bundled goldens file parses")
    }

    pub fn load(path: &Path) -> Result<Goldens, GoldensError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GoldensError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        Goldens::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Goldens, GoldensError> {
        let mut out = Goldens::default();
        let mut open: Option<(String, usize, Vec<Field>)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let syntax = |msg: String| GoldensError::Syntax { line, msg };
            let indented = raw.starts_with(' ') || raw.starts_with('\t');
            match open.as_mut() {
                None => {
                    let name = trimmed
                        .strip_prefix("record ")
                        .map(str::trim)
                        .filter(|n| !n.is_empty() && !n.contains(char::is_whitespace))
                        .ok_or_else(|| syntax(format!("expected `record NAME`, found `{}`", trimmed)))?;
                    if let Some(&first) = out.index.get(name) {
                        return Err(GoldensError::Duplicate { line, name: name.to_string(), first: out.records[first].line });
                    }
                    open = Some((name.to_string(), line, Vec::new()));
                }
                Some((_, _, fields)) if indented => {
                    let last = fields.last_mut().ok_or_else(|| syntax("continuation line before any field".into()))?;
                    last.value.push('\n');
                    last.value.push_str(trimmed);
                }
                Some(_) if trimmed == "end" => {
                    let (name, start, fields) = open.take().expect("record is open");
                    let rec = finish(name, start, fields)?;
                    out.index.insert(rec.name.clone(), out.records.len());
                    out.records.push(rec);
                }
                Some((_, _, fields)) => {
                    let (key, value) = match trimmed.split_once(char::is_whitespace) {
                        Some((k, v)) => (k, v.trim()),
                        None => (trimmed, ""),
                    };
                    if key == "record" {
                        return Err(syntax("`record` inside an unterminated record".into()));
                    }
                    fields.push(Field { key: key.to_string(), value: value.to_string(), line });
                }
            }
        }
        if let Some((name, start, _)) = open {
            return Err(GoldensError::Syntax { line: start, msg: format!("record `{}` has no `end`", name) });
        }
        Ok(out)
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn get(&self, name: &str) -> Option<&Record> {
        self.index.get(name).map(|&k| &self.records[k])
    }

    pub fn of_kind(&self, kind: Kind) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(move |r| r.kind == kind)
    }
}

fn finish(name: String, start: usize, mut fields: Vec<Field>) -> Result<Record, GoldensError> {
    let missing = |field: &str| GoldensError::MissingField { line: start, name: name.clone(), field: field.to_string() };
    let mut take = |key: &str| -> Option<Field> {
        let pos = fields.iter().position(|f| f.key == key)?;
        Some(fields.remove(pos))
    };
    let kind_field = take("kind").ok_or_else(|| missing("kind"))?;
    let kind = Kind::parse(&kind_field.value).ok_or_else(|| GoldensError::Syntax {
        line: kind_field.line,
        msg: format!("unknown record kind `{}`", kind_field.value),
    })?;
    let anchor = take("anchor").ok_or_else(|| missing("anchor"))?.value;
    let quote = take("quote").ok_or_else(|| missing("quote"))?.value;
    for req in kind.required() {
        if !fields.iter().any(|f| f.key == *req) {
            return Err(missing(req));
        }
    }
    for f in &fields {
        let known = kind.required().contains(&f.key.as_str()) || kind.optional().contains(&f.key.as_str());
        if !known {
            return Err(GoldensError::Syntax { line: f.line, msg: format!("field `{}` is not valid for a {} record", f.key, kind) });
        }
        let repeatable = kind == Kind::Case && f.key == "left";
        if !repeatable && fields.iter().filter(|g| g.key == f.key).count() > 1 {
            return Err(GoldensError::Syntax { line: f.line, msg: format!("field `{}` given twice", f.key) });
        }
        if kind.is_expr_field(&f.key) {
            expr::parse(&f.value, f.line).map_err(|e| GoldensError::Syntax { line: e.line, msg: e.msg })?;
        }
    }
    if kind == Kind::Display {
        let c = &fields.iter().find(|f| f.key == "complete").expect("checked").value;
        if c != "yes" && c != "no" {
            return Err(GoldensError::Syntax { line: start, msg: format!("`complete` must be yes or no, found `{}`", c) });
        }
    }
    Ok(Record { name, kind, line: start, anchor, quote, fields })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: &str = "record A1\nkind coefficient\nanchor a\nquote q\nnumer (/ 1 (^ (+ t i) m))\npole 0\norder (+ m 2)\nclosed 0\nend\n";

    #[test]
    fn parses_a_record() {
        let g = Goldens::parse(ONE).unwrap();
        let r = g.get("A1").unwrap();
        assert_eq!(r.kind, Kind::Coefficient);
        assert_eq!(r.text("pole"), "0");
    }

    #[test]
    fn continuation_lines_join() {
        let text = "record x\nkind input\nanchor a\nquote q\nexpr (+ 1\n   2)\nend\n";
        let g = Goldens::parse(text).unwrap();
        assert_eq!(g.get("x").unwrap().text("expr"), "(+ 1\n2)");
    }

    #[test]
    fn rejects_missing_quote_and_duplicates() {
        let no_quote = ONE.replace("quote q\n", "");
        assert!(matches!(Goldens::parse(&no_quote), Err(GoldensError::MissingField { ref field, .. }) if field == "quote"));
        let dup = format!("{}{}", ONE, ONE);
        assert!(matches!(Goldens::parse(&dup), Err(GoldensError::Duplicate { line: 10, .. })));
    }

    #[test]
    fn syntax_errors_report_lines() {
        let bad = ONE.replace("closed 0", "closed (+ 1");
        assert!(matches!(Goldens::parse(&bad), Err(GoldensError::Syntax { line: 8, .. })));
        assert!(matches!(Goldens::parse("record a\nkind input\n"), Err(GoldensError::Syntax { line: 1, .. })));
    }
}
