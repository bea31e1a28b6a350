//! Reader and writer for the sectioned `structuredslugs` text format,
//! extended with a `[SYS_TRANS_HARD]` section.
//!
//! Operator precedence, tightest first: `!`, `&`, `|`, `->`, `<->`. Both
//! arrows associate to the right. A trailing `'` primes an identifier.
//! Lines that start with whitespace continue the previous line.

use std::collections::BTreeSet;
use std::fmt;

use crate::logic::{Formula, Gr1Spec, Item, Line, SectionKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parses a complete specification; every identifier must be declared.
pub fn parse(text: &str) -> Result<Gr1Spec, ParseError> {
    parse_impl(text, true)
}

/// Parses a task file whose formulas may mention propositions that are
/// declared later (learned symbols and skills supplied by the encoder).
pub fn parse_task(text: &str) -> Result<Gr1Spec, ParseError> {
    parse_impl(text, false)
}

/// Parses a single formula.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let src = Source { text: text.to_string(), segments: vec![(0, 1, 1)] };
    Parser::new(&src)?.formula_eof()
}

/// A logical line: joined text plus (offset, line, column) for each physical
/// piece so errors can point at the original position.
struct Source {
    text: String,
    segments: Vec<(usize, usize, usize)>,
}

impl Source {
    fn locate(&self, offset: usize) -> (usize, usize) {
        let seg = self.segments.iter().rev().find(|s| s.0 <= offset).unwrap_or(&self.segments[0]);
        (seg.1, seg.2 + (offset - seg.0))
    }
}

enum Pending {
    Decl(Source),
    Formula(Source),
}

fn parse_impl(text: &str, strict: bool) -> Result<Gr1Spec, ParseError> {
    let mut spec = Gr1Spec::default();
    let mut current: Option<SectionKind> = None;
    let mut seen: BTreeSet<SectionKind> = BTreeSet::new();
    // Entries are collected raw first so continuation lines can be folded in.
    let mut raw: Vec<(SectionKind, Pending, usize)> = Vec::new();
    let mut comments: Vec<(Option<SectionKind>, String, usize, usize)> = Vec::new();
    let mut order = 0usize;

    for (idx, physical) in text.lines().enumerate() {
        let lineno = idx + 1;
        let physical = physical.strip_suffix('\r').unwrap_or(physical);
        let trimmed = physical.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = physical.len() - physical.trim_start().len();
        if let Some(body) = trimmed.strip_prefix('#') {
            comments.push((current, body.to_string(), lineno, order));
            order += 1;
            continue;
        }
        if trimmed.starts_with('[') {
            let Some(name) = trimmed.strip_prefix('[').and_then(|t| t.strip_suffix(']')) else {
                return Err(ParseError { line: lineno, column: indent + 1, message: "malformed section header".into() });
            };
            let Some(kind) = SectionKind::from_header(name) else {
                return Err(ParseError { line: lineno, column: indent + 1, message: format!("unknown section `[{name}]`") });
            };
            if !seen.insert(kind) {
                return Err(ParseError { line: lineno, column: indent + 1, message: format!("duplicate section `[{name}]`") });
            }
            current = Some(kind);
            continue;
        }
        let Some(kind) = current else {
            return Err(ParseError { line: lineno, column: indent + 1, message: "content before the first section header".into() });
        };
        let continues = indent > 0
            && matches!(raw.last(), Some((k, Pending::Formula(_), o)) if *k == kind && *o + 1 == order);
        if continues {
            let Some((_, Pending::Formula(src), _)) = raw.last_mut() else { unreachable!() };
            src.text.push(' ');
            src.segments.push((src.text.len(), lineno, indent + 1));
            src.text.push_str(trimmed);
            continue;
        }
        let src = Source { text: trimmed.to_string(), segments: vec![(0, lineno, indent + 1)] };
        let pending = if kind.is_declaration() { Pending::Decl(src) } else { Pending::Formula(src) };
        raw.push((kind, pending, order));
        order += 1;
    }

    let mut declared: BTreeSet<String> = BTreeSet::new();
    let mut entries: Vec<(usize, SectionKind, Line)> = Vec::new();
    for (kind, p, ord) in &raw {
        if let Pending::Decl(src) = p {
            let (line, column) = src.locate(0);
            if !is_identifier(&src.text) {
                return Err(ParseError { line, column, message: format!("expected a proposition name, found `{}`", src.text) });
            }
            declared.insert(src.text.clone());
            entries.push((*ord, *kind, Line { item: Item::Decl(src.text.clone()), line }));
        }
    }
    for (kind, p, ord) in &raw {
        if let Pending::Formula(src) = p {
            let f = Parser::new(src)?.formula_eof()?;
            if strict {
                check_declared(&f, src, &declared)?;
            }
            let line = src.segments[0].1;
            entries.push((*ord, *kind, Line { item: Item::Formula(f), line }));
        }
    }
    for (sec, text, line, ord) in comments {
        match sec {
            Some(kind) => entries.push((ord, kind, Line { item: Item::Comment(text), line })),
            None => spec.preamble.push(text),
        }
    }
    entries.sort_by_key(|e| e.0);
    for (_, kind, line) in entries {
        spec.section_mut(kind).lines.push(line);
    }
    Ok(spec)
}

fn check_declared(f: &Formula, src: &Source, declared: &BTreeSet<String>) -> Result<(), ParseError> {
    for a in f.atoms() {
        if !declared.contains(&a.name) {
            let off = find_identifier(&src.text, &a.name).unwrap_or(0);
            let (line, column) = src.locate(off);
            return Err(ParseError { line, column, message: format!("undeclared identifier `{}`", a.name) });
        }
    }
    Ok(())
}

fn find_identifier(text: &str, name: &str) -> Option<usize> {
    let bytes = text.as_bytes();
    let mut start = 0;
    while let Some(pos) = text[start..].find(name) {
        let i = start + pos;
        let j = i + name.len();
        let before_ok = i == 0 || !is_ident_byte(bytes[i - 1]);
        let after_ok = j >= bytes.len() || !is_ident_byte(bytes[j]);
        if before_ok && after_ok {
            return Some(i);
        }
        start = i + 1;
    }
    None
}

fn is_ident_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'.' || b == b'@'
}

fn is_identifier(s: &str) -> bool {
    let b = s.as_bytes();
    !b.is_empty() && (b[0].is_ascii_alphabetic() || b[0] == b'_') && b.iter().all(|&c| is_ident_byte(c))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Const(bool),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Prime,
    End,
}

struct Parser<'a> {
    src: &'a Source,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a Source) -> Result<Self, ParseError> {
        let mut toks = Vec::new();
        let b = src.text.as_bytes();
        let mut i = 0;
        while i < b.len() {
            let c = b[i];
            let start = i;
            let tok = match c {
                b' ' | b'\t' => {
                    i += 1;
                    continue;
                }
                b'!' => Tok::Not,
                b'&' => Tok::And,
                b'|' => Tok::Or,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'\'' => Tok::Prime,
                b'-' if b.get(i + 1) == Some(&b'>') => {
                    i += 1;
                    Tok::Implies
                }
                b'<' if b.get(i + 1) == Some(&b'-') && b.get(i + 2) == Some(&b'>') => {
                    i += 2;
                    Tok::Iff
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while i + 1 < b.len() && is_ident_byte(b[i + 1]) {
                        i += 1;
                    }
                    match &src.text[start..=i] {
                        "TRUE" => Tok::Const(true),
                        "FALSE" => Tok::Const(false),
                        s => Tok::Ident(s.to_string()),
                    }
                }
                _ => {
                    let (line, column) = src.locate(start);
                    let ch = src.text[start..].chars().next().unwrap_or('?');
                    return Err(ParseError { line, column, message: format!("unexpected character `{ch}`") });
                }
            };
            i += 1;
            toks.push((tok, start));
        }
        toks.push((Tok::End, b.len()));
        Ok(Parser { src, toks, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: String) -> ParseError {
        let (line, column) = self.src.locate(self.toks[self.pos].1);
        ParseError { line, column, message: format!("syntax error: {message}") }
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Const(true) => "`TRUE`".into(),
            Tok::Const(false) => "`FALSE`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Prime => "`'`".into(),
            Tok::End => "end of line".into(),
        }
    }

    fn formula_eof(mut self) -> Result<Formula, ParseError> {
        let f = self.iff()?;
        if *self.peek() != Tok::End {
            return Err(self.error(format!("unexpected {}", Self::describe(self.peek()))));
        }
        Ok(f)
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implies()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut items = vec![self.and()?];
        while *self.peek() == Tok::Or {
            self.bump();
            items.push(self.and()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { flatten_or(items) })
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut items = vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.bump();
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { flatten_and(items) })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.bump() {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::LParen => {
                let f = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(format!("expected `)`, found {}", Self::describe(self.peek()))));
                }
                self.bump();
                Ok(f)
            }
            Tok::Const(b) => Ok(Formula::Const(b)),
            Tok::Ident(name) => {
                if *self.peek() == Tok::Prime {
                    self.bump();
                    Ok(Formula::next(name))
                } else {
                    Ok(Formula::atom(name))
                }
            }
            t => {
                if t != Tok::End {
                    self.pos -= 1;
                }
                Err(self.error(format!("expected an operand, found {}", Self::describe(&t))))
            }
        }
    }
}

// Unlike `Formula::and`, these keep constant operands so the text survives.
fn flatten_and(items: Vec<Formula>) -> Formula {
    let mut out = Vec::new();
    for f in items {
        match f {
            Formula::And(xs) => out.extend(xs),
            other => out.push(other),
        }
    }
    Formula::And(out)
}

fn flatten_or(items: Vec<Formula>) -> Formula {
    let mut out = Vec::new();
    for f in items {
        match f {
            Formula::Or(xs) => out.extend(xs),
            other => out.push(other),
        }
    }
    Formula::Or(out)
}

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 0,
        Formula::Implies(..) => 1,
        Formula::Or(xs) if xs.len() > 1 => 2,
        Formula::And(xs) if xs.len() > 1 => 3,
        Formula::Or(xs) | Formula::And(xs) => xs.first().map_or(5, prec),
        Formula::Not(_) => 4,
        Formula::Const(_) | Formula::Atom(_) => 5,
    }
}

fn write_child(out: &mut String, f: &Formula, parens: bool) {
    if parens {
        out.push('(');
        write_formula(out, f);
        out.push(')');
    } else {
        write_formula(out, f);
    }
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::Const(true) => out.push_str("TRUE"),
        Formula::Const(false) => out.push_str("FALSE"),
        Formula::Atom(a) => {
            out.push_str(&a.name);
            if a.primed {
                out.push('\'');
            }
        }
        Formula::Not(x) => {
            out.push('!');
            write_child(out, x, prec(x) < 4);
        }
        Formula::And(xs) | Formula::Or(xs) if xs.is_empty() => {
            out.push_str(if matches!(f, Formula::And(_)) { "TRUE" } else { "FALSE" });
        }
        Formula::And(xs) | Formula::Or(xs) => {
            let (p, sep) = if matches!(f, Formula::And(_)) { (3, " & ") } else { (2, " | ") };
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                // Nested same-operator lists are bracketed so structure survives.
                write_child(out, x, prec(x) <= p && xs.len() > 1);
            }
        }
        Formula::Implies(a, b) => {
            write_child(out, a, prec(a) <= 1);
            out.push_str(" -> ");
            write_child(out, b, prec(b) < 1);
        }
        Formula::Iff(a, b) => {
            write_child(out, a, prec(a) == 0);
            out.push_str(" <-> ");
            write_child(out, b, false);
        }
    }
}

/// Renders a formula with the fewest parentheses the grammar allows.
pub fn formula_to_string(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

/// Canonical text: all nine sections in fixed order, one entry per line,
/// comments kept in place, a blank line between sections.
pub fn serialize(spec: &Gr1Spec) -> String {
    let mut out = String::new();
    for c in &spec.preamble {
        out.push('#');
        out.push_str(c);
        out.push('\n');
    }
    if !spec.preamble.is_empty() {
        out.push('\n');
    }
    for (i, kind) in SectionKind::ALL.into_iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push('[');
        out.push_str(kind.header());
        out.push_str("]\n");
        for l in &spec.section(kind).lines {
            match &l.item {
                Item::Decl(n) => out.push_str(n),
                Item::Formula(f) => write_formula(&mut out, f),
                Item::Comment(c) => {
                    out.push('#');
                    out.push_str(c);
                }
            }
            out.push('\n');
        }
    }
    out
}

/// Appends the hard system safety formulas to `sys_trans`, keeping the hard
/// section as is.
pub fn merge_hard(spec: &Gr1Spec) -> Gr1Spec {
    let mut out = spec.clone();
    for l in &spec.sys_trans_hard.lines {
        if let Item::Formula(_) = l.item {
            out.sys_trans.lines.push(l.clone());
        }
    }
    out
}
