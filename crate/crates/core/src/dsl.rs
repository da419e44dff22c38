//! Textual ring expressions.
//!
//! Grammar (case-sensitive, whitespace-insensitive, unsigned decimal integers):
//!
//! ```text
//! expr := "Z(" int ")"
//!       | "Prod(" expr ("," expr)+ ")"
//!       | "Mat(" expr "," int ")"
//!       | "UT(" expr "," int ")"
//!       | "Tnk(" expr "," int "," int ")"
//!       | "Triv(" expr ")"
//!       | "PolyMod(" expr "," int ")"
//! ```
//!
//! [`parse_extended`] additionally accepts `Quot(expr, [i, ...])`,
//! `Sub(expr, [i, ...])` and `Opp(expr)`, where the bracketed integers are
//! dense element indices of the inner ring. These forms name quotients,
//! generated subrings and opposite rings in reports and configuration files.

use std::fmt;

use serde::Serialize;

use crate::constructions::{Limits, RingDescriptor};
use crate::error::RingError;
use crate::ring::{Idx, Ring};

/// The grammar as shown in CLI help.
pub const GRAMMAR: &str = r#"expr := "Z(" int ")" | "Prod(" expr ("," expr)+ ")" | "Mat(" expr "," int ")" | "UT(" expr "," int ")" | "Tnk(" expr "," int "," int ")" | "Triv(" expr ")" | "PolyMod(" expr "," int ")""#;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone)]
pub struct RingExpr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub enum ExprKind {
    Zn(u64),
    Prod(Vec<RingExpr>),
    Mat(Box<RingExpr>, usize),
    UT(Box<RingExpr>, usize),
    Tnk(Box<RingExpr>, usize, usize),
    Triv(Box<RingExpr>),
    PolyMod(Box<RingExpr>, usize),
    Quot(Box<RingExpr>, Vec<Idx>),
    Sub(Box<RingExpr>, Vec<Idx>),
    Opp(Box<RingExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub message: String,
    /// Byte offset into the input.
    pub offset: usize,
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// A construction error pinned to the expression node that caused it.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{error} (at {}..{})", span.start, span.end)]
pub struct ElaborateError {
    pub span: Span,
    pub error: RingError,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Bad(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::LParen => "\"(\"".into(),
            Tok::RParen => "\")\"".into(),
            Tok::LBracket => "\"[\"".into(),
            Tok::RBracket => "\"]\"".into(),
            Tok::Comma => "\",\"".into(),
            Tok::Bad(c) => format!("character `{c}`"),
        }
    }
}

fn lex(input: &str) -> Vec<(Tok, Span)> {
    let bytes: Vec<(usize, char)> = input.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let (start, c) = bytes[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = single {
            out.push((
                t,
                Span {
                    start,
                    end: start + 1,
                },
            ));
            i += 1;
            continue;
        }
        let take = |pred: fn(char) -> bool, i: &mut usize| {
            while *i < bytes.len() && pred(bytes[*i].1) {
                *i += 1;
            }
            let end = bytes.get(*i).map_or(input.len(), |b| b.0);
            (input[start..end].to_string(), end)
        };
        if c.is_ascii_alphabetic() {
            let (s, end) = take(|c| c.is_ascii_alphanumeric(), &mut i);
            out.push((Tok::Ident(s), Span { start, end }));
        } else if c.is_ascii_digit() {
            let (s, end) = take(|c| c.is_ascii_digit(), &mut i);
            out.push((Tok::Int(s), Span { start, end }));
        } else {
            out.push((
                Tok::Bad(c),
                Span {
                    start,
                    end: start + c.len_utf8(),
                },
            ));
            i += 1;
        }
    }
    out
}

const CORE_CTORS: [&str; 7] = ["Z", "Prod", "Mat", "UT", "Tnk", "Triv", "PolyMod"];
const EXTENDED_CTORS: [&str; 3] = ["Quot", "Sub", "Opp"];

enum Arg {
    Int(u64, Span),
    Expr(RingExpr),
    List(Vec<Idx>, Span),
}

impl Arg {
    fn span(&self) -> Span {
        match self {
            Arg::Int(_, s) | Arg::List(_, s) => *s,
            Arg::Expr(e) => e.span,
        }
    }
}

struct Parser<'a> {
    input: &'a str,
    toks: Vec<(Tok, Span)>,
    pos: usize,
    extended: bool,
}

impl<'a> Parser<'a> {
    fn error_at(&self, offset: usize, message: String, expected: &[&str]) -> ParseError {
        let before = &self.input[..offset.min(self.input.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().unwrap_or("").chars().count() + 1;
        ParseError {
            message,
            offset,
            line,
            column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        match self.toks.get(self.pos) {
            Some((t, span)) => {
                self.error_at(span.start, format!("unexpected {}", t.describe()), expected)
            }
            None => self.error_at(self.input.len(), "unexpected end of input".into(), expected),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn bump(&mut self) -> Span {
        let s = self.toks[self.pos].1;
        self.pos += 1;
        s
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<Span, ParseError> {
        if self.peek() == Some(&tok) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[name]))
        }
    }

    fn ctor_names(&self) -> Vec<&'static str> {
        let mut v: Vec<&str> = CORE_CTORS.to_vec();
        if self.extended {
            v.extend(EXTENDED_CTORS);
        }
        v
    }

    fn int(&self, s: &str, span: Span) -> Result<u64, ParseError> {
        s.parse::<u64>()
            .map_err(|_| self.error_at(span.start, format!("integer `{s}` is too large"), &[]))
    }

    fn expr(&mut self) -> Result<RingExpr, ParseError> {
        let names = self.ctor_names();
        let (name, start) = match self.toks.get(self.pos) {
            Some((Tok::Ident(s), span)) if names.contains(&s.as_str()) => (s.clone(), span.start),
            _ => return Err(self.unexpected(&names)),
        };
        self.bump();
        self.expect(Tok::LParen, "\"(\"")?;
        let mut args = Vec::new();
        loop {
            args.push(self.arg()?);
            match self.peek() {
                Some(Tok::Comma) => {
                    self.bump();
                }
                Some(Tok::RParen) => break,
                _ => return Err(self.unexpected(&["\")\"", "\",\""])),
            }
        }
        let end = self.bump().end;
        let span = Span { start, end };
        self.build(&name, args, span)
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Int(s), span)) => {
                self.bump();
                Ok(Arg::Int(self.int(&s, span)?, span))
            }
            Some((Tok::LBracket, open)) if self.extended => {
                self.bump();
                let mut items = Vec::new();
                if self.peek() == Some(&Tok::RBracket) {
                    let close = self.bump();
                    return Ok(Arg::List(
                        items,
                        Span {
                            start: open.start,
                            end: close.end,
                        },
                    ));
                }
                loop {
                    match self.toks.get(self.pos).cloned() {
                        Some((Tok::Int(s), span)) => {
                            self.bump();
                            let v = self.int(&s, span)?;
                            let v = Idx::try_from(v).map_err(|_| {
                                self.error_at(span.start, format!("index `{s}` is too large"), &[])
                            })?;
                            items.push(v);
                        }
                        _ => return Err(self.unexpected(&["integer"])),
                    }
                    match self.peek() {
                        Some(Tok::Comma) => {
                            self.bump();
                        }
                        Some(Tok::RBracket) => {
                            let close = self.bump();
                            return Ok(Arg::List(
                                items,
                                Span {
                                    start: open.start,
                                    end: close.end,
                                },
                            ));
                        }
                        _ => return Err(self.unexpected(&["\"]\"", "\",\""])),
                    }
                }
            }
            Some((Tok::Ident(_), _)) => Ok(Arg::Expr(self.expr()?)),
            _ => {
                let mut exp = self.ctor_names();
                exp.push("integer");
                Err(self.unexpected(&exp))
            }
        }
    }

    fn build(&self, name: &str, args: Vec<Arg>, span: Span) -> Result<RingExpr, ParseError> {
        let signature = match name {
            "Z" => "Z(int)",
            "Prod" => "Prod(expr, expr, ...)",
            "Mat" => "Mat(expr, int)",
            "UT" => "UT(expr, int)",
            "Tnk" => "Tnk(expr, int, int)",
            "Triv" => "Triv(expr)",
            "PolyMod" => "PolyMod(expr, int)",
            "Quot" => "Quot(expr, [int, ...])",
            "Sub" => "Sub(expr, [int, ...])",
            _ => "Opp(expr)",
        };
        let bad = |at: Span, what: &str| -> ParseError {
            self.error_at(at.start, format!("{name} takes {signature}: {what}"), &[])
        };
        let mut it = args.into_iter();
        let ring = |it: &mut std::vec::IntoIter<Arg>| -> Result<Box<RingExpr>, ParseError> {
            match it.next() {
                Some(Arg::Expr(e)) => Ok(Box::new(e)),
                Some(other) => Err(bad(other.span(), "expected a ring expression")),
                None => Err(bad(span, "missing ring argument")),
            }
        };
        let int = |it: &mut std::vec::IntoIter<Arg>| -> Result<u64, ParseError> {
            match it.next() {
                Some(Arg::Int(v, _)) => Ok(v),
                Some(other) => Err(bad(other.span(), "expected an integer")),
                None => Err(bad(span, "missing integer argument")),
            }
        };
        let size = |v: u64| -> Result<usize, ParseError> {
            usize::try_from(v).map_err(|_| self.error_at(span.start, "size too large".into(), &[]))
        };
        let kind = match name {
            "Z" => ExprKind::Zn(int(&mut it)?),
            "Prod" => {
                let mut fs = Vec::new();
                while it.len() > 0 {
                    fs.push(*ring(&mut it)?);
                }
                if fs.len() < 2 {
                    return Err(bad(span, "a product needs at least two factors"));
                }
                ExprKind::Prod(fs)
            }
            "Mat" => {
                let b = ring(&mut it)?;
                ExprKind::Mat(b, size(int(&mut it)?)?)
            }
            "UT" => {
                let b = ring(&mut it)?;
                ExprKind::UT(b, size(int(&mut it)?)?)
            }
            "Tnk" => {
                let b = ring(&mut it)?;
                let n = size(int(&mut it)?)?;
                ExprKind::Tnk(b, n, size(int(&mut it)?)?)
            }
            "Triv" => ExprKind::Triv(ring(&mut it)?),
            "PolyMod" => {
                let b = ring(&mut it)?;
                ExprKind::PolyMod(b, size(int(&mut it)?)?)
            }
            "Quot" | "Sub" => {
                let b = ring(&mut it)?;
                let list = match it.next() {
                    Some(Arg::List(v, _)) => v,
                    Some(other) => return Err(bad(other.span(), "expected an index list")),
                    None => return Err(bad(span, "missing index list")),
                };
                if name == "Quot" {
                    ExprKind::Quot(b, list)
                } else {
                    ExprKind::Sub(b, list)
                }
            }
            _ => ExprKind::Opp(ring(&mut it)?),
        };
        if let Some(extra) = it.next() {
            return Err(bad(extra.span(), "too many arguments"));
        }
        Ok(RingExpr { kind, span })
    }
}

fn parse_with(input: &str, extended: bool) -> Result<RingExpr, ParseError> {
    let mut p = Parser {
        input,
        toks: lex(input),
        pos: 0,
        extended,
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(e)
}

/// Parses the core grammar.
pub fn parse(input: &str) -> Result<RingExpr, ParseError> {
    parse_with(input, false)
}

/// Parses the core grammar plus `Quot`, `Sub` and `Opp`.
pub fn parse_extended(input: &str) -> Result<RingExpr, ParseError> {
    parse_with(input, true)
}

/// Canonical text: one space after each comma.
pub fn pretty(e: &RingExpr) -> String {
    e.to_descriptor().to_string()
}

/// Builds the ring an expression denotes.
pub fn elaborate(e: &RingExpr) -> Result<Ring, ElaborateError> {
    elaborate_with(e, &Limits::default())
}

pub fn elaborate_with(e: &RingExpr, limits: &Limits) -> Result<Ring, ElaborateError> {
    let at = |error: RingError| ElaborateError {
        span: e.span,
        error,
    };
    let sub = |b: &RingExpr| elaborate_with(b, limits);
    match &e.kind {
        ExprKind::Zn(n) => limits.zn(*n).map_err(at),
        ExprKind::Prod(fs) => {
            let rings = fs.iter().map(sub).collect::<Result<Vec<_>, _>>()?;
            limits.product(&rings).map_err(at)
        }
        ExprKind::Mat(b, n) => limits.matrix(&sub(b)?, *n).map_err(at),
        ExprKind::UT(b, n) => limits.upper_triangular(&sub(b)?, *n).map_err(at),
        ExprKind::Tnk(b, n, k) => limits.tnk(&sub(b)?, *n, *k).map_err(at),
        ExprKind::Triv(b) => limits.trivial_extension(&sub(b)?).map_err(at),
        ExprKind::PolyMod(b, n) => limits.poly_mod(&sub(b)?, *n).map_err(at),
        ExprKind::Quot(..) | ExprKind::Sub(..) | ExprKind::Opp(_) => {
            let base = match &e.kind {
                ExprKind::Quot(b, _) | ExprKind::Sub(b, _) | ExprKind::Opp(b) => sub(b)?,
                _ => unreachable!(),
            };
            let d = e.to_descriptor();
            // the base is rebuilt by the descriptor; validate indices against it first
            if let ExprKind::Quot(_, g) | ExprKind::Sub(_, g) = &e.kind {
                if let Some(bad) = g.iter().find(|&&i| i as usize >= base.order()) {
                    return Err(at(RingError::InvalidParameter(format!(
                        "index {bad} out of range for {} (order {})",
                        base.label(),
                        base.order()
                    ))));
                }
            }
            d.build_with(limits).map_err(at)
        }
    }
}

impl RingExpr {
    pub fn to_descriptor(&self) -> RingDescriptor {
        use RingDescriptor as D;
        match &self.kind {
            ExprKind::Zn(n) => D::Zn(*n),
            ExprKind::Prod(fs) => D::Prod(fs.iter().map(|f| f.to_descriptor()).collect()),
            ExprKind::Mat(b, n) => D::Mat(Box::new(b.to_descriptor()), *n),
            ExprKind::UT(b, n) => D::UT(Box::new(b.to_descriptor()), *n),
            ExprKind::Tnk(b, n, k) => D::Tnk(Box::new(b.to_descriptor()), *n, *k),
            ExprKind::Triv(b) => D::Triv(Box::new(b.to_descriptor())),
            ExprKind::PolyMod(b, n) => D::PolyMod(Box::new(b.to_descriptor()), *n),
            ExprKind::Quot(b, g) => D::Quot(Box::new(b.to_descriptor()), g.clone()),
            ExprKind::Sub(b, g) => D::Sub(Box::new(b.to_descriptor()), g.clone()),
            ExprKind::Opp(b) => D::Opp(Box::new(b.to_descriptor())),
        }
    }

    /// Equality of trees, ignoring source spans.
    pub fn structurally_eq(&self, other: &RingExpr) -> bool {
        self.to_descriptor() == other.to_descriptor()
    }
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}

/// Parses (extended grammar) and builds in one step, flattening errors to text.
pub fn ring_from_str(input: &str, limits: &Limits) -> Result<Ring, String> {
    let e = parse_extended(input).map_err(|e| e.to_string())?;
    elaborate_with(&e, limits).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_tnk() {
        let e = parse("Tnk(Z(4), 3, 1)").unwrap();
        match &e.kind {
            ExprKind::Tnk(b, 3, 1) => assert!(matches!(b.kind, ExprKind::Zn(4))),
            k => panic!("unexpected {k:?}"),
        }
        assert_eq!(e.span, Span { start: 0, end: 15 });
    }

    #[test]
    fn parses_triv_z8() {
        let e = parse("Triv(Z(8))").unwrap();
        assert_eq!(pretty(&e), "Triv(Z(8))");
        assert_eq!(elaborate(&e).unwrap().order(), 64);
    }

    #[test]
    fn unterminated_matrix() {
        let err = parse("Mat(Z(2)").unwrap_err();
        assert_eq!(err.offset, 8);
        assert_eq!((err.line, err.column), (1, 9));
        assert_eq!(err.expected, vec!["\")\"", "\",\""]);
    }

    #[test]
    fn pretty_forms() {
        assert_eq!(pretty(&parse("Tnk(Z(4),3,1)").unwrap()), "Tnk(Z(4), 3, 1)");
        assert_eq!(
            pretty(&parse(" Prod( Z(2) ,Z(3) ) ").unwrap()),
            "Prod(Z(2), Z(3))"
        );
        assert_eq!(
            pretty(&parse("PolyMod(Z(2),2)").unwrap()),
            "PolyMod(Z(2), 2)"
        );
    }

    #[test]
    fn grammar_errors() {
        assert!(parse("Z(").is_err());
        assert!(parse("z(4)").is_err());
        assert!(parse("Prod(Z(2))").is_err());
        assert!(parse("Mat(Z(2), 2, 3)").is_err());
        assert!(parse("Z(-1)").is_err());
        assert!(parse("Z(4) Z(4)").is_err());
        assert!(parse("Quot(Z(6), [2])").is_err());
        let e = parse("Tnk(Z(2), Z(3), 1)").unwrap_err();
        assert_eq!(e.offset, 10);
        let multi = parse("Triv(\n  Z(4)\n  X").unwrap_err();
        assert_eq!((multi.line, multi.column), (3, 3));
    }

    #[test]
    fn extended_forms() {
        let e = parse_extended("Quot(Z(6), [2])").unwrap();
        assert_eq!(pretty(&e), "Quot(Z(6), [2])");
        assert_eq!(elaborate(&e).unwrap().order(), 2);
        let s = parse_extended("Sub(Mat(Z(2), 2), [8])").unwrap();
        assert_eq!(elaborate(&s).unwrap().order(), 4);
        assert_eq!(
            pretty(&parse_extended("Opp(UT(Z(2),2))").unwrap()),
            "Opp(UT(Z(2), 2))"
        );
        assert!(parse_extended("Quot(Z(6), [9])")
            .map(|e| elaborate(&e))
            .unwrap()
            .is_err());
    }

    #[test]
    fn elaboration_errors_carry_spans() {
        assert_eq!(
            elaborate(&parse("Tnk(Z(2), 3, 2)").unwrap())
                .unwrap()
                .order(),
            8
        );
        let err = elaborate(&parse("Tnk(Z(2), 3, 5)").unwrap()).unwrap_err();
        assert!(matches!(err.error, RingError::InvalidParameter(_)));
        let err = elaborate(&parse("Triv(Mat(Z(4), 3))").unwrap()).unwrap_err();
        assert!(matches!(err.error, RingError::OrderOverflow { .. }));
        assert_eq!(err.span, Span { start: 5, end: 17 });
        assert!(matches!(
            elaborate(&parse("Z(0)").unwrap()).unwrap_err().error,
            RingError::InvalidParameter(_)
        ));
    }
}
