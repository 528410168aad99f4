//! Line-oriented parser for the presentation text format.
//!
//! One statement per line, `#` to end of line is a comment:
//!
//! ```text
//! field 2
//! vertices 0 1
//! arrow alpha: 0 -> 0
//! param n int >= 4
//! param c field
//! relation alpha^2 - c*(gamma*beta*alpha)^(2^(n-2))
//! ```
//!
//! Products written with `*` compose right to left.  `e(v)` denotes the
//! idempotent at vertex `v`; the name `e` is reserved for it.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::Field;

use super::{
    AlgebraPresentation, Arrow, Coef, IntExpr, ParamDecl, ParamKind, PathExpr, Quiver, VertexId,
};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Int(i64),
    Colon,
    RArrow,
    Caret,
    Star,
    Plus,
    Minus,
    LParen,
    RParen,
    Ge,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::RArrow => write!(f, "`->`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Ge => write!(f, "`>=`"),
        }
    }
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text.parse::<i64>().map_err(|_| ParseError {
                    line: lineno,
                    col,
                    message: format!("integer `{text}` out of range"),
                })?;
                toks.push((Tok::Int(n), col));
            }
            ':' => {
                toks.push((Tok::Colon, col));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, col));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, col));
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, col));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            '-' => {
                if i + 1 < chars.len() && chars[i + 1] == '>' {
                    toks.push((Tok::RArrow, col));
                    i += 2;
                } else {
                    toks.push((Tok::Minus, col));
                    i += 1;
                }
            }
            '>' => {
                if i + 1 < chars.len() && chars[i + 1] == '=' {
                    toks.push((Tok::Ge, col));
                    i += 2;
                } else {
                    return Err(ParseError {
                        line: lineno,
                        col,
                        message: "expected `>=`".to_owned(),
                    });
                }
            }
            other => {
                return Err(ParseError {
                    line: lineno,
                    col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(toks)
}

struct LineParser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    arrows: &'a [Arrow],
    params: &'a [ParamDecl],
}

impl<'a> LineParser<'a> {
    fn err(&self, message: String) -> ParseError {
        let col = self.toks.get(self.pos).map_or_else(
            || self.toks.last().map_or(1, |(_, c)| c + 1),
            |(_, c)| *c,
        );
        ParseError { line: self.line, col, message }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err(format!("expected {want}, found {t}"))),
            None => Err(self.err(format!("expected {want}, found end of line"))),
        }
    }

    fn is_scalar_param(&self, name: &str) -> bool {
        self.params.iter().any(|p| p.name == name && p.kind == ParamKind::Scalar)
    }

    fn is_int_param(&self, name: &str) -> bool {
        self.params.iter().any(|p| p.name == name && matches!(p.kind, ParamKind::Int { .. }))
    }

    fn is_arrow(&self, name: &str) -> bool {
        self.arrows.iter().any(|a| a.name == name)
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<PathExpr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = PathExpr::Add(Box::new(acc), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = PathExpr::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // term := factor ('*' factor)*; scalar factors multiply the coefficient.
    fn term(&mut self) -> Result<PathExpr, ParseError> {
        let mut coefs: Vec<Coef> = Vec::new();
        let mut path: Option<PathExpr> = None;
        loop {
            match self.factor()? {
                Factor::Scalar(c) => coefs.push(c),
                Factor::Path(p) => {
                    path = Some(match path {
                        None => p,
                        Some(acc) => PathExpr::Mul(Box::new(acc), Box::new(p)),
                    });
                }
            }
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        let Some(mut expr) = path else {
            return Err(self.err("term has no path factor".to_owned()));
        };
        for c in coefs.into_iter().rev() {
            expr = PathExpr::Scalar(c, Box::new(expr));
        }
        Ok(expr)
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let atom = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exp = self.exponent()?;
            match atom {
                Factor::Path(p) => Ok(Factor::Path(PathExpr::Pow(Box::new(p), exp))),
                Factor::Scalar(_) => {
                    Err(self.err("powers of scalar coefficients are not supported".to_owned()))
                }
            }
        } else {
            Ok(atom)
        }
    }

    fn atom(&mut self) -> Result<Factor, ParseError> {
        match self.next() {
            Some(Tok::Ident(name)) if name == "e" && self.peek() == Some(&Tok::LParen) => {
                self.pos += 1;
                let label = match self.next() {
                    Some(Tok::Ident(l)) => l,
                    Some(Tok::Int(n)) => n.to_string(),
                    other => {
                        return Err(self.err(format!(
                            "expected vertex label in e(..), found {}",
                            other.map_or("end of line".to_owned(), |t| t.to_string())
                        )))
                    }
                };
                self.expect(&Tok::RParen)?;
                Ok(Factor::Path(PathExpr::Vertex(label)))
            }
            Some(Tok::Ident(name)) => {
                if self.is_arrow(&name) {
                    Ok(Factor::Path(PathExpr::Arrow(name)))
                } else if self.is_scalar_param(&name) {
                    Ok(Factor::Scalar(Coef::Param(name)))
                } else if self.is_int_param(&name) {
                    Err(self.err(format!(
                        "integer parameter `{name}` can only appear in exponents"
                    )))
                } else {
                    Err(self.err(format!("unknown symbol `{name}`")))
                }
            }
            Some(Tok::Int(n)) => Ok(Factor::Scalar(Coef::Int(n))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(Factor::Path(e))
            }
            other => Err(self.err(format!(
                "expected an atom, found {}",
                other.map_or("end of line".to_owned(), |t| t.to_string())
            ))),
        }
    }

    fn exponent(&mut self) -> Result<IntExpr, ParseError> {
        match self.peek() {
            Some(Tok::Int(_)) | Some(Tok::Ident(_)) => self.int_atom(),
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.int_expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            other => Err(self.err(format!(
                "expected an exponent, found {}",
                other.map_or("end of line".to_owned(), |t| t.to_string())
            ))),
        }
    }

    // int_expr := int_term (('+'|'-') int_term)*
    fn int_expr(&mut self) -> Result<IntExpr, ParseError> {
        let mut acc = self.int_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = IntExpr::Add(Box::new(acc), Box::new(self.int_term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = IntExpr::Sub(Box::new(acc), Box::new(self.int_term()?));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn int_term(&mut self) -> Result<IntExpr, ParseError> {
        let mut acc = self.int_pow()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = IntExpr::Mul(Box::new(acc), Box::new(self.int_pow()?));
        }
        Ok(acc)
    }

    // right-associative power
    fn int_pow(&mut self) -> Result<IntExpr, ParseError> {
        let base = self.int_atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exp = self.int_pow()?;
            Ok(IntExpr::Pow(Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn int_atom(&mut self) -> Result<IntExpr, ParseError> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(IntExpr::Const(n)),
            Some(Tok::Ident(name)) => {
                if self.is_int_param(&name) {
                    Ok(IntExpr::Param(name))
                } else {
                    Err(self.err(format!("`{name}` is not an integer parameter")))
                }
            }
            Some(Tok::LParen) => {
                let e = self.int_expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            other => Err(self.err(format!(
                "expected an integer expression, found {}",
                other.map_or("end of line".to_owned(), |t| t.to_string())
            ))),
        }
    }
}

enum Factor {
    Scalar(Coef),
    Path(PathExpr),
}

fn label_of(tok: &Tok) -> Option<String> {
    match tok {
        Tok::Ident(s) => Some(s.clone()),
        Tok::Int(n) => Some(n.to_string()),
        _ => None,
    }
}

/// Parses and validates a presentation.  Declarations must precede use;
/// relation expressions are type-checked (composability, endpoint
/// homogeneity) as they are read.
pub fn parse_presentation(text: &str) -> Result<AlgebraPresentation, ParseError> {
    let mut field: Option<Field> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut params: Vec<ParamDecl> = Vec::new();
    let mut relations: Vec<(usize, PathExpr)> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let toks = tokenize(raw_line, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let head = match &toks[0].0 {
            Tok::Ident(s) => s.clone(),
            t => {
                return Err(ParseError {
                    line: lineno,
                    col: toks[0].1,
                    message: format!("expected a statement keyword, found {t}"),
                })
            }
        };
        let err_at = |col: usize, message: String| ParseError { line: lineno, col, message };
        match head.as_str() {
            "field" => {
                let order = match toks.get(1) {
                    Some((Tok::Int(n), _)) if *n >= 2 => *n as u32,
                    _ => return Err(err_at(toks[0].1, "expected `field <order>`".to_owned())),
                };
                field = Some(Field::from_order(order).map_err(|e| {
                    err_at(toks[1].1, format!("{e}"))
                })?);
            }
            "vertices" => {
                for (t, col) in &toks[1..] {
                    let label = label_of(t)
                        .ok_or_else(|| err_at(*col, format!("bad vertex label {t}")))?;
                    if label == "e" {
                        return Err(err_at(*col, "`e` is reserved for idempotents".to_owned()));
                    }
                    if vertices.contains(&label) {
                        return Err(err_at(*col, format!("duplicate vertex `{label}`")));
                    }
                    vertices.push(label);
                }
            }
            "arrow" => {
                // arrow NAME : LABEL -> LABEL
                let name = match toks.get(1) {
                    Some((Tok::Ident(s), col)) => {
                        if s == "e" {
                            return Err(err_at(*col, "`e` is reserved for idempotents".to_owned()));
                        }
                        s.clone()
                    }
                    _ => return Err(err_at(toks[0].1, "expected arrow name".to_owned())),
                };
                if arrows.iter().any(|a| a.name == name) {
                    return Err(err_at(toks[1].1, format!("duplicate arrow `{name}`")));
                }
                if !matches!(toks.get(2), Some((Tok::Colon, _))) {
                    return Err(err_at(toks.get(2).map_or(1, |t| t.1), "expected `:`".to_owned()));
                }
                let src = toks
                    .get(3)
                    .and_then(|(t, _)| label_of(t))
                    .ok_or_else(|| err_at(toks.get(3).map_or(1, |t| t.1), "expected source vertex".to_owned()))?;
                if !matches!(toks.get(4), Some((Tok::RArrow, _))) {
                    return Err(err_at(toks.get(4).map_or(1, |t| t.1), "expected `->`".to_owned()));
                }
                let tgt = toks
                    .get(5)
                    .and_then(|(t, _)| label_of(t))
                    .ok_or_else(|| err_at(toks.get(5).map_or(1, |t| t.1), "expected target vertex".to_owned()))?;
                let source = vertices
                    .iter()
                    .position(|v| *v == src)
                    .ok_or_else(|| err_at(toks[3].1, format!("unknown vertex `{src}`")))?;
                let target = vertices
                    .iter()
                    .position(|v| *v == tgt)
                    .ok_or_else(|| err_at(toks[5].1, format!("unknown vertex `{tgt}`")))?;
                arrows.push(Arrow { name, source: VertexId(source), target: VertexId(target) });
            }
            "param" => {
                let name = match toks.get(1) {
                    Some((Tok::Ident(s), _)) if s != "e" => s.clone(),
                    _ => return Err(err_at(toks[0].1, "expected parameter name".to_owned())),
                };
                if params.iter().any(|p| p.name == name) || arrows.iter().any(|a| a.name == name) {
                    return Err(err_at(toks[1].1, format!("duplicate name `{name}`")));
                }
                let kind = match toks.get(2) {
                    Some((Tok::Ident(k), _)) if k == "int" => match (toks.get(3), toks.get(4)) {
                        (None, _) => ParamKind::Int { min: None },
                        (Some((Tok::Ge, _)), Some((Tok::Int(m), _))) => {
                            ParamKind::Int { min: Some(*m) }
                        }
                        _ => {
                            return Err(err_at(
                                toks[2].1,
                                "expected `param NAME int [>= N]`".to_owned(),
                            ))
                        }
                    },
                    Some((Tok::Ident(k), _)) if k == "field" => ParamKind::Scalar,
                    _ => {
                        return Err(err_at(
                            toks.get(2).map_or(1, |t| t.1),
                            "expected `int` or `field`".to_owned(),
                        ))
                    }
                };
                params.push(ParamDecl { name, kind });
            }
            "relation" => {
                let mut lp = LineParser {
                    toks: &toks[1..],
                    pos: 0,
                    line: lineno,
                    arrows: &arrows,
                    params: &params,
                };
                let expr = lp.expr()?;
                if lp.pos != lp.toks.len() {
                    return Err(lp.err("trailing tokens after relation".to_owned()));
                }
                relations.push((lineno, expr));
            }
            other => {
                return Err(err_at(toks[0].1, format!("unknown statement `{other}`")));
            }
        }
    }

    let quiver = Quiver::new(vertices, arrows).map_err(|e| ParseError {
        line: 1,
        col: 1,
        message: format!("{e}"),
    })?;
    let presentation = AlgebraPresentation {
        field: field.unwrap_or(Field::GF2),
        quiver,
        params,
        bindings: BTreeMap::new(),
        relations: relations.iter().map(|(_, r)| r.clone()).collect(),
    };
    // type-check each relation, reporting the offending line
    for (lineno, rel) in &relations {
        presentation.signature(rel).map_err(|e| ParseError {
            line: *lineno,
            col: 1,
            message: format!("{e}"),
        })?;
    }
    presentation.validate().map_err(|e| ParseError { line: 1, col: 1, message: format!("{e}") })?;
    Ok(presentation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::print_expr;

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_presentation("field 2\nvertices 0\narrow a: 0 -> 0\nrelation a $\n")
            .unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.col > 1);
    }

    #[test]
    fn unknown_symbol_is_reported() {
        let err =
            parse_presentation("field 2\nvertices 0\narrow a: 0 -> 0\nrelation b*a\n").unwrap_err();
        assert!(err.message.contains("unknown symbol"));
    }

    #[test]
    fn relation_expression_shape() {
        let p = parse_presentation(
            "field 2\nvertices 0 1\narrow a: 0 -> 0\narrow b: 0 -> 1\nparam n int >= 2\nparam c field\nrelation a^2 - c*(b*a)^(2^(n-2))\n",
        );
        // b*a: apply a (0->0) then b (0->1), so (b*a)^k needs source == target: it doesn't.
        let err = p.unwrap_err();
        assert!(err.message.contains("power of a non-endomorphism"), "{}", err.message);
    }

    #[test]
    fn idempotent_atom_parses() {
        let p = parse_presentation("field 2\nvertices 0\narrow a: 0 -> 0\nrelation a*e(0) - a\n")
            .unwrap();
        assert_eq!(print_expr(&p.relations[0]), "a*e(0) - a");
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let p = parse_presentation("# header\n\nfield 2\nvertices 0 # inline\narrow a: 0 -> 0\n")
            .unwrap();
        assert_eq!(p.quiver.vertex_count(), 1);
    }
}
