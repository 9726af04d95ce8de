//! Composition expressions.
//!
//! ```text
//! expr    := primary (('v' | '^') primary)*        one operator kind per level
//! primary := '(' expr ')'
//!          | ('join' | 'meet') '(' expr (',' expr)+ ')'
//!          | ('twist' | 'flip') '(' expr ')'
//!          | 'triangle' | 'chi1'
//!          | ('convex' | 'chik' | 'koch' | 'dc') '(' INT ')'
//!          | 'load' '(' STRING [',' INT] ')'
//! ```
//!
//! `v` is join and `^` is meet; both are left-associative with equal
//! precedence, so mixing them needs parentheses.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Triangle,
    Chi1,
    Convex(usize),
    ChiK(usize),
    Koch(usize),
    Dc(usize),
    Load { path: String, root: Option<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Join(Box<Expr>, Box<Expr>),
    Meet(Box<Expr>, Box<Expr>),
    Twist(Box<Expr>),
    Flip(Box<Expr>),
    Atom(Atom),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownIdentifier,
    Arity,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    Str(String),
    LParen,
    RParen,
    Comma,
    Caret,
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1, 1);
    let err = |line, col, msg: String| ParseError {
        line,
        col,
        kind: ParseErrorKind::Syntax,
        msg,
    };
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '(' | ')' | ',' | '^' => {
                bump(&mut chars);
                match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    _ => Tok::Caret,
                }
            }
            '"' => {
                bump(&mut chars);
                let mut s = String::new();
                loop {
                    match bump(&mut chars) {
                        None => return Err(err(l0, c0, "unterminated string".into())),
                        Some('"') => break,
                        Some('\\') => match bump(&mut chars) {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            _ => return Err(err(l0, c0, "bad escape in string".into())),
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                Tok::Int(s.parse().map_err(|_| err(l0, c0, format!("integer `{s}` too large")))?)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_alphanumeric() || d == '_') {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                Tok::Ident(s)
            }
            other => return Err(err(l0, c0, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned {
            tok,
            line: l0,
            col: c0,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    Join,
    Meet,
}

enum Arg {
    Int(usize),
    Str(String),
    Expr(Expr),
}

fn error(at: &Spanned, kind: ParseErrorKind, msg: impl Into<String>) -> ParseError {
    ParseError {
        line: at.line,
        col: at.col,
        kind,
        msg: msg.into(),
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == want {
            Ok(())
        } else {
            Err(error(&t, ParseErrorKind::Syntax, format!("expected {what}, found {}", describe(&t.tok))))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.primary()?;
        let mut seen: Option<Op> = None;
        loop {
            let at = self.peek().clone();
            let op = match &at.tok {
                Tok::Ident(s) if s == "v" => Op::Join,
                Tok::Caret => Op::Meet,
                _ => break,
            };
            if seen.is_some_and(|s| s != op) {
                return Err(error(&at, ParseErrorKind::Syntax, "mixing `v` and `^` needs parentheses"));
            }
            seen = Some(op);
            self.next();
            let rhs = self.primary()?;
            lhs = match op {
                Op::Join => Expr::Join(Box::new(lhs), Box::new(rhs)),
                Op::Meet => Expr::Meet(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn args(&mut self) -> Result<Vec<Arg>, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if self.peek().tok == Tok::RParen {
            self.next();
            return Ok(args);
        }
        loop {
            let at = self.peek().clone();
            args.push(match at.tok {
                Tok::Int(i) => {
                    self.next();
                    Arg::Int(i)
                }
                Tok::Str(s) => {
                    self.next();
                    Arg::Str(s)
                }
                _ => Arg::Expr(self.expr()?),
            });
            let t = self.next();
            match t.tok {
                Tok::Comma => continue,
                Tok::RParen => return Ok(args),
                ref other => {
                    return Err(error(
                        &t,
                        ParseErrorKind::Syntax,
                        format!("expected `,` or `)`, found {}", describe(other)),
                    ))
                }
            }
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.next();
        let name = match &at.tok {
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(e);
            }
            Tok::Ident(s) => s.clone(),
            other => {
                return Err(error(
                    &at,
                    ParseErrorKind::Syntax,
                    format!("expected an expression, found {}", describe(other)),
                ))
            }
        };
        let arity = |msg: &str| error(&at, ParseErrorKind::Arity, format!("`{name}` {msg}"));
        let has_args = self.peek().tok == Tok::LParen;
        match name.as_str() {
            "triangle" | "chi1" => {
                if has_args && !self.args()?.is_empty() {
                    return Err(arity("takes no arguments"));
                }
                Ok(Expr::Atom(if name == "triangle" { Atom::Triangle } else { Atom::Chi1 }))
            }
            "join" | "meet" | "twist" | "flip" => {
                if !has_args {
                    return Err(error(&at, ParseErrorKind::Syntax, format!("`{name}` needs `(`")));
                }
                let args = self.args()?;
                let mut exprs = Vec::with_capacity(args.len());
                for a in args {
                    match a {
                        Arg::Expr(e) => exprs.push(e),
                        _ => return Err(arity("takes expressions, not literals")),
                    }
                }
                match name.as_str() {
                    "twist" | "flip" => {
                        if exprs.len() != 1 {
                            return Err(arity("takes exactly one argument"));
                        }
                        let e = Box::new(exprs.pop().unwrap());
                        Ok(if name == "twist" { Expr::Twist(e) } else { Expr::Flip(e) })
                    }
                    _ => {
                        if exprs.len() < 2 {
                            return Err(arity("takes at least two arguments"));
                        }
                        let mut it = exprs.into_iter();
                        let first = it.next().unwrap();
                        Ok(it.fold(first, |acc, e| {
                            if name == "join" {
                                Expr::Join(Box::new(acc), Box::new(e))
                            } else {
                                Expr::Meet(Box::new(acc), Box::new(e))
                            }
                        }))
                    }
                }
            }
            "convex" | "chik" | "koch" | "dc" => {
                if !has_args {
                    return Err(arity("takes one integer argument"));
                }
                match self.args()?.as_slice() {
                    [Arg::Int(i)] => Ok(Expr::Atom(match name.as_str() {
                        "convex" => Atom::Convex(*i),
                        "chik" => Atom::ChiK(*i),
                        "koch" => Atom::Koch(*i),
                        _ => Atom::Dc(*i),
                    })),
                    _ => Err(arity("takes one integer argument")),
                }
            }
            "load" => {
                if !has_args {
                    return Err(arity("takes a path and an optional root"));
                }
                match self.args()?.as_slice() {
                    [Arg::Str(p)] => Ok(Expr::Atom(Atom::Load {
                        path: p.clone(),
                        root: None,
                    })),
                    [Arg::Str(p), Arg::Int(r)] => Ok(Expr::Atom(Atom::Load {
                        path: p.clone(),
                        root: Some(*r),
                    })),
                    _ => Err(arity("takes a path and an optional root")),
                }
            }
            "v" => Err(error(&at, ParseErrorKind::Syntax, "`v` is the join operator")),
            _ => Err(error(&at, ParseErrorKind::UnknownIdentifier, format!("unknown identifier `{name}`"))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(i) => format!("`{i}`"),
        Tok::Str(s) => format!("{s:?}"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Caret => "`^`".into(),
        Tok::Eof => "end of input".into(),
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::Eof {
        return Err(error(&t, ParseErrorKind::Syntax, format!("unexpected {}", describe(&t.tok))));
    }
    Ok(e)
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Triangle => write!(f, "triangle"),
            Atom::Chi1 => write!(f, "chi1"),
            Atom::Convex(n) => write!(f, "convex({n})"),
            Atom::ChiK(k) => write!(f, "chik({k})"),
            Atom::Koch(i) => write!(f, "koch({i})"),
            Atom::Dc(k) => write!(f, "dc({k})"),
            Atom::Load { path, root } => {
                let escaped = path.replace('\\', "\\\\").replace('"', "\\\"");
                match root {
                    Some(r) => write!(f, "load(\"{escaped}\", {r})"),
                    None => write!(f, "load(\"{escaped}\")"),
                }
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Join(a, b) => write!(f, "({a} v {b})"),
            Expr::Meet(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Twist(a) => write!(f, "twist({a})"),
            Expr::Flip(a) => write!(f, "flip({a})"),
            Expr::Atom(a) => write!(f, "{a}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(a: Atom) -> Box<Expr> {
        Box::new(Expr::Atom(a))
    }

    #[test]
    fn functional_and_infix_forms() {
        let e = parse_expr("join(triangle, triangle)").unwrap();
        assert_eq!(e, Expr::Join(atom(Atom::Triangle), atom(Atom::Triangle)));
        let k = || Expr::Join(atom(Atom::Koch(2)), atom(Atom::Koch(2)));
        assert_eq!(
            parse_expr("(koch(2) v koch(2)) ^ (koch(2) v koch(2))").unwrap(),
            Expr::Meet(Box::new(k()), Box::new(k()))
        );
        assert_eq!(
            parse_expr("meet(chi1, triangle, convex(4))").unwrap(),
            Expr::Meet(
                Box::new(Expr::Meet(atom(Atom::Chi1), atom(Atom::Triangle))),
                atom(Atom::Convex(4))
            )
        );
        assert_eq!(
            parse_expr("triangle v chi1 v dc(3)").unwrap(),
            Expr::Join(
                Box::new(Expr::Join(atom(Atom::Triangle), atom(Atom::Chi1))),
                atom(Atom::Dc(3))
            )
        );
    }

    #[test]
    fn errors_carry_positions_and_kinds() {
        let e = parse_expr("meet(triangle)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Arity);
        assert_eq!((e.line, e.col), (1, 1));
        let e = parse_expr("triangle v chi1 ^ chi1").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!(e.col, 17);
        let e = parse_expr("triangle v\n  hexagon").unwrap_err();
        assert_eq!((e.kind, e.line, e.col), (ParseErrorKind::UnknownIdentifier, 2, 3));
        assert_eq!(parse_expr("convex()").unwrap_err().kind, ParseErrorKind::Arity);
        assert_eq!(parse_expr("twist(chi1, chi1)").unwrap_err().kind, ParseErrorKind::Arity);
        assert_eq!(parse_expr("(chi1").unwrap_err().kind, ParseErrorKind::Syntax);
        assert_eq!(parse_expr("chi1 chi1").unwrap_err().kind, ParseErrorKind::Syntax);
        assert_eq!(parse_expr("load(\"x.chi").unwrap_err().kind, ParseErrorKind::Syntax);
        assert!(parse_expr("").is_err());
    }

    #[test]
    fn printing_round_trips() {
        for src in [
            "join(triangle, twist(chi1))",
            "flip(koch(3)) ^ convex(5) ^ dc(4)",
            "load(\"dir/with \\\"quote\\\".chi\", 2) v chik(2)",
            "load(\"a.pts\")",
        ] {
            let e = parse_expr(src).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{src}");
        }
    }
}
