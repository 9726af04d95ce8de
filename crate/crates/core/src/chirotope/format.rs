//! Text formats: `.chi` sign tables and `.pts` rational coordinates.
//!
//! ```text
//! chirotope v1
//! n 4
//! root 3          # optional
//! triples
//! +++-
//! ```
//!
//! The `triples` body holds one `+`/`-` per sorted triple `i < j < k` in
//! lexicographic order; whitespace is ignored and `#` starts a comment.
//! The typographic minus `−` is accepted on input.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::points::{Point, PointSet};
use super::{Chirotope, Label, Sign};
use crate::error::{Error, Result};

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses a `.chi` document into the chirotope and its optional root.
pub fn parse_chi(src: &str) -> Result<(Chirotope, Option<Label>)> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty document"))?;
    if header.split_whitespace().collect::<Vec<_>>() != ["chirotope", "v1"] {
        return Err(parse_err(ln, format!("expected `chirotope v1`, found `{header}`")));
    }

    let mut n: Option<usize> = None;
    let mut root: Option<Label> = None;
    let mut in_body = false;
    let mut signs = Vec::new();
    for (ln, line) in lines {
        if in_body {
            for c in line.chars().filter(|c| !c.is_whitespace()) {
                signs.push(match c {
                    '+' => Sign::Pos,
                    '-' | '−' => Sign::Neg,
                    other => return Err(parse_err(ln, format!("unexpected character `{other}`"))),
                });
            }
            continue;
        }
        let mut words = line.split_whitespace();
        match (words.next(), words.next(), words.next()) {
            (Some("n"), Some(v), None) => {
                n = Some(v.parse().map_err(|_| parse_err(ln, format!("bad element count `{v}`")))?)
            }
            (Some("root"), Some(v), None) => {
                root = Some(v.parse().map_err(|_| parse_err(ln, format!("bad root `{v}`")))?)
            }
            (Some("triples"), None, None) => in_body = true,
            _ => return Err(parse_err(ln, format!("unexpected line `{line}`"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(0, "missing `n` line"))?;
    if !in_body {
        return Err(parse_err(0, "missing `triples` section"));
    }
    if let Some(r) = root {
        if r >= n {
            return Err(parse_err(0, format!("root {r} out of range for n={n}")));
        }
    }
    let chi = Chirotope::from_signs(n, signs)?;
    Ok((chi, root))
}

/// Renders a `.chi` document, wrapping the sign string at 64 characters.
pub fn write_chi(chi: &Chirotope, root: Option<Label>) -> String {
    let mut out = String::new();
    out.push_str("chirotope v1\n");
    let _ = writeln!(out, "n {}", chi.len());
    if let Some(r) = root {
        let _ = writeln!(out, "root {r}");
    }
    out.push_str("triples\n");
    for chunk in chi.signs().chunks(64) {
        out.extend(chunk.iter().map(|s| s.as_char()));
        out.push('\n');
    }
    out
}

fn parse_coord(tok: &str, ln: usize) -> Result<BigRational> {
    let bad = || parse_err(ln, format!("bad coordinate `{tok}`"));
    match tok.split_once('/') {
        Some((a, b)) => {
            let num = BigInt::from_str(a).map_err(|_| bad())?;
            let den = BigInt::from_str(b).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(tok).map_err(|_| bad())?,
        )),
    }
}

/// Parses a `.pts` document: one `x y` pair per line, integers or `a/b`.
/// Blank lines and `#` comments are skipped; labels follow point order.
pub fn parse_pts(src: &str) -> Result<PointSet<BigRational>> {
    let mut pts = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let ln = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(parse_err(ln, format!("expected `x y`, found `{line}`")));
        }
        pts.push(Point::new(parse_coord(toks[0], ln)?, parse_coord(toks[1], ln)?));
    }
    PointSet::new(pts)
}

pub fn write_pts(ps: &PointSet<BigRational>) -> String {
    let mut out = String::new();
    for p in ps.points() {
        let _ = writeln!(out, "{} {}", p.x, p.y);
    }
    out
}
