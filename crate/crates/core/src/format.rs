//! Plain-text presentation files.
//!
//! ```text
//! # comment
//! generators 5
//! x5*x2 = x2*x1
//! x5*x1 = 0
//! ```

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::model::{Pair, Presentation, Relation, MAX_GENERATORS};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_generator(tok: &str, n: usize, line: usize) -> Result<u8> {
    let digits = tok
        .strip_prefix('x')
        .ok_or_else(|| parse_err(line, format!("expected a generator like x1, got `{tok}`")))?;
    let i: usize = digits
        .parse()
        .map_err(|_| parse_err(line, format!("bad generator `{tok}`")))?;
    if i == 0 || i > n {
        return Err(parse_err(
            line,
            format!("generator index {i} exceeds alphabet x1..x{n}"),
        ));
    }
    Ok(i as u8)
}

fn parse_monomial(s: &str, n: usize, line: usize) -> Result<Pair> {
    let parts: Vec<&str> = s.split('*').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok(Pair(
            parse_generator(a, n, line)?,
            parse_generator(b, n, line)?,
        )),
        _ => Err(parse_err(
            line,
            format!("expected a degree-2 monomial like x2*x1, got `{}`", s.trim()),
        )),
    }
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut n: Option<usize> = None;
    let mut relations = Vec::new();
    let mut lines_of = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("generators") {
            if n.is_some() {
                return Err(parse_err(line, "duplicate `generators` line"));
            }
            let count: usize = rest
                .trim()
                .parse()
                .map_err(|_| parse_err(line, format!("bad generator count `{}`", rest.trim())))?;
            if count == 0 || count > MAX_GENERATORS {
                return Err(parse_err(
                    line,
                    format!("generator count must be in 1..={MAX_GENERATORS}"),
                ));
            }
            n = Some(count);
            continue;
        }
        let n = n.ok_or_else(|| parse_err(line, "relation before `generators` line"))?;
        let (lhs, rhs) = content
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected `lhs = rhs`, got `{content}`")))?;
        let left = parse_monomial(lhs, n, line)?;
        let rel = if rhs.trim() == "0" {
            Relation::Zero(left)
        } else {
            let right = parse_monomial(rhs, n, line)?;
            Relation::equal(left, right).map_err(|e| parse_err(line, e.to_string()))?
        };
        if let Some(prev) = relations.iter().position(|r| *r == rel) {
            return Err(parse_err(
                line,
                format!("duplicate relation {rel} (first on line {})", lines_of[prev]),
            ));
        }
        relations.push(rel);
        lines_of.push(line);
    }
    let n = n.ok_or_else(|| parse_err(1, "missing `generators N` line"))?;
    Presentation::new(n, relations)
}

/// Render in canonical relation order; `parse_presentation` inverts this.
pub fn render_presentation(p: &Presentation) -> String {
    let mut out = String::new();
    writeln!(out, "generators {}", p.n()).unwrap();
    for r in p.relations() {
        writeln!(out, "{r}").unwrap();
    }
    out
}
