//! Cayley-table text format.
//!
//! ```text
//! loop 3
//! 0 1 2
//! 1 2 0
//! 2 0 1
//! ```
//!
//! The first line is the kind token (`loop` or `quandle`) followed by the
//! order; a bare order is read as a loop. Then `n` lines of `n`
//! space-separated 0-based indices. Output is ASCII with LF line endings and
//! no trailing whitespace. Loop tables whose identity is not element 0 are
//! relabeled on load.

use std::fmt::Write as _;

use super::{CayleyTable, LoopTable, QuandleTable};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedTable {
    Loop(LoopTable),
    Quandle(QuandleTable),
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

/// Splits off the header and the `n × n` body shared by all table-like files.
pub(crate) fn parse_header_and_rows(
    text: &str,
) -> Result<(Vec<String>, Vec<Vec<usize>>)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = match lines.next() {
        Some(h) => h,
        None => return perr(1, "empty input"),
    };
    let header: Vec<String> = header.split_whitespace().map(str::to_owned).collect();
    let mut rows = Vec::new();
    for (i, line) in lines {
        let row: std::result::Result<Vec<usize>, _> =
            line.split_whitespace().map(str::parse::<usize>).collect();
        match row {
            Ok(r) => rows.push(r),
            Err(e) => return perr(i + 1, format!("bad entry: {e}")),
        }
    }
    Ok((header, rows))
}

pub fn parse(text: &str) -> Result<ParsedTable> {
    let (header, rows) = parse_header_and_rows(text)?;
    let (kind, n) = match header.as_slice() {
        [n] => ("loop", n),
        [kind, n] => (kind.as_str(), n),
        _ => return perr(1, "expected `loop N`, `quandle N` or `N`"),
    };
    let n: usize = match n.parse() {
        Ok(n) => n,
        Err(_) => return perr(1, format!("bad order {n:?}")),
    };
    if rows.len() != n {
        return perr(1, format!("expected {n} rows, found {}", rows.len()));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return perr(i + 2, format!("expected {n} entries, found {}", r.len()));
        }
    }
    let table = CayleyTable::new(n, rows.into_iter().flatten().collect())?;
    match kind {
        "loop" => Ok(ParsedTable::Loop(LoopTable::new_relabeled(table)?)),
        "quandle" => Ok(ParsedTable::Quandle(QuandleTable::new(table)?)),
        other => perr(1, format!("unknown table kind {other:?}")),
    }
}

pub fn parse_loop(text: &str) -> Result<LoopTable> {
    match parse(text)? {
        ParsedTable::Loop(l) => Ok(l),
        ParsedTable::Quandle(_) => perr(1, "expected a loop table, found a quandle"),
    }
}

pub fn parse_quandle(text: &str) -> Result<QuandleTable> {
    match parse(text)? {
        ParsedTable::Quandle(q) => Ok(q),
        ParsedTable::Loop(_) => perr(1, "expected a quandle table, found a loop"),
    }
}

pub(crate) fn write_rows(out: &mut String, n: usize, entry: impl Fn(usize, usize) -> usize) {
    for x in 0..n {
        for y in 0..n {
            if y > 0 {
                out.push(' ');
            }
            write!(out, "{}", entry(x, y)).unwrap();
        }
        out.push('\n');
    }
}

fn render(kind: &str, t: &CayleyTable) -> String {
    let n = t.order();
    let mut out = format!("{kind} {n}\n");
    write_rows(&mut out, n, |x, y| t.mul(x, y));
    out
}

impl LoopTable {
    pub fn to_text(&self) -> String {
        render("loop", self.table())
    }
}

impl QuandleTable {
    pub fn to_text(&self) -> String {
        render("quandle", self.table())
    }
}

impl ParsedTable {
    pub fn to_text(&self) -> String {
        match self {
            ParsedTable::Loop(l) => l.to_text(),
            ParsedTable::Quandle(q) => q.to_text(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_round_trip_is_byte_exact() {
        let z3 = LoopTable::cyclic(3);
        let text = z3.to_text();
        assert_eq!(text, "loop 3\n0 1 2\n1 2 0\n2 0 1\n");
        assert_eq!(parse_loop(&text).unwrap(), z3);
    }

    #[test]
    fn bare_order_header_is_a_loop() {
        let l = parse_loop("3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
        assert_eq!(l, LoopTable::cyclic(3));
    }

    #[test]
    fn identity_is_moved_to_zero() {
        // Z_3 with identity at 1
        let l = parse_loop("loop 3\n2 0 1\n0 1 2\n1 2 0\n").unwrap();
        assert!((0..3).all(|x| l.table().mul(0, x) == x));
    }

    #[test]
    fn quandle_files() {
        let q = QuandleTable::dihedral(3).unwrap();
        let text = q.to_text();
        assert!(text.starts_with("quandle 3\n"));
        assert_eq!(parse_quandle(&text).unwrap(), q);
        assert!(parse_loop(&text).is_err());
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse("").is_err());
        assert!(parse("loop 2\n0 1\n").is_err());
        assert!(parse("loop 2\n0 1\n1 x\n").is_err());
        assert!(parse("group 2\n0 1\n1 0\n").is_err());
        assert!(parse("loop 2\n0 1\n0 1\n").is_err());
    }
}
