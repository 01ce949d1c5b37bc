//! The plain-text DFA format and DOT export.
//!
//! ```text
//! dfa
//! states 3
//! letters a b
//! trans
//! 1 1
//! 1 2
//! 2 0
//! end
//! ```
//!
//! `#` starts a comment running to the end of the line. Blank lines are ignored.

use std::fmt::Write as _;

use super::Dfa;
use crate::error::{Error, Result};

struct Line<'a> {
    number: usize,
    /// (1-based column, token)
    tokens: Vec<(usize, &'a str)>,
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, c) in content.char_indices() {
            if c.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push((s + 1, &content[s..pos]));
                }
            } else if start.is_none() {
                start = Some(pos);
            }
        }
        if let Some(s) = start {
            tokens.push((s + 1, &content[s..]));
        }
        if !tokens.is_empty() {
            out.push(Line {
                number: i + 1,
                tokens,
            });
        }
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn expect_keyword<'a>(
    lines: &mut impl Iterator<Item = Line<'a>>,
    keyword: &str,
    last_line: usize,
) -> Result<Line<'a>> {
    let line = lines
        .next()
        .ok_or_else(|| err(last_line + 1, 1, format!("expected `{keyword}`, found end of input")))?;
    let (col, tok) = line.tokens[0];
    if tok != keyword {
        return Err(err(line.number, col, format!("expected `{keyword}`, found `{tok}`")));
    }
    Ok(line)
}

fn parse_count(line: usize, col: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| err(line, col, format!("{what}: `{tok}` is not a nonnegative integer")))
}

pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let mut lines = tokenize(text).into_iter();

    let header = expect_keyword(&mut lines, "dfa", 0)?;
    if let Some(&(col, tok)) = header.tokens.get(1) {
        return Err(err(header.number, col, format!("unexpected `{tok}` after `dfa`")));
    }

    let states = expect_keyword(&mut lines, "states", header.number)?;
    let n = match states.tokens.as_slice() {
        [_, (col, tok)] => parse_count(states.number, *col, tok, "state count")?,
        [(col, _)] => return Err(err(states.number, *col, "missing state count")),
        [_, _, (col, tok), ..] => {
            return Err(err(states.number, *col, format!("unexpected `{tok}`")))
        }
        [] => unreachable!(),
    };
    if n == 0 {
        return Err(err(states.number, states.tokens[1].0, "state count must be at least 1"));
    }
    if n > super::MAX_STATES {
        return Err(Error::cap("state count", n as u128, super::MAX_STATES as u128));
    }

    let letters_line = expect_keyword(&mut lines, "letters", states.number)?;
    if letters_line.tokens.len() < 2 {
        return Err(err(letters_line.number, letters_line.tokens[0].0, "no letters declared"));
    }
    let mut letters: Vec<String> = Vec::new();
    for &(col, tok) in &letters_line.tokens[1..] {
        if tok == "-" {
            return Err(err(letters_line.number, col, "`-` is reserved for the empty word"));
        }
        if letters.iter().any(|l| l == tok) {
            return Err(err(letters_line.number, col, format!("duplicate letter name `{tok}`")));
        }
        letters.push(tok.to_string());
    }
    let m = letters.len();

    let trans = expect_keyword(&mut lines, "trans", letters_line.number)?;
    if let Some(&(col, tok)) = trans.tokens.get(1) {
        return Err(err(trans.number, col, format!("unexpected `{tok}` after `trans`")));
    }

    let mut delta = Vec::with_capacity(n * m);
    let mut last = trans.number;
    for q in 0..n {
        let row = lines.next().ok_or_else(|| {
            err(last + 1, 1, format!("row for state {q}: found end of input"))
        })?;
        last = row.number;
        if row.tokens[0].1 == "end" {
            return Err(err(
                row.number,
                row.tokens[0].0,
                format!("row for state {q}: found `end` after {q} of {n} rows"),
            ));
        }
        if row.tokens.len() != m {
            let col = row.tokens.get(m).map_or(row.tokens[0].0, |t| t.0);
            return Err(err(
                row.number,
                col,
                format!("row for state {q}: expected {m} targets, found {}", row.tokens.len()),
            ));
        }
        for &(col, tok) in &row.tokens {
            let t = parse_count(row.number, col, tok, &format!("row for state {q}"))?;
            if t >= n {
                return Err(err(
                    row.number,
                    col,
                    format!("row for state {q}: target {t} out of range 0..{n}"),
                ));
            }
            delta.push(t);
        }
    }

    let end = expect_keyword(&mut lines, "end", last)?;
    if let Some(&(col, tok)) = end.tokens.get(1) {
        return Err(err(end.number, col, format!("unexpected `{tok}` after `end`")));
    }
    if let Some(extra) = lines.next() {
        return Err(err(extra.number, extra.tokens[0].0, "unexpected content after `end`"));
    }

    Dfa::new(n, letters, delta).map_err(|e| err(letters_line.number, 1, e.to_string()))
}

/// Canonical text form: single spaces, one row per line, no comments.
pub fn serialize_dfa(dfa: &Dfa) -> String {
    let mut out = String::new();
    out.push_str("dfa\n");
    let _ = writeln!(out, "states {}", dfa.n());
    let _ = writeln!(out, "letters {}", dfa.letters().join(" "));
    out.push_str("trans\n");
    for q in 0..dfa.n() {
        let row: Vec<String> = dfa.row(q).iter().map(|t| t.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

/// Graphviz digraph; parallel edges between the same states are merged into one
/// edge with comma-joined labels.
pub fn export_dot(dfa: &Dfa) -> String {
    let mut out = String::new();
    out.push_str("digraph dfa {\n  rankdir=LR;\n  node [shape=circle];\n");
    for q in 0..dfa.n() {
        let _ = writeln!(out, "  {q};");
    }
    for q in 0..dfa.n() {
        let mut bundles: Vec<(usize, Vec<&str>)> = Vec::new();
        for (a, &t) in dfa.row(q).iter().enumerate() {
            let t = t as usize;
            match bundles.iter_mut().find(|(target, _)| *target == t) {
                Some((_, labels)) => labels.push(dfa.letter_name(a)),
                None => bundles.push((t, vec![dfa.letter_name(a)])),
            }
        }
        for (t, labels) in bundles {
            let label = labels.join(",").replace('\\', "\\\\").replace('"', "\\\"");
            let _ = writeln!(out, "  {q} -> {t} [label=\"{label}\"];");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const C3: &str = "dfa\nstates 3\nletters a b\ntrans\n1 1\n1 2\n2 0\nend\n";

    #[test]
    fn canonical_round_trip() {
        let d = parse_dfa(C3).unwrap();
        assert_eq!(serialize_dfa(&d), C3);
    }

    #[test]
    fn comments_and_spacing() {
        let text = "# cerny 3\ndfa\n  states   3 # three\nletters a b\n\ntrans\n1 1\n1\t2\n2 0\nend\n# tail\n";
        assert_eq!(serialize_dfa(&parse_dfa(text).unwrap()), C3);
    }

    #[test]
    fn out_of_range_names_row() {
        let text = "dfa\nstates 3\nletters a b\ntrans\n1 1\n1 3\n2 0\nend\n";
        match parse_dfa(text) {
            Err(Error::Parse { line, column, message }) => {
                assert_eq!((line, column), (6, 3));
                assert!(message.contains("row for state 1"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn other_errors() {
        let dup = "dfa\nstates 1\nletters a a\ntrans\n0 0\nend\n";
        assert!(matches!(parse_dfa(dup), Err(Error::Parse { line: 3, column: 11, .. })));
        let short = "dfa\nstates 2\nletters a\ntrans\n0\nend\n";
        assert!(matches!(parse_dfa(short), Err(Error::Parse { line: 6, .. })));
        let wide = "dfa\nstates 1\nletters a\ntrans\n0 0\nend\n";
        assert!(matches!(parse_dfa(wide), Err(Error::Parse { line: 5, column: 3, .. })));
        assert!(parse_dfa("").is_err());
        assert!(parse_dfa("dfa\nstates x\n").is_err());
        assert!(parse_dfa(&format!("{C3}junk\n")).is_err());
    }

    #[test]
    fn dot_merges_parallel_edges() {
        let dot = export_dot(&parse_dfa(C3).unwrap());
        assert!(dot.contains("0 -> 1 [label=\"a,b\"];"));
        assert!(dot.contains("1 -> 2 [label=\"b\"];"));
        assert!(dot.starts_with("digraph"));
    }
}
