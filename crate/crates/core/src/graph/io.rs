//! Edge-list graph files.
//!
//! ```text
//! # comment
//! n m
//! u v
//! ...
//! ```
//! Endpoints are 0-based. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use super::Multigraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing header line \"n m\"")]
    MissingHeader,
    #[error("malformed line {0}")]
    Malformed(usize),
    #[error("endpoint out of range at line {0}")]
    OutOfRange(usize),
    #[error("self-loop at line {0}")]
    SelfLoop(usize),
    #[error("header declares {declared} edges but {found} were listed")]
    EdgeCount { declared: usize, found: usize },
}

fn two_numbers(line: &str, lineno: usize) -> Result<(usize, usize), ParseError> {
    let mut it = line.split_whitespace();
    let a = it.next().and_then(|t| t.parse().ok());
    let b = it.next().and_then(|t| t.parse().ok());
    match (a, b, it.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(ParseError::Malformed(lineno)),
    }
}

/// Parses the edge-list format; edges get ids `1..=m` in file order.
pub fn parse_graph(text: &str) -> Result<Multigraph, ParseError> {
    let mut header = None;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (a, b) = two_numbers(line, lineno)?;
        match header {
            None => header = Some((a, b)),
            Some((n, _)) => {
                if a >= n || b >= n {
                    return Err(ParseError::OutOfRange(lineno));
                }
                if a == b {
                    return Err(ParseError::SelfLoop(lineno));
                }
                pairs.push((a, b));
            }
        }
    }
    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if pairs.len() != m {
        return Err(ParseError::EdgeCount { declared: m, found: pairs.len() });
    }
    Ok(Multigraph::from_pairs(n, pairs).expect("validated above"))
}

/// Writes the canonical form: header then one edge per line in edge order.
pub fn write_graph(g: &Multigraph) -> String {
    let mut out = String::with_capacity(8 * (g.m() + 1));
    let _ = writeln!(out, "{} {}", g.n(), g.m());
    for e in g.edges() {
        let _ = writeln!(out, "{} {}", e.u, e.v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeId;

    #[test]
    fn triangle() {
        let g = parse_graph("3 3\n0 1\n1 2\n2 0\n").unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
        assert_eq!(g.edges()[2].id, EdgeId(3));
    }

    #[test]
    fn duplicate_lines_make_parallel_edges() {
        let g = parse_graph("2 2\n0 1\n0 1\n").unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.degree(0), 2);
    }

    #[test]
    fn self_loop_names_the_line() {
        let err = parse_graph("# graph\n2 1\n\n0 0\n").unwrap_err();
        assert_eq!(err, ParseError::SelfLoop(4));
        assert_eq!(err.to_string(), "self-loop at line 4");
    }

    #[test]
    fn errors() {
        assert_eq!(parse_graph("").unwrap_err(), ParseError::MissingHeader);
        assert_eq!(parse_graph("3 1\n0 x\n").unwrap_err(), ParseError::Malformed(2));
        assert_eq!(parse_graph("3 1\n0 3\n").unwrap_err(), ParseError::OutOfRange(2));
        assert_eq!(parse_graph("3 1\n0 1 2\n").unwrap_err(), ParseError::Malformed(2));
        assert!(matches!(parse_graph("3 2\n0 1\n"), Err(ParseError::EdgeCount { .. })));
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_graph("# hi\n\n3 2 # header\n0 1 # a\n\n1 2\n").unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(write_graph(&g), "3 2\n0 1\n1 2\n");
    }
}
