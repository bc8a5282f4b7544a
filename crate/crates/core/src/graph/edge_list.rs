//! Plain-text edge lists.
//!
//! ```text
//! # optional comments
//! n 4
//! 0 1
//! 1 2
//! ```
//!
//! Vertices are 0-based. Everything after `#` on a line is ignored.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::{Graph, DEFAULT_BITSET_CAP};
use crate::error::{IsoError, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> IsoError {
    IsoError::Parse { line, msg: msg.into() }
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (a, b) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(parse_err(line_no, format!("expected two fields, got {line:?}"))),
        };

        let Some(count) = n else {
            if a != "n" {
                return Err(parse_err(line_no, "first line must be `n <count>`"));
            }
            let count: usize = b
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad vertex count {b:?}")))?;
            if count == 0 {
                return Err(parse_err(line_no, "vertex count must be at least 1"));
            }
            n = Some(count);
            continue;
        };

        let u: usize = a.parse().map_err(|_| parse_err(line_no, format!("bad vertex {a:?}")))?;
        let v: usize = b.parse().map_err(|_| parse_err(line_no, format!("bad vertex {b:?}")))?;
        if u >= count || v >= count {
            return Err(parse_err(line_no, format!("vertex out of range for n = {count}")));
        }
        if u == v {
            return Err(parse_err(line_no, format!("self-loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(line_no, format!("duplicate edge ({u}, {v})")));
        }
        edges.push((u, v));
    }

    let n = n.ok_or_else(|| parse_err(1, "missing `n <count>` header"))?;
    Graph::from_edges_with_cap(n, edges, DEFAULT_BITSET_CAP)
}

/// Canonical text: header, then one `u v` line per edge with `u < v`,
/// sorted lexicographically.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(8 + g.edge_count() * 8);
    let _ = writeln!(out, "n {}", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_k2() {
        let g = parse_edge_list("n 2\n0 1").unwrap();
        assert_eq!(g, Graph::complete(2));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("n 3\n0 0", 2, "self-loop"),
            ("n 3\n0 1\n# c\n1 5", 4, "out of range"),
            ("n 3\n0 1\n1 0", 3, "duplicate"),
            ("0 1", 1, "first line"),
            ("n 3\n0 1 2", 2, "two fields"),
        ];
        for (text, line, needle) in cases {
            match parse_edge_list(text) {
                Err(IsoError::Parse { line: l, msg }) => {
                    assert_eq!(l, line, "{text:?}");
                    assert!(msg.contains(needle), "{msg}");
                }
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_edge_list("# header\n\nn 3 # three\n2 0\n1 2 # tail\n").unwrap();
        assert_eq!(write_edge_list(&g), "n 3\n0 2\n1 2\n");
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..20, bits in proptest::collection::vec(any::<bool>(), 190)) {
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .zip(&bits)
                .filter(|(_, &b)| b)
                .map(|(e, _)| e)
                .collect();
            let g = Graph::from_edges(n, edges).unwrap();
            let text = write_edge_list(&g);
            let h = parse_edge_list(&text).unwrap();
            prop_assert_eq!(&h, &g);
            prop_assert_eq!(write_edge_list(&h), text);
        }
    }
}
