use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::{DirectedGraph, GraphBuilder};
use crate::error::{Error, Result};

/// Reads a whitespace-separated edge list (SNAP style).
///
/// Lines starting with `#` are comments and blank lines are ignored. Every
/// other line must hold exactly two tokens, `source target`. Self-loops are
/// dropped, repeated edges collapse, and with `symmetrize` each edge also
/// yields its reverse.
pub fn load_edge_list<R: BufRead>(source: R, symmetrize: bool) -> Result<DirectedGraph> {
    let mut builder = GraphBuilder::new(symmetrize);
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim_start();
        if trimmed.starts_with('#') || trimmed.is_empty() {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(u), Some(v), None) => builder.add_edge(u, v),
            _ => {
                return Err(Error::Parse {
                    line: idx + 1,
                    found: trimmed.split_whitespace().count(),
                })
            }
        }
    }
    Ok(builder.build())
}

pub fn load_edge_list_file(path: impl AsRef<Path>, symmetrize: bool) -> Result<DirectedGraph> {
    let file = File::open(path)?;
    load_edge_list(BufReader::new(file), symmetrize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeId;

    fn load(text: &str, sym: bool) -> Result<DirectedGraph> {
        load_edge_list(text.as_bytes(), sym)
    }

    #[test]
    fn reciprocal_pair() {
        let g = load("0 1\n1 0\n", false).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 2));
    }

    #[test]
    fn duplicates_and_comments() {
        let g = load("a b\n# c\na b\n", false).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
        assert_eq!(g.labels().unwrap(), &["a", "b"]);
    }

    #[test]
    fn symmetrize_doubles() {
        let g = load("0 1\n1 2\n", true).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_symmetric());
    }

    #[test]
    fn self_loops_dropped_but_node_kept() {
        let g = load("7 7\n7 8\n", false).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
        assert_eq!(g.in_degree(NodeId(0)), 0);
    }

    #[test]
    fn empty_input_is_empty_graph() {
        let g = load("", false).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (0, 0));
        let g = load("# only a comment\n", true).unwrap();
        assert_eq!(g.node_count(), 0);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match load("0 1\n# fine\n1 2 3\n", false) {
            Err(Error::Parse { line, found }) => assert_eq!((line, found), (3, 3)),
            other => panic!("expected parse error, got {other:?}"),
        }
        match load("0\n", false) {
            Err(Error::Parse { line, found }) => assert_eq!((line, found), (1, 1)),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn tabs_and_crlf() {
        let g = load("# FromNodeId\tToNodeId\r\n10\t20\r\n20\t  30\r\n", false).unwrap();
        assert_eq!(g.labels().unwrap(), &["10", "20", "30"]);
        assert_eq!(g.edge_count(), 2);
    }
}
