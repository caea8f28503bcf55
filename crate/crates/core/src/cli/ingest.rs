use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Reads a graph file: `u v` lines with `#` comments, or `{"n": .., "edges": [[u, v], ..]}`.
pub fn ingest_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let text =
        std::fs::read_to_string(path.as_ref()).map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_graph(&text)
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        parse_graph_json(text)
    } else {
        parse_edge_list(text)
    }
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let [a, b] = fields[..] else {
            return Err(Error::Parse { line, msg: format!("expected two vertices, got {:?}", body) });
        };
        let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse { line, msg: format!("bad vertex {s:?}") });
        pairs.push((line, parse(a)?, parse(b)?));
    }
    let n = pairs.iter().map(|&(_, u, v)| u.max(v) + 1).max().unwrap_or(0);
    build(n, &pairs)
}

fn parse_graph_json(text: &str) -> Result<Graph> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
    let n = v.get("n").and_then(|n| n.as_u64()).ok_or(Error::Parse { line: 1, msg: "missing \"n\"".into() })? as usize;
    let edges =
        v.get("edges").and_then(|e| e.as_array()).ok_or(Error::Parse { line: 1, msg: "missing \"edges\"".into() })?;
    let mut pairs = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        let uv = e
            .as_array()
            .filter(|a| a.len() == 2)
            .and_then(|a| Some((a[0].as_u64()? as usize, a[1].as_u64()? as usize)));
        let (u, v) =
            uv.ok_or_else(|| Error::Parse { line: i + 1, msg: format!("edge {i} is not a pair of vertices") })?;
        pairs.push((i + 1, u, v));
    }
    build(n, &pairs)
}

/// `line` is the source line for text input and the 1-based edge position for JSON.
fn build(n: usize, pairs: &[(usize, usize, usize)]) -> Result<Graph> {
    let mut g = Graph::new(n);
    for &(line, u, v) in pairs {
        g.add_edge(u, v).map_err(|e| match e {
            Error::LoopEdge { .. } => Error::LoopEdge { line },
            Error::DuplicateEdge { .. } => Error::DuplicateEdge { line },
            Error::BadInstance(msg) => Error::Parse { line, msg },
            other => other,
        })?;
    }
    Ok(g)
}

/// A JSON argument given inline or as the path of a file holding it.
pub fn json_arg(arg: &str) -> Result<serde_json::Value> {
    let text = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| Error::Io(format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })
}

/// Comma-separated edge ids such as `0,3,4`; empty for the empty set.
pub fn edge_list_arg(arg: &str) -> Result<Vec<usize>> {
    arg.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Parse { line: 1, msg: format!("bad edge id {s:?}") }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_with_comments() {
        let g = parse_graph("# path\n0 1\n\n1 2 # second\n").unwrap();
        assert_eq!((g.vertex_count(), g.edges()), (3, &[(0, 1), (1, 2)][..]));
    }

    #[test]
    fn loops_and_duplicates_name_their_line() {
        assert_eq!(parse_graph("0 0").unwrap_err(), Error::LoopEdge { line: 1 });
        assert_eq!(parse_graph("0 1\n0 1").unwrap_err(), Error::DuplicateEdge { line: 2 });
        assert_eq!(parse_graph("0 1\n# c\n1 0").unwrap_err(), Error::DuplicateEdge { line: 3 });
        assert!(matches!(parse_graph("0 1\n2 x"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("0 1 2"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn json_schema() {
        let g = parse_graph(r#"{"n": 4, "edges": [[0, 1], [2, 3]]}"#).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 2));
        assert_eq!(parse_graph(r#"{"n": 2, "edges": [[1, 1]]}"#).unwrap_err(), Error::LoopEdge { line: 1 });
        assert!(matches!(parse_graph(r#"{"n": 2, "edges": [[0, 5]]}"#), Err(Error::Parse { .. })));
    }

    #[test]
    fn edge_ids() {
        assert_eq!(edge_list_arg("0, 3,4").unwrap(), vec![0, 3, 4]);
        assert!(edge_list_arg("").unwrap().is_empty());
        assert!(edge_list_arg("a").is_err());
    }
}
