//! Edge-list text serialization.
//!
//! Format: first line `n d`, then one line `u v mult` per edge bundle with
//! u ≤ v, sorted lexicographically. Loops appear as `u u mult`. The writer
//! emits exactly this canonical form, so write(read(f)) round-trips
//! byte-for-byte on canonical files.

use crate::error::{Error, Result};
use crate::graph::RegularMultigraph;
use std::fmt::Write as _;
use std::path::Path;

/// Serializes a graph to the canonical edge-list text form.
pub fn to_edge_list(g: &RegularMultigraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", g.vertex_count(), g.degree());
    for &(u, v, m) in g.edges() {
        let _ = writeln!(s, "{u} {v} {m}");
    }
    s
}

/// Parses the edge-list text form, validating regularity and the declared
/// degree.
pub fn from_edge_list(text: &str) -> Result<RegularMultigraph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty file".into(),
    })?;
    let mut it = header.split_whitespace();
    let n: usize = parse_field(it.next(), 1, "vertex count")?;
    let d: u64 = parse_field(it.next(), 1, "degree")?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: 1,
            message: "header must be exactly `n d`".into(),
        });
    }
    let mut edges = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let u: usize = parse_field(it.next(), lineno, "u")?;
        let v: usize = parse_field(it.next(), lineno, "v")?;
        let m: u64 = parse_field(it.next(), lineno, "mult")?;
        if it.next().is_some() {
            return Err(Error::Parse {
                line: lineno,
                message: "expected exactly `u v mult`".into(),
            });
        }
        if u > v {
            return Err(Error::Parse {
                line: lineno,
                message: format!("edges must satisfy u ≤ v, got {u} > {v}"),
            });
        }
        edges.push((u, v, m));
    }
    let g = RegularMultigraph::build(n, &edges)?;
    if g.degree() != d {
        return Err(Error::Parse {
            line: 1,
            message: format!("declared degree {d} but graph has degree {}", g.degree()),
        });
    }
    Ok(g)
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    name: &str,
) -> Result<T> {
    let raw = field.ok_or_else(|| Error::Parse {
        line,
        message: format!("missing field `{name}`"),
    })?;
    raw.parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse `{raw}` as {name}"),
    })
}

pub fn write_graph(path: &Path, g: &RegularMultigraph) -> Result<()> {
    std::fs::write(path, to_edge_list(g))?;
    Ok(())
}

pub fn read_graph(path: &Path) -> Result<RegularMultigraph> {
    let text = std::fs::read_to_string(path)?;
    from_edge_list(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_exact() {
        let g = crate::graph::random_regular(12, 4, 9).unwrap();
        let s = to_edge_list(&g);
        let g2 = from_edge_list(&s).unwrap();
        assert_eq!(g, g2);
        assert_eq!(to_edge_list(&g2), s);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = from_edge_list("2 1\n0 1\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected: {other}"),
        }
        let err = from_edge_list("2 3\n0 1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn loops_serialize() {
        let g = RegularMultigraph::build(1, &[(0, 0, 5)]).unwrap();
        assert_eq!(to_edge_list(&g), "1 5\n0 0 5\n");
    }
}
