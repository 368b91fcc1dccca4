//! Graph exchange formats. Vertices are anti-flag ids in enumeration order.

use antiflags::{AntiFlags, RelGraph};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {0:#x} is outside the graph6 range 63..=126")]
    BadByte(u8),
    #[error("truncated graph6 string: expected {expected} data bytes, found {found}")]
    Truncated { expected: usize, found: usize },
}

fn push_size(out: &mut Vec<u8>, n: usize) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.extend((0..3).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
    }
}

/// graph6 encoding: size prefix, then the upper triangle column by column
/// (`x(0,1), x(0,2), x(1,2), x(0,3), ...`) in 6-bit groups, most
/// significant bit first, each offset by 63. Ends with a newline.
pub fn graph6(graph: &RelGraph) -> String {
    let n = graph.order();
    let mut out = Vec::new();
    push_size(&mut out, n);
    let mut group = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            group = group << 1 | u8::from(graph.is_adjacent(i, j));
            filled += 1;
            if filled == 6 {
                out.push(group + 63);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((group << (6 - filled)) + 63);
    }
    out.push(b'\n');
    String::from_utf8(out).expect("graph6 is printable ASCII")
}

/// A decoded graph6 string: order and edges `(i, j)`, `i < j`, in encoding order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub order: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn parse_graph6(s: &str) -> Result<Decoded, Graph6Error> {
    let bytes = s.trim_end().as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Graph6Error::BadByte(b));
    }
    let value = |bs: &[u8]| bs.iter().fold(0usize, |acc, &b| acc << 6 | usize::from(b - 63));
    let (order, rest) = match bytes {
        [] => return Err(Graph6Error::Empty),
        [126, 126, tail @ ..] if tail.len() >= 6 => (value(&tail[..6]), &tail[6..]),
        [126, tail @ ..] if tail.len() >= 3 => (value(&tail[..3]), &tail[3..]),
        [126, ..] => return Err(Graph6Error::Truncated { expected: 3, found: bytes.len() - 1 }),
        [b, tail @ ..] => (usize::from(b - 63), tail),
    };
    let bits = order * order.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if rest.len() < expected {
        return Err(Graph6Error::Truncated { expected, found: rest.len() });
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..order {
        for i in 0..j {
            let byte = rest[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Decoded { order, edges })
}

/// DIMACS edge format with 1-based vertex ids.
pub fn dimacs(graph: &RelGraph) -> String {
    let mut out = format!("p edge {} {}\n", graph.order(), graph.edge_count());
    for (a, b) in graph.edges() {
        out.push_str(&format!("e {} {}\n", a + 1, b + 1));
    }
    out
}

#[derive(Serialize)]
struct VertexRecord {
    id: usize,
    point_id: usize,
    hyperplane_id: usize,
    point: Vec<u8>,
    hyperplane: Vec<u8>,
}

#[derive(Serialize)]
struct EdgeRecord {
    u: usize,
    v: usize,
}

/// One JSON object per vertex (with its point and hyperplane vectors),
/// then one per edge.
pub fn jsonl(graph: &RelGraph, flags: &AntiFlags) -> String {
    let space = flags.space();
    let mut out = String::new();
    for (id, a) in flags.flags().iter().enumerate() {
        let rec = VertexRecord {
            id,
            point_id: a.point,
            hyperplane_id: a.hyperplane,
            point: space.point(a.point).coords().iter().map(|e| e.0).collect(),
            hyperplane: space.hyperplane(a.hyperplane).coeffs().iter().map(|e| e.0).collect(),
        };
        out.push_str(&serde_json::to_string(&rec).expect("plain record"));
        out.push('\n');
    }
    for (u, v) in graph.edges() {
        out.push_str(&serde_json::to_string(&EdgeRecord { u, v }).expect("plain record"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use antiflags::RelationKind;

    #[test]
    fn size_prefixes() {
        let mut v = Vec::new();
        push_size(&mut v, 28);
        assert_eq!(v, b"[");
        v.clear();
        push_size(&mut v, 120);
        assert_eq!(v, [126, 63, 64, 120 - 64 + 63]);
    }

    #[test]
    fn known_small_encoding() {
        // Γ3 at (3,2) begins with anti-flags sharing point 0, so x(0,1) = 1.
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        let g = RelGraph::build(RelationKind::R3, &flags).unwrap();
        let s = graph6(&g);
        assert_eq!(s.as_bytes()[0], 28 + 63);
        assert_eq!((s.as_bytes()[1] - 63) >> 5, 1);
        assert_eq!(s.len(), 1 + (28 * 27 / 2usize).div_ceil(6) + 1);
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(parse_graph6(""), Err(Graph6Error::Empty));
        assert_eq!(parse_graph6("A\x01"), Err(Graph6Error::BadByte(1)));
        assert!(matches!(parse_graph6("["), Err(Graph6Error::Truncated { .. })));
    }

    #[test]
    fn dimacs_header() {
        let flags = AntiFlags::enumerate(3, 2).unwrap();
        let g = RelGraph::build(RelationKind::R2, &flags).unwrap();
        let d = dimacs(&g);
        assert_eq!(d.lines().next(), Some(format!("p edge 28 {}", g.edge_count()).as_str()));
        assert_eq!(d.lines().count(), 1 + g.edge_count());
    }
}
