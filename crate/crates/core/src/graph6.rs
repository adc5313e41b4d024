//! graph6 text encoding of undirected graphs.
//!
//! Supports the one-byte header (n <= 62), the `~`-prefixed 18-bit form
//! (n <= 258047), and the `~~`-prefixed 36-bit form. Encoding is canonical
//! (zero padding bits); decoding tolerates nonzero padding.

use crate::graph::Graph;
use crate::{Error, Result};

const MAX_SHORT: usize = 62;
const MAX_MEDIUM: usize = 258_047;

pub fn encode_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = String::new();
    if n <= MAX_SHORT {
        out.push((63 + n as u8) as char);
    } else if n <= MAX_MEDIUM {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((63 + ((n >> shift) & 63) as u8) as char);
        }
    } else {
        out.push('~');
        out.push('~');
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((63 + ((n >> shift) & 63) as u8) as char);
        }
    }
    // Upper triangle in column order: (0,1), (0,2), (1,2), (0,3), ...
    let mut acc = 0u8;
    let mut filled = 0;
    for k in 1..n as u32 {
        for i in 0..k {
            acc = (acc << 1) | g.has_edge(i, k) as u8;
            filled += 1;
            if filled == 6 {
                out.push((63 + acc) as char);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((63 + (acc << (6 - filled))) as char);
    }
    out
}

pub fn decode_graph6(text: &str) -> Result<Graph> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let sextet = |b: u8| -> Result<usize> {
        if (63..=126).contains(&b) {
            Ok((b - 63) as usize)
        } else {
            Err(Error::Parse(format!("byte {b} outside graph6 range")))
        }
    };
    let (n, body) = if bytes.is_empty() {
        return Err(Error::Parse("empty graph6 string".into()));
    } else if bytes[0] != b'~' {
        (sextet(bytes[0])?, &bytes[1..])
    } else if bytes.len() >= 2 && bytes[1] != b'~' {
        if bytes.len() < 4 {
            return Err(Error::Parse("truncated graph6 header".into()));
        }
        let n = (sextet(bytes[1])? << 12) | (sextet(bytes[2])? << 6) | sextet(bytes[3])?;
        (n, &bytes[4..])
    } else {
        if bytes.len() < 8 {
            return Err(Error::Parse("truncated graph6 header".into()));
        }
        let mut n = 0usize;
        for &b in &bytes[2..8] {
            n = (n << 6) | sextet(b)?;
        }
        (n, &bytes[8..])
    };
    let bit_count = n * n.saturating_sub(1) / 2;
    let needed = bit_count.div_ceil(6);
    if body.len() < needed {
        return Err(Error::Parse(format!(
            "graph6 body too short: {} bytes, need {needed}",
            body.len()
        )));
    }
    if body.len() > needed {
        return Err(Error::Parse("trailing bytes after graph6 body".into()));
    }
    let mut edges = Vec::new();
    let mut idx = 0usize;
    'outer: for k in 1..n as u32 {
        for i in 0..k {
            if idx >= bit_count {
                break 'outer;
            }
            let byte = sextet(body[idx / 6])?;
            if byte >> (5 - idx % 6) & 1 == 1 {
                edges.push((i, k));
            }
            idx += 1;
        }
    }
    Graph::from_edge_list(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference strings cross-checked against an independent encoder
    // implemented straight from the format description.
    #[test]
    fn known_encodings() {
        let k3 = Graph::from_edge_list(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(encode_graph6(&k3), "Bw");
        let k1 = Graph::empty(1);
        assert_eq!(encode_graph6(&k1), "@");
        let c4 = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(encode_graph6(&c4), "Cl");
        let k4 = Graph::complete(4);
        assert_eq!(encode_graph6(&k4), "C~");
        let p3 = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(encode_graph6(&p3), "Bg");
        let k23 =
            Graph::from_edge_list(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(encode_graph6(&k23), "D]o");
        assert_eq!(encode_graph6(&Graph::empty(5)), "D??");
        let c8 =
            Graph::from_edge_list(8, &(0..8).map(|i| (i, (i + 1) % 8)).collect::<Vec<_>>())
                .unwrap();
        assert_eq!(encode_graph6(&c8), "GhCGKC");
    }

    #[test]
    fn long_form_header() {
        let edges: Vec<(u32, u32)> = (0..62).map(|i| (i, i + 1)).collect();
        let p63 = Graph::from_edge_list(63, &edges).unwrap();
        let s = encode_graph6(&p63);
        assert!(s.starts_with("~??~hCGG"));
        assert_eq!(decode_graph6(&s).unwrap(), p63);
    }

    #[test]
    fn single_vertex_round_trips() {
        assert_eq!(decode_graph6("@").unwrap(), Graph::empty(1));
        assert_eq!(encode_graph6(&decode_graph6("@").unwrap()), "@");
    }

    #[test]
    fn truncated_string_is_parse_error() {
        // header says 8 vertices but the body is cut short
        assert!(matches!(decode_graph6("GhC"), Err(Error::Parse(_))));
        assert!(matches!(decode_graph6("~?"), Err(Error::Parse(_))));
        assert!(matches!(decode_graph6(""), Err(Error::Parse(_))));
    }

    #[test]
    fn decode_encode_identity_on_canonical_strings() {
        for s in ["Bw", "Cl", "C~", "D]o", "GhCGKC", "D??", "@"] {
            assert_eq!(encode_graph6(&decode_graph6(s).unwrap()), s);
        }
    }
}
