//! graph6 encoding of trees.
//!
//! Layout: `N(n)` followed by the upper triangle of the adjacency matrix in
//! column order (`x(0,1), x(0,2), x(1,2), x(0,3), ...`), packed big-endian six
//! bits per byte and offset by 63.

use crate::error::Graph6Error;
use crate::tree::Tree;

const HEADER: &str = ">>graph6<<";

pub fn encode(t: &Tree) -> String {
    let n = t.order();
    let mut out = Vec::new();
    encode_order(n, &mut out);

    let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..n {
        for i in 0..j {
            bits.push(t.has_edge(i, j));
        }
    }
    for chunk in bits.chunks(6) {
        let mut byte = 0u8;
        for (k, &b) in chunk.iter().enumerate() {
            if b {
                byte |= 1 << (5 - k);
            }
        }
        out.push(byte + 63);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

fn encode_order(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
}

/// Decodes one graph6 line into the vertex count and edge list, without
/// requiring the graph to be a tree.
pub fn decode_edges(text: &str) -> Result<(usize, Vec<(usize, usize)>), Graph6Error> {
    let text = text.trim_end_matches(['\r', '\n']);
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Graph6Error::Malformed(format!(
            "byte {b:#04x} outside the printable graph6 range"
        )));
    }
    let six = |b: u8| (b - 63) as usize;
    let (n, body) = match bytes {
        [] => return Err(Graph6Error::Malformed("empty input".into())),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(Graph6Error::Malformed("truncated order".into()));
            }
            let n = rest[..6].iter().fold(0, |acc, &b| (acc << 6) | six(b));
            (n, &rest[6..])
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(Graph6Error::Malformed("truncated order".into()));
            }
            let n = rest[..3].iter().fold(0, |acc, &b| (acc << 6) | six(b));
            (n, &rest[3..])
        }
        [first, rest @ ..] => (six(*first), rest),
    };
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if body.len() != expected {
        return Err(Graph6Error::Malformed(format!(
            "expected {expected} data bytes for order {n}, found {}",
            body.len()
        )));
    }
    let bit = |k: usize| (six(body[k / 6]) >> (5 - k % 6)) & 1 == 1;
    if (nbits..expected * 6).any(bit) {
        return Err(Graph6Error::Malformed("nonzero padding bits".into()));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok((n, edges))
}

pub fn decode(text: &str) -> Result<Tree, Graph6Error> {
    let (n, edges) = decode_edges(text)?;
    Ok(Tree::new(n, &edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::TreeError;

    #[test]
    fn hand_encoded_examples() {
        assert_eq!(encode(&Tree::single_vertex()), "@");
        // x(0,1)=1, x(0,2)=0, x(1,2)=1 -> 101000 -> 40 + 63
        assert_eq!(encode(&Tree::path(3)), "Bg");
        assert_eq!(decode("Bg").unwrap(), Tree::path(3));
        assert_eq!(decode("@").unwrap(), Tree::single_vertex());
    }

    #[test]
    fn header_and_newline_accepted() {
        assert_eq!(decode(">>graph6<<Bg\n").unwrap(), Tree::path(3));
    }

    #[test]
    fn large_order_prefix() {
        let t = Tree::path(70);
        let s = encode(&t);
        assert_eq!(s.as_bytes()[0], 126);
        assert_eq!(decode(&s).unwrap(), t);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(decode(""), Err(Graph6Error::Malformed(_))));
        assert!(matches!(decode("B"), Err(Graph6Error::Malformed(_))));
        assert!(matches!(decode("Bgg"), Err(Graph6Error::Malformed(_))));
        assert!(matches!(decode("B g"), Err(Graph6Error::Malformed(_))));
        // padding bit set: 101001
        assert!(matches!(decode("Bh"), Err(Graph6Error::Malformed(_))));
    }

    #[test]
    fn non_tree_rejected() {
        // triangle: 111000
        assert!(matches!(
            decode("Bw"),
            Err(Graph6Error::NotATree(TreeError::NotATree(_)))
        ));
        assert_eq!(decode_edges("Bw").unwrap().1.len(), 3);
    }
}
