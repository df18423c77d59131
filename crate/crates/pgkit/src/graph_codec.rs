//! The compact graph-string notation, e.g. `gbg1v1v1p1p1v1x0x0p0x1x0` or `bwd...duals...`.
//!
//! After the prefix, depth blocks are separated by `v`, vertices within a depth by `p`, and a
//! vertex is its list of single-digit multiplicities to the previous depth separated by `x`. The
//! optional `duals` section lists one 1-indexed involution per even depth 0, 2, 4, ...

use crate::error::{Error, Result};
use crate::graph_core::{BipartiteGraph, MAX_MULTIPLICITY};

const DUALS: &str = "duals";

fn parse_err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

/// Split `s` on `sep`, returning each piece with its byte offset relative to `base`.
fn pieces(s: &str, sep: char, base: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if c == sep {
            out.push((base + start, &s[start..i]));
            start = i + 1;
        }
    }
    out.push((base + start, &s[start..]));
    out
}

pub fn parse(s: &str) -> Result<BipartiteGraph> {
    let (prefix, rest) = match s.get(..3) {
        Some(p @ ("gbg" | "bwd")) => (p, &s[3..]),
        _ => return parse_err(0, "expected prefix \"gbg\" or \"bwd\""),
    };
    if let Some((i, c)) = s
        .char_indices()
        .find(|(_, c)| !matches!(c, 'g' | 'b' | 'w' | 'd' | 'u' | 'a' | 'l' | 's' | 'v' | 'p' | 'x' | '0'..='9'))
    {
        return parse_err(i, format!("unexpected character {c:?}"));
    }
    let (body, duals_text) = match rest.find(DUALS) {
        Some(i) => {
            if prefix == "gbg" {
                return parse_err(3 + i, "dual data is only allowed after prefix \"bwd\"");
            }
            (&rest[..i], Some((3 + i + DUALS.len(), &rest[i + DUALS.len()..])))
        }
        None => (rest, None),
    };

    let mut rows: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut prev_size = 1;
    for (bpos, block) in pieces(body, 'v', 3) {
        let mut verts = Vec::new();
        for (vpos, vert) in pieces(block, 'p', bpos) {
            let mut mults = Vec::new();
            for (dpos, digit) in pieces(vert, 'x', vpos) {
                match digit.as_bytes() {
                    [c @ b'0'..=b'9'] => mults.push(u32::from(c - b'0')),
                    [] => return parse_err(dpos, "expected a digit"),
                    _ => return parse_err(dpos, format!("expected a single digit, found {digit:?}")),
                }
            }
            if mults.len() != prev_size {
                return parse_err(
                    vpos,
                    format!(
                        "vertex at depth {} lists {} multiplicities but depth {} has {prev_size} vertices",
                        rows.len() + 1,
                        mults.len(),
                        rows.len()
                    ),
                );
            }
            verts.push(mults);
        }
        prev_size = verts.len();
        rows.push(verts);
    }
    let g = BipartiteGraph::from_rows(&rows)?;

    match duals_text {
        None => Ok(g),
        Some((dpos, text)) => {
            let mut duals = Vec::new();
            for (bpos, block) in pieces(text, 'v', dpos) {
                let mut perm = Vec::new();
                for (npos, num) in pieces(block, 'x', bpos) {
                    if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) {
                        return parse_err(npos, format!("expected a positive integer, found {num:?}"));
                    }
                    match num.parse::<usize>() {
                        Ok(k) if k >= 1 => perm.push(k - 1),
                        _ => return parse_err(npos, format!("dual index {num:?} must be at least 1")),
                    }
                }
                duals.push(perm);
            }
            g.with_duals(duals)
        }
    }
}

/// Canonical string of a graph; `parse(serialize(g))` is the canonical form of `g`.
pub fn serialize(g: &BipartiteGraph) -> Result<String> {
    if g.max_depth() == 0 {
        return Err(Error::Encoding("a graph with only the basepoint has no depth blocks".into()));
    }
    if let Some(m) = g.adjacency().iter().flatten().flatten().find(|&&m| m > MAX_MULTIPLICITY) {
        return Err(Error::Encoding(format!("multiplicity {m} exceeds the single-digit limit")));
    }
    Ok(encode(&g.canonical()))
}

/// String of a graph already in canonical form.
pub(crate) fn serialize_canonical(g: &BipartiteGraph) -> Result<String> {
    if g.max_depth() == 0 {
        return Err(Error::Encoding("a graph with only the basepoint has no depth blocks".into()));
    }
    Ok(encode(g))
}

fn encode(c: &BipartiteGraph) -> String {
    let mut out = String::from(if c.duals().is_some() { "bwd" } else { "gbg" });
    let blocks: Vec<String> = c
        .adjacency()
        .iter()
        .map(|m| {
            let cols = m[0].len();
            (0..cols)
                .map(|j| m.iter().map(|r| r[j].to_string()).collect::<Vec<_>>().join("x"))
                .collect::<Vec<_>>()
                .join("p")
        })
        .collect();
    out.push_str(&blocks.join("v"));
    if let Some(duals) = c.duals() {
        out.push_str(DUALS);
        let blocks: Vec<String> =
            duals.iter().map(|p| p.iter().map(|&k| (k + 1).to_string()).collect::<Vec<_>>().join("x")).collect();
        out.push_str(&blocks.join("v"));
    }
    out
}

/// Canonical form of a graph string.
pub fn canonicalize(s: &str) -> Result<String> {
    serialize(&parse(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fork_and_path() {
        let g = parse("gbg1v1p1").unwrap();
        assert_eq!(g.depth_sizes(), &[1, 1, 2]);
        assert_eq!(g.valence((1, 0)), 3);
        assert_eq!(serialize(&BipartiteGraph::path(3)).unwrap(), "gbg1v1");
    }

    #[test]
    fn two_two_two_one_shape() {
        let g = parse("gbg1v1v1p1p1v1x0x0p0x1x0").unwrap();
        assert_eq!(g.depth_sizes(), &[1, 1, 1, 3, 2]);
        assert_eq!(g.valence((2, 0)), 4);
        assert_eq!(g.num_edges(), 7);
    }

    #[test]
    fn arity_error_reports_position() {
        match parse("gbg1v1x1") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse("xyz1"), Err(Error::Parse { .. })));
        assert!(matches!(parse("gbg1 v1"), Err(Error::Parse { .. })));
        assert!(matches!(parse("gbg1vv1"), Err(Error::Parse { .. })));
        assert!(matches!(parse("gbg12"), Err(Error::Parse { .. })));
        assert!(matches!(parse("gbg1v1duals1v1"), Err(Error::Parse { .. })));
        assert!(matches!(parse("bwd1v1p1duals1v1x1"), Err(Error::Validation(_))));
        assert!(matches!(parse("bwd1v1p1duals1"), Err(Error::Validation(_))));
        assert!(matches!(parse("bwd1v1p1duals0v1x2"), Err(Error::Parse { .. })));
        assert!(matches!(parse("gbg1v0"), Err(Error::Validation(_))));
    }

    #[test]
    fn dual_blocks_index_even_depths() {
        let g = parse("bwd1v1p1duals1v2x1").unwrap();
        assert_eq!(g.duals().unwrap(), &[vec![0], vec![1, 0]]);
        assert_eq!(serialize(&g).unwrap(), "bwd1v1p1duals1v2x1");
    }

    #[test]
    fn encoding_limits() {
        let ten = BipartiteGraph::from_rows(&[vec![vec![10]]]).unwrap();
        assert!(matches!(serialize(&ten), Err(Error::Encoding(_))));
        assert!(matches!(serialize(&BipartiteGraph::path(1)), Err(Error::Encoding(_))));
    }

    #[test]
    fn catalog_strings_round_trip() {
        for (s, v, e) in crate::catalog::FIXTURES {
            let g = parse(s).unwrap();
            assert_eq!((g.num_vertices(), g.num_edges()), (v, e), "{s}");
            let c = serialize(&g).unwrap();
            assert_eq!(parse(&c).unwrap(), g.canonical(), "{s}");
            assert_eq!(canonicalize(&c).unwrap(), c, "{s}");
            if c != s {
                println!("{s} -> {c}");
            }
        }
    }

    #[test]
    fn canonical_rows_descend() {
        assert_eq!(canonicalize("gbg1v1p1v0x1").unwrap(), "gbg1v1p1v1x0");
    }
}
