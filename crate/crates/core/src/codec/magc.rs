//! The `.magc` file format.
//!
//! ```text
//! MAGC 1
//! p <order>
//! tau <t1> <t2> ... <tp>
//! time-aspect <h|none>
//! payload bits
//! <blank line>
//! <characteristic bitstring, bit k at byte k/8 position k%8, zero padded>
//! ```
//!
//! The alternative edge payload replaces the last two header lines with
//! `payload edges`, `m <count>` and one `c1 .. cp | c1' .. cp'` line per edge.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::mag::{Mag, MagBuilder, MagSignature, DEFAULT_MAX_COMPOSITE};

pub const MAGIC: &str = "MAGC 1";

fn header(sig: &MagSignature, payload: &str) -> String {
    let tau: Vec<String> = sig.aspect_sizes().iter().map(|t| t.to_string()).collect();
    let time = sig
        .time_aspect()
        .map_or_else(|| "none".to_string(), |h| h.to_string());
    format!(
        "{MAGIC}\np {}\ntau {}\ntime-aspect {time}\npayload {payload}\n",
        sig.order(),
        tau.join(" ")
    )
}

/// Serializes with the packed bitstring payload.
pub fn serialize(g: &Mag) -> Vec<u8> {
    let mut out = header(g.signature(), "bits").into_bytes();
    out.push(b'\n');
    let start = out.len();
    out.resize(start + g.bits().len().div_ceil(8), 0);
    for k in g.bits().ones() {
        out[start + k / 8] |= 1 << (k % 8);
    }
    out
}

/// Serializes with the human-readable edge-list payload.
pub fn serialize_edges(g: &Mag) -> Vec<u8> {
    let mut out = header(g.signature(), "edges");
    out.push_str(&format!("m {}\n", g.edge_count()));
    let join = |c: &[usize]| {
        c.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    for e in g.edges() {
        out.push_str(&format!(
            "{} | {}\n",
            join(e.a.coords()),
            join(e.b.coords())
        ));
    }
    out.into_bytes()
}

/// Parses either payload kind, enforcing the default composite-vertex ceiling.
pub fn deserialize(bytes: &[u8]) -> Result<Mag> {
    deserialize_with_limit(bytes, DEFAULT_MAX_COMPOSITE)
}

pub fn deserialize_with_limit(bytes: &[u8], max_composite: usize) -> Result<Mag> {
    let mut r = Reader { bytes, pos: 0 };

    let (off, line) = r.line()?;
    if line != MAGIC {
        return Err(Error::format(off, format!("bad magic {line:?}")));
    }

    let (off, p) = r.keyed("p")?;
    let order: usize = parse_num(p, off)?;
    if order == 0 {
        return Err(Error::format(off, "order must be at least 1"));
    }

    let (off, tau) = r.keyed("tau")?;
    let sizes = tau
        .split(' ')
        .map(|t| parse_num::<usize>(t, off))
        .collect::<Result<Vec<_>>>()?;
    if sizes.len() != order {
        return Err(Error::format(
            off,
            format!("order is {order} but {} aspect sizes given", sizes.len()),
        ));
    }

    let (off, time) = r.keyed("time-aspect")?;
    let time_aspect = match time {
        "none" => None,
        h => Some(parse_num::<usize>(h, off)?),
    };
    let sig = MagSignature::with_limit(sizes, time_aspect, max_composite)
        .map_err(|e| Error::format(off, e.to_string()))?;

    let (off, payload) = r.keyed("payload")?;
    match payload {
        "bits" => read_bits(&mut r, sig),
        "edges" => read_edges(&mut r, sig),
        other => Err(Error::format(off, format!("unknown payload {other:?}"))),
    }
}

fn read_bits(r: &mut Reader<'_>, sig: MagSignature) -> Result<Mag> {
    let (off, blank) = r.line()?;
    if !blank.is_empty() {
        return Err(Error::format(off, "expected blank line before payload"));
    }
    let len = sig.pair_space_len();
    let need = len.div_ceil(8);
    let data = &r.bytes[r.pos..];
    if data.len() < need {
        return Err(Error::format(
            r.bytes.len(),
            format!(
                "truncated payload: {} of {need} bytes for {len} bits",
                data.len()
            ),
        ));
    }
    if data.len() > need {
        return Err(Error::format(r.pos + need, "trailing bytes after payload"));
    }
    let mut bits = FixedBitSet::with_capacity(len);
    for (i, &byte) in data.iter().enumerate() {
        for j in 0..8 {
            if byte >> j & 1 == 1 {
                let k = i * 8 + j;
                if k >= len {
                    return Err(Error::format(r.pos + i, "non-zero padding bits"));
                }
                bits.insert(k);
            }
        }
    }
    Ok(Mag::from_bits_unchecked(sig, bits))
}

fn read_edges(r: &mut Reader<'_>, sig: MagSignature) -> Result<Mag> {
    let (off, m) = r.keyed("m")?;
    let m: usize = parse_num(m, off)?;
    let mut builder = MagBuilder::new(sig);
    let mut seen = 0;
    while seen < m {
        let (off, line) = r.line()?;
        let (left, right) = line
            .split_once(" | ")
            .ok_or_else(|| Error::format(off, "edge line must be `c.. | c..`"))?;
        let coords = |s: &str| {
            s.split(' ')
                .map(|c| parse_num::<usize>(c, off))
                .collect::<Result<Vec<_>>>()
        };
        let sig = builder.signature();
        let a = sig
            .vertex(coords(left)?)
            .and_then(|v| sig.index_of(&v))
            .map_err(|e| Error::format(off, e.to_string()))?;
        let b = sig
            .vertex(coords(right)?)
            .and_then(|v| sig.index_of(&v))
            .map_err(|e| Error::format(off, e.to_string()))?;
        if a == b {
            return Err(Error::format(off, "self-loop in edge list"));
        }
        if builder.has_index_edge(a, b) {
            return Err(Error::format(off, "duplicate edge"));
        }
        builder
            .add_index_edge(a, b)
            .map_err(|e| Error::format(off, e.to_string()))?;
        seen += 1;
    }
    if r.pos != r.bytes.len() {
        return Err(Error::format(r.pos, "trailing data after edge list"));
    }
    Ok(builder.freeze())
}

fn parse_num<T: std::str::FromStr>(s: &str, offset: usize) -> Result<T> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::format(
            offset,
            format!("expected a number, got {s:?}"),
        ));
    }
    s.parse()
        .map_err(|_| Error::format(offset, format!("number {s:?} overflows")))
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    /// Next `\n`-terminated ASCII line and its starting offset.
    fn line(&mut self) -> Result<(usize, &'a str)> {
        let start = self.pos;
        let rest = &self.bytes[start..];
        if rest.is_empty() {
            return Err(Error::format(start, "unexpected end of file"));
        }
        let end = rest
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::format(start, "unterminated header line"))?;
        let line = std::str::from_utf8(&rest[..end])
            .ok()
            .filter(|l| l.is_ascii())
            .ok_or_else(|| Error::format(start, "header line is not ASCII"))?;
        self.pos = start + end + 1;
        Ok((start, line))
    }

    /// A `key value` line; returns the value.
    fn keyed(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (off, line) = self.line()?;
        line.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix(' '))
            .map(|v| (off, v))
            .ok_or_else(|| Error::format(off, format!("expected `{key} ...`, got {line:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Mag {
        let sig = MagSignature::new(vec![3, 4]).unwrap();
        Mag::from_index_edges(sig, [(0, 1), (2, 7), (11, 5), (3, 10)]).unwrap()
    }

    #[test]
    fn bits_layout_is_exact() {
        let sig = MagSignature::new(vec![4]).unwrap();
        let g = Mag::from_index_edges(sig, [(0, 1), (0, 3)]).unwrap();
        let out = serialize(&g);
        let mut expected = b"MAGC 1\np 1\ntau 4\ntime-aspect none\npayload bits\n\n".to_vec();
        expected.push(0b0000_1001);
        assert_eq!(out, expected);
    }

    #[test]
    fn edges_layout_is_exact() {
        let sig = MagSignature::new(vec![2, 3]).unwrap();
        let g = Mag::from_index_edges(sig, [(0, 5)]).unwrap();
        assert_eq!(
            String::from_utf8(serialize_edges(&g)).unwrap(),
            "MAGC 1\np 2\ntau 2 3\ntime-aspect 2\npayload edges\nm 1\n0 0 | 1 2\n"
        );
    }

    #[test]
    fn round_trips() {
        let g = sample();
        assert_eq!(deserialize(&serialize(&g)).unwrap(), g);
        assert_eq!(deserialize(&serialize_edges(&g)).unwrap(), g);
    }

    fn offset_of(err: Error) -> usize {
        match err {
            Error::Format { offset, .. } => offset,
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_rejected() {
        assert_eq!(offset_of(deserialize(b"").unwrap_err()), 0);
    }

    #[test]
    fn bad_magic_rejected() {
        assert_eq!(offset_of(deserialize(b"MAGC 2\n").unwrap_err()), 0);
    }

    #[test]
    fn truncated_payload_rejected() {
        let bytes = serialize(&sample());
        let short = &bytes[..bytes.len() - 1];
        let err = deserialize(short).unwrap_err();
        assert!(err.to_string().contains("truncated"), "{err}");
        assert_eq!(offset_of(err), short.len());
    }

    #[test]
    fn trailing_and_padding_rejected() {
        let mut bytes = serialize(&sample());
        bytes.push(0);
        assert!(deserialize(&bytes).is_err());
        // 66 bits of payload: the top 6 bits of the last byte are padding.
        let mut bytes = serialize(&sample());
        *bytes.last_mut().unwrap() |= 0x80;
        assert!(deserialize(&bytes)
            .unwrap_err()
            .to_string()
            .contains("padding"));
    }

    #[test]
    fn aspect_overflow_rejected() {
        let text = b"MAGC 1\np 2\ntau 99999999999999999999 2\ntime-aspect 2\npayload bits\n\n";
        assert_eq!(offset_of(deserialize(text).unwrap_err()), 11);
        let text = b"MAGC 1\np 2\ntau 65536 65536\ntime-aspect 2\npayload bits\n\n";
        let err = deserialize(text).unwrap_err();
        assert!(err.to_string().contains("exceeds"), "{err}");
    }

    #[test]
    fn header_mismatches_rejected() {
        for text in [
            &b"MAGC 1\np 2\ntau 3\ntime-aspect none\npayload bits\n\n\0"[..],
            b"MAGC 1\np 1\ntau 3\ntime-aspect 2\npayload bits\n\n\0",
            b"MAGC 1\np 1\ntau 3\ntime-aspect none\npayload nope\n",
            b"MAGC 1\np x\n",
            b"MAGC 1\np 1\ntau 3\ntime-aspect none\npayload edges\nm 2\n0 | 1\n",
            b"MAGC 1\np 1\ntau 3\ntime-aspect none\npayload edges\nm 1\n0 | 0\n",
            b"MAGC 1\np 1\ntau 3\ntime-aspect none\npayload edges\nm 2\n0 | 1\n1 | 0\n",
            b"MAGC 1\np 1\ntau 3\ntime-aspect none\npayload edges\nm 1\n0 | 3\n",
        ] {
            assert!(
                matches!(deserialize(text), Err(Error::Format { .. })),
                "{}",
                String::from_utf8_lossy(text)
            );
        }
    }
}
