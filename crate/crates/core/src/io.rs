//! Text and JSON formats for signed block collections.
//!
//! Text: `#` header line with `key=value` pairs (`v` and `k` required),
//! then one block per line as `<+|-> e1 e2 e3`, or `<+N|-N> e1 e2 e3` for
//! coefficients of magnitude above one. Lines are sorted by lexicographic
//! block order with the positive leg first. A decomposition is written as
//! stanzas, each opened by `# trade <i> kind=<kind>`; the collection is the
//! sum of all stanzas.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::combinatorics::Block;
use crate::error::{Error, Result};
use crate::halving::TradeDecomposition;
use crate::inclusion::SignedCollection;
use crate::trades::TradeKind;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub v: u32,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

/// A parsed file: the aggregate collection and, when the file was written
/// in stanzas, the individual constituents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectionFile {
    pub header: Header,
    pub collection: SignedCollection,
    pub constituents: Option<TradeDecomposition>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

fn header_line(h: &Header) -> String {
    let mut s = format!("# v={} k={}", h.v, h.k);
    if let Some(t) = h.t {
        let _ = write!(s, " t={t}");
    }
    if let Some(m) = &h.method {
        let _ = write!(s, " method={m}");
    }
    if let Some(seed) = h.seed {
        let _ = write!(s, " seed={seed}");
    }
    s.push('\n');
    s
}

fn write_lines(out: &mut String, f: &SignedCollection, shift: u32) {
    let pos = f.iter().filter(|(_, c)| *c > 0);
    let neg = f.iter().filter(|(_, c)| *c < 0);
    for (b, c) in pos.chain(neg) {
        let sign = if c > 0 { '+' } else { '-' };
        out.push(sign);
        if c.unsigned_abs() != 1 {
            let _ = write!(out, "{}", c.unsigned_abs());
        }
        for x in b.elements() {
            let _ = write!(out, " {}", x + shift);
        }
        out.push('\n');
    }
}

pub fn write_text(
    header: &Header,
    f: &SignedCollection,
    decomposition: Option<&TradeDecomposition>,
    one_based: bool,
) -> String {
    let shift = u32::from(one_based);
    let mut out = header_line(header);
    match decomposition {
        None => write_lines(&mut out, f, shift),
        Some(d) => {
            for (i, c) in d.constituents.iter().enumerate() {
                let _ = writeln!(out, "# trade {} kind={}", i + 1, c.kind.as_str());
                write_lines(&mut out, &c.trade, shift);
            }
        }
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonEntry {
    block: Vec<u32>,
    coef: i64,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonConstituent {
    kind: TradeKind,
    blocks: Vec<JsonEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonFile {
    #[serde(flatten)]
    header: Header,
    blocks: Vec<JsonEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    constituents: Option<Vec<JsonConstituent>>,
}

fn json_entries(f: &SignedCollection, shift: u32) -> Vec<JsonEntry> {
    let pos = f.iter().filter(|(_, c)| *c > 0);
    let neg = f.iter().filter(|(_, c)| *c < 0);
    pos.chain(neg)
        .map(|(b, c)| JsonEntry {
            block: b.elements().iter().map(|x| x + shift).collect(),
            coef: c,
        })
        .collect()
}

pub fn write_json(
    header: &Header,
    f: &SignedCollection,
    decomposition: Option<&TradeDecomposition>,
    one_based: bool,
) -> String {
    let shift = u32::from(one_based);
    let file = JsonFile {
        header: header.clone(),
        blocks: json_entries(f, shift),
        constituents: decomposition.map(|d| {
            d.constituents
                .iter()
                .map(|c| JsonConstituent {
                    kind: c.kind,
                    blocks: json_entries(&c.trade, shift),
                })
                .collect()
        }),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("collection serializes");
    s.push('\n');
    s
}

pub fn write(
    format: Format,
    header: &Header,
    f: &SignedCollection,
    decomposition: Option<&TradeDecomposition>,
    one_based: bool,
) -> String {
    match format {
        Format::Text => write_text(header, f, decomposition, one_based),
        Format::Json => write_json(header, f, decomposition, one_based),
    }
}

fn unshift(x: u32, one_based: bool, line: usize) -> Result<u32> {
    if one_based {
        x.checked_sub(1).ok_or(Error::Parse {
            line,
            msg: "element 0 in one-based input".into(),
        })
    } else {
        Ok(x)
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<Option<Header>> {
    let body = line.trim_start_matches('#').trim();
    let mut v = None;
    let mut h = Header::default();
    let mut k = None;
    let err = |msg: String| Error::Parse { line: lineno, msg };
    for tok in body.split_whitespace() {
        let Some((key, val)) = tok.split_once('=') else {
            continue;
        };
        let num = || val.parse::<u64>().map_err(|_| err(format!("bad value in {tok:?}")));
        match key {
            "v" => v = Some(num()? as u32),
            "k" => k = Some(num()? as usize),
            "t" => h.t = Some(num()? as usize),
            "seed" => h.seed = Some(num()?),
            "method" => h.method = Some(val.to_string()),
            _ => {}
        }
    }
    Ok(v.map(|v| Header {
        v,
        k: k.unwrap_or(3),
        ..h
    }))
}

fn parse_block_line(line: &str, lineno: usize, header: &Header, one_based: bool) -> Result<(Block, i64)> {
    let err = |msg: String| Error::Parse { line: lineno, msg };
    let mut toks = line.split_whitespace();
    let head = toks.next().unwrap_or_default();
    let (sign, mag) = match head.split_at(1) {
        ("+", rest) => (1, rest),
        ("-", rest) => (-1, rest),
        _ => return Err(err(format!("expected a sign, found {head:?}"))),
    };
    let mag: i64 = if mag.is_empty() {
        1
    } else {
        mag.parse()
            .map_err(|_| err(format!("bad coefficient {head:?}")))?
    };
    let elements = toks
        .map(|t| {
            let x: u32 = t.parse().map_err(|_| err(format!("not an element: {t:?}")))?;
            unshift(x, one_based, lineno)
        })
        .collect::<Result<Vec<u32>>>()?;
    if elements.len() != header.k {
        return Err(err(format!(
            "expected {} elements, found {}",
            header.k,
            elements.len()
        )));
    }
    let block = Block::from_unsorted(elements, header.v)
        .map_err(|e| err(e.to_string()))?;
    Ok((block, sign * mag))
}

pub fn parse_text(text: &str, one_based: bool) -> Result<CollectionFile> {
    let mut header: Option<Header> = None;
    let mut aggregate: Option<SignedCollection> = None;
    let mut stanzas: Vec<(TradeKind, SignedCollection)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            let body = line.trim_start_matches('#').trim();
            if let Some(rest) = body.strip_prefix("trade") {
                let h = header.as_ref().ok_or(Error::Parse {
                    line: lineno,
                    msg: "trade stanza before the header".into(),
                })?;
                if aggregate.as_ref().is_some_and(|a| !a.is_empty()) && stanzas.is_empty() {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "block lines outside a trade stanza".into(),
                    });
                }
                let kind = rest
                    .split_whitespace()
                    .find_map(|t| t.strip_prefix("kind="))
                    .and_then(TradeKind::parse)
                    .unwrap_or(TradeKind::Minimal);
                stanzas.push((kind, SignedCollection::new(h.v, h.k)));
            } else if header.is_none() {
                if let Some(h) = parse_header(line, lineno)? {
                    aggregate = Some(SignedCollection::new(h.v, h.k));
                    header = Some(h);
                }
            }
            continue;
        }
        let h = header.as_ref().ok_or(Error::Parse {
            line: lineno,
            msg: "block line before a `# v=.. k=..` header".into(),
        })?;
        let (block, coef) = parse_block_line(line, lineno, h, one_based)?;
        let agg = aggregate.as_mut().unwrap();
        agg.add_block(block.clone(), coef)
            .map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
        if let Some((_, s)) = stanzas.last_mut() {
            s.add_block(block, coef)
                .map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
        }
    }
    let header = header.ok_or(Error::Parse {
        line: 0,
        msg: "missing `# v=.. k=..` header".into(),
    })?;
    let constituents = (!stanzas.is_empty()).then(|| {
        let mut d = TradeDecomposition::new(header.v);
        for (kind, t) in stanzas {
            d.push(kind, t);
        }
        d
    });
    Ok(CollectionFile {
        collection: aggregate.unwrap(),
        header,
        constituents,
    })
}

fn collect_json(entries: &[JsonEntry], header: &Header, one_based: bool) -> Result<SignedCollection> {
    let mut f = SignedCollection::new(header.v, header.k);
    for (i, e) in entries.iter().enumerate() {
        let elements = e
            .block
            .iter()
            .map(|&x| unshift(x, one_based, i + 1))
            .collect::<Result<Vec<u32>>>()?;
        if elements.len() != header.k {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("block {:?} has the wrong size", e.block),
            });
        }
        let block = Block::from_unsorted(elements, header.v).map_err(|err| Error::Parse {
            line: i + 1,
            msg: err.to_string(),
        })?;
        f.add_block(block, e.coef)?;
    }
    Ok(f)
}

/// JSON parse; errors carry the entry index in place of a line number.
pub fn parse_json(text: &str, one_based: bool) -> Result<CollectionFile> {
    let file: JsonFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    let collection = collect_json(&file.blocks, &file.header, one_based)?;
    let constituents = match &file.constituents {
        None => None,
        Some(cs) => {
            let mut d = TradeDecomposition::new(file.header.v);
            for c in cs {
                d.push(c.kind, collect_json(&c.blocks, &file.header, one_based)?);
            }
            Some(d)
        }
    };
    Ok(CollectionFile {
        header: file.header,
        collection,
        constituents,
    })
}

/// Picks the format from the first non-blank character.
pub fn parse_auto(text: &str, one_based: bool) -> Result<CollectionFile> {
    if text.trim_start().starts_with('{') {
        parse_json(text, one_based)
    } else {
        parse_text(text, one_based)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trades::minimal_trade;

    fn header(v: u32) -> Header {
        Header {
            v,
            k: 3,
            t: Some(2),
            method: Some("test".into()),
            seed: None,
        }
    }

    #[test]
    fn text_layout() {
        let f = minimal_trade([0, 1, 2], [3, 4, 5], 6).unwrap();
        let s = write_text(&header(6), &f, None, false);
        let expect = "# v=6 k=3 t=2 method=test\n\
                      + 0 1 2\n+ 0 4 5\n+ 1 3 5\n+ 2 3 4\n\
                      - 0 1 5\n- 0 2 4\n- 1 2 3\n- 3 4 5\n";
        assert_eq!(s, expect);
        let one = write_text(&header(6), &f, None, true);
        assert!(one.contains("+ 1 2 3\n"));
        assert_eq!(parse_text(&one, true).unwrap().collection, f);
    }

    #[test]
    fn coefficients_above_one() {
        let mut f = SignedCollection::new(6, 3);
        f.add_block(Block::new(vec![0, 1, 2], 6).unwrap(), 3).unwrap();
        f.add_block(Block::new(vec![1, 2, 3], 6).unwrap(), -2).unwrap();
        let s = write_text(&header(6), &f, None, false);
        assert!(s.contains("+3 0 1 2\n-2 1 2 3\n"));
        assert_eq!(parse_text(&s, false).unwrap().collection, f);
    }

    #[test]
    fn stanzas_sum_up() {
        let a = minimal_trade([0, 1, 2], [3, 4, 5], 10).unwrap();
        let b = minimal_trade([6, 7, 8], [9, 0, 1], 10).unwrap();
        let mut d = TradeDecomposition::new(10);
        d.push(TradeKind::Minimal, a.clone());
        d.push(TradeKind::Cycle8, b.clone());
        let sum = a.checked_add(&b).unwrap();
        for fmt in [Format::Text, Format::Json] {
            let s = write(fmt, &header(10), &sum, Some(&d), false);
            let back = parse_auto(&s, false).unwrap();
            assert_eq!(back.collection, sum);
            assert_eq!(back.constituents.as_ref(), Some(&d));
            assert_eq!(back.header, header(10));
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_text("+ 0 1 2\n", false), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_text("# v=6 k=3\n* 0 1 2\n", false),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_text("# v=6 k=3\n+ 0 1\n", false).is_err());
        assert!(parse_text("# v=6 k=3\n+ 0 1 6\n", false).is_err());
        assert!(parse_text("# v=6 k=3\n+ 0 1 1\n", false).is_err());
        assert!(parse_text("# v=6 k=3\n+ 0 1 2\n", true).is_err());
        assert!(parse_text("# v=6 k=3\n+ 0 1 2\n# trade 1\n+ 0 1 3\n", false).is_err());
        assert!(parse_text("# nothing here\n", false).is_err());
        assert!(parse_json("{\"v\": 6}", false).is_err());
    }

    #[test]
    fn blank_and_comment_lines_are_skipped() {
        let f = parse_text("# comment\n# v=7 k=3\n\n# another\n+ 0 1 3\n", false).unwrap();
        assert_eq!(f.header.v, 7);
        assert_eq!(f.collection.support_len(), 1);
        assert!(f.constituents.is_none());
    }
}
