//! The sweep file: a CSV of records with `#` lines carrying everything else.
//!
//! ```text
//! curve,p,ap,ordinary,b,delta,r,m,extremal
//! #sweep curve=11a1 x=100 block=4096
//! 11a1,5,-1,1,1,-19,1,19,0
//! 11a1,7,-2,1,1,-24,2,6,0
//! #skipped 11
//! ...
//! #done 0
//! ```
//!
//! Rows within a block are in increasing `p`; `#unresolved <p> <a>` marks a
//! prime whose record could not be determined. A block is complete only once
//! its `#done <index>` line is present.

use std::path::Path;

use crate::endoring::EndoRecord;
use crate::error::{Error, Result};

use super::{Block, SweepResult, Unresolved, BLOCK_PRIMES};

pub const CSV_HEADER: &str = "curve,p,ap,ordinary,b,delta,r,m,extremal";

pub(crate) fn preamble(label: &str, x: u64) -> String {
    format!("{CSV_HEADER}\n#sweep curve={label} x={x} block={BLOCK_PRIMES}\n")
}

fn record_line(label: &str, r: &EndoRecord) -> String {
    format!(
        "{label},{},{},{},{},{},{},{},{}\n",
        r.p, r.a, r.ordinary as u8, r.b, r.delta, r.r, r.m, r.extremal as u8
    )
}

pub(crate) fn format_block(label: &str, block: &Block, index: usize) -> String {
    let mut lines: Vec<(u64, String)> = Vec::new();
    lines.extend(block.records.iter().map(|r| (r.p, record_line(label, r))));
    lines.extend(block.skipped.iter().map(|&p| (p, format!("#skipped {p}\n"))));
    lines.extend(block.unresolved.iter().map(|u| (u.p, format!("#unresolved {} {}\n", u.p, u.a))));
    lines.sort_by_key(|(p, _)| *p);
    let mut out: String = lines.into_iter().map(|(_, l)| l).collect();
    out.push_str(&format!("#done {index}\n"));
    out
}

/// The complete file for a finished sweep; identical to the checkpoint a
/// run with that result leaves behind.
pub fn format_csv(s: &SweepResult) -> Result<String> {
    let mut out = preamble(&s.curve, s.x);
    let blocks = super::blocks_of(s.x)?;
    let (mut ri, mut si, mut ui) = (0, 0, 0);
    for (index, primes) in blocks.iter().enumerate() {
        let last = *primes.last().expect("blocks are nonempty");
        let mut block = Block::default();
        while ri < s.records.len() && s.records[ri].p <= last {
            block.records.push(s.records[ri]);
            ri += 1;
        }
        while si < s.skipped.len() && s.skipped[si] <= last {
            block.skipped.push(s.skipped[si]);
            si += 1;
        }
        while ui < s.unresolved.len() && s.unresolved[ui].p <= last {
            block.unresolved.push(s.unresolved[ui]);
            ui += 1;
        }
        out.push_str(&format_block(&s.curve, &block, index));
    }
    Ok(out)
}

fn parse_record(line: &str, lineno: usize) -> Result<(String, EndoRecord)> {
    let bad = |what: &str| Error::Parse(format!("line {lineno}: {what}: {line:?}"));
    let fields: Vec<&str> = line.split(',').collect();
    let [curve, p, a, o, b, delta, r, m, e] = fields[..] else {
        return Err(bad("expected 9 columns"));
    };
    let int = |s: &str| s.parse::<i64>().map_err(|_| bad("bad integer"));
    let nat = |s: &str| s.parse::<u64>().map_err(|_| bad("bad integer"));
    let flag = |s: &str| match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(bad("flag must be 0 or 1")),
    };
    let rec = EndoRecord {
        p: nat(p)?,
        a: int(a)?,
        ordinary: flag(o)?,
        b: nat(b)?,
        delta: int(delta)?,
        r: nat(r)?,
        m: nat(m)?,
        extremal: flag(e)?,
    };
    Ok((curve.to_string(), rec))
}

fn parse_meta(line: &str) -> Option<(String, u64)> {
    let rest = line.strip_prefix("#sweep ")?;
    let mut curve = None;
    let mut x = None;
    let mut block = None;
    for kv in rest.split_whitespace() {
        match kv.split_once('=')? {
            ("curve", v) => curve = Some(v.to_string()),
            ("x", v) => x = v.parse().ok(),
            ("block", v) => block = v.parse::<usize>().ok(),
            _ => return None,
        }
    }
    (block? == BLOCK_PRIMES).then_some(())?;
    Some((curve?, x?))
}

/// Parsed file: label, bound, complete blocks, and the byte length of the
/// prefix that ends with the last `#done` line.
pub(crate) struct Parsed {
    pub curve: String,
    pub x: u64,
    pub blocks: Vec<Block>,
    pub complete_len: u64,
}

/// Parses a sweep file, auditing every record. Anything after the last
/// `#done` line is ignored.
pub(crate) fn parse(text: &str) -> Result<Parsed> {
    let mut offset = 0usize;
    let mut lines = text.split_inclusive('\n');
    let header = lines.next().unwrap_or("");
    if header.trim_end() != CSV_HEADER || !header.ends_with('\n') {
        return Err(Error::Parse("missing or wrong header row".into()));
    }
    offset += header.len();
    let meta_line = lines.next().unwrap_or("");
    let (curve, x) = parse_meta(meta_line.trim_end())
        .filter(|_| meta_line.ends_with('\n'))
        .ok_or_else(|| Error::Parse("missing #sweep line".into()))?;
    offset += meta_line.len();
    let mut complete_len = offset as u64;
    let mut blocks = Vec::new();
    let mut cur = Block::default();
    let mut last_p = 0u64;
    for (k, raw) in lines.enumerate() {
        let lineno = k + 3;
        offset += raw.len();
        if !raw.ends_with('\n') {
            break; // torn final line
        }
        let line = raw.trim_end();
        let mut see = |p: u64| -> Result<()> {
            if p <= last_p {
                return Err(Error::Parse(format!("line {lineno}: p={p} out of order")));
            }
            last_p = p;
            Ok(())
        };
        if let Some(rest) = line.strip_prefix('#') {
            let words: Vec<&str> = rest.split_whitespace().collect();
            let num = |s: &str| s.parse::<u64>().map_err(|_| Error::Parse(format!("line {lineno}: {line:?}")));
            match words[..] {
                ["done", i] => {
                    if num(i)? as usize != blocks.len() {
                        return Err(Error::Parse(format!("line {lineno}: block {i} out of sequence")));
                    }
                    blocks.push(std::mem::take(&mut cur));
                    complete_len = offset as u64;
                }
                ["skipped", p] => {
                    let p = num(p)?;
                    see(p)?;
                    cur.skipped.push(p);
                }
                ["unresolved", p, a] => {
                    let p = num(p)?;
                    see(p)?;
                    let a = a.parse().map_err(|_| Error::Parse(format!("line {lineno}: {line:?}")))?;
                    cur.unresolved.push(Unresolved { p, a });
                }
                _ => return Err(Error::Parse(format!("line {lineno}: unknown directive {line:?}"))),
            }
            continue;
        }
        let (label, rec) = parse_record(line, lineno)?;
        if label != curve {
            return Err(Error::Parse(format!("line {lineno}: curve {label} in a sweep of {curve}")));
        }
        see(rec.p)?;
        rec.validate()?;
        cur.records.push(rec);
    }
    Ok(Parsed { curve, x, blocks, complete_len })
}

/// Reads a finished sweep file back into a result, auditing every record.
pub fn parse_csv(text: &str) -> Result<SweepResult> {
    let parsed = parse(text)?;
    let expected = super::blocks_of(parsed.x)?.len();
    if parsed.blocks.len() != expected {
        return Err(Error::Parse(format!(
            "sweep is incomplete: {} of {expected} blocks",
            parsed.blocks.len()
        )));
    }
    let mut s = SweepResult {
        curve: parsed.curve,
        x: parsed.x,
        records: Vec::new(),
        skipped: Vec::new(),
        unresolved: Vec::new(),
    };
    for b in parsed.blocks {
        s.records.extend(b.records);
        s.skipped.extend(b.skipped);
        s.unresolved.extend(b.unresolved);
    }
    Ok(s)
}

/// Complete blocks already on disk and where the file should be cut.
/// A missing or empty file is a fresh start.
pub(crate) fn load_checkpoint(path: &Path, label: &str, x: u64) -> Result<(Vec<Block>, u64)> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((Vec::new(), 0)),
        Err(e) => return Err(e.into()),
    };
    // killed before the preamble was fully written
    if preamble(label, x).starts_with(&text) {
        return Ok((Vec::new(), 0));
    }
    let corrupt = |e: Error| Error::CheckpointCorrupt(format!("{}: {e}", path.display()));
    let parsed = parse(&text).map_err(corrupt)?;
    if parsed.curve != label || parsed.x != x {
        return Err(Error::CheckpointCorrupt(format!(
            "{} holds curve={} x={}, not curve={label} x={x}",
            path.display(),
            parsed.curve,
            parsed.x
        )));
    }
    let expected = super::blocks_of(x)?;
    for (i, (block, primes)) in parsed.blocks.iter().zip(&expected).enumerate() {
        let mut seen: Vec<u64> = block.records.iter().map(|r| r.p).collect();
        seen.extend(&block.skipped);
        seen.extend(block.unresolved.iter().map(|u| u.p));
        seen.sort_unstable();
        if &seen != primes {
            return Err(Error::CheckpointCorrupt(format!("{}: block {i} does not cover its primes", path.display())));
        }
    }
    Ok((parsed.blocks, parsed.complete_len))
}
