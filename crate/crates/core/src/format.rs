//! Line-oriented text format for machines.
//!
//! ```text
//! SFST v1
//! # n_states=3
//! STATES 3
//! START 0
//! SIGMA 0 1
//! GAMMA 5 6
//! FINAL 0 -1
//! TRANS 0 1 2 5 6
//! ```
//!
//! `-1` alone stands for λ. `# key=value` lines are kept as metadata, any other
//! comment is dropped. [`print_machine`] emits the canonical layout, and
//! parsing then printing a canonical file reproduces it byte for byte.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::sfst::{Sfst, StateId};
use crate::symbol::{Symbol, TokenString};

pub const MACHINE_HEADER: &str = "SFST v1";

/// Ordered `key=value` pairs carried in `#` comment lines.
pub type Meta = Vec<(String, String)>;

pub fn print_machine(m: &Sfst) -> String {
    print_machine_with_meta(m, &[])
}

pub fn print_machine_with_meta(m: &Sfst, meta: &[(String, String)]) -> String {
    let mut out = String::new();
    out.push_str(MACHINE_HEADER);
    out.push('\n');
    write_meta(&mut out, meta);
    let _ = writeln!(out, "STATES {}", m.num_states());
    let _ = writeln!(out, "START {}", m.start());
    write_symbol_set(&mut out, "SIGMA", m.input_alphabet());
    write_symbol_set(&mut out, "GAMMA", m.output_alphabet());
    for (q, w) in m.finals() {
        let _ = writeln!(out, "FINAL {q} {w}");
    }
    for (q, sym, arc) in m.transitions() {
        let _ = writeln!(out, "TRANS {q} {sym} {} {}", arc.target, arc.output);
    }
    out
}

pub(crate) fn write_meta(out: &mut String, meta: &[(String, String)]) {
    for (k, v) in meta {
        let _ = writeln!(out, "# {k}={v}");
    }
}

fn write_symbol_set(out: &mut String, tag: &str, set: &BTreeSet<Symbol>) {
    out.push_str(tag);
    for s in set {
        let _ = write!(out, " {s}");
    }
    out.push('\n');
}

pub fn parse_machine(text: &str) -> Result<Sfst> {
    parse_machine_with_meta(text).map(|(m, _)| m)
}

/// Parses a `# key=value` comment, if the line is one.
pub(crate) fn meta_entry(line: &str) -> Option<(String, String)> {
    let body = line.trim_start().strip_prefix('#')?.trim();
    let (k, v) = body.split_once('=')?;
    let k = k.trim();
    if k.is_empty() || k.contains(char::is_whitespace) {
        return None;
    }
    Some((k.to_string(), v.trim().to_string()))
}

pub(crate) fn parse_token_string(line: usize, tokens: &[&str]) -> Result<TokenString> {
    if tokens == ["-1"] {
        return Ok(TokenString::empty());
    }
    if tokens.is_empty() {
        return Err(Error::parse(line, "missing output (use -1 for the empty string)"));
    }
    tokens
        .iter()
        .map(|t| parse_symbol(line, t))
        .collect::<Result<Vec<_>>>()
        .map(TokenString::from)
}

pub(crate) fn parse_symbol(line: usize, tok: &str) -> Result<Symbol> {
    tok.parse::<u32>()
        .map(Symbol)
        .map_err(|_| Error::parse(line, format!("`{tok}` is not a symbol id")))
}

fn parse_state(line: usize, tok: &str) -> Result<StateId> {
    tok.parse::<StateId>()
        .map_err(|_| Error::parse(line, format!("`{tok}` is not a state id")))
}

pub fn parse_machine_with_meta(text: &str) -> Result<(Sfst, Meta)> {
    let mut meta = Meta::new();
    let mut header_seen = false;
    let mut builder = None;
    let mut start = None;
    let mut sigma = BTreeSet::new();
    let mut gamma = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if let Some(kv) = meta_entry(raw) {
            meta.push(kv);
            continue;
        }
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if !header_seen {
            if content != MACHINE_HEADER {
                return Err(Error::parse(line_no, format!("expected `{MACHINE_HEADER}`")));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let need_builder = |b: &mut Option<crate::sfst::SfstBuilder>| {
            b.take()
                .ok_or_else(|| Error::parse(line_no, "STATES must come first"))
        };
        match fields[0] {
            "STATES" => {
                if builder.is_some() || fields.len() != 2 {
                    return Err(Error::parse(line_no, "expected a single `STATES <n>`"));
                }
                let n = parse_state(line_no, fields[1])?;
                builder = Some(Sfst::builder(n));
            }
            "START" => {
                if fields.len() != 2 {
                    return Err(Error::parse(line_no, "expected `START <q>`"));
                }
                start = Some(parse_state(line_no, fields[1])?);
            }
            "SIGMA" => {
                for t in &fields[1..] {
                    sigma.insert(parse_symbol(line_no, t)?);
                }
            }
            "GAMMA" => {
                for t in &fields[1..] {
                    gamma.insert(parse_symbol(line_no, t)?);
                }
            }
            "FINAL" => {
                if fields.len() < 3 {
                    return Err(Error::parse(line_no, "expected `FINAL <q> <out...>`"));
                }
                let mut b = need_builder(&mut builder)?;
                let q = parse_state(line_no, fields[1])?;
                let w = parse_token_string(line_no, &fields[2..])?;
                b.set_final(q, w)
                    .map_err(|e| Error::parse(line_no, e.to_string()))?;
                builder = Some(b);
            }
            "TRANS" => {
                if fields.len() < 5 {
                    return Err(Error::parse(
                        line_no,
                        "expected `TRANS <src> <in> <dst> <out...>`",
                    ));
                }
                let mut b = need_builder(&mut builder)?;
                let src = parse_state(line_no, fields[1])?;
                let sym = parse_symbol(line_no, fields[2])?;
                let dst = parse_state(line_no, fields[3])?;
                let out = parse_token_string(line_no, &fields[4..])?;
                b.add_transition(src, sym, out, dst)
                    .map_err(|e| Error::parse(line_no, e.to_string()))?;
                builder = Some(b);
            }
            other => return Err(Error::parse(line_no, format!("unknown record `{other}`"))),
        }
    }
    if !header_seen {
        return Err(Error::parse(1, "empty machine file"));
    }
    let builder = builder.ok_or_else(|| Error::parse(0, "missing STATES record"))?;
    let start = start.ok_or_else(|| Error::parse(0, "missing START record"))?;
    let m = builder
        .start(start)
        .input_alphabet(sigma)
        .output_alphabet(gamma)
        .build()
        .map_err(|e| Error::parse(0, e.to_string()))?;
    Ok((m, meta))
}

/// SHA-256 of the canonical text form, lowercase hex.
pub fn content_hash(m: &Sfst) -> String {
    sha256_hex(print_machine(m).as_bytes())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}
