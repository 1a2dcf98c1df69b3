//! Dataset text format: `# key=value` header lines, then one pair per line as
//! space separated input ids, a TAB, and space separated output ids. `-1`
//! stands for an empty side.

use std::fmt::Write as _;

use super::{Dataset, WalkConfig};
use crate::error::{Error, Result};
use crate::format::{meta_entry, parse_token_string, write_meta};

pub fn print_dataset(d: &Dataset) -> String {
    let mut out = String::new();
    let mut meta = vec![("machine".to_string(), d.machine_id.clone())];
    meta.extend(d.config.to_kv());
    meta.push(("pairs".into(), d.len().to_string()));
    write_meta(&mut out, &meta);
    for (i, o) in &d.pairs {
        let _ = writeln!(out, "{i}\t{o}");
    }
    out
}

pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let mut meta = Vec::new();
    let mut pairs = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if let Some(kv) = meta_entry(line) {
            meta.push(kv);
            continue;
        }
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (input, output) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(line_no, "expected `<input>\\t<output>`"))?;
        let input: Vec<&str> = input.split_whitespace().collect();
        let output: Vec<&str> = output.split_whitespace().collect();
        pairs.push((
            parse_token_string(line_no, &input)?,
            parse_token_string(line_no, &output)?,
        ));
    }
    let machine_id = meta
        .iter()
        .find(|(k, _)| k == "machine")
        .map(|(_, v)| v.clone())
        .unwrap_or_default();
    let config = WalkConfig::from_kv(&meta).map_err(|e| Error::parse(0, e.to_string()))?;
    Ok(Dataset {
        pairs,
        machine_id,
        config,
    })
}
