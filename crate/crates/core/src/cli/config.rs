//! Flat `key = value` run files. Keys mirror the long flag names.

use std::path::Path;

use crate::error::{Error, Result};

/// Reads `key = value` pairs, skipping blank lines and `#` comments.
pub fn read_config(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::PreconditionViolated(format!("config line {}: expected key = value", i + 1)))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(Error::PreconditionViolated(format!("config line {}: empty key", i + 1)));
        }
        let value = v.trim().trim_matches('"').to_string();
        out.push((key, value));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs() {
        let c = parse_config("# run\ngroup = \"PSL(2,7)\"\n\nmax_k=3\n").unwrap();
        assert_eq!(c, vec![("group".into(), "PSL(2,7)".into()), ("max-k".into(), "3".into())]);
        assert!(parse_config("group").is_err());
        assert!(parse_config("= 3").is_err());
    }
}
