//! Small text formats: `key=value` config files and mixer weight files.

use fourierup_core::fourierup::ChannelMixer;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TextError {
    #[error("line {line}: expected key=value")]
    NotKeyValue { line: usize },
    #[error("line {line}: duplicate key {key:?}")]
    DuplicateKey { line: usize, key: String },
    #[error("mixer file: {0}")]
    Mixer(String),
}

/// Parses newline-separated `key=value` pairs. Blank lines and lines
/// starting with `#` are skipped; keys and values are trimmed.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, TextError> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or(TextError::NotKeyValue { line: i + 1 })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(TextError::NotKeyValue { line: i + 1 });
        }
        if pairs.iter().any(|(k, _)| k == key) {
            return Err(TextError::DuplicateKey {
                line: i + 1,
                key: key.to_string(),
            });
        }
        pairs.push((key.to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

/// `C`, then `C*C` amplitude weights, then `C*C` phase weights, row-major,
/// separated by any whitespace.
pub fn parse_mixer(text: &str) -> Result<ChannelMixer, TextError> {
    let mut tokens = text.split_whitespace();
    let c: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .filter(|&c| c > 0)
        .ok_or_else(|| TextError::Mixer("first token must be a positive channel count".into()))?;
    let mut weights = Vec::with_capacity(2 * c * c);
    for tok in tokens {
        let v: f64 = tok
            .parse()
            .map_err(|_| TextError::Mixer(format!("not a number: {tok:?}")))?;
        weights.push(v);
    }
    if weights.len() != 2 * c * c {
        return Err(TextError::Mixer(format!(
            "expected {} weights for C={c}, found {}",
            2 * c * c,
            weights.len()
        )));
    }
    let phase = weights.split_off(c * c);
    ChannelMixer::new(c, weights, phase).map_err(|e| TextError::Mixer(e.to_string()))
}
