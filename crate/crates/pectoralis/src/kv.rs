//! Flat `key = value` text files, used for pipeline config files and
//! phantom specs.
//!
//! One pair per line. `#` starts a comment, blank lines are skipped,
//! keys may repeat (the consumer decides whether that means a list or
//! last-one-wins).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum KvError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("missing required key `{0}`")]
    MissingKey(String),
    #[error("key `{key}`: cannot parse `{value}` as {expected}")]
    BadValue {
        key: String,
        value: String,
        expected: &'static str,
    },
}

/// Parsed file: entries in document order, with source line numbers for
/// diagnostics.
#[derive(Clone, Debug, Default)]
pub struct KvFile {
    entries: Vec<(usize, String, String)>,
}

impl KvFile {
    pub fn parse(text: &str) -> Result<KvFile, KvError> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(KvError::Syntax {
                    line,
                    text: body.to_string(),
                });
            };
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                return Err(KvError::Syntax {
                    line,
                    text: body.to_string(),
                });
            }
            entries.push((line, key.to_string(), value.to_string()));
        }
        Ok(KvFile { entries })
    }

    /// Last value for `key`, if present.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(_, k, _)| k == key)
            .map(|(_, _, v)| v.as_str())
    }

    /// Every value for `key`, in document order.
    pub fn get_all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> {
        self.entries
            .iter()
            .filter(move |(_, k, _)| k == key)
            .map(|(_, _, v)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str, KvError> {
        self.get(key).ok_or_else(|| KvError::MissingKey(key.into()))
    }

    /// Parse the last value for `key`, or None when absent.
    pub fn get_parsed<T: std::str::FromStr>(
        &self,
        key: &str,
        expected: &'static str,
    ) -> Result<Option<T>, KvError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| KvError::BadValue {
                key: key.into(),
                value: v.into(),
                expected,
            }),
        }
    }

    pub fn require_parsed<T: std::str::FromStr>(
        &self,
        key: &str,
        expected: &'static str,
    ) -> Result<T, KvError> {
        self.get_parsed(key, expected)?
            .ok_or_else(|| KvError::MissingKey(key.into()))
    }

    /// Reject any key outside `allowed` (typo protection for config and
    /// spec files).
    pub fn check_known(&self, allowed: &[&str]) -> Result<(), KvError> {
        for (line, key, _) in &self.entries {
            if !allowed.contains(&key.as_str()) {
                return Err(KvError::UnknownKey {
                    line: *line,
                    key: key.clone(),
                });
            }
        }
        Ok(())
    }
}
