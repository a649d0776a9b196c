//! Expected-verdict companion files for benchmark programs.
//!
//! A sidecar sits next to `name.c` as `name.expected`:
//!
//! ```text
//! expected: unsafe
//! range: y 0 40
//! ```
//!
//! `range` lines are optional and bound a nondet variable for the checker.

use thiserror::Error;

use crate::bmc::{NondetPolicy, VerdictClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("sidecar line {line}: {message}")]
pub struct SidecarError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sidecar {
    pub expected: VerdictClass,
    pub ranges: Vec<(String, i64, i64)>,
}

impl Sidecar {
    pub fn parse(text: &str) -> Result<Sidecar, SidecarError> {
        let mut expected = None;
        let mut ranges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let err = |message: String| SidecarError { line: i + 1, message };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| err(format!("expected `key: value`, got `{line}`")))?;
            match key.trim() {
                "expected" => {
                    expected = Some(match value.trim() {
                        "safe" => VerdictClass::Safe,
                        "unsafe" => VerdictClass::Unsafe,
                        other => return Err(err(format!("unknown verdict `{other}`"))),
                    })
                }
                "range" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    let [var, lo, hi] = parts[..] else {
                        return Err(err("expected `range: <var> <lo> <hi>`".into()));
                    };
                    let lo = lo.parse().map_err(|_| err(format!("bad bound `{lo}`")))?;
                    let hi = hi.parse().map_err(|_| err(format!("bad bound `{hi}`")))?;
                    ranges.push((var.to_string(), lo, hi));
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let expected = expected.ok_or(SidecarError {
            line: 0,
            message: "missing `expected:` line".into(),
        })?;
        Ok(Sidecar { expected, ranges })
    }

    /// Applies the sidecar ranges on top of a base policy.
    pub fn policy(&self, base: &NondetPolicy) -> NondetPolicy {
        let mut p = base.clone();
        for (v, lo, hi) in &self.ranges {
            p.ranges.insert(v.clone(), (*lo, *hi));
        }
        p
    }
}
