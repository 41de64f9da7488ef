//! Run manifests: everything needed to re-run a command, embedded in every
//! result it emits.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub version: String,
    pub input_sha256: Option<String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            params: BTreeMap::new(),
            seed: None,
            version: env!("CARGO_PKG_VERSION").into(),
            input_sha256: None,
        }
    }

    /// Records a parameter; `None` values are skipped.
    pub fn param<T: Serialize>(&mut self, key: &str, value: T) -> &mut Self {
        let v = serde_json::to_value(value).expect("parameters serialize");
        if !v.is_null() {
            self.params.insert(key.into(), v);
        }
        self
    }

    pub fn input(&mut self, bytes: &[u8]) -> &mut Self {
        self.input_sha256 = Some(sha256_hex(bytes));
        self
    }

    /// `# key: value` lines.
    pub fn to_comment_lines(&self) -> String {
        let mut out = format!("# command: {}\n", self.command);
        for (k, v) in &self.params {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("# {k}: {v}\n"));
        }
        if let Some(seed) = self.seed {
            out.push_str(&format!("# seed: {seed}\n"));
        }
        out.push_str(&format!("# version: {}\n", self.version));
        if let Some(d) = &self.input_sha256 {
            out.push_str(&format!("# input_sha256: {d}\n"));
        }
        out
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_known_input() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn comment_lines_skip_missing_values() {
        let mut m = RunManifest::new("estimate");
        m.param("m", Some(3)).param("bandwidth", None::<f64>).param("estimator", "VJV");
        m.seed = Some(9);
        let text = m.to_comment_lines();
        assert!(text.contains("# m: 3\n"));
        assert!(text.contains("# estimator: VJV\n"));
        assert!(text.contains("# seed: 9\n"));
        assert!(!text.contains("bandwidth"));
        assert!(text.lines().all(|l| l.starts_with("# ")));
    }
}
