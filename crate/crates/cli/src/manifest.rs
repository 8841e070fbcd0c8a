//! Run manifest: everything needed to reproduce a run.

use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub config_digest: String,
    pub seed: u64,
    pub tool_version: String,
    pub wall_time: f64,
    /// Paths relative to the output directory.
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
    pub verdict: Option<String>,
}

pub const MANIFEST_FILE: &str = "manifest.txt";

impl RunManifest {
    /// `key = value` lines; repeated keys for list entries.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command = {}", self.command);
        let _ = writeln!(out, "config_digest = {}", self.config_digest);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "tool_version = {}", self.tool_version);
        let _ = writeln!(out, "wall_time = {:.3}", self.wall_time);
        for o in &self.outputs {
            let _ = writeln!(out, "output = {o}");
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning = {w}");
        }
        if let Some(v) = &self.verdict {
            let _ = writeln!(out, "verdict = {v}");
        }
        out
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::write(dir.join(MANIFEST_FILE), self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_layout() {
        let m = RunManifest {
            command: "solve".into(),
            config_digest: "ab".into(),
            seed: 7,
            tool_version: "0.1.0".into(),
            wall_time: 1.23456,
            outputs: vec!["solution.txt".into(), "trace.txt".into()],
            warnings: vec!["out-of-hypothesis: beta = 0".into()],
            verdict: None,
        };
        let text = m.to_text();
        assert!(text.starts_with("command = solve\nconfig_digest = ab\nseed = 7\n"));
        assert!(text.contains("wall_time = 1.235\n"));
        assert_eq!(text.matches("output = ").count(), 2);
        assert!(text.contains("warning = out-of-hypothesis: beta = 0\n"));
    }
}
