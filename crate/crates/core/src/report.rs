//! Report records shared by every verification suite: a list of named
//! checks with computed and expected values, a pass/fail/info verdict,
//! and a provenance tag on every expected value.
//!
//! The machine record is canonical: serde structs with fixed field
//! order, BTreeMaps for all maps, integers rendered as decimal strings
//! and rationals as "p/q", and no timestamp. Identical configuration
//! (and seed) therefore yields a byte-identical record; the timestamp
//! appears only in the human-readable text.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub inputs: BTreeMap<String, String>,
    pub computed: String,
    pub expected: String,
    /// where the expected value comes from (closed form, independent
    /// oracle, frozen fixture, ...)
    pub provenance: String,
    pub verdict: Verdict,
}

impl CheckRecord {
    pub fn new(
        name: impl Into<String>,
        computed: impl ToString,
        expected: impl ToString,
        provenance: impl Into<String>,
    ) -> Self {
        let computed = computed.to_string();
        let expected = expected.to_string();
        let verdict = if computed == expected {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        CheckRecord {
            name: name.into(),
            inputs: BTreeMap::new(),
            computed,
            expected,
            provenance: provenance.into(),
            verdict,
        }
    }

    pub fn info(
        name: impl Into<String>,
        computed: impl ToString,
        provenance: impl Into<String>,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            inputs: BTreeMap::new(),
            computed: computed.to_string(),
            expected: String::new(),
            provenance: provenance.into(),
            verdict: Verdict::Info,
        }
    }

    pub fn with_input(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub checks: Vec<CheckRecord>,
}

impl ReportEnvelope {
    pub fn new(command: impl Into<String>) -> Self {
        ReportEnvelope {
            tool: "residua".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn set_config(&mut self, key: impl Into<String>, value: impl ToString) {
        self.config.insert(key.into(), value.to_string());
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.checks.push(check);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    /// Canonical machine record; byte-identical for identical runs.
    pub fn machine_record(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable text, with a timestamp (kept out of the machine
    /// record on purpose).
    pub fn human_text(&self) -> String {
        let mut s = String::new();
        let ts = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let _ = writeln!(s, "{} {} :: {}", self.tool, self.version, self.command);
        let _ = writeln!(s, "unix-time: {}", ts);
        for (k, v) in &self.config {
            let _ = writeln!(s, "config {} = {}", k, v);
        }
        let _ = writeln!(s);
        for c in &self.checks {
            let tag = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Info => "info",
            };
            if c.verdict == Verdict::Info {
                let _ = writeln!(s, "[{}] {}: {} ({})", tag, c.name, c.computed, c.provenance);
            } else {
                let _ = writeln!(
                    s,
                    "[{}] {}: computed {} expected {} ({})",
                    tag, c.name, c.computed, c.expected, c.provenance
                );
            }
            for (k, v) in &c.inputs {
                let _ = writeln!(s, "       {} = {}", k, v);
            }
        }
        let failed = self.checks.iter().filter(|c| c.verdict == Verdict::Fail).count();
        let _ = writeln!(
            s,
            "\n{} checks, {} failed -> {}",
            self.checks.len(),
            failed,
            if self.all_pass() { "PASS" } else { "FAIL" }
        );
        s
    }

    /// Writes the machine record to `path` and the human text next to it
    /// at `path.txt`.
    pub fn emit(&self, path: &std::path::Path) -> Result<()> {
        let wrap = |e: std::io::Error, p: &std::path::Path| Error::Io {
            path: p.display().to_string(),
            source: e,
        };
        std::fs::write(path, self.machine_record()).map_err(|e| wrap(e, path))?;
        let mut txt = path.as_os_str().to_owned();
        txt.push(".txt");
        let txt = std::path::PathBuf::from(txt);
        std::fs::write(&txt, self.human_text()).map_err(|e| wrap(e, &txt))?;
        Ok(())
    }
}

/// Renders a list of counts like `(3, 3)` for report values.
pub fn render_dims(dims: &[usize]) -> String {
    let inner: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    format!("({})", inner.join(", "))
}
