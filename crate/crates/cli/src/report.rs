use std::fmt;

use jb_core::report::ValidationReport;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: String,
    pub witness: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub checked: usize,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Check {
    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Skip,
            checked: 0,
            witnesses: Vec::new(),
            notes: vec![why.into()],
        }
    }
}

impl From<ValidationReport> for Check {
    fn from(r: ValidationReport) -> Self {
        Check {
            status: if r.is_valid() {
                Status::Pass
            } else {
                Status::Fail
            },
            name: r.name,
            checked: r.checked,
            witnesses: r
                .violations
                .into_iter()
                .map(|v| Witness {
                    kind: v.kind,
                    witness: v.witness,
                    detail: v.detail,
                })
                .collect(),
            notes: r.notes,
        }
    }
}

/// Everything a command produced: echo, output lines, checks and optional timing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub version: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub output: Vec<String>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            command,
            version: env!("CARGO_PKG_VERSION").to_string(),
            status: Status::Pass,
            output: Vec::new(),
            checks: Vec::new(),
            wall_clock_ms: None,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.output.push(s.into());
    }

    pub fn push(&mut self, check: impl Into<Check>) {
        let check = check.into();
        if check.status == Status::Fail {
            self.status = Status::Fail;
        }
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).unwrap_or_default();
        s.push('\n');
        s
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "$ {}", self.command.join(" "))?;
        for l in &self.output {
            writeln!(f, "{l}")?;
        }
        for c in &self.checks {
            writeln!(f, "{}: {} ({} checked)", c.name, c.status, c.checked)?;
            for w in &c.witnesses {
                writeln!(f, "  {} [{}]: {}", w.kind, w.witness.join(", "), w.detail)?;
            }
            for n in &c.notes {
                writeln!(f, "  note: {n}")?;
            }
        }
        if let Some(ms) = self.wall_clock_ms {
            writeln!(f, "wall clock: {ms:.1} ms")?;
        }
        writeln!(
            f,
            "verdict: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}
