use std::fmt;

/// A single failed identity together with the data needed to reproduce it by hand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: String,
    pub witness: Vec<String>,
    pub detail: String,
}

/// Outcome of a verification: how many identity instances were examined and which failed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub name: String,
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn new(name: impl Into<String>) -> Self {
        ValidationReport {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn tick(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, kind: &str, witness: Vec<String>, detail: impl Into<String>) {
        self.violations.push(Violation {
            kind: kind.to_string(),
            witness,
            detail: detail.into(),
        });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn has_kind(&self, kind: &str) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    /// Appends another report's violations and notes, prefixing kinds with its name.
    pub fn absorb(&mut self, other: ValidationReport) {
        self.checked += other.checked;
        for mut v in other.violations {
            if !other.name.is_empty() {
                v.kind = format!("{}/{}", other.name, v.kind);
            }
            self.violations.push(v);
        }
        self.notes.extend(other.notes);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.is_valid() { "PASS" } else { "FAIL" };
        writeln!(f, "{}: {} ({} checks)", self.name, verdict, self.checked)?;
        for v in &self.violations {
            writeln!(f, "  {} [{}]: {}", v.kind, v.witness.join(", "), v.detail)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
