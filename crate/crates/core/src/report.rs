use serde::Serialize;

/// Outcome of a verification routine.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub pass: bool,
    /// Number of individual assertions evaluated.
    pub checked: usize,
    /// First failing cases, capped.
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
}

const MAX_WITNESSES: usize = 20;

impl Report {
    pub fn new() -> Self {
        Report { pass: true, ..Default::default() }
    }

    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.pass = false;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn merge(&mut self, other: Report) {
        self.pass &= other.pass;
        self.checked += other.checked;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
        self.notes.extend(other.notes);
    }
}
