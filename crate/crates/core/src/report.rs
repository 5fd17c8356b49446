//! Pass/fail bookkeeping shared by the verification routines.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, name: impl Into<String>, pass: bool, detail: Option<String>) {
        self.checks.push(Check { name: name.into(), pass, detail });
    }

    /// Record an equality check; the detail carries both sides on failure.
    pub fn expect_eq<T: PartialEq + std::fmt::Display>(&mut self, name: impl Into<String>, got: &T, want: &T) {
        let pass = got == want;
        let detail = (!pass).then(|| format!("got {} expected {}", got, want));
        self.push(name, pass, detail);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    /// One line per failure, for test assertion messages.
    pub fn summary(&self) -> String {
        let fails: Vec<String> = self
            .failures()
            .take(20)
            .map(|c| format!("{}: {}", c.name, c.detail.as_deref().unwrap_or("")))
            .collect();
        let nfail = self.failures().count();
        format!("{}/{} passed\n{}", self.len() - nfail, self.len(), fails.join("\n"))
    }
}
