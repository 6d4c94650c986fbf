use serde::Serialize;

/// One failed check, located at a named element, interval or step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub at: String,
    pub message: String,
}

/// Outcome of a validation pass; empty means the object is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, at: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation { at: at.into(), message: message.into() });
    }

    /// Locations of all violations, in report order.
    pub fn locations(&self) -> Vec<&str> {
        self.violations.iter().map(|v| v.at.as_str()).collect()
    }

    /// `"at: message; at: message"`, for error messages.
    pub fn summary(&self) -> String {
        self.violations.iter().map(|v| format!("{}: {}", v.at, v.message)).collect::<Vec<_>>().join("; ")
    }
}
