//! Named pass/fail checks shared by the structural verifications.

use serde::Serialize;

/// One named verification step.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: String) -> Self {
        Check { name: name.into(), passed, detail }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub degree: usize,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}
