//! Pass/fail verification reports.

use std::fmt;

/// One checked statement: what was expected, what was computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Claim {
    pub fn new(name: impl Into<String>, expected: impl fmt::Display, actual: impl fmt::Display) -> Self {
        let expected = expected.to_string();
        let actual = actual.to_string();
        Claim {
            name: name.into(),
            pass: expected == actual,
            expected,
            actual,
        }
    }

    pub fn check(name: impl Into<String>, pass: bool, expected: impl fmt::Display, actual: impl fmt::Display) -> Self {
        Claim {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        if self.pass {
            write!(f, "[{tag}] {}: {}", self.name, self.actual)
        } else {
            write!(f, "[{tag}] {}: expected {}, got {}", self.name, self.expected, self.actual)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub params: String,
    pub claims: Vec<Claim>,
}

impl Report {
    pub fn new(suite: impl Into<String>, params: impl Into<String>) -> Self {
        Report {
            suite: suite.into(),
            params: params.into(),
            claims: Vec::new(),
        }
    }

    pub fn push(&mut self, claim: Claim) {
        self.claims.push(claim);
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({})", self.suite, self.params)?;
        for c in &self.claims {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}
