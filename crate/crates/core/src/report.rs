use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Per-axiom verdicts for one subject.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub subject: String,
    pub checks: Vec<Check>,
    /// True when some check sampled an infinite carrier instead of exhausting it.
    pub sampled: bool,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport { subject: subject.into(), checks: Vec::new(), sampled: false }
    }

    pub fn push(&mut self, name: impl Into<String>, witness: Option<String>) {
        self.checks.push(Check { name: name.into(), passed: witness.is_none(), witness });
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.push(name, None);
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.push(name, Some(witness.into()));
    }

    pub fn extend(&mut self, prefix: &str, other: ValidationReport) {
        self.sampled |= other.sampled;
        for c in other.checks {
            self.checks.push(Check { name: format!("{prefix}{}", c.name), ..c });
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}{}", self.subject, if self.sampled { " (sampled)" } else { "" })?;
        for c in &self.checks {
            match &c.witness {
                None => writeln!(f, "  pass  {}", c.name)?,
                Some(w) => writeln!(f, "  FAIL  {}: {}", c.name, w)?,
            }
        }
        Ok(())
    }
}

/// A yes/no answer, with a witness when the answer is no.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Flag {
    pub fn yes() -> Self {
        Flag { holds: true, witness: None }
    }

    pub fn no(witness: impl Into<String>) -> Self {
        Flag { holds: false, witness: Some(witness.into()) }
    }

    pub fn from_witness(w: Option<String>) -> Self {
        match w {
            None => Flag::yes(),
            Some(w) => Flag::no(w),
        }
    }
}

/// Three-valued outcome of a family-relative probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    Undecided(String),
}

impl Outcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail(_))
    }

    /// Conjunction: any failure wins, then any undecided.
    pub fn and(self, other: Outcome) -> Outcome {
        match (self, other) {
            (Outcome::Fail(w), _) | (_, Outcome::Fail(w)) => Outcome::Fail(w),
            (Outcome::Undecided(w), _) | (_, Outcome::Undecided(w)) => Outcome::Undecided(w),
            _ => Outcome::Pass,
        }
    }
}
