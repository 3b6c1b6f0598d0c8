//! Pass/fail bookkeeping for the acceptance checks.

use std::fmt;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Reported, never gating.
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} [{:.1} s]",
            self.status, self.name, self.detail, self.seconds
        )
    }
}

/// What a check body returns: whether it passed and a one-line summary, or
/// the error that stopped it.
pub type Check = Result<(bool, String), String>;

#[derive(Debug, Default)]
pub struct Suite {
    pub outcomes: Vec<Outcome>,
}

impl Suite {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs a gating check and prints its line immediately. An error counts
    /// as a failure.
    pub fn check(&mut self, name: &str, body: impl FnOnce() -> Check) -> &Outcome {
        self.record(name, false, body)
    }

    /// Runs a non-gating check.
    pub fn info(&mut self, name: &str, body: impl FnOnce() -> Check) -> &Outcome {
        self.record(name, true, body)
    }

    fn record(&mut self, name: &str, info: bool, body: impl FnOnce() -> Check) -> &Outcome {
        let clock = Instant::now();
        let (ok, detail) = match body() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let status = match (info, ok) {
            (true, _) => Status::Info,
            (false, true) => Status::Pass,
            (false, false) => Status::Fail,
        };
        let outcome = Outcome {
            name: name.to_string(),
            status,
            detail,
            seconds: clock.elapsed().as_secs_f64(),
        };
        println!("{outcome}");
        self.outcomes.push(outcome);
        self.outcomes.last().unwrap()
    }

    pub fn count(&self, status: Status) -> usize {
        self.outcomes.iter().filter(|o| o.status == status).count()
    }

    pub fn all_passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{} passed, {} failed, {} informational",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Info)
        )
    }
}

/// `lo ≤ x ≤ hi`; false for NaN.
pub fn within(x: f64, lo: f64, hi: f64) -> bool {
    x >= lo && x <= hi
}

/// `|x − target| ≤ tol`; false for NaN.
pub fn near(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}
