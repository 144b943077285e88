//! Validation reports: the uniform result type of every falsifier.
//!
//! Checks never throw on a failed property — failure is data. A report
//! lists the witnesses found, the number of samples tried, and summary
//! statistics, and `pass` is simply "no witnesses were found among the
//! samples". A passing report is evidence, not proof.

use serde::Serialize;

/// One counterexample found by a check.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    /// Coordinates identifying the witness (point coordinates, times,
    /// direction parameters — the check documents its layout).
    pub witness: Vec<f64>,
    /// The measured value that broke the bound.
    pub value: f64,
    /// The bound it was required to satisfy.
    pub bound: f64,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    /// Name of the check that produced this report.
    pub check: String,
    /// Number of samples examined.
    pub samples: usize,
    pub violations: Vec<Violation>,
    /// Worst value observed across all samples (check-specific meaning,
    /// e.g. the maximum residual), even when no violation occurred.
    pub worst: Option<f64>,
    /// Smallest value observed, when the check tracks a signed quantity
    /// whose both extremes matter (e.g. a residual with analytic value 0).
    pub observed_min: Option<f64>,
    /// Free-form notes: skipped sub-checks, parameter echoes, etc.
    pub notes: Vec<String>,
    /// True iff no violations were recorded.
    pub pass: bool,
}

impl ValidationReport {
    pub fn new(check: impl Into<String>) -> Self {
        ValidationReport {
            check: check.into(),
            samples: 0,
            violations: Vec::new(),
            worst: None,
            observed_min: None,
            notes: Vec::new(),
            pass: true,
        }
    }

    pub fn violation(&mut self, witness: Vec<f64>, value: f64, bound: f64, note: impl Into<String>) {
        self.violations.push(Violation {
            witness,
            value,
            bound,
            note: note.into(),
        });
        self.pass = false;
    }

    pub fn observe(&mut self, value: f64) {
        self.worst = Some(match self.worst {
            Some(w) => w.max(value),
            None => value,
        });
        self.observed_min = Some(match self.observed_min {
            Some(m) => m.min(value),
            None => value,
        });
    }

    /// Largest magnitude among observed values (both extremes considered).
    pub fn observed_abs_max(&self) -> Option<f64> {
        match (self.worst, self.observed_min) {
            (Some(hi), Some(lo)) => Some(hi.abs().max(lo.abs())),
            _ => None,
        }
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    /// Cap the stored violations at `cap`, noting how many were dropped.
    /// Dense grids can otherwise produce megabyte reports.
    pub fn truncate_violations(&mut self, cap: usize) {
        if self.violations.len() > cap {
            let dropped = self.violations.len() - cap;
            self.violations.truncate(cap);
            self.note(format!("{dropped} further violations omitted"));
        }
    }

    pub fn summary_line(&self) -> String {
        let mut line = format!(
            "{}: {} ({} samples, {} violations{})",
            self.check,
            if self.pass { "pass" } else { "FAIL" },
            self.samples,
            self.violations.len(),
            match self.worst {
                Some(w) => format!(", worst {w:.3e}"),
                None => String::new(),
            }
        );
        // A report that examined nothing should say why.
        if self.samples == 0 && self.violations.is_empty() {
            if let Some(note) = self.notes.first() {
                line.push_str("; ");
                line.push_str(note);
            }
        }
        line
    }
}
