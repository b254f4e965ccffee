//! Verdicts, violations, and shared check options.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::spectral::Mode;

/// Whether a verdict decides the property or only a sufficient condition for it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    Characterized,
    Sufficient,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub condition: String,
    /// The shift α, k or q, or "symbol" for a multiplier-symbol condition.
    pub shift: String,
    /// Piece label or sample point where the condition fails.
    pub location: String,
    pub value: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub kind: VerdictKind,
    pub violations: Vec<Violation>,
    /// Boxes and index ranges actually enumerated.
    pub truncation: Vec<String>,
    pub notes: BTreeMap<String, String>,
}

impl Verdict {
    pub fn new(kind: VerdictKind) -> Self {
        Verdict {
            holds: true,
            kind,
            violations: Vec::new(),
            truncation: Vec::new(),
            notes: BTreeMap::new(),
        }
    }

    pub fn violate(&mut self, condition: &str, shift: impl Into<String>, location: impl Into<String>, value: Complex64) {
        self.violations.push(Violation {
            condition: condition.to_string(),
            shift: shift.into(),
            location: location.into(),
            value,
        });
        self.holds = false;
    }

    pub fn record(&mut self, what: impl Into<String>) {
        self.truncation.push(what.into());
    }

    pub fn note(&mut self, key: &str, value: impl Into<String>) {
        self.notes.insert(key.to_string(), value.into());
    }

    /// Absorbs another verdict's findings (kind of `self` is kept).
    pub fn absorb(&mut self, other: Verdict) {
        self.violations.extend(other.violations);
        self.truncation.extend(other.truncation);
        self.notes.extend(other.notes);
        self.holds = self.violations.is_empty();
    }

    /// Sorts violations for reproducible reports and syncs `holds`.
    pub fn finish(mut self) -> Self {
        self.violations.sort_by(|a, b| {
            (&a.condition, &a.shift, &a.location).cmp(&(&b.condition, &b.shift, &b.location))
        });
        self.holds = self.violations.is_empty();
        self
    }

    pub fn violations_for(&self, condition: &str) -> impl Iterator<Item = &Violation> {
        let c = condition.to_string();
        self.violations.iter().filter(move |v| v.condition == c)
    }

    pub fn to_json(&self) -> Value {
        let violations: Vec<Value> = self
            .violations
            .iter()
            .map(|v| {
                json!({
                    "condition": v.condition,
                    "shift": v.shift,
                    "location": v.location,
                    "value": [fmt_f(v.value.re), fmt_f(v.value.im)],
                })
            })
            .collect();
        json!({
            "holds": self.holds,
            "kind": match self.kind {
                VerdictKind::Characterized => "characterized",
                VerdictKind::Sufficient => "sufficient",
            },
            "violations": violations,
            "truncation": self.truncation,
            "notes": self.notes,
        })
    }
}

/// Fixed-precision float rendering used in every report.
pub fn fmt_f(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.12e}")
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// `None` picks exact mode whenever every generator is a 1-D piecewise profile.
    pub mode: Option<Mode>,
    /// Sampled-mode threshold for "a.e. zero".
    pub tol_zero: f64,
    /// Probe-point budget per sampled region.
    pub max_probe_points: usize,
    /// Hard cap on one-sided dilation sums that cannot be bounded a priori.
    pub j_cap: usize,
    /// Largest number of lattice points any enumeration may visit.
    pub enumeration_limit: usize,
    /// Refuse duality between different single lattices without computing.
    pub lattice_check: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            mode: None,
            tol_zero: 1e-10,
            max_probe_points: 200_000,
            j_cap: 256,
            enumeration_limit: 1_000_000,
            lattice_check: true,
        }
    }
}

impl CheckOptions {
    pub fn sampled() -> Self {
        CheckOptions {
            mode: Some(Mode::Sampled),
            ..Default::default()
        }
    }
}
