use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Which criterion a report record checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Theorem {
    A,
    B,
    C,
    #[serde(rename = "kizmaz")]
    Kizmaz,
    #[serde(rename = "generation")]
    Generation,
    #[serde(rename = "frobenius")]
    Frobenius,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [
        Theorem::A,
        Theorem::B,
        Theorem::C,
        Theorem::Kizmaz,
        Theorem::Generation,
        Theorem::Frobenius,
    ];

    /// The `A` and `kizmaz` criteria only apply to odd primes.
    pub fn requires_odd_p(self) -> bool {
        matches!(self, Theorem::A | Theorem::Kizmaz)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Theorem::A => "A",
            Theorem::B => "B",
            Theorem::C => "C",
            Theorem::Kizmaz => "kizmaz",
            Theorem::Generation => "generation",
            Theorem::Frobenius => "frobenius",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                format!("unknown theorem `{s}` (expected A, B, C, kizmaz, generation, frobenius)")
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    DegeneratePass,
    Counterexample,
    Skipped,
    /// An internal consistency check of the engine failed.
    InvariantFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    /// The criterion is stated for odd primes only.
    EvenP,
    /// `p` does not divide the group order.
    PDoesNotDivide,
    /// The group exceeds the element or subgroup-enumeration cap.
    OrderCap,
}

/// One verdict for one `(group, p, criterion[, D])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub group: String,
    pub order: Option<u128>,
    pub p: Option<u64>,
    pub theorem: Theorem,
    /// Index of the strongly closed subgroup `D` for per-`D` criteria.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_index: Option<usize>,
    pub status: Status,
    /// Outside the criterion's hypotheses; never affects the exit code.
    #[serde(default)]
    pub exploratory: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<SkipReason>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub witnesses: Value,
    pub wall_time_ms: f64,
}

impl VerificationReport {
    pub fn new(
        group: &str,
        order: Option<u128>,
        p: Option<u64>,
        theorem: Theorem,
        status: Status,
    ) -> Self {
        VerificationReport {
            group: group.to_string(),
            order,
            p,
            theorem,
            d_index: None,
            status,
            exploratory: false,
            skip_reason: None,
            detail: None,
            witnesses: Value::Null,
            wall_time_ms: 0.0,
        }
    }

    pub fn skipped(
        group: &str,
        order: Option<u128>,
        p: Option<u64>,
        theorem: Theorem,
        reason: SkipReason,
        detail: impl Into<String>,
    ) -> Self {
        VerificationReport {
            skip_reason: Some(reason),
            detail: Some(detail.into()),
            ..VerificationReport::new(group, order, p, theorem, Status::Skipped)
        }
    }

    pub fn invariant_failure(
        group: &str,
        order: Option<u128>,
        p: Option<u64>,
        theorem: Theorem,
        detail: impl Into<String>,
    ) -> Self {
        VerificationReport {
            detail: Some(detail.into()),
            ..VerificationReport::new(group, order, p, theorem, Status::InvariantFailure)
        }
    }

    fn sort_key(&self) -> (&str, Option<u64>, Theorem, Option<usize>) {
        (&self.group, self.p, self.theorem, self.d_index)
    }

    /// Counts toward the exit code.
    pub fn is_failure(&self) -> bool {
        !self.exploratory
            && matches!(
                self.status,
                Status::Counterexample | Status::InvariantFailure
            )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub degenerate_pass: usize,
    pub counterexample: usize,
    pub skipped: usize,
    pub invariant_failure: usize,
    /// Status counts of exploratory records, which are excluded above.
    pub exploratory: BTreeMap<Status, usize>,
}

impl Summary {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut s = Summary::default();
        for r in reports {
            if r.exploratory {
                *s.exploratory.entry(r.status).or_default() += 1;
                continue;
            }
            match r.status {
                Status::Pass => s.pass += 1,
                Status::DegeneratePass => s.degenerate_pass += 1,
                Status::Counterexample => s.counterexample += 1,
                Status::Skipped => s.skipped += 1,
                Status::InvariantFailure => s.invariant_failure += 1,
            }
        }
        s
    }
}

/// Flags echoed into the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub corpus: String,
    pub theorems: Vec<Theorem>,
    pub p: Option<u64>,
    pub max_order: usize,
    pub max_subgroup_order: usize,
    pub jobs: usize,
    pub include_even_p_exploratory: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub config: ConfigEcho,
    pub reports: Vec<VerificationReport>,
    pub summary: Summary,
}

impl ReportDocument {
    pub fn new(config: ConfigEcho, mut reports: Vec<VerificationReport>) -> Self {
        reports.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        let summary = Summary::of(&reports);
        ReportDocument {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            reports,
            summary,
        }
    }

    /// `0` when nothing failed, `1` on a counterexample or invariant failure.
    pub fn exit_code(&self) -> i32 {
        if self.reports.iter().any(VerificationReport::is_failure) {
            1
        } else {
            0
        }
    }

    /// The same document with every timing field zeroed.
    pub fn without_timings(&self) -> ReportDocument {
        let mut doc = self.clone();
        for r in &mut doc.reports {
            r.wall_time_ms = 0.0;
        }
        doc
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}
