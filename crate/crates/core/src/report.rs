//! Line-oriented, machine-parseable reports shared by all checks.
//!
//! Grammar (one record per line, stable field order):
//!
//! ```text
//! CHECK <name> PASS|FAIL|SKIP
//! COUNT <key> <n>
//! WITNESS <class-bitmap> <subset-element> <witness-element>
//! COUNTEREXAMPLE <structure-bitmap> <details>
//! ```
//!
//! `WITNESS` lines are informational; `FAIL` and `COUNTEREXAMPLE` lines are
//! what the CLI maps to a nonzero exit status.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Recorded but not assertable at finite scale (e.g. the axiom of infinity).
    Skip,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "PASS"),
            CheckStatus::Fail => write!(f, "FAIL"),
            CheckStatus::Skip => write!(f, "SKIP"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Line {
    Check {
        name: String,
        status: CheckStatus,
    },
    Count {
        key: String,
        n: u64,
    },
    Witness {
        class_bitmap: u64,
        subset_element: String,
        witness_element: String,
    },
    Counterexample {
        structure_bitmap: u64,
        details: String,
    },
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Check { name, status } => write!(f, "CHECK {name} {status}"),
            Line::Count { key, n } => write!(f, "COUNT {key} {n}"),
            Line::Witness {
                class_bitmap,
                subset_element,
                witness_element,
            } => write!(f, "WITNESS {class_bitmap} {subset_element} {witness_element}"),
            Line::Counterexample {
                structure_bitmap,
                details,
            } => write!(f, "COUNTEREXAMPLE {structure_bitmap} {details}"),
        }
    }
}

/// An append-only report. Line order is the emission order, which every
/// producer keeps deterministic; merging is plain concatenation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<Line>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.lines.push(Line::Check {
            name: name.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        });
    }

    pub fn skip(&mut self, name: impl Into<String>) {
        self.lines.push(Line::Check {
            name: name.into(),
            status: CheckStatus::Skip,
        });
    }

    pub fn count(&mut self, key: impl Into<String>, n: u64) {
        self.lines.push(Line::Count { key: key.into(), n });
    }

    pub fn witness(&mut self, class_bitmap: u64, subset_element: impl Into<String>, witness_element: impl Into<String>) {
        self.lines.push(Line::Witness {
            class_bitmap,
            subset_element: subset_element.into(),
            witness_element: witness_element.into(),
        });
    }

    pub fn counterexample(&mut self, structure_bitmap: u64, details: impl Into<String>) {
        self.lines.push(Line::Counterexample {
            structure_bitmap,
            details: details.into(),
        });
    }

    pub fn merge(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    /// True when the report carries a `FAIL` check or a counterexample.
    pub fn has_failure(&self) -> bool {
        self.lines.iter().any(|l| {
            matches!(
                l,
                Line::Check {
                    status: CheckStatus::Fail,
                    ..
                } | Line::Counterexample { .. }
            )
        })
    }

    pub fn count_of(&self, key: &str) -> Option<u64> {
        self.lines.iter().find_map(|l| match l {
            Line::Count { key: k, n } if k == key => Some(*n),
            _ => None,
        })
    }

    pub fn check_status(&self, name: &str) -> Option<CheckStatus> {
        self.lines.iter().find_map(|l| match l {
            Line::Check { name: k, status } if k == name => Some(*status),
            _ => None,
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_line_oriented_and_stable() {
        let mut r = Report::new();
        r.check("principle", true);
        r.count("structures", 531);
        r.witness(5, "a", "b");
        r.counterexample(9, "lhs=true rhs=false");
        let text = r.to_string();
        assert_eq!(
            text,
            "CHECK principle PASS\nCOUNT structures 531\nWITNESS 5 a b\nCOUNTEREXAMPLE 9 lhs=true rhs=false\n"
        );
    }

    #[test]
    fn failure_detection() {
        let mut r = Report::new();
        r.check("a", true);
        assert!(!r.has_failure());
        r.check("b", false);
        assert!(r.has_failure());

        let mut r2 = Report::new();
        r2.counterexample(0, "x");
        assert!(r2.has_failure());

        let mut r3 = Report::new();
        r3.skip("infinity");
        assert!(!r3.has_failure());
    }
}
