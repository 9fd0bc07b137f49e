//! Systems of rules and their induced monotone operators.
//!
//! A rule `s ⊢ x` derives object `x` from a premise set `s`. A system is
//! deterministic when no object is derivable from two different premises,
//! and global when every premise set derives something. The induced
//! operator `φ(s) = {x | ∃a ⊆ s, a ⊢ x}` is monotone by construction; its
//! least fixed point is computed by stage iteration from ∅, the greatest by
//! the dual contraction from the full space.
//!
//! Two backends share this vocabulary: [`AbstractSystem`] over a small
//! labelled object space with explicit rules, and [`StoreSystem`] over a
//! budget-truncated window of a [`crate::hf::SetStore`] with schematic
//! rules (`singleton`, `powerset`, `adjoin`, `union`, `successor`).

mod parse;
mod store_sys;

pub use parse::{parse_rules_file, RuleFile, RulesParseError};
pub use store_sys::{subsets_up_to, Schema, StoreSystem, StoreValidation};

use crate::report::Report;

/// Explicit rule system over objects `0..n` (n ≤ 16): premises are subset
/// bitmaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractSystem {
    pub labels: Vec<String>,
    /// `(premise bitmap, conclusion index)`, duplicate-free.
    pub rules: Vec<(u64, usize)>,
}

/// Determinism/globality analysis result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    /// `Err((x, s1, s2))` when `s1 ⊢ x` and `s2 ⊢ x` with `s1 ≠ s2`.
    pub deterministic: Result<(), (usize, u64, u64)>,
    /// `Err(s)` when the subset `s` derives nothing.
    pub global: Result<(), u64>,
    /// True when globality was only checked on a budgeted premise family.
    pub bounded: bool,
}

/// The operator induced by a system; `apply` is the displayed definition.
#[derive(Debug, Clone, Copy)]
pub struct MonotoneOp<'a> {
    system: &'a AbstractSystem,
}

impl MonotoneOp<'_> {
    /// `φ(s) = {x | ∃a ⊆ s, a ⊢ x}`.
    pub fn apply(&self, s: u64) -> u64 {
        let mut out = 0u64;
        for &(premise, conclusion) in &self.system.rules {
            if premise & !s == 0 {
                out |= 1 << conclusion;
            }
        }
        out
    }
}

/// Least-fixed-point result with its per-stage additions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPoint {
    pub set: u64,
    /// Newly derived objects per stage, stages with no additions omitted.
    pub stages: Vec<u64>,
    /// True when iteration hit the stage budget before stabilizing.
    pub unstable: bool,
}

impl AbstractSystem {
    pub fn new(labels: Vec<String>, mut rules: Vec<(u64, usize)>) -> AbstractSystem {
        assert!(labels.len() <= 16, "abstract spaces are capped at 16 objects");
        rules.sort_unstable();
        rules.dedup();
        AbstractSystem { labels, rules }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn space_mask(&self) -> u64 {
        (1u64 << self.labels.len()) - 1
    }

    pub fn operator(&self) -> MonotoneOp<'_> {
        MonotoneOp { system: self }
    }

    /// Determinism over all rule pairs; globality over all subsets of the
    /// space.
    pub fn validate(&self) -> Validation {
        let mut deterministic = Ok(());
        'det: for (i, &(p1, x1)) in self.rules.iter().enumerate() {
            for &(p2, x2) in &self.rules[i + 1..] {
                if x1 == x2 && p1 != p2 {
                    deterministic = Err((x1, p1, p2));
                    break 'det;
                }
            }
        }
        // Globality asks ∀s ∃x s⊢x with premise exactly s, not premise ⊆ s.
        let mut global = Ok(());
        for s in 0..=self.space_mask() {
            if !self.rules.iter().any(|(p, _)| *p == s) {
                global = Err(s);
                break;
            }
        }
        Validation {
            deterministic,
            global,
            bounded: false,
        }
    }

    /// Iterate `φ` from ∅ to stabilization (or `max_stages`).
    pub fn lfp(&self, max_stages: usize) -> FixedPoint {
        let op = self.operator();
        let mut current = 0u64;
        let mut stages = Vec::new();
        for _ in 0..max_stages {
            let next = op.apply(current);
            if next == current {
                return FixedPoint {
                    set: current,
                    stages,
                    unstable: false,
                };
            }
            stages.push(next & !current);
            current = next;
        }
        FixedPoint {
            set: current,
            stages,
            unstable: op.apply(current) != current,
        }
    }

    /// Iterate `φ` downward from the full space.
    pub fn gfp(&self, max_stages: usize) -> FixedPoint {
        let op = self.operator();
        let mut current = self.space_mask();
        let mut stages = Vec::new();
        for _ in 0..max_stages {
            let next = op.apply(current) & self.space_mask();
            if next == current {
                return FixedPoint {
                    set: current,
                    stages,
                    unstable: false,
                };
            }
            stages.push(current & !next);
            current = next;
        }
        FixedPoint {
            set: current,
            stages,
            unstable: op.apply(current) & self.space_mask() != current,
        }
    }

    /// Productivity of the system on its least fixed point, with every
    /// proper subset of `I` playing the role of a set (`I` itself plays the
    /// paradoxical class: an escape from `I ∖ I` is a contradiction, which
    /// is the point of the construction).
    ///
    /// A swept subset passes when some rule with that exact premise
    /// concludes inside `I` and outside the premise.
    pub fn productivity_on_lfp(&self, max_stages: usize) -> Report {
        let mut report = Report::new();
        let i_set = self.lfp(max_stages);
        report.count("lfp_size", i_set.set.count_ones() as u64);
        let mut failures = 0u64;
        let mut swept = 0u64;
        for s in all_subsets(i_set.set) {
            if s == i_set.set {
                continue;
            }
            swept += 1;
            let escape = self
                .rules
                .iter()
                .find(|(p, x)| *p == s && i_set.set >> x & 1 == 1 && s >> x & 1 == 0);
            match escape {
                Some((_, x)) => report.witness(s, format!("premise:{s:b}"), self.labels[*x].clone()),
                None => {
                    failures += 1;
                    report.counterexample(s, "no derivation escapes into the fixed point");
                }
            }
        }
        report.count("subsets_swept", swept);
        report.check("productive_on_lfp", failures == 0);
        report
    }

    /// True when every proper subset of `I` derives something — the
    /// globality actually used by the productivity argument.
    pub fn global_on_proper_subsets_of_lfp(&self, max_stages: usize) -> bool {
        let i_set = self.lfp(max_stages).set;
        all_subsets(i_set)
            .filter(|s| *s != i_set)
            .all(|s| self.rules.iter().any(|(p, _)| *p == s))
    }

    pub fn is_deterministic(&self) -> bool {
        self.validate().deterministic.is_ok()
    }
}

/// Subsets of a bitmap, ascending by value.
pub fn all_subsets(mask: u64) -> impl Iterator<Item = u64> {
    // Standard subset-walk trick would skip 0 ordering; a filter is plenty
    // at these sizes.
    (0..=mask).filter(move |s| s & !mask == 0)
}
