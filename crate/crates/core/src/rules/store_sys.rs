//! Rule systems over a budget-truncated window of the set store.
//!
//! Schemas are the paper-style rule families. `adjoin` and `successor` have
//! small explicit premises; `singleton`, `powerset` and `union` encode
//! functions applied to subsets, with the premise being the argument set
//! itself. Expansion only produces conclusions inside the rank budget, and
//! results over truncated windows are reported as bounded, never as full
//! claims.

use crate::hf::{SetHandle, SetStore, StoreError};
use crate::report::Report;
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    Singleton,
    Powerset,
    Adjoin,
    Union,
    Successor,
}

impl Schema {
    pub fn name(&self) -> &'static str {
        match self {
            Schema::Singleton => "singleton",
            Schema::Powerset => "powerset",
            Schema::Adjoin => "adjoin",
            Schema::Union => "union",
            Schema::Successor => "successor",
        }
    }

    pub fn from_name(s: &str) -> Option<Schema> {
        Some(match s {
            "singleton" => Schema::Singleton,
            "powerset" => Schema::Powerset,
            "adjoin" => Schema::Adjoin,
            "union" => Schema::Union,
            "successor" => Schema::Successor,
            _ => return None,
        })
    }

    /// Schemas that are a single function applied to premise subsets.
    pub fn is_subset_function(&self) -> bool {
        matches!(self, Schema::Singleton | Schema::Powerset | Schema::Union)
    }
}

/// A schematic system over grounded sets of rank ≤ `rank_budget`, premises
/// capped at `card_budget` elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoreSystem {
    pub schemas: Vec<Schema>,
    pub rank_budget: u32,
    pub card_budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoreValidation {
    /// `Err((conclusion, premise1, premise2))` on a collision.
    pub deterministic: Result<(), (SetHandle, Vec<SetHandle>, Vec<SetHandle>)>,
    /// `Err(premise)` when some budget-representable premise derives
    /// nothing.
    pub global: Result<(), Vec<SetHandle>>,
    /// Always true here: the premise family is budget-truncated.
    pub bounded: bool,
}

/// Stage-traced fixed point over store handles.
#[derive(Debug, Clone)]
pub struct StoreFixedPoint {
    pub set: Vec<SetHandle>,
    pub stages: Vec<Vec<SetHandle>>,
    pub unstable: bool,
    /// True when some conclusion was cut off by the rank or card budget.
    pub truncated: bool,
}

impl StoreSystem {
    /// The object window: all grounded sets of rank ≤ `rank_budget`.
    pub fn window(&self, store: &mut SetStore) -> Vec<SetHandle> {
        store.grounded_universe(self.rank_budget)
    }

    fn in_window(&self, store: &SetStore, h: SetHandle) -> bool {
        store.rank(h).is_some_and(|r| r <= self.rank_budget)
    }

    /// Conclusions of one premise subset under every schema. With
    /// `window_filter` set, conclusions outside the rank budget are dropped
    /// and flagged in `truncated`; without it the system's real rules are
    /// produced regardless of the window.
    fn conclusions(
        &self,
        store: &mut SetStore,
        premise: &[SetHandle],
        window_filter: bool,
        truncated: &mut bool,
    ) -> Vec<SetHandle> {
        let mut raw: Vec<SetHandle> = Vec::new();
        for schema in &self.schemas {
            match schema {
                Schema::Adjoin => match premise {
                    [] => raw.push(store.empty()),
                    [x] => raw.push(store.adjoin(*x, *x)),
                    [x, y] => {
                        let c1 = store.adjoin(*x, *y);
                        let c2 = store.adjoin(*y, *x);
                        raw.push(c1);
                        raw.push(c2);
                    }
                    _ => {}
                },
                Schema::Successor => {
                    if let [x] = premise {
                        raw.push(store.successor(*x));
                    }
                }
                Schema::Singleton => {
                    let arg = store.intern(premise.to_vec());
                    raw.push(store.singleton(arg));
                }
                Schema::Union => {
                    let arg = store.intern(premise.to_vec());
                    raw.push(store.big_union(arg));
                }
                Schema::Powerset => {
                    let arg = store.intern(premise.to_vec());
                    match store.powerset(arg) {
                        Ok(c) => raw.push(c),
                        Err(_) => *truncated = true,
                    }
                }
            }
        }
        let mut out: Vec<SetHandle> = if window_filter {
            raw.into_iter()
                .filter(|h| {
                    let keep = self.in_window(store, *h);
                    if !keep {
                        *truncated = true;
                    }
                    keep
                })
                .collect()
        } else {
            raw
        };
        out.sort_unstable_by_key(|h| h.0);
        out.dedup();
        out
    }

    /// Materializes every budget-representable rule `(premise, conclusion)`.
    /// Conclusions are not window-filtered: these are the system's rules,
    /// the window only bounds the premise family.
    pub fn expand_rules(&self, store: &mut SetStore) -> (Vec<(Vec<SetHandle>, SetHandle)>, bool) {
        let window = self.window(store);
        let mut truncated = false;
        let mut rules = Vec::new();
        for premise in subsets_up_to(&window, self.card_budget) {
            for c in self.conclusions(store, &premise, false, &mut truncated) {
                rules.push((premise.clone(), c));
            }
        }
        (rules, truncated)
    }

    /// Determinism by collision scan over the expanded rules; globality over
    /// the budget-representable premise family (always flagged bounded).
    pub fn validate(&self, store: &mut SetStore) -> StoreValidation {
        let (rules, _) = self.expand_rules(store);
        let mut deterministic = Ok(());
        'det: for (i, (p1, c1)) in rules.iter().enumerate() {
            for (p2, c2) in &rules[i + 1..] {
                if c1 == c2 && p1 != p2 {
                    deterministic = Err((*c1, p1.clone(), p2.clone()));
                    break 'det;
                }
            }
        }
        let window = self.window(store);
        let mut global = Ok(());
        'glob: for premise in subsets_up_to(&window, self.card_budget) {
            if !rules.iter().any(|(p, _)| *p == premise) {
                global = Err(premise);
                break 'glob;
            }
        }
        StoreValidation {
            deterministic,
            global,
            bounded: true,
        }
    }

    /// Least fixed point: iterate "apply every schema to every premise
    /// drawn from the current stage" from ∅.
    pub fn lfp(&self, store: &mut SetStore, max_stages: usize) -> StoreFixedPoint {
        let mut truncated = false;
        let mut current: Vec<SetHandle> = Vec::new();
        let mut stages = Vec::new();
        for _ in 0..max_stages {
            let additions = self.step_additions(store, &current, &mut truncated);
            if additions.is_empty() {
                return StoreFixedPoint {
                    set: sorted_by_code(store, current),
                    stages,
                    unstable: false,
                    truncated,
                };
            }
            current.extend(additions.iter().copied());
            current.sort_unstable_by_key(|h| h.0);
            stages.push(sorted_by_code(store, additions));
        }
        let more = !self.step_additions(store, &current, &mut truncated).is_empty();
        StoreFixedPoint {
            set: sorted_by_code(store, current),
            stages,
            unstable: more,
            truncated,
        }
    }

    fn step_additions(&self, store: &mut SetStore, current: &[SetHandle], truncated: &mut bool) -> Vec<SetHandle> {
        let have: HashSet<SetHandle> = current.iter().copied().collect();
        let mut additions = Vec::new();
        for premise in subsets_up_to(current, self.card_budget) {
            for c in self.conclusions(store, &premise, true, truncated) {
                if !have.contains(&c) && !additions.contains(&c) {
                    additions.push(c);
                }
            }
        }
        additions
    }

    /// Greatest fixed point: contract from the full window.
    pub fn gfp(&self, store: &mut SetStore, max_stages: usize) -> StoreFixedPoint {
        let mut truncated = false;
        let mut current = self.window(store);
        let mut stages = Vec::new();
        for _ in 0..max_stages {
            let image = self.operator_image(store, &current, &mut truncated);
            let next: Vec<SetHandle> = current.iter().copied().filter(|h| image.contains(h)).collect();
            if next.len() == current.len() {
                return StoreFixedPoint {
                    set: sorted_by_code(store, current),
                    stages,
                    unstable: false,
                    truncated,
                };
            }
            stages.push(sorted_by_code(
                store,
                current.iter().copied().filter(|h| !image.contains(h)).collect(),
            ));
            current = next;
        }
        StoreFixedPoint {
            set: sorted_by_code(store, current),
            stages,
            unstable: true,
            truncated,
        }
    }

    fn operator_image(&self, store: &mut SetStore, current: &[SetHandle], truncated: &mut bool) -> HashSet<SetHandle> {
        let mut image = HashSet::new();
        for premise in subsets_up_to(current, self.card_budget) {
            image.extend(self.conclusions(store, &premise, true, truncated));
        }
        image
    }

    /// Function-mode productivity sweep: for every budget-representable
    /// subset `s` of the truncated fixed point, the function value `F(s)`
    /// must avoid `s`. The truncated window is a fragment of the real
    /// (proper-class) fixed point, so every swept subset is a legitimate
    /// set-role player, including the window itself.
    ///
    /// Requires exactly one subset-function schema.
    pub fn productivity_on_lfp(&self, store: &mut SetStore, max_stages: usize) -> Result<Report, StoreError> {
        let mut report = Report::new();
        let lfp = self.lfp(store, max_stages);
        report.count("lfp_size", lfp.set.len() as u64);
        report.count("lfp_truncated", u64::from(lfp.truncated));
        let i_set: HashSet<SetHandle> = lfp.set.iter().copied().collect();
        let [schema] = self.schemas[..] else {
            return Err(StoreError::MalformedGraph(
                "function-mode productivity needs exactly one schema".into(),
            ));
        };
        if !schema.is_subset_function() {
            return Err(StoreError::MalformedGraph(format!(
                "schema `{}` is not a subset function",
                schema.name()
            )));
        }
        let mut swept = 0u64;
        let mut out_of_window = 0u64;
        let mut failures = 0u64;
        for premise in subsets_up_to(&lfp.set, self.card_budget) {
            swept += 1;
            let mut truncated = false;
            let cs = self.conclusions(store, &premise, true, &mut truncated);
            if truncated {
                out_of_window += 1;
                continue;
            }
            let value = cs[0];
            let escapes = !premise.contains(&value);
            let in_i = i_set.contains(&value);
            if !(escapes && in_i) {
                failures += 1;
                report.counterexample(
                    premise.len() as u64,
                    format!(
                        "F({}) = {} {}",
                        describe(store, &premise),
                        store.display(value),
                        if escapes { "left the fixed point" } else { "lands in its own argument" }
                    ),
                );
            }
        }
        report.count("subsets_swept", swept);
        report.count("subsets_out_of_window", out_of_window);
        report.check("productive_on_lfp", failures == 0);
        Ok(report)
    }

    /// The derived class `{F(x) | F(x) ∉ x}` over the window, computed
    /// directly from the function route.
    pub fn derived_class_direct(&self, store: &mut SetStore) -> Result<Vec<SetHandle>, StoreError> {
        let [schema] = self.schemas[..] else {
            return Err(StoreError::MalformedGraph("derived class needs exactly one schema".into()));
        };
        if !schema.is_subset_function() {
            return Err(StoreError::MalformedGraph(format!(
                "schema `{}` is not a subset function",
                schema.name()
            )));
        }
        let window = self.window(store);
        let mut out = Vec::new();
        for x in window {
            let mut truncated = false;
            let members = store.members(x).to_vec();
            if members.len() > self.card_budget {
                continue;
            }
            let cs = self.conclusions(store, &members, true, &mut truncated);
            if truncated {
                continue;
            }
            let value = cs[0];
            if !store.contains(value, x) && !out.contains(&value) {
                out.push(value);
            }
        }
        Ok(sorted_by_code(store, out))
    }

    /// The same class through the system route: in-window conclusions of
    /// premises that escape their own premise.
    pub fn derived_class_via_rules(&self, store: &mut SetStore) -> Vec<SetHandle> {
        let (rules, _) = self.expand_rules(store);
        let mut out: Vec<SetHandle> = Vec::new();
        for (premise, c) in rules {
            if self.in_window(store, c) && !premise.contains(&c) && !out.contains(&c) {
                out.push(c);
            }
        }
        sorted_by_code(store, out)
    }
}

fn describe(store: &SetStore, hs: &[SetHandle]) -> String {
    let inner: Vec<String> = hs.iter().map(|h| store.display(*h)).collect();
    format!("{{{}}}", inner.join(","))
}

fn sorted_by_code(store: &SetStore, mut hs: Vec<SetHandle>) -> Vec<SetHandle> {
    hs.sort_by(|a, b| store.cmp_code(*a, *b));
    hs
}

/// All subsets of `items` with at most `k` elements, smallest first,
/// deterministic order.
pub fn subsets_up_to(items: &[SetHandle], k: usize) -> Vec<Vec<SetHandle>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for idxs in &frontier {
            let start = idxs.last().map(|i| i + 1).unwrap_or(0);
            for j in start..items.len() {
                let mut ext = idxs.clone();
                ext.push(j);
                out.push(ext.iter().map(|i| items[*i]).collect());
                next.push(ext);
            }
        }
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adjoin_system(rank: u32) -> StoreSystem {
        StoreSystem {
            schemas: vec![Schema::Adjoin],
            rank_budget: rank,
            card_budget: 2,
        }
    }

    #[test]
    fn adjoin_lfp_generates_rank_two_universe() {
        let mut store = SetStore::new();
        let sys = adjoin_system(2);
        let lfp = sys.lfp(&mut store, 32);
        assert!(!lfp.unstable);
        assert_eq!(lfp.set.len(), 4);
        let expect = store.grounded_universe(2);
        assert_eq!(lfp.set, expect);
        // Hand iteration stabilizes with three stages of additions.
        assert_eq!(lfp.stages.len(), 3);
        assert!(lfp.truncated); // rank-3 adjoins were cut off
    }

    #[test]
    fn ordinal_system_lfp_is_von_neumann_numerals() {
        let mut store = SetStore::new();
        let sys = StoreSystem {
            schemas: vec![Schema::Successor, Schema::Union],
            rank_budget: 4,
            card_budget: 3,
        };
        let lfp = sys.lfp(&mut store, 64);
        // Ordinals 0..4: each rank-r ordinal is the only ordinal of rank r.
        assert_eq!(lfp.set.len(), 5);
        let mut ord = store.empty();
        for h in &lfp.set {
            assert_eq!(*h, ord);
            ord = store.successor(ord);
        }
    }

    #[test]
    fn ordinal_system_not_deterministic_but_union_is_global() {
        let mut store = SetStore::new();
        let sys = StoreSystem {
            schemas: vec![Schema::Successor, Schema::Union],
            rank_budget: 2,
            card_budget: 2,
        };
        let v = sys.validate(&mut store);
        // ∪{∅} = ∅ = ∪∅: two premises derive ∅.
        assert!(v.deterministic.is_err());
        assert!(v.global.is_ok());
        assert!(v.bounded);
    }

    #[test]
    fn singleton_powerset_combination_is_deterministic() {
        // {x} = P(y) only happens for x = y = ∅, where the premises agree.
        let mut store = SetStore::new();
        let sys = StoreSystem {
            schemas: vec![Schema::Singleton, Schema::Powerset],
            rank_budget: 3,
            card_budget: 2,
        };
        let v = sys.validate(&mut store);
        assert!(v.deterministic.is_ok(), "collision: {:?}", v.deterministic);
        assert!(v.global.is_ok());
    }

    #[test]
    fn singleton_productivity_passes() {
        let mut store = SetStore::new();
        let sys = StoreSystem {
            schemas: vec![Schema::Singleton],
            rank_budget: 4,
            card_budget: 2,
        };
        let report = sys.productivity_on_lfp(&mut store, 64).unwrap();
        assert!(!report.has_failure(), "{report}");
        assert!(report.count_of("subsets_swept").unwrap() > 1);
    }

    #[test]
    fn union_is_not_productive() {
        // ∪ is not injective; the sweep finds a subset whose image lands
        // inside it.
        let mut store = SetStore::new();
        let sys = StoreSystem {
            schemas: vec![Schema::Union],
            rank_budget: 3,
            card_budget: 2,
        };
        let report = sys.productivity_on_lfp(&mut store, 64).unwrap();
        assert!(report.has_failure());
    }

    #[test]
    fn function_and_system_routes_agree_for_injective_schemas() {
        for schema in [Schema::Singleton, Schema::Powerset] {
            let mut store = SetStore::new();
            let sys = StoreSystem {
                schemas: vec![schema],
                rank_budget: 3,
                card_budget: 2,
            };
            let direct = sys.derived_class_direct(&mut store).unwrap();
            let via_rules = sys.derived_class_via_rules(&mut store);
            assert_eq!(direct, via_rules, "schema {}", schema.name());
        }
    }

    #[test]
    fn subsets_up_to_counts() {
        let mut store = SetStore::new();
        let u = store.grounded_universe(2);
        assert_eq!(subsets_up_to(&u, 0).len(), 1);
        assert_eq!(subsets_up_to(&u, 1).len(), 5);
        assert_eq!(subsets_up_to(&u, 2).len(), 11);
        assert_eq!(subsets_up_to(&u, 4).len(), 16);
    }
}
