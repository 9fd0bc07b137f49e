//! Classic paradoxical class builders.
//!
//! Structure-level builders (`russell`, `rn`, `sikic`) produce a class
//! extension to feed into [`super::decide`]; store-level builders (`ni`,
//! `wf`, `nwf`, injective images) demonstrate the productive choice
//! directly on truncated windows of the canonical store, pairing each
//! swept subset with its checked escape.

use super::decide;
use crate::hf::{MembershipGraph, SetHandle, SetStore, StoreError};
use crate::model::{ClassOrigin, ClassRef, Structure, Verdict};
use crate::report::Report;
use crate::rules::subsets_up_to;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("sikic map is not surjective onto represented subsets: no argument hits ext({unhit})")]
    SikicNotSurjective { unhit: String },
    #[error("operation {op} is not injective on the window: F({a}) = F({b})")]
    NotInjective { op: &'static str, a: String, b: String },
    #[error(transparent)]
    Store(#[from] StoreError),
}

/// Structure-level catalog output: the class plus its verdict report.
#[derive(Debug, Clone)]
pub struct CatalogClass {
    pub class: ClassRef,
    pub verdict: Verdict,
}

/// Russell's class `{x | x ∉ x}` relative to a structure.
pub fn russell(m: &Structure) -> CatalogClass {
    let extension: u64 = (0..m.size()).filter(|e| !m.member(*e, *e)).map(|e| 1u64 << e).sum();
    let class = ClassRef {
        extension,
        origin: ClassOrigin::Builder("russell"),
    };
    let verdict = decide(m, extension);
    CatalogClass { class, verdict }
}

/// The class of not-n-cyclic elements `{x | ¬ x ∈ⁿ x}`.
pub fn not_n_cyclic(m: &Structure, n: u32) -> CatalogClass {
    let extension: u64 = (0..m.size()).filter(|e| !m.n_cyclic(*e, n)).map(|e| 1u64 << e).sum();
    let class = ClassRef {
        extension,
        origin: ClassOrigin::Builder("rn"),
    };
    let verdict = decide(m, extension);
    CatalogClass { class, verdict }
}

/// The diagonal class `{x | x ∉ F(x)}` for a map whose composed extension
/// map hits every represented subset. The precondition is what makes the
/// class unrepresentable, so it is checked up front and the unhit set
/// named.
pub fn sikic(m: &Structure, f: &[usize]) -> Result<CatalogClass, CatalogError> {
    assert_eq!(f.len(), m.size(), "sikic map must be total on the domain");
    for e in 0..m.size() {
        let target = m.extension_of(e);
        let hit = (0..m.size()).any(|d| m.extension_of(f[d]) == target);
        if !hit {
            return Err(CatalogError::SikicNotSurjective {
                unhit: m.describe_class(target),
            });
        }
    }
    let extension: u64 = (0..m.size()).filter(|x| !m.member(*x, f[*x])).map(|x| 1u64 << x).sum();
    let class = ClassRef {
        extension,
        origin: ClassOrigin::Builder("sikic"),
    };
    let verdict = decide(m, extension);
    Ok(CatalogClass { class, verdict })
}

/// Store-level demo of a class on which identity is productive: for each
/// swept subset as a set `s`, check `s ∈ C ∖ s`.
fn identity_productive_demo(
    store: &mut SetStore,
    class_name: &'static str,
    members: &[SetHandle],
    in_class: &mut dyn FnMut(&mut SetStore, SetHandle) -> bool,
    card_budget: usize,
) -> Report {
    let mut report = Report::new();
    report.count(format!("{class_name}_members"), members.len() as u64);
    let mut failures = 0u64;
    let mut swept = 0u64;
    for subset in subsets_up_to(members, card_budget) {
        swept += 1;
        let s = store.intern(subset.clone());
        let escapes = !subset.contains(&s);
        let lands = in_class(store, s);
        if !(escapes && lands) {
            failures += 1;
            report.counterexample(
                subset.len() as u64,
                format!("subset-as-set {} failed: escapes={escapes} in-class={lands}", store.display(s)),
            );
        }
    }
    report.count("subsets_swept", swept);
    report.check(format!("{class_name}_identity_productive"), failures == 0);
    report
}

/// `NI`: members of the window not ∈-isomorphic to any of their elements.
pub fn ni_class(store: &mut SetStore, window: &[SetHandle], iso_budget: usize) -> Result<Vec<SetHandle>, StoreError> {
    let mut out = Vec::new();
    for &x in window {
        let mut isomorphic_to_member = false;
        for &y in store.members(x).to_vec().iter() {
            if store.is_isomorphic(x, y, iso_budget)? {
                isomorphic_to_member = true;
                break;
            }
        }
        if !isomorphic_to_member {
            out.push(x);
        }
    }
    Ok(out)
}

/// Demo for `NI` on a grounded window: identity is productive on it.
pub fn ni_demo(store: &mut SetStore, rank_budget: u32, card_budget: usize, iso_budget: usize) -> Result<Report, CatalogError> {
    let window = store.grounded_universe(rank_budget);
    let members = ni_class(store, &window, iso_budget)?;
    let mut check = |store: &mut SetStore, s: SetHandle| -> bool {
        let ms = store.members(s).to_vec();
        ms.iter().all(|y| !store.is_isomorphic(s, *y, iso_budget).unwrap_or(false))
    };
    Ok(identity_productive_demo(store, "ni", &members, &mut check, card_budget))
}

/// Demo for `WF` (grounded sets) on a grounded window.
pub fn wf_demo(store: &mut SetStore, rank_budget: u32, card_budget: usize) -> Report {
    let members = store.grounded_universe(rank_budget);
    let mut check = |store: &mut SetStore, s: SetHandle| store.is_grounded(s);
    identity_productive_demo(store, "wf", &members, &mut check, card_budget)
}

/// A seeded store populated with a grounded background plus random
/// (possibly cyclic) membership graphs; guaranteed to hold at least one
/// ungrounded set.
pub fn random_hyperset_store(rng: &mut ChaCha8Rng) -> SetStore {
    let mut store = SetStore::new();
    store.grounded_universe(2);
    let graphs = rng.gen_range(1..=3);
    for _ in 0..graphs {
        let n = rng.gen_range(1..=4);
        let mut edges = Vec::new();
        for m in 0..n {
            for p in 0..n {
                if rng.gen_bool(0.35) {
                    edges.push((m, p));
                }
            }
        }
        // Root at every node so each quotient class lands in the store.
        for root in 0..n {
            let g = MembershipGraph {
                node_count: n,
                edges: edges.clone(),
                root,
            };
            store.canonicalize_graph(&g).expect("generated graph is well formed");
        }
    }
    if store.ungrounded_handles().is_empty() {
        let omega = MembershipGraph {
            node_count: 1,
            edges: vec![(0, 0)],
            root: 0,
        };
        store.canonicalize_graph(&omega).unwrap();
    }
    store
}

/// `NWF` demo under the paper's weaker hypotheses: pairing available, at
/// least one ungrounded set, and `⋃s` different from the store universe —
/// checked explicitly per swept subset rather than assumed. The productive
/// choice for a nonempty subset is the pair of one of its elements with a
/// set outside its union.
pub fn nwf_demo(store: &mut SetStore, card_budget: usize) -> Report {
    let mut report = Report::new();
    let nwf: Vec<SetHandle> = store.ungrounded_handles().to_vec();
    report.count("nwf_members", nwf.len() as u64);
    let mut failures = 0u64;
    let mut swept = 0u64;
    for subset in subsets_up_to(&nwf, card_budget) {
        swept += 1;
        let ok = if subset.is_empty() {
            // Any ungrounded set extends the empty subset.
            !nwf.is_empty()
        } else {
            let x1 = subset[0];
            let union: Vec<SetHandle> = subset
                .iter()
                .flat_map(|h| store.members(*h).to_vec())
                .collect();
            // The weaker hypothesis: the union must not exhaust the
            // universe at sweep time.
            let universe: Vec<SetHandle> = store.handles().collect();
            match universe.iter().find(|h| !union.contains(h)) {
                None => false,
                Some(&x2) => {
                    let pair = store.pair(x1, x2);
                    let escapes = !subset.contains(&pair);
                    let ungrounded = !store.is_grounded(pair);
                    escapes && ungrounded
                }
            }
        };
        if !ok {
            failures += 1;
            report.counterexample(subset.len() as u64, "nwf productive choice failed");
        }
    }
    report.count("subsets_swept", swept);
    report.check("nwf_productive", failures == 0);
    report
}

/// Injective store operations for image classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InjectiveOp {
    Singleton,
    Powerset,
    Successor,
}

impl InjectiveOp {
    pub fn name(&self) -> &'static str {
        match self {
            InjectiveOp::Singleton => "singleton",
            InjectiveOp::Powerset => "powerset",
            InjectiveOp::Successor => "successor",
        }
    }

    pub fn from_name(s: &str) -> Option<InjectiveOp> {
        Some(match s {
            "singleton" => InjectiveOp::Singleton,
            "powerset" => InjectiveOp::Powerset,
            "successor" => InjectiveOp::Successor,
            _ => return None,
        })
    }

    pub fn apply(&self, store: &mut SetStore, x: SetHandle) -> Result<SetHandle, StoreError> {
        Ok(match self {
            InjectiveOp::Singleton => store.singleton(x),
            InjectiveOp::Powerset => store.powerset(x)?,
            InjectiveOp::Successor => store.successor(x),
        })
    }
}

/// The class `{F(x) | F(x) ∉ x}` over a grounded window, with the
/// productivity of `F` on it checked subset by subset. Injectivity is
/// verified by collision scan first.
pub fn injective_image_demo(
    store: &mut SetStore,
    op: InjectiveOp,
    rank_budget: u32,
    card_budget: usize,
) -> Result<Report, CatalogError> {
    let window = store.grounded_universe(rank_budget);
    let mut images: Vec<(SetHandle, SetHandle)> = Vec::new();
    for &x in &window {
        let fx = op.apply(store, x)?;
        if let Some((prev, _)) = images.iter().find(|(_, f)| *f == fx) {
            return Err(CatalogError::NotInjective {
                op: op.name(),
                a: store.display(*prev),
                b: store.display(x),
            });
        }
        images.push((x, fx));
    }
    let mut report = Report::new();
    let class: Vec<SetHandle> = images
        .iter()
        .filter(|(x, fx)| !store.contains(*fx, *x))
        .map(|(_, fx)| *fx)
        .collect();
    report.count("image_class_members", class.len() as u64);
    let mut failures = 0u64;
    let mut swept = 0u64;
    for subset in subsets_up_to(&class, card_budget) {
        swept += 1;
        let s = store.intern(subset.clone());
        let fs = op.apply(store, s)?;
        // F(s) ∈ I ⇔ F(s) ∉ s by injectivity, so the escape is the whole
        // check.
        if store.contains(fs, s) {
            failures += 1;
            report.counterexample(subset.len() as u64, format!("F({}) lands in its argument", store.display(s)));
        }
    }
    report.count("subsets_swept", swept);
    report.check(format!("inj_{}_productive", op.name()), failures == 0);
    Ok(report)
}
