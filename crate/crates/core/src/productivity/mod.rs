//! The productive-choice machinery: deciding set-vs-paradoxical status,
//! verifying the productivity principle exhaustively at both the formula
//! and the class level, and analyzing classes on which identity is
//! productive.
//!
//! A class is paradoxical in a structure exactly when no element represents
//! it; the decision procedure then certifies the equivalent productive
//! choice — for every represented subset of the class, an element of the
//! class outside it.

mod catalog;
mod los;

pub use catalog::{
    injective_image_demo, ni_class, ni_demo, not_n_cyclic, nwf_demo, random_hyperset_store, russell, sikic,
    wf_demo, CatalogClass, CatalogError, InjectiveOp,
};
pub use los::{los_cardinal, los_cumulative, los_zermelo, los_zermelo_exhaustive, SetSystem, Smallness};

use crate::formula::{
    self, and, enumerate_formulas, evaluate_mutated, exists, forall, iff, implies, member, not, setvar,
    ClassEnv, Env, Formula, Mutation,
};
use crate::model::{
    enumerate_structures, ModelError, ProductiveChoiceCertificate, Structure, Verdict, WitnessEntry,
};
use crate::report::Report;

/// Decides the status of a class extension. Paradoxical verdicts carry a
/// complete productive-choice certificate; the witness for a represented
/// subset is the least element of the class outside it (which exists
/// because an unrepresented class strictly contains every represented
/// subset of itself).
pub fn decide(m: &Structure, class: u64) -> Verdict {
    if let Some(e) = m.is_represented(class) {
        return Verdict::Set(e);
    }
    let mut entries = Vec::new();
    for e in 0..m.size() {
        let ext = m.extension_of(e);
        if ext & !class != 0 {
            continue;
        }
        let escape = class & !ext;
        debug_assert_ne!(escape, 0, "represented subset equal to an unrepresented class");
        entries.push(WitnessEntry {
            element: e,
            subset: ext,
            witness: escape.trailing_zeros() as usize,
        });
    }
    Verdict::Paradoxical(ProductiveChoiceCertificate { entries })
}

/// Whether a productive choice exists on `class`: every represented subset
/// leaves something of the class uncovered. For represented classes this
/// fails at the class itself, which is the paper's Ω phenomenon.
pub fn productive_choice_exists(m: &Structure, class: u64) -> bool {
    (0..m.size()).all(|e| {
        let ext = m.extension_of(e);
        ext & !class != 0 || class & !ext != 0
    })
}

/// The two sides of the formula-level principle for a formula φ(x):
/// "no set collects exactly the φs" on the left, "every set of φs misses a
/// φ" on the right.
pub fn principle_sides(phi: &Formula) -> (Formula, Formula) {
    let x_in_s = || member(setvar("x"), setvar("s0"));
    let lhs = not(exists("s0", forall("x", iff(x_in_s(), phi.clone()))));
    let rhs = forall(
        "s0",
        implies(
            forall("x", implies(x_in_s(), phi.clone())),
            exists("x", and(not(x_in_s()), phi.clone())),
        ),
    );
    (lhs, rhs)
}

/// Exhaustive formula-level verification of the principle: over every
/// structure of size ≤ `max_n` and every enumerated formula of connective
/// depth ≤ `depth`, both sides of the biconditional must agree. `mutation`
/// corrupts one evaluator case to demonstrate the sweep's sensitivity.
pub fn verify_principle_formula_level(
    max_n: usize,
    depth: usize,
    mutation: Option<Mutation>,
) -> Result<Report, ModelError> {
    let mut report = Report::new();
    let formulas = enumerate_formulas(depth, &["x"], formula::FORMULA_DEPTH_CAP)
        .map_err(|e| ModelError::EnumerationBudget { n: e.depth, cap: e.cap })?;
    // Evaluated as written (not desugared): the scheme's ↔, →, ∀ cases must
    // stay live so single-connective mutations remain observable.
    let sides: Vec<(Formula, Formula, String)> = formulas
        .iter()
        .map(|phi| {
            let (l, r) = principle_sides(phi);
            (l, r, phi.to_string())
        })
        .collect();
    let mut structures = 0u64;
    let mut checks = 0u64;
    let mut counterexamples = 0u64;
    for n in 0..=max_n {
        for m in enumerate_structures(n, max_n)? {
            structures += 1;
            for (lhs, rhs, text) in &sides {
                checks += 1;
                let env = Env::new();
                let cenv = ClassEnv::new();
                let l = evaluate_mutated(&m, lhs, &env, &cenv, mutation).expect("closed formula");
                let r = evaluate_mutated(&m, rhs, &env, &cenv, mutation).expect("closed formula");
                if l != r {
                    counterexamples += 1;
                    if counterexamples <= 16 {
                        report.counterexample(
                            m.to_bitmap(),
                            format!("n={n} phi=[{text}] lhs={l} rhs={r}"),
                        );
                    }
                }
            }
        }
    }
    report.count("structures", structures);
    report.count("formulas", sides.len() as u64);
    report.count("checks", checks);
    report.count("counterexamples", counterexamples);
    report.check("principle-formula-level", counterexamples == 0);
    Ok(report)
}

/// Exhaustive class-level verification: in every structure of size ≤
/// `max_n`, a class is unrepresented iff every represented subset of it
/// misses part of it.
pub fn verify_principle_class_level(max_n: usize) -> Result<Report, ModelError> {
    let mut report = Report::new();
    let mut structures = 0u64;
    let mut classes = 0u64;
    let mut counterexamples = 0u64;
    for n in 0..=max_n {
        for m in enumerate_structures(n, max_n)? {
            structures += 1;
            for class in 0..=m.domain_mask() {
                classes += 1;
                let left = m.is_represented(class).is_none();
                let right = productive_choice_exists(&m, class);
                if left != right {
                    counterexamples += 1;
                    report.counterexample(m.to_bitmap(), format!("n={n} class={class:b} left={left} right={right}"));
                }
            }
        }
    }
    report.count("structures", structures);
    report.count("classes", classes);
    report.count("counterexamples", counterexamples);
    report.check("principle-class-level", counterexamples == 0);
    Ok(report)
}

/// `C` is identity-productive when every element representing a subset of
/// `C` lies in `C` outside its own extension (the `P(C) ⊆ C ∩ R` form).
pub fn is_identity_productive(m: &Structure, class: u64) -> bool {
    (0..m.size()).all(|e| {
        let ext = m.extension_of(e);
        ext & !class != 0 || (class >> e & 1 == 1 && ext >> e & 1 == 0)
    })
}

/// Identity-productivity survey of one structure: lists the family and
/// checks its three structural laws — closure under intersection, the
/// grounded-element class being the least member, and transitive members
/// sitting inside Russell's extension.
pub fn identity_productive_report(m: &Structure) -> Report {
    let mut report = Report::new();
    let family: Vec<u64> = (0..=m.domain_mask())
        .filter(|c| is_identity_productive(m, *c))
        .collect();
    report.count("identity_productive_classes", family.len() as u64);
    // Vacuously qualifying classes: no element represents any subset at all.
    let vacuous = family
        .iter()
        .filter(|c| (0..m.size()).all(|e| m.extension_of(e) & !**c != 0))
        .count();
    report.count("vacuously_qualifying", vacuous as u64);

    let mut intersection_ok = true;
    for a in &family {
        for b in &family {
            if !family.contains(&(a & b)) {
                intersection_ok = false;
                report.counterexample(m.to_bitmap(), format!("intersection {:b} ∩ {:b} left the family", a, b));
            }
        }
    }
    report.check("intersection-closure", intersection_ok);

    let wf = m.grounded_elements();
    let wf_member = family.contains(&wf);
    let wf_least = family.iter().all(|c| wf & !c == 0);
    if !wf_member {
        report.counterexample(m.to_bitmap(), format!("grounded class {wf:b} not identity-productive"));
    }
    if !wf_least {
        report.counterexample(m.to_bitmap(), format!("grounded class {wf:b} not contained in every member"));
    }
    report.check("wf-least", wf_member && wf_least);

    let russell: u64 = (0..m.size()).filter(|e| !m.member(*e, *e)).map(|e| 1 << e).sum();
    let mut transitive_ok = true;
    for c in &family {
        let transitive = (0..m.size())
            .filter(|e| c >> e & 1 == 1)
            .all(|e| m.extension_of(e) & !c == 0);
        if transitive && c & !russell != 0 {
            transitive_ok = false;
            report.counterexample(m.to_bitmap(), format!("transitive member {c:b} leaves Russell's extension"));
        }
    }
    report.check("transitive-in-russell", transitive_ok);
    report
}

/// Runs [`identity_productive_report`] over every structure of size ≤
/// `max_n` and aggregates.
pub fn identity_productive_sweep(max_n: usize) -> Result<Report, ModelError> {
    let mut out = Report::new();
    let mut structures = 0u64;
    let mut failures = 0u64;
    for n in 0..=max_n {
        for m in enumerate_structures(n, max_n)? {
            structures += 1;
            let r = identity_productive_report(&m);
            if r.has_failure() {
                failures += 1;
                if failures <= 8 {
                    out.merge(r);
                }
            }
        }
    }
    out.count("structures", structures);
    out.count("failing_structures", failures);
    out.check("identity-productivity-suite", failures == 0);
    Ok(out)
}
