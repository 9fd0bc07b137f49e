//! Deterministic enumeration of formulas for exhaustive sweeps.
//!
//! Formulas are built from atoms (`v in w`, `v = w` over the available
//! variables), `not`, `and`, and `exists` over fresh variables. The `depth`
//! parameter budgets connective nodes: atoms weigh zero, each connective or
//! quantifier weighs one, so depth 0 yields exactly the atoms. Order is
//! fixed and no formula appears twice.

use super::{and, exists, member, not, setvar, Formula};
use thiserror::Error;

/// Default cap on the connective budget.
pub const FORMULA_DEPTH_CAP: usize = 3;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("formula enumeration budget exceeded: depth {depth} > cap {cap}")]
pub struct FormulaBudget {
    pub depth: usize,
    pub cap: usize,
}

/// All formulas over the given free set variables with connective weight
/// ≤ `depth`, in deterministic order. Quantifiers bind fresh variables
/// `v1, v2, …` named by nesting level.
pub fn enumerate_formulas(depth: usize, free_vars: &[&str], cap: usize) -> Result<Vec<Formula>, FormulaBudget> {
    if depth > cap {
        return Err(FormulaBudget { depth, cap });
    }
    let vars: Vec<String> = free_vars.iter().map(|v| v.to_string()).collect();
    let mut out = Vec::new();
    for w in 0..=depth {
        out.extend(exact_weight(w, &vars));
    }
    Ok(out)
}

fn atoms(vars: &[String]) -> Vec<Formula> {
    let mut out = Vec::new();
    for a in vars {
        for b in vars {
            out.push(member(setvar(a), setvar(b)));
        }
    }
    for a in vars {
        for b in vars {
            out.push(super::equal(setvar(a), setvar(b)));
        }
    }
    out
}

fn exact_weight(w: usize, vars: &[String]) -> Vec<Formula> {
    if w == 0 {
        return atoms(vars);
    }
    let mut out = Vec::new();
    for f in exact_weight(w - 1, vars) {
        out.push(not(f));
    }
    for w1 in 0..w {
        let w2 = w - 1 - w1;
        for f in exact_weight(w1, vars) {
            for g in exact_weight(w2, vars) {
                out.push(and(f.clone(), g));
            }
        }
    }
    let fresh = format!("v{}", vars.len());
    let mut inner_vars = vars.to_vec();
    inner_vars.push(fresh.clone());
    for f in exact_weight(w - 1, &inner_vars) {
        out.push(exists(&fresh, f));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn depth_zero_is_exactly_the_atoms() {
        let fs = enumerate_formulas(0, &["x"], 3).unwrap();
        let texts: Vec<String> = fs.iter().map(|f| f.to_string()).collect();
        assert_eq!(texts, vec!["x in x", "x = x"]);
    }

    #[test]
    fn identity_atom_is_always_present() {
        for d in 0..=2 {
            let fs = enumerate_formulas(d, &["x"], 3).unwrap();
            assert!(fs.iter().any(|f| f.to_string() == "x = x"));
        }
    }

    #[test]
    fn counts_are_stable_regression_constants() {
        // Exact-weight counts over one free variable; the cumulative count
        // at depth 2 (176) is the size of the principle sweep's formula
        // space.
        assert_eq!(enumerate_formulas(0, &["x"], 3).unwrap().len(), 2);
        assert_eq!(enumerate_formulas(1, &["x"], 3).unwrap().len(), 16);
        assert_eq!(enumerate_formulas(2, &["x"], 3).unwrap().len(), 176);
    }

    #[test]
    fn enumeration_is_duplicate_free() {
        let fs = enumerate_formulas(2, &["x"], 3).unwrap();
        let set: HashSet<&Formula> = fs.iter().collect();
        assert_eq!(set.len(), fs.len());
    }

    #[test]
    fn budget_is_enforced() {
        assert!(enumerate_formulas(4, &["x"], 3).is_err());
        assert!(enumerate_formulas(3, &["x"], 3).is_ok());
    }

    #[test]
    fn every_enumerated_formula_has_only_the_given_free_vars() {
        for f in enumerate_formulas(2, &["x"], 3).unwrap() {
            for v in f.free_set_vars() {
                assert_eq!(v, "x", "unexpected free var in {f}");
            }
        }
    }
}
