//! Tarskian evaluation over a finite structure.
//!
//! Every connective is evaluated natively; set quantifiers range over the
//! structure's domain, class variables are evaluation parameters bound to
//! extension bitmaps. `Formula::desugar` to the `{not, and, exists}` core
//! is semantically equivalent (property-tested below), but the sweeps
//! evaluate the sugared tree directly: desugaring would make both sides of
//! the principle collapse to one positive formula under a corrupted `not`
//! case, hiding exactly the evaluator bugs the mutation checks exist to
//! surface.
//!
//! [`Mutation`] deliberately corrupts one connective case. Atom cases are
//! excluded: flipping `∈` everywhere merely evaluates the complement
//! structure, which a sweep over all structures can never distinguish.

use super::{ClassTerm, Formula, Term};
use crate::model::{ClassOrigin, ClassRef, Structure};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound set variable `{0}` at evaluation time")]
    UnboundSetVar(String),
    #[error("unbound class variable `{0}` at evaluation time")]
    UnboundClassVar(String),
    #[error("class variable `{0}` used as a set term operand in `=`")]
    ClassInEquality(String),
}

/// Assignment of set variables to elements. Scoped push/pop; lookups scan
/// from the innermost binding.
#[derive(Debug, Clone, Default)]
pub struct Env {
    stack: Vec<(String, usize)>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn bind(mut self, name: &str, elem: usize) -> Env {
        self.stack.push((name.to_string(), elem));
        self
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        self.stack.iter().rev().find(|(n, _)| n == name).map(|(_, e)| *e)
    }
}

/// Assignment of class variables to extension bitmaps.
#[derive(Debug, Clone, Default)]
pub struct ClassEnv {
    bindings: Vec<(String, u64)>,
}

impl ClassEnv {
    pub fn new() -> ClassEnv {
        ClassEnv::default()
    }

    pub fn bind(mut self, name: &str, extension: u64) -> ClassEnv {
        self.bindings.push((name.to_string(), extension));
        self
    }

    fn lookup(&self, name: &str) -> Option<u64> {
        self.bindings.iter().rev().find(|(n, _)| n == name).map(|(_, e)| *e)
    }
}

/// A single corrupted connective case in the evaluator.
///
/// `ALL_IN_SCHEME` lists the cases exercised by the productivity-principle
/// scheme; the `or` case cannot occur there (the biconditional contains no
/// disjunction) and is covered by direct unit tests instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// `not φ` evaluates as `φ`.
    NotAsIdentity,
    /// `φ and ψ` evaluates as `φ or ψ`.
    AndAsOr,
    /// `φ or ψ` evaluates as `φ and ψ`.
    OrAsAnd,
    /// `φ -> ψ` evaluates as `ψ -> φ`.
    ImpliesAsConverse,
    /// `φ <-> ψ` evaluates as exclusive or.
    IffAsXor,
    /// `forall x φ` evaluates as `exists x φ`.
    ForallAsExists,
    /// `exists x φ` evaluates as `forall x φ`.
    ExistsAsForall,
}

impl Mutation {
    pub const ALL_IN_SCHEME: [Mutation; 6] = [
        Mutation::NotAsIdentity,
        Mutation::AndAsOr,
        Mutation::ImpliesAsConverse,
        Mutation::IffAsXor,
        Mutation::ForallAsExists,
        Mutation::ExistsAsForall,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Mutation::NotAsIdentity => "not-as-identity",
            Mutation::AndAsOr => "and-as-or",
            Mutation::OrAsAnd => "or-as-and",
            Mutation::ImpliesAsConverse => "implies-as-converse",
            Mutation::IffAsXor => "iff-as-xor",
            Mutation::ForallAsExists => "forall-as-exists",
            Mutation::ExistsAsForall => "exists-as-forall",
        }
    }

    pub fn from_name(s: &str) -> Option<Mutation> {
        [
            Mutation::NotAsIdentity,
            Mutation::AndAsOr,
            Mutation::OrAsAnd,
            Mutation::ImpliesAsConverse,
            Mutation::IffAsXor,
            Mutation::ForallAsExists,
            Mutation::ExistsAsForall,
        ]
        .into_iter()
        .find(|m| m.name() == s)
    }
}

/// Standard two-valued satisfaction; total on finite domains.
pub fn evaluate(m: &Structure, f: &Formula, env: &Env, cenv: &ClassEnv) -> Result<bool, EvalError> {
    eval(m, f, &mut env.clone(), cenv, None)
}

/// Satisfaction with one connective case corrupted (`mutation`).
pub fn evaluate_mutated(
    m: &Structure,
    f: &Formula,
    env: &Env,
    cenv: &ClassEnv,
    mutation: Option<Mutation>,
) -> Result<bool, EvalError> {
    eval(m, f, &mut env.clone(), cenv, mutation)
}

fn eval(
    m: &Structure,
    f: &Formula,
    env: &mut Env,
    cenv: &ClassEnv,
    mutation: Option<Mutation>,
) -> Result<bool, EvalError> {
    match f {
        Formula::Member(a, b) => {
            let ea = set_term(a, env)?;
            match b {
                Term::SetVar(_) => Ok(m.member(ea, set_term(b, env)?)),
                Term::ClassVar(n) => {
                    let ext = cenv.lookup(n).ok_or_else(|| EvalError::UnboundClassVar(n.clone()))?;
                    Ok(ext >> ea & 1 == 1)
                }
            }
        }
        Formula::Equal(a, b) => Ok(set_term(a, env)? == set_term(b, env)?),
        Formula::Not(inner) => {
            let v = eval(m, inner, env, cenv, mutation)?;
            Ok(match mutation {
                Some(Mutation::NotAsIdentity) => v,
                _ => !v,
            })
        }
        Formula::And(a, b) => {
            let va = eval(m, a, env, cenv, mutation)?;
            let vb = eval(m, b, env, cenv, mutation)?;
            Ok(match mutation {
                Some(Mutation::AndAsOr) => va || vb,
                _ => va && vb,
            })
        }
        Formula::Or(a, b) => {
            let va = eval(m, a, env, cenv, mutation)?;
            let vb = eval(m, b, env, cenv, mutation)?;
            Ok(match mutation {
                Some(Mutation::OrAsAnd) => va && vb,
                _ => va || vb,
            })
        }
        Formula::Implies(a, b) => {
            let va = eval(m, a, env, cenv, mutation)?;
            let vb = eval(m, b, env, cenv, mutation)?;
            Ok(match mutation {
                Some(Mutation::ImpliesAsConverse) => !vb || va,
                _ => !va || vb,
            })
        }
        Formula::Iff(a, b) => {
            let va = eval(m, a, env, cenv, mutation)?;
            let vb = eval(m, b, env, cenv, mutation)?;
            Ok(match mutation {
                Some(Mutation::IffAsXor) => va != vb,
                _ => va == vb,
            })
        }
        Formula::Forall(v, body) => {
            let as_exists = mutation == Some(Mutation::ForallAsExists);
            quantify(m, v, body, env, cenv, mutation, !as_exists)
        }
        Formula::Exists(v, body) => {
            let as_forall = mutation == Some(Mutation::ExistsAsForall);
            quantify(m, v, body, env, cenv, mutation, as_forall)
        }
    }
}

/// Conjunctive (`universal = true`) or disjunctive sweep of the domain.
fn quantify(
    m: &Structure,
    v: &str,
    body: &Formula,
    env: &mut Env,
    cenv: &ClassEnv,
    mutation: Option<Mutation>,
    universal: bool,
) -> Result<bool, EvalError> {
    let mut acc = universal;
    for e in 0..m.size() {
        env.stack.push((v.to_string(), e));
        let val = eval(m, body, env, cenv, mutation)?;
        env.stack.pop();
        if universal {
            acc &= val;
            if !acc {
                break;
            }
        } else {
            acc |= val;
            if acc {
                break;
            }
        }
    }
    Ok(acc)
}

fn set_term(t: &Term, env: &Env) -> Result<usize, EvalError> {
    match t {
        Term::SetVar(n) => env.lookup(n).ok_or_else(|| EvalError::UnboundSetVar(n.clone())),
        Term::ClassVar(n) => Err(EvalError::ClassInEquality(n.clone())),
    }
}

/// `{e ∈ domain | m ⊨ body[x := e]}` with formula provenance.
pub fn class_extension(m: &Structure, t: &ClassTerm, cenv: &ClassEnv) -> Result<ClassRef, EvalError> {
    let mut extension = 0u64;
    for e in 0..m.size() {
        let env = Env::new().bind(&t.var, e);
        if evaluate(m, &t.body, &env, cenv)? {
            extension |= 1 << e;
        }
    }
    Ok(ClassRef {
        extension,
        origin: ClassOrigin::Formula(t.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_class_term;
    use crate::formula::parse_formula;

    #[test]
    fn atoms_and_identity() {
        let irref = Structure::from_pairs(1, &[]);
        let refl = Structure::from_pairs(1, &[(0, 0)]);
        let f = parse_formula("x notin x").unwrap();
        let env = Env::new().bind("x", 0);
        assert!(evaluate(&irref, &f, &env, &ClassEnv::new()).unwrap());
        assert!(!evaluate(&refl, &f, &env, &ClassEnv::new()).unwrap());

        let t = parse_formula("x = x").unwrap();
        assert!(evaluate(&refl, &t, &env, &ClassEnv::new()).unwrap());
    }

    #[test]
    fn russell_set_cannot_exist_in_reflexive_point() {
        // exists s forall x (x in s <-> x notin x): the only candidate s=a
        // fails both directions in the a∈a structure.
        let refl = Structure::from_pairs(1, &[(0, 0)]);
        let f = parse_formula("exists s forall x (x in s <-> x notin x)").unwrap();
        assert!(!evaluate(&refl, &f, &Env::new(), &ClassEnv::new()).unwrap());
    }

    #[test]
    fn missing_bindings_are_contract_errors() {
        let m = Structure::from_pairs(1, &[]);
        let f = parse_formula("x in x").unwrap();
        assert_eq!(
            evaluate(&m, &f, &Env::new(), &ClassEnv::new()),
            Err(EvalError::UnboundSetVar("x".into()))
        );
        let g = parse_formula("x in C").unwrap();
        assert_eq!(
            evaluate(&m, &g, &Env::new().bind("x", 0), &ClassEnv::new()),
            Err(EvalError::UnboundClassVar("C".into()))
        );
    }

    #[test]
    fn class_variables_are_evaluation_parameters() {
        let m = Structure::from_pairs(2, &[(0, 1)]);
        let f = parse_formula("x in C").unwrap();
        let cenv = ClassEnv::new().bind("C", 0b10);
        assert!(!evaluate(&m, &f, &Env::new().bind("x", 0), &cenv).unwrap());
        assert!(evaluate(&m, &f, &Env::new().bind("x", 1), &cenv).unwrap());
    }

    #[test]
    fn quantifier_scoping_shadows_outer_bindings() {
        let m = Structure::from_pairs(2, &[(0, 0)]);
        // Outer x is shadowed inside exists x.
        let f = parse_formula("exists x (x in x)").unwrap();
        let env = Env::new().bind("x", 1);
        assert!(evaluate(&m, &f, &env, &ClassEnv::new()).unwrap());
    }

    #[test]
    fn class_extension_of_russell_term() {
        let t = parse_class_term("{ x | x notin x }").unwrap();
        let irref = Structure::from_pairs(1, &[]);
        assert_eq!(class_extension(&irref, &t, &ClassEnv::new()).unwrap().extension, 0b1);
        let refl = Structure::from_pairs(1, &[(0, 0)]);
        assert_eq!(class_extension(&refl, &t, &ClassEnv::new()).unwrap().extension, 0);

        let v = parse_class_term("{ x | x = x }").unwrap();
        let m = Structure::from_pairs(3, &[]);
        assert_eq!(class_extension(&m, &v, &ClassEnv::new()).unwrap().extension, 0b111);
    }

    #[test]
    fn truth_table_oracle_on_tiny_models() {
        // Brute-force substitution oracle: enumerate all assignments and
        // compare against the recursive evaluator for quantifier-free parts.
        let m = Structure::from_pairs(2, &[(0, 1), (1, 1)]);
        let f = parse_formula("x in y and not y in x or x = y").unwrap();
        for x in 0..2usize {
            for y in 0..2usize {
                let env = Env::new().bind("x", x).bind("y", y);
                let expect = (m.member(x, y) && !m.member(y, x)) || x == y;
                assert_eq!(evaluate(&m, &f, &env, &ClassEnv::new()).unwrap(), expect);
            }
        }
    }

    #[test]
    fn mutations_change_truth_values() {
        let m = Structure::from_pairs(1, &[]);
        let env = Env::new().bind("x", 0);
        let cenv = ClassEnv::new();
        let f = parse_formula("not x in x").unwrap();
        assert!(evaluate(&m, &f, &env, &cenv).unwrap());
        assert!(!evaluate_mutated(&m, &f, &env, &cenv, Some(Mutation::NotAsIdentity)).unwrap());

        let g = parse_formula("x = x and x in x").unwrap();
        assert!(!evaluate(&m, &g, &env, &cenv).unwrap());
        assert!(evaluate_mutated(&m, &g, &env, &cenv, Some(Mutation::AndAsOr)).unwrap());

        let o = parse_formula("x = x or x in x").unwrap();
        assert!(evaluate(&m, &o, &env, &cenv).unwrap());
        assert!(!evaluate_mutated(&m, &o, &env, &cenv, Some(Mutation::OrAsAnd)).unwrap());

        let i = parse_formula("x = x -> x in x").unwrap();
        assert!(!evaluate(&m, &i, &env, &cenv).unwrap());
        assert!(evaluate_mutated(&m, &i, &env, &cenv, Some(Mutation::ImpliesAsConverse)).unwrap());

        let b = parse_formula("x = x <-> x in x").unwrap();
        assert!(!evaluate(&m, &b, &env, &cenv).unwrap());
        assert!(evaluate_mutated(&m, &b, &env, &cenv, Some(Mutation::IffAsXor)).unwrap());

        let m2 = Structure::from_pairs(2, &[(0, 0)]);
        let h = parse_formula("exists y (y in y)").unwrap();
        assert!(evaluate(&m2, &h, &Env::new(), &cenv).unwrap());
        assert!(!evaluate_mutated(&m2, &h, &Env::new(), &cenv, Some(Mutation::ExistsAsForall)).unwrap());
        let u = parse_formula("forall y (y in y)").unwrap();
        assert!(!evaluate(&m2, &u, &Env::new(), &cenv).unwrap());
        assert!(evaluate_mutated(&m2, &u, &Env::new(), &cenv, Some(Mutation::ForallAsExists)).unwrap());
    }

    #[test]
    fn desugared_core_is_equivalent_to_native_evaluation() {
        // Adequacy of the {not, and, exists} core: desugaring never changes
        // a truth value, over every depth ≤ 1 formula, every structure of
        // size ≤ 2, and every assignment of the free variable.
        let formulas = crate::formula::enumerate_formulas(1, &["x"], 3).unwrap();
        let sugared = [
            parse_formula("x in x or x = x").unwrap(),
            parse_formula("x in x -> exists y (x in y)").unwrap(),
            parse_formula("x notin x <-> forall y (y != x)").unwrap(),
        ];
        for n in 1..=2usize {
            for m in crate::model::enumerate_structures(n, 2).unwrap() {
                for f in formulas.iter().chain(sugared.iter()) {
                    let core = f.desugar();
                    for e in 0..n {
                        let env = Env::new().bind("x", e);
                        assert_eq!(
                            evaluate(&m, f, &env, &ClassEnv::new()),
                            evaluate(&m, &core, &env, &ClassEnv::new()),
                            "desugar changed {f}"
                        );
                    }
                }
            }
        }
    }
}
