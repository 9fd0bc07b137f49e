//! The two-sorted ∈-language: set variables are lowercase, class variables
//! uppercase. Concrete syntax:
//!
//! ```text
//! formula   := iff
//! iff       := imp ('<->' imp)*
//! imp       := or ('->' or)*            (right associative)
//! or        := and ('or' and)*
//! and       := unary ('and' unary)*
//! unary     := 'not' unary | ('forall'|'exists') setvar unary
//!            | atom | '(' formula ')'
//! atom      := term ('in'|'notin'|'='|'!=') term
//! classterm := '{' setvar '|' formula '}'
//! ```
//!
//! `notin` and `!=` are parsed directly to negated atoms; the remaining
//! sugar (`or`, `->`, `<->`, `forall`) is kept in the tree for printing and
//! desugared to the `{not, and, exists}` core before evaluation.

mod enumerate;
mod eval;
mod parse;

pub use enumerate::{enumerate_formulas, FormulaBudget, FORMULA_DEPTH_CAP};
pub use eval::{class_extension, evaluate, evaluate_mutated, ClassEnv, Env, EvalError, Mutation};
pub use parse::{parse, parse_class_term, parse_formula, Parsed, ParseError};

use std::fmt;

/// A term is a set variable or a class variable; the case of the first
/// letter decides which.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    SetVar(String),
    ClassVar(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::SetVar(n) | Term::ClassVar(n) => n,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Member(Term, Term),
    Equal(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

/// `{ var | body }` — the body's only free set variable is `var`; class
/// variables stay free (they are evaluation parameters).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTerm {
    pub var: String,
    pub body: Formula,
}

pub fn setvar(name: &str) -> Term {
    Term::SetVar(name.to_string())
}

pub fn classvar(name: &str) -> Term {
    Term::ClassVar(name.to_string())
}

pub fn member(a: Term, b: Term) -> Formula {
    Formula::Member(a, b)
}

pub fn equal(a: Term, b: Term) -> Formula {
    Formula::Equal(a, b)
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    Formula::Iff(Box::new(a), Box::new(b))
}

pub fn forall(v: &str, f: Formula) -> Formula {
    Formula::Forall(v.to_string(), Box::new(f))
}

pub fn exists(v: &str, f: Formula) -> Formula {
    Formula::Exists(v.to_string(), Box::new(f))
}

impl Formula {
    /// Rewrites to the `{Member, Equal, Not, And, Exists}` core. Adequate
    /// for every check in the crate; the evaluator only sees this fragment.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Member(..) | Formula::Equal(..) => self.clone(),
            Formula::Not(f) => not(f.desugar()),
            Formula::And(a, b) => and(a.desugar(), b.desugar()),
            Formula::Or(a, b) => not(and(not(a.desugar()), not(b.desugar()))),
            Formula::Implies(a, b) => not(and(a.desugar(), not(b.desugar()))),
            Formula::Iff(a, b) => {
                let (da, db) = (a.desugar(), b.desugar());
                and(
                    not(and(da.clone(), not(db.clone()))),
                    not(and(db, not(da))),
                )
            }
            Formula::Forall(v, f) => not(exists(v, not(f.desugar()))),
            Formula::Exists(v, f) => exists(v, f.desugar()),
        }
    }

    /// Free set variables, in first-occurrence order.
    pub fn free_set_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk_vars(&mut Vec::new(), &mut |name, bound, is_class| {
            if !is_class && !bound.iter().any(|b| b == name) && !out.iter().any(|o| o == name) {
                out.push(name.to_string());
            }
        });
        out
    }

    /// Free class variables, in first-occurrence order.
    pub fn class_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk_vars(&mut Vec::new(), &mut |name, _bound, is_class| {
            if is_class && !out.iter().any(|o| o == name) {
                out.push(name.to_string());
            }
        });
        out
    }

    fn walk_vars(&self, bound: &mut Vec<String>, visit: &mut impl FnMut(&str, &[String], bool)) {
        let mut term = |t: &Term, bound: &Vec<String>| match t {
            Term::SetVar(n) => visit(n, bound, false),
            Term::ClassVar(n) => visit(n, bound, true),
        };
        match self {
            Formula::Member(a, b) | Formula::Equal(a, b) => {
                term(a, bound);
                term(b, bound);
            }
            Formula::Not(f) => f.walk_vars(bound, visit),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.walk_vars(bound, visit);
                b.walk_vars(bound, visit);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v.clone());
                f.walk_vars(bound, visit);
                bound.pop();
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(..) | Formula::Forall(..) | Formula::Exists(..) => 4,
            Formula::Member(..) | Formula::Equal(..) => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let me = self.precedence();
        let parens = me < min;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Formula::Member(a, b) => write!(f, "{a} in {b}")?,
            Formula::Equal(a, b) => write!(f, "{a} = {b}")?,
            Formula::Not(inner) => {
                write!(f, "not ")?;
                inner.fmt_prec(f, 4)?;
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, " and ")?;
                b.fmt_prec(f, 4)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " or ")?;
                b.fmt_prec(f, 3)?;
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 1)?; // right associative
            }
            Formula::Iff(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " <-> ")?;
                b.fmt_prec(f, 1)?;
            }
            Formula::Forall(v, inner) => {
                write!(f, "forall {v} (")?;
                inner.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
            Formula::Exists(v, inner) => {
                write!(f, "exists {v} (")?;
                inner.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Display for ClassTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{ {} | {} }}", self.var, self.body)
    }
}
