//! Finite verification laboratory for the logic of set-theoretic paradoxes.
//!
//! The crate decides set-vs-paradoxical status of definable classes over
//! finite membership structures, runs rule-system fixed-point constructions,
//! and builds truncated cumulative-cardinal hierarchies. Every decision is
//! backed by a certificate (a representing element, or a productive-choice
//! witness map) that can be re-validated with membership lookups alone.
//!
//! Module map:
//!
//! * [`hf`] — canonical store of hereditarily finite sets and hypersets
//!   (membership graphs quotiented by bisimulation).
//! * [`model`] — finite ∈-structures and classes over them; the
//!   representation test that separates sets from paradoxical classes.
//! * [`formula`] — parser, evaluator and enumerator for the two-sorted
//!   ∈-language and class terms `{ x | φ }`.
//! * [`productivity`] — the productive-choice decision procedure, the
//!   exhaustive principle sweeps, the classic paradoxical class catalog,
//!   and the limitation-of-size checks.
//! * [`rules`] — systems of rules, determinism/globality analysis, induced
//!   monotone operators, least/greatest fixed points.
//! * [`hierarchy`] — truncated cumulative-cardinal stages, domination,
//!   diagonal witnesses, and axiom-closure reports.
//! * [`report`] — the shared line-oriented report format.

pub mod formula;
pub mod hf;
pub mod hierarchy;
pub mod model;
pub mod productivity;
pub mod report;
pub mod rules;
