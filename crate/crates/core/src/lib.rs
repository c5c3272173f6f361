//! Exact machinery for natural density of binary event streams.
//!
//! The crate is organized around one question: given a total 0/1 stream,
//! what can be said about the limiting frequency of 1s, using exact
//! rational arithmetic only and never trusting a limit that has no
//! explicit rate?
//!
//! * [`rational`] - arbitrary-precision fractions (the only scalar type).
//! * [`real`] - reals as rational approximant sequences with an explicit
//!   regularity bound; equality is only semi-refutable and every test here
//!   carries a budget.
//! * [`event`] - potential events: total 0/1 streams with memoized prefix
//!   counts and the pointwise Boolean operations.
//! * [`regular`] - eventually periodic events, their decidable algebra and
//!   closed-form densities.
//! * [`actual`] - events paired with a modulus that pins down how fast the
//!   running frequency settles; witness-carrying constructors keep the
//!   modulus exact through complements, disjoint unions and subevents.
//! * [`omniscience`] - what the engine can and cannot decide about "does a
//!   1 ever occur"; total deciders for the periodic fragment, budgeted
//!   searches elsewhere, and an oscillating counterexample stream whose
//!   frequency never settles.
//! * [`structure`] - the probability-structure contract (carrier algebra,
//!   certified subfamilies, probability map), an audit harness for its
//!   laws, and three instances: the density structure, finite weighted
//!   point spaces, and finite fuzzy spaces.
//! * [`dsl`] - a tiny expression language for building events from the
//!   command line, with an elaborator that keeps track of which results
//!   stay in the decidable periodic fragment.

pub mod actual;
pub mod dsl;
pub mod event;
pub mod omniscience;
pub mod rational;
pub mod real;
pub mod regular;
pub mod structure;
pub mod verdict;

pub use actual::{ActualEvent, ActualEventError, CheckBudget, Modulus};
pub use dsl::{elaborate, parse, Elaborated, EventExpr, ParseError};
pub use event::PotentialEvent;
pub use omniscience::{
    density_lpo_regular, lpo_regular, oscillation_report, oscillator, witness_from_separation,
    witness_search, LpoVerdict, OscillationReport,
};
pub use rational::{rat, Rational};
pub use real::{BishopReal, Separation};
pub use regular::{finite_support_actual, period_actual, RegularEvent, RegularEventError};
pub use structure::{
    audit, AuditReport, DensityElem, DensityStructure, FiniteFuzzy, FiniteFuzzySpace,
    FiniteKolmogorov, ProbValue, ProbabilityStructure, Rule, StructureError, Subset,
};
pub use verdict::Verdict;
