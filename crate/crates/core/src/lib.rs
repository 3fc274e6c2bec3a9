//! Canonical forms for terms built from singletons, concatenation and
//! `Q_n`-shuffles, which denote the countable linear orders that are
//! determined up to isomorphism by their first-order theory.
//!
//! * [`term`] and [`syntax`]: the AST, its metrics and concrete syntax.
//! * [`normalize`]: rewrite rules, the normal-form predicate, the normalizer
//!   and the isomorphism decision.
//! * [`sequence`]: finitely presented ω-sequences of terms and their
//!   streaming normalizer.
//! * [`oracle`]: independent checks (bounded rewrite closure,
//!   Ehrenfeucht–Fraïssé games) and random term generation.

pub mod json;
pub mod normalize;
pub mod oracle;
pub mod sequence;
pub mod syntax;
pub mod term;

pub use normalize::{
    equivalent, is_normal_form, normal_form, normalize, Normalized, Redex, RewriteStep, Rule,
};
pub use sequence::{
    is_normal_form_sequence, normalize_sequence, parse_sequence, SequenceError, StreamCase, Tail,
    TermSequence,
};
pub use syntax::{parse, render, ParseError};
pub use term::{canonical_cmp, Kind, Term, TermMetrics};
