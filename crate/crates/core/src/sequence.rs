//! Finitely presented ω-sequences of terms and their normal form.
//!
//! A [`TermSequence`] is a finite prefix followed by nothing, by infinitely
//! many singletons, or by one term repeated forever. It denotes the
//! concatenation of all its elements.
//!
//! Normalization runs a streaming machine over the elements. Each incoming
//! term is normalized and split into its concatenation parts, then fed part
//! by part:
//!
//! 1. a finite part after a finite block is merged into that block;
//! 2. a trailing finite block followed by an infinite run of finite terms
//!    turns into the all-ones tail;
//! 3. a shuffle `S` arriving after `S ^ τ` (τ an argument of `S`) deletes
//!    `τ` and is absorbed;
//! 4. a shuffle `S` arriving directly after `S` is absorbed;
//! 5. anything else is emitted.
//!
//! Output elements are therefore blocks: single shuffles or maximal finite
//! runs.

use std::fmt;

use thiserror::Error;

use crate::normalize::{is_normal_form, normal_form};
use crate::syntax::{ParseError, Parser};
use crate::term::Term;

/// How many copies of a repeated tail are unrolled while looking for a
/// steady state.
pub const MAX_UNROLL: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tail {
    /// The sequence ends after the prefix.
    Finite,
    /// Infinitely many singletons follow.
    Ones,
    /// The term repeats forever.
    Repeat(Term),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermSequence {
    pub prefix: Vec<Term>,
    pub tail: Tail,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("repeated tail {tail} did not settle within {unrolled} unrollings")]
    UnsupportedTail { tail: String, unrolled: usize },
}

/// Which streaming case handled a part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamCase {
    MergeFinite,
    OnesTail,
    CollapseWindow,
    CollapseAdjacent,
    Emit,
}

impl TermSequence {
    pub fn finite(prefix: Vec<Term>) -> Self {
        TermSequence {
            prefix,
            tail: Tail::Finite,
        }
    }

    /// Sum of element complexities plus the length; `None` for infinite
    /// sequences.
    pub fn complexity(&self) -> Option<u64> {
        match self.tail {
            Tail::Finite => Some(
                self.prefix.len() as u64 + self.prefix.iter().map(Term::complexity).sum::<u64>(),
            ),
            _ => None,
        }
    }

    /// Concatenation of the prefix, if non-empty.
    pub fn prefix_concat(&self) -> Option<Term> {
        (!self.prefix.is_empty()).then(|| Term::concat(self.prefix.clone()))
    }
}

/// The streaming machine. One instance per stream.
#[derive(Debug, Clone, Default)]
pub struct StreamNormalizer {
    out: Vec<Term>,
    low_water: usize,
    cases: Vec<StreamCase>,
}

impl StreamNormalizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn blocks(&self) -> &[Term] {
        &self.out
    }

    pub fn cases(&self) -> &[StreamCase] {
        &self.cases
    }

    /// Feeds one input term.
    pub fn push(&mut self, t: &Term) {
        let nf = normal_form(t);
        for part in nf.atoms() {
            self.push_part(part);
        }
    }

    fn push_part(&mut self, part: &Term) {
        let Some(args) = part.as_shuffle() else {
            match self.out.last_mut() {
                Some(last) if last.is_finite() => {
                    *last = Term::concat(vec![last.clone(), part.clone()]);
                    self.low_water = self.low_water.min(self.out.len() - 1);
                    self.cases.push(StreamCase::MergeFinite);
                }
                _ => {
                    self.out.push(part.clone());
                    self.cases.push(StreamCase::Emit);
                }
            }
            return;
        };
        // a farther occurrence would put `part` itself inside the middle
        if let Some(i) = self.out.iter().rposition(|b| b == part) {
            let mid = &self.out[i + 1..];
            if mid.is_empty() {
                self.cases.push(StreamCase::CollapseAdjacent);
                return;
            }
            if args.binary_search(&Term::concat(mid.to_vec())).is_ok() {
                self.out.truncate(i + 1);
                self.low_water = self.low_water.min(i + 1);
                self.cases.push(StreamCase::CollapseWindow);
                return;
            }
        }
        self.out.push(part.clone());
        self.cases.push(StreamCase::Emit);
    }

    /// Ends the stream with infinitely many singletons.
    fn finish_ones(mut self) -> (TermSequence, Vec<StreamCase>) {
        if self.out.last().is_some_and(Term::is_finite) {
            self.out.pop();
        }
        self.cases.push(StreamCase::OnesTail);
        (
            TermSequence {
                prefix: self.out,
                tail: Tail::Ones,
            },
            self.cases,
        )
    }

    fn feed_copy(&mut self, copy: &Term) -> (Vec<Term>, usize) {
        self.low_water = self.out.len();
        for part in copy.atoms() {
            self.push_part(part);
        }
        (self.out.clone(), self.low_water)
    }

    fn finish_repeat(
        mut self,
        t: &Term,
        max_unroll: usize,
    ) -> Result<(TermSequence, Vec<StreamCase>), SequenceError> {
        let body = normal_form(t);
        if body.is_finite() {
            return Ok(self.finish_ones());
        }
        // states[c], lows[c]: blocks after c copies and the lowest index
        // touched while feeding copy c
        let mut states = vec![self.out.clone()];
        let mut lows = vec![self.out.len()];
        for c in 1..=max_unroll {
            let (state, low) = self.feed_copy(&body);
            states.push(state);
            lows.push(low);
            if c < 2 {
                continue;
            }
            let same_output = states[c][lows[c]..] == states[c - 1][lows[c - 1]..];
            let same_input =
                lows[c] >= lows[c - 1] && states[c - 1][lows[c]..] == states[c - 2][lows[c - 1]..];
            if same_output && same_input {
                let prefix = states[c - 2][..lows[c - 1]].to_vec();
                let period = states[c - 1][lows[c - 1]..lows[c]].to_vec();
                return Ok((canonical_tail(prefix, period), self.cases));
            }
        }
        Err(SequenceError::UnsupportedTail {
            tail: t.to_string(),
            unrolled: max_unroll,
        })
    }
}

/// Builds `prefix ++ period^ω` with the shortest period and the shortest
/// prefix.
fn canonical_tail(mut prefix: Vec<Term>, mut period: Vec<Term>) -> TermSequence {
    if period.is_empty() {
        return TermSequence::finite(prefix);
    }
    let n = period.len();
    if let Some(p) =
        (1..=n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| period[i] == period[i - p]))
    {
        period.truncate(p);
    }
    while prefix.last().is_some_and(|b| Some(b) == period.last()) {
        prefix.pop();
        period.rotate_right(1);
    }
    TermSequence {
        prefix,
        tail: Tail::Repeat(Term::concat(period)),
    }
}

/// Rewrites a sequence to its normal form.
pub fn normalize_sequence(s: &TermSequence) -> Result<TermSequence, SequenceError> {
    normalize_sequence_traced(s).map(|(seq, _)| seq)
}

/// Like [`normalize_sequence`], also reporting which case handled each
/// part.
pub fn normalize_sequence_traced(
    s: &TermSequence,
) -> Result<(TermSequence, Vec<StreamCase>), SequenceError> {
    normalize_sequence_unrolling(s, MAX_UNROLL)
}

/// Like [`normalize_sequence_traced`] with an explicit limit on how many
/// copies of a repeated tail are unrolled.
pub fn normalize_sequence_unrolling(
    s: &TermSequence,
    max_unroll: usize,
) -> Result<(TermSequence, Vec<StreamCase>), SequenceError> {
    let mut m = StreamNormalizer::new();
    for t in &s.prefix {
        m.push(t);
    }
    match &s.tail {
        Tail::Finite => Ok((TermSequence::finite(m.out), m.cases)),
        Tail::Ones => Ok(m.finish_ones()),
        Tail::Repeat(t) => m.finish_repeat(t, max_unroll),
    }
}

/// Splits a term into blocks: shuffles and maximal finite runs.
pub fn blocks(t: &Term) -> Vec<Term> {
    let mut m = StreamNormalizer::new();
    for part in t.atoms() {
        match m.out.last_mut() {
            Some(last) if last.is_finite() && part.is_finite() => {
                *last = Term::concat(vec![last.clone(), part.clone()]);
            }
            _ => m.out.push(part.clone()),
        }
    }
    m.out
}

fn is_block(t: &Term) -> bool {
    t.is_finite() || t.as_shuffle().is_some()
}

/// Whether `s` is already in normal form: normal-form blocks, no collapsible
/// window anywhere (including across repetitions of the tail), no two
/// adjacent finite blocks, and a canonical tail.
pub fn is_normal_form_sequence(s: &TermSequence) -> bool {
    if !s.prefix.iter().all(|t| is_block(t) && is_normal_form(t)) {
        return false;
    }
    let mut expanded = s.prefix.clone();
    match &s.tail {
        Tail::Finite => {}
        Tail::Ones => {
            if s.prefix.last().is_some_and(Term::is_finite) {
                return false;
            }
        }
        Tail::Repeat(t) => {
            if t.is_finite() || !is_normal_form(t) {
                return false;
            }
            let period = blocks(t);
            if canonical_tail(s.prefix.clone(), period.clone()) != *s {
                return false;
            }
            for _ in 0..3 {
                expanded.extend(period.iter().cloned());
            }
        }
    }
    for (j, b) in expanded.iter().enumerate() {
        if j > 0 && b.is_finite() && expanded[j - 1].is_finite() {
            return false;
        }
        let Some(args) = b.as_shuffle() else { continue };
        if let Some(i) = expanded[..j].iter().rposition(|x| x == b) {
            let mid = &expanded[i + 1..j];
            if mid.is_empty() || args.binary_search(&Term::concat(mid.to_vec())).is_ok() {
                return false;
            }
        }
    }
    true
}

/// Parses `[ t0; t1; ...; tk ]`, where the last element may be `ones` or
/// `repeat <term>`.
pub fn parse_sequence(text: &str) -> Result<TermSequence, ParseError> {
    let mut p = Parser::new(text);
    if !p.eat(b'[') {
        return Err(p.unexpected("'['"));
    }
    let mut prefix = Vec::new();
    let mut tail = Tail::Finite;
    if !p.eat(b']') {
        loop {
            if p.eat_keyword("ones") {
                tail = Tail::Ones;
            } else if p.eat_keyword("repeat") {
                tail = Tail::Repeat(p.term()?);
            } else {
                prefix.push(p.term()?);
            }
            if tail != Tail::Finite {
                if !p.eat(b']') {
                    return Err(p.unexpected("']' after the tail"));
                }
                break;
            }
            if p.eat(b']') {
                break;
            }
            if !p.eat(b';') {
                return Err(p.unexpected("';' or ']'"));
            }
        }
    }
    p.expect_end()?;
    Ok(TermSequence { prefix, tail })
}

impl fmt::Display for TermSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self.prefix.iter().map(Term::to_string).collect();
        match &self.tail {
            Tail::Finite => {}
            Tail::Ones => items.push("ones".into()),
            Tail::Repeat(t) => items.push(format!("repeat {t}")),
        }
        write!(f, "[{}]", items.join("; "))
    }
}

impl std::str::FromStr for TermSequence {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_sequence(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> TermSequence {
        s.parse().unwrap()
    }

    fn norm(s: &str) -> String {
        normalize_sequence(&seq(s)).unwrap().to_string()
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(seq("[1; 1; sh(1)]").prefix.len(), 3);
        assert_eq!(seq("[ones]").tail, Tail::Ones);
        assert_eq!(seq("[sh(1) ; repeat 2]").to_string(), "[sh(1); repeat 2]");
        assert_eq!(seq("[]"), TermSequence::finite(vec![]));
        assert!(parse_sequence("[1; ones; 1]").is_err());
        assert!(parse_sequence("[1;]").is_err());
        assert!(parse_sequence("1; 1").is_err());
        assert!(parse_sequence("[1] x").is_err());
    }

    #[test]
    fn normal_form_predicate_examples() {
        assert!(is_normal_form_sequence(&seq("[1^1; sh(1)]")));
        assert!(!is_normal_form_sequence(&seq("[1; 1]")));
        assert!(is_normal_form_sequence(&seq("[ones]")));
        assert!(!is_normal_form_sequence(&seq("[2; ones]")));
        assert!(!is_normal_form_sequence(&seq("[sh(1); sh(1)]")));
        assert!(!is_normal_form_sequence(&seq("[1^sh(1); sh(1)]")));
        assert!(is_normal_form_sequence(&seq("[1; repeat sh(1)^2]")));
        assert!(!is_normal_form_sequence(&seq("[sh(1); repeat 2^sh(1)]")));
        assert!(!is_normal_form_sequence(&seq("[sh(1); repeat sh(1)]")));
    }

    #[test]
    fn streaming_examples() {
        assert_eq!(norm("[1; 1; sh(1)]"), "[2; sh(1)]");
        assert_eq!(norm("[sh(1); 1; sh(1)]"), "[sh(1)]");
        assert_eq!(norm("[repeat 1]"), "[ones]");
        assert_eq!(norm("[sh(1); repeat sh(1)]"), "[sh(1)]");
    }

    #[test]
    fn case_traces() {
        let cases = |s: &str| normalize_sequence_traced(&seq(s)).unwrap().1;
        assert_eq!(
            cases("[1; 1; sh(1)]"),
            [StreamCase::Emit, StreamCase::MergeFinite, StreamCase::Emit]
        );
        assert!(cases("[repeat 1]").contains(&StreamCase::OnesTail));
        assert!(cases("[sh(1); repeat sh(1)]")[1..]
            .iter()
            .all(|c| *c == StreamCase::CollapseAdjacent));
        assert!(cases("[sh(1); 1; sh(1)]").contains(&StreamCase::CollapseWindow));
    }

    #[test]
    fn elements_are_split_into_blocks() {
        assert_eq!(norm("[1^sh(1); sh(1)]"), "[1; sh(1)]");
        assert_eq!(norm("[sh(1)^2; 1]"), "[sh(1); 3]");
    }

    #[test]
    fn ones_tails() {
        assert_eq!(norm("[2; ones]"), "[ones]");
        assert_eq!(norm("[sh(1); 1; 1; ones]"), "[sh(1); ones]");
        assert_eq!(norm("[sh(1); repeat 3]"), "[sh(1); ones]");
        assert_eq!(norm("[]"), "[]");
    }

    #[test]
    fn repeated_tails() {
        // each (Q ^ 1) copy is absorbed by the previous Q
        assert_eq!(norm("[repeat sh(1)^1]"), "[sh(1)]");
        assert_eq!(norm("[repeat 1^sh(1)]"), "[1; sh(1)]");
        // 1 + (Q + 2)^ω
        assert_eq!(norm("[repeat 1^sh(1)^1]"), "[1; repeat sh(1)^2]");
        assert_eq!(norm("[repeat sh(1)^2]"), "[repeat sh(1)^2]");
        assert_eq!(norm("[sh(1)^2; repeat sh(1)^2]"), "[repeat sh(1)^2]");
        assert_eq!(norm("[repeat sh(1)^2^sh(1)^2]"), "[repeat sh(1)^2]");
        assert_eq!(norm("[sh(1,2); repeat 1^sh(1,2)]"), "[sh(1, 2)]");
    }

    #[test]
    fn outputs_are_normal() {
        for s in [
            "[1; 1; sh(1)]",
            "[repeat 1^sh(1)^1]",
            "[sh(2); 1; sh(2); repeat sh(1)]",
            "[1; sh(1,2); 2; sh(1, 2); 3]",
        ] {
            let out = normalize_sequence(&seq(s)).unwrap();
            assert!(is_normal_form_sequence(&out), "{s} -> {out}");
            assert_eq!(normalize_sequence(&out).unwrap(), out);
        }
    }
}
