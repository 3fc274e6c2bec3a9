//! Complexity-decreasing rewrites and the term normalizer.
//!
//! Three isomorphisms drive normalization (argument permutation is absorbed
//! by the sorted representation):
//!
//! * **Dedup**: a shuffle with a repeated argument equals the shuffle with
//!   one copy removed.
//! * **Unnest**: `sh(A)` absorbs a surrounding shuffle whose arguments are
//!   all either members of `A` or "wrappers" `τ0 ^ sh(A) ^ τ1` with each of
//!   `τ0`, `τ1` absent or a member of `A`.
//! * **ConcatCollapse**: inside a concatenation, `S ^ τ ^ S` and `S ^ S`
//!   collapse to `S` when `S` is a shuffle and `τ` is one of its arguments.
//!
//! Every rewrite strictly lowers [`Term::complexity`], which bounds the
//! number of steps `normalize` can take.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::term::{Kind, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Dedup,
    Unnest,
    ConcatCollapse,
    /// Splicing of a nested concatenation. The term constructors flatten
    /// eagerly, so the normalizer never has to emit it.
    Flatten,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Dedup => "dedup",
            Rule::Unnest => "unnest",
            Rule::ConcatCollapse => "concat_collapse",
            Rule::Flatten => "flatten",
        })
    }
}

/// One applied rewrite. `path` locates `before` inside the whole term as it
/// stood just before the step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: Rule,
    pub path: Vec<usize>,
    pub before: Term,
    pub after: Term,
}

/// A rewrite available somewhere in a term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Redex {
    pub rule: Rule,
    pub path: Vec<usize>,
    pub after: Term,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub term: Term,
    pub steps: Vec<RewriteStep>,
}

fn contains(sorted: &[Term], t: &Term) -> bool {
    sorted.binary_search(t).is_ok()
}

/// Removes one copy of the smallest repeated argument.
pub fn try_dedup(s: &Term) -> Option<Term> {
    dedup_all(s).into_iter().next()
}

fn dedup_all(s: &Term) -> Vec<Term> {
    let Some(args) = s.as_shuffle() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for i in 1..args.len() {
        // args are sorted: duplicates are adjacent; report each value once
        if args[i] == args[i - 1] && (i < 2 || args[i - 1] != args[i - 2]) {
            let mut rest = args.to_vec();
            rest.remove(i);
            out.push(Term::shuffle(rest));
        }
    }
    out
}

/// Whether `u` is `inner` itself or `τ0 ^ inner ^ τ1` with each present `τ`
/// an argument of `inner`.
pub(crate) fn is_wrapper_of(u: &Term, inner: &Term) -> bool {
    if u == inner {
        return true;
    }
    let (Some(parts), Some(inner_args)) = (u.as_concat(), inner.as_shuffle()) else {
        return false;
    };
    parts.iter().enumerate().any(|(k, p)| {
        p == inner && segment_in(&parts[..k], inner_args) && segment_in(&parts[k + 1..], inner_args)
    })
}

/// True when `segment` is empty or concatenates to a member of `args`.
fn segment_in(segment: &[Term], args: &[Term]) -> bool {
    segment.is_empty() || contains(args, &Term::concat(segment.to_vec()))
}

/// Shuffles occurring in `u` that `u` wraps.
fn wrapped_shuffles(u: &Term) -> Vec<Term> {
    match u.kind() {
        Kind::Shuffle(_) => vec![u.clone()],
        Kind::Concat(parts) => parts
            .iter()
            .filter(|p| p.as_shuffle().is_some() && is_wrapper_of(u, p))
            .cloned()
            .collect(),
        Kind::Singleton => Vec::new(),
    }
}

/// Absorbs the outer shuffle into an inner one when every outer argument is
/// an inner argument or a wrapper of the inner shuffle.
pub fn try_unnest(s: &Term) -> Option<Term> {
    unnest_all(s).into_iter().next()
}

fn unnest_all(s: &Term) -> Vec<Term> {
    let Some(args) = s.as_shuffle() else {
        return Vec::new();
    };
    let mut candidates: Vec<Term> = args.iter().flat_map(wrapped_shuffles).collect();
    candidates.sort();
    candidates.dedup();
    candidates
        .into_iter()
        .filter(|inner| {
            let inner_args = inner.as_shuffle().unwrap();
            args.iter()
                .all(|a| contains(inner_args, a) || is_wrapper_of(a, inner))
        })
        .collect()
}

/// Collapses the leftmost window `S ^ S` or `S ^ τ ^ S` (τ an argument of
/// the shuffle `S`) to `S`.
pub fn try_concat_collapse(c: &Term) -> Option<Term> {
    collapse_all(c).into_iter().next()
}

fn collapse_all(c: &Term) -> Vec<Term> {
    let Some(parts) = c.as_concat() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (i, s) in parts.iter().enumerate() {
        let Some(args) = s.as_shuffle() else { continue };
        for j in i + 1..parts.len() {
            if &parts[j] == s && segment_in(&parts[i + 1..j], args) {
                let mut kept = parts[..=i].to_vec();
                kept.extend_from_slice(&parts[j + 1..]);
                out.push(Term::concat(kept));
            }
        }
    }
    out
}

/// Rewrites applicable at the root of `t`, in rule priority order. With
/// `all` false only the first (deterministic) choice is returned.
fn local_redexes(t: &Term, all: bool) -> Vec<(Rule, Term)> {
    let mut out = Vec::new();
    match t.kind() {
        Kind::Singleton => {}
        Kind::Shuffle(_) => {
            out.extend(dedup_all(t).into_iter().map(|r| (Rule::Dedup, r)));
            if !all && !out.is_empty() {
                return out;
            }
            out.extend(unnest_all(t).into_iter().map(|r| (Rule::Unnest, r)));
        }
        Kind::Concat(_) => {
            out.extend(
                collapse_all(t)
                    .into_iter()
                    .map(|r| (Rule::ConcatCollapse, r)),
            );
        }
    }
    if !all {
        out.truncate(1);
    }
    out
}

/// Every available rewrite in `t`, children before parents.
pub fn all_redexes(t: &Term) -> Vec<Redex> {
    let mut out = Vec::new();
    collect_redexes(t, &mut Vec::new(), &mut out, true);
    out
}

fn collect_redexes(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Redex>, all: bool) {
    for (i, c) in t.children().iter().enumerate() {
        path.push(i);
        collect_redexes(c, path, out, all);
        path.pop();
        if !all && !out.is_empty() {
            return;
        }
    }
    for (rule, after) in local_redexes(t, all) {
        out.push(Redex {
            rule,
            path: path.clone(),
            after,
        });
    }
}

/// The innermost, leftmost rewrite, if any.
pub fn first_redex(t: &Term) -> Option<Redex> {
    let mut out = Vec::new();
    collect_redexes(t, &mut Vec::new(), &mut out, false);
    out.into_iter().next()
}

/// Applies a redex found in `t` and records it as a step.
pub fn apply_redex(t: &Term, redex: &Redex) -> (Term, RewriteStep) {
    let before = t
        .subterm(&redex.path)
        .expect("redex path inside term")
        .clone();
    let step = RewriteStep {
        rule: redex.rule,
        path: redex.path.clone(),
        before,
        after: redex.after.clone(),
    };
    (t.replace_at(&redex.path, redex.after.clone()), step)
}

pub fn is_normal_form(t: &Term) -> bool {
    first_redex(t).is_none()
}

/// Rewrites `t` to its normal form, innermost-first, recording every step.
pub fn normalize(t: &Term) -> Normalized {
    normalize_with(t, |_| 0)
}

/// Normalizes with a caller-chosen rewrite order: `choose` receives every
/// available redex (children before parents) and returns the index to
/// apply. With `|_| 0` this is the innermost-leftmost strategy.
pub fn normalize_with(t: &Term, mut choose: impl FnMut(&[Redex]) -> usize) -> Normalized {
    let mut term = t.clone();
    let mut steps = Vec::new();
    loop {
        let redexes = all_redexes(&term);
        if redexes.is_empty() {
            return Normalized { term, steps };
        }
        let pick = choose(&redexes).min(redexes.len() - 1);
        let (next, step) = apply_redex(&term, &redexes[pick]);
        steps.push(step);
        term = next;
    }
}

/// The normal form alone.
pub fn normal_form(t: &Term) -> Term {
    let mut term = t.clone();
    while let Some(r) = first_redex(&term) {
        term = term.replace_at(&r.path, r.after);
    }
    term
}

/// Decides whether two terms denote isomorphic orders.
pub fn equivalent(a: &Term, b: &Term) -> bool {
    a == b || normal_form(a) == normal_form(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn dedup_examples() {
        assert_eq!(try_dedup(&t("sh(1,1)")), Some(t("sh(1)")));
        assert_eq!(try_dedup(&t("sh(1, 1^1)")), None);
        assert_eq!(try_dedup(&t("sh(1^1, 1^1, 1)")), Some(t("sh(1^1, 1)")));
        assert_eq!(try_dedup(&t("1^1")), None);
    }

    #[test]
    fn unnest_examples() {
        assert_eq!(try_unnest(&t("sh(1, 1 ^ sh(1) ^ 1)")), Some(t("sh(1)")));
        assert_eq!(
            try_unnest(&t("sh(1, 1 ^ sh(1, 1^1))")),
            Some(t("sh(1, 1^1)"))
        );
        assert_eq!(try_unnest(&t("sh(1^1, 1 ^ sh(1) ^ 1)")), None);
        assert_eq!(try_unnest(&t("sh(sh(1))")), Some(t("sh(1)")));
    }

    #[test]
    fn unnest_with_several_wrappers() {
        assert_eq!(try_unnest(&t("sh(sh(1), 1^sh(1))")), Some(t("sh(1)")));
        assert_eq!(try_unnest(&t("sh(sh(1)^1, 1^sh(1))")), Some(t("sh(1)")));
        // different inner shuffles do not combine
        assert_eq!(try_unnest(&t("sh(sh(1), sh(1, 2))")), None);
    }

    #[test]
    fn unnest_multi_part_tau() {
        // τ0 = 2 is an argument of the inner shuffle
        assert_eq!(try_unnest(&t("sh(1, 2^sh(1,2))")), Some(t("sh(1,2)")));
        assert_eq!(try_unnest(&t("sh(1, 3^sh(1,2))")), None);
    }

    #[test]
    fn collapse_examples() {
        assert_eq!(
            try_concat_collapse(&t("sh(1) ^ 1 ^ sh(1)")),
            Some(t("sh(1)"))
        );
        assert_eq!(try_concat_collapse(&t("sh(1) ^ sh(1)")), Some(t("sh(1)")));
        assert_eq!(try_concat_collapse(&t("sh(1) ^ 1^1 ^ sh(1)")), None);
        assert_eq!(
            try_concat_collapse(&t("1 ^ sh(1,2) ^ 2 ^ sh(1,2)")),
            Some(t("1 ^ sh(1,2)"))
        );
        assert_eq!(try_concat_collapse(&t("sh(1) ^ sh(1, 2)")), None);
    }

    #[test]
    fn normal_form_predicate() {
        assert!(is_normal_form(&t("1^1^1")));
        assert!(!is_normal_form(&t("sh(1,1)")));
        assert!(is_normal_form(&t("sh(1) ^ sh(1,1^1)")));
        assert!(!is_normal_form(&t("1 ^ sh(sh(1))")));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&t("sh(1,1)")).term, t("sh(1)"));
        let n = normalize(&t("sh(1) ^ 1 ^ sh(1) ^ sh(1)"));
        assert_eq!(n.term, t("sh(1)"));
        assert_eq!(n.steps.len(), 2);
        assert!(n.steps.iter().all(|s| s.rule == Rule::ConcatCollapse));
        let n = normalize(&t("1^1"));
        assert_eq!(n.term, t("2"));
        assert!(n.steps.is_empty());
        let n = normalize(&t("sh(1, 1 ^ sh(1,1) ^ 1)"));
        assert_eq!(n.term, t("sh(1)"));
        assert_eq!(
            n.steps.iter().map(|s| s.rule).collect::<Vec<_>>(),
            vec![Rule::Dedup, Rule::Unnest]
        );
    }

    #[test]
    fn step_paths_locate_before() {
        let start = t("1 ^ sh(1, sh(1,1))");
        let n = normalize(&start);
        let mut cur = start;
        for s in &n.steps {
            assert_eq!(cur.subterm(&s.path), Some(&s.before));
            assert!(s.after.complexity() < s.before.complexity());
            cur = cur.replace_at(&s.path, s.after.clone());
        }
        assert_eq!(cur, n.term);
        assert_eq!(n.term, t("1^sh(1)"));
    }

    #[test]
    fn equivalent_examples() {
        assert!(equivalent(&t("sh(1,1)"), &t("sh(1)")));
        assert!(equivalent(&t("sh(1, 1^1)"), &t("sh(1^1, 1)")));
        assert!(!equivalent(&t("1"), &t("sh(1)")));
    }
}
