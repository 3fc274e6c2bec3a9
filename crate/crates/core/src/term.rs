//! The term AST: singletons, flattened concatenations and shuffles.
//!
//! Terms are immutable and reference counted. Every constructor keeps two
//! representation invariants: a concatenation never has a concatenation as a
//! part, and shuffle arguments are kept sorted by the canonical term order, so
//! that structural equality already identifies shuffles that differ only by a
//! permutation of their arguments.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, LazyLock};

use crate::syntax;

/// A term denoting a countable linear order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Term(Arc<Node>);

#[derive(PartialEq, Eq, Hash)]
struct Node {
    kind: Kind,
    complexity: u64,
    depth: u32,
}

/// The shape of a term's root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Kind {
    Singleton,
    /// At least two parts, none of which is a concatenation.
    Concat(Vec<Term>),
    /// At least one argument, sorted by [`Term::cmp`]. Duplicates allowed.
    Shuffle(Vec<Term>),
}

/// Complexity, depth and finiteness of a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TermMetrics {
    pub complexity: u64,
    pub depth: u32,
    pub finite: bool,
}

static SINGLETON: LazyLock<Term> = LazyLock::new(|| {
    Term(Arc::new(Node {
        kind: Kind::Singleton,
        complexity: 0,
        depth: 0,
    }))
});

impl Term {
    pub fn singleton() -> Term {
        SINGLETON.clone()
    }

    /// The finite order with `n` points, `n >= 1`.
    pub fn finite(n: usize) -> Term {
        assert!(n >= 1, "a finite order needs at least one point");
        Term::concat(vec![Term::singleton(); n])
    }

    /// Concatenates `parts` left to right, splicing nested concatenations.
    ///
    /// A single part is returned unchanged. Panics on an empty list, since
    /// the empty order is not a term.
    pub fn concat(parts: Vec<Term>) -> Term {
        assert!(!parts.is_empty(), "concatenation of no terms");
        let mut flat = Vec::with_capacity(parts.len());
        for part in parts {
            match part.kind() {
                Kind::Concat(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(part),
            }
        }
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        let complexity = (flat.len() as u64 - 1) + flat.iter().map(Term::complexity).sum::<u64>();
        let depth = flat.iter().map(Term::depth).max().unwrap_or(0);
        Term(Arc::new(Node {
            kind: Kind::Concat(flat),
            complexity,
            depth,
        }))
    }

    /// Shuffles `args`. Panics on an empty list.
    pub fn shuffle(mut args: Vec<Term>) -> Term {
        assert!(!args.is_empty(), "shuffle of no terms");
        args.sort();
        let complexity = 1 + args.len() as u64 + args.iter().map(Term::complexity).sum::<u64>();
        let depth = 1 + args.iter().map(Term::depth).max().unwrap_or(0);
        Term(Arc::new(Node {
            kind: Kind::Shuffle(args),
            complexity,
            depth,
        }))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn is_singleton(&self) -> bool {
        matches!(self.kind(), Kind::Singleton)
    }

    pub fn as_concat(&self) -> Option<&[Term]> {
        match self.kind() {
            Kind::Concat(parts) => Some(parts),
            _ => None,
        }
    }

    pub fn as_shuffle(&self) -> Option<&[Term]> {
        match self.kind() {
            Kind::Shuffle(args) => Some(args),
            _ => None,
        }
    }

    /// Immediate subterms (parts or arguments); empty for a singleton.
    pub fn children(&self) -> &[Term] {
        match self.kind() {
            Kind::Singleton => &[],
            Kind::Concat(parts) => parts,
            Kind::Shuffle(args) => args,
        }
    }

    /// The concatenation parts of this term, or the term itself when it is
    /// not a concatenation.
    pub fn atoms(&self) -> &[Term] {
        match self.kind() {
            Kind::Concat(parts) => parts,
            _ => std::slice::from_ref(self),
        }
    }

    pub fn complexity(&self) -> u64 {
        self.0.complexity
    }

    pub fn depth(&self) -> u32 {
        self.0.depth
    }

    /// True iff the term contains no shuffle.
    pub fn is_finite(&self) -> bool {
        self.0.depth == 0
    }

    pub fn metrics(&self) -> TermMetrics {
        TermMetrics {
            complexity: self.complexity(),
            depth: self.depth(),
            finite: self.is_finite(),
        }
    }

    /// Number of points of a finite term.
    pub fn point_count(&self) -> Option<usize> {
        match self.kind() {
            Kind::Singleton => Some(1),
            Kind::Concat(parts) if self.is_finite() => Some(parts.len()),
            _ => None,
        }
    }

    /// Rebuilds this node with child `index` replaced, re-establishing the
    /// flattening and sorting invariants.
    pub fn with_child(&self, index: usize, child: Term) -> Term {
        let mut children = self.children().to_vec();
        children[index] = child;
        match self.kind() {
            Kind::Singleton => panic!("singleton has no children"),
            Kind::Concat(_) => Term::concat(children),
            Kind::Shuffle(_) => Term::shuffle(children),
        }
    }

    /// The subterm reached by following `path` (child indices).
    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        let mut t = self;
        for &i in path {
            t = t.children().get(i)?;
        }
        Some(t)
    }

    /// Replaces the subterm at `path` and rebuilds every ancestor.
    pub fn replace_at(&self, path: &[usize], replacement: Term) -> Term {
        match path.split_first() {
            None => replacement,
            Some((&i, rest)) => {
                let child = self.children()[i].replace_at(rest, replacement);
                self.with_child(i, child)
            }
        }
    }

    /// Visits every subterm with its path, parents before children.
    pub fn for_each_subterm(&self, f: &mut impl FnMut(&[usize], &Term)) {
        fn go(t: &Term, path: &mut Vec<usize>, f: &mut impl FnMut(&[usize], &Term)) {
            f(path, t);
            for (i, c) in t.children().iter().enumerate() {
                path.push(i);
                go(c, path, f);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), f)
    }

    fn rank(&self) -> u8 {
        match self.kind() {
            Kind::Singleton => 0,
            Kind::Concat(_) => 1,
            Kind::Shuffle(_) => 2,
        }
    }
}

/// Canonical total order: complexity, then depth, then constructor
/// (singleton < concat < shuffle), then children lexicographically.
pub fn canonical_cmp(a: &Term, b: &Term) -> Ordering {
    a.cmp(b)
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.complexity()
            .cmp(&other.complexity())
            .then_with(|| self.depth().cmp(&other.depth()))
            .then_with(|| self.rank().cmp(&other.rank()))
            .then_with(|| self.children().cmp(other.children()))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&syntax::render(self))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({})", syntax::render(self))
    }
}

impl std::str::FromStr for Term {
    type Err = syntax::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        syntax::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(t("1").complexity(), 0);
        assert_eq!(t("1^1^1").complexity(), 2);
        assert_eq!(t("sh(1, 1^1)").complexity(), 4);
    }

    #[test]
    fn depth_examples() {
        assert_eq!(t("1^1").depth(), 0);
        assert_eq!(t("sh(1)").depth(), 1);
        assert_eq!(t("1 ^ sh(sh(1))").depth(), 2);
    }

    #[test]
    fn canonical_cmp_examples() {
        assert_eq!(canonical_cmp(&t("1"), &t("1^1")), Ordering::Less);
        assert_eq!(canonical_cmp(&t("sh(1)"), &t("sh(1)")), Ordering::Equal);
        assert_eq!(canonical_cmp(&t("1^1"), &t("sh(1)")), Ordering::Less);
    }

    #[test]
    fn concat_flattens_and_degrades() {
        let inner = Term::concat(vec![Term::singleton(), Term::singleton()]);
        let outer = Term::concat(vec![inner.clone(), Term::singleton()]);
        assert_eq!(outer.as_concat().unwrap().len(), 3);
        assert_eq!(Term::concat(vec![inner.clone()]), inner);
        assert_eq!(outer.complexity(), 2);
    }

    #[test]
    fn shuffle_args_sorted() {
        let a = Term::shuffle(vec![Term::finite(2), Term::singleton()]);
        let b = Term::shuffle(vec![Term::singleton(), Term::finite(2)]);
        assert_eq!(a, b);
        assert_eq!(a.as_shuffle().unwrap()[0], Term::singleton());
    }

    #[test]
    fn replace_at_resorts_parent() {
        let s = t("sh(1, sh(1))");
        // replace the singleton (index 0) by something larger than sh(1)
        let r = s.replace_at(&[0], t("sh(1,1)"));
        assert_eq!(r, t("sh(sh(1), sh(1,1))"));
        assert_eq!(r.as_shuffle().unwrap()[0], t("sh(1)"));
    }

    #[test]
    fn point_count() {
        assert_eq!(t("3").point_count(), Some(3));
        assert_eq!(t("1").point_count(), Some(1));
        assert_eq!(t("1^sh(1)").point_count(), None);
    }
}
