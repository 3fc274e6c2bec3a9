//! Lazy addresses of points in the order denoted by a term.
//!
//! A point is named by descending through the term: a concatenation picks a
//! part, a shuffle picks a point of the dense coloured order (an exact
//! rational tag plus its colour, the argument index) and then a point inside
//! that copy of the argument. Comparing addresses level by level realizes
//! the order of the denotation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;

use crate::term::{Kind, Term};

pub type Tag = Ratio<i64>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum PointAddress {
    /// The point of a singleton.
    Point,
    Part(usize, Box<PointAddress>),
    Copy {
        tag: Tag,
        colour: usize,
        inner: Box<PointAddress>,
    },
}

impl PointAddress {
    pub fn part(index: usize, inner: PointAddress) -> Self {
        PointAddress::Part(index, Box::new(inner))
    }

    pub fn copy(tag: Tag, colour: usize, inner: PointAddress) -> Self {
        PointAddress::Copy {
            tag,
            colour,
            inner: Box::new(inner),
        }
    }

    /// Whether this address names a point of `term`'s denotation.
    pub fn is_valid_for(&self, term: &Term) -> bool {
        match (self, term.kind()) {
            (PointAddress::Point, Kind::Singleton) => true,
            (PointAddress::Part(i, inner), Kind::Concat(parts)) => {
                parts.get(*i).is_some_and(|p| inner.is_valid_for(p))
            }
            (PointAddress::Copy { colour, inner, .. }, Kind::Shuffle(args)) => {
                args.get(*colour).is_some_and(|a| inner.is_valid_for(a))
            }
            _ => false,
        }
    }
}

impl Ord for PointAddress {
    fn cmp(&self, other: &Self) -> Ordering {
        use PointAddress::*;
        match (self, other) {
            (Point, Point) => Ordering::Equal,
            (Part(i, a), Part(j, b)) => i.cmp(j).then_with(|| a.cmp(b)),
            (
                Copy {
                    tag: p,
                    colour: c,
                    inner: a,
                },
                Copy {
                    tag: q,
                    colour: d,
                    inner: b,
                },
            ) => p.cmp(q).then_with(|| c.cmp(d)).then_with(|| a.cmp(b)),
            // addresses into the same term always agree in shape; this arm
            // only keeps the order total
            _ => self.shape_rank().cmp(&other.shape_rank()),
        }
    }
}

impl PartialOrd for PointAddress {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PointAddress {
    fn shape_rank(&self) -> u8 {
        match self {
            PointAddress::Point => 0,
            PointAddress::Part(..) => 1,
            PointAddress::Copy { .. } => 2,
        }
    }
}

impl fmt::Debug for PointAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointAddress::Point => write!(f, "•"),
            PointAddress::Part(i, inner) => write!(f, "#{i}.{inner:?}"),
            PointAddress::Copy { tag, colour, inner } => {
                write!(f, "@{tag}c{colour}.{inner:?}")
            }
        }
    }
}

/// Representatives of every point of `term`, up to automorphisms fixing
/// `picks` (which must all be valid for `term`).
///
/// Inside a shuffle this descends into each copy that already holds a pick,
/// and additionally offers a fresh tag in every gap between the existing
/// tags, once per distinct argument, descending into a pick-free copy.
pub fn representatives(term: &Term, picks: &[&PointAddress]) -> Vec<PointAddress> {
    match term.kind() {
        Kind::Singleton => vec![PointAddress::Point],
        Kind::Concat(parts) => {
            let mut out = Vec::new();
            for (j, part) in parts.iter().enumerate() {
                let sub: Vec<&PointAddress> = picks
                    .iter()
                    .filter_map(|p| match p {
                        PointAddress::Part(i, inner) if *i == j => Some(&**inner),
                        _ => None,
                    })
                    .collect();
                out.extend(
                    representatives(part, &sub)
                        .into_iter()
                        .map(|r| PointAddress::part(j, r)),
                );
            }
            out
        }
        Kind::Shuffle(args) => {
            let mut copies: BTreeMap<Tag, (usize, Vec<&PointAddress>)> = BTreeMap::new();
            for p in picks {
                if let PointAddress::Copy { tag, colour, inner } = p {
                    copies
                        .entry(*tag)
                        .or_insert((*colour, Vec::new()))
                        .1
                        .push(inner);
                }
            }
            let mut out = Vec::new();
            for (tag, (colour, sub)) in &copies {
                out.extend(
                    representatives(&args[*colour], sub)
                        .into_iter()
                        .map(|r| PointAddress::copy(*tag, *colour, r)),
                );
            }
            let tags: Vec<Tag> = copies.keys().copied().collect();
            let mut fresh = Vec::new();
            match (tags.first(), tags.last()) {
                (Some(lo), Some(hi)) => {
                    fresh.push(lo - 1);
                    for w in tags.windows(2) {
                        fresh.push((w[0] + w[1]) / 2);
                    }
                    fresh.push(hi + 1);
                }
                _ => fresh.push(Tag::from_integer(0)),
            }
            for tag in fresh {
                for (colour, arg) in args.iter().enumerate() {
                    // equal arguments give automorphic fresh copies
                    if colour > 0 && args[colour - 1] == *arg {
                        continue;
                    }
                    out.extend(
                        representatives(arg, &[])
                            .into_iter()
                            .map(|r| PointAddress::copy(tag, colour, r)),
                    );
                }
            }
            out
        }
    }
}

/// Rewrites tags to their rank within each shuffle copy context, so that
/// configurations related by an automorphism of the tag orders coincide.
pub fn canonicalize(term: &Term, picks: &[PointAddress]) -> Vec<PointAddress> {
    let refs: Vec<&PointAddress> = picks.iter().collect();
    canon(term, &refs)
}

fn canon(term: &Term, picks: &[&PointAddress]) -> Vec<PointAddress> {
    match term.kind() {
        Kind::Singleton => vec![PointAddress::Point; picks.len()],
        Kind::Concat(parts) => {
            let mut out: Vec<Option<PointAddress>> = vec![None; picks.len()];
            for (j, part) in parts.iter().enumerate() {
                let idx: Vec<usize> = (0..picks.len())
                    .filter(|&k| matches!(picks[k], PointAddress::Part(i, _) if *i == j))
                    .collect();
                if idx.is_empty() {
                    continue;
                }
                let sub: Vec<&PointAddress> = idx
                    .iter()
                    .map(|&k| match picks[k] {
                        PointAddress::Part(_, inner) => &**inner,
                        _ => unreachable!(),
                    })
                    .collect();
                for (k, c) in idx.into_iter().zip(canon(part, &sub)) {
                    out[k] = Some(PointAddress::part(j, c));
                }
            }
            out.into_iter()
                .map(|a| a.expect("address shape matches term"))
                .collect()
        }
        Kind::Shuffle(args) => {
            let mut tags: Vec<Tag> = picks
                .iter()
                .map(|p| match p {
                    PointAddress::Copy { tag, .. } => *tag,
                    _ => panic!("address shape does not match shuffle"),
                })
                .collect();
            tags.sort();
            tags.dedup();
            let mut out: Vec<Option<PointAddress>> = vec![None; picks.len()];
            for (rank, tag) in tags.iter().enumerate() {
                let idx: Vec<usize> = (0..picks.len())
                    .filter(|&k| matches!(picks[k], PointAddress::Copy { tag: t, .. } if t == tag))
                    .collect();
                let PointAddress::Copy { colour, .. } = picks[idx[0]] else {
                    unreachable!()
                };
                let sub: Vec<&PointAddress> = idx
                    .iter()
                    .map(|&k| match picks[k] {
                        PointAddress::Copy { inner, .. } => &**inner,
                        _ => unreachable!(),
                    })
                    .collect();
                let new_tag = Tag::from_integer(rank as i64);
                for (k, c) in idx.into_iter().zip(canon(&args[*colour], &sub)) {
                    out[k] = Some(PointAddress::copy(new_tag, *colour, c));
                }
            }
            out.into_iter()
                .map(|a| a.expect("address shape matches term"))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn tag(n: i64) -> Tag {
        Tag::from_integer(n)
    }

    #[test]
    fn representative_counts() {
        assert_eq!(representatives(&t("sh(1)"), &[]).len(), 1);
        let pick = PointAddress::copy(tag(0), 0, PointAddress::Point);
        let reps = representatives(&t("sh(1)"), &[&pick]);
        assert_eq!(reps.len(), 3);
        assert!(reps.contains(&pick));
        assert_eq!(representatives(&t("1^1"), &[]).len(), 2);
    }

    #[test]
    fn fresh_tags_fall_in_gaps() {
        let a = PointAddress::copy(tag(0), 0, PointAddress::Point);
        let b = PointAddress::copy(tag(1), 0, PointAddress::Point);
        let reps = representatives(&t("sh(1)"), &[&a, &b]);
        let tags: Vec<Tag> = reps
            .iter()
            .map(|r| match r {
                PointAddress::Copy { tag, .. } => *tag,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(tags, vec![tag(0), tag(1), tag(-1), Tag::new(1, 2), tag(2)]);
    }

    #[test]
    fn duplicate_arguments_share_fresh_copies() {
        assert_eq!(representatives(&t("sh(1,1)"), &[]).len(), 1);
        assert_eq!(representatives(&t("sh(1,2)"), &[]).len(), 3);
    }

    #[test]
    fn order_follows_structure() {
        let left = PointAddress::part(0, PointAddress::copy(tag(5), 0, PointAddress::Point));
        let right = PointAddress::part(1, PointAddress::Point);
        assert!(left < right);
        let lo = PointAddress::copy(
            Tag::new(1, 3),
            1,
            PointAddress::part(1, PointAddress::Point),
        );
        let hi = PointAddress::copy(Tag::new(1, 2), 0, PointAddress::Point);
        assert!(lo < hi);
    }

    #[test]
    fn canonicalize_ranks_tags() {
        let term = t("sh(1, 2)");
        let picks = vec![
            PointAddress::copy(
                Tag::new(7, 2),
                1,
                PointAddress::part(1, PointAddress::Point),
            ),
            PointAddress::copy(tag(-3), 0, PointAddress::Point),
            PointAddress::copy(
                Tag::new(7, 2),
                1,
                PointAddress::part(0, PointAddress::Point),
            ),
        ];
        let c = canonicalize(&term, &picks);
        assert_eq!(
            c,
            vec![
                PointAddress::copy(tag(1), 1, PointAddress::part(1, PointAddress::Point)),
                PointAddress::copy(tag(0), 0, PointAddress::Point),
                PointAddress::copy(tag(1), 1, PointAddress::part(0, PointAddress::Point)),
            ]
        );
        for (a, b) in picks.iter().zip(&c) {
            for (x, y) in picks.iter().zip(&c) {
                assert_eq!(a.cmp(x), b.cmp(y));
            }
        }
    }
}
