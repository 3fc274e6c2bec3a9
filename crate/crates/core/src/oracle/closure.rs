//! Bounded rewrite closure.
//!
//! The graph has one node per term and an edge for every single application
//! of the shuffle/concatenation isomorphisms, in either direction, at any
//! subterm:
//!
//! * `sh(.., t, t, ..)` ↔ `sh(.., t, ..)`;
//! * `sh(B, τ0 ^ sh(A) ^ τ1)` ↔ `sh(A)` for `B` a sub-multiset of `A` and
//!   `τ0`, `τ1` each absent or in `A`;
//! * `S ^ τ ^ S` ↔ `S` and `S ^ S` ↔ `S` for a shuffle `S` with `τ` among its
//!   arguments.
//!
//! Argument permutation is implicit in the sorted representation. Nodes above
//! the complexity bound are pruned, which makes the graph finite. This module
//! deliberately does not call into the normalizer.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::term::{Kind, Term};

pub const DEFAULT_FRONTIER_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosureVerdict {
    Connected,
    NotConnectedWithinBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("closure search visited more than {cap} terms")]
    FrontierCap { cap: usize },
}

/// Terms one edge away from `t`, restricted to complexity `<= bound`.
pub fn neighbors(t: &Term, bound: u64) -> Vec<Term> {
    let total = t.complexity();
    let mut out = Vec::new();
    t.for_each_subterm(&mut |path, sub| {
        let budget = bound.saturating_sub(total);
        if total > bound {
            // only shrinking moves are allowed from an over-bound node
            for r in shrink_moves(sub) {
                out.push(t.replace_at(path, r));
            }
            return;
        }
        for r in shrink_moves(sub) {
            out.push(t.replace_at(path, r));
        }
        for r in grow_moves(sub, budget) {
            out.push(t.replace_at(path, r));
        }
    });
    out.sort();
    out.dedup();
    out
}

fn shrink_moves(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    match t.kind() {
        Kind::Singleton => {}
        Kind::Shuffle(args) => {
            for i in 1..args.len() {
                if args[i] == args[i - 1] {
                    let mut rest = args.clone();
                    rest.remove(i);
                    out.push(Term::shuffle(rest));
                }
            }
            for (w, wrapper) in args.iter().enumerate() {
                let others: Vec<&Term> = args
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != w)
                    .map(|(_, a)| a)
                    .collect();
                for inner in wrapped(wrapper) {
                    if is_sub_multiset(&others, inner.as_shuffle().unwrap()) {
                        out.push(inner);
                    }
                }
            }
        }
        Kind::Concat(parts) => {
            for (i, s) in parts.iter().enumerate() {
                let Some(args) = s.as_shuffle() else { continue };
                for j in i + 1..parts.len() {
                    if parts[j] != *s {
                        continue;
                    }
                    let mid = &parts[i + 1..j];
                    if mid.is_empty() || args.contains(&Term::concat(mid.to_vec())) {
                        let mut kept = parts[..=i].to_vec();
                        kept.extend_from_slice(&parts[j + 1..]);
                        out.push(Term::concat(kept));
                    }
                }
            }
        }
    }
    out
}

/// Shuffles `q` such that `u` is `τ0 ^ q ^ τ1` with `τ0`, `τ1` absent or
/// arguments of `q`.
fn wrapped(u: &Term) -> Vec<Term> {
    match u.kind() {
        Kind::Shuffle(_) => vec![u.clone()],
        Kind::Concat(parts) => {
            let mut out = Vec::new();
            for (k, q) in parts.iter().enumerate() {
                let Some(args) = q.as_shuffle() else { continue };
                let ok =
                    |seg: &[Term]| seg.is_empty() || args.contains(&Term::concat(seg.to_vec()));
                if ok(&parts[..k]) && ok(&parts[k + 1..]) {
                    out.push(q.clone());
                }
            }
            out
        }
        Kind::Singleton => Vec::new(),
    }
}

fn is_sub_multiset(small: &[&Term], big: &[Term]) -> bool {
    let mut used = vec![false; big.len()];
    small.iter().all(
        |s| match big.iter().enumerate().find(|&(i, b)| !used[i] && b == *s) {
            Some((i, _)) => {
                used[i] = true;
                true
            }
            None => false,
        },
    )
}

/// Expansions of `t` whose complexity grows by at most `budget`.
fn grow_moves(t: &Term, budget: u64) -> Vec<Term> {
    let Some(args) = t.as_shuffle() else {
        return Vec::new();
    };
    let mut distinct: Vec<Term> = args.to_vec();
    distinct.dedup();
    let mut out = Vec::new();

    // duplicate an argument
    for a in &distinct {
        if a.complexity() < budget {
            let mut more = args.to_vec();
            more.push(a.clone());
            out.push(Term::shuffle(more));
        }
    }

    // S -> S ^ S, S -> S ^ τ ^ S
    let c = t.complexity();
    if c < budget {
        out.push(Term::concat(vec![t.clone(), t.clone()]));
    }
    for tau in &distinct {
        if c + tau.complexity() + 2 <= budget {
            out.push(Term::concat(vec![t.clone(), tau.clone(), t.clone()]));
        }
    }

    // sh(A) -> sh(B, τ0 ^ sh(A) ^ τ1)
    let slots: Vec<Option<&Term>> = std::iter::once(None)
        .chain(distinct.iter().map(Some))
        .collect();
    let slot_cost = |s: Option<&Term>| s.map_or(0, |x| 1 + x.complexity());
    let mut seen_b = HashSet::new();
    for mask in 0u32..(1u32 << args.len().min(20)) {
        let b: Vec<Term> = args
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| a.clone())
            .collect();
        if !seen_b.insert(b.clone()) {
            continue;
        }
        let base = 2 + b.len() as u64 + b.iter().map(Term::complexity).sum::<u64>();
        for &pre in &slots {
            for &suf in &slots {
                if base + slot_cost(pre) + slot_cost(suf) > budget {
                    continue;
                }
                let mut wrapper = Vec::new();
                wrapper.extend(pre.cloned());
                wrapper.push(t.clone());
                wrapper.extend(suf.cloned());
                let mut outer = b.clone();
                outer.push(Term::concat(wrapper));
                out.push(Term::shuffle(outer));
            }
        }
    }
    out
}

/// Bidirectional breadth-first search between `a` and `b` through terms of
/// complexity at most `max_complexity`.
pub fn closure_equivalent(
    a: &Term,
    b: &Term,
    max_complexity: u64,
) -> Result<ClosureVerdict, ClosureError> {
    closure_equivalent_capped(a, b, max_complexity, DEFAULT_FRONTIER_CAP)
}

pub fn closure_equivalent_capped(
    a: &Term,
    b: &Term,
    max_complexity: u64,
    cap: usize,
) -> Result<ClosureVerdict, ClosureError> {
    if a == b {
        return Ok(ClosureVerdict::Connected);
    }
    let mut seen = [HashSet::from([a.clone()]), HashSet::from([b.clone()])];
    let mut frontier = [vec![a.clone()], vec![b.clone()]];
    loop {
        if frontier[0].is_empty() || frontier[1].is_empty() {
            return Ok(ClosureVerdict::NotConnectedWithinBound);
        }
        let side = if frontier[0].len() <= frontier[1].len() {
            0
        } else {
            1
        };
        let other = 1 - side;
        let mut next = Vec::new();
        for t in std::mem::take(&mut frontier[side]) {
            for n in neighbors(&t, max_complexity) {
                if seen[other].contains(&n) {
                    return Ok(ClosureVerdict::Connected);
                }
                if seen[side].insert(n.clone()) {
                    next.push(n);
                }
            }
        }
        if seen[0].len() + seen[1].len() > cap {
            return Err(ClosureError::FrontierCap { cap });
        }
        frontier[side] = next;
    }
}

/// Connected components of the bounded closure graph, restricted to the
/// components that contain the given seeds.
pub struct Components {
    ids: HashMap<Term, usize>,
    count: usize,
}

impl Components {
    pub fn explore<'a>(
        seeds: impl IntoIterator<Item = &'a Term>,
        max_complexity: u64,
        cap: usize,
    ) -> Result<Self, ClosureError> {
        let mut ids: HashMap<Term, usize> = HashMap::new();
        let mut count = 0;
        for seed in seeds {
            if ids.contains_key(seed) {
                continue;
            }
            let id = count;
            count += 1;
            ids.insert(seed.clone(), id);
            let mut queue = VecDeque::from([seed.clone()]);
            while let Some(t) = queue.pop_front() {
                for n in neighbors(&t, max_complexity) {
                    if !ids.contains_key(&n) {
                        ids.insert(n.clone(), id);
                        queue.push_back(n);
                    }
                }
                if ids.len() > cap {
                    return Err(ClosureError::FrontierCap { cap });
                }
            }
        }
        Ok(Components { ids, count })
    }

    pub fn component(&self, t: &Term) -> Option<usize> {
        self.ids.get(t).copied()
    }

    pub fn component_count(&self) -> usize {
        self.count
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }
}

/// A random walk of `steps` closure edges from `start`, staying within
/// `max_complexity`. Every term on the walk denotes the same order as
/// `start`.
pub fn random_walk(
    start: &Term,
    rng: &mut impl rand::Rng,
    steps: usize,
    max_complexity: u64,
) -> Term {
    let mut cur = start.clone();
    for _ in 0..steps {
        let ns = neighbors(&cur, max_complexity);
        if ns.is_empty() {
            break;
        }
        cur = ns[rng.gen_range(0..ns.len())].clone();
    }
    cur
}
