//! Exhaustive enumeration of terms by complexity.

use crate::term::Term;

/// All terms of complexity `<= max`, grouped by exact complexity
/// (`result[c]` holds the terms of complexity `c`), each group sorted.
pub fn terms_by_complexity(max: u64) -> Vec<Vec<Term>> {
    let max = max as usize;
    // atoms[c]: singletons and shuffles of complexity c
    let mut atoms: Vec<Vec<Term>> = vec![Vec::new(); max + 1];
    let mut all: Vec<Vec<Term>> = vec![Vec::new(); max + 1];
    atoms[0].push(Term::singleton());
    all[0].push(Term::singleton());
    for c in 1..=max {
        // shuffles: 1 + n + sum(args) = c, args a sorted multiset
        let mut shuffles = Vec::new();
        for n in 1..c {
            let budget = c - 1 - n;
            multisets(&all, n, budget, None, &mut Vec::new(), &mut |args| {
                shuffles.push(Term::shuffle(args.to_vec()));
            });
        }
        // concatenations: (k - 1) + sum(parts) = c over k >= 2 atoms
        let mut concats = Vec::new();
        for k in 2..=c + 1 {
            let budget = c + 1 - k;
            sequences(&atoms, k, budget, &mut Vec::new(), &mut |parts| {
                concats.push(Term::concat(parts.to_vec()));
            });
        }
        atoms[c] = shuffles.clone();
        atoms[c].sort();
        all[c] = shuffles;
        all[c].extend(concats);
        all[c].sort();
        all[c].dedup();
    }
    all
}

/// Flattened list of every term with complexity `<= max`.
pub fn all_terms(max: u64) -> Vec<Term> {
    terms_by_complexity(max).into_iter().flatten().collect()
}

/// Non-decreasing sequences (in term order) of `n` terms with total
/// complexity exactly `budget`.
fn multisets(
    all: &[Vec<Term>],
    n: usize,
    budget: usize,
    floor: Option<&Term>,
    acc: &mut Vec<Term>,
    emit: &mut impl FnMut(&[Term]),
) {
    if n == 0 {
        if budget == 0 {
            emit(acc);
        }
        return;
    }
    // smallest first: the next term's complexity can't exceed budget / n
    // once the order is by complexity first
    let lo = floor.map_or(0, |f| f.complexity() as usize);
    for c in lo..=budget {
        if c * n > budget {
            break;
        }
        for t in &all[c] {
            if floor.is_some_and(|f| t < f) {
                continue;
            }
            acc.push(t.clone());
            let last = acc.last().unwrap().clone();
            multisets(all, n - 1, budget - c, Some(&last), acc, emit);
            acc.pop();
        }
    }
}

fn sequences(
    atoms: &[Vec<Term>],
    k: usize,
    budget: usize,
    acc: &mut Vec<Term>,
    emit: &mut impl FnMut(&[Term]),
) {
    if k == 0 {
        if budget == 0 {
            emit(acc);
        }
        return;
    }
    for c in 0..=budget {
        for t in &atoms[c] {
            acc.push(t.clone());
            sequences(atoms, k - 1, budget - c, acc, emit);
            acc.pop();
        }
    }
}
