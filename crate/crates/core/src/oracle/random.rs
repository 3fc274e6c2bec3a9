//! Seeded random terms under complexity and depth bounds.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::term::Term;

/// Constructor weights and shape limits for [`gen_random_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub singleton_weight: u32,
    pub concat_weight: u32,
    pub shuffle_weight: u32,
    pub max_arity: usize,
    pub max_parts: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            singleton_weight: 2,
            concat_weight: 3,
            shuffle_weight: 4,
            max_arity: 4,
            max_parts: 4,
        }
    }
}

/// A deterministic random term with `complexity <= max_complexity` and
/// `depth <= max_depth`.
pub fn gen_random(seed: u64, max_complexity: u64, max_depth: u32) -> Term {
    gen_random_with(&GenConfig::default(), seed, max_complexity, max_depth)
}

pub fn gen_random_with(cfg: &GenConfig, seed: u64, max_complexity: u64, max_depth: u32) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_term(cfg, &mut rng, max_complexity, max_depth)
}

/// Draws from an existing generator; useful when many terms share one
/// stream.
pub fn gen_term(cfg: &GenConfig, rng: &mut impl Rng, budget: u64, depth: u32) -> Term {
    let mut choices = vec![(0u8, cfg.singleton_weight)];
    if budget >= 1 && cfg.max_parts >= 2 {
        choices.push((1, cfg.concat_weight));
    }
    if budget >= 2 && depth >= 1 && cfg.max_arity >= 1 {
        choices.push((2, cfg.shuffle_weight));
    }
    let total: u32 = choices.iter().map(|c| c.1).sum();
    let mut roll = if total == 0 {
        0
    } else {
        rng.gen_range(0..total)
    };
    let mut kind = 0;
    for (k, w) in &choices {
        if roll < *w {
            kind = *k;
            break;
        }
        roll -= w;
    }
    match kind {
        1 => {
            let k = rng.gen_range(2..=cfg.max_parts.min(budget as usize + 1));
            let mut left = budget - (k as u64 - 1);
            let parts = (0..k)
                .map(|_| {
                    let b = rng.gen_range(0..=left);
                    let p = gen_term(cfg, rng, b, depth);
                    left -= p.complexity();
                    p
                })
                .collect();
            Term::concat(parts)
        }
        2 => {
            let n = rng.gen_range(1..=cfg.max_arity.min(budget as usize - 1));
            let mut left = budget - 1 - n as u64;
            let mut args: Vec<Term> = (0..n)
                .map(|_| {
                    let b = rng.gen_range(0..=left);
                    let a = gen_term(cfg, rng, b, depth - 1);
                    left -= a.complexity();
                    a
                })
                .collect();
            args.shuffle(rng);
            Term::shuffle(args)
        }
        _ => Term::singleton(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_budget_is_singleton() {
        for seed in 0..20 {
            assert_eq!(gen_random(seed, 0, 0), Term::singleton());
        }
    }

    #[test]
    fn bounds_and_determinism() {
        for seed in 0..500 {
            let t = gen_random(seed, 30, 3);
            assert!(t.complexity() <= 30);
            assert!(t.depth() <= 3);
            assert_eq!(t, gen_random(seed, 30, 3));
        }
    }

    #[test]
    fn produces_variety() {
        let distinct: std::collections::HashSet<_> =
            (0..200).map(|s| gen_random(s, 12, 3)).collect();
        assert!(distinct.len() > 100);
        assert!(distinct.iter().any(|t| t.depth() >= 2));
    }
}
