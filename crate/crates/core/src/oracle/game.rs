//! Ehrenfeucht–Fraïssé games between the orders denoted by two terms.
//!
//! Positions hold the points picked so far on each side. Spoiler picks a
//! new point in either order, Duplicator answers in the other, and the picks
//! must stay a partial isomorphism. Points are only ever enumerated up to
//! automorphisms fixing the current picks (see
//! [`address::representatives`](super::address::representatives)), so each
//! round has finitely many moves, and positions are memoized after the tags
//! are replaced by their ranks.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::address::{canonicalize, representatives, PointAddress};
use crate::term::Term;

pub const DEFAULT_MAX_ROUNDS: u32 = 6;
pub const DEFAULT_MEMO_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Winner {
    Spoiler,
    Duplicator,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Winner::Spoiler => "spoiler",
            Winner::Duplicator => "duplicator",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("{rounds} rounds requested, at most {max} allowed")]
    TooManyRounds { rounds: u32, max: u32 },
    #[error("memo table exceeded {cap} positions; verdict unknown")]
    MemoCap { cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameConfig {
    pub max_rounds: u32,
    pub memo_cap: usize,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            max_rounds: DEFAULT_MAX_ROUNDS,
            memo_cap: DEFAULT_MEMO_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GamePosition {
    pub left: Term,
    pub right: Term,
    pub picks_left: Vec<PointAddress>,
    pub picks_right: Vec<PointAddress>,
    pub rounds_left: u32,
}

impl GamePosition {
    pub fn start(left: Term, right: Term, rounds: u32) -> Self {
        GamePosition {
            left,
            right,
            picks_left: Vec::new(),
            picks_right: Vec::new(),
            rounds_left: rounds,
        }
    }

    /// Whether the picks form a partial isomorphism.
    pub fn is_partial_isomorphism(&self) -> bool {
        self.picks_left.len() == self.picks_right.len()
            && (0..self.picks_left.len()).all(|i| {
                (0..i).all(|j| {
                    self.picks_left[i].cmp(&self.picks_left[j])
                        == self.picks_right[i].cmp(&self.picks_right[j])
                })
            })
    }
}

/// Representative points Spoiler or Duplicator may pick on `side`.
pub fn enumerate_moves(pos: &GamePosition, side: Side) -> Vec<PointAddress> {
    let (term, picks) = match side {
        Side::Left => (&pos.left, &pos.picks_left),
        Side::Right => (&pos.right, &pos.picks_right),
    };
    let refs: Vec<&PointAddress> = picks.iter().collect();
    representatives(term, &refs)
}

/// Solves the `rounds`-round game with default resource limits.
pub fn ef_winner(a: &Term, b: &Term, rounds: u32) -> Result<Winner, GameError> {
    EfSolver::new(a.clone(), b.clone(), GameConfig::default()).winner(rounds)
}

type Key = (Vec<PointAddress>, Vec<PointAddress>, u32);

/// A solver for one pair of terms; its memo table persists across calls.
pub struct EfSolver {
    left: Term,
    right: Term,
    config: GameConfig,
    memo: HashMap<Key, bool>,
}

impl EfSolver {
    pub fn new(left: Term, right: Term, config: GameConfig) -> Self {
        EfSolver {
            left,
            right,
            config,
            memo: HashMap::new(),
        }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn winner(&mut self, rounds: u32) -> Result<Winner, GameError> {
        if rounds > self.config.max_rounds {
            return Err(GameError::TooManyRounds {
                rounds,
                max: self.config.max_rounds,
            });
        }
        Ok(if self.spoiler_wins(&[], &[], rounds)? {
            Winner::Spoiler
        } else {
            Winner::Duplicator
        })
    }

    /// Solves from an arbitrary position. A position that is not a partial
    /// isomorphism is already lost for Duplicator.
    pub fn winner_from(&mut self, pos: &GamePosition) -> Result<Winner, GameError> {
        if !pos.is_partial_isomorphism() {
            return Ok(Winner::Spoiler);
        }
        let (l, r) = self.canonical(pos.picks_left.clone(), pos.picks_right.clone());
        Ok(if self.spoiler_wins(&l, &r, pos.rounds_left)? {
            Winner::Spoiler
        } else {
            Winner::Duplicator
        })
    }

    fn canonical(
        &self,
        left: Vec<PointAddress>,
        right: Vec<PointAddress>,
    ) -> (Vec<PointAddress>, Vec<PointAddress>) {
        let left = canonicalize(&self.left, &left);
        let right = canonicalize(&self.right, &right);
        // pairs listed in left order; the right order then follows
        let mut pairs: Vec<(PointAddress, PointAddress)> = left.into_iter().zip(right).collect();
        pairs.sort();
        pairs.into_iter().unzip()
    }

    fn spoiler_wins(
        &mut self,
        left: &[PointAddress],
        right: &[PointAddress],
        rounds: u32,
    ) -> Result<bool, GameError> {
        if rounds == 0 {
            return Ok(false);
        }
        // identity strategy
        if self.left == self.right && left == right {
            return Ok(false);
        }
        let key = (left.to_vec(), right.to_vec(), rounds);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let mut result = false;
        'sides: for side in [Side::Left, Side::Right] {
            let (mine_term, mine, theirs_term, theirs) = match side {
                Side::Left => (self.left.clone(), left, self.right.clone(), right),
                Side::Right => (self.right.clone(), right, self.left.clone(), left),
            };
            let mine_refs: Vec<&PointAddress> = mine.iter().collect();
            let theirs_refs: Vec<&PointAddress> = theirs.iter().collect();
            let answers = representatives(&theirs_term, &theirs_refs);
            for x in representatives(&mine_term, &mine_refs) {
                if mine.contains(&x) {
                    continue;
                }
                let mut survived = false;
                for y in &answers {
                    let consistent = mine.iter().zip(theirs).all(|(m, t)| x.cmp(m) == y.cmp(t));
                    if !consistent {
                        continue;
                    }
                    if rounds == 1 {
                        survived = true;
                        break;
                    }
                    let mut m2 = mine.to_vec();
                    m2.push(x.clone());
                    let mut t2 = theirs.to_vec();
                    t2.push(y.clone());
                    let (l2, r2) = match side {
                        Side::Left => self.canonical(m2, t2),
                        Side::Right => self.canonical(t2, m2),
                    };
                    if !self.spoiler_wins(&l2, &r2, rounds - 1)? {
                        survived = true;
                        break;
                    }
                }
                if !survived {
                    result = true;
                    break 'sides;
                }
            }
        }
        if self.memo.len() >= self.config.memo_cap {
            return Err(GameError::MemoCap {
                cap: self.config.memo_cap,
            });
        }
        self.memo.insert(key, result);
        Ok(result)
    }
}
