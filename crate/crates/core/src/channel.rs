//! Duplication balls and spheres by exhaustive closure, and a seeded random
//! duplication channel.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::word::{tandem_duplicate, Word};

/// Default cap on the number of words an enumeration may hold.
pub const DEFAULT_MEMBER_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorSetKind {
    /// At most `t` duplications.
    Ball,
    /// Exactly `t` duplications.
    Sphere,
}

/// All words reachable from `center` by up to (ball) or exactly (sphere) `t`
/// duplications of length `ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorSet {
    pub center: Word,
    pub radius: usize,
    pub dup_length: usize,
    pub kind: ErrorSetKind,
    pub members: BTreeSet<Word>,
}

impl ErrorSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.members.contains(word)
    }
}

/// Breadth-first layers: `layers[k]` holds the words reachable by exactly `k`
/// duplications.
fn layers(x: &Word, t: usize, dup_length: usize, budget: u64) -> Result<Vec<BTreeSet<Word>>> {
    // validates ℓ ≥ 1 and |x| ≥ ℓ
    tandem_duplicate(x, 0, dup_length)?;
    let mut out = vec![BTreeSet::from([x.clone()])];
    let mut held = 1u64;
    for _ in 0..t {
        let mut next = BTreeSet::new();
        for w in out.last().expect("non-empty") {
            for i in 0..=w.len() - dup_length {
                if next.insert(tandem_duplicate(w, i, dup_length)?) {
                    held += 1;
                    if held > budget {
                        return Err(Error::BudgetExceeded { budget });
                    }
                }
            }
        }
        out.push(next);
    }
    Ok(out)
}

pub fn duplication_ball(x: &Word, t: usize, dup_length: usize) -> Result<ErrorSet> {
    duplication_ball_with_budget(x, t, dup_length, DEFAULT_MEMBER_BUDGET)
}

pub fn duplication_ball_with_budget(
    x: &Word,
    t: usize,
    dup_length: usize,
    budget: u64,
) -> Result<ErrorSet> {
    let members = layers(x, t, dup_length, budget)?
        .into_iter()
        .flatten()
        .collect();
    Ok(ErrorSet {
        center: x.clone(),
        radius: t,
        dup_length,
        kind: ErrorSetKind::Ball,
        members,
    })
}

pub fn duplication_sphere(x: &Word, t: usize, dup_length: usize) -> Result<ErrorSet> {
    duplication_sphere_with_budget(x, t, dup_length, DEFAULT_MEMBER_BUDGET)
}

pub fn duplication_sphere_with_budget(
    x: &Word,
    t: usize,
    dup_length: usize,
    budget: u64,
) -> Result<ErrorSet> {
    let members = layers(x, t, dup_length, budget)?
        .pop()
        .expect("at least the center layer");
    Ok(ErrorSet {
        center: x.clone(),
        radius: t,
        dup_length,
        kind: ErrorSetKind::Sphere,
        members,
    })
}

/// `|S_t(x)| = C(r + t, t)` where `r` is the derivative weight of `x`:
/// `t` zero blocks distributed over `r + 1` runs.
pub fn sphere_size_formula(r: usize, t: usize) -> BigUint {
    binomial((r + t) as u64, t as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelMode {
    ExactlyT,
    /// The number of duplications is uniform on `0..=t`.
    UpToT,
}

/// Applies duplications at uniformly random positions, one after the other,
/// to the evolving word.
pub fn sample_channel_with<R: Rng + ?Sized>(
    x: &Word,
    t: usize,
    dup_length: usize,
    mode: ChannelMode,
    rng: &mut R,
) -> Result<Word> {
    tandem_duplicate(x, 0, dup_length)?;
    let count = match mode {
        ChannelMode::ExactlyT => t,
        ChannelMode::UpToT => rng.gen_range(0..=t),
    };
    let mut word = x.clone();
    for _ in 0..count {
        let position = rng.gen_range(0..=word.len() - dup_length);
        word = tandem_duplicate(&word, position, dup_length)?;
    }
    Ok(word)
}

/// Seeded form of [`sample_channel_with`]; identical seeds give identical outputs.
pub fn sample_channel(
    x: &Word,
    t: usize,
    dup_length: usize,
    mode: ChannelMode,
    seed: u64,
) -> Result<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_channel_with(x, t, dup_length, mode, &mut rng)
}
