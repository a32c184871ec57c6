use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The two kinds of random decisions the estimators make.
pub trait RandomSource {
    /// `true` with probability `prob`: a uniform draw in `[0, 1)` compared with `< prob`.
    fn chance(&mut self, prob: f64) -> bool;

    /// Uniform index in `0..len`. `len` is never zero.
    fn index(&mut self, len: usize) -> usize;
}

impl<R: RandomSource + ?Sized> RandomSource for &mut R {
    fn chance(&mut self, prob: f64) -> bool {
        (**self).chance(prob)
    }

    fn index(&mut self, len: usize) -> usize {
        (**self).index(len)
    }
}

/// Deterministic generator: same seed, same draw sequence on every platform.
#[derive(Debug, Clone)]
pub struct SeededRandom(ChaCha8Rng);

impl SeededRandom {
    pub fn new(seed: u64) -> Self {
        SeededRandom(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl RandomSource for SeededRandom {
    fn chance(&mut self, prob: f64) -> bool {
        self.0.gen::<f64>() < prob
    }

    fn index(&mut self, len: usize) -> usize {
        self.0.gen_range(0..len)
    }
}

/// A pre-programmed decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Draw {
    Coin(bool),
    Index(usize),
}

/// Replays a fixed list of decisions in order. Panics when the script runs
/// out or when the next entry is of the wrong kind, since either means the
/// replay has diverged from the trace it encodes.
#[derive(Debug, Clone, Default)]
pub struct ScriptedRandom {
    script: VecDeque<Draw>,
}

impl ScriptedRandom {
    pub fn new(script: impl IntoIterator<Item = Draw>) -> Self {
        ScriptedRandom {
            script: script.into_iter().collect(),
        }
    }

    pub fn remaining(&self) -> usize {
        self.script.len()
    }
}

impl RandomSource for ScriptedRandom {
    fn chance(&mut self, _prob: f64) -> bool {
        match self.script.pop_front() {
            Some(Draw::Coin(b)) => b,
            other => panic!("scripted source expected a coin, found {other:?}"),
        }
    }

    fn index(&mut self, len: usize) -> usize {
        match self.script.pop_front() {
            Some(Draw::Index(i)) if i < len => i,
            other => panic!("scripted source expected an index below {len}, found {other:?}"),
        }
    }
}
