//! Seeded random systems for property suites and the `generate` command.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::action::Action;
use crate::error::{Error, Result};
use crate::lts::{Lts, Transition};
use crate::partition::AlphabetPartition;

/// Shape of a generated system.
///
/// `density` is the mean number of outgoing transitions per state: the system gets
/// `round(density * states)` distinct transitions. The first `states - 1` of them form
/// a random tree rooted at state 0, so every state is reachable once the count allows
/// it. Density 0 gives a system without transitions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub states: usize,
    pub actions: usize,
    pub density: f64,
}

impl GenConfig {
    fn transition_count(&self) -> Result<usize> {
        if self.states == 0 {
            return Err(Error::invalid("at least one state is required"));
        }
        if !self.density.is_finite() || self.density < 0.0 {
            return Err(Error::invalid(format!("density must be a non-negative number, got {}", self.density)));
        }
        let wanted = (self.density * self.states as f64).round() as usize;
        let room = self.states * self.states * self.actions;
        if wanted > room {
            return Err(Error::invalid(format!(
                "{wanted} transitions requested but only {room} distinct ones exist over {} states and {} actions",
                self.states, self.actions
            )));
        }
        Ok(wanted)
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Labels `a0`, `a1`, ...
pub fn labels(prefix: &str, count: usize) -> Vec<Action> {
    (0..count)
        .map(|i| Action::visible(format!("{prefix}{i}")).expect("generated labels are valid"))
        .collect()
}

/// A system over `a0..a{actions-1}` without internal steps or co-actions.
pub fn generate(seed: u64, config: GenConfig) -> Result<Lts> {
    random_lts(&mut rng(seed), config)
}

pub fn random_lts(rng: &mut impl Rng, config: GenConfig) -> Result<Lts> {
    config.transition_count()?;
    random_lts_over(rng, config.states, &labels("a", config.actions), config.density)
}

/// Like [`random_lts`] but drawing labels from `pool`, which may contain internal
/// and co-actions. The alphabet is the visible part of the pool.
pub fn random_lts_over(
    rng: &mut impl Rng,
    states: usize,
    pool: &[Action],
    density: f64,
) -> Result<Lts> {
    let wanted = GenConfig {
        states,
        actions: pool.len(),
        density,
    }
    .transition_count()?;
    let mut transitions = BTreeSet::new();
    let mut order: Vec<usize> = (1..states).collect();
    order.shuffle(rng);
    let mut placed = vec![0usize];
    for &s in order.iter().take(wanted) {
        let parent = placed[rng.gen_range(0..placed.len())];
        let a = pool[rng.gen_range(0..pool.len())].clone();
        transitions.insert(Transition::new(parent, a, s));
        placed.push(s);
    }
    while transitions.len() < wanted {
        let a = pool[rng.gen_range(0..pool.len())].clone();
        transitions.insert(Transition::new(
            rng.gen_range(0..states),
            a,
            rng.gen_range(0..states),
        ));
    }
    let alphabet: Vec<Action> = pool.iter().filter(|a| !a.is_tau()).cloned().collect();
    Lts::new(states, 0, alphabet, transitions)
}

/// Splits the alphabet of `l` at random, keeping complementary labels together. A
/// quarter of the time everything goes to the first half and a quarter of the time to
/// the second.
pub fn random_partition(rng: &mut impl Rng, l: &Lts) -> AlphabetPartition {
    let mode = rng.gen_range(0..4);
    let (mut s1, mut s2) = (BTreeSet::new(), BTreeSet::new());
    for a in l.alphabet() {
        // A label follows its co-action if that was placed already.
        let first = match (mode, a.try_co()) {
            (_, Some(co)) if s1.contains(&co) => true,
            (_, Some(co)) if s2.contains(&co) => false,
            (0, _) => true,
            (1, _) => false,
            _ => rng.gen_bool(0.5),
        };
        if first {
            s1.insert(a.clone());
        } else {
            s2.insert(a.clone());
        }
    }
    AlphabetPartition::new(s1, s2).expect("halves are disjoint by construction")
}

/// A random source with at most `max_states` states and `max_actions` actions, and a
/// random partition of its alphabet.
pub fn random_instance(
    seed: u64,
    max_states: usize,
    max_actions: usize,
) -> (Lts, AlphabetPartition) {
    let mut rng = rng(seed);
    let states = rng.gen_range(1..=max_states);
    let actions = rng.gen_range(1..=max_actions);
    let room = (states * states * actions) as f64 / states as f64;
    let density = rng.gen_range(0.0..=2.5f64).min(room);
    let config = GenConfig {
        states,
        actions,
        density,
    };
    let l = random_lts(&mut rng, config).expect("bounds are consistent");
    let p = random_partition(&mut rng, &l);
    (l, p)
}

/// Two factors for product properties. Their private labels are disjoint; with
/// `complementary` set they also share a few labels in opposite polarity, which
/// synchronise in the product. Either factor may take internal steps.
pub fn random_factor_pair(seed: u64, complementary: bool) -> (Lts, Lts) {
    let mut rng = rng(seed);
    let shared = if complementary { rng.gen_range(1..=2) } else { 0 };
    let mut left_pool = labels("x", rng.gen_range(1..=3));
    let mut right_pool = labels("y", rng.gen_range(1..=3));
    for c in labels("c", shared) {
        let co = c.co().expect("visible");
        if rng.gen_bool(0.5) {
            left_pool.push(c);
            right_pool.push(co);
        } else {
            left_pool.push(co);
            right_pool.push(c);
        }
    }
    for pool in [&mut left_pool, &mut right_pool] {
        if rng.gen_bool(0.3) {
            pool.push(Action::Tau);
        }
    }
    let mut factor = |pool: &[Action]| {
        let states = rng.gen_range(1..=5);
        let density = rng.gen_range(0.5..=2.0f64).min(pool.len() as f64 * states as f64);
        random_lts_over(&mut rng, states, pool, density).expect("bounds are consistent")
    };
    let left = factor(&left_pool);
    let right = factor(&right_pool);
    (left, right)
}
