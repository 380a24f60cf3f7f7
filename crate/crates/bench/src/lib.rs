//! Fixed workloads shared by the benchmarks.

use ltsd_core::generate::{random_instance, GenConfig};
use ltsd_core::{generate::generate, AlphabetPartition, Lts};

/// A source and a partition that splits its labels evenly.
pub fn balanced(seed: u64, states: usize, actions: usize) -> (Lts, AlphabetPartition) {
    let l = generate(
        seed,
        GenConfig {
            states,
            actions,
            density: 2.0,
        },
    )
    .expect("bounds are consistent");
    let (s1, s2): (Vec<_>, Vec<_>) = l
        .alphabet()
        .iter()
        .enumerate()
        .partition(|(i, _)| i % 2 == 0);
    let p = AlphabetPartition::new(
        s1.into_iter().map(|(_, a)| a.clone()).collect::<Vec<_>>(),
        s2.into_iter().map(|(_, a)| a.clone()).collect::<Vec<_>>(),
    )
    .expect("halves are disjoint");
    (l, p)
}

/// The small instances the property suites use.
pub fn suite(count: u64) -> Vec<(Lts, AlphabetPartition)> {
    (0..count).map(|seed| random_instance(seed, 10, 4)).collect()
}
