//! Decomposition of labelled transition systems over a partition of their alphabet,
//! recomposition by synchronous product, and branching bisimulation checking.
//!
//! The two decomposition operators in [`decomp`] split a system into components that
//! hand a control token back and forth; composing the components again with
//! [`sync_product`] yields a system branching bisimilar to the original. The
//! [`equiv`] module decides branching bisimilarity with and without divergence
//! preservation, and [`confluence`] reproduces why divergence preservation cannot be
//! kept by any such decomposition.

pub mod action;
pub mod aut;
pub mod confluence;
pub mod decomp;
pub mod equiv;
pub mod error;
pub mod generate;
pub mod index;
pub mod lts;
pub mod partition;
pub mod product;

pub use action::{co_action, Action};
pub use aut::{parse_aut, write_aut};
pub use confluence::{dpbb_impossibility_demo, is_confluent, ConfluenceReport, DemoReport};
pub use decomp::{
    compose_async, compose_sync, decomp_a, decomp_a_with_capacity, decomp_s, flatten,
    AsyncDecomposition, QueueLts, SymbolicState, SyncDecomposition,
};
pub use equiv::{branching_bisim, brute_force_bb, dpbb, EquivalenceResult};
pub use error::{Error, Result};
pub use index::TransitionIndex;
pub use lts::{divergent_states, tau_closure, Lts, LtsBuilder, StateId, Transition};
pub use partition::{AlphabetPartition, Component};
pub use product::{sync_product, ProductStateMap};
