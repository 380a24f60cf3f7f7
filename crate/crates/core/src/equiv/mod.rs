//! Branching bisimilarity and its divergence-preserving variant.
//!
//! Both systems are placed side by side in a [`DisjointUnion`]; two systems are
//! equivalent when their initial states end up related. [`branching_bisim`] and
//! [`dpbb`] use signature refinement, [`brute_force_bb`] computes the greatest
//! relation directly from the definition and serves as an oracle for small inputs, and
//! [`validate_blocks`] replays the definition on a partition without trusting either.

mod brute;
mod refine;
mod replay;
mod validate;

use serde::{Deserialize, Serialize};

use crate::action::Action;
use crate::index::TransitionIndex;
use crate::lts::{Lts, StateId};

pub use brute::{brute_force_bb, brute_force_bb_with_bound, DEFAULT_ORACLE_BOUND};
pub use refine::{branching_bisim, coarsest_partition, dpbb};
pub use validate::{validate_blocks, Clause, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A state of one of the two compared systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateRef {
    pub side: Side,
    pub state: StateId,
}

impl StateRef {
    pub fn left(state: StateId) -> Self {
        StateRef {
            side: Side::Left,
            state,
        }
    }

    pub fn right(state: StateId) -> Self {
        StateRef {
            side: Side::Right,
            state,
        }
    }
}

/// One step of distinguishing evidence.
///
/// From the pair `(left, right)`, the `offered_by` side can perform `action` (after
/// internal steps that stay in its own class) and reach `target`, which the other side
/// cannot match. `action == None` means the offering side diverges inside its class
/// while the other does not. Consecutive steps follow the offering side's move and the
/// other side's closest attempt at matching it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinguishingStep {
    pub left: StateId,
    pub right: StateId,
    pub offered_by: Side,
    pub action: Option<Action>,
    pub target: Option<StateId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceResult {
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub blocks: Option<Vec<Vec<StateRef>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Vec<DistinguishingStep>>,
}

impl EquivalenceResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result is always serialisable")
    }
}

/// Both systems on one state space: left states first, then right states.
#[derive(Debug, Clone)]
pub struct DisjointUnion {
    pub index: TransitionIndex,
    pub left_states: usize,
    pub right_states: usize,
    pub left_initial: StateId,
    pub right_initial: StateId,
}

impl DisjointUnion {
    pub fn new(l1: &Lts, l2: &Lts) -> Self {
        let offset = l1.num_states();
        let edges = l1
            .transitions()
            .iter()
            .map(|t| (t.source, &t.action, t.target))
            .chain(
                l2.transitions()
                    .iter()
                    .map(|t| (t.source + offset, &t.action, t.target + offset)),
            );
        DisjointUnion {
            index: TransitionIndex::from_edges(offset + l2.num_states(), edges),
            left_states: offset,
            right_states: l2.num_states(),
            left_initial: l1.initial(),
            right_initial: l2.initial() + offset,
        }
    }

    pub fn num_states(&self) -> usize {
        self.left_states + self.right_states
    }

    pub fn to_ref(&self, u: usize) -> StateRef {
        if u < self.left_states {
            StateRef::left(u)
        } else {
            StateRef::right(u - self.left_states)
        }
    }

    pub fn global(&self, r: StateRef) -> usize {
        match r.side {
            Side::Left => r.state,
            Side::Right => r.state + self.left_states,
        }
    }

    /// Blocks in canonical order from a block id per union state.
    pub(crate) fn blocks_of(&self, block: &[usize]) -> Vec<Vec<StateRef>> {
        let count = block.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks: Vec<Vec<StateRef>> = vec![Vec::new(); count];
        for (u, &b) in block.iter().enumerate() {
            blocks[b].push(self.to_ref(u));
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort();
        blocks
    }
}
