//! Checks a claimed partition against the definition, independently of how it was
//! produced.

use serde::Serialize;

use crate::action::Action;
use crate::lts::Lts;

use super::replay::Replay;
use super::{DisjointUnion, Side, StateRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// A state is missing, duplicated or out of range.
    Coverage,
    /// The initial states are in different blocks.
    Initial,
    /// A transition of one state has no matching answer from a block mate.
    Transfer,
    /// One state diverges inside the block and a block mate does not.
    Divergence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: Clause,
    pub first: StateRef,
    pub second: StateRef,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<Action>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<StateRef>,
}

/// Every violation of the (divergence-preserving) branching bisimulation clauses by
/// the equivalence whose classes are `blocks`. Empty means the partition is a valid
/// witness that the two initial states are equivalent.
pub fn validate_blocks(
    l1: &Lts,
    l2: &Lts,
    blocks: &[Vec<StateRef>],
    divergence_sensitive: bool,
) -> Vec<Violation> {
    let union = DisjointUnion::new(l1, l2);
    let n = union.num_states();
    let mut out = Vec::new();
    let mut block = vec![usize::MAX; n];
    for (b, members) in blocks.iter().enumerate() {
        for &r in members {
            let size = match r.side {
                Side::Left => union.left_states,
                Side::Right => union.right_states,
            };
            let u = union.global(r);
            if r.state >= size || block[u] != usize::MAX {
                out.push(Violation {
                    clause: Clause::Coverage,
                    first: r,
                    second: r,
                    action: None,
                    target: None,
                });
            } else {
                block[u] = b;
            }
        }
    }
    for (u, &b) in block.iter().enumerate() {
        if b == usize::MAX {
            out.push(Violation {
                clause: Clause::Coverage,
                first: union.to_ref(u),
                second: union.to_ref(u),
                action: None,
                target: None,
            });
        }
    }
    if !out.is_empty() {
        return out;
    }

    let (i1, i2) = (union.left_initial, union.right_initial);
    if block[i1] != block[i2] {
        out.push(Violation {
            clause: Clause::Initial,
            first: union.to_ref(i1),
            second: union.to_ref(i2),
            action: None,
            target: None,
        });
    }

    let replay = Replay::new(&union.index);
    let related = |a: usize, b: usize| block[a] == block[b];
    for members in blocks {
        let ids: Vec<usize> = members.iter().map(|&r| union.global(r)).collect();
        let diverges = if divergence_sensitive {
            let mut inside = vec![false; n];
            for &u in &ids {
                inside[u] = true;
            }
            replay.divergent_within(&inside)
        } else {
            Vec::new()
        };
        for (i, &s) in ids.iter().enumerate() {
            for &t in &ids[i..] {
                if let Some(u) = replay.unmatched(&related, s, t) {
                    out.push(Violation {
                        clause: Clause::Transfer,
                        first: union.to_ref(if u.offered_by == Side::Left { s } else { t }),
                        second: union.to_ref(if u.offered_by == Side::Left { t } else { s }),
                        action: Some(union.index.action(u.action).clone()),
                        target: Some(union.to_ref(u.target)),
                    });
                }
                if divergence_sensitive && diverges[s] != diverges[t] {
                    let (d, other) = if diverges[s] { (s, t) } else { (t, s) };
                    out.push(Violation {
                        clause: Clause::Divergence,
                        first: union.to_ref(d),
                        second: union.to_ref(other),
                        action: None,
                        target: None,
                    });
                }
            }
        }
    }
    out
}
