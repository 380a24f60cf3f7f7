//! Greatest-fixpoint oracle.
//!
//! Starts from the full relation on the disjoint union and removes every pair that
//! violates a transfer clause until nothing changes. Quadratic in memory and much
//! slower than refinement; meant for small instances in tests.
//!
//! The divergence clause is not monotone in the relation, so deleting pairs that
//! fail it against an over-approximation can throw away pairs that belong to the
//! answer. Instead, every state on an internal cycle gets a self-loop on a fresh
//! visible action. On finite systems a state diverges inside its class exactly when it
//! reaches such a cycle through that class, and the fresh loop turns this into an
//! ordinary transfer obligation.

use std::collections::BTreeSet;

use crate::action::Action;
use crate::error::{Error, Result};
use crate::lts::{Lts, Transition};

use super::replay::Replay;
use super::{DisjointUnion, DistinguishingStep, EquivalenceResult};

pub const DEFAULT_ORACLE_BOUND: usize = 400;

pub fn brute_force_bb(l1: &Lts, l2: &Lts, divergence_sensitive: bool) -> Result<EquivalenceResult> {
    brute_force_bb_with_bound(l1, l2, divergence_sensitive, DEFAULT_ORACLE_BOUND)
}

pub fn brute_force_bb_with_bound(
    l1: &Lts,
    l2: &Lts,
    divergence_sensitive: bool,
    bound: usize,
) -> Result<EquivalenceResult> {
    let total = l1.num_states() + l2.num_states();
    if total > bound {
        return Err(Error::ResourceLimit {
            what: "combined state count",
            actual: total,
            limit: bound,
        });
    }
    let marker = divergence_sensitive.then(|| fresh_label(l1, l2));
    let union = match &marker {
        Some(m) => DisjointUnion::new(&mark_cycles(l1, m), &mark_cycles(l2, m)),
        None => DisjointUnion::new(l1, l2),
    };
    let n = union.num_states();
    let replay = Replay::new(&union.index);
    let mut rel = vec![true; n * n];
    let (i1, i2) = (union.left_initial, union.right_initial);
    let mut reason: Option<DistinguishingStep> = None;

    let mut changed = true;
    while changed {
        changed = false;
        for s in 0..n {
            for t in 0..n {
                if !rel[s * n + t] {
                    continue;
                }
                let current = |a: usize, b: usize| rel[a * n + b];
                let Some(u) = replay.unmatched(&current, s, t) else {
                    continue;
                };
                rel[s * n + t] = false;
                changed = true;
                if (s, t) == (i1, i2) {
                    let action = union.index.action(u.action);
                    let divergence = marker.as_ref() == Some(action);
                    let local = |v: usize| union.to_ref(v).state;
                    reason = Some(DistinguishingStep {
                        left: local(s),
                        right: local(t),
                        offered_by: u.offered_by,
                        action: (!divergence).then(|| action.clone()),
                        target: (!divergence).then(|| local(u.target)),
                    });
                }
            }
        }
    }

    let verdict = rel[i1 * n + i2];
    let blocks = verdict.then(|| {
        // The greatest relation is an equivalence; number its classes.
        let mut block = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if block[s] == usize::MAX {
                for t in s..n {
                    if rel[s * n + t] {
                        block[t] = next;
                    }
                }
                next += 1;
            }
        }
        union.blocks_of(&block)
    });
    Ok(EquivalenceResult {
        verdict,
        blocks,
        counterexample: if verdict { None } else { reason.map(|r| vec![r]) },
    })
}

/// A visible label used by neither system.
fn fresh_label(l1: &Lts, l2: &Lts) -> Action {
    (0..)
        .map(|i| Action::visible(format!("diverge{i}")).expect("valid label"))
        .find(|a| !l1.alphabet().contains(a) && !l2.alphabet().contains(a))
        .expect("alphabets are finite")
}

/// Adds `marker` as a self-loop on every state that lies on an internal cycle.
fn mark_cycles(l: &Lts, marker: &Action) -> Lts {
    let n = l.num_states();
    let index = l.index();
    let mut transitions = l.transitions().to_vec();
    for s in 0..n {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<usize> = index.tau_successors(s).collect();
        while let Some(u) = stack.pop() {
            if seen.insert(u) {
                stack.extend(index.tau_successors(u));
            }
        }
        if seen.contains(&s) {
            transitions.push(Transition::new(s, marker.clone(), s));
        }
    }
    let alphabet = l.alphabet().iter().cloned().chain([marker.clone()]);
    Lts::new(n, l.initial(), alphabet, transitions).expect("only self-loops were added")
}
