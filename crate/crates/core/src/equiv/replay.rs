//! Literal evaluation of the branching bisimulation transfer clauses against an
//! arbitrary relation, shared by the oracle and the witness validator.

use crate::index::{ActionId, TransitionIndex, TAU_ID};
use crate::lts::divergent_subset;

use super::Side;

/// A transition that the related state cannot answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Unmatched {
    pub offered_by: Side,
    pub action: ActionId,
    pub target: usize,
}

pub(crate) struct Replay<'a> {
    index: &'a TransitionIndex,
    /// Reflexive-transitive internal closure of every state.
    closure: Vec<Vec<usize>>,
}

impl<'a> Replay<'a> {
    pub(crate) fn new(index: &'a TransitionIndex) -> Self {
        let n = index.num_states();
        let closure = (0..n)
            .map(|s| {
                let mut seen = vec![false; n];
                seen[s] = true;
                let mut stack = vec![s];
                let mut out = vec![s];
                while let Some(u) = stack.pop() {
                    for v in index.tau_successors(u) {
                        if !seen[v] {
                            seen[v] = true;
                            out.push(v);
                            stack.push(v);
                        }
                    }
                }
                out
            })
            .collect();
        Replay { index, closure }
    }

    /// First transition of `s` (clause 1) or `t` (clause 2) with no answer under `rel`.
    ///
    /// Clause 1: `s -a-> s'` needs `a = tau` and `s' R t`, or `t -tau*-> t' -a-> t''`
    /// with `s R t'` and `s' R t''`. Clause 2 is the mirror image.
    pub(crate) fn unmatched(
        &self,
        rel: &impl Fn(usize, usize) -> bool,
        s: usize,
        t: usize,
    ) -> Option<Unmatched> {
        for &(a, s1) in self.index.outgoing(s) {
            let answered = (a == TAU_ID && rel(s1, t))
                || self.closure[t].iter().any(|&t1| {
                    rel(s, t1)
                        && self
                            .index
                            .outgoing(t1)
                            .iter()
                            .any(|&(b, t2)| b == a && rel(s1, t2))
                });
            if !answered {
                return Some(Unmatched {
                    offered_by: Side::Left,
                    action: a,
                    target: s1,
                });
            }
        }
        for &(a, t1) in self.index.outgoing(t) {
            let answered = (a == TAU_ID && rel(s, t1))
                || self.closure[s].iter().any(|&s1| {
                    rel(s1, t)
                        && self
                            .index
                            .outgoing(s1)
                            .iter()
                            .any(|&(b, s2)| b == a && rel(s2, t1))
                });
            if !answered {
                return Some(Unmatched {
                    offered_by: Side::Right,
                    action: a,
                    target: t1,
                });
            }
        }
        None
    }

    /// For every state, whether it starts an infinite internal path inside `members`.
    pub(crate) fn divergent_within(&self, members: &[bool]) -> Vec<bool> {
        let n = self.index.num_states();
        let edges = (0..n).filter(|&u| members[u]).flat_map(|u| {
            self.index
                .tau_successors(u)
                .filter(|&v| members[v])
                .map(move |v| (u, v))
        });
        let mut div = divergent_subset(n, edges);
        for (d, &m) in div.iter_mut().zip(members) {
            *d &= m;
        }
        div
    }
}
