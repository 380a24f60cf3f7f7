//! Signature refinement.
//!
//! The signature of a state is the set of `(action, block)` pairs it can reach by
//! internal steps that stay inside its own block, followed by one more step, with
//! the inert `(tau, own block)` pair left out. Blocks are split by signature until
//! stable. For divergence preservation a marker is added to the signature of every
//! state that can stay inside its block forever.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::index::{ActionId, TAU_ID};
use crate::lts::Lts;

use super::{DisjointUnion, DistinguishingStep, EquivalenceResult, Side};

const DIVERGENCE: (ActionId, usize) = (ActionId::MAX, 0);

/// Longest counterexample chain reported.
const MAX_STEPS: usize = 64;

pub fn branching_bisim(l1: &Lts, l2: &Lts) -> EquivalenceResult {
    check(l1, l2, false)
}

pub fn dpbb(l1: &Lts, l2: &Lts) -> EquivalenceResult {
    check(l1, l2, true)
}

/// Block id per union state of the coarsest (divergence-preserving) branching
/// bisimulation.
pub fn coarsest_partition(union: &DisjointUnion, divergence_sensitive: bool) -> Vec<usize> {
    refine(union, divergence_sensitive)
        .pop()
        .expect("refinement keeps at least one level")
}

fn check(l1: &Lts, l2: &Lts, divergence_sensitive: bool) -> EquivalenceResult {
    let union = DisjointUnion::new(l1, l2);
    let levels = refine(&union, divergence_sensitive);
    let last = levels.last().expect("at least one level");
    let (i1, i2) = (union.left_initial, union.right_initial);
    if last[i1] == last[i2] {
        EquivalenceResult {
            verdict: true,
            blocks: Some(union.blocks_of(last)),
            counterexample: None,
        }
    } else {
        EquivalenceResult {
            verdict: false,
            blocks: None,
            counterexample: Some(counterexample(&union, &levels, divergence_sensitive)),
        }
    }
}

type Signature = BTreeSet<(ActionId, usize)>;

/// All partitions computed, from the single block to the stable one.
fn refine(union: &DisjointUnion, divergence_sensitive: bool) -> Vec<Vec<usize>> {
    let n = union.num_states();
    let mut levels = vec![vec![0usize; n]];
    let mut count = usize::from(n > 0);
    loop {
        let current = levels.last().expect("non-empty");
        let sigs = signatures(union, current, divergence_sensitive);
        let mut ids: HashMap<(usize, &Signature), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|s| {
                let fresh = ids.len();
                *ids.entry((current[s], &sigs[s])).or_insert(fresh)
            })
            .collect();
        let new_count = ids.len();
        drop(ids);
        if new_count == count {
            return levels;
        }
        count = new_count;
        levels.push(next);
    }
}

/// Signatures of all states, computed per strongly connected component of the
/// inert graph in reverse topological order.
fn signatures(
    union: &DisjointUnion,
    block: &[usize],
    divergence_sensitive: bool,
) -> Vec<BTreeSet<(ActionId, usize)>> {
    let index = &union.index;
    let n = union.num_states();
    let inert = |s: usize| {
        index
            .tau_successors(s)
            .filter(move |&t| block[t] == block[s])
    };
    let sccs = tarjan(n, |s| inert(s).collect());
    let mut comp = vec![0usize; n];
    for (c, members) in sccs.iter().enumerate() {
        for &s in members {
            comp[s] = c;
        }
    }
    let mut comp_sig: Vec<BTreeSet<(ActionId, usize)>> = Vec::with_capacity(sccs.len());
    let mut comp_div: Vec<bool> = Vec::with_capacity(sccs.len());
    // Sinks first, so every successor component is already done.
    for (c, members) in sccs.iter().enumerate() {
        let mut sig = BTreeSet::new();
        let mut div = members.len() > 1;
        for &s in members {
            for &(a, t) in index.outgoing(s) {
                if a == TAU_ID && block[t] == block[s] {
                    if comp[t] == c {
                        div = true;
                    } else {
                        sig.extend(comp_sig[comp[t]].iter().copied());
                        div |= comp_div[comp[t]];
                    }
                } else {
                    sig.insert((a, block[t]));
                }
            }
        }
        comp_sig.push(sig);
        comp_div.push(div);
    }
    (0..n)
        .map(|s| {
            let mut sig = comp_sig[comp[s]].clone();
            if divergence_sensitive && comp_div[comp[s]] {
                sig.insert(DIVERGENCE);
            }
            sig
        })
        .collect()
}

/// Iterative Tarjan. Components come out sinks first.
fn tarjan(n: usize, successors: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let mut order = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if order[root] != UNSEEN {
            continue;
        }
        let mut frames: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        order[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, successors(root), 0));
        while let Some(frame) = frames.last_mut() {
            let (v, ref succ, ref mut next) = *frame;
            if *next < succ.len() {
                let w = succ[*next];
                *next += 1;
                if order[w] == UNSEEN {
                    order[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, successors(w), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(order[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(parent) = frames.last() {
                low[parent.0] = low[parent.0].min(low[v]);
            }
            if low[v] == order[v] {
                let mut members = Vec::new();
                loop {
                    let w = stack.pop().expect("v is on the stack");
                    on_stack[w] = false;
                    members.push(w);
                    if w == v {
                        break;
                    }
                }
                members.sort_unstable();
                out.push(members);
            }
        }
    }
    out
}

/// What one state can do at a given level: for each signature element, the first
/// target found, plus whether it diverges inside its block.
struct LocalView {
    moves: BTreeMap<(ActionId, usize), usize>,
    diverges: bool,
}

fn local_view(union: &DisjointUnion, block: &[usize], s: usize) -> LocalView {
    let index = &union.index;
    let n = union.num_states();
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut queue = std::collections::VecDeque::from([s]);
    let mut reached = Vec::new();
    let mut moves = BTreeMap::new();
    while let Some(u) = queue.pop_front() {
        reached.push(u);
        for &(a, t) in index.outgoing(u) {
            if a == TAU_ID && block[t] == block[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            } else {
                moves.entry((a, block[t])).or_insert(t);
            }
        }
    }
    let edges = reached.iter().flat_map(|&u| {
        index
            .tau_successors(u)
            .filter(move |&t| block[t] == block[u])
            .map(move |t| (u, t))
    });
    let diverges = crate::lts::divergent_subset(n, edges)[s];
    LocalView { moves, diverges }
}

/// Follows distinguishing moves from the initial pair downwards through the levels.
fn counterexample(
    union: &DisjointUnion,
    levels: &[Vec<usize>],
    divergence_sensitive: bool,
) -> Vec<DistinguishingStep> {
    let mut steps = Vec::new();
    let mut visited = BTreeSet::new();
    let (mut s, mut t) = (union.left_initial, union.right_initial);
    while steps.len() < MAX_STEPS && visited.insert((s, t)) {
        // The last level at which both were still together.
        let Some(k) = levels.iter().rposition(|p| p[s] == p[t]) else {
            break;
        };
        if k + 1 == levels.len() {
            break;
        }
        let block = &levels[k];
        let (vs, vt) = (local_view(union, block, s), local_view(union, block, t));
        let local = |u: usize| union.to_ref(u).state;
        if divergence_sensitive && vs.diverges != vt.diverges {
            steps.push(DistinguishingStep {
                left: local(s),
                right: local(t),
                offered_by: if vs.diverges { Side::Left } else { Side::Right },
                action: None,
                target: None,
            });
            break;
        }
        let difference = vs
            .moves
            .iter()
            .find(|(key, _)| !vt.moves.contains_key(key))
            .map(|(&key, &target)| (Side::Left, key, target))
            .or_else(|| {
                vt.moves
                    .iter()
                    .find(|(key, _)| !vs.moves.contains_key(key))
                    .map(|(&key, &target)| (Side::Right, key, target))
            });
        let Some((offered_by, (a, _), target)) = difference else {
            break;
        };
        steps.push(DistinguishingStep {
            left: local(s),
            right: local(t),
            offered_by,
            action: Some(union.index.action(a).clone()),
            target: Some(local(target)),
        });
        let other = if offered_by == Side::Left { &vt } else { &vs };
        let attempt = other
            .moves
            .iter()
            .find(|((b, _), _)| *b == a)
            .map(|(_, &u)| u);
        let Some(answer) = attempt else {
            break;
        };
        (s, t) = match offered_by {
            Side::Left => (target, answer),
            Side::Right => (answer, target),
        };
    }
    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::Action;
    use crate::lts::Transition;

    fn lts(n: usize, edges: &[(usize, &str, usize)]) -> Lts {
        let ts: Vec<Transition> = edges
            .iter()
            .map(|&(s, a, t)| Transition::new(s, Action::from_text(a).unwrap(), t))
            .collect();
        Lts::from_transitions(n, 0, ts).unwrap()
    }

    #[test]
    fn tarjan_orders_sinks_first() {
        let g = [vec![1], vec![2], vec![1, 3], vec![]];
        let sccs = tarjan(4, |s| g[s].clone());
        assert_eq!(sccs, vec![vec![3], vec![1, 2], vec![0]]);
    }

    #[test]
    fn inert_tau_is_invisible() {
        let a = lts(3, &[(0, "tau", 1), (1, "a", 2)]);
        let b = lts(2, &[(0, "a", 1)]);
        assert!(branching_bisim(&a, &b).verdict);
        assert!(dpbb(&a, &b).verdict);
    }

    #[test]
    fn classic_branching_counterexample() {
        // tau.a + b versus tau.a + a + b: the tau in the second is not inert.
        let p = lts(4, &[(0, "tau", 1), (1, "a", 2), (0, "b", 3)]);
        let q = lts(4, &[(0, "tau", 1), (1, "a", 2), (0, "a", 2), (0, "b", 3)]);
        let r = branching_bisim(&p, &q);
        assert!(!r.verdict);
        let cx = r.counterexample.unwrap();
        assert!(!cx.is_empty());
        assert_eq!((cx[0].left, cx[0].right), (0, 0));
    }

    #[test]
    fn divergence_separates_only_dpbb() {
        let a = lts(2, &[(0, "tau", 0), (0, "a", 1)]);
        let b = lts(2, &[(0, "a", 1)]);
        assert!(branching_bisim(&a, &b).verdict);
        let r = dpbb(&a, &b);
        assert!(!r.verdict);
        let cx = r.counterexample.unwrap();
        assert_eq!(cx.last().unwrap().action, None);
        assert_eq!(cx.last().unwrap().offered_by, Side::Left);
    }

    #[test]
    fn tau_cycle_through_two_states() {
        let a = lts(3, &[(0, "tau", 1), (1, "tau", 0), (1, "a", 2)]);
        let b = lts(2, &[(0, "a", 1)]);
        assert!(branching_bisim(&a, &b).verdict);
        assert!(!dpbb(&a, &b).verdict);
    }

    #[test]
    fn different_actions_are_told_apart() {
        let a = lts(2, &[(0, "a", 1)]);
        let b = lts(2, &[(0, "b", 1)]);
        let r = branching_bisim(&a, &b);
        assert!(!r.verdict);
        assert_eq!(r.counterexample.unwrap().len(), 1);
    }
}
