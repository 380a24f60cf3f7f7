//! Synchronous product with co-action handshakes.
//!
//! A move `a` of one factor whose co-action belongs to the other factor's alphabet can
//! only happen jointly with that co-action, and the pair becomes a single `tau`.
//! Every other move, including a factor's own `tau`, interleaves.

use std::collections::{BTreeSet, HashMap};

use crate::action::Action;
use crate::lts::{Lts, LtsBuilder, StateId};

/// Provenance of product states: product id to `(left, right)` pair and back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductStateMap {
    pairs: Vec<(StateId, StateId)>,
    lookup: HashMap<(StateId, StateId), StateId>,
}

impl ProductStateMap {
    fn new() -> Self {
        ProductStateMap {
            pairs: Vec::new(),
            lookup: HashMap::new(),
        }
    }

    fn insert(&mut self, pair: (StateId, StateId)) -> (StateId, bool) {
        if let Some(&id) = self.lookup.get(&pair) {
            return (id, false);
        }
        let id = self.pairs.len();
        self.pairs.push(pair);
        self.lookup.insert(pair, id);
        (id, true)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, s: StateId) -> (StateId, StateId) {
        self.pairs[s]
    }

    pub fn state_of(&self, left: StateId, right: StateId) -> Option<StateId> {
        self.lookup.get(&(left, right)).copied()
    }

    pub fn pairs(&self) -> &[(StateId, StateId)] {
        &self.pairs
    }
}

/// `(Σ₁ ∪ Σ₂)` minus every complementary pair split across the two alphabets.
pub fn product_alphabet(a1: &BTreeSet<Action>, a2: &BTreeSet<Action>) -> BTreeSet<Action> {
    let hidden = |a: &Action| {
        a.try_co().is_some_and(|co| {
            (a1.contains(a) && a2.contains(&co)) || (a2.contains(a) && a1.contains(&co))
        })
    };
    a1.iter().chain(a2).filter(|a| !hidden(a)).cloned().collect()
}

/// Labels present with the same polarity in both alphabets. Such labels interleave
/// independently rather than synchronise.
pub fn shared_labels(l1: &Lts, l2: &Lts) -> Vec<Action> {
    l1.alphabet()
        .intersection(l2.alphabet())
        .cloned()
        .collect()
}

/// Reachable part of `l1 × l2`, numbered in breadth-first discovery order.
pub fn sync_product(l1: &Lts, l2: &Lts) -> (Lts, ProductStateMap) {
    let sigma1 = l1.alphabet();
    let sigma2 = l2.alphabet();
    let alone = |a: &Action, other: &BTreeSet<Action>| a.try_co().is_none_or(|co| !other.contains(&co));

    let mut map = ProductStateMap::new();
    let mut builder = LtsBuilder::new();
    builder.extend_alphabet(product_alphabet(sigma1, sigma2));

    let root = (l1.initial(), l2.initial());
    map.insert(root);
    builder.add_state(pair_name(l1, l2, root));

    let mut next = 0;
    while next < map.len() {
        let source = next;
        let (s, t) = map.pair(source);
        next += 1;

        let mut moves: Vec<(Action, (StateId, StateId))> = Vec::new();
        for tr in l1.outgoing(s) {
            if alone(&tr.action, sigma2) {
                moves.push((tr.action.clone(), (tr.target, t)));
            }
        }
        for tr in l2.outgoing(t) {
            if alone(&tr.action, sigma1) {
                moves.push((tr.action.clone(), (s, tr.target)));
            }
        }
        for left in l1.outgoing(s) {
            let Some(co) = left.action.try_co() else { continue };
            if !sigma2.contains(&co) {
                continue;
            }
            for right in l2.outgoing(t).iter().filter(|r| r.action == co) {
                moves.push((Action::Tau, (left.target, right.target)));
            }
        }

        for (action, pair) in moves {
            let (target, fresh) = map.insert(pair);
            if fresh {
                builder.add_state(pair_name(l1, l2, pair));
            }
            builder.add_transition(source, action, target);
        }
    }

    let lts = builder
        .build(0)
        .expect("product construction only emits in-range transitions");
    (lts, map)
}

fn pair_name(l1: &Lts, l2: &Lts, (s, t): (StateId, StateId)) -> String {
    format!("({},{})", l1.state_name(s), l2.state_name(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aut::parse_aut;
    use crate::lts::Transition;

    fn act(s: &str) -> Action {
        Action::from_text(s).unwrap()
    }

    #[test]
    fn unit_factor_is_identity_on_reachable_part() {
        let l = parse_aut("des (0,3,4)\n(0,\"a\",1)\n(1,\"tau\",2)\n(2,\"b\",0)\n").unwrap();
        let unit = parse_aut("des (0,0,1)\n").unwrap();
        let (p, map) = sync_product(&l, &unit);
        assert_eq!(p.num_states(), 3);
        assert_eq!(p.alphabet(), l.alphabet());
        for tr in p.transitions() {
            let (s, _) = map.pair(tr.source);
            let (t, _) = map.pair(tr.target);
            assert!(l.transitions().contains(&Transition::new(s, tr.action.clone(), t)));
        }
        assert_eq!(p.num_transitions(), 3);
    }

    #[test]
    fn complementary_pair_becomes_tau() {
        let left = parse_aut("des (0,1,2)\n(0,\"a\",1)\n").unwrap();
        let right = parse_aut("des (0,1,2)\n(0,\"!a\",1)\n").unwrap();
        let (p, map) = sync_product(&left, &right);
        assert!(p.alphabet().is_empty());
        assert_eq!(p.num_states(), 2);
        assert_eq!(p.transitions(), &[Transition::new(0, Action::Tau, 1)]);
        assert_eq!(map.pair(1), (1, 1));
    }

    #[test]
    fn synchronising_actions_never_move_alone() {
        // Right never offers !a, so left's a is blocked.
        let left = parse_aut("des (0,2,2)\n(0,\"a\",1)\n(0,\"b\",1)\n").unwrap();
        let right = Lts::new(1, 0, [act("!a")], []).unwrap();
        let (p, _) = sync_product(&left, &right);
        assert_eq!(p.num_transitions(), 1);
        assert_eq!(p.transitions()[0].action, act("b"));
    }

    #[test]
    fn factor_tau_interleaves() {
        let left = parse_aut("des (0,1,2)\n(0,\"tau\",1)\n").unwrap();
        let right = parse_aut("des (0,1,2)\n(0,\"tau\",1)\n").unwrap();
        let (p, _) = sync_product(&left, &right);
        assert_eq!(p.num_states(), 4);
        assert_eq!(p.num_transitions(), 4);
    }

    #[test]
    fn alphabet_hides_split_pairs_only() {
        let a1: BTreeSet<Action> = [act("a"), act("b"), act("!c")].into();
        let a2: BTreeSet<Action> = [act("!a"), act("c"), act("d")].into();
        let x: Vec<String> = product_alphabet(&a1, &a2).iter().map(Action::to_text).collect();
        assert_eq!(x, ["b", "d"]);
    }

    #[test]
    fn numbering_is_breadth_first() {
        let left = parse_aut("des (0,2,3)\n(0,\"a\",1)\n(1,\"a\",2)\n").unwrap();
        let right = parse_aut("des (0,1,2)\n(0,\"b\",1)\n").unwrap();
        let (p, map) = sync_product(&left, &right);
        assert_eq!(map.pairs(), &[(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (2, 1)]);
        assert_eq!(p.state_name(4), "(1,1)");
    }
}
