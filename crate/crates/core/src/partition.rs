use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::action::Action;
use crate::error::{Error, Result};
use crate::lts::Lts;

/// One of the two halves of a decomposition.
///
/// `First` owns `sigma1` and its control states carry the up tag (`_u`);
/// `Second` owns `sigma2` and uses the down tag (`_d`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Component {
    First,
    Second,
}

impl Component {
    pub const BOTH: [Component; 2] = [Component::First, Component::Second];

    pub fn other(self) -> Component {
        match self {
            Component::First => Component::Second,
            Component::Second => Component::First,
        }
    }

    /// Suffix used when rendering control state names.
    pub fn tag(self) -> &'static str {
        match self {
            Component::First => "u",
            Component::Second => "d",
        }
    }

    pub fn index(self) -> usize {
        match self {
            Component::First => 0,
            Component::Second => 1,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Two disjoint sets of observable actions.
///
/// Co-actions are allowed so that components of an earlier decomposition can be split
/// again, but a label and its co-action may not sit in different halves: they would
/// synchronise when the parts are composed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphabetPartition {
    sigma1: BTreeSet<Action>,
    sigma2: BTreeSet<Action>,
}

impl AlphabetPartition {
    pub fn new(
        sigma1: impl IntoIterator<Item = Action>,
        sigma2: impl IntoIterator<Item = Action>,
    ) -> Result<Self> {
        let sigma1: BTreeSet<Action> = sigma1.into_iter().collect();
        let sigma2: BTreeSet<Action> = sigma2.into_iter().collect();
        if sigma1.iter().chain(&sigma2).any(Action::is_tau) {
            return Err(Error::invalid(
                "the internal action cannot be part of a partition",
            ));
        }
        let shared: Vec<String> = sigma1.intersection(&sigma2).map(Action::to_text).collect();
        if !shared.is_empty() {
            return Err(Error::invalid(format!(
                "partition halves overlap on {}",
                shared.join(", ")
            )));
        }
        if let Some(a) = sigma1
            .iter()
            .find(|a| a.try_co().is_some_and(|co| sigma2.contains(&co)))
        {
            return Err(Error::invalid(format!(
                "{a} and its co-action are in different halves"
            )));
        }
        Ok(AlphabetPartition { sigma1, sigma2 })
    }

    /// Builds a partition from label text.
    pub fn from_labels<S: AsRef<str>>(sigma1: &[S], sigma2: &[S]) -> Result<Self> {
        let parse = |labels: &[S]| -> Result<Vec<Action>> {
            labels.iter().map(|l| Action::from_text(l.as_ref())).collect()
        };
        AlphabetPartition::new(parse(sigma1)?, parse(sigma2)?)
    }

    pub fn sigma1(&self) -> &BTreeSet<Action> {
        &self.sigma1
    }

    pub fn sigma2(&self) -> &BTreeSet<Action> {
        &self.sigma2
    }

    pub fn half(&self, c: Component) -> &BTreeSet<Action> {
        match c {
            Component::First => &self.sigma1,
            Component::Second => &self.sigma2,
        }
    }

    pub fn owner(&self, a: &Action) -> Option<Component> {
        if self.sigma1.contains(a) {
            Some(Component::First)
        } else if self.sigma2.contains(a) {
            Some(Component::Second)
        } else {
            None
        }
    }

    /// Checks that the two halves cover exactly the alphabet of `l`.
    pub fn check_covers(&self, l: &Lts) -> Result<()> {
        let missing: Vec<String> = l
            .alphabet()
            .iter()
            .filter(|a| self.owner(a).is_none())
            .map(Action::to_text)
            .collect();
        let extra: Vec<String> = self
            .sigma1
            .iter()
            .chain(&self.sigma2)
            .filter(|a| !l.alphabet().contains(a))
            .map(Action::to_text)
            .collect();
        let mut problems = Vec::new();
        if !missing.is_empty() {
            problems.push(format!("labels missing from the partition: {}", missing.join(", ")));
        }
        if !extra.is_empty() {
            problems.push(format!("labels not in the alphabet: {}", extra.join(", ")));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::invalid(problems.join("; ")))
        }
    }
}
