//! Actions and the co-action algebra.
//!
//! A visible action `a` has a complementary co-action written `!a` in text form.
//! The internal action `tau` has no complement.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Text spelling of the internal action.
pub const TAU_LABEL: &str = "tau";
/// Alternative spelling of the internal action accepted on input.
pub const TAU_LABEL_ALT: &str = "i";
/// Prefix marking a co-visible action in text form.
pub const CO_PREFIX: char = '!';

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Action {
    Tau,
    Visible(Arc<str>),
    CoVisible(Arc<str>),
}

impl Action {
    /// Creates a visible action, rejecting labels that cannot be written to an `.aut` file
    /// without changing meaning.
    pub fn visible(label: impl AsRef<str>) -> Result<Self> {
        let label = label.as_ref();
        check_plain_label(label)?;
        Ok(Action::Visible(Arc::from(label)))
    }

    pub fn co_visible(label: impl AsRef<str>) -> Result<Self> {
        let label = label.as_ref();
        check_plain_label(label)?;
        Ok(Action::CoVisible(Arc::from(label)))
    }

    /// Decodes the text form: `tau`/`i` are internal, `!a` is the co-action of `a`.
    pub fn from_text(text: &str) -> Result<Self> {
        if text == TAU_LABEL || text == TAU_LABEL_ALT {
            return Ok(Action::Tau);
        }
        match text.strip_prefix(CO_PREFIX) {
            Some(rest) => Action::co_visible(rest),
            None => Action::visible(text),
        }
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Action::Tau)
    }

    pub fn is_visible(&self) -> bool {
        matches!(self, Action::Visible(_))
    }

    pub fn is_co_visible(&self) -> bool {
        matches!(self, Action::CoVisible(_))
    }

    /// The underlying label, `None` for the internal action.
    pub fn label(&self) -> Option<&str> {
        match self {
            Action::Tau => None,
            Action::Visible(l) | Action::CoVisible(l) => Some(l),
        }
    }

    /// The complementary action. Fails for the internal action.
    pub fn co(&self) -> Result<Action> {
        match self {
            Action::Tau => Err(Error::invalid("the internal action has no co-action")),
            Action::Visible(l) => Ok(Action::CoVisible(l.clone())),
            Action::CoVisible(l) => Ok(Action::Visible(l.clone())),
        }
    }

    /// Like [`Action::co`] but maps `tau` to `None`.
    pub fn try_co(&self) -> Option<Action> {
        self.co().ok()
    }

    /// The `.aut` spelling of this action.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    fn text_bytes(&self) -> impl Iterator<Item = u8> + '_ {
        let (prefix, body): (&[u8], &[u8]) = match self {
            Action::Tau => (b"", TAU_LABEL.as_bytes()),
            Action::Visible(l) => (b"", l.as_bytes()),
            Action::CoVisible(l) => (b"!", l.as_bytes()),
        };
        prefix.iter().chain(body.iter()).copied()
    }
}

/// Free function form of [`Action::co`].
pub fn co_action(a: &Action) -> Result<Action> {
    a.co()
}

fn check_plain_label(label: &str) -> Result<()> {
    if label.is_empty() {
        return Err(Error::invalid("action label must not be empty"));
    }
    if label == TAU_LABEL || label == TAU_LABEL_ALT {
        return Err(Error::invalid(format!(
            "label {label:?} is reserved for the internal action"
        )));
    }
    if label.starts_with(CO_PREFIX) {
        return Err(Error::invalid(format!(
            "label {label:?} must not start with '{CO_PREFIX}'"
        )));
    }
    if label.contains('"') || label.contains('\n') {
        return Err(Error::invalid(format!(
            "label {label:?} contains a quote or newline"
        )));
    }
    Ok(())
}

// Ordered by text spelling so that sorted transition lists are sorted by label as written.
impl Ord for Action {
    fn cmp(&self, other: &Self) -> Ordering {
        self.text_bytes().cmp(other.text_bytes())
    }
}

impl PartialOrd for Action {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Tau => f.write_str(TAU_LABEL),
            Action::Visible(l) => f.write_str(l),
            Action::CoVisible(l) => write!(f, "{CO_PREFIX}{l}"),
        }
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for Action {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Action {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Action::from_text(&text).map_err(serde::de::Error::custom)
    }
}
