//! Shared name types for agents, locations, and actions.
//!
//! Ids are cheap to clone and compare by name. Construction never validates:
//! a game definition may reference names that do not exist, and
//! [`validate_game`](crate::game::validate_game) reports those as data rather
//! than refusing to build the value.

use std::fmt;
use std::sync::Arc;

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: impl AsRef<str>) -> Self {
                Self(Arc::from(name.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({:?})", stringify!($name), &*self.0)
            }
        }

        impl From<&str> for $name {
            fn from(name: &str) -> Self {
                Self::new(name)
            }
        }

        impl From<String> for $name {
            fn from(name: String) -> Self {
                Self(Arc::from(name))
            }
        }

        impl PartialEq<str> for $name {
            fn eq(&self, other: &str) -> bool {
                &*self.0 == other
            }
        }

        impl PartialEq<&str> for $name {
            fn eq(&self, other: &&str) -> bool {
                &*self.0 == *other
            }
        }
    };
}

id_type! {
    /// Name of an agent, e.g. `Human`.
    AgentId
}
id_type! {
    /// Name of a game location, e.g. `Off`. Location names double as
    /// propositional atoms in formulas.
    LocationId
}
id_type! {
    /// Name of an action, e.g. `r` or the dummy `*`.
    ActionId
}

/// Words the formula grammar claims for itself. A location or agent carrying
/// one of these names could never be written in a formula.
pub const RESERVED_WORDS: &[&str] = &["K", "E", "C", "true", "false"];

/// The lexical class formulas accept for atoms and `K[...]` arguments:
/// `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Action names never appear in formulas, so they only need to survive the
/// space-separated history syntax: non-empty, no whitespace, and none of the
/// characters that delimit tokens. The dummy action `*` is fine.
pub fn is_action_token(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| !c.is_whitespace() && c != ',' && c != '"')
}
