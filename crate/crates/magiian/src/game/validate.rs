//! Structural validation of game definitions.
//!
//! Every broken invariant becomes one [`Violation`] value; an empty report
//! means the game is well-formed. Availability of every action at every
//! location is deliberately not part of the default check (the alarm game
//! has `i` available only at `Start`), but [`ValidationOptions`] can demand
//! it.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::ids::{is_action_token, is_identifier, ActionId, AgentId, LocationId, RESERVED_WORDS};

use super::Game;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NameKind {
    Agent,
    Location,
    Action,
}

impl fmt::Display for NameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NameKind::Agent => "agent",
            NameKind::Location => "location",
            NameKind::Action => "action",
        })
    }
}

/// One broken invariant, with enough context to locate it in the definition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    NoAgents,
    DuplicateName {
        kind: NameKind,
        name: String,
    },
    InvalidName {
        kind: NameKind,
        name: String,
    },
    ReservedName {
        kind: NameKind,
        name: String,
    },
    UnknownInit {
        name: LocationId,
    },
    MissingActionSet {
        agent: AgentId,
    },
    EmptyActionSet {
        agent: AgentId,
    },
    ActionsForUnknownAgent {
        name: AgentId,
    },
    TransitionUnknownSource {
        index: usize,
        name: LocationId,
    },
    TransitionUnknownTarget {
        index: usize,
        name: LocationId,
    },
    TransitionProfileArity {
        index: usize,
        expected: usize,
        got: usize,
    },
    TransitionForeignAction {
        index: usize,
        agent: AgentId,
        action: ActionId,
    },
    MissingPartition {
        agent: AgentId,
    },
    PartitionForUnknownAgent {
        name: AgentId,
    },
    PartitionUnknownLocation {
        agent: AgentId,
        name: LocationId,
    },
    PartitionOverlap {
        agent: AgentId,
        location: LocationId,
    },
    PartitionGap {
        agent: AgentId,
        location: LocationId,
    },
    AvailabilityGap {
        location: LocationId,
        agent: AgentId,
        action: ActionId,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoAgents => write!(f, "game has no agents"),
            Violation::DuplicateName { kind, name } => {
                write!(f, "duplicate {kind} name '{name}'")
            }
            Violation::InvalidName { kind, name } => {
                write!(f, "{kind} name '{name}' is not a valid identifier")
            }
            Violation::ReservedName { kind, name } => {
                write!(f, "{kind} name '{name}' is reserved by the formula grammar")
            }
            Violation::UnknownInit { name } => {
                write!(f, "initial location '{name}' is not a location")
            }
            Violation::MissingActionSet { agent } => {
                write!(f, "agent {agent} has no action set")
            }
            Violation::EmptyActionSet { agent } => {
                write!(f, "agent {agent} has an empty action set")
            }
            Violation::ActionsForUnknownAgent { name } => {
                write!(f, "action set given for unknown agent '{name}'")
            }
            Violation::TransitionUnknownSource { index, name } => {
                write!(f, "transition {index}: unknown source location '{name}'")
            }
            Violation::TransitionUnknownTarget { index, name } => {
                write!(f, "transition {index}: unknown target location '{name}'")
            }
            Violation::TransitionProfileArity {
                index,
                expected,
                got,
            } => {
                write!(
                    f,
                    "transition {index}: profile has {got} actions, expected {expected}"
                )
            }
            Violation::TransitionForeignAction {
                index,
                agent,
                action,
            } => {
                write!(
                    f,
                    "transition {index}: action '{action}' is not in agent {agent}'s set"
                )
            }
            Violation::MissingPartition { agent } => {
                write!(f, "agent {agent} has no observation partition")
            }
            Violation::PartitionForUnknownAgent { name } => {
                write!(f, "observation partition given for unknown agent '{name}'")
            }
            Violation::PartitionUnknownLocation { agent, name } => {
                write!(
                    f,
                    "agent {agent}'s partition mentions unknown location '{name}'"
                )
            }
            Violation::PartitionOverlap { agent, location } => {
                write!(
                    f,
                    "agent {agent}'s partition lists location '{location}' in more than one block"
                )
            }
            Violation::PartitionGap { agent, location } => {
                write!(
                    f,
                    "agent {agent}'s partition does not cover location '{location}'"
                )
            }
            Violation::AvailabilityGap {
                location,
                agent,
                action,
            } => {
                write!(
                    f,
                    "agent {agent}'s action '{action}' is unavailable at location '{location}'"
                )
            }
        }
    }
}

#[derive(Clone, Copy, Default, Debug)]
pub struct ValidationOptions {
    /// Also require every action of every agent to appear in some outgoing
    /// profile at every location. Most games fail this on purpose.
    pub strict_availability: bool,
}

/// The outcome of validation: all violations, in definition order.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            writeln!(f, "game is well-formed")
        } else {
            for v in &self.violations {
                writeln!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

pub fn validate_game(game: &Game) -> ValidationReport {
    validate_game_with(game, ValidationOptions::default())
}

pub fn validate_game_with(game: &Game, options: ValidationOptions) -> ValidationReport {
    let mut out = Vec::new();

    if game.agents().is_empty() {
        out.push(Violation::NoAgents);
    }
    check_names(
        &mut out,
        NameKind::Agent,
        game.agents().iter().map(|a| a.as_str()),
    );
    check_names(
        &mut out,
        NameKind::Location,
        game.locations().iter().map(|l| l.as_str()),
    );

    if !game.has_location(game.init()) {
        out.push(Violation::UnknownInit {
            name: game.init().clone(),
        });
    }

    let agent_set: HashSet<&AgentId> = game.agents().iter().collect();
    for agent in game.agents() {
        match game.raw_actions().get(agent) {
            None => out.push(Violation::MissingActionSet {
                agent: agent.clone(),
            }),
            Some(actions) if actions.is_empty() => out.push(Violation::EmptyActionSet {
                agent: agent.clone(),
            }),
            Some(actions) => {
                let mut seen = HashSet::new();
                for action in actions {
                    if !is_action_token(action.as_str()) {
                        out.push(Violation::InvalidName {
                            kind: NameKind::Action,
                            name: action.as_str().to_owned(),
                        });
                    }
                    if !seen.insert(action) {
                        out.push(Violation::DuplicateName {
                            kind: NameKind::Action,
                            name: action.as_str().to_owned(),
                        });
                    }
                }
            }
        }
    }
    for name in game.raw_actions().keys() {
        if !agent_set.contains(name) {
            out.push(Violation::ActionsForUnknownAgent { name: name.clone() });
        }
    }

    for (index, tr) in game.transitions().iter().enumerate() {
        if !game.has_location(&tr.from) {
            out.push(Violation::TransitionUnknownSource {
                index,
                name: tr.from.clone(),
            });
        }
        if !game.has_location(&tr.to) {
            out.push(Violation::TransitionUnknownTarget {
                index,
                name: tr.to.clone(),
            });
        }
        if tr.profile.len() != game.agents().len() {
            out.push(Violation::TransitionProfileArity {
                index,
                expected: game.agents().len(),
                got: tr.profile.len(),
            });
            continue;
        }
        for (agent, action) in game.agents().iter().zip(tr.profile.actions()) {
            if !game.actions_of(agent).contains(action) {
                out.push(Violation::TransitionForeignAction {
                    index,
                    agent: agent.clone(),
                    action: action.clone(),
                });
            }
        }
    }

    for agent in game.agents() {
        match game.raw_observations().get(agent) {
            None => out.push(Violation::MissingPartition {
                agent: agent.clone(),
            }),
            Some(blocks) => {
                let mut counts: HashMap<&LocationId, usize> = HashMap::new();
                for block in blocks {
                    for loc in block {
                        if !game.has_location(loc) {
                            out.push(Violation::PartitionUnknownLocation {
                                agent: agent.clone(),
                                name: loc.clone(),
                            });
                        }
                        *counts.entry(loc).or_default() += 1;
                    }
                }
                for loc in game.locations() {
                    match counts.get(loc).copied().unwrap_or(0) {
                        0 => out.push(Violation::PartitionGap {
                            agent: agent.clone(),
                            location: loc.clone(),
                        }),
                        1 => {}
                        _ => out.push(Violation::PartitionOverlap {
                            agent: agent.clone(),
                            location: loc.clone(),
                        }),
                    }
                }
            }
        }
    }
    for name in game.raw_observations().keys() {
        if !agent_set.contains(name) {
            out.push(Violation::PartitionForUnknownAgent { name: name.clone() });
        }
    }

    if options.strict_availability {
        for loc in game.locations() {
            for agent in game.agents() {
                for action in game.actions_of(agent) {
                    let used = game.transitions().iter().any(|tr| {
                        &tr.from == loc
                            && game.agent_index(agent).and_then(|i| tr.profile.action(i))
                                == Some(action)
                    });
                    if !used {
                        out.push(Violation::AvailabilityGap {
                            location: loc.clone(),
                            agent: agent.clone(),
                            action: action.clone(),
                        });
                    }
                }
            }
        }
    }

    ValidationReport { violations: out }
}

// Agent and location names must be formula identifiers and must not collide
// with the grammar's keywords; otherwise they could never be written in a
// formula or a K[...] argument.
fn check_names<'a>(out: &mut Vec<Violation>, kind: NameKind, names: impl Iterator<Item = &'a str>) {
    let mut seen = BTreeSet::new();
    for name in names {
        if !is_identifier(name) {
            out.push(Violation::InvalidName {
                kind,
                name: name.to_owned(),
            });
        } else if RESERVED_WORDS.contains(&name) {
            out.push(Violation::ReservedName {
                kind,
                name: name.to_owned(),
            });
        }
        if !seen.insert(name) {
            out.push(Violation::DuplicateName {
                kind,
                name: name.to_owned(),
            });
        }
    }
}
