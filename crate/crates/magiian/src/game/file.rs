//! The on-disk game format: a UTF-8 JSON document.
//!
//! ```json
//! {
//!   "agents": ["Human", "AI"],
//!   "locations": ["Start", "On", "Off"],
//!   "init": "Start",
//!   "actions": { "Human": ["i", "r", "t"], "AI": ["*"] },
//!   "transitions": [
//!     { "from": "Start", "profile": { "Human": "i", "AI": "*" }, "to": "On" }
//!   ],
//!   "observations": { "Human": [["Start"], ["On", "Off"]], "AI": [["Start"], ["On"], ["Off"]] }
//! }
//! ```
//!
//! Loading distinguishes two failure classes. Schema problems (unreadable
//! file, missing field, a transition profile that does not give exactly one
//! action per agent) are [`FileError`]s. Name-level problems (a transition to
//! a location that does not exist, a partition gap) load fine and are left
//! for [`validate_game`](super::validate_game) to report.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ids::{ActionId, AgentId, LocationId};

use super::{ActionProfile, Game, Transition};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read game file: {0}")]
    Read(#[from] std::io::Error),
    #[error("cannot parse game file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("transition {index}: {message}")]
    Profile { index: usize, message: String },
}

#[derive(Serialize, Deserialize)]
struct GameDoc {
    agents: Vec<String>,
    locations: Vec<String>,
    init: String,
    actions: BTreeMap<String, Vec<String>>,
    transitions: Vec<TransitionDoc>,
    observations: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize)]
struct TransitionDoc {
    from: String,
    profile: BTreeMap<String, String>,
    to: String,
}

pub fn game_from_json(text: &str) -> Result<Game, FileError> {
    let doc: GameDoc = serde_json::from_str(text)?;
    let agents: Vec<AgentId> = doc.agents.iter().map(AgentId::new).collect();

    let mut transitions = Vec::with_capacity(doc.transitions.len());
    for (index, tr) in doc.transitions.iter().enumerate() {
        let mut actions = Vec::with_capacity(agents.len());
        for agent in &agents {
            match tr.profile.get(agent.as_str()) {
                Some(action) => actions.push(ActionId::new(action)),
                None => {
                    return Err(FileError::Profile {
                        index,
                        message: format!("profile gives no action for agent {agent}"),
                    })
                }
            }
        }
        for key in tr.profile.keys() {
            if !doc.agents.iter().any(|a| a == key) {
                return Err(FileError::Profile {
                    index,
                    message: format!("profile names unknown agent '{key}'"),
                });
            }
        }
        transitions.push(Transition {
            from: LocationId::new(&tr.from),
            profile: ActionProfile::new(actions),
            to: LocationId::new(&tr.to),
        });
    }

    Ok(Game::new(
        agents,
        doc.locations.iter().map(LocationId::new).collect(),
        LocationId::new(&doc.init),
        doc.actions
            .iter()
            .map(|(agent, actions)| {
                (
                    AgentId::new(agent),
                    actions.iter().map(ActionId::new).collect(),
                )
            })
            .collect(),
        transitions,
        doc.observations
            .iter()
            .map(|(agent, blocks)| {
                (
                    AgentId::new(agent),
                    blocks
                        .iter()
                        .map(|block| block.iter().map(LocationId::new).collect())
                        .collect(),
                )
            })
            .collect(),
    ))
}

pub fn game_to_json(game: &Game) -> String {
    let doc = GameDoc {
        agents: game
            .agents()
            .iter()
            .map(|a| a.as_str().to_owned())
            .collect(),
        locations: game
            .locations()
            .iter()
            .map(|l| l.as_str().to_owned())
            .collect(),
        init: game.init().as_str().to_owned(),
        actions: game
            .raw_actions()
            .iter()
            .map(|(agent, actions)| {
                (
                    agent.as_str().to_owned(),
                    actions.iter().map(|a| a.as_str().to_owned()).collect(),
                )
            })
            .collect(),
        transitions: game
            .transitions()
            .iter()
            .map(|tr| TransitionDoc {
                from: tr.from.as_str().to_owned(),
                profile: game
                    .agents()
                    .iter()
                    .zip(tr.profile.actions())
                    .map(|(agent, action)| (agent.as_str().to_owned(), action.as_str().to_owned()))
                    .collect(),
                to: tr.to.as_str().to_owned(),
            })
            .collect(),
        observations: game
            .raw_observations()
            .iter()
            .map(|(agent, blocks)| {
                (
                    agent.as_str().to_owned(),
                    blocks
                        .iter()
                        .map(|block| block.iter().map(|l| l.as_str().to_owned()).collect())
                        .collect(),
                )
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("game documents always serialize")
}

pub fn load_game(path: impl AsRef<Path>) -> Result<Game, FileError> {
    game_from_json(&std::fs::read_to_string(path)?)
}

pub fn save_game(game: &Game, path: impl AsRef<Path>) -> Result<(), FileError> {
    Ok(std::fs::write(path, game_to_json(game))?)
}
