//! Games of imperfect information against nature, and their histories.
//!
//! A game couples a finite location graph with one action per agent per step
//! and a per-agent observation partition over locations. Transitions form a
//! relation, not a function: several target locations for the same source and
//! action profile mean nature picks the outcome.
//!
//! Construction is permissive. A [`Game`] value may carry dangling names or a
//! broken partition; [`validate_game`] reports every such defect as data, and
//! the operations that need a well-formed game state their errors instead of
//! panicking.

mod file;
mod validate;

pub use file::{game_from_json, game_to_json, load_game, save_game, FileError};
pub use validate::{
    validate_game, validate_game_with, NameKind, ValidationOptions, ValidationReport, Violation,
};

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::ids::{ActionId, AgentId, LocationId};

/// One action per agent, in the owning game's agent order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ActionProfile {
    actions: Vec<ActionId>,
}

impl ActionProfile {
    pub fn new(actions: Vec<ActionId>) -> Self {
        Self { actions }
    }

    pub fn of<I: Into<ActionId>>(actions: impl IntoIterator<Item = I>) -> Self {
        Self::new(actions.into_iter().map(Into::into).collect())
    }

    pub fn actions(&self) -> &[ActionId] {
        &self.actions
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn action(&self, agent_index: usize) -> Option<&ActionId> {
        self.actions.get(agent_index)
    }
}

/// A single entry of the transition relation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Transition {
    pub from: LocationId,
    pub profile: ActionProfile,
    pub to: LocationId,
}

/// Errors from game operations whose preconditions were not met.
#[derive(Debug, Error)]
pub enum GameError {
    #[error("unknown location '{0}'")]
    UnknownLocation(LocationId),
    #[error("malformed action profile: {0}")]
    MalformedProfile(String),
    #[error("no transition from '{from}' under '{profile}' to '{to}'")]
    InvalidExtension {
        from: LocationId,
        profile: String,
        to: LocationId,
    },
    #[error("history does not replay in this game: {0}")]
    ForeignHistory(String),
    #[error("unknown agent '{0}'")]
    UnknownAgent(AgentId),
}

/// A game arena: agents, locations, per-agent actions, a transition relation
/// resolved by nature, and per-agent observation partitions.
#[derive(Clone, Debug)]
pub struct Game {
    agents: Vec<AgentId>,
    locations: Vec<LocationId>,
    init: LocationId,
    actions: BTreeMap<AgentId, Vec<ActionId>>,
    transitions: Vec<Transition>,
    observations: BTreeMap<AgentId, Vec<Vec<LocationId>>>,
    // Derived lookup structure, rebuilt on construction.
    index: GameIndex,
}

#[derive(Clone, Debug, Default)]
struct GameIndex {
    agent_pos: HashMap<AgentId, usize>,
    location_set: HashSet<LocationId>,
    transition_set: BTreeSet<Transition>,
    // Outgoing edges per source, sorted by (profile, target); drives the
    // deterministic order of successors and enumerate_histories.
    outgoing: HashMap<LocationId, BTreeSet<(ActionProfile, LocationId)>>,
    // Observation block index per agent. On an overlapping partition the
    // first containing block wins; validate_game reports the overlap.
    obs_block: HashMap<AgentId, HashMap<LocationId, usize>>,
}

impl PartialEq for Game {
    fn eq(&self, other: &Self) -> bool {
        self.agents == other.agents
            && self.locations == other.locations
            && self.init == other.init
            && self.actions == other.actions
            && self.transitions == other.transitions
            && self.observations == other.observations
    }
}

impl Eq for Game {}

impl Game {
    pub fn new(
        agents: Vec<AgentId>,
        locations: Vec<LocationId>,
        init: LocationId,
        actions: BTreeMap<AgentId, Vec<ActionId>>,
        transitions: Vec<Transition>,
        observations: BTreeMap<AgentId, Vec<Vec<LocationId>>>,
    ) -> Self {
        let mut game = Self {
            agents,
            locations,
            init,
            actions,
            transitions,
            observations,
            index: GameIndex::default(),
        };
        game.rebuild_index();
        game
    }

    fn rebuild_index(&mut self) {
        let mut index = GameIndex::default();
        for (pos, agent) in self.agents.iter().enumerate() {
            index.agent_pos.entry(agent.clone()).or_insert(pos);
        }
        index.location_set = self.locations.iter().cloned().collect();
        for tr in &self.transitions {
            index.transition_set.insert(tr.clone());
            index
                .outgoing
                .entry(tr.from.clone())
                .or_default()
                .insert((tr.profile.clone(), tr.to.clone()));
        }
        for (agent, blocks) in &self.observations {
            let by_loc = index.obs_block.entry(agent.clone()).or_default();
            for (block_idx, block) in blocks.iter().enumerate() {
                for loc in block {
                    by_loc.entry(loc.clone()).or_insert(block_idx);
                }
            }
        }
        self.index = index;
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    pub fn agent_index(&self, agent: &AgentId) -> Option<usize> {
        self.index.agent_pos.get(agent).copied()
    }

    pub fn locations(&self) -> &[LocationId] {
        &self.locations
    }

    pub fn has_location(&self, loc: &LocationId) -> bool {
        self.index.location_set.contains(loc)
    }

    pub fn init(&self) -> &LocationId {
        &self.init
    }

    pub fn actions_of(&self, agent: &AgentId) -> &[ActionId] {
        self.actions.get(agent).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn observation_blocks(&self, agent: &AgentId) -> &[Vec<LocationId>] {
        self.observations
            .get(agent)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub(crate) fn raw_actions(&self) -> &BTreeMap<AgentId, Vec<ActionId>> {
        &self.actions
    }

    pub(crate) fn raw_observations(&self) -> &BTreeMap<AgentId, Vec<Vec<LocationId>>> {
        &self.observations
    }

    /// Index of the observation block containing `loc` for `agent`, if any.
    /// On an overlapping partition the first containing block wins.
    pub fn observation_block_index(&self, agent: &AgentId, loc: &LocationId) -> Option<usize> {
        self.index.obs_block.get(agent)?.get(loc).copied()
    }

    /// Whether `agent` cannot tell `a` and `b` apart, i.e. both locations sit
    /// in the same observation block. Unknown locations or partition gaps
    /// yield `None`.
    pub fn same_observation(
        &self,
        agent: &AgentId,
        a: &LocationId,
        b: &LocationId,
    ) -> Option<bool> {
        let by_loc = self.index.obs_block.get(agent)?;
        Some(by_loc.get(a)? == by_loc.get(b)?)
    }

    fn check_profile(&self, profile: &ActionProfile) -> Result<(), GameError> {
        if profile.len() != self.agents.len() {
            return Err(GameError::MalformedProfile(format!(
                "expected {} actions, got {}",
                self.agents.len(),
                profile.len()
            )));
        }
        for (agent, action) in self.agents.iter().zip(profile.actions()) {
            if !self.actions_of(agent).contains(action) {
                return Err(GameError::MalformedProfile(format!(
                    "action '{action}' is not in agent {agent}'s action set"
                )));
            }
        }
        Ok(())
    }

    /// All locations nature may pick after `profile` is played at `from`.
    /// The set may be empty: availability of actions is not guaranteed.
    pub fn successors(
        &self,
        from: &LocationId,
        profile: &ActionProfile,
    ) -> Result<BTreeSet<LocationId>, GameError> {
        if !self.has_location(from) {
            return Err(GameError::UnknownLocation(from.clone()));
        }
        self.check_profile(profile)?;
        let mut out = BTreeSet::new();
        if let Some(row) = self.index.outgoing.get(from) {
            for (p, to) in row {
                if p == profile {
                    out.insert(to.clone());
                }
            }
        }
        Ok(out)
    }

    /// Append one step to a history, provided the transition exists.
    pub fn extend(
        &self,
        h: &History,
        profile: ActionProfile,
        to: LocationId,
    ) -> Result<History, GameError> {
        let tr = Transition {
            from: h.last().clone(),
            profile,
            to,
        };
        if self.index.transition_set.contains(&tr) {
            Ok(h.extended(tr.profile, tr.to))
        } else {
            Err(GameError::InvalidExtension {
                from: tr.from,
                profile: self.profile_token(&tr.profile),
                to: tr.to,
            })
        }
    }

    /// Every history of exactly `n` steps, in lexicographic order of the
    /// action and location names along the history. A deadlocked branch
    /// contributes nothing, so the result may be smaller than the full tree.
    pub fn enumerate_histories(&self, n: usize) -> Vec<History> {
        let mut level = vec![History::initial(self.init.clone())];
        for _ in 0..n {
            let mut next = Vec::with_capacity(level.len() * 2);
            for h in &level {
                if let Some(row) = self.index.outgoing.get(h.last()) {
                    for (profile, to) in row {
                        next.push(h.extended(profile.clone(), to.clone()));
                    }
                }
            }
            level = next;
        }
        level
    }

    /// Whether `h` starts at this game's initial location and every step is a
    /// transition of this game.
    pub fn replays(&self, h: &History) -> bool {
        if h.start() != &self.init {
            return false;
        }
        let mut from = h.start().clone();
        for (profile, to) in h.steps() {
            let tr = Transition {
                from,
                profile: profile.clone(),
                to: to.clone(),
            };
            if !self.index.transition_set.contains(&tr) {
                return false;
            }
            from = to.clone();
        }
        true
    }

    /// The canonical token for a profile inside a history string. Agents
    /// whose whole action set is a single action contribute nothing (their
    /// move carries no information); what remains is joined with commas. For
    /// the alarm game this prints the Human action alone: `i`, `r`, `t`.
    pub fn profile_token(&self, profile: &ActionProfile) -> String {
        let mut parts = Vec::new();
        for (i, action) in profile.actions().iter().enumerate() {
            let forced = self
                .agents
                .get(i)
                .map(|agent| self.actions_of(agent).len() == 1)
                .unwrap_or(false);
            if !forced {
                parts.push(action.as_str());
            }
        }
        if parts.is_empty() {
            parts = profile.actions().iter().map(|a| a.as_str()).collect();
        }
        parts.join(",")
    }

    /// Inverse of [`profile_token`](Self::profile_token): accepts either the
    /// reduced form (choices for choosing agents only) or the full
    /// comma-joined form with one action per agent.
    pub fn profile_from_token(&self, token: &str) -> Result<ActionProfile, GameError> {
        let parts: Vec<&str> = if token.is_empty() {
            Vec::new()
        } else {
            token.split(',').collect()
        };
        let choosing: Vec<usize> = (0..self.agents.len())
            .filter(|&i| self.actions_of(&self.agents[i]).len() != 1)
            .collect();
        let actions: Vec<ActionId> = if parts.len() == self.agents.len() {
            parts.iter().map(|p| ActionId::new(*p)).collect()
        } else if parts.len() == choosing.len() {
            let mut next = parts.iter();
            (0..self.agents.len())
                .map(|i| {
                    if choosing.contains(&i) {
                        ActionId::new(*next.next().expect("one part per choosing agent"))
                    } else {
                        self.actions_of(&self.agents[i])[0].clone()
                    }
                })
                .collect()
        } else {
            return Err(GameError::MalformedProfile(format!(
                "token '{token}' gives {} actions, expected {} (or {} for choosing agents)",
                parts.len(),
                self.agents.len(),
                choosing.len()
            )));
        };
        let profile = ActionProfile::new(actions);
        self.check_profile(&profile)?;
        Ok(profile)
    }

    /// Render a history as the space-separated alternation of locations and
    /// profile tokens, e.g. `Start i Off r Off`. This string is the history's
    /// identity everywhere outside the library: CLI arguments, DOT node ids,
    /// dump files.
    pub fn history_key(&self, h: &History) -> String {
        let mut out = String::new();
        out.push_str(h.start().as_str());
        for (profile, loc) in h.steps() {
            out.push(' ');
            out.push_str(&self.profile_token(profile));
            out.push(' ');
            out.push_str(loc.as_str());
        }
        out
    }
}

/// A finite play: the initial location followed by (profile, location) steps.
///
/// Histories compare and hash structurally, which makes equality of worlds in
/// a Kripke model plain value equality. The derived `Ord` is the
/// lexicographic order on names used for deterministic iteration.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct History {
    start: LocationId,
    steps: Vec<(ActionProfile, LocationId)>,
}

impl History {
    pub fn initial(start: LocationId) -> Self {
        Self {
            start,
            steps: Vec::new(),
        }
    }

    pub fn from_steps(start: LocationId, steps: Vec<(ActionProfile, LocationId)>) -> Self {
        Self { start, steps }
    }

    pub fn start(&self) -> &LocationId {
        &self.start
    }

    pub fn steps(&self) -> &[(ActionProfile, LocationId)] {
        &self.steps
    }

    /// Number of steps taken (the history's length `n`).
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> &LocationId {
        self.steps.last().map(|(_, l)| l).unwrap_or(&self.start)
    }

    /// The location visited after `j` steps; `j = 0` is the start.
    pub fn location_at(&self, j: usize) -> Option<&LocationId> {
        if j == 0 {
            Some(&self.start)
        } else {
            self.steps.get(j - 1).map(|(_, l)| l)
        }
    }

    pub fn extended(&self, profile: ActionProfile, to: LocationId) -> Self {
        let mut steps = Vec::with_capacity(self.steps.len() + 1);
        steps.extend_from_slice(&self.steps);
        steps.push((profile, to));
        Self {
            start: self.start.clone(),
            steps,
        }
    }
}

impl fmt::Display for History {
    /// Game-independent rendering: full comma-joined profiles. Prefer
    /// [`Game::history_key`] where the game is at hand.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for (profile, loc) in &self.steps {
            let token: Vec<&str> = profile.actions().iter().map(|a| a.as_str()).collect();
            write!(f, " {} {}", token.join(","), loc)?;
        }
        Ok(())
    }
}
