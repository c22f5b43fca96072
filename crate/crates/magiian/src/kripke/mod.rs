//! Kripke models whose worlds are game histories.
//!
//! Two histories of the same length are indistinguishable to an agent when
//! the agent observed the same block at every visited location and played the
//! same own action at every step. Each agent's indistinguishability is an
//! equivalence relation; the model stores its non-reflexive pairs. A world is
//! labeled by the last location of its history.

pub mod dot;

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::game::{Game, GameError, History};
use crate::ids::{AgentId, LocationId};
use crate::uf::UnionFind;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("world index {index} out of range (model has {count} worlds)")]
    UnknownWorld { index: usize, count: usize },
    #[error("worlds have mixed lengths ({0} and {1})")]
    MixedLengths(usize, usize),
    #[error("duplicate world '{0}'")]
    DuplicateWorld(String),
    #[error("relation given for unknown agent '{0}'")]
    UnknownAgent(AgentId),
    #[error("relation pair ({0}, {1}) is reflexive; store only distinct pairs")]
    ReflexivePair(usize, usize),
    #[error("relation for agent {agent} is not transitively closed")]
    NotAnEquivalence { agent: AgentId },
}

/// Length of a shortest path in the union of all agents' relations.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn as_finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl std::fmt::Display for Distance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => serializer.serialize_u64(*d as u64),
            Distance::Infinite => serializer.serialize_none(),
        }
    }
}

/// An epistemic model: worlds, one equivalence relation per agent, labels.
///
/// Immutable after construction. Equality compares worlds, relations, and
/// labels; the canonical constructors sort worlds lexicographically, so two
/// models of the same histories built by different routes compare equal
/// exactly when their relations and labels agree.
#[derive(Clone, Debug)]
pub struct KripkeModel {
    game: Game,
    worlds: Vec<History>,
    keys: Vec<String>,
    key_index: HashMap<String, usize>,
    // Sorted (i, j) with i < j: the non-reflexive part of each equivalence.
    relations: BTreeMap<AgentId, Vec<(u32, u32)>>,
    labels: Vec<LocationId>,
    union_adj: Vec<Vec<u32>>,
    agent_adj: BTreeMap<AgentId, Vec<Vec<u32>>>,
}

impl PartialEq for KripkeModel {
    fn eq(&self, other: &Self) -> bool {
        self.worlds == other.worlds
            && self.relations == other.relations
            && self.labels == other.labels
    }
}

impl Eq for KripkeModel {}

impl KripkeModel {
    /// The model induced by all histories of length `n`.
    ///
    /// Worlds appear in lexicographic order. The relations are exactly the
    /// pairs [`history_indistinguishable`] accepts, computed by grouping
    /// histories on what each agent observes of them.
    pub fn induced(game: &Game, n: usize) -> Self {
        let worlds = game.enumerate_histories(n);
        let mut relations = BTreeMap::new();
        for agent in game.agents() {
            let classes = observation_classes(game, agent, &worlds);
            relations.insert(agent.clone(), pairs_from_classes(&classes));
        }
        Self::assemble(game.clone(), worlds, relations)
    }

    /// Build directly from worlds and per-agent pairs. The pairs (plus
    /// reflexivity) must already form an equivalence relation; order and
    /// orientation of the input pairs do not matter.
    pub fn from_parts(
        game: Game,
        worlds: Vec<History>,
        relations: BTreeMap<AgentId, Vec<(usize, usize)>>,
    ) -> Result<Self, ModelError> {
        if let [first, rest @ ..] = worlds.as_slice() {
            for w in rest {
                if w.len() != first.len() {
                    return Err(ModelError::MixedLengths(first.len(), w.len()));
                }
            }
        }
        {
            let mut seen = std::collections::BTreeSet::new();
            for w in &worlds {
                if !seen.insert(w) {
                    return Err(ModelError::DuplicateWorld(game.history_key(w)));
                }
            }
        }

        let count = worlds.len();
        let mut normalized: BTreeMap<AgentId, Vec<(u32, u32)>> = BTreeMap::new();
        for (agent, pairs) in relations {
            if game.agent_index(&agent).is_none() {
                return Err(ModelError::UnknownAgent(agent));
            }
            let mut cleaned = Vec::with_capacity(pairs.len());
            for (a, b) in pairs {
                if a >= count || b >= count {
                    return Err(ModelError::UnknownWorld {
                        index: a.max(b),
                        count,
                    });
                }
                if a == b {
                    return Err(ModelError::ReflexivePair(a, b));
                }
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                cleaned.push((lo as u32, hi as u32));
            }
            cleaned.sort_unstable();
            cleaned.dedup();

            // Transitive closure check: within each connected class, every
            // pair must be present.
            let mut uf = UnionFind::new(count);
            for &(a, b) in &cleaned {
                uf.union(a, b);
            }
            let expected: usize = uf
                .classes()
                .iter()
                .map(|c| c.len() * (c.len() - 1) / 2)
                .sum();
            if expected != cleaned.len() {
                return Err(ModelError::NotAnEquivalence { agent });
            }
            normalized.insert(agent, cleaned);
        }

        Ok(Self::assemble(game, worlds, normalized))
    }

    /// Internal constructor for relations already known to be class-shaped.
    pub(crate) fn from_classes(
        game: Game,
        worlds: Vec<History>,
        classes: BTreeMap<AgentId, Vec<Vec<u32>>>,
    ) -> Self {
        let relations = classes
            .into_iter()
            .map(|(agent, classes)| (agent, pairs_from_classes(&classes)))
            .collect();
        Self::assemble(game, worlds, relations)
    }

    fn assemble(
        game: Game,
        worlds: Vec<History>,
        mut relations: BTreeMap<AgentId, Vec<(u32, u32)>>,
    ) -> Self {
        for agent in game.agents() {
            relations.entry(agent.clone()).or_default();
        }
        let keys: Vec<String> = worlds.iter().map(|h| game.history_key(h)).collect();
        let key_index = keys
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();
        let labels: Vec<LocationId> = worlds.iter().map(|h| h.last().clone()).collect();

        let mut union_adj: Vec<Vec<u32>> = vec![Vec::new(); worlds.len()];
        let mut agent_adj: BTreeMap<AgentId, Vec<Vec<u32>>> = BTreeMap::new();
        for (agent, pairs) in &relations {
            let adj = agent_adj
                .entry(agent.clone())
                .or_insert_with(|| vec![Vec::new(); worlds.len()]);
            for &(a, b) in pairs {
                adj[a as usize].push(b);
                adj[b as usize].push(a);
                union_adj[a as usize].push(b);
                union_adj[b as usize].push(a);
            }
        }
        for row in &mut union_adj {
            row.sort_unstable();
            row.dedup();
        }

        Self {
            game,
            worlds,
            keys,
            key_index,
            relations,
            labels,
            union_adj,
            agent_adj,
        }
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn worlds(&self) -> &[History] {
        &self.worlds
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn world(&self, index: usize) -> Option<&History> {
        self.worlds.get(index)
    }

    /// The history string identifying world `index`.
    pub fn world_key(&self, index: usize) -> &str {
        &self.keys[index]
    }

    pub fn world_index(&self, key: &str) -> Option<usize> {
        self.key_index.get(key).copied()
    }

    pub fn index_of(&self, h: &History) -> Option<usize> {
        self.key_index.get(&self.game.history_key(h)).copied()
    }

    /// The single label of a world: the last location of its history.
    pub fn label(&self, index: usize) -> &LocationId {
        &self.labels[index]
    }

    /// Non-reflexive pairs of `agent`'s relation, sorted, each once.
    pub fn relation_pairs(&self, agent: &AgentId) -> &[(u32, u32)] {
        self.relations.get(agent).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn relations(&self) -> &BTreeMap<AgentId, Vec<(u32, u32)>> {
        &self.relations
    }

    /// Neighbors of `world` in the union of all agents' relations.
    pub fn neighbors(&self, world: usize) -> &[u32] {
        &self.union_adj[world]
    }

    pub fn agent_neighbors(&self, agent: &AgentId, world: usize) -> &[u32] {
        self.agent_adj
            .get(agent)
            .map(|adj| adj[world].as_slice())
            .unwrap_or(&[])
    }

    pub fn edge_count(&self) -> usize {
        self.relations.values().map(Vec::len).sum()
    }

    fn check_world(&self, index: usize) -> Result<(), ModelError> {
        if index < self.worlds.len() {
            Ok(())
        } else {
            Err(ModelError::UnknownWorld {
                index,
                count: self.worlds.len(),
            })
        }
    }

    /// All worlds reachable from `world` through any agent's relation,
    /// sorted ascending. Always contains `world` itself.
    pub fn connected_component(&self, world: usize) -> Result<Vec<usize>, ModelError> {
        self.check_world(world)?;
        let mut seen = vec![false; self.worlds.len()];
        let mut queue = VecDeque::from([world]);
        seen[world] = true;
        while let Some(w) = queue.pop_front() {
            for &v in &self.union_adj[w] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    queue.push_back(v as usize);
                }
            }
        }
        Ok((0..self.worlds.len()).filter(|&w| seen[w]).collect())
    }

    /// BFS distance from `from` to the nearest world satisfying `target`,
    /// through the union of all relations. `Finite(0)` when `from` itself
    /// satisfies the target.
    pub fn knowledge_distance(
        &self,
        from: usize,
        target: impl Fn(usize) -> bool,
    ) -> Result<Distance, ModelError> {
        self.check_world(from)?;
        if target(from) {
            return Ok(Distance::Finite(0));
        }
        let mut seen = vec![false; self.worlds.len()];
        seen[from] = true;
        let mut frontier = vec![from];
        let mut depth = 0usize;
        while !frontier.is_empty() {
            depth += 1;
            let mut next = Vec::new();
            for &w in &frontier {
                for &v in &self.union_adj[w] {
                    let v = v as usize;
                    if !seen[v] {
                        if target(v) {
                            return Ok(Distance::Finite(depth));
                        }
                        seen[v] = true;
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        Ok(Distance::Infinite)
    }
}

/// Whether `agent` cannot tell `h1` from `h2`: equal length, observationally
/// equal locations at every index, and equal own actions at every step.
/// Both histories must replay in `game`.
pub fn history_indistinguishable(
    game: &Game,
    h1: &History,
    h2: &History,
    agent: &AgentId,
) -> Result<bool, GameError> {
    let agent_index = game
        .agent_index(agent)
        .ok_or_else(|| GameError::UnknownAgent(agent.clone()))?;
    for h in [h1, h2] {
        if !game.replays(h) {
            return Err(GameError::ForeignHistory(game.history_key(h)));
        }
    }
    if h1.len() != h2.len() {
        return Ok(false);
    }
    if game.same_observation(agent, h1.start(), h2.start()) != Some(true) {
        return Ok(false);
    }
    for ((p1, l1), (p2, l2)) in h1.steps().iter().zip(h2.steps()) {
        if p1.action(agent_index) != p2.action(agent_index) {
            return Ok(false);
        }
        if game.same_observation(agent, l1, l2) != Some(true) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Group `worlds` into classes of agent-equal observation traces. Two
/// histories land in one class exactly when the agent saw the same block
/// sequence and played the same actions, i.e. when they are
/// indistinguishable per [`history_indistinguishable`].
fn observation_classes(game: &Game, agent: &AgentId, worlds: &[History]) -> Vec<Vec<u32>> {
    let agent_index = game
        .agent_index(agent)
        .expect("agent comes from game.agents()");
    // Intern observed blocks and own actions on the fly; a location outside
    // every block observes as itself, so partition gaps degrade gracefully.
    let mut action_codes: HashMap<crate::ids::ActionId, u64> = HashMap::new();
    let mut loc_codes: HashMap<LocationId, u64> = HashMap::new();
    let mut groups: HashMap<Vec<u64>, Vec<u32>> = HashMap::new();

    for (w, h) in worlds.iter().enumerate() {
        let mut sig = Vec::with_capacity(2 * h.len() + 1);
        for j in 0..=h.len() {
            if j > 0 {
                let (profile, _) = &h.steps()[j - 1];
                let code = match profile.action(agent_index) {
                    Some(a) => {
                        let next = action_codes.len() as u64;
                        *action_codes.entry(a.clone()).or_insert(next)
                    }
                    None => u64::MAX,
                };
                sig.push(code);
            }
            let loc = h.location_at(j).expect("index within history");
            match game.observation_block_index(agent, loc) {
                Some(block) => sig.push(2 * block as u64),
                None => {
                    let next = loc_codes.len() as u64;
                    let code = *loc_codes.entry(loc.clone()).or_insert(next);
                    sig.push(2 * code + 1);
                }
            }
        }
        groups.entry(sig).or_default().push(w as u32);
    }

    let mut classes: Vec<Vec<u32>> = groups.into_values().collect();
    classes.sort_by_key(|c| c[0]);
    classes
}

fn pairs_from_classes(classes: &[Vec<u32>]) -> Vec<(u32, u32)> {
    let mut pairs = Vec::new();
    for class in classes {
        for (i, &a) in class.iter().enumerate() {
            for &b in &class[i + 1..] {
                pairs.push(if a < b { (a, b) } else { (b, a) });
            }
        }
    }
    pairs.sort_unstable();
    pairs
}
