//! Generators for the property suite: random small games, the models they
//! induce, and random formulas over their vocabulary.

use std::collections::BTreeMap;

use proptest::prelude::*;

use magiian::game::{ActionProfile, Game, Transition};
use magiian::ids::{ActionId, AgentId, LocationId};
use magiian::kripke::KripkeModel;
use magiian::logic::Formula;

const AGENT_NAMES: &[&str] = &["P", "Q", "R"];
const LOCATION_NAMES: &[&str] = &["L0", "L1", "L2", "L3"];
const ACTION_NAMES: &[&str] = &["x", "y"];

/// Everything a random game is assembled from. Sizes are kept small enough
/// that the product of action counts stays at, or below, four profiles.
#[derive(Debug, Clone)]
pub struct GameSeed {
    agent_count: usize,
    location_count: usize,
    action_counts: Vec<usize>,
    transition_flags: Vec<bool>,
    partition_blocks: Vec<usize>,
    depth: usize,
}

fn seed_strategy() -> impl Strategy<Value = GameSeed> {
    (1usize..=3, 2usize..=4, 1usize..=3).prop_flat_map(|(agent_count, location_count, depth)| {
        let action_counts = prop::collection::vec(1usize..=2, agent_count)
            .prop_filter("at most four action profiles", |counts| {
                counts.iter().product::<usize>() <= 4
            });
        // One flag per (source, profile, target) triple; one block id per
        // (agent, location) pair.
        let flags = prop::collection::vec(
            prop::bool::weighted(0.3),
            location_count * 4 * location_count,
        );
        let blocks =
            prop::collection::vec(0usize..location_count, AGENT_NAMES.len() * location_count);
        (flags, blocks, action_counts).prop_map(
            move |(transition_flags, partition_blocks, action_counts)| GameSeed {
                agent_count,
                location_count,
                action_counts,
                transition_flags,
                partition_blocks,
                depth,
            },
        )
    })
}

fn build_game(seed: &GameSeed) -> Game {
    let agents: Vec<AgentId> = AGENT_NAMES[..seed.agent_count]
        .iter()
        .map(|&a| AgentId::new(a))
        .collect();
    let locations: Vec<LocationId> = LOCATION_NAMES[..seed.location_count]
        .iter()
        .map(|&l| LocationId::new(l))
        .collect();

    let mut actions = BTreeMap::new();
    for (agent, &count) in agents.iter().zip(&seed.action_counts) {
        let set: Vec<ActionId> = ACTION_NAMES[..count]
            .iter()
            .map(|&a| ActionId::new(a))
            .collect();
        actions.insert(agent.clone(), set);
    }

    // Cartesian product of the agents' action sets, in agent order.
    let mut profiles = vec![Vec::new()];
    for agent in &agents {
        let mut next = Vec::new();
        for prefix in &profiles {
            for act in &actions[agent] {
                let mut row: Vec<ActionId> = prefix.clone();
                row.push(act.clone());
                next.push(row);
            }
        }
        profiles = next;
    }
    let profiles: Vec<ActionProfile> = profiles.into_iter().map(ActionProfile::new).collect();

    let mut transitions = Vec::new();
    let mut flag = seed.transition_flags.iter().copied().cycle();
    for from in &locations {
        for profile in profiles.iter().take(4) {
            for to in &locations {
                if flag.next().unwrap_or(false) {
                    transitions.push(Transition {
                        from: from.clone(),
                        profile: profile.clone(),
                        to: to.clone(),
                    });
                }
            }
        }
    }
    // A deadlocked start would leave every model empty; give the first
    // profile a self-loop so depth one always exists.
    if !transitions.iter().any(|t| t.from == locations[0]) {
        transitions.push(Transition {
            from: locations[0].clone(),
            profile: profiles[0].clone(),
            to: locations[0].clone(),
        });
    }

    let mut observations = BTreeMap::new();
    for (a, agent) in agents.iter().enumerate() {
        // Group locations by their assigned block id, blocks ordered by
        // first appearance: a partition by construction.
        let mut blocks: Vec<(usize, Vec<LocationId>)> = Vec::new();
        for (l, loc) in locations.iter().enumerate() {
            let id = seed.partition_blocks[a * seed.location_count + l];
            match blocks.iter_mut().find(|(b, _)| *b == id) {
                Some((_, members)) => members.push(loc.clone()),
                None => blocks.push((id, vec![loc.clone()])),
            }
        }
        observations.insert(agent.clone(), blocks.into_iter().map(|(_, m)| m).collect());
    }

    Game::new(
        agents,
        locations.clone(),
        locations[0].clone(),
        actions,
        transitions,
        observations,
    )
}

/// The deepest model of the seeded game with at most 64 worlds. Depth one
/// always yields at least one world and at most 16, so this never comes back
/// empty.
fn build_model(seed: &GameSeed) -> KripkeModel {
    let game = build_game(seed);
    let mut depth = seed.depth;
    while depth > 1 && game.enumerate_histories(depth).len() > 64 {
        depth -= 1;
    }
    KripkeModel::induced(&game, depth)
}

pub fn small_model() -> impl Strategy<Value = KripkeModel> {
    seed_strategy().prop_map(|seed| build_model(&seed))
}

/// Random formulas over the given agents and atoms, depth-bounded.
pub fn formula_over(
    agents: Vec<AgentId>,
    atoms: Vec<LocationId>,
) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        proptest::sample::select(atoms).prop_map(Formula::Atom),
    ];
    leaf.prop_recursive(4, 32, 3, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (proptest::sample::select(agents.clone()), inner.clone())
                .prop_map(|(a, f)| Formula::Knows(a, Box::new(f))),
            (1u32..4, inner.clone()).prop_map(|(k, f)| Formula::everyone(k, f)),
            inner.prop_map(Formula::common),
        ]
    })
}

/// A random induced model plus a formula over its own vocabulary.
pub fn model_and_formula() -> impl Strategy<Value = (KripkeModel, Formula)> {
    small_model().prop_flat_map(|model| {
        let agents = model.game().agents().to_vec();
        let atoms = model.game().locations().to_vec();
        formula_over(agents, atoms).prop_map(move |f| (model.clone(), f))
    })
}
