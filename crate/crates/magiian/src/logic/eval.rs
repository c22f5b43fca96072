//! Model checking over finite Kripke models.
//!
//! Everything here works on satisfaction masks: one `bool` per world, filled
//! in bottom-up over the formula. `K[a] f` holds at a world when `f` holds
//! there and at every world the agent cannot tell apart from it. `E f` is
//! `K[a] f` for all agents at once, `E^k` iterates that, and `C f` asks for
//! `f` on the whole connected component.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::ids::{AgentId, LocationId};
use crate::kripke::KripkeModel;

use super::Formula;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("world index {index} out of range for a model with {count} worlds")]
    UnknownWorld { index: usize, count: usize },
    #[error("atom '{name}' is not a location of the game")]
    UnknownAtom { name: LocationId },
    #[error("agent '{name}' is not in the game")]
    UnknownAgent { name: AgentId },
}

/// Largest `k` for which `E^k f` holds at a world.
///
/// `BelowZero` means `f` already fails at the world itself, `Infinite` means
/// no reachable world falsifies `f`, so every `E^k f` holds (and so does
/// `C f`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EpistemicDepth {
    BelowZero,
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for EpistemicDepth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EpistemicDepth::BelowZero => write!(f, "below zero"),
            EpistemicDepth::Finite(k) => write!(f, "{k}"),
            EpistemicDepth::Infinite => write!(f, "infinite"),
        }
    }
}

/// One satisfaction mask per world, `mask[w]` iff the formula holds at `w`.
fn mask(model: &KripkeModel, formula: &Formula) -> Result<Vec<bool>, EvalError> {
    let n = model.world_count();
    Ok(match formula {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(loc) => {
            if !model.game().has_location(loc) {
                return Err(EvalError::UnknownAtom { name: loc.clone() });
            }
            (0..n).map(|w| model.label(w) == loc).collect()
        }
        Formula::Not(f) => {
            let mut m = mask(model, f)?;
            for b in &mut m {
                *b = !*b;
            }
            m
        }
        Formula::And(a, b) => {
            let ma = mask(model, a)?;
            let mb = mask(model, b)?;
            ma.into_iter().zip(mb).map(|(x, y)| x && y).collect()
        }
        Formula::Or(a, b) => {
            let ma = mask(model, a)?;
            let mb = mask(model, b)?;
            ma.into_iter().zip(mb).map(|(x, y)| x || y).collect()
        }
        Formula::Implies(a, b) => {
            let ma = mask(model, a)?;
            let mb = mask(model, b)?;
            ma.into_iter().zip(mb).map(|(x, y)| !x || y).collect()
        }
        Formula::Knows(agent, f) => {
            if model.game().agent_index(agent).is_none() {
                return Err(EvalError::UnknownAgent {
                    name: agent.clone(),
                });
            }
            let inner = mask(model, f)?;
            (0..n)
                .map(|w| {
                    inner[w]
                        && model
                            .agent_neighbors(agent, w)
                            .iter()
                            .all(|&v| inner[v as usize])
                })
                .collect()
        }
        Formula::Everyone(k, f) => {
            let inner = mask(model, f)?;
            shrink_levels(model, inner, *k as usize)
                .pop()
                .expect("k+1 levels")
        }
        Formula::Common(f) => {
            let inner = mask(model, f)?;
            common_mask(model, &inner)
        }
    })
}

/// One sweep of `E`: keep a world when it and all its union-relation
/// neighbors are still in the set. Returns masks for `E^0 f ..= E^k f`.
fn shrink_levels(model: &KripkeModel, base: Vec<bool>, k: usize) -> Vec<Vec<bool>> {
    let mut levels = vec![base];
    for _ in 0..k {
        let prev = levels.last().expect("at least the base level");
        let next: Vec<bool> = (0..model.world_count())
            .map(|w| prev[w] && model.neighbors(w).iter().all(|&v| prev[v as usize]))
            .collect();
        // Once a level is a fixed point, every later level equals it.
        if next == *prev {
            let last = next;
            while levels.len() <= k {
                levels.push(last.clone());
            }
            break;
        }
        levels.push(next);
    }
    levels
}

/// `C f`: a world qualifies when its whole connected component satisfies `f`.
fn common_mask(model: &KripkeModel, inner: &[bool]) -> Vec<bool> {
    let n = model.world_count();
    // Flood each component once, recording whether it contains a failure.
    let mut component = vec![u32::MAX; n];
    let mut component_ok = Vec::new();
    for start in 0..n {
        if component[start] != u32::MAX {
            continue;
        }
        let id = component_ok.len() as u32;
        let mut ok = true;
        let mut queue = VecDeque::from([start]);
        component[start] = id;
        while let Some(w) = queue.pop_front() {
            ok &= inner[w];
            for &v in model.neighbors(w) {
                if component[v as usize] == u32::MAX {
                    component[v as usize] = id;
                    queue.push_back(v as usize);
                }
            }
        }
        component_ok.push(ok);
    }
    (0..n)
        .map(|w| component_ok[component[w] as usize])
        .collect()
}

/// Worlds where the formula holds, as sorted indices into the model.
pub fn satisfying_worlds(model: &KripkeModel, formula: &Formula) -> Result<Vec<usize>, EvalError> {
    let m = mask(model, formula)?;
    Ok((0..model.world_count()).filter(|&w| m[w]).collect())
}

/// Whether the formula holds at one world.
pub fn eval(model: &KripkeModel, world: usize, formula: &Formula) -> Result<bool, EvalError> {
    if world >= model.world_count() {
        return Err(EvalError::UnknownWorld {
            index: world,
            count: model.world_count(),
        });
    }
    Ok(mask(model, formula)?[world])
}

/// Satisfaction masks for `E^0 f` through `E^max_k f`, in one pass.
///
/// `result[k][w]` says whether `E^k f` holds at world `w`. Each level is one
/// sweep over the model's edges, so asking for a whole ladder of exponents
/// costs the same as evaluating the deepest one alone.
pub fn everyone_levels(
    model: &KripkeModel,
    formula: &Formula,
    max_k: usize,
) -> Result<Vec<Vec<bool>>, EvalError> {
    let base = mask(model, formula)?;
    Ok(shrink_levels(model, base, max_k))
}

/// Largest `k` such that `E^k f` holds at `world`.
///
/// Computed from distances rather than by iterating `E`: `E^k f` holds at a
/// world exactly when every world within `k` relation steps satisfies `f`,
/// so the answer is one less than the distance to the nearest failing world.
pub fn epistemic_depth(
    model: &KripkeModel,
    world: usize,
    formula: &Formula,
) -> Result<EpistemicDepth, EvalError> {
    if world >= model.world_count() {
        return Err(EvalError::UnknownWorld {
            index: world,
            count: model.world_count(),
        });
    }
    let inner = mask(model, formula)?;
    if !inner[world] {
        return Ok(EpistemicDepth::BelowZero);
    }
    let mut dist = vec![u32::MAX; model.world_count()];
    dist[world] = 0;
    let mut queue = VecDeque::from([world]);
    while let Some(w) = queue.pop_front() {
        if !inner[w] {
            return Ok(EpistemicDepth::Finite(dist[w] as usize - 1));
        }
        for &v in model.neighbors(w) {
            if dist[v as usize] == u32::MAX {
                dist[v as usize] = dist[w] + 1;
                queue.push_back(v as usize);
            }
        }
    }
    Ok(EpistemicDepth::Infinite)
}
