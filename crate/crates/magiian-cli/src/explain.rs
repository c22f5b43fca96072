//! Shortest counterexample chains for failed epistemic formulas.
//!
//! A false `K[a] f`, `E^k f`, or `C f` always has a concrete culprit: a world
//! the relevant relation can reach where the operand fails. This module walks
//! from the queried world to the nearest such culprit, peeling one epistemic
//! operator at a time, and records the worlds and relation edges along the
//! way. The walk ends at the first non-epistemic formula, which is then
//! reported as false at the terminal world.

use std::collections::VecDeque;

use serde::Serialize;

use magiian::kripke::KripkeModel;
use magiian::logic::{satisfying_worlds, EvalError};
use magiian::Formula;

#[derive(Serialize)]
pub struct Hop {
    pub world: String,
    /// Agents whose relation carries the edge from the previous hop; absent
    /// on the first hop.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub via: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct Explanation {
    pub chain: Vec<Hop>,
    pub failing_formula: String,
    pub failing_world: String,
    pub failing_label: String,
}

impl Explanation {
    pub fn render_text(&self) -> String {
        let mut out = String::from("counterexample:\n");
        for hop in &self.chain {
            match &hop.via {
                None => out.push_str(&format!("  at {}\n", hop.world)),
                Some(agents) => {
                    out.push_str(&format!("  via {}: {}\n", agents.join(", "), hop.world))
                }
            }
        }
        out.push_str(&format!(
            "  {} is false at {} (label {})\n",
            self.failing_formula, self.failing_world, self.failing_label
        ));
        out
    }
}

/// Explain why `formula` is false at `world`. The caller must have evaluated
/// it to false already; on a true formula the walk finds no culprit and
/// reports the outermost operand instead, which is misleading but safe.
pub fn explain_failure(
    model: &KripkeModel,
    world: usize,
    formula: &Formula,
) -> Result<Explanation, EvalError> {
    let mut chain = vec![Hop {
        world: model.world_key(world).to_owned(),
        via: None,
    }];
    let mut at = world;
    let mut f = formula.clone();

    loop {
        match f {
            Formula::Knows(agent, inner) => {
                let ok = holds_mask(model, &inner)?;
                if !ok[at] {
                    f = *inner;
                    continue;
                }
                let culprit = model
                    .agent_neighbors(&agent, at)
                    .iter()
                    .map(|&v| v as usize)
                    .find(|&v| !ok[v]);
                match culprit {
                    Some(v) => {
                        chain.push(Hop {
                            world: model.world_key(v).to_owned(),
                            via: Some(vec![agent.to_string()]),
                        });
                        at = v;
                        f = *inner;
                    }
                    // No culprit: the knowledge claim actually holds here.
                    None => {
                        f = Formula::Knows(agent, inner);
                        break;
                    }
                }
            }
            Formula::Everyone(k, inner) => {
                let ok = holds_mask(model, &inner)?;
                match nearest_failing(model, at, &ok, Some(k as usize)) {
                    Some(path) => {
                        extend_chain(model, &mut chain, &path);
                        at = path.last().copied().unwrap_or(at);
                        f = *inner;
                    }
                    None => {
                        f = Formula::Everyone(k, inner);
                        break;
                    }
                }
            }
            Formula::Common(inner) => {
                let ok = holds_mask(model, &inner)?;
                match nearest_failing(model, at, &ok, None) {
                    Some(path) => {
                        extend_chain(model, &mut chain, &path);
                        at = path.last().copied().unwrap_or(at);
                        f = *inner;
                    }
                    None => {
                        f = Formula::Common(inner);
                        break;
                    }
                }
            }
            other => {
                f = other;
                break;
            }
        }
    }

    Ok(Explanation {
        chain,
        failing_formula: f.render(),
        failing_world: model.world_key(at).to_owned(),
        failing_label: model.label(at).to_string(),
    })
}

fn holds_mask(model: &KripkeModel, f: &Formula) -> Result<Vec<bool>, EvalError> {
    let mut mask = vec![false; model.world_count()];
    for w in satisfying_worlds(model, f)? {
        mask[w] = true;
    }
    Ok(mask)
}

/// Worlds from `from` to its nearest `!ok` world through the union relation,
/// `from` excluded, at most `bound` hops. `Some(vec![])` means `from` itself
/// fails. Ties break toward lower world indices, so the result is stable.
fn nearest_failing(
    model: &KripkeModel,
    from: usize,
    ok: &[bool],
    bound: Option<usize>,
) -> Option<Vec<usize>> {
    if !ok[from] {
        return Some(Vec::new());
    }
    let mut parent: Vec<Option<usize>> = vec![None; model.world_count()];
    let mut dist = vec![usize::MAX; model.world_count()];
    let mut queue = VecDeque::new();
    dist[from] = 0;
    queue.push_back(from);
    while let Some(w) = queue.pop_front() {
        if let Some(limit) = bound {
            if dist[w] >= limit {
                continue;
            }
        }
        for &v in model.neighbors(w) {
            let v = v as usize;
            if dist[v] != usize::MAX {
                continue;
            }
            dist[v] = dist[w] + 1;
            parent[v] = Some(w);
            if !ok[v] {
                let mut path = vec![v];
                let mut back = w;
                while back != from {
                    path.push(back);
                    back = parent[back].expect("interior worlds have parents");
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(v);
        }
    }
    None
}

fn extend_chain(model: &KripkeModel, chain: &mut Vec<Hop>, path: &[usize]) {
    let mut prev = chain
        .last()
        .and_then(|hop| model.world_index(&hop.world))
        .expect("chain hops name model worlds");
    for &next in path {
        chain.push(Hop {
            world: model.world_key(next).to_owned(),
            via: Some(edge_agents(model, prev, next)),
        });
        prev = next;
    }
}

/// All agents whose relation contains the (undirected) edge, in the game's
/// agent order.
fn edge_agents(model: &KripkeModel, a: usize, b: usize) -> Vec<String> {
    model
        .game()
        .agents()
        .iter()
        .filter(|agent| model.agent_neighbors(agent, a).contains(&(b as u32)))
        .map(|agent| agent.to_string())
        .collect()
}
