//! The alarm-clock game and its day-by-day model update.
//!
//! Two agents share a bedroom clock. On the first morning the human
//! initializes it (`i`), and nature decides whether the alarm ends up on or
//! off. Every later morning the human either resets it (`r`, forcing it off)
//! or toggles it (`t`). The machine never acts; its single action `*` is a
//! placeholder. The machine reads the clock's true state each morning, while
//! the human can only tell "initialized" from "not yet initialized".
//!
//! The interesting dynamics: after a reset the human knows the alarm is off,
//! and knows the machine knows it, and so on for a few rounds, but the tower
//! of mutual knowledge always has a finite height. [`update_model`] grows the
//! model one morning at a time, [`chain_layout`] exposes the single line of
//! worlds each model forms, and [`verify_theorem`] checks the height claims
//! mechanically.

mod fast;
mod theorem;

pub use fast::FastAlarm;
pub use theorem::{min_resets_to_trick, verify_theorem, TheoremEngine, TheoremReport, TheoremRow};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::game::{ActionProfile, Game, History, Transition};
use crate::ids::{ActionId, AgentId, LocationId};
use crate::kripke::KripkeModel;
use crate::uf::UnionFind;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlarmError {
    #[error("this operation is only defined for the built-in alarm game")]
    WrongGame,
    #[error("world '{key}' has not seen the first morning yet")]
    StartWorld { key: String },
    #[error("model does not have the alarm chain shape: {reason}")]
    NotAChain { reason: String },
}

fn human() -> AgentId {
    AgentId::new("Human")
}

fn machine() -> AgentId {
    AgentId::new("AI")
}

fn on() -> LocationId {
    LocationId::new("On")
}

fn off() -> LocationId {
    LocationId::new("Off")
}

fn start() -> LocationId {
    LocationId::new("Start")
}

fn profile(human_action: &str) -> ActionProfile {
    ActionProfile::of([human_action, "*"])
}

/// The alarm-clock game, identical to `fixtures/alarm.game.json`.
pub fn builtin_alarm_game() -> Game {
    let transition = |from: LocationId, act: &str, to: LocationId| Transition {
        from,
        profile: profile(act),
        to,
    };
    Game::new(
        vec![human(), machine()],
        vec![start(), on(), off()],
        start(),
        BTreeMap::from([
            (
                human(),
                vec![ActionId::new("i"), ActionId::new("r"), ActionId::new("t")],
            ),
            (machine(), vec![ActionId::new("*")]),
        ]),
        vec![
            transition(start(), "i", on()),
            transition(start(), "i", off()),
            transition(on(), "r", off()),
            transition(on(), "t", off()),
            transition(off(), "r", off()),
            transition(off(), "t", on()),
        ],
        BTreeMap::from([
            (human(), vec![vec![start()], vec![on(), off()]]),
            (machine(), vec![vec![start()], vec![on()], vec![off()]]),
        ]),
    )
}

fn require_alarm_game(model: &KripkeModel) -> Result<(), AlarmError> {
    if *model.game() == builtin_alarm_game() {
        Ok(())
    } else {
        Err(AlarmError::WrongGame)
    }
}

/// Advance an alarm model by one morning.
///
/// Every world `h` splits into `h.r` and `h.t`. Each agent's relation is
/// copied onto both halves, and for every world where the alarm was on, the
/// machine additionally cannot tell `h.r` from `h.t`: both land on an alarm
/// that is off, and the human's choice is invisible to it. Those seed pairs
/// are then closed transitively, which links `h.r` with `h'.t` whenever the
/// machine already confused `h` with `h'`. Iterating this from the one-step
/// model reproduces [`KripkeModel::induced`] at every depth.
pub fn update_model(model: &KripkeModel) -> Result<KripkeModel, AlarmError> {
    require_alarm_game(model)?;
    for w in 0..model.world_count() {
        if *model.label(w) == start() {
            return Err(AlarmError::StartWorld {
                key: model.world_key(w).to_owned(),
            });
        }
    }

    let game = builtin_alarm_game();
    // h.r always ends Off; h.t flips the state.
    let reset = profile("r");
    let toggle = profile("t");
    let step = |h: &History, p: &ActionProfile| -> History {
        let to = if *p == reset || *h.last() == on() {
            off()
        } else {
            on()
        };
        game.extend(h, p.clone(), to)
            .expect("alarm transition exists")
    };

    let mut worlds: Vec<History> = Vec::with_capacity(model.world_count() * 2);
    for h in model.worlds() {
        worlds.push(step(h, &reset));
        worlds.push(step(h, &toggle));
    }
    worlds.sort();
    let index_of = |h: &History| -> u32 {
        worlds
            .binary_search(h)
            .expect("extension was just inserted") as u32
    };
    let after: Vec<(u32, u32)> = model
        .worlds()
        .iter()
        .map(|h| (index_of(&step(h, &reset)), index_of(&step(h, &toggle))))
        .collect();

    let mut classes = BTreeMap::new();
    for (agent, pairs) in model.relations() {
        let mut uf = UnionFind::new(worlds.len());
        for &(a, b) in pairs {
            let (ra, ta) = after[a as usize];
            let (rb, tb) = after[b as usize];
            uf.union(ra, rb);
            uf.union(ta, tb);
        }
        if *agent == machine() {
            for (w, &(r, t)) in after.iter().enumerate() {
                if *model.label(w) == on() {
                    uf.union(r, t);
                }
            }
        }
        classes.insert(agent.clone(), uf.classes());
    }

    Ok(KripkeModel::from_classes(game, worlds, classes))
}

/// How many worlds of a model end with the alarm on versus off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct LabelCounts {
    pub on: u64,
    pub off: u64,
}

pub fn on_off_counts(model: &KripkeModel) -> LabelCounts {
    let mut counts = LabelCounts { on: 0, off: 0 };
    for w in 0..model.world_count() {
        if *model.label(w) == on() {
            counts.on += 1;
        } else if *model.label(w) == off() {
            counts.off += 1;
        }
    }
    counts
}

/// The counts an `n`-morning model must have, from the branching rule alone.
///
/// Off absorbs more mass every morning: each world's reset child ends off,
/// and the toggle child ends off exactly when the alarm was on. So
/// On(n+1) = Off(n) and Off(n+1) = 2^n + On(n).
pub fn predicted_on_off_counts(n: usize) -> LabelCounts {
    assert!(n <= 62, "counts overflow u64 past n = 62");
    if n == 0 {
        // The lone world is still at Start.
        return LabelCounts { on: 0, off: 0 };
    }
    let mut counts = LabelCounts { on: 1, off: 1 };
    for k in 1..n {
        counts = LabelCounts {
            on: counts.off,
            off: (1u64 << k) + counts.on,
        };
    }
    counts
}

/// An alarm model laid out as the single line its worlds always form.
///
/// Position 0 is the all-resets world. Consecutive positions are worlds some
/// agent cannot tell apart, alternating between the human and the machine
/// along the line. `edges` lists every related pair by position; an edge
/// spanning more than one step is a shortcut the machine gets from watching
/// the clock.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLayout {
    order: Vec<u32>,
    position: Vec<u32>,
    edges: Vec<(u32, u32, AgentId)>,
}

impl ChainLayout {
    /// World indices in chain order.
    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Chain position of a model world index.
    pub fn position_of(&self, world: usize) -> Option<usize> {
        self.position.get(world).map(|&p| p as usize)
    }

    /// All related pairs as (position, position, agent), sorted, lower
    /// position first.
    pub fn edges(&self) -> &[(u32, u32, AgentId)] {
        &self.edges
    }

    /// The agent connecting each consecutive pair of positions.
    pub fn backbone(&self) -> Vec<&AgentId> {
        let mut out = Vec::with_capacity(self.order.len().saturating_sub(1));
        for p in 0..self.order.len().saturating_sub(1) {
            let (a, b) = (p as u32, p as u32 + 1);
            let agent = self
                .edges
                .iter()
                .find(|(x, y, _)| (*x, *y) == (a, b))
                .map(|(_, _, agent)| agent)
                .expect("layout construction checked every backbone edge");
            out.push(agent);
        }
        out
    }

    /// Edges that span more than one position.
    pub fn jump_edges(&self) -> Vec<&(u32, u32, AgentId)> {
        self.edges.iter().filter(|(a, b, _)| b - a > 1).collect()
    }
}

/// Lay out an alarm model as its chain.
///
/// The order comes from a rotation recursion rather than a search: the line
/// for `n+1` mornings is the `n`-morning line with `r` appended, followed by
/// the reversed line with `t` appended. The all-resets world therefore stays
/// at position 0. Models whose worlds or relations deviate from the alarm
/// shape are rejected.
pub fn chain_layout(model: &KripkeModel) -> Result<ChainLayout, AlarmError> {
    require_alarm_game(model)?;
    let n = match model.worlds().first() {
        None => {
            return Err(AlarmError::NotAChain {
                reason: "model has no worlds".into(),
            })
        }
        Some(h) if h.is_empty() => {
            return Err(AlarmError::NotAChain {
                reason: "the one-world model before the first morning is not a chain".into(),
            })
        }
        Some(h) => h.len(),
    };
    if model.world_count() != 1usize << n {
        return Err(AlarmError::NotAChain {
            reason: format!(
                "expected {} worlds after {n} mornings, found {}",
                1usize << n,
                model.world_count()
            ),
        });
    }

    let game = builtin_alarm_game();
    let init = History::initial(start());
    let mut chain = vec![
        game.extend(&init, profile("i"), off())
            .expect("first morning"),
        game.extend(&init, profile("i"), on())
            .expect("first morning"),
    ];
    for _ in 1..n {
        let reset = profile("r");
        let toggle = profile("t");
        let mut next = Vec::with_capacity(chain.len() * 2);
        for h in &chain {
            next.push(game.extend(h, reset.clone(), off()).expect("reset step"));
        }
        for h in chain.iter().rev() {
            let to = if *h.last() == on() { off() } else { on() };
            next.push(game.extend(h, toggle.clone(), to).expect("toggle step"));
        }
        chain = next;
    }

    let mut order = Vec::with_capacity(chain.len());
    let mut position = vec![0u32; model.world_count()];
    for (p, h) in chain.iter().enumerate() {
        let w = model.index_of(h).ok_or_else(|| AlarmError::NotAChain {
            reason: format!("world '{}' is missing", game.history_key(h)),
        })?;
        order.push(w as u32);
        position[w] = p as u32;
    }

    let mut edges = Vec::new();
    for (agent, pairs) in model.relations() {
        for &(a, b) in pairs {
            let (pa, pb) = (position[a as usize], position[b as usize]);
            let (lo, hi) = if pa < pb { (pa, pb) } else { (pb, pa) };
            edges.push((lo, hi, agent.clone()));
        }
    }
    edges.sort();

    // Every consecutive pair must actually be related, with the linking
    // agent alternating along the line.
    let mut backbone_agents = Vec::with_capacity(chain.len() - 1);
    for p in 0..chain.len() - 1 {
        let (a, b) = (p as u32, p as u32 + 1);
        match edges.iter().find(|(x, y, _)| (*x, *y) == (a, b)) {
            Some((_, _, agent)) => backbone_agents.push(agent.clone()),
            None => {
                return Err(AlarmError::NotAChain {
                    reason: format!("positions {p} and {} are not related", p + 1),
                })
            }
        }
    }
    for pair in backbone_agents.windows(2) {
        if pair[0] == pair[1] {
            return Err(AlarmError::NotAChain {
                reason: "two consecutive line segments belong to the same agent".into(),
            });
        }
    }

    Ok(ChainLayout {
        order,
        position,
        edges,
    })
}

/// Chain position of one history, without building the model.
///
/// Follows the layout recursion directly: appending `r` keeps the position,
/// appending `t` mirrors it to the other end of the doubled line. `None` for
/// histories that are not alarm histories of at least one step.
pub fn chain_position(h: &History) -> Option<usize> {
    if h.is_empty() || !builtin_alarm_game().replays(h) {
        return None;
    }
    let mut pos = if *h.location_at(1)? == on() { 1 } else { 0 };
    for (k, (p, _)) in h.steps().iter().enumerate().skip(1) {
        if p.action(0)?.as_str() == "t" {
            pos = (1 << (k + 1)) - 1 - pos;
        }
    }
    Some(pos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::validate_game;

    #[test]
    fn builtin_game_matches_its_own_rules() {
        let game = builtin_alarm_game();
        assert!(validate_game(&game).is_valid());
        assert_eq!(game.agents().len(), 2);
        assert_eq!(game.transitions().len(), 6);
    }

    #[test]
    fn update_refuses_other_games_and_unstarted_worlds() {
        let m0 = KripkeModel::induced(&builtin_alarm_game(), 0);
        assert_eq!(
            update_model(&m0).unwrap_err(),
            AlarmError::StartWorld {
                key: "Start".into()
            }
        );

        let other = Game::new(
            vec![AgentId::new("Solo")],
            vec![LocationId::new("A")],
            LocationId::new("A"),
            BTreeMap::from([(AgentId::new("Solo"), vec![ActionId::new("x")])]),
            vec![Transition {
                from: LocationId::new("A"),
                profile: ActionProfile::of(["x"]),
                to: LocationId::new("A"),
            }],
            BTreeMap::from([(AgentId::new("Solo"), vec![vec![LocationId::new("A")]])]),
        );
        let m = KripkeModel::induced(&other, 1);
        assert_eq!(update_model(&m).unwrap_err(), AlarmError::WrongGame);
    }

    #[test]
    fn one_update_matches_the_two_step_model() {
        let game = builtin_alarm_game();
        let m1 = KripkeModel::induced(&game, 1);
        let m2 = update_model(&m1).unwrap();
        assert_eq!(m2, KripkeModel::induced(&game, 2));
        // Spelled out: Human links the equal-action pairs, the machine links
        // the two descendants of the on-world.
        let idx = |key: &str| m2.world_index(key).unwrap() as u32;
        assert_eq!(
            m2.relation_pairs(&human()),
            &[
                (idx("Start i Off r Off"), idx("Start i On r Off")),
                (idx("Start i Off t On"), idx("Start i On t Off")),
            ]
        );
        assert_eq!(
            m2.relation_pairs(&machine()),
            &[(idx("Start i On r Off"), idx("Start i On t Off"))]
        );
    }

    #[test]
    fn iterated_updates_reproduce_the_induced_models() {
        let game = builtin_alarm_game();
        let mut model = KripkeModel::induced(&game, 1);
        for n in 2..=8 {
            model = update_model(&model).unwrap();
            assert_eq!(model, KripkeModel::induced(&game, n), "n = {n}");
        }
    }

    #[test]
    fn closure_supplies_the_diagonal_pairs() {
        // After three mornings the machine confuses two distinct on-worlds,
        // `i On r Off t On` and `i On t Off t On`. One morning later all four
        // of their children must be pairwise confused. The seed rule alone
        // yields only four of the six pairs; transitive closure adds the two
        // diagonals between different parents.
        let game = builtin_alarm_game();
        let m4 = update_model(&KripkeModel::induced(&game, 3)).unwrap();
        let idx = |key: &str| m4.world_index(key).unwrap() as u32;
        let children = [
            idx("Start i On r Off t On r Off"),
            idx("Start i On r Off t On t Off"),
            idx("Start i On t Off t On r Off"),
            idx("Start i On t Off t On t Off"),
        ];
        let pairs = m4.relation_pairs(&machine());
        for (i, &x) in children.iter().enumerate() {
            for &y in &children[i + 1..] {
                let key = (x.min(y), x.max(y));
                assert!(pairs.contains(&key), "missing machine pair {key:?}");
            }
        }
    }

    #[test]
    fn label_counts_follow_the_recurrence() {
        assert_eq!(predicted_on_off_counts(0), LabelCounts { on: 0, off: 0 });
        assert_eq!(predicted_on_off_counts(1), LabelCounts { on: 1, off: 1 });
        assert_eq!(predicted_on_off_counts(2), LabelCounts { on: 1, off: 3 });
        assert_eq!(predicted_on_off_counts(3), LabelCounts { on: 3, off: 5 });
        assert_eq!(predicted_on_off_counts(4), LabelCounts { on: 5, off: 11 });
        assert_eq!(predicted_on_off_counts(5), LabelCounts { on: 11, off: 21 });

        let game = builtin_alarm_game();
        for n in 0..=7 {
            let m = KripkeModel::induced(&game, n);
            let counted = on_off_counts(&m);
            assert_eq!(counted, predicted_on_off_counts(n), "n = {n}");
            if n > 0 {
                assert_eq!(counted.on + counted.off, 1 << n, "n = {n}");
            }
        }
    }

    #[test]
    fn two_step_chain_is_laid_out_exactly() {
        let game = builtin_alarm_game();
        let m2 = KripkeModel::induced(&game, 2);
        let layout = chain_layout(&m2).unwrap();
        let keys: Vec<&str> = layout
            .order()
            .iter()
            .map(|&w| m2.world_key(w as usize))
            .collect();
        assert_eq!(
            keys,
            vec![
                "Start i Off r Off",
                "Start i On r Off",
                "Start i On t Off",
                "Start i Off t On",
            ]
        );
        assert_eq!(layout.backbone(), vec![&human(), &machine(), &human()]);
        assert_eq!(layout.position_of(0), Some(0));
        assert!(layout.jump_edges().is_empty());
    }

    #[test]
    fn three_step_chain_groups_labels_and_has_one_shortcut() {
        let game = builtin_alarm_game();
        let m3 = KripkeModel::induced(&game, 3);
        let layout = chain_layout(&m3).unwrap();
        let labels: Vec<&str> = layout
            .order()
            .iter()
            .map(|&w| m3.label(w as usize).as_str())
            .collect();
        assert_eq!(
            labels,
            vec!["Off", "Off", "Off", "Off", "Off", "On", "On", "On"]
        );
        // All-resets sits at position 0.
        assert_eq!(
            m3.world_key(layout.order()[0] as usize),
            "Start i Off r Off r Off"
        );
        // The machine's shortcut between the two on-parent descendants lands
        // on adjacent positions here, so nothing spans more than one step.
        assert!(layout.jump_edges().is_empty());
        assert_eq!(layout.edges().len(), 7);
    }

    #[test]
    fn chains_alternate_agents_at_every_depth() {
        let game = builtin_alarm_game();
        for n in 1..=7 {
            let m = KripkeModel::induced(&game, n);
            let layout = chain_layout(&m).unwrap();
            assert_eq!(layout.len(), 1 << n);
            let backbone = layout.backbone();
            for pair in backbone.windows(2) {
                assert_ne!(pair[0], pair[1], "n = {n}");
            }
            // Positions 0 and 1 differ only in the last human action, so the
            // first link always belongs to the human.
            if !backbone.is_empty() {
                assert_eq!(backbone[0], &human(), "n = {n}");
            }
        }
    }

    #[test]
    fn positions_computed_stepwise_match_the_layout() {
        let game = builtin_alarm_game();
        for n in 1..=8 {
            let m = KripkeModel::induced(&game, n);
            let layout = chain_layout(&m).unwrap();
            for (w, h) in m.worlds().iter().enumerate() {
                assert_eq!(chain_position(h), layout.position_of(w), "n = {n}, w = {w}");
            }
        }

        let empty = History::from_steps(start(), Vec::new());
        assert_eq!(chain_position(&empty), None);
        let stray = History::from_steps(off(), Vec::new());
        assert_eq!(chain_position(&stray), None);
    }

    #[test]
    fn layout_rejects_models_without_the_chain_shape() {
        let game = builtin_alarm_game();
        let m0 = KripkeModel::induced(&game, 0);
        assert!(matches!(
            chain_layout(&m0),
            Err(AlarmError::NotAChain { .. })
        ));

        // Same worlds, but an edge removed: the line is broken.
        let m2 = KripkeModel::induced(&game, 2);
        let mut relations: BTreeMap<AgentId, Vec<(usize, usize)>> = BTreeMap::new();
        for (agent, pairs) in m2.relations() {
            let pairs = pairs
                .iter()
                .filter(|_| *agent != machine())
                .map(|&(a, b)| (a as usize, b as usize))
                .collect();
            relations.insert(agent.clone(), pairs);
        }
        let broken =
            KripkeModel::from_parts(game.clone(), m2.worlds().to_vec(), relations).unwrap();
        let err = chain_layout(&broken).unwrap_err();
        assert!(matches!(err, AlarmError::NotAChain { .. }));
    }
}
