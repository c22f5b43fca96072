//! Mechanical check of the knowledge-height law.
//!
//! After the human initializes the clock and then resets it `m` mornings in
//! a row, the group can sustain "everyone knows the alarm is off" nested to
//! height `2m`, no further, and common knowledge never arrives. The check
//! measures all three parts on real models: the distance from the all-resets
//! world to the nearest on-world must be `2m+1`, `E^{2k} Off` must hold for
//! every `k <= m` while `E^{2m+1} Off` fails, and `C Off` must be false.

use std::fmt;

use serde::Serialize;

use crate::kripke::{Distance, KripkeModel};
use crate::logic::{eval, everyone_levels, Formula};

use super::{builtin_alarm_game, off, on, update_model};

/// Which construction backs the models under test.
///
/// `Induced` builds each model from scratch from the history set,
/// `Iterative` grows one model morning by morning, and `Both` runs the two
/// and insists they produce identical models (up to reset count 10; past
/// that the iterative copy is dropped to keep memory flat).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremEngine {
    Induced,
    Iterative,
    Both,
}

const CROSS_CHECK_LIMIT: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct TheoremRow {
    /// Reset count `m`; the model holds histories of `m + 1` total actions.
    pub resets: usize,
    /// Key of the all-resets world the claims are evaluated at.
    pub world: String,
    /// Measured distance to the nearest on-world.
    pub distance: Distance,
    /// The law says the distance is exactly this.
    pub expected_distance: usize,
    /// `E^{2k} Off` held for every `k <= m`.
    pub even_levels_hold: bool,
    /// `E^{2m+1} Off` failed as required.
    pub next_odd_fails: bool,
    /// `C Off` was false as required.
    pub common_knowledge_fails: bool,
    /// With [`TheoremEngine::Both`]: the two constructions built identical
    /// models. `None` when only one engine ran.
    pub engines_agree: Option<bool>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub engine: TheoremEngine,
    pub rows: Vec<TheoremRow>,
    pub all_pass: bool,
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let world_width = self
            .rows
            .iter()
            .map(|r| r.world.len())
            .max()
            .unwrap_or(5)
            .max(5);
        writeln!(
            f,
            "{:>3}  {:<world_width$}  {:>8}  {:>8}  verdict",
            "m", "world", "distance", "expected"
        )?;
        for row in &self.rows {
            let verdict = if row.pass { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "{:>3}  {:<world_width$}  {:>8}  {:>8}  {}",
                row.resets, row.world, row.distance, row.expected_distance, verdict
            )?;
        }
        let failed = self.rows.iter().filter(|r| !r.pass).count();
        if self.all_pass {
            write!(f, "all {} rows pass", self.rows.len())
        } else {
            write!(f, "{failed} of {} rows fail", self.rows.len())
        }
    }
}

/// Check the knowledge-height law for every reset count `m <= m_max`.
pub fn verify_theorem(m_max: usize, engine: TheoremEngine) -> TheoremReport {
    let game = builtin_alarm_game();
    let mut rows = Vec::with_capacity(m_max + 1);
    let mut iterated: Option<KripkeModel> = None;

    for m in 0..=m_max {
        let n = m + 1;
        let cross_check = engine == TheoremEngine::Both && m <= CROSS_CHECK_LIMIT;
        let wants_iterative =
            engine == TheoremEngine::Iterative || (engine == TheoremEngine::Both && cross_check);

        if wants_iterative {
            iterated = Some(match iterated.take() {
                None => KripkeModel::induced(&game, 1),
                Some(prev) => update_model(&prev).expect("alarm models update cleanly"),
            });
        } else {
            iterated = None;
        }

        let induced = match engine {
            TheoremEngine::Induced | TheoremEngine::Both => Some(KripkeModel::induced(&game, n)),
            TheoremEngine::Iterative => None,
        };

        let engines_agree = match (&induced, &iterated) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        };
        let model = induced
            .as_ref()
            .or(iterated.as_ref())
            .expect("at least one engine ran");

        rows.push(check_row(model, m, engines_agree));
    }

    let all_pass = rows.iter().all(|r| r.pass);
    TheoremReport {
        engine,
        rows,
        all_pass,
    }
}

fn all_resets_key(m: usize) -> String {
    let mut key = String::from("Start i Off");
    for _ in 0..m {
        key.push_str(" r Off");
    }
    key
}

fn check_row(model: &KripkeModel, m: usize, engines_agree: Option<bool>) -> TheoremRow {
    let key = all_resets_key(m);
    let w = model
        .world_index(&key)
        .expect("every alarm model contains the all-resets world");

    let distance = model
        .knowledge_distance(w, |v| *model.label(v) == on())
        .expect("world index is in range");
    let expected_distance = 2 * m + 1;

    let levels = everyone_levels(model, &Formula::atom(off().as_str()), 2 * m + 1)
        .expect("Off is a location");
    let even_levels_hold = (0..=m).all(|k| levels[2 * k][w]);
    let next_odd_fails = !levels[2 * m + 1][w];
    let common_knowledge_fails =
        !eval(model, w, &Formula::common(Formula::atom(off().as_str()))).expect("C Off evaluates");

    let pass = distance == Distance::Finite(expected_distance)
        && even_levels_hold
        && next_odd_fails
        && common_knowledge_fails
        && engines_agree != Some(false);

    TheoremRow {
        resets: m,
        world: key,
        distance,
        expected_distance,
        even_levels_hold,
        next_odd_fails,
        common_knowledge_fails,
        engines_agree,
        pass,
    }
}

/// Fewest consecutive resets after which a reasoner limited to epistemic
/// nesting depth `depth_bound` can no longer see that deeper mutual
/// knowledge is missing: the smallest `m` with `2m >= depth_bound`.
pub fn min_resets_to_trick(depth_bound: usize) -> usize {
    depth_bound.div_ceil(2)
}
