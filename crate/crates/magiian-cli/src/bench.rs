//! Side-by-side timing of the two alarm-model engines.
//!
//! The packed engine codes each history into an integer and never stores
//! relations, so it reaches lengths the explicit model cannot. Where both
//! run, the row records whether their world counts, edge counts, label
//! counts, and the distance from the all-resets world to the nearest
//! on-world agree.

use std::time::Instant;

use serde::Serialize;

use magiian::alarm::{builtin_alarm_game, on_off_counts, FastAlarm};
use magiian::KripkeModel;

#[derive(Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub worlds: u64,
    pub human_edges: u64,
    pub machine_edges: u64,
    pub on: u64,
    pub off: u64,
    /// Hops from the all-resets world to the nearest on-world.
    pub distance: Option<usize>,
    pub fast_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub induced_seconds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
}

pub fn run(max_n: usize, induced_cap: usize) -> Vec<BenchRow> {
    let game = builtin_alarm_game();
    let mut rows = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let started = Instant::now();
        let fast = FastAlarm::new(n);
        let counts = fast.on_off_counts();
        let human_edges = fast.human_pair_count();
        let machine_edges = fast.machine_pair_count();
        let distance = fast.distance_to_on();
        let fast_seconds = started.elapsed().as_secs_f64();

        let mut induced_seconds = None;
        let mut agree = None;
        if n <= induced_cap {
            let started = Instant::now();
            let model = KripkeModel::induced(&game, n);
            let model_counts = on_off_counts(&model);
            let model_human = model.relation_pairs(&game.agents()[0]).len() as u64;
            let model_machine = model.relation_pairs(&game.agents()[1]).len() as u64;
            let from = model
                .index_of(&fast.to_history(0))
                .expect("the all-resets history is a world");
            let model_distance = model
                .knowledge_distance(from, |w| model.label(w).as_str() == "On")
                .expect("the start world index is in range")
                .as_finite();
            induced_seconds = Some(started.elapsed().as_secs_f64());
            agree = Some(
                model.world_count() as u64 == fast.world_count()
                    && model_counts == counts
                    && model_human == human_edges
                    && model_machine == machine_edges
                    && model_distance == distance,
            );
        }

        rows.push(BenchRow {
            n,
            worlds: fast.world_count(),
            human_edges,
            machine_edges,
            on: counts.on,
            off: counts.off,
            distance,
            fast_seconds,
            induced_seconds,
            agree,
        });
    }
    rows
}

pub fn render_table(rows: &[BenchRow]) -> String {
    let mut out = String::from(
        "  n      worlds  human edges  machine edges        on       off  distance    fast s  induced s  agree\n",
    );
    for row in rows {
        let distance = row
            .distance
            .map_or_else(|| String::from("-"), |d| d.to_string());
        let induced = row
            .induced_seconds
            .map_or_else(|| String::from("-"), |s| format!("{s:.4}"));
        let agree = match row.agree {
            None => "-",
            Some(true) => "yes",
            Some(false) => "NO",
        };
        out.push_str(&format!(
            "{:>3} {:>11} {:>12} {:>14} {:>9} {:>9} {:>9} {:>9.4} {:>10} {:>6}\n",
            row.n,
            row.worlds,
            row.human_edges,
            row.machine_edges,
            row.on,
            row.off,
            distance,
            row.fast_seconds,
            induced,
            agree,
        ));
    }
    out
}
