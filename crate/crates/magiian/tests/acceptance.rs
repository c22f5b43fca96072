//! The release gate: ten checks, one line of output each.
//!
//! Every check prints `criterion N: PASS - ...` or `criterion N: FAIL - ...`
//! (visible with `--nocapture`, and in the captured output of any failure).
//! The checks measure real constructions; none of the expected numbers are
//! produced by the code paths they judge.

mod common;

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use magiian::alarm::{
    builtin_alarm_game, min_resets_to_trick, on_off_counts, update_model, verify_theorem,
    FastAlarm, TheoremEngine,
};
use magiian::ids::AgentId;
use magiian::kripke::{Distance, KripkeModel};
use magiian::logic::{
    epistemic_depth, eval, everyone_levels, parse, satisfying_worlds, EpistemicDepth, Formula,
};

fn criterion(number: usize, title: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("criterion {number}: PASS - {title}"),
        Err(payload) => {
            println!("criterion {number}: FAIL - {title}");
            resume_unwind(payload);
        }
    }
}

/// Induced alarm models for lengths 0..=14, built once and shared.
fn alarm_models() -> &'static Vec<KripkeModel> {
    static MODELS: OnceLock<Vec<KripkeModel>> = OnceLock::new();
    MODELS.get_or_init(|| {
        let game = builtin_alarm_game();
        (0..=14).map(|n| KripkeModel::induced(&game, n)).collect()
    })
}

fn all_resets_key(m: usize) -> String {
    let mut key = String::from("Start i Off");
    for _ in 0..m {
        key.push_str(" r Off");
    }
    key
}

fn human() -> AgentId {
    AgentId::new("Human")
}

fn machine() -> AgentId {
    AgentId::new("AI")
}

#[test]
fn criterion_1_knowledge_height() {
    criterion(
        1,
        "distance 2m+1, E^{2k} holds, E^{2m+1} fails, C fails, m <= 12, under 30s",
        || {
            let start = Instant::now();
            let report = verify_theorem(12, TheoremEngine::Induced);
            assert!(report.all_pass);
            assert_eq!(report.rows.len(), 13);
            for (m, row) in report.rows.iter().enumerate() {
                assert_eq!(row.resets, m);
                assert_eq!(row.distance, Distance::Finite(2 * m + 1));
                assert!(row.even_levels_hold);
                assert!(row.next_odd_fails);
                assert!(row.common_knowledge_fails);
            }
            assert!(
                start.elapsed() < Duration::from_secs(30),
                "took {:?}",
                start.elapsed()
            );
        },
    );
}

#[test]
fn criterion_2_base_case() {
    criterion(
        2,
        "two worlds, one Human edge, E^0 Off true and E^1 Off false",
        || {
            let m1 = &alarm_models()[1];
            assert_eq!(m1.world_count(), 2);
            let off_world = m1.world_index("Start i Off").unwrap();
            let on_world = m1.world_index("Start i On").unwrap();
            assert_eq!(
                m1.relation_pairs(&human()),
                &[(
                    off_world.min(on_world) as u32,
                    off_world.max(on_world) as u32
                )]
            );
            assert_eq!(m1.relation_pairs(&machine()), &[]);

            let agents = m1.game().agents().to_vec();
            let e0 = parse("E^0 Off", &agents).unwrap();
            let e1 = parse("E^1 Off", &agents).unwrap();
            assert!(eval(m1, off_world, &e0).unwrap());
            assert!(!eval(m1, off_world, &e1).unwrap());
        },
    );
}

#[test]
fn criterion_3_four_world_fixture() {
    criterion(
        3,
        "length-2 model has 4 worlds and exactly 3 fixed edges",
        || {
            let m2 = &alarm_models()[2];
            assert_eq!(m2.world_count(), 4);
            let idx = |key: &str| m2.world_index(key).unwrap() as u32;
            let pair = |a: &str, b: &str| {
                let (x, y) = (idx(a), idx(b));
                (x.min(y), x.max(y))
            };
            assert_eq!(
                m2.relation_pairs(&human()),
                &[
                    pair("Start i Off r Off", "Start i On r Off"),
                    pair("Start i Off t On", "Start i On t Off"),
                ]
            );
            assert_eq!(
                m2.relation_pairs(&machine()),
                &[pair("Start i On r Off", "Start i On t Off")]
            );
            assert_eq!(m2.edge_count(), 3);
        },
    );
}

#[test]
fn criterion_4_update_equals_induced() {
    criterion(
        4,
        "iterated update reproduces the induced model up to n = 14, under 60s",
        || {
            let start = Instant::now();
            let mut model = alarm_models()[1].clone();
            for n in 2..=14 {
                model = update_model(&model).unwrap();
                assert_eq!(&model, &alarm_models()[n], "n = {n}");
            }
            assert!(
                start.elapsed() < Duration::from_secs(60),
                "took {:?}",
                start.elapsed()
            );
        },
    );
}

#[test]
fn criterion_5_label_counts() {
    criterion(
        5,
        "On/Off counts are (3,5), (5,11), (11,21) and On(n+1) = Off(n)",
        || {
            let models = alarm_models();
            let counts: Vec<(u64, u64)> = (0..=14)
                .map(|n| {
                    let c = on_off_counts(&models[n]);
                    (c.on, c.off)
                })
                .collect();
            assert_eq!(counts[3], (3, 5));
            assert_eq!(counts[4], (5, 11));
            assert_eq!(counts[5], (11, 21));
            // The length-0 model's lone world is labeled Start, not On or Off,
            // so the recurrence starts at length one.
            for n in 1..14 {
                assert_eq!(counts[n + 1].0, counts[n].1, "On({}) = Off({n})", n + 1);
                assert_eq!(counts[n].0 + counts[n].1, 1 << n, "totals at {n}");
            }
        },
    );
}

#[test]
fn criterion_6_growth_and_connectivity() {
    criterion(
        6,
        "2^n worlds and a single connected component for n <= 14",
        || {
            let models = alarm_models();
            for (n, m) in models.iter().enumerate().skip(1) {
                assert_eq!(m.world_count(), 1 << n, "n = {n}");
                assert_eq!(
                    m.connected_component(0).unwrap().len(),
                    m.world_count(),
                    "n = {n}"
                );
            }
        },
    );
}

#[test]
fn criterion_7_endpoint_degree() {
    criterion(
        7,
        "the all-resets world has exactly one neighbor for n <= 14",
        || {
            let models = alarm_models();
            for (n, m) in models.iter().enumerate().skip(1) {
                let w = m.world_index(&all_resets_key(n - 1)).unwrap();
                assert_eq!(m.neighbors(w).len(), 1, "n = {n}");
            }
        },
    );
}

#[test]
fn criterion_8_logic_properties() {
    criterion(
        8,
        "five logic laws hold on 1000 random models/formulas each",
        || {
            let config = Config {
                cases: 1000,
                max_shrink_iters: 2000,
                failure_persistence: None,
                ..Config::default()
            };

            // Knowledge is truthful: K[a] f -> f everywhere.
            TestRunner::new(config.clone())
                .run(&common::model_and_formula(), |(model, f)| {
                    for agent in model.game().agents() {
                        let axiom = Formula::implies(
                            Formula::Knows(agent.clone(), Box::new(f.clone())),
                            f.clone(),
                        );
                        for w in 0..model.world_count() {
                            prop_assert!(eval(&model, w, &axiom).unwrap());
                        }
                    }
                    Ok(())
                })
                .unwrap();

            // Deeper mutual knowledge is never easier: each E level is a subset
            // of the previous one.
            TestRunner::new(config.clone())
                .run(&common::model_and_formula(), |(model, f)| {
                    let levels = everyone_levels(&model, &f, 6).unwrap();
                    for pair in levels.windows(2) {
                        for (now, before) in pair[1].iter().zip(&pair[0]) {
                            prop_assert!(!now || *before);
                        }
                    }
                    Ok(())
                })
                .unwrap();

            // Common knowledge computed by components equals the explicit
            // conjunction E^1 f & ... & E^{|worlds|} f.
            TestRunner::new(config.clone())
                .run(&common::model_and_formula(), |(model, f)| {
                    let count = model.world_count();
                    let common_set =
                        satisfying_worlds(&model, &Formula::common(f.clone())).unwrap();
                    let levels = everyone_levels(&model, &f, count).unwrap();
                    let conjunction: Vec<usize> = (0..count)
                        .filter(|&w| (1..=count).all(|k| levels[k][w]))
                        .collect();
                    prop_assert_eq!(common_set, conjunction);
                    Ok(())
                })
                .unwrap();

            // Printing and re-reading a formula is the identity.
            let alarm = builtin_alarm_game();
            let agents = alarm.agents().to_vec();
            let atoms = alarm.locations().to_vec();
            TestRunner::new(config.clone())
                .run(&common::formula_over(agents.clone(), atoms), |f| {
                    let parsed = parse(&f.render(), &agents).unwrap();
                    prop_assert_eq!(parsed, f);
                    Ok(())
                })
                .unwrap();

            // The depth of a formula at a world is one less than the distance to
            // the nearest world falsifying it.
            TestRunner::new(config)
                .run(&common::model_and_formula(), |(model, f)| {
                    let sat = satisfying_worlds(&model, &f).unwrap();
                    let holds = |w: usize| sat.binary_search(&w).is_ok();
                    for w in 0..model.world_count() {
                        let depth = epistemic_depth(&model, w, &f).unwrap();
                        let distance = model.knowledge_distance(w, |v| !holds(v)).unwrap();
                        let expected = match distance {
                            Distance::Finite(0) => EpistemicDepth::BelowZero,
                            Distance::Finite(d) => EpistemicDepth::Finite(d - 1),
                            Distance::Infinite => EpistemicDepth::Infinite,
                        };
                        prop_assert_eq!(depth, expected, "world {}", w);
                    }
                    Ok(())
                })
                .unwrap();
        },
    );
}

#[test]
fn criterion_9_trick_threshold() {
    criterion(
        9,
        "min_resets_to_trick(10) = 5, with E^10/E^11 checked directly",
        || {
            assert_eq!(min_resets_to_trick(10), 5);

            let m6 = &alarm_models()[6];
            let w = m6.world_index(&all_resets_key(5)).unwrap();
            let agents = m6.game().agents().to_vec();
            assert!(eval(m6, w, &parse("E^10 Off", &agents).unwrap()).unwrap());
            assert!(!eval(m6, w, &parse("E^11 Off", &agents).unwrap()).unwrap());

            // The closed form stays honest against direct evaluation for every
            // depth bound up to 20.
            for depth in 0..=20usize {
                let m = min_resets_to_trick(depth);
                let model = KripkeModel::induced(&builtin_alarm_game(), m + 1);
                let w = model.world_index(&all_resets_key(m)).unwrap();
                let f = parse(&format!("E^{depth} Off"), &agents).unwrap();
                assert!(eval(&model, w, &f).unwrap(), "depth {depth}");
                if m > 0 {
                    let smaller = KripkeModel::induced(&builtin_alarm_game(), m);
                    let w = smaller.world_index(&all_resets_key(m - 1)).unwrap();
                    assert!(!eval(&smaller, w, &f).unwrap(), "depth {depth} minimality");
                }
            }
        },
    );
}

#[test]
fn criterion_10_fast_engine() {
    criterion(
        10,
        "bit engine handles n = 20 under 120s and matches the explicit engine",
        || {
            let start = Instant::now();
            let fast = FastAlarm::new(20);
            assert_eq!(fast.world_count(), 1 << 20);
            assert_eq!(fast.distance_to_on(), Some(2 * 19 + 1));
            assert!(
                start.elapsed() < Duration::from_secs(120),
                "took {:?}",
                start.elapsed()
            );

            let models = alarm_models();
            for (n, model) in models.iter().enumerate().skip(1) {
                let fast = FastAlarm::new(n);
                assert_eq!(fast.world_count() as usize, model.world_count(), "n = {n}");

                let counts = on_off_counts(model);
                assert_eq!(fast.on_off_counts(), counts, "n = {n}");

                assert_eq!(
                    fast.human_pair_count() as usize,
                    model.relation_pairs(&human()).len(),
                    "n = {n}"
                );
                assert_eq!(
                    fast.machine_pair_count() as usize,
                    model.relation_pairs(&machine()).len(),
                    "n = {n}"
                );

                let zero = model.world_index(&all_resets_key(n - 1)).unwrap();
                let explicit = model
                    .knowledge_distance(zero, |v| model.label(v).as_str() == "On")
                    .unwrap();
                assert_eq!(
                    Distance::Finite(fast.distance_to_on().unwrap()),
                    explicit,
                    "n = {n}"
                );
            }
        },
    );
}
