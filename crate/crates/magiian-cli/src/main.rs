//! Command-line front end for the game and model library.
//!
//! Exit codes separate three outcomes: 0 for success (and true verdicts),
//! 1 for a property that failed to hold (an invalid game, a false formula,
//! a failed theorem row), 2 for unusable input (bad flags, unreadable files,
//! syntax errors, unknown worlds).

mod bench;
mod explain;
mod repl;

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use magiian::alarm::{builtin_alarm_game, update_model, verify_theorem, TheoremEngine};
use magiian::game::{load_game, validate_game, validate_game_with, ValidationOptions};
use magiian::kripke::dot::{export_dot, DotOptions};
use magiian::logic::{epistemic_depth, eval, parse, EpistemicDepth};
use magiian::{Formula, Game, KripkeModel};

#[derive(Parser)]
#[command(
    name = "magiian",
    version,
    about = "Multi-agent games with imperfect information against nature: build the models \
             their histories induce, check what the agents know, and explore the alarm clock"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable report
    Text,
    /// JSON document
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    /// Build each model directly from the length-n histories
    Induced,
    /// Grow each model from the previous one by the doubling update
    Iterative,
    /// Run both and require identical models
    Both,
}

impl From<EngineArg> for TheoremEngine {
    fn from(value: EngineArg) -> Self {
        match value {
            EngineArg::Induced => TheoremEngine::Induced,
            EngineArg::Iterative => TheoremEngine::Iterative,
            EngineArg::Both => TheoremEngine::Both,
        }
    }
}

/// The shared `--game` flag: a JSON file path or the name of a built-in.
#[derive(Args)]
struct GameOpt {
    /// Game to load: a JSON file path, or builtin:alarm
    #[arg(
        long,
        default_value = "builtin:alarm",
        value_name = "PATH|builtin:alarm"
    )]
    game: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check a game definition file against the format's rules
    Validate {
        /// Game file to check, or builtin:alarm
        #[arg(value_name = "GAME", required_unless_present = "game")]
        target: Option<String>,
        /// Flag spelling of the game argument
        #[arg(long, conflicts_with = "target", value_name = "PATH|builtin:alarm")]
        game: Option<String>,
        /// Also require every action at every location
        #[arg(long)]
        strict_availability: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build the model the length-n histories induce and dump it
    Model {
        #[command(flatten)]
        game: GameOpt,
        /// History length of the model's worlds
        #[arg(long, default_value_t = 2)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate a formula at one world of the induced model
    Check {
        #[command(flatten)]
        game: GameOpt,
        /// History length; inferred from --world when omitted
        #[arg(long)]
        steps: Option<usize>,
        /// World to evaluate at, written as a history string
        #[arg(long, value_name = "HISTORY")]
        world: String,
        /// Formula to evaluate
        #[arg(long)]
        formula: String,
        /// On a false verdict, print the shortest chain to a failing world
        #[arg(long)]
        explain: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// How many everyone-knows iterations a formula survives at a world
    Depth {
        #[command(flatten)]
        game: GameOpt,
        /// History length; inferred from --world when omitted
        #[arg(long)]
        steps: Option<usize>,
        /// World to evaluate at, written as a history string
        #[arg(long, value_name = "HISTORY")]
        world: String,
        /// Formula whose knowledge depth to measure
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the alarm game's knowledge-height claims, one row per reset count
    VerifyTheorem {
        /// Largest reset count to check
        #[arg(long, default_value_t = 10)]
        max_m: usize,
        /// Model construction engine; both cross-checks the two
        #[arg(long, value_enum, default_value_t = EngineArg::Both)]
        engine: EngineArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Render the induced model as a DOT graph
    ExportDot {
        #[command(flatten)]
        game: GameOpt,
        /// History length of the model's worlds
        #[arg(long, default_value_t = 2)]
        steps: usize,
        /// Write to a file instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Omit the location annotation on each node
        #[arg(long)]
        no_labels: bool,
        /// Merge parallel edges from different agents
        #[arg(long)]
        collapse_agents: bool,
    },
    /// Play the alarm game as the human and query both agents' knowledge
    Repl {
        /// Seed for nature's choices
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time the explicit and packed alarm engines side by side
    Bench {
        /// Largest history length to time
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// Skip the explicit engine beyond this length
        #[arg(long, default_value_t = 14)]
        induced_cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() {
    match run(Cli::parse()) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Validate {
            target,
            game,
            strict_availability,
            format,
        } => {
            let source = target.or(game).expect("clap requires one spelling");
            cmd_validate(&source, strict_availability, format)
        }
        Command::Model {
            game,
            steps,
            format,
        } => cmd_model(&game.load()?, steps, format),
        Command::Check {
            game,
            steps,
            world,
            formula,
            explain,
            format,
        } => cmd_check(&game.load()?, steps, &world, &formula, explain, format),
        Command::Depth {
            game,
            steps,
            world,
            formula,
            format,
        } => cmd_depth(&game.load()?, steps, &world, &formula, format),
        Command::VerifyTheorem {
            max_m,
            engine,
            format,
        } => cmd_verify_theorem(max_m, engine.into(), format),
        Command::ExportDot {
            game,
            steps,
            out,
            no_labels,
            collapse_agents,
        } => cmd_export_dot(&game.load()?, steps, out, no_labels, collapse_agents),
        Command::Repl { seed } => {
            repl::run(seed)?;
            Ok(0)
        }
        Command::Bench {
            max_n,
            induced_cap,
            format,
        } => cmd_bench(max_n, induced_cap, format),
    }
}

impl GameOpt {
    /// Load and validate the game; a game that fails validation is unusable
    /// input for every verb except `validate` itself.
    fn load(&self) -> Result<Game> {
        let game = resolve_game(&self.game)?;
        let report = validate_game(&game);
        if !report.is_valid() {
            bail!(
                "game '{}' is not well-formed:\n{}",
                self.game,
                report.to_string().trim_end()
            );
        }
        Ok(game)
    }
}

fn resolve_game(source: &str) -> Result<Game> {
    if source == "builtin:alarm" {
        return Ok(builtin_alarm_game());
    }
    if let Some(name) = source.strip_prefix("builtin:") {
        bail!("unknown built-in game '{name}'; only builtin:alarm ships");
    }
    // Flattened to one message: the io/json cause is already embedded in the
    // FileError text, so the anyhow source chain would print it twice.
    load_game(source).map_err(|err| anyhow::anyhow!("cannot load game from {source}: {err}"))
}

/// Build the length-n model, growing alarm models incrementally since the
/// direct construction compares all pairs of histories.
pub(crate) fn build_model(game: &Game, steps: usize) -> KripkeModel {
    if steps >= 2 && *game == builtin_alarm_game() {
        let mut m = KripkeModel::induced(game, 1);
        for _ in 1..steps {
            m = update_model(&m).expect("alarm models stay updatable");
        }
        m
    } else {
        KripkeModel::induced(game, steps)
    }
}

/// Write to stdout, exiting quietly when the downstream consumer has closed
/// the pipe. Every printing path of every verb funnels through here.
pub(crate) fn write_out(text: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()) {
        Ok(()) => Ok(()),
        Err(err) if err.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(err) => Err(err.into()),
    }
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> Result<()> {
    let rendered = match format {
        Format::Text => text(),
        Format::Machine => serde_json::to_string_pretty(value)?,
    };
    if rendered.ends_with('\n') {
        write_out(&rendered)
    } else {
        write_out(&format!("{rendered}\n"))
    }
}

#[derive(Serialize)]
struct ValidateOutcome {
    valid: bool,
    violations: Vec<String>,
}

fn cmd_validate(source: &str, strict_availability: bool, format: Format) -> Result<i32> {
    let game = resolve_game(source)?;
    let report = validate_game_with(
        &game,
        ValidationOptions {
            strict_availability,
        },
    );
    let outcome = ValidateOutcome {
        valid: report.is_valid(),
        violations: report.violations().iter().map(|v| v.to_string()).collect(),
    };
    emit(format, &outcome, || report.to_string())?;
    Ok(if report.is_valid() { 0 } else { 1 })
}

#[derive(Serialize)]
struct WorldDump {
    key: String,
    label: String,
}

#[derive(Serialize)]
struct ModelDump {
    steps: usize,
    world_count: usize,
    worlds: Vec<WorldDump>,
    relations: BTreeMap<String, Vec<(String, String)>>,
}

fn cmd_model(game: &Game, steps: usize, format: Format) -> Result<i32> {
    let model = build_model(game, steps);
    let worlds: Vec<WorldDump> = (0..model.world_count())
        .map(|w| WorldDump {
            key: model.world_key(w).to_owned(),
            label: model.label(w).to_string(),
        })
        .collect();
    let relations: BTreeMap<String, Vec<(String, String)>> = game
        .agents()
        .iter()
        .map(|agent| {
            let pairs = model
                .relation_pairs(agent)
                .iter()
                .map(|&(a, b)| {
                    (
                        model.world_key(a as usize).to_owned(),
                        model.world_key(b as usize).to_owned(),
                    )
                })
                .collect();
            (agent.to_string(), pairs)
        })
        .collect();
    let dump = ModelDump {
        steps,
        world_count: model.world_count(),
        worlds,
        relations,
    };
    emit(format, &dump, || {
        let mut out = String::new();
        out.push_str(&format!("steps: {}\n", dump.steps));
        out.push_str(&format!("worlds: {}\n", dump.world_count));
        for w in &dump.worlds {
            out.push_str(&format!("  {}  [{}]\n", w.key, w.label));
        }
        for (agent, pairs) in &dump.relations {
            out.push_str(&format!("edges[{agent}]: {}\n", pairs.len()));
            for (a, b) in pairs {
                out.push_str(&format!("  {a} ~ {b}\n"));
            }
        }
        out
    })?;
    Ok(0)
}

/// Resolve `--world`, inferring the model length from the history string
/// when `--steps` is not given: a length-n history has 2n+1 tokens.
fn resolve_world(game: &Game, steps: Option<usize>, world: &str) -> Result<(KripkeModel, usize)> {
    let steps = match steps {
        Some(n) => n,
        None => {
            let tokens = world.split_whitespace().count();
            if tokens == 0 || tokens.is_multiple_of(2) {
                bail!(
                    "world '{world}' does not alternate locations and actions; \
                     cannot infer --steps from it"
                );
            }
            tokens / 2
        }
    };
    let model = build_model(game, steps);
    match model.world_index(world) {
        Some(index) => Ok((model, index)),
        None => {
            let mut scored: Vec<(usize, &str)> = (0..model.world_count())
                .map(|w| {
                    let key = model.world_key(w);
                    (common_prefix_len(key, world), key)
                })
                .collect();
            // Stable: ties keep model order, so suggestions are deterministic.
            scored.sort_by_key(|&(shared, _)| std::cmp::Reverse(shared));
            let nearest: Vec<String> = scored
                .iter()
                .take(5)
                .map(|(_, key)| format!("  {key}"))
                .collect();
            bail!(
                "world '{world}' is not in the {steps}-step model; nearest worlds:\n{}",
                nearest.join("\n")
            );
        }
    }
}

fn common_prefix_len(a: &str, b: &str) -> usize {
    a.bytes().zip(b.bytes()).take_while(|(x, y)| x == y).count()
}

fn parse_formula(game: &Game, text: &str) -> Result<Formula> {
    parse(text, game.agents()).map_err(|err| anyhow::anyhow!("cannot parse formula: {err}"))
}

#[derive(Serialize)]
struct CheckOutcome {
    world: String,
    formula: String,
    verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    explanation: Option<explain::Explanation>,
}

fn cmd_check(
    game: &Game,
    steps: Option<usize>,
    world: &str,
    formula: &str,
    explain: bool,
    format: Format,
) -> Result<i32> {
    let f = parse_formula(game, formula)?;
    let (model, index) = resolve_world(game, steps, world)?;
    let verdict = eval(&model, index, &f)?;
    let explanation = if explain && !verdict {
        Some(explain::explain_failure(&model, index, &f)?)
    } else {
        None
    };
    let outcome = CheckOutcome {
        world: world.to_owned(),
        formula: f.render(),
        verdict,
        explanation,
    };
    emit(format, &outcome, || {
        let mut out = format!("{}\n", if verdict { "true" } else { "false" });
        if let Some(ex) = &outcome.explanation {
            out.push_str(&ex.render_text());
        }
        out
    })?;
    Ok(if verdict { 0 } else { 1 })
}

#[derive(Serialize)]
struct DepthOutcome {
    world: String,
    formula: String,
    depth: EpistemicDepth,
}

fn cmd_depth(
    game: &Game,
    steps: Option<usize>,
    world: &str,
    formula: &str,
    format: Format,
) -> Result<i32> {
    let f = parse_formula(game, formula)?;
    let (model, index) = resolve_world(game, steps, world)?;
    let depth = epistemic_depth(&model, index, &f)?;
    let outcome = DepthOutcome {
        world: world.to_owned(),
        formula: f.render(),
        depth,
    };
    emit(format, &outcome, || format!("{depth}\n"))?;
    Ok(0)
}

fn cmd_verify_theorem(max_m: usize, engine: TheoremEngine, format: Format) -> Result<i32> {
    let report = verify_theorem(max_m, engine);
    emit(format, &report, || report.to_string())?;
    Ok(if report.all_pass { 0 } else { 1 })
}

fn cmd_export_dot(
    game: &Game,
    steps: usize,
    out: Option<PathBuf>,
    no_labels: bool,
    collapse_agents: bool,
) -> Result<i32> {
    let model = build_model(game, steps);
    let text = export_dot(
        &model,
        DotOptions {
            show_labels: !no_labels,
            collapse_agents,
        },
    );
    match out {
        Some(path) => std::fs::write(&path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => write_out(&text)?,
    }
    Ok(0)
}

fn cmd_bench(max_n: usize, induced_cap: usize, format: Format) -> Result<i32> {
    if max_n == 0 {
        bail!("--max-n must be at least 1");
    }
    if max_n > 25 {
        bail!("--max-n must be at most 25; the packed engine stores codes in 32 bits");
    }
    let rows = bench::run(max_n, induced_cap);
    emit(format, &rows, || bench::render_table(&rows))?;
    Ok(0)
}
