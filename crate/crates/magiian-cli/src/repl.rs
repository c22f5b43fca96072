//! Interactive alarm-clock session.
//!
//! The user plays the human: nature sets the alarm at the start (and on every
//! reset) without revealing the outcome, and each `press` advances the
//! history one step. `ask` evaluates a formula at the true current world in
//! the model of matching length, so the user can interrogate what either
//! agent knows at any point. Nature's choices come from a seeded generator;
//! identical seeds and inputs replay identical sessions.

use std::io::{self, BufRead};

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use magiian::alarm::{builtin_alarm_game, chain_position};
use magiian::ids::LocationId;
use magiian::logic::{eval, parse};
use magiian::{Game, History};

struct Session {
    game: Game,
    history: History,
    transcript: Vec<String>,
    rng: ChaCha8Rng,
}

impl Session {
    fn new(seed: u64) -> Self {
        let game = builtin_alarm_game();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let history = draw_morning(&game, &mut rng);
        Session {
            game,
            history,
            transcript: Vec::new(),
            rng,
        }
    }

    fn press(&mut self, token: &str) -> String {
        let unavailable = format!("action unavailable: {token}");
        let Ok(profile) = self.game.profile_from_token(token) else {
            return unavailable;
        };
        let Ok(successors) = self.game.successors(self.history.last(), &profile) else {
            return unavailable;
        };
        let successors: Vec<LocationId> = successors.into_iter().collect();
        if successors.is_empty() {
            return unavailable;
        }
        let to = successors[self.rng.random_range(0..successors.len())].clone();
        self.history = self
            .game
            .extend(&self.history, profile, to)
            .expect("drawn successors extend the history");
        format!("pressed {token}")
    }

    fn show(&self) -> String {
        let key = self.game.history_key(&self.history);
        let position =
            chain_position(&self.history).expect("session histories are alarm histories");
        let total = 1usize << self.history.len();
        let transcript = if self.transcript.is_empty() {
            String::from("(none)")
        } else {
            self.transcript.join("; ")
        };
        format!("history: {key}\nchain position: {position} of {total}\ntranscript: {transcript}")
    }

    fn ask(&self, text: &str) -> String {
        let formula = match parse(text, self.game.agents()) {
            Ok(f) => f,
            Err(err) => return format!("formula error: {err}"),
        };
        let model = crate::build_model(&self.game, self.history.len());
        let index = model
            .index_of(&self.history)
            .expect("the session history is a world of its own model");
        match eval(&model, index, &formula) {
            Ok(true) => String::from("true"),
            Ok(false) => String::from("false"),
            Err(err) => format!("evaluation error: {err}"),
        }
    }

    fn reset(&mut self) {
        self.history = draw_morning(&self.game, &mut self.rng);
        self.transcript.clear();
    }
}

/// Nature resolves the first morning: play `i` from the start and draw one of
/// the possible outcomes. The draw is never announced.
fn draw_morning(game: &Game, rng: &mut ChaCha8Rng) -> History {
    let initial = History::initial(game.init().clone());
    let profile = game
        .profile_from_token("i")
        .expect("the alarm game has the morning action");
    let successors: Vec<LocationId> = game
        .successors(game.init(), &profile)
        .expect("the morning action is available at the start")
        .into_iter()
        .collect();
    let to = successors[rng.random_range(0..successors.len())].clone();
    game.extend(&initial, profile, to)
        .expect("drawn successors extend the history")
}

pub fn run(seed: u64) -> Result<()> {
    let say = |text: String| crate::write_out(&format!("{text}\n"));
    let mut session = Session::new(seed);
    say(format!("alarm clock session, seed {seed}"))?;
    say("morning has arrived; the alarm was set where you cannot see it".into())?;
    say("commands: press r|t, show, ask <formula>, reset-session, quit".into())?;

    let stdin = io::stdin();
    for line in stdin.lock().lines() {
        let line = line?;
        let command = line.trim();
        if command.is_empty() {
            continue;
        }
        session.transcript.push(command.to_owned());
        if command == "quit" {
            break;
        } else if let Some(token) = command.strip_prefix("press ") {
            say(session.press(token.trim()))?;
        } else if command == "show" {
            say(session.show())?;
        } else if let Some(text) = command.strip_prefix("ask ") {
            say(session.ask(text.trim()))?;
        } else if command == "reset-session" {
            session.reset();
            say("session reset; a new morning has arrived".into())?;
        } else {
            say(format!("unknown command: {command}"))?;
        }
    }
    Ok(())
}
