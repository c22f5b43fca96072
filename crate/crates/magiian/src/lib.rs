//! Multi-agent games with imperfect information against nature, and the
//! knowledge those games generate.
//!
//! A [`game::Game`] is a finite graph of locations. Each step, every agent
//! picks an action, and nature picks one of the locations the joint action
//! allows. Agents do not see locations directly; each has a partition of the
//! locations into observation blocks, and it cannot tell two play histories
//! apart when they look the same block-by-block and it took the same own
//! actions along both.
//!
//! That "cannot tell apart" relation turns the set of equal-length histories
//! into a [`kripke::KripkeModel`]: worlds are histories, each agent's
//! relation is its indistinguishability, and a world is labeled by where the
//! play currently stands. [`logic`] evaluates knowledge formulas on such
//! models, from one agent's `K` up to common knowledge `C`.
//!
//! The [`alarm`] module ships the two-agent alarm-clock game these pieces
//! were built around, along with its morning-by-morning model update, a
//! bit-packed engine for large instances, and a mechanical check of the
//! game's knowledge-height law.
//!
//! ```
//! use magiian::alarm::builtin_alarm_game;
//! use magiian::kripke::KripkeModel;
//! use magiian::logic::{eval, parse};
//!
//! let game = builtin_alarm_game();
//! let model = KripkeModel::induced(&game, 2);
//!
//! // After initializing and then resetting, the human knows the alarm is
//! // off, and both agents know that everyone knows it...
//! let world = model.world_index("Start i Off r Off").unwrap();
//! let f = parse("E^2 Off", game.agents()).unwrap();
//! assert!(eval(&model, world, &f).unwrap());
//!
//! // ...but the tower stops there.
//! let f = parse("E^3 Off", game.agents()).unwrap();
//! assert!(!eval(&model, world, &f).unwrap());
//! ```

pub mod alarm;
pub mod game;
pub mod ids;
pub mod kripke;
pub mod logic;

mod uf;

pub use game::{Game, History};
pub use kripke::KripkeModel;
pub use logic::Formula;

// The guide's code blocks compile and run with the library's doc tests, so
// the two cannot drift apart silently.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/games.md")]
    mod games {}
    #[doc = include_str!("../../../book/src/histories.md")]
    mod histories {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/logic.md")]
    mod logic {}
    #[doc = include_str!("../../../book/src/update.md")]
    mod update {}
    #[doc = include_str!("../../../book/src/theorem.md")]
    mod theorem {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
