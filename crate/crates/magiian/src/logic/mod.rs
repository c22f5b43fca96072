//! Epistemic formulas over game locations: syntax, evaluation, and depth.
//!
//! The language is propositional logic over location atoms plus three
//! knowledge operators: `K[a] f` (agent `a` knows `f`), `E^k f` (everybody
//! knows, iterated `k` times), and `C f` (common knowledge). `E f`
//! abbreviates `E^1 f`, and `E^0 f` is just `f`.
//!
//! Concrete syntax, loosest to tightest: `->` (right associative), `|`, `&`,
//! then the unary operators. `!`, `K[...]`, `E`, `E^k`, and `C` all bind one
//! unary operand, so `E^2 Off & On` reads as `(E^2 Off) & On`.

mod eval;
mod parse;

pub use eval::{
    epistemic_depth, eval, everyone_levels, satisfying_worlds, EpistemicDepth, EvalError,
};
pub use parse::{parse, ParseError};

use std::fmt;

use crate::ids::{AgentId, LocationId};

/// A formula of the epistemic language. `Everyone(k, f)` keeps `k >= 1`;
/// the [`everyone`](Formula::everyone) constructor and the parser both strip
/// `E^0` on sight.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    True,
    False,
    Atom(LocationId),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Knows(AgentId, Box<Formula>),
    Everyone(u32, Box<Formula>),
    Common(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<LocationId>) -> Self {
        Formula::Atom(name.into())
    }

    // An associated constructor, not a `self` method; it cannot shadow the
    // operator trait at any call site.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn knows(agent: impl Into<AgentId>, f: Formula) -> Self {
        Formula::Knows(agent.into(), Box::new(f))
    }

    /// `E^k f`; `k = 0` returns `f` unchanged.
    pub fn everyone(k: u32, f: Formula) -> Self {
        if k == 0 {
            f
        } else {
            Formula::Everyone(k, Box::new(f))
        }
    }

    pub fn common(f: Formula) -> Self {
        Formula::Common(Box::new(f))
    }

    /// Minimal-parentheses rendering; [`parse`] maps it back to the same
    /// tree. Redundant grouping in the input is therefore not preserved.
    pub fn render(&self) -> String {
        let mut out = String::new();
        render_at(self, Prec::Implies, &mut out);
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Binding strength, weakest first. The parser's grammar and the renderer
/// agree through this table alone.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Implies,
    Or,
    And,
    Unary,
    Atom,
}

fn prec(f: &Formula) -> Prec {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => Prec::Atom,
        Formula::Not(_) | Formula::Knows(..) | Formula::Everyone(..) | Formula::Common(_) => {
            Prec::Unary
        }
        Formula::And(..) => Prec::And,
        Formula::Or(..) => Prec::Or,
        Formula::Implies(..) => Prec::Implies,
    }
}

fn render_at(f: &Formula, min: Prec, out: &mut String) {
    let needs_parens = prec(f) < min;
    if needs_parens {
        out.push('(');
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(p) => out.push_str(p.as_str()),
        Formula::Not(x) => {
            out.push('!');
            render_at(x, Prec::Unary, out);
        }
        Formula::Knows(agent, x) => {
            out.push_str("K[");
            out.push_str(agent.as_str());
            out.push_str("] ");
            render_at(x, Prec::Unary, out);
        }
        Formula::Everyone(1, x) => {
            out.push_str("E ");
            render_at(x, Prec::Unary, out);
        }
        Formula::Everyone(k, x) => {
            out.push_str("E^");
            out.push_str(&k.to_string());
            out.push(' ');
            render_at(x, Prec::Unary, out);
        }
        Formula::Common(x) => {
            out.push_str("C ");
            render_at(x, Prec::Unary, out);
        }
        // Binary connectives: & and | associate to the left, -> to the
        // right. The operand on the non-associating side is rendered one
        // level tighter so the parse comes back shape-identical.
        Formula::And(a, b) => {
            render_at(a, Prec::And, out);
            out.push_str(" & ");
            render_at(b, Prec::Unary, out);
        }
        Formula::Or(a, b) => {
            render_at(a, Prec::Or, out);
            out.push_str(" | ");
            render_at(b, Prec::And, out);
        }
        Formula::Implies(a, b) => {
            render_at(a, Prec::Or, out);
            out.push_str(" -> ");
            render_at(b, Prec::Implies, out);
        }
    }
    if needs_parens {
        out.push(')');
    }
}

#[cfg(test)]
pub(crate) mod test_strategies {
    use proptest::prelude::*;

    use super::Formula;

    pub(crate) const AGENT_POOL: &[&str] = &["Human", "AI"];
    const ATOM_POOL: &[&str] = &["Start", "On", "Off"];

    /// Random formulas over the alarm game's vocabulary, depth-bounded.
    pub(crate) fn formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            Just(Formula::True),
            Just(Formula::False),
            proptest::sample::select(ATOM_POOL).prop_map(Formula::atom),
        ];
        leaf.prop_recursive(5, 64, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (proptest::sample::select(AGENT_POOL), inner.clone())
                    .prop_map(|(a, f)| Formula::knows(a, f)),
                (1u32..5, inner.clone()).prop_map(|(k, f)| Formula::everyone(k, f)),
                inner.prop_map(Formula::common),
            ]
        })
    }
}
