//! Recursive-descent parser for the formula language.
//!
//! ```text
//! formula := implies
//! implies := or ("->" implies)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary
//!          | "K" "[" ident "]" unary
//!          | "E" ("^" nat)? unary
//!          | "C" unary
//!          | "(" formula ")"
//!          | ident | "true" | "false"
//! ```
//!
//! `K`, `E`, `C`, `true`, and `false` are keywords; every other identifier is
//! an atom. Agent names inside `K[...]` are checked against the game's agent
//! list while parsing, so a typoed agent fails early, not at evaluation.

use thiserror::Error;

use crate::ids::{AgentId, LocationId};

use super::Formula;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", list(.expected))]
    Syntax {
        offset: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("unknown agent '{name}' at byte {offset}")]
    UnknownAgent { offset: usize, name: String },
}

fn list(expected: &[&'static str]) -> String {
    match expected {
        [] => String::from("nothing"),
        [one] => (*one).to_owned(),
        _ => {
            let (last, init) = expected.split_last().expect("non-empty");
            format!("{} or {last}", init.join(", "))
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Bang,
    Amp,
    Pipe,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Caret,
    Nat(u32),
    Ident(String),
    KwK,
    KwE,
    KwC,
    KwTrue,
    KwFalse,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Bang => "'!'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Pipe => "'|'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Nat(n) => format!("number {n}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::KwK => "'K'".into(),
            Tok::KwE => "'E'".into(),
            Tok::KwC => "'C'".into(),
            Tok::KwTrue => "'true'".into(),
            Tok::KwFalse => "'false'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'!' => {
                tokens.push((i, Tok::Bang));
                i += 1;
            }
            b'&' => {
                tokens.push((i, Tok::Amp));
                i += 1;
            }
            b'|' => {
                tokens.push((i, Tok::Pipe));
                i += 1;
            }
            b'(' => {
                tokens.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                tokens.push((i, Tok::RParen));
                i += 1;
            }
            b'[' => {
                tokens.push((i, Tok::LBracket));
                i += 1;
            }
            b']' => {
                tokens.push((i, Tok::RBracket));
                i += 1;
            }
            b'^' => {
                tokens.push((i, Tok::Caret));
                i += 1;
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    tokens.push((i, Tok::Arrow));
                    i += 2;
                } else {
                    return Err(ParseError::Syntax {
                        offset: i,
                        found: String::from("'-'"),
                        expected: vec!["'->'"],
                    });
                }
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                let n: u32 = digits.parse().map_err(|_| ParseError::Syntax {
                    offset: start,
                    found: format!("'{digits}'"),
                    expected: vec!["a number below 2^32"],
                })?;
                tokens.push((start, Tok::Nat(n)));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "K" => Tok::KwK,
                    "E" => Tok::KwE,
                    "C" => Tok::KwC,
                    "true" => Tok::KwTrue,
                    "false" => Tok::KwFalse,
                    _ => Tok::Ident(word.to_owned()),
                };
                tokens.push((start, tok));
            }
            _ => {
                let ch = text[i..].chars().next().expect("in bounds");
                return Err(ParseError::Syntax {
                    offset: i,
                    found: format!("'{ch}'"),
                    expected: vec!["an operator, parenthesis, or identifier"],
                });
            }
        }
    }
    tokens.push((text.len(), Tok::Eof));
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    agents: &'a [AgentId],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].1
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].1.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn fail<T>(&self, expected: Vec<&'static str>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            found: self.peek().describe(),
            expected,
        })
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if self.peek() == &tok {
            self.bump();
            Ok(())
        } else {
            self.fail(vec![name])
        }
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if self.peek() == &Tok::Arrow {
            self.bump();
            let right = self.implies()?;
            Ok(Formula::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.and()?;
        while self.peek() == &Tok::Pipe {
            self.bump();
            left = Formula::or(left, self.and()?);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while self.peek() == &Tok::Amp {
            self.bump();
            left = Formula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::KwK => {
                self.bump();
                self.expect(Tok::LBracket, "'['")?;
                let offset = self.offset();
                let name = match self.peek().clone() {
                    Tok::Ident(name) => {
                        self.bump();
                        name
                    }
                    _ => return self.fail(vec!["an agent name"]),
                };
                if !self.agents.iter().any(|a| a.as_str() == name) {
                    return Err(ParseError::UnknownAgent { offset, name });
                }
                self.expect(Tok::RBracket, "']'")?;
                Ok(Formula::knows(AgentId::new(name), self.unary()?))
            }
            Tok::KwE => {
                self.bump();
                let k = if self.peek() == &Tok::Caret {
                    self.bump();
                    match self.peek().clone() {
                        Tok::Nat(n) => {
                            self.bump();
                            n
                        }
                        _ => return self.fail(vec!["a number"]),
                    }
                } else {
                    1
                };
                // E^0 f is f itself; the constructor strips it.
                Ok(Formula::everyone(k, self.unary()?))
            }
            Tok::KwC => {
                self.bump();
                Ok(Formula::common(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.implies()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(LocationId::new(name)))
            }
            Tok::KwTrue => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::KwFalse => {
                self.bump();
                Ok(Formula::False)
            }
            _ => self.fail(vec![
                "'!'", "'K'", "'E'", "'C'", "'('", "'true'", "'false'", "an atom",
            ]),
        }
    }
}

/// Parse a formula, resolving `K[...]` agents against `agents`.
pub fn parse(text: &str, agents: &[AgentId]) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        agents,
    };
    let formula = parser.implies()?;
    if parser.peek() != &Tok::Eof {
        return parser.fail(vec!["'&'", "'|'", "'->'", "end of input"]);
    }
    Ok(formula)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn agents() -> Vec<AgentId> {
        vec![AgentId::new("Human"), AgentId::new("AI")]
    }

    fn p(text: &str) -> Formula {
        parse(text, &agents()).unwrap()
    }

    #[test]
    fn parses_the_operators() {
        assert_eq!(p("C Off"), Formula::common(Formula::atom("Off")));
        assert_eq!(
            p("E^3 (Off & !K[Human] Off)"),
            Formula::everyone(
                3,
                Formula::and(
                    Formula::atom("Off"),
                    Formula::not(Formula::knows("Human", Formula::atom("Off")))
                )
            )
        );
        assert_eq!(p("E Off"), Formula::everyone(1, Formula::atom("Off")));
        assert_eq!(p("E^1 Off"), p("E Off"));
        assert_eq!(
            p("true & false"),
            Formula::and(Formula::True, Formula::False)
        );
    }

    #[test]
    fn exponent_zero_is_stripped() {
        assert_eq!(p("E^0 Off"), Formula::atom("Off"));
        assert_eq!(p("E^0 (Off | On)"), p("Off | On"));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            p("a -> b -> c"),
            Formula::implies(
                Formula::atom("a"),
                Formula::implies(Formula::atom("b"), Formula::atom("c"))
            )
        );
        assert_eq!(
            p("!a & b | c -> d"),
            Formula::implies(
                Formula::or(
                    Formula::and(Formula::not(Formula::atom("a")), Formula::atom("b")),
                    Formula::atom("c")
                ),
                Formula::atom("d")
            )
        );
        // Unary operators take the tightest operand.
        assert_eq!(
            p("K[AI] Off & On"),
            Formula::and(
                Formula::knows("AI", Formula::atom("Off")),
                Formula::atom("On")
            )
        );
    }

    #[test]
    fn syntax_error_carries_offset_and_expectations() {
        let err = parse("K[AI Off", &agents()).unwrap_err();
        match err {
            ParseError::Syntax {
                offset,
                found,
                expected,
            } => {
                assert_eq!(offset, 5);
                assert_eq!(found, "'Off'");
                assert_eq!(expected, vec!["']'"]);
            }
            other => panic!("unexpected error {other:?}"),
        }

        let err = parse("Off &", &agents()).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 5, .. }));

        let err = parse("Off Off", &agents()).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 4, .. }));

        let message = parse("E^", &agents()).unwrap_err().to_string();
        assert!(message.contains("byte 2"), "got: {message}");
        assert!(message.contains("a number"), "got: {message}");
    }

    #[test]
    fn unknown_agent_is_a_name_error() {
        let err = parse("K[Robot] Off", &agents()).unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownAgent {
                offset: 2,
                name: String::from("Robot")
            }
        );
    }

    #[test]
    fn keywords_are_not_atoms() {
        assert!(parse("E", &agents()).is_err());
        assert!(parse("K", &agents()).is_err());
        assert!(parse("C", &agents()).is_err());
    }

    proptest::proptest! {
        #[test]
        fn render_then_parse_is_identity(f in super::super::test_strategies::formula()) {
            let text = f.render();
            let parsed = parse(&text, &super::super::test_strategies::AGENT_POOL
                .iter().map(|a| AgentId::new(*a)).collect::<Vec<_>>()).unwrap();
            proptest::prop_assert_eq!(parsed, f);
        }
    }
}
