//! Recursive-descent parser for the formula grammar.
//!
//! Atoms are `p0`, `p1`, ...; constants `T` and `F`; prefix operators `~`,
//! `[k]`, `<k>`; binary operators `&`, `|`, `->`, `<->` in decreasing
//! binding strength, with `->` and `<->` associating right and `&`, `|`
//! associating left. Whitespace is insignificant.

use super::Formula;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("parse error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("parse error at byte {pos}: modality index {index} is out of range (configured count {count})")]
    ModalityOutOfRange { pos: usize, index: u32, count: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    LPar,
    RPar,
    Not,
    BoxK(u32),
    DiaK(u32),
    And,
    Or,
    Arrow,
    Iff,
    Top,
    Bot,
    Var(u32),
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err<T>(&self, pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos,
            message: message.into(),
        })
    }

    fn number(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err(start, "expected a digit");
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err(start, "number out of range"))
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.bytes.len() {
            let start = self.pos;
            let b = self.bytes[self.pos];
            let tok = match b {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.pos += 1;
                    continue;
                }
                b'(' => {
                    self.pos += 1;
                    Tok::LPar
                }
                b')' => {
                    self.pos += 1;
                    Tok::RPar
                }
                b'~' => {
                    self.pos += 1;
                    Tok::Not
                }
                b'&' => {
                    self.pos += 1;
                    Tok::And
                }
                b'|' => {
                    self.pos += 1;
                    Tok::Or
                }
                b'-' => {
                    if self.bytes.get(self.pos + 1) == Some(&b'>') {
                        self.pos += 2;
                        Tok::Arrow
                    } else {
                        return self.err(start, "expected '->'");
                    }
                }
                b'<' => {
                    if self.bytes.get(self.pos + 1) == Some(&b'-') {
                        if self.bytes.get(self.pos + 2) == Some(&b'>') {
                            self.pos += 3;
                            Tok::Iff
                        } else {
                            return self.err(start, "expected '<->'");
                        }
                    } else {
                        self.pos += 1;
                        let k = self.number()?;
                        if self.bytes.get(self.pos) != Some(&b'>') {
                            return self.err(self.pos, "expected '>' after modality index");
                        }
                        self.pos += 1;
                        Tok::DiaK(k)
                    }
                }
                b'[' => {
                    self.pos += 1;
                    let k = self.number()?;
                    if self.bytes.get(self.pos) != Some(&b']') {
                        return self.err(self.pos, "expected ']' after modality index");
                    }
                    self.pos += 1;
                    Tok::BoxK(k)
                }
                b'T' => {
                    self.pos += 1;
                    Tok::Top
                }
                b'F' => {
                    self.pos += 1;
                    Tok::Bot
                }
                b'p' => {
                    self.pos += 1;
                    Tok::Var(self.number()?)
                }
                _ => return self.err(start, format!("unexpected character {:?}", b as char)),
            };
            out.push((tok, start));
        }
        Ok(out)
    }
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    modality_count: u32,
}

impl Parser {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let pos = self
            .tokens
            .get(self.pos)
            .map(|&(_, p)| p)
            .unwrap_or(self.end);
        Err(ParseError::Syntax {
            pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<Tok> {
        self.tokens.get(self.pos).map(|&(t, _)| t)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn check_modality(&self, k: u32) -> Result<(), ParseError> {
        if k < self.modality_count {
            Ok(())
        } else {
            let pos = self.tokens[self.pos - 1].1;
            Err(ParseError::ModalityOutOfRange {
                pos,
                index: k,
                count: self.modality_count,
            })
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implies()?;
        if self.peek() == Some(Tok::Iff) {
            self.pos += 1;
            let rhs = self.iff()?;
            Ok(Formula::iff(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(Tok::Arrow) {
            self.pos += 1;
            let rhs = self.implies()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(Tok::Or) {
            self.pos += 1;
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.prefix()?;
        while self.peek() == Some(Tok::And) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.prefix()?);
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.prefix()?))
            }
            Some(Tok::BoxK(k)) => {
                self.pos += 1;
                self.check_modality(k)?;
                Ok(Formula::bx(k, self.prefix()?))
            }
            Some(Tok::DiaK(k)) => {
                self.pos += 1;
                self.check_modality(k)?;
                Ok(Formula::dia(k, self.prefix()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.bump() {
            Some(Tok::LPar) => {
                let f = self.iff()?;
                if self.bump() != Some(Tok::RPar) {
                    self.pos -= 1;
                    return self.err("expected ')'");
                }
                Ok(f)
            }
            Some(Tok::Top) => Ok(Formula::Top),
            Some(Tok::Bot) => Ok(Formula::Bot),
            Some(Tok::Var(v)) => Ok(Formula::Var(v)),
            Some(_) => {
                self.pos -= 1;
                self.err("expected a formula")
            }
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a formula, checking every modality index against
/// `modality_count` (indices `0..modality_count` are allowed).
pub fn parse(text: &str, modality_count: u32) -> Result<Formula, ParseError> {
    let tokens = Lexer {
        bytes: text.as_bytes(),
        pos: 0,
    }
    .tokens()?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        modality_count,
    };
    let f = parser.iff()?;
    if parser.pos != parser.tokens.len() {
        return parser.err("unexpected trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u32) -> Formula {
        Formula::Var(v)
    }

    #[test]
    fn parses_grammar_examples() {
        assert_eq!(
            parse("[0]p0 -> <1>~p1", 2).unwrap(),
            Formula::implies(Formula::bx(0, p(0)), Formula::dia(1, Formula::not(p(1))))
        );
        assert_eq!(
            parse("p0 & p1 | p2", 2).unwrap(),
            Formula::or(Formula::and(p(0), p(1)), p(2))
        );
        assert_eq!(
            parse("p0 -> p1 -> p2", 2).unwrap(),
            Formula::implies(p(0), Formula::implies(p(1), p(2)))
        );
        assert_eq!(
            parse("p0 <-> p1 <-> p2", 2).unwrap(),
            Formula::iff(p(0), Formula::iff(p(1), p(2)))
        );
        assert_eq!(parse("  T ", 2).unwrap(), Formula::Top);
        assert_eq!(parse("~~F", 2).unwrap(), Formula::not(Formula::not(Formula::Bot)));
        assert_eq!(
            parse("[1][0]p12", 2).unwrap(),
            Formula::bx(1, Formula::bx(0, p(12)))
        );
        assert_eq!(
            parse("(p0 -> p1) -> p2", 2).unwrap(),
            Formula::implies(Formula::implies(p(0), p(1)), p(2))
        );
    }

    #[test]
    fn dia_and_iff_tokens_disambiguate() {
        assert_eq!(parse("<0>T", 1).unwrap(), Formula::dia(0, Formula::Top));
        assert_eq!(parse("p0 <-> <0>T", 1).unwrap(), Formula::iff(p(0), Formula::dia(0, Formula::Top)));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse("", 2).is_err());
        assert!(parse("p", 2).is_err());
        assert!(parse("p0 &", 2).is_err());
        assert!(parse("(p0", 2).is_err());
        assert!(parse("p0 p1", 2).is_err());
        assert!(parse("[x]p0", 2).is_err());
        assert!(parse("<->p0", 2).is_err());
        assert!(parse("p0 - p1", 2).is_err());
    }

    #[test]
    fn rejects_out_of_range_modalities() {
        assert_eq!(
            parse("[2]p0", 2),
            Err(ParseError::ModalityOutOfRange {
                pos: 0,
                index: 2,
                count: 2
            })
        );
        assert!(parse("<5>T", 4).is_err());
        assert!(parse("[1]p0", 1).is_err());
        assert!(parse("[1]p0", 2).is_ok());
    }

    #[test]
    fn round_trips_printed_output() {
        for text in [
            "p0 & (p1 | p2)",
            "[1]([0]p1 -> p1)",
            "~[0]~T",
            "p0 <-> (p1 -> <1>p0) & F",
            "((p0 -> p1) -> p0) -> p0",
        ] {
            let f = parse(text, 2).unwrap();
            assert_eq!(parse(&f.to_string(), 2).unwrap(), f);
        }
    }
}
