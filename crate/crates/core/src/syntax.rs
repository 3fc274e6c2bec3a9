//! Concrete syntax.
//!
//! ```text
//! term    := atom { "^" atom } ;
//! atom    := "1" | integer | "sh" "(" term { "," term } ")" | "(" term ")" ;
//! integer := nonzero decimal literal, shorthand for that many singletons
//! ```
//!
//! Whitespace is insignificant between tokens.

use thiserror::Error;

use crate::term::{Kind, Term};

/// Largest accepted integer shorthand.
pub const MAX_SHORTHAND: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected {found} at byte {offset}, expected {expected}")]
    Unexpected {
        offset: usize,
        found: String,
        expected: &'static str,
    },
    #[error("empty shuffle at byte {offset}")]
    EmptyShuffle { offset: usize },
    #[error("unbalanced parenthesis at byte {offset}")]
    Unbalanced { offset: usize },
    #[error("integer shorthand must be a positive literal without leading zeros (byte {offset})")]
    BadInteger { offset: usize },
    #[error("integer shorthand exceeds {MAX_SHORTHAND} at byte {offset}")]
    IntegerTooLarge { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match *self {
            ParseError::Unexpected { offset, .. }
            | ParseError::EmptyShuffle { offset }
            | ParseError::Unbalanced { offset }
            | ParseError::BadInteger { offset }
            | ParseError::IntegerTooLarge { offset } => offset,
        }
    }
}

pub fn parse(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text);
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

/// Renders a term; maximal runs of two or more singletons inside a
/// concatenation are written as an integer.
pub fn render(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_term(t: &Term, out: &mut String) {
    match t.kind() {
        Kind::Singleton => out.push('1'),
        Kind::Concat(parts) => {
            let mut i = 0;
            let mut first = true;
            while i < parts.len() {
                if !first {
                    out.push('^');
                }
                first = false;
                if parts[i].is_singleton() {
                    let run = parts[i..].iter().take_while(|p| p.is_singleton()).count();
                    out.push_str(&run.to_string());
                    i += run;
                } else {
                    write_term(&parts[i], out);
                    i += 1;
                }
            }
        }
        Kind::Shuffle(args) => {
            out.push_str("sh(");
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_term(a, out);
            }
            out.push(')');
        }
    }
}

/// Recursive-descent parser over a byte cursor. Shared with the sequence
/// grammar.
pub(crate) struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            text,
            pos: 0,
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    pub(crate) fn found(&self) -> String {
        match self.text[self.pos..].chars().next() {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        }
    }

    pub(crate) fn unexpected(&mut self, expected: &'static str) -> ParseError {
        self.skip_ws();
        ParseError::Unexpected {
            offset: self.pos,
            found: self.found(),
            expected,
        }
    }

    pub(crate) fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Consumes `word` if it appears next as a whole identifier.
    pub(crate) fn eat_keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.starts_with(word.as_bytes())
            && !rest
                .get(word.len())
                .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(b')') => Err(ParseError::Unbalanced { offset: self.pos }),
            Some(_) => Err(self.unexpected("end of input")),
        }
    }

    pub(crate) fn term(&mut self) -> Result<Term, ParseError> {
        let mut parts = vec![self.atom()?];
        while self.eat(b'^') {
            parts.push(self.atom()?);
        }
        Ok(Term::concat(parts))
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(b'0'..=b'9') => self.integer(),
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                let t = self.term()?;
                if !self.eat(b')') {
                    return Err(match self.peek() {
                        None => ParseError::Unbalanced { offset: open },
                        _ => self.unexpected("')'"),
                    });
                }
                Ok(t)
            }
            Some(b's') if self.eat_keyword("sh") => {
                let head = self.pos - 2;
                if !self.eat(b'(') {
                    return Err(self.unexpected("'(' after sh"));
                }
                if self.peek() == Some(b')') {
                    return Err(ParseError::EmptyShuffle { offset: head });
                }
                let mut args = vec![self.term()?];
                while self.eat(b',') {
                    args.push(self.term()?);
                }
                if !self.eat(b')') {
                    return Err(match self.peek() {
                        None => ParseError::Unbalanced { offset: head + 2 },
                        _ => self.unexpected("',' or ')'"),
                    });
                }
                Ok(Term::shuffle(args))
            }
            Some(b')') => Err(ParseError::Unbalanced { offset: self.pos }),
            _ => Err(self.unexpected("a term")),
        }
    }

    fn integer(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = &self.text[start..self.pos];
        if digits.starts_with('0') {
            return Err(ParseError::BadInteger { offset: start });
        }
        match digits.parse::<usize>() {
            Ok(n) if n <= MAX_SHORTHAND => Ok(Term::finite(n)),
            _ => Err(ParseError::IntegerTooLarge { offset: start }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Term {
        Term::singleton()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse("1").unwrap(), one());
        assert_eq!(
            parse("sh(1, 1^1)").unwrap(),
            Term::shuffle(vec![one(), Term::concat(vec![one(), one()])])
        );
        assert_eq!(parse("3").unwrap(), Term::concat(vec![one(), one(), one()]));
        assert!(matches!(
            parse("sh()"),
            Err(ParseError::EmptyShuffle { offset: 0 })
        ));
    }

    #[test]
    fn render_examples() {
        assert_eq!(render(&one()), "1");
        assert_eq!(render(&Term::finite(3)), "3");
        assert_eq!(
            render(&Term::shuffle(vec![Term::finite(2), one()])),
            "sh(1, 2)"
        );
        assert_eq!(render(&parse("1^sh(1)^1^1").unwrap()), "1^sh(1)^2");
    }

    #[test]
    fn parentheses_and_whitespace() {
        assert_eq!(
            parse(" ( 1 ^ 1 ) ^ sh( 1 ,2 )").unwrap(),
            parse("2^sh(1,2)").unwrap()
        );
        assert_eq!(parse("((1))").unwrap(), one());
    }

    #[test]
    fn error_offsets() {
        assert_eq!(parse("0"), Err(ParseError::BadInteger { offset: 0 }));
        assert_eq!(parse("1 ^ 02"), Err(ParseError::BadInteger { offset: 4 }));
        assert_eq!(parse("(1^1"), Err(ParseError::Unbalanced { offset: 0 }));
        assert_eq!(parse("1)"), Err(ParseError::Unbalanced { offset: 1 }));
        assert_eq!(parse("sh(1"), Err(ParseError::Unbalanced { offset: 2 }));
        assert_eq!(parse("1 ^ ").unwrap_err().offset(), 4);
        assert_eq!(parse("^1").unwrap_err().offset(), 0);
        assert_eq!(parse("1 1").unwrap_err().offset(), 2);
        assert_eq!(parse("sh(1,)").unwrap_err().offset(), 5);
        assert!(matches!(
            parse("999999999999"),
            Err(ParseError::IntegerTooLarge { .. })
        ));
        assert!(parse("shx(1)").is_err());
        assert!(parse("").is_err());
    }
}
