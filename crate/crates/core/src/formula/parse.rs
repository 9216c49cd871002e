//! ASCII surface syntax.
//!
//! ```text
//! formula := imp [ ">=" imp ]
//! imp     := or [ ("->" | "<->") imp ]
//! or      := and { "|" and }
//! and     := unary { "&" unary }
//! unary   := "~" unary | atom | "T" | "F" | "(" formula ")"
//! atom    := [a-z][a-zA-Z0-9_]*
//! ```
//!
//! `>=` binds loosest and does not associate, so `p >= q & r` reads as
//! `p >= (q & r)` and `p >= q >= r` is rejected.

use std::fmt;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at line {}, column {}: found {}, expected one of: {}",
            self.line,
            self.column,
            self.found,
            self.expected.join(", ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Atom(String),
    Top,
    Bot,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Geq,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Atom(a) => format!("atom `{a}`"),
            Tok::Top => "`T`".into(),
            Tok::Bot => "`F`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Geq => "`>=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

const OPERAND: &[&str] = &["atom", "`T`", "`F`", "`~`", "`(`"];

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let push = |out: &mut Vec<Spanned>, tok| {
            out.push(Spanned {
                tok,
                line: l,
                column: col,
            })
        };
        let err = |found: String, expected: Vec<&'static str>| ParseError {
            line: l,
            column: col,
            found,
            expected,
        };
        match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            '~' | '&' | '|' | '(' | ')' => {
                bump(&mut chars);
                push(
                    &mut out,
                    match c {
                        '~' => Tok::Not,
                        '&' => Tok::And,
                        '|' => Tok::Or,
                        '(' => Tok::LParen,
                        _ => Tok::RParen,
                    },
                );
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    push(&mut out, Tok::Implies);
                } else {
                    return Err(err("`-`".into(), vec!["`->`"]));
                }
            }
            '>' => {
                bump(&mut chars);
                if chars.peek() == Some(&'=') {
                    bump(&mut chars);
                    push(&mut out, Tok::Geq);
                } else {
                    return Err(err("`>`".into(), vec!["`>=`"]));
                }
            }
            '<' => {
                bump(&mut chars);
                let ok = chars.peek() == Some(&'-') && {
                    bump(&mut chars);
                    chars.peek() == Some(&'>')
                };
                if ok {
                    bump(&mut chars);
                    push(&mut out, Tok::Iff);
                } else {
                    return Err(err("`<`".into(), vec!["`<->`"]));
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut word = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        word.push(d);
                        bump(&mut chars);
                    } else {
                        break;
                    }
                }
                let tok = match word.as_str() {
                    "T" => Tok::Top,
                    "F" => Tok::Bot,
                    w if w.starts_with(|c: char| c.is_ascii_lowercase()) => Tok::Atom(word),
                    _ => {
                        return Err(err(format!("`{word}`"), OPERAND.to_vec()));
                    }
                };
                push(&mut out, tok);
            }
            other => {
                return Err(err(format!("`{other}`"), OPERAND.to_vec()));
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail(&self, expected: &[&'static str]) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            column: s.column,
            found: s.tok.describe(),
            expected: expected.to_vec(),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if *self.peek() == Tok::Geq {
            self.advance();
            let rhs = self.imp()?;
            return Ok(Formula::geq(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        match self.peek() {
            Tok::Implies => {
                self.advance();
                Ok(Formula::implies(lhs, self.imp()?))
            }
            Tok::Iff => {
                self.advance();
                Ok(Formula::iff(lhs, self.imp()?))
            }
            _ => Ok(lhs),
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.advance();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.advance();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Atom(a) => {
                self.advance();
                Ok(Formula::atom(&a))
            }
            Tok::Top => {
                self.advance();
                Ok(Formula::Top)
            }
            Tok::Bot => {
                self.advance();
                Ok(Formula::Bot)
            }
            Tok::LParen => {
                self.advance();
                let inner = self.formula()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.fail(&["`)`", "`&`", "`|`", "`->`", "`<->`", "`>=`"]));
                }
                self.advance();
                Ok(inner)
            }
            _ => Err(self.fail(OPERAND)),
        }
    }
}

/// Parses the ASCII surface syntax into a [`Formula`].
///
/// ```
/// use qualprob::formula::{parse, Formula};
///
/// let f = parse("~(p >= q) & r").unwrap();
/// assert_eq!(
///     f,
///     Formula::and(
///         Formula::not(Formula::geq(Formula::atom("p"), Formula::atom("q"))),
///         Formula::atom("r"),
///     )
/// );
/// ```
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let lhs = p.imp()?;
    let (f, compared) = if *p.peek() == Tok::Geq {
        p.advance();
        (Formula::geq(lhs, p.imp()?), true)
    } else {
        (lhs, false)
    };
    if *p.peek() != Tok::Eof {
        let mut expected = vec!["end of input", "`&`", "`|`", "`->`", "`<->`"];
        if !compared {
            expected.push("`>=`");
        }
        return Err(p.fail(&expected));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(parse("(p >= q)").unwrap(), Formula::geq(a("p"), a("q")));
        assert_eq!(
            parse("~(p >= q) & r").unwrap(),
            Formula::and(Formula::not(Formula::geq(a("p"), a("q"))), a("r"))
        );
        assert_eq!(
            parse("p >= (q | r)").unwrap(),
            Formula::geq(
                a("p"),
                Formula::not(Formula::and(Formula::not(a("q")), Formula::not(a("r"))))
            )
        );
    }

    #[test]
    fn geq_binds_loosest() {
        assert_eq!(
            parse("p >= q & r").unwrap(),
            Formula::geq(a("p"), Formula::and(a("q"), a("r")))
        );
        assert_eq!(
            parse("p | q -> r >= T").unwrap(),
            Formula::geq(Formula::implies(Formula::or(a("p"), a("q")), a("r")), Formula::Top)
        );
    }

    #[test]
    fn geq_is_not_associative() {
        let err = parse("p >= q >= r").unwrap_err();
        assert_eq!((err.line, err.column), (1, 8));
        assert!(err.expected.contains(&"end of input"));
        assert!(!err.expected.contains(&"`>=`"));
    }

    #[test]
    fn implication_is_right_associative() {
        assert_eq!(
            parse("p -> q -> r").unwrap(),
            Formula::implies(a("p"), Formula::implies(a("q"), a("r")))
        );
        assert_eq!(
            parse("p <-> q").unwrap(),
            Formula::iff(a("p"), a("q"))
        );
    }

    #[test]
    fn constants_and_identifiers() {
        assert_eq!(parse("F >= T").unwrap(), Formula::geq(Formula::Bot, Formula::Top));
        assert_eq!(parse("x_1A").unwrap(), a("x_1A"));
        let err = parse("Tx").unwrap_err();
        assert_eq!(err.found, "`Tx`");
    }

    #[test]
    fn error_positions() {
        let err = parse("p &\n  & q").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
        assert_eq!(err.expected, OPERAND.to_vec());

        let err = parse("(p >= q").unwrap_err();
        assert_eq!(err.found, "end of input");
        assert!(err.expected.contains(&"`)`"));

        let err = parse("p $ q").unwrap_err();
        assert_eq!((err.line, err.column), (1, 3));

        let err = parse("").unwrap_err();
        assert_eq!(err.found, "end of input");
    }
}
