//! Lexer and recursive-descent parser for the process grammar:
//!
//! ```text
//! proc  := sum
//! sum   := par ("+" par)*                      right-associative
//! par   := unary ("|" unary)*                  right-associative
//! unary := "0" | "tau" ["." unary] | "!" unary
//!        | name "!" name ["." unary]           output
//!        | name "!" "(" name ")" ["." unary]   bound output, sugar for (nu y)x!y
//!        | name "!" ["." unary]                output of the reserved name
//!        | name "?" "(" name ")" ["." unary]   input
//!        | name ["." unary]                    input with a vacuous binder
//!        | "[" name "=" name "]" unary | "(" "nu" name ")" unary
//!        | "(" proc ")" | Ident "(" names ")"
//! ```
//!
//! A missing continuation means `0`.

use std::fmt;

use thiserror::Error;

use super::prefix::RESERVED_OUTPUT_NAME;
use super::term::Term;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Upper(String),
    Zero,
    Bang,
    Query,
    Dot,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Eq,
    Bar,
    Plus,
    Comma,
    Lt,
    Gt,
    Amp,
    Hash,
    Define,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Ident(s) | TokenKind::Upper(s) => return write!(f, "`{s}`"),
            TokenKind::Zero => "`0`",
            TokenKind::Bang => "`!`",
            TokenKind::Query => "`?`",
            TokenKind::Dot => "`.`",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::LBrack => "`[`",
            TokenKind::RBrack => "`]`",
            TokenKind::Eq => "`=`",
            TokenKind::Bar => "`|`",
            TokenKind::Plus => "`+`",
            TokenKind::Comma => "`,`",
            TokenKind::Lt => "`<`",
            TokenKind::Gt => "`>`",
            TokenKind::Amp => "`&`",
            TokenKind::Hash => "`#`",
            TokenKind::Define => "`:=`",
            TokenKind::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at {position}: expected {}, found {found}", expected.join(" or "))]
pub struct SyntaxError {
    pub position: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl SyntaxError {
    pub fn new(position: usize, expected: &[&str], found: impl fmt::Display) -> Self {
        SyntaxError {
            position,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: found.to_string(),
        }
    }
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let kind = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            if s.starts_with(|c: char| c.is_ascii_uppercase()) {
                TokenKind::Upper(s)
            } else {
                TokenKind::Ident(s)
            }
        } else {
            chars.next();
            match c {
                '0' => TokenKind::Zero,
                '!' => TokenKind::Bang,
                '?' => TokenKind::Query,
                '.' => TokenKind::Dot,
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                '[' => TokenKind::LBrack,
                ']' => TokenKind::RBrack,
                '=' => TokenKind::Eq,
                '|' => TokenKind::Bar,
                '+' => TokenKind::Plus,
                ',' => TokenKind::Comma,
                '<' => TokenKind::Lt,
                '>' => TokenKind::Gt,
                '&' => TokenKind::Amp,
                '#' => TokenKind::Hash,
                ':' if matches!(chars.peek(), Some(&(_, '='))) => {
                    chars.next();
                    TokenKind::Define
                }
                other => return Err(SyntaxError::new(pos, &["a token"], format!("`{other}`"))),
            }
        };
        out.push(Token { kind, pos });
    }
    out.push(Token { kind: TokenKind::Eof, pos: text.len() });
    Ok(out)
}

const KEYWORDS: &[&str] = &["tau", "nu", "forall", "nabla", "true", "false"];

/// Token cursor shared by the process, prefix and formula parsers.
pub struct Lexer {
    tokens: Vec<Token>,
    at: usize,
}

impl Lexer {
    pub fn new(text: &str) -> Result<Self, SyntaxError> {
        Ok(Lexer { tokens: tokenize(text)?, at: 0 })
    }

    pub fn peek(&self) -> &TokenKind {
        &self.tokens[self.at].kind
    }

    pub fn peek_at(&self, k: usize) -> &TokenKind {
        let i = (self.at + k).min(self.tokens.len() - 1);
        &self.tokens[i].kind
    }

    pub fn pos(&self) -> usize {
        self.tokens[self.at].pos
    }

    pub fn bump(&mut self) -> TokenKind {
        let k = self.tokens[self.at].kind.clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        k
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), TokenKind::Ident(s) if s == kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn error(&self, expected: &[&str]) -> SyntaxError {
        SyntaxError::new(self.pos(), expected, self.peek())
    }

    pub fn expect(&mut self, kind: TokenKind, what: &str) -> Result<(), SyntaxError> {
        if self.eat(&kind) {
            Ok(())
        } else {
            Err(self.error(&[what]))
        }
    }

    pub fn expect_end(&self) -> Result<(), SyntaxError> {
        if *self.peek() == TokenKind::Eof {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }

    /// A name: lower-case identifier that is not a keyword.
    pub fn name(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            TokenKind::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["name"])),
        }
    }

    pub fn at_name(&self) -> bool {
        matches!(self.peek(), TokenKind::Ident(s) if !KEYWORDS.contains(&s.as_str()))
    }
}

pub fn parse_process(text: &str) -> Result<Term, SyntaxError> {
    let mut lx = Lexer::new(text)?;
    let t = proc(&mut lx)?;
    lx.expect_end()?;
    Ok(t)
}

pub(crate) fn proc(lx: &mut Lexer) -> Result<Term, SyntaxError> {
    let l = par(lx)?;
    if lx.eat(&TokenKind::Plus) {
        Ok(Term::Sum(Box::new(l), Box::new(proc(lx)?)))
    } else {
        Ok(l)
    }
}

fn par(lx: &mut Lexer) -> Result<Term, SyntaxError> {
    let l = unary(lx)?;
    if lx.eat(&TokenKind::Bar) {
        Ok(Term::Par(Box::new(l), Box::new(par(lx)?)))
    } else {
        Ok(l)
    }
}

fn continuation(lx: &mut Lexer) -> Result<Term, SyntaxError> {
    if lx.eat(&TokenKind::Dot) {
        unary(lx)
    } else {
        Ok(Term::Nil)
    }
}

fn unary(lx: &mut Lexer) -> Result<Term, SyntaxError> {
    const START: &[&str] = &["`0`", "`tau`", "`!`", "`[`", "`(`", "name", "declared process"];
    match lx.peek().clone() {
        TokenKind::Zero => {
            lx.bump();
            Ok(Term::Nil)
        }
        TokenKind::Bang => {
            lx.bump();
            Ok(Term::Bang(Box::new(unary(lx)?)))
        }
        TokenKind::LBrack => {
            lx.bump();
            let x = lx.name()?;
            lx.expect(TokenKind::Eq, "`=`")?;
            let y = lx.name()?;
            lx.expect(TokenKind::RBrack, "`]`")?;
            Ok(Term::Match(x, y, Box::new(unary(lx)?)))
        }
        TokenKind::LParen => {
            lx.bump();
            if lx.eat_keyword("nu") {
                let y = lx.name()?;
                lx.expect(TokenKind::RParen, "`)`")?;
                Ok(Term::Nu(y, Box::new(unary(lx)?)))
            } else {
                let p = proc(lx)?;
                lx.expect(TokenKind::RParen, "`)`")?;
                Ok(p)
            }
        }
        TokenKind::Upper(f) => {
            lx.bump();
            lx.expect(TokenKind::LParen, "`(`")?;
            let mut args = Vec::new();
            if !lx.eat(&TokenKind::RParen) {
                loop {
                    args.push(lx.name()?);
                    if lx.eat(&TokenKind::RParen) {
                        break;
                    }
                    lx.expect(TokenKind::Comma, "`,` or `)`")?;
                }
            }
            Ok(Term::Call(f, args))
        }
        TokenKind::Ident(s) if s == "tau" => {
            lx.bump();
            Ok(Term::Tau(Box::new(continuation(lx)?)))
        }
        TokenKind::Ident(_) if lx.at_name() => {
            let x = lx.name()?;
            if lx.eat(&TokenKind::Bang) {
                if lx.eat(&TokenKind::LParen) {
                    let y = lx.name()?;
                    lx.expect(TokenKind::RParen, "`)`")?;
                    let k = continuation(lx)?;
                    Ok(Term::Nu(y.clone(), Box::new(Term::Out(x, y, Box::new(k)))))
                } else if lx.at_name() {
                    let y = lx.name()?;
                    Ok(Term::Out(x, y, Box::new(continuation(lx)?)))
                } else {
                    Ok(Term::Out(x, RESERVED_OUTPUT_NAME.to_string(), Box::new(continuation(lx)?)))
                }
            } else if lx.eat(&TokenKind::Query) {
                lx.expect(TokenKind::LParen, "`(`")?;
                let y = lx.name()?;
                lx.expect(TokenKind::RParen, "`)`")?;
                Ok(Term::In(x, y, Box::new(continuation(lx)?)))
            } else {
                // `x.P`: input whose binder is never used.
                Ok(Term::In(x, String::new(), Box::new(continuation(lx)?)))
            }
        }
        _ => Err(lx.error(START)),
    }
}
