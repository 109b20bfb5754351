//! Formula syntax:
//!
//! ```text
//! formula := conj ["v" formula]
//! conj    := unary ["&" conj]
//! unary   := "true" | "false" | "(" formula ")"
//!          | "<" modality ">" [L|E] unary | "[" modality "]" [L|E] unary
//! modality := x "=" y | "tau" | x "!" y | x "!" "(" y ")" | x "?" "(" y ")" | x "?" y
//! ```

use super::{Formula, InKind, ModalError};
use crate::name::Name;
use crate::syntax::{Action, EncodeError, Lexer, Naming, Prefix, SyntaxError, TokenKind};

/// Parse a formula whose free names are declared by `prefix`.
pub fn parse_formula(text: &str, prefix: &Prefix) -> Result<Formula, ModalError> {
    let mut lx = Lexer::new(text)?;
    let mut p = Parser { lx: &mut lx, prefix, scope: Vec::new() };
    let f = p.formula()?;
    p.lx.expect_end()?;
    Ok(f)
}

struct Parser<'a> {
    lx: &'a mut Lexer,
    prefix: &'a Prefix,
    scope: Vec<String>,
}

enum Modality {
    Match(Name, Name),
    Free(Action),
    Out(Name, String),
    In(Name, String),
}

impl Parser<'_> {
    fn formula(&mut self) -> Result<Formula, ModalError> {
        let l = self.conj()?;
        if self.lx.eat_keyword("v") {
            Ok(Formula::Or(Box::new(l), Box::new(self.formula()?)))
        } else {
            Ok(l)
        }
    }

    fn conj(&mut self) -> Result<Formula, ModalError> {
        let l = self.unary()?;
        if self.lx.eat(&TokenKind::Amp) {
            Ok(Formula::And(Box::new(l), Box::new(self.conj()?)))
        } else {
            Ok(l)
        }
    }

    fn unary(&mut self) -> Result<Formula, ModalError> {
        if self.lx.eat_keyword("true") {
            return Ok(Formula::True);
        }
        if self.lx.eat_keyword("false") {
            return Ok(Formula::False);
        }
        if self.lx.eat(&TokenKind::LParen) {
            let f = self.formula()?;
            self.lx.expect(TokenKind::RParen, "`)`")?;
            return Ok(f);
        }
        let diamond = if self.lx.eat(&TokenKind::Lt) {
            true
        } else if self.lx.eat(&TokenKind::LBrack) {
            false
        } else {
            return Err(self.lx.error(&["`true`", "`false`", "`(`", "`<`", "`[`"]).into());
        };
        let m = self.modality()?;
        if diamond {
            self.lx.expect(TokenKind::Gt, "`>`")?;
        } else {
            self.lx.expect(TokenKind::RBrack, "`]`")?;
        }
        let kind = match self.lx.peek() {
            TokenKind::Upper(s) if s == "L" || s == "E" => {
                let k = if s == "L" { InKind::Late } else { InKind::Early };
                if !matches!(m, Modality::In(..)) {
                    return Err(self.lx.error(&["formula"]).into());
                }
                self.lx.bump();
                k
            }
            _ => InKind::Basic,
        };
        Ok(match m {
            Modality::Match(x, y) => {
                let a = Box::new(self.unary()?);
                if diamond {
                    Formula::MatchDia(x, y, a)
                } else {
                    Formula::MatchBox(x, y, a)
                }
            }
            Modality::Free(act) => {
                let a = Box::new(self.unary()?);
                if diamond {
                    Formula::FreeDia(act, a)
                } else {
                    Formula::FreeBox(act, a)
                }
            }
            Modality::Out(x, binder) => {
                let a = Box::new(self.under(binder)?);
                if diamond {
                    Formula::OutDia(x, a)
                } else {
                    Formula::OutBox(x, a)
                }
            }
            Modality::In(x, binder) => {
                let a = Box::new(self.under(binder)?);
                if diamond {
                    Formula::InDia(kind, x, a)
                } else {
                    Formula::InBox(kind, x, a)
                }
            }
        })
    }

    fn under(&mut self, binder: String) -> Result<Formula, ModalError> {
        self.scope.push(binder);
        let a = self.unary();
        self.scope.pop();
        a
    }

    fn name(&mut self) -> Result<Name, ModalError> {
        let s = self.lx.name()?;
        if let Some(i) = self.scope.iter().rev().position(|b| *b == s) {
            return Ok(Name::Bound(i as u32));
        }
        self.prefix.lookup(&s).ok_or(ModalError::Encode(EncodeError::UnboundName(s)))
    }

    fn modality(&mut self) -> Result<Modality, ModalError> {
        if self.lx.eat_keyword("tau") {
            return Ok(Modality::Free(Action::Tau));
        }
        let x = self.name()?;
        match self.lx.bump() {
            TokenKind::Eq => Ok(Modality::Match(x, self.name()?)),
            TokenKind::Bang => {
                if self.lx.eat(&TokenKind::LParen) {
                    let b = self.lx.name()?;
                    self.lx.expect(TokenKind::RParen, "`)`")?;
                    Ok(Modality::Out(x, b))
                } else {
                    Ok(Modality::Free(Action::FreeOut(x, self.name()?)))
                }
            }
            TokenKind::Query => {
                if self.lx.eat(&TokenKind::LParen) {
                    let b = self.lx.name()?;
                    self.lx.expect(TokenKind::RParen, "`)`")?;
                    Ok(Modality::In(x, b))
                } else {
                    Ok(Modality::Free(Action::FreeIn(x, self.name()?)))
                }
            }
            other => Err(SyntaxError::new(self.lx.pos(), &["`=`", "`!`", "`?`"], other).into()),
        }
    }
}

/// Renders formulas with surface names.
pub struct FormulaPrinter<'a> {
    pub naming: &'a Naming,
}

impl FormulaPrinter<'_> {
    pub fn print(&self, f: &Formula) -> String {
        self.at(f, 0, &mut Vec::new())
    }

    fn name(&self, n: Name, scope: &[String]) -> String {
        match n {
            Name::Bound(i) => scope
                .len()
                .checked_sub(i as usize + 1)
                .map(|k| scope[k].clone())
                .unwrap_or_else(|| format!("#{i}")),
            n => self.naming.name(n),
        }
    }

    /// `prec`: 0 inside a disjunction, 1 inside a conjunction, 2 under a modality.
    fn at(&self, f: &Formula, prec: u8, scope: &mut Vec<String>) -> String {
        let wrap = |s: String, need: bool| if need { format!("({s})") } else { s };
        match f {
            Formula::True => "true".into(),
            Formula::False => "false".into(),
            Formula::Or(l, r) => {
                let s = format!("{} v {}", self.at(l, 1, scope), self.at(r, 0, scope));
                wrap(s, prec > 0)
            }
            Formula::And(l, r) => {
                let s = format!("{} & {}", self.at(l, 2, scope), self.at(r, 1, scope));
                wrap(s, prec > 1)
            }
            Formula::MatchDia(x, y, a) => {
                format!("<{}={}>{}", self.name(*x, scope), self.name(*y, scope), self.at(a, 2, scope))
            }
            Formula::MatchBox(x, y, a) => {
                format!("[{}={}]{}", self.name(*x, scope), self.name(*y, scope), self.at(a, 2, scope))
            }
            Formula::FreeDia(act, a) => format!("<{}>{}", self.action(*act, scope), self.at(a, 2, scope)),
            Formula::FreeBox(act, a) => format!("[{}]{}", self.action(*act, scope), self.at(a, 2, scope)),
            Formula::OutDia(x, a) => self.binding("<", ">", &format!("{}!", self.name(*x, scope)), "", a, scope),
            Formula::OutBox(x, a) => self.binding("[", "]", &format!("{}!", self.name(*x, scope)), "", a, scope),
            Formula::InDia(k, x, a) => self.binding("<", ">", &format!("{}?", self.name(*x, scope)), suffix(*k), a, scope),
            Formula::InBox(k, x, a) => self.binding("[", "]", &format!("{}?", self.name(*x, scope)), suffix(*k), a, scope),
        }
    }

    fn binding(&self, open: &str, close: &str, head: &str, suffix: &str, a: &Formula, scope: &mut Vec<String>) -> String {
        let b = self.naming.fresh_binder(scope);
        scope.push(b.clone());
        let body = self.at(a, 2, scope);
        scope.pop();
        let sep = if suffix.is_empty() { "" } else { " " };
        format!("{open}{head}({b}){close}{suffix}{sep}{body}")
    }

    fn action(&self, a: Action, scope: &[String]) -> String {
        match a {
            Action::Tau => "tau".into(),
            Action::FreeOut(x, y) => format!("{}!{}", self.name(x, scope), self.name(y, scope)),
            Action::FreeIn(x, y) => format!("{}?{}", self.name(x, scope), self.name(y, scope)),
            Action::BoundOut(x) => format!("{}!()", self.name(x, scope)),
            Action::BoundIn(x) => format!("{}?()", self.name(x, scope)),
        }
    }
}

fn suffix(k: InKind) -> &'static str {
    match k {
        InKind::Basic => "",
        InKind::Late => "L",
        InKind::Early => "E",
    }
}
