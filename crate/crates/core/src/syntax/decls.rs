use std::collections::BTreeMap;

use super::parse::{proc, Lexer, SyntaxError, TokenKind};
use super::prefix::EncodeError;
use super::term::Term;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub params: Vec<String>,
    pub body: Term,
}

/// Non-recursive process declarations, `Ident(params) := proc`.
#[derive(Clone, Debug, Default)]
pub struct Decls {
    decls: BTreeMap<String, Decl>,
}

impl Decls {
    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.decls.get(name)
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    /// Add a declaration. Its body may only use earlier declarations, and
    /// its free names must all be parameters.
    pub fn insert(&mut self, name: String, params: Vec<String>, body: Term) -> Result<(), EncodeError> {
        for f in body.calls() {
            if !self.decls.contains_key(&f) {
                return Err(EncodeError::UnknownProcess(f));
            }
        }
        if let Some(n) = body.free_names().into_iter().find(|n| !params.contains(n)) {
            return Err(EncodeError::UnboundName(n));
        }
        self.decls.insert(name, Decl { params, body });
        Ok(())
    }
}

/// Parse a declaration file: one `Ident(params) := proc` per line, `#` starts
/// a comment.
pub fn parse_decls(text: &str) -> Result<Decls, EncodeError> {
    let mut decls = Decls::default();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let content = line.split('#').next().unwrap_or("");
        if !content.trim().is_empty() {
            let (name, params, body) = parse_decl(content).map_err(|mut e| {
                e.position += offset;
                e
            })?;
            decls.insert(name, params, body)?;
        }
        offset += line.len();
    }
    Ok(decls)
}

fn parse_decl(text: &str) -> Result<(String, Vec<String>, Term), SyntaxError> {
    let mut lx = Lexer::new(text)?;
    let name = match lx.bump() {
        TokenKind::Upper(s) => s,
        _ => return Err(SyntaxError::new(0, &["capitalised process name"], text.trim())),
    };
    lx.expect(TokenKind::LParen, "`(`")?;
    let mut params = Vec::new();
    if !lx.eat(&TokenKind::RParen) {
        loop {
            params.push(lx.name()?);
            if lx.eat(&TokenKind::RParen) {
                break;
            }
            lx.expect(TokenKind::Comma, "`,` or `)`")?;
        }
    }
    lx.expect(TokenKind::Define, "`:=`")?;
    let body = proc(&mut lx)?;
    lx.expect_end()?;
    Ok((name, params, body))
}
