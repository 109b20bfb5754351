//! Quantifier prefixes and the translation from named surface syntax into
//! nameless processes.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::decls::Decls;
use super::parse::{Lexer, SyntaxError, TokenKind};
use super::term::Term;
use super::Process;
use crate::name::{Eigen, Name};

/// Object of the `x!.P` abbreviation.
pub const RESERVED_OUTPUT_NAME: &str = "_a";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quant {
    Forall,
    Nabla,
}

/// Ordered quantifier prefix, leftmost outermost.
///
/// Nabla entries become `Nabla(1..=k)` in order. Forall entries become
/// eigenvariables numbered from 1 whose ceiling is the number of nabla
/// entries to their left, which yields exactly the prefix-induced
/// distinction: all nabla/nabla pairs and every forall paired with a nabla
/// to its right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prefix {
    entries: Vec<(Quant, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("unbound name `{0}`: add it to the quantifier prefix")]
    UnboundName(String),
    #[error("name `{0}` appears twice in the quantifier prefix")]
    DuplicatePrefixName(String),
    #[error("unknown process `{0}`")]
    UnknownProcess(String),
    #[error("process `{name}` expects {expected} arguments, got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

impl Prefix {
    pub fn new(entries: Vec<(Quant, String)>) -> Result<Self, EncodeError> {
        let mut p = Prefix::default();
        for (q, n) in entries {
            p.push(q, n)?;
        }
        Ok(p)
    }

    pub fn nablas<S: AsRef<str>>(names: &[S]) -> Self {
        Prefix::new(names.iter().map(|n| (Quant::Nabla, n.as_ref().to_string())).collect())
            .expect("distinct names")
    }

    pub fn foralls<S: AsRef<str>>(names: &[S]) -> Self {
        Prefix::new(names.iter().map(|n| (Quant::Forall, n.as_ref().to_string())).collect())
            .expect("distinct names")
    }

    pub fn push(&mut self, q: Quant, name: impl Into<String>) -> Result<(), EncodeError> {
        let name = name.into();
        if self.entries.iter().any(|(_, n)| *n == name) {
            return Err(EncodeError::DuplicatePrefixName(name));
        }
        self.entries.push((q, name));
        Ok(())
    }

    pub fn entries(&self) -> &[(Quant, String)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.iter().any(|(_, n)| n == name)
    }

    pub fn all_nabla(&self) -> bool {
        self.entries.iter().all(|(q, _)| *q == Quant::Nabla)
    }

    /// The same names, all nabla-quantified.
    pub fn to_all_nabla(&self) -> Prefix {
        Prefix { entries: self.entries.iter().map(|(_, n)| (Quant::Nabla, n.clone())).collect() }
    }

    /// Number of nabla entries: the nabla depth of a judgment under this prefix.
    pub fn depth(&self) -> u32 {
        self.entries.iter().filter(|(q, _)| *q == Quant::Nabla).count() as u32
    }

    /// Encoded name of each entry, in prefix order.
    pub fn encoded(&self) -> Vec<(String, Name)> {
        let mut level = 0;
        let mut id = 0;
        self.entries
            .iter()
            .map(|(q, n)| {
                let name = match q {
                    Quant::Nabla => {
                        level += 1;
                        Name::Nabla(level)
                    }
                    Quant::Forall => {
                        id += 1;
                        Name::Eigen(Eigen::new(id, level))
                    }
                };
                (n.clone(), name)
            })
            .collect()
    }

    pub fn lookup(&self, name: &str) -> Option<Name> {
        self.encoded().into_iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn eigens(&self) -> Vec<Eigen> {
        self.encoded().into_iter().filter_map(|(_, n)| n.as_eigen()).collect()
    }

    /// Next eigenvariable id not used by this prefix.
    pub fn next_eigen_id(&self) -> u32 {
        self.eigens().iter().map(|e| e.id).max().unwrap_or(0) + 1
    }

    /// The prefix-induced distinction, as explicit unordered pairs.
    pub fn induced_distinction(&self) -> Vec<(Name, Name)> {
        let enc = self.encoded();
        let mut out = Vec::new();
        for i in 0..enc.len() {
            for j in i + 1..enc.len() {
                // (forall, nabla) and (nabla, nabla) pairs, left to right
                if self.entries[j].0 == Quant::Nabla {
                    out.push((enc[i].1, enc[j].1));
                }
            }
        }
        out
    }

    /// Append `nabla _a` when the reserved output object is used but not declared.
    pub fn with_reserved_for(&self, terms: &[&Term]) -> Prefix {
        let mut p = self.clone();
        let used = terms.iter().any(|t| t.free_names().iter().any(|n| n == RESERVED_OUTPUT_NAME));
        if used && !p.contains(RESERVED_OUTPUT_NAME) {
            p.entries.push((Quant::Nabla, RESERVED_OUTPUT_NAME.to_string()));
        }
        p
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(q, n)| match q {
                Quant::Forall => format!("forall {n}"),
                Quant::Nabla => format!("nabla {n}"),
            })
            .collect();
        f.write_str(&parts.join(", "))
    }
}

/// Parse `"forall x, nabla y"`. The empty string is the empty prefix.
pub fn parse_prefix(text: &str) -> Result<Prefix, EncodeError> {
    let mut lx = Lexer::new(text)?;
    let mut prefix = Prefix::default();
    if *lx.peek() == TokenKind::Eof {
        return Ok(prefix);
    }
    loop {
        let q = if lx.eat_keyword("forall") {
            Quant::Forall
        } else if lx.eat_keyword("nabla") {
            Quant::Nabla
        } else {
            return Err(lx.error(&["`forall`", "`nabla`"]).into());
        };
        let n = match lx.peek().clone() {
            TokenKind::Ident(s) if s.starts_with('_') || lx.at_name() => {
                lx.bump();
                s
            }
            _ => return Err(lx.error(&["name"]).into()),
        };
        prefix.push(q, n)?;
        if lx.eat(&TokenKind::Comma) {
            continue;
        }
        lx.expect_end()?;
        return Ok(prefix);
    }
}

#[derive(Clone)]
enum Slot {
    Free(Name),
    /// Binder at this absolute nesting level.
    Level(u32),
}

/// Translate a parsed term into a nameless process under `prefix`.
///
/// Every free name must be declared by the prefix. Calls to declared
/// processes are expanded; their parameters are bound to the call's
/// arguments, so expansion cannot capture.
pub fn encode(term: &Term, prefix: &Prefix, decls: &Decls) -> Result<Process, EncodeError> {
    let env: Vec<(String, Slot)> = prefix.encoded().into_iter().map(|(n, e)| (n, Slot::Free(e))).collect();
    encode_in(term, &env, 0, decls)
}

fn resolve(env: &[(String, Slot)], depth: u32, name: &str) -> Result<Name, EncodeError> {
    match env.iter().rev().find(|(n, _)| n == name) {
        Some((_, Slot::Free(e))) => Ok(*e),
        Some((_, Slot::Level(l))) => Ok(Name::Bound(depth - l - 1)),
        None => Err(EncodeError::UnboundName(name.to_string())),
    }
}

fn encode_in(term: &Term, env: &[(String, Slot)], depth: u32, decls: &Decls) -> Result<Process, EncodeError> {
    let r = |n: &str| resolve(env, depth, n);
    let under = |binder: &str, body: &Term| -> Result<Process, EncodeError> {
        let mut env2 = env.to_vec();
        env2.push((binder.to_string(), Slot::Level(depth)));
        encode_in(body, &env2, depth + 1, decls)
    };
    Ok(match term {
        Term::Nil => Process::Nil,
        Term::Tau(p) => Process::tau(encode_in(p, env, depth, decls)?),
        Term::Out(x, y, p) => Process::out(r(x)?, r(y)?, encode_in(p, env, depth, decls)?),
        Term::In(x, y, p) => Process::input(r(x)?, under(y, p)?),
        Term::Match(x, y, p) => Process::matching(r(x)?, r(y)?, encode_in(p, env, depth, decls)?),
        Term::Sum(l, rr) => Process::sum(encode_in(l, env, depth, decls)?, encode_in(rr, env, depth, decls)?),
        Term::Par(l, rr) => Process::par(encode_in(l, env, depth, decls)?, encode_in(rr, env, depth, decls)?),
        Term::Nu(y, p) => Process::nu(under(y, p)?),
        Term::Bang(p) => Process::bang(encode_in(p, env, depth, decls)?),
        Term::Call(f, args) => {
            let decl = decls.get(f).ok_or_else(|| EncodeError::UnknownProcess(f.clone()))?;
            if decl.params.len() != args.len() {
                return Err(EncodeError::Arity { name: f.clone(), expected: decl.params.len(), got: args.len() });
            }
            let mut env2 = Vec::new();
            for (param, arg) in decl.params.iter().zip(args) {
                let slot = match r(arg)? {
                    Name::Bound(i) => Slot::Level(depth - i - 1),
                    n => Slot::Free(n),
                };
                env2.push((param.clone(), slot));
            }
            encode_in(&decl.body, &env2, depth, decls)?
        }
    })
}
