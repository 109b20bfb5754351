//! Process and action syntax in lambda-tree form.
//!
//! Binders (`In`, `Nu`) carry no names: their bodies refer to the bound name
//! as `Name::Bound(0)`. Alpha-equivalence is therefore plain structural
//! equality, and substitution of free names can never capture.

mod decls;
mod parse;
mod prefix;
mod pretty;
mod term;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use decls::{parse_decls, Decls};
pub use parse::{parse_process, Lexer, SyntaxError, Token, TokenKind};
pub use prefix::{encode, parse_prefix, EncodeError, Prefix, Quant, RESERVED_OUTPUT_NAME};
pub use pretty::{pretty, pretty_action, Naming};
pub use term::Term;

use crate::name::{Name, Names};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Process {
    Nil,
    Tau(Box<Process>),
    Out(Name, Name, Box<Process>),
    /// Input on a channel; the body binds the received name.
    In(Name, Box<Process>),
    Match(Name, Name, Box<Process>),
    Sum(Box<Process>, Box<Process>),
    Par(Box<Process>, Box<Process>),
    /// Restriction; the body binds the new name.
    Nu(Box<Process>),
    Bang(Box<Process>),
}

impl Process {
    pub fn tau(p: Process) -> Process {
        Process::Tau(Box::new(p))
    }

    pub fn out(ch: Name, obj: Name, p: Process) -> Process {
        Process::Out(ch, obj, Box::new(p))
    }

    pub fn input(ch: Name, body: Process) -> Process {
        Process::In(ch, Box::new(body))
    }

    pub fn matching(l: Name, r: Name, p: Process) -> Process {
        Process::Match(l, r, Box::new(p))
    }

    pub fn sum(l: Process, r: Process) -> Process {
        Process::Sum(Box::new(l), Box::new(r))
    }

    pub fn par(l: Process, r: Process) -> Process {
        Process::Par(Box::new(l), Box::new(r))
    }

    pub fn nu(body: Process) -> Process {
        Process::Nu(Box::new(body))
    }

    pub fn bang(p: Process) -> Process {
        Process::Bang(Box::new(p))
    }

    pub fn contains_bang(&self) -> bool {
        match self {
            Process::Nil => false,
            Process::Bang(_) => true,
            Process::Tau(p)
            | Process::Out(_, _, p)
            | Process::In(_, p)
            | Process::Match(_, _, p)
            | Process::Nu(p) => p.contains_bang(),
            Process::Sum(l, r) | Process::Par(l, r) => l.contains_bang() || r.contains_bang(),
        }
    }

    /// Number of action prefixes (tau, input, output).
    pub fn prefix_count(&self) -> usize {
        match self {
            Process::Nil => 0,
            Process::Tau(p) | Process::Out(_, _, p) | Process::In(_, p) => 1 + p.prefix_count(),
            Process::Match(_, _, p) | Process::Nu(p) | Process::Bang(p) => p.prefix_count(),
            Process::Sum(l, r) | Process::Par(l, r) => l.prefix_count() + r.prefix_count(),
        }
    }

    /// Number of constructors other than `Nil`.
    pub fn size(&self) -> usize {
        match self {
            Process::Nil => 0,
            Process::Tau(p)
            | Process::Out(_, _, p)
            | Process::In(_, p)
            | Process::Match(_, _, p)
            | Process::Nu(p)
            | Process::Bang(p) => 1 + p.size(),
            Process::Sum(l, r) | Process::Par(l, r) => 1 + l.size() + r.size(),
        }
    }
}

impl Names for Process {
    fn map_names_at(&self, d: u32, f: &mut dyn FnMut(Name, u32) -> Name) -> Self {
        match self {
            Process::Nil => Process::Nil,
            Process::Tau(p) => Process::tau(p.map_names_at(d, f)),
            Process::Out(x, y, p) => {
                let (x, y) = (f(*x, d), f(*y, d));
                Process::out(x, y, p.map_names_at(d, f))
            }
            Process::In(x, body) => {
                let x = f(*x, d);
                Process::input(x, body.map_names_at(d + 1, f))
            }
            Process::Match(x, y, p) => {
                let (x, y) = (f(*x, d), f(*y, d));
                Process::matching(x, y, p.map_names_at(d, f))
            }
            Process::Sum(l, r) => Process::sum(l.map_names_at(d, f), r.map_names_at(d, f)),
            Process::Par(l, r) => Process::par(l.map_names_at(d, f), r.map_names_at(d, f)),
            Process::Nu(body) => Process::nu(body.map_names_at(d + 1, f)),
            Process::Bang(p) => Process::bang(p.map_names_at(d, f)),
        }
    }

    fn visit_names_at(&self, d: u32, f: &mut dyn FnMut(Name, u32)) {
        match self {
            Process::Nil => {}
            Process::Tau(p) | Process::Bang(p) => p.visit_names_at(d, f),
            Process::Out(x, y, p) | Process::Match(x, y, p) => {
                f(*x, d);
                f(*y, d);
                p.visit_names_at(d, f);
            }
            Process::In(x, body) => {
                f(*x, d);
                body.visit_names_at(d + 1, f);
            }
            Process::Sum(l, r) | Process::Par(l, r) => {
                l.visit_names_at(d, f);
                r.visit_names_at(d, f);
            }
            Process::Nu(body) => body.visit_names_at(d + 1, f),
        }
    }
}

/// Actions of the late transition system. Bound actions pair with a
/// continuation that abstracts over the received or extruded name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Tau,
    FreeOut(Name, Name),
    /// Representable for completeness; the late LTS never emits it.
    FreeIn(Name, Name),
    BoundOut(Name),
    BoundIn(Name),
}

impl Action {
    pub fn is_bound(self) -> bool {
        matches!(self, Action::BoundOut(_) | Action::BoundIn(_))
    }

    pub fn channel(self) -> Option<Name> {
        match self {
            Action::Tau => None,
            Action::FreeOut(x, _) | Action::FreeIn(x, _) | Action::BoundOut(x) | Action::BoundIn(x) => Some(x),
        }
    }
}

impl Names for Action {
    fn map_names_at(&self, d: u32, f: &mut dyn FnMut(Name, u32) -> Name) -> Self {
        match *self {
            Action::Tau => Action::Tau,
            Action::FreeOut(x, y) => Action::FreeOut(f(x, d), f(y, d)),
            Action::FreeIn(x, y) => Action::FreeIn(f(x, d), f(y, d)),
            Action::BoundOut(x) => Action::BoundOut(f(x, d)),
            Action::BoundIn(x) => Action::BoundIn(f(x, d)),
        }
    }

    fn visit_names_at(&self, d: u32, f: &mut dyn FnMut(Name, u32)) {
        match *self {
            Action::Tau => {}
            Action::FreeOut(x, y) | Action::FreeIn(x, y) => {
                f(x, d);
                f(y, d);
            }
            Action::BoundOut(x) | Action::BoundIn(x) => f(x, d),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Tau => write!(f, "tau"),
            Action::FreeOut(x, y) => write!(f, "{x}!{y}"),
            Action::FreeIn(x, y) => write!(f, "{x}?{y}"),
            Action::BoundOut(x) => write!(f, "{x}!()"),
            Action::BoundIn(x) => write!(f, "{x}?()"),
        }
    }
}

/// Alpha-equivalence. With nameless binders this is structural equality.
pub fn alpha_eq(p: &Process, q: &Process) -> bool {
    p == q
}

/// Free names (nabla constants and eigenvariables) in order of first occurrence.
pub fn free_names(p: &Process) -> Vec<Name> {
    p.free_names()
}
