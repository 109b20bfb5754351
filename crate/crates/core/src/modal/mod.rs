//! Modal logics for the pi-calculus: the logic without free-input
//! modalities and its sublogic characterizing late and open bisimilarity.
//!
//! Formulas use the same nameless binders as processes: the body of an
//! output or input modality refers to the bound name as `Bound(0)`.

mod parse;
mod sat;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{parse_formula, FormulaPrinter};
pub use sat::{sat_ground, sat_open, SatContext};

use crate::name::{Name, Names};
use crate::syntax::{Action, EncodeError, SyntaxError};

/// How the name bound by an input modality is quantified relative to the
/// choice of continuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InKind {
    Basic,
    Late,
    Early,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    True,
    False,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `<x=y>A`
    MatchDia(Name, Name, Box<Formula>),
    /// `[x=y]A`
    MatchBox(Name, Name, Box<Formula>),
    /// `<tau>A`, `<x!y>A`, or a free input (never checkable).
    FreeDia(Action, Box<Formula>),
    FreeBox(Action, Box<Formula>),
    /// `<x!(y)>A`; the body binds `y`.
    OutDia(Name, Box<Formula>),
    OutBox(Name, Box<Formula>),
    /// `<x?(y)>A` with an optional `L` or `E` suffix; the body binds `y`.
    InDia(InKind, Name, Box<Formula>),
    InBox(InKind, Name, Box<Formula>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModalError {
    #[error("free input modalities cannot be checked")]
    FreeInputModality,
    #[error("open-mode checking accepts only formulas of the late sublogic ({0})")]
    FormulaOutsideLm(String),
    #[error("ground-mode checking needs every free name nabla-quantified")]
    EigenvariableInGround,
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

impl Formula {
    pub fn and(l: Formula, r: Formula) -> Formula {
        match (l, r) {
            (Formula::True, r) => r,
            (l, Formula::True) => l,
            (l, r) => Formula::And(Box::new(l), Box::new(r)),
        }
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        match (l, r) {
            (Formula::False, r) => r,
            (l, Formula::False) => l,
            (l, r) => Formula::Or(Box::new(l), Box::new(r)),
        }
    }

    /// Conjunction of all, `true` when empty.
    pub fn all(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let fs: Vec<Formula> = fs.into_iter().collect();
        fs.into_iter().rev().fold(Formula::True, |acc, f| Formula::and(f, acc))
    }

    /// Disjunction of all, `false` when empty.
    pub fn any(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let fs: Vec<Formula> = fs.into_iter().collect();
        fs.into_iter().rev().fold(Formula::False, |acc, f| Formula::or(f, acc))
    }

    pub fn match_box(x: Name, y: Name, a: Formula) -> Formula {
        Formula::MatchBox(x, y, Box::new(a))
    }

    pub fn match_dia(x: Name, y: Name, a: Formula) -> Formula {
        Formula::MatchDia(x, y, Box::new(a))
    }

    pub fn dia(a: Action, f: Formula) -> Formula {
        Formula::FreeDia(a, Box::new(f))
    }

    pub fn boxed(a: Action, f: Formula) -> Formula {
        Formula::FreeBox(a, Box::new(f))
    }

    /// Nesting depth of modalities and matches.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False => 0,
            Formula::And(l, r) | Formula::Or(l, r) => l.depth().max(r.depth()),
            Formula::MatchDia(_, _, a)
            | Formula::MatchBox(_, _, a)
            | Formula::FreeDia(_, a)
            | Formula::FreeBox(_, a)
            | Formula::OutDia(_, a)
            | Formula::OutBox(_, a)
            | Formula::InDia(_, _, a)
            | Formula::InBox(_, _, a) => 1 + a.depth(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False => 1,
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.size() + r.size(),
            Formula::MatchDia(_, _, a)
            | Formula::MatchBox(_, _, a)
            | Formula::FreeDia(_, a)
            | Formula::FreeBox(_, a)
            | Formula::OutDia(_, a)
            | Formula::OutBox(_, a)
            | Formula::InDia(_, _, a)
            | Formula::InBox(_, _, a) => 1 + a.size(),
        }
    }

    pub fn has_free_input(&self) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::FreeDia(Action::FreeIn(..), _) | Formula::FreeBox(Action::FreeIn(..), _) => true,
            Formula::And(l, r) | Formula::Or(l, r) => l.has_free_input() || r.has_free_input(),
            Formula::MatchDia(_, _, a)
            | Formula::MatchBox(_, _, a)
            | Formula::FreeDia(_, a)
            | Formula::FreeBox(_, a)
            | Formula::OutDia(_, a)
            | Formula::OutBox(_, a)
            | Formula::InDia(_, _, a)
            | Formula::InBox(_, _, a) => a.has_free_input(),
        }
    }

    /// First construct outside the late sublogic, if any.
    pub fn outside_lm(&self) -> Option<&'static str> {
        match self {
            Formula::True | Formula::False => None,
            Formula::And(l, r) | Formula::Or(l, r) => l.outside_lm().or_else(|| r.outside_lm()),
            Formula::FreeDia(Action::FreeIn(..), _) | Formula::FreeBox(Action::FreeIn(..), _) => {
                Some("free input modality")
            }
            Formula::InDia(InKind::Basic, ..) | Formula::InBox(InKind::Basic, ..) => Some("basic input modality"),
            Formula::InDia(InKind::Early, ..) | Formula::InBox(InKind::Early, ..) => Some("early input modality"),
            Formula::MatchDia(_, _, a)
            | Formula::MatchBox(_, _, a)
            | Formula::FreeDia(_, a)
            | Formula::FreeBox(_, a)
            | Formula::OutDia(_, a)
            | Formula::OutBox(_, a)
            | Formula::InDia(_, _, a)
            | Formula::InBox(_, _, a) => a.outside_lm(),
        }
    }

    pub fn is_lm(&self) -> bool {
        self.outside_lm().is_none()
    }
}

/// Number of input modalities; enough fresh names for a complete ground check.
pub fn fresh_budget(a: &Formula) -> u32 {
    match a {
        Formula::True | Formula::False => 0,
        Formula::And(l, r) | Formula::Or(l, r) => fresh_budget(l) + fresh_budget(r),
        Formula::InDia(_, _, b) | Formula::InBox(_, _, b) => 1 + fresh_budget(b),
        Formula::MatchDia(_, _, b)
        | Formula::MatchBox(_, _, b)
        | Formula::FreeDia(_, b)
        | Formula::FreeBox(_, b)
        | Formula::OutDia(_, b)
        | Formula::OutBox(_, b) => fresh_budget(b),
    }
}

/// De Morgan dual: the classical negation pushed to the leaves.
pub fn dual(a: &Formula) -> Formula {
    let d = |b: &Formula| Box::new(dual(b));
    match a {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::And(l, r) => Formula::Or(d(l), d(r)),
        Formula::Or(l, r) => Formula::And(d(l), d(r)),
        Formula::MatchDia(x, y, b) => Formula::MatchBox(*x, *y, d(b)),
        Formula::MatchBox(x, y, b) => Formula::MatchDia(*x, *y, d(b)),
        Formula::FreeDia(act, b) => Formula::FreeBox(*act, d(b)),
        Formula::FreeBox(act, b) => Formula::FreeDia(*act, d(b)),
        Formula::OutDia(x, b) => Formula::OutBox(*x, d(b)),
        Formula::OutBox(x, b) => Formula::OutDia(*x, d(b)),
        Formula::InDia(k, x, b) => Formula::InBox(*k, *x, d(b)),
        Formula::InBox(k, x, b) => Formula::InDia(*k, *x, d(b)),
    }
}

impl Names for Formula {
    fn map_names_at(&self, d: u32, f: &mut dyn FnMut(Name, u32) -> Name) -> Self {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::And(l, r) => {
                let l = l.map_names_at(d, f);
                Formula::And(Box::new(l), Box::new(r.map_names_at(d, f)))
            }
            Formula::Or(l, r) => {
                let l = l.map_names_at(d, f);
                Formula::Or(Box::new(l), Box::new(r.map_names_at(d, f)))
            }
            Formula::MatchDia(x, y, a) => {
                let (x, y) = (f(*x, d), f(*y, d));
                Formula::MatchDia(x, y, Box::new(a.map_names_at(d, f)))
            }
            Formula::MatchBox(x, y, a) => {
                let (x, y) = (f(*x, d), f(*y, d));
                Formula::MatchBox(x, y, Box::new(a.map_names_at(d, f)))
            }
            Formula::FreeDia(act, a) => {
                let act = act.map_names_at(d, f);
                Formula::FreeDia(act, Box::new(a.map_names_at(d, f)))
            }
            Formula::FreeBox(act, a) => {
                let act = act.map_names_at(d, f);
                Formula::FreeBox(act, Box::new(a.map_names_at(d, f)))
            }
            Formula::OutDia(x, a) => {
                let x = f(*x, d);
                Formula::OutDia(x, Box::new(a.map_names_at(d + 1, f)))
            }
            Formula::OutBox(x, a) => {
                let x = f(*x, d);
                Formula::OutBox(x, Box::new(a.map_names_at(d + 1, f)))
            }
            Formula::InDia(k, x, a) => {
                let x = f(*x, d);
                Formula::InDia(*k, x, Box::new(a.map_names_at(d + 1, f)))
            }
            Formula::InBox(k, x, a) => {
                let x = f(*x, d);
                Formula::InBox(*k, x, Box::new(a.map_names_at(d + 1, f)))
            }
        }
    }

    fn visit_names_at(&self, d: u32, f: &mut dyn FnMut(Name, u32)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.visit_names_at(d, f);
                r.visit_names_at(d, f);
            }
            Formula::MatchDia(x, y, a) | Formula::MatchBox(x, y, a) => {
                f(*x, d);
                f(*y, d);
                a.visit_names_at(d, f);
            }
            Formula::FreeDia(act, a) | Formula::FreeBox(act, a) => {
                act.visit_names_at(d, f);
                a.visit_names_at(d, f);
            }
            Formula::OutDia(x, a) | Formula::OutBox(x, a) | Formula::InDia(_, x, a) | Formula::InBox(_, x, a) => {
                f(*x, d);
                a.visit_names_at(d + 1, f);
            }
        }
    }
}
