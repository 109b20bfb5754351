//! Bisimulation and modal logic checking for the finite pi-calculus.
//!
//! Processes are kept in lambda-tree form with three kinds of names (see
//! [`name`]). Transitions are enumerated symbolically: eigenvariables are
//! instantiated lazily by level-checked unification, so one symbolic step
//! covers every instance of a process with free names.

pub mod bisim;
pub mod lts;
pub mod modal;
pub mod name;
pub mod syntax;
pub mod unify;

pub use name::{Eigen, Name, Names};
pub use syntax::{encode, parse_decls, parse_prefix, parse_process, pretty, Action, Decls, Prefix, Process, Quant};
pub use unify::{compose, respects, unify_names, Distinction, Substitution};
pub use lts::{has_no_transition, lts_graph, successors_bound, successors_free, Transition};
pub use modal::{parse_formula, sat_ground, sat_open, Formula, InKind, ModalError, SatContext};
pub use bisim::{bisim, check, distinguishing_formula, early_bisim, late_bisim, open_bisim, BisimError, BisimResult, Goal, Mode, Options, Verdict};
