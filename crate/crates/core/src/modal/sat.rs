//! Satisfaction checking.
//!
//! Ground mode treats every free name as a distinct nabla constant and
//! decides name quantifiers by enumerating the names in scope, which
//! includes the extra fresh names of the budget. This is the classical
//! reading, with excluded middle on name equality.
//!
//! Open mode keeps universally quantified names as eigenvariables and
//! performs no case analysis on them: boxes range over every symbolic
//! branch, diamonds need a transition that exists without instantiation.

use super::{fresh_budget, Formula, InKind, ModalError};
use crate::lts::{depth_of, successors_bound_at, successors_free_at, unify_actions};
use crate::name::{Eigen, Name, Names};
use crate::syntax::{Action, Prefix, Process};
use crate::unify::{compose, unify_names, Distinction, Substitution};

/// Ground check under `names` nabla constants plus `extra` fresh ones
/// (by default the formula's fresh budget).
pub fn sat_ground(p: &Process, a: &Formula, names: u32, extra: Option<u32>) -> Result<bool, ModalError> {
    if a.has_free_input() {
        return Err(ModalError::FreeInputModality);
    }
    let has_eigen = |ns: Vec<Name>| ns.iter().any(|n| matches!(n, Name::Eigen(_)));
    if has_eigen(p.free_names()) || has_eigen(a.free_names()) {
        return Err(ModalError::EigenvariableInGround);
    }
    let depth = names.max(depth_of(p)).max(depth_of(a)) + extra.unwrap_or_else(|| fresh_budget(a));
    Ok(ground(p, a, depth))
}

fn ground(p: &Process, a: &Formula, d: u32) -> bool {
    match a {
        Formula::True => true,
        Formula::False => false,
        Formula::And(l, r) => ground(p, l, d) && ground(p, r, d),
        Formula::Or(l, r) => ground(p, l, d) || ground(p, r, d),
        Formula::MatchDia(x, y, b) => x == y && ground(p, b, d),
        Formula::MatchBox(x, y, b) => x != y || ground(p, b, d),
        Formula::FreeDia(act, b) => {
            successors_free_at(p, d).iter().any(|t| t.action == *act && ground(&t.cont, b, d))
        }
        Formula::FreeBox(act, b) => {
            successors_free_at(p, d).iter().all(|t| t.action != *act || ground(&t.cont, b, d))
        }
        Formula::OutDia(x, b) | Formula::OutBox(x, b) => {
            let n = Name::Nabla(d + 1);
            let body = b.instantiate(n);
            let mut conts = successors_bound_at(p, d)
                .into_iter()
                .filter(|t| t.action == Action::BoundOut(*x))
                .map(|t| t.cont.instantiate(n));
            if matches!(a, Formula::OutDia(..)) {
                conts.any(|c| ground(&c, &body, d + 1))
            } else {
                conts.all(|c| ground(&c, &body, d + 1))
            }
        }
        Formula::InDia(kind, x, b) | Formula::InBox(kind, x, b) => {
            let conts: Vec<Process> = successors_bound_at(p, d)
                .into_iter()
                .filter(|t| t.action == Action::BoundIn(*x))
                .map(|t| t.cont)
                .collect();
            let names: Vec<Name> = (1..=d).map(Name::Nabla).collect();
            let holds = |c: &Process, y: Name| ground(&c.instantiate(y), &b.instantiate(y), d);
            let diamond = matches!(a, Formula::InDia(..));
            match (kind, diamond) {
                (InKind::Basic, true) => conts.iter().any(|c| names.iter().any(|y| holds(c, *y))),
                (InKind::Basic, false) => conts.iter().all(|c| names.iter().all(|y| holds(c, *y))),
                (InKind::Late, true) => conts.iter().any(|c| names.iter().all(|y| holds(c, *y))),
                (InKind::Late, false) => conts.iter().all(|c| names.iter().any(|y| holds(c, *y))),
                (InKind::Early, true) => names.iter().all(|y| conts.iter().any(|c| holds(c, *y))),
                (InKind::Early, false) => names.iter().any(|y| conts.iter().all(|c| holds(c, *y))),
            }
        }
    }
}

/// Names, distinction and eigenvariables in scope for an open check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatContext {
    pub depth: u32,
    pub distinction: Distinction,
    pub eigens: Vec<Eigen>,
    next_id: u32,
}

impl SatContext {
    pub fn new(depth: u32, eigens: Vec<Eigen>, distinction: Distinction) -> Self {
        let next_id = eigens.iter().map(|e| e.id).max().unwrap_or(0) + 1;
        SatContext { depth, distinction, eigens, next_id }
    }

    pub fn from_prefix(prefix: &Prefix, distinction: Distinction) -> Self {
        SatContext::new(prefix.depth(), prefix.eigens(), distinction)
    }

    /// Make sure every name of `t` is accounted for.
    fn cover<T: Names>(&mut self, t: &T) {
        self.depth = self.depth.max(depth_of(t));
        for n in t.free_names() {
            if let Name::Eigen(e) = n {
                if !self.eigens.contains(&e) {
                    self.eigens.push(e);
                }
                self.next_id = self.next_id.max(e.id + 1);
            }
        }
    }

    fn fresh_eigen(&mut self) -> Name {
        let e = Eigen::new(self.next_id, self.depth);
        self.next_id += 1;
        self.eigens.push(e);
        Name::Eigen(e)
    }

    /// Instantiate by `rho`; `None` when the distinction is violated.
    fn apply(&self, rho: &Substitution) -> Option<SatContext> {
        let distinction = self.distinction.apply(rho)?;
        let mut eigens = Vec::new();
        for e in &self.eigens {
            if let Name::Eigen(e2) = rho.name(Name::Eigen(*e)) {
                if !eigens.contains(&e2) {
                    eigens.push(e2);
                }
            }
        }
        Some(SatContext { depth: self.depth, distinction, eigens, next_id: self.next_id })
    }

    fn in_scope(&self) -> Vec<Name> {
        let mut v: Vec<Name> = (1..=self.depth).map(Name::Nabla).collect();
        v.extend(self.eigens.iter().map(|e| Name::Eigen(*e)));
        v
    }
}

/// Open check: provability without excluded middle, with the eigenvariables
/// of `ctx` universally quantified. Only formulas of the late sublogic are
/// accepted.
pub fn sat_open(p: &Process, a: &Formula, ctx: &SatContext) -> Result<bool, ModalError> {
    if a.has_free_input() {
        return Err(ModalError::FreeInputModality);
    }
    if let Some(what) = a.outside_lm() {
        return Err(ModalError::FormulaOutsideLm(what.to_string()));
    }
    let mut cx = ctx.clone();
    cx.cover(p);
    cx.cover(a);
    Ok(open(p, a, &cx))
}

fn open(p: &Process, a: &Formula, cx: &SatContext) -> bool {
    match a {
        Formula::True => true,
        Formula::False => false,
        Formula::And(l, r) => open(p, l, cx) && open(p, r, cx),
        Formula::Or(l, r) => open(p, l, cx) || open(p, r, cx),
        Formula::MatchDia(x, y, b) => x == y && open(p, b, cx),
        Formula::MatchBox(x, y, b) => {
            let Some(sigma) = unify_names(*x, *y) else { return true };
            match cx.apply(&sigma) {
                None => true,
                Some(cx2) => open(&sigma.apply(p), &sigma.apply(&**b), &cx2),
            }
        }
        Formula::FreeDia(act, b) => successors_free_at(p, cx.depth)
            .iter()
            .any(|t| t.theta.is_identity() && t.action == *act && open(&t.cont, b, cx)),
        Formula::OutDia(x, b) => {
            let n = Name::Nabla(cx.depth + 1);
            let cx2 = SatContext { depth: cx.depth + 1, ..cx.clone() };
            successors_bound_at(p, cx.depth).iter().any(|t| {
                t.theta.is_identity() && t.action == Action::BoundOut(*x) && open(&t.cont.instantiate(n), &b.instantiate(n), &cx2)
            })
        }
        Formula::InDia(_, x, b) => successors_bound_at(p, cx.depth).iter().any(|t| {
            if !(t.theta.is_identity() && t.action == Action::BoundIn(*x)) {
                return false;
            }
            let mut cx2 = cx.clone();
            let w = cx2.fresh_eigen();
            open(&t.cont.instantiate(w), &b.instantiate(w), &cx2)
        }),
        Formula::FreeBox(act, b) => successors_free_at(p, cx.depth).iter().all(|t| {
            branch(t.action, *act, &t.theta, cx, |rho, cx2| open(&rho.apply(&t.cont), &rho.apply(&**b), cx2))
        }),
        Formula::OutBox(x, b) => {
            let n = Name::Nabla(cx.depth + 1);
            successors_bound_at(p, cx.depth).iter().all(|t| {
                branch(t.action, Action::BoundOut(*x), &t.theta, cx, |rho, cx2| {
                    let cx3 = SatContext { depth: cx2.depth + 1, ..cx2.clone() };
                    open(&rho.apply(&t.cont).instantiate(n), &rho.apply(&**b).instantiate(n), &cx3)
                })
            })
        }
        Formula::InBox(_, x, b) => successors_bound_at(p, cx.depth).iter().all(|t| {
            branch(t.action, Action::BoundIn(*x), &t.theta, cx, |rho, cx2| {
                let (cont, body) = (rho.apply(&t.cont), rho.apply(&**b));
                cx2.in_scope().into_iter().any(|y| open(&cont.instantiate(y), &body.instantiate(y), cx2))
            })
        }),
    }
}

/// One branch of a box: the transition's action must unify with the
/// modality's. Branches that cannot unify, or whose instantiation breaks the
/// distinction, hold vacuously. `k` receives the substitution still to be
/// applied to the continuation and formula.
fn branch(
    act: Action,
    wanted: Action,
    theta: &Substitution,
    cx: &SatContext,
    k: impl FnOnce(&Substitution, &SatContext) -> bool,
) -> bool {
    let Some(sigma) = unify_actions(act, theta.apply(&wanted)) else { return true };
    let rho = compose(&sigma, theta);
    let Some(cx2) = cx.apply(&rho) else { return true };
    k(&rho, &cx2)
}
