//! Distinguishing formulas from refutations.
//!
//! Every formula built here holds of the left process of its goal and fails
//! of the right one. Late and early formulas are read classically, so a
//! move of the right process is handled by negating the formula that
//! separates right from left. Open formulas are read intuitionistically
//! and use boxes for moves of the right process instead.

use std::collections::HashMap;

use super::{attacks, defend, replay, Attack, BisimError, BisimResult, Game, Goal, Mode, Options, Side, Witness};
use crate::lts::{successors_at, unify_actions};
use crate::modal::{dual, Formula, InKind};
use crate::name::{Name, Names};
use crate::syntax::Action;
use crate::unify::{compose, Substitution};

/// A formula satisfied by the left process of a refuted goal and not by the
/// right one, checked in the mode of the refutation.
pub fn distinguishing_formula(result: &BisimResult) -> Result<Formula, BisimError> {
    let Some(w) = &result.witness else {
        return Err(BisimError::WitnessMalformed("bisimilar results have no witness".into()));
    };
    let opts = Options::new(result.mode);
    replay(w, &opts)?;
    match result.mode {
        Mode::Late | Mode::Early => Ok(ground(w, result.mode)),
        Mode::Open => {
            let mut x = OpenExtractor { game: Game::new(opts), memo: HashMap::new() };
            x.formula(&w.goal)?.ok_or(BisimError::NoFormula)
        }
    }
}

fn ground(w: &Witness, mode: Mode) -> Formula {
    let orient = |f: Formula| if w.side == Side::Left { f } else { dual(&f) };
    let parts: Vec<Formula> = w.replies.iter().map(|r| orient(ground(&r.witness, mode))).collect();
    let known = w.goal.free_names();
    let g = match w.action {
        Action::BoundOut(x) => {
            Formula::OutDia(x, Box::new(Formula::all(parts).abstract_over(Name::Nabla(w.goal.depth + 1))))
        }
        Action::BoundIn(x) if mode == Mode::Late => {
            let hedged = w.replies.iter().zip(parts).map(|(r, s)| hedge(r.instance, s, &known));
            Formula::InDia(InKind::Late, x, Box::new(Formula::all(hedged)))
        }
        Action::BoundIn(x) => Formula::InDia(InKind::Early, x, Box::new(hedge(w.instance, Formula::all(parts), &known))),
        a => Formula::dia(a, Formula::all(parts)),
    };
    orient(g)
}

/// Body of an input modality that is `s` when the received name is `w` and
/// trivially true otherwise. A fresh `w` stands for every name outside
/// `known`.
fn hedge(w: Option<Name>, s: Formula, known: &[Name]) -> Formula {
    let y = Name::Bound(0);
    match w {
        Some(w) if known.contains(&w) => Formula::match_box(y, w, s),
        Some(w) => {
            let elsewhere = Formula::any(known.iter().map(|n| Formula::match_dia(y, *n, Formula::True)));
            Formula::or(elsewhere, s.abstract_over(w))
        }
        None => s,
    }
}

/// Replay `theta` as a chain of match guards.
fn guarded(theta: &Substitution, f: Formula) -> Formula {
    let bindings: Vec<_> = theta.bindings().collect();
    bindings.into_iter().rev().fold(f, |f, (e, n)| Formula::match_box(Name::Eigen(e), n, f))
}

struct OpenExtractor {
    game: Game,
    memo: HashMap<Goal, Option<Formula>>,
}

impl OpenExtractor {
    fn formula(&mut self, g: &Goal) -> Result<Option<Formula>, BisimError> {
        if let Some(f) = self.memo.get(g) {
            return Ok(f.clone());
        }
        let f = self.search(g)?;
        self.memo.insert(g.clone(), f.clone());
        Ok(f)
    }

    fn search(&mut self, g: &Goal) -> Result<Option<Formula>, BisimError> {
        let opts = Options::new(Mode::Open);
        'moves: for att in attacks(g, &opts) {
            let game = &mut self.game;
            if defend(&att, g, &mut |kid| game.decide(kid))?.is_some() {
                continue;
            }
            if att.side == Side::Right && matches!(att.action, Action::BoundIn(_)) {
                match self.input_box(g, &att)? {
                    Some(f) => return Ok(Some(f)),
                    None => continue,
                }
            }
            let mut parts = Vec::new();
            for c in 0..att.cands.len() {
                match self.formula(&att.child(g, c, 0))? {
                    Some(f) => parts.push(f),
                    None => continue 'moves,
                }
            }
            let fresh = att.instances[0];
            let f = if att.side == Side::Left {
                let body = Formula::all(parts);
                match att.action {
                    Action::BoundOut(x) => Formula::OutDia(x, Box::new(body.abstract_over(fresh.unwrap()))),
                    Action::BoundIn(x) => Formula::InDia(InKind::Late, x, Box::new(body.abstract_over(fresh.unwrap()))),
                    a => Formula::dia(a, body),
                }
            } else {
                parts.extend(instantiating_branches(g, &att));
                let body = Formula::any(parts);
                match att.action {
                    Action::BoundOut(x) => Formula::OutBox(x, Box::new(body.abstract_over(fresh.unwrap()))),
                    a => Formula::boxed(a, body),
                }
            };
            return Ok(Some(guarded(&att.theta, f)));
        }
        Ok(None)
    }

    /// An input of the right process. The box quantifies existentially over
    /// names already in scope, so the body commits to one such name at
    /// which every answer of the left process is still refuted.
    fn input_box(&mut self, g: &Goal, att: &Attack) -> Result<Option<Formula>, BisimError> {
        let Action::BoundIn(x) = att.action else { return Ok(None) };
        let mut scope: Vec<Name> = (1..=g.depth).map(Name::Nabla).collect();
        let instantiated = Goal { left: att.theta.apply(&g.left), right: att.theta.apply(&g.right), ..g.clone() };
        scope.extend(instantiated.free_names().into_iter().filter(|n| matches!(n, Name::Eigen(_))));
        let y = Name::Bound(0);
        'names: for n in scope {
            let mut parts = Vec::new();
            for c in 0..att.cands.len() {
                let kid = att.child_with(g, c, Some(n));
                if self.game.decide(&kid)? {
                    continue 'names;
                }
                match self.formula(&kid)? {
                    Some(f) => parts.push(Formula::match_dia(y, n, f)),
                    None => continue 'names,
                }
            }
            parts.extend(instantiating_branches(g, att));
            let body = Formula::InBox(InKind::Late, x, Box::new(Formula::any(parts)));
            return Ok(Some(guarded(&att.theta, body)));
        }
        Ok(None)
    }
}

/// One equation for every branch of the left process that answers the
/// attack only after instantiating a name. Such branches are otherwise
/// unconstrained by a box, and naming the equation makes them hold.
fn instantiating_branches(g: &Goal, att: &Attack) -> Vec<Formula> {
    let left = att.theta.apply(&g.left);
    let mut out = Vec::new();
    for t in successors_at(&left, g.depth) {
        let Some(sigma) = unify_actions(t.action, t.theta.apply(&att.action)) else { continue };
        let rho = compose(&sigma, &t.theta);
        if rho.is_identity() || att.dist.apply(&rho).is_none() {
            continue;
        }
        let (e, n) = rho.bindings().next().unwrap();
        out.push(Formula::match_dia(Name::Eigen(e), n, Formula::True));
    }
    out
}
