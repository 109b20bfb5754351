//! Bisimulation checking by game search.
//!
//! A goal pairs two processes with the nabla depth and the explicit
//! distinction in force. The attacker picks a transition of either side; if
//! its substitution breaks the distinction the branch is discharged,
//! otherwise the defender must answer with a transition of the other side
//! (under the same substitution) carrying exactly the same action.
//!
//! Open mode keeps universal names as eigenvariables and never splits on
//! name equality. Late and early modes treat every free name as a nabla
//! constant and split an input on each known name plus one fresh name.

mod extract;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lts::successors_at;
use crate::name::{Eigen, Name, Names};
use crate::syntax::{Action, Prefix, Process};
use crate::unify::{Distinction, Substitution};

pub use extract::distinguishing_formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Open,
    Late,
    Early,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Bisimilar,
    NotBisimilar,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BisimError {
    #[error("replication is not supported by the bisimulation checker")]
    ReplicationUnsupported,
    #[error("goal budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("malformed witness: {0}")]
    WitnessMalformed(String),
    #[error("no distinguishing formula could be built for this refutation")]
    NoFormula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub mode: Mode,
    /// Open mode only: choose the input name before the answering
    /// transition, as in the early clause.
    pub early_clause: bool,
    pub max_goals: Option<usize>,
}

impl Options {
    pub fn new(mode: Mode) -> Self {
        Options { mode, early_clause: false, max_goals: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Goal {
    pub depth: u32,
    pub distinction: Distinction,
    pub left: Process,
    pub right: Process,
}

impl Goal {
    pub fn new(prefix: &Prefix, distinction: Distinction, left: Process, right: Process) -> Goal {
        Goal { depth: prefix.depth(), distinction, left, right }
    }

    pub fn side(&self, s: Side) -> &Process {
        match s {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Free names of both processes, sorted.
    pub fn free_names(&self) -> Vec<Name> {
        let mut s: BTreeSet<Name> = self.left.free_names().into_iter().collect();
        s.extend(self.right.free_names());
        s.into_iter().collect()
    }

    fn next_eigen(&self) -> u32 {
        let mut id = 0;
        let mut see = |n: Name, _| {
            if let Name::Eigen(e) = n {
                id = id.max(e.id);
            }
        };
        self.left.visit_names_at(0, &mut see);
        self.right.visit_names_at(0, &mut see);
        for (a, b) in self.distinction.pairs() {
            see(a, 0);
            see(b, 0);
        }
        id + 1
    }

    /// Replace every eigenvariable by a new nabla constant.
    pub fn grounded(&self) -> Goal {
        let mut eigens: Vec<Eigen> = Vec::new();
        for n in self.left.free_names().into_iter().chain(self.right.free_names()) {
            if let Name::Eigen(e) = n {
                if !eigens.contains(&e) {
                    eigens.push(e);
                }
            }
        }
        eigens.sort();
        let d = self.depth;
        let mut f = |n: Name| match n {
            Name::Eigen(e) => Name::Nabla(d + 1 + eigens.iter().position(|x| *x == e).unwrap() as u32),
            n => n,
        };
        Goal {
            depth: d + eigens.len() as u32,
            distinction: Distinction::default(),
            left: self.left.rename_free(&mut f),
            right: self.right.rename_free(&mut f),
        }
    }

    /// Representative of the goal up to renaming: levels compacted, ceilings
    /// adjusted to match, eigenvariables numbered by first occurrence, and
    /// distinction pairs that can never matter dropped.
    pub fn canonical(&self) -> Goal {
        let mut order: Vec<Name> = Vec::new();
        let mut see = |n: Name, _| {
            if n.is_free() && !order.contains(&n) {
                order.push(n);
            }
        };
        self.left.visit_names_at(0, &mut see);
        self.right.visit_names_at(0, &mut see);
        let mut levels: Vec<u32> = order
            .iter()
            .filter_map(|n| match n {
                Name::Nabla(l) => Some(*l),
                _ => None,
            })
            .collect();
        levels.sort_unstable();
        let eigens: Vec<Eigen> = order.iter().filter_map(|n| n.as_eigen()).collect();
        let mut f = |n: Name| match n {
            Name::Nabla(l) => Name::Nabla(levels.iter().position(|x| *x == l).unwrap() as u32 + 1),
            Name::Eigen(e) => {
                let id = eigens.iter().position(|x| *x == e).unwrap() as u32 + 1;
                Name::eigen(id, levels.iter().filter(|l| **l <= e.ceiling).count() as u32)
            }
            n => n,
        };
        Goal {
            depth: levels.len() as u32,
            distinction: self.distinction.restrict(&order).rename(&mut f),
            left: self.left.rename_free(&mut f),
            right: self.right.rename_free(&mut f),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub goals: usize,
    pub branches: usize,
    pub time_ms: u64,
}

/// One attacker move together with everything needed to build its
/// subgoals.
#[derive(Clone, Debug)]
struct Attack {
    side: Side,
    index: usize,
    theta: Substitution,
    action: Action,
    dist: Distinction,
    mover: Process,
    /// Answering transitions: index in the defender's successor list and
    /// continuation.
    cands: Vec<(usize, Process)>,
    /// Names the bound continuations are opened with; `None` for free actions.
    instances: Vec<Option<Name>>,
    /// Pick the answer before the instance (late) or after it (early).
    answer_first: bool,
}

impl Attack {
    fn child(&self, g: &Goal, c: usize, w: usize) -> Goal {
        self.child_with(g, c, self.instances[w])
    }

    fn child_with(&self, g: &Goal, c: usize, instance: Option<Name>) -> Goal {
        let cand = &self.cands[c].1;
        let (m, n, depth) = match instance {
            None => (self.mover.clone(), cand.clone(), g.depth),
            Some(x) => {
                let depth = match x {
                    Name::Nabla(l) => l.max(g.depth),
                    _ => g.depth,
                };
                (self.mover.instantiate(x), cand.instantiate(x), depth)
            }
        };
        let (left, right) = match self.side {
            Side::Left => (m, n),
            Side::Right => (n, m),
        };
        Goal { depth, distinction: self.dist.clone(), left, right }
    }
}

fn attacks(g: &Goal, opts: &Options) -> Vec<Attack> {
    let mut out = Vec::new();
    for side in [Side::Left, Side::Right] {
        let other = match side {
            Side::Left => &g.right,
            Side::Right => &g.left,
        };
        for (index, t) in successors_at(g.side(side), g.depth).into_iter().enumerate() {
            let Some(dist) = g.distinction.apply(&t.theta) else { continue };
            let cands = successors_at(&t.theta.apply(other), g.depth)
                .into_iter()
                .enumerate()
                .filter(|(_, c)| c.theta.is_identity() && c.action == t.action)
                .map(|(i, c)| (i, c.cont))
                .collect();
            let (instances, answer_first) = match t.action {
                Action::BoundOut(_) => (vec![Some(Name::Nabla(g.depth + 1))], true),
                Action::BoundIn(_) => match opts.mode {
                    Mode::Open => (vec![Some(Name::eigen(g.next_eigen(), g.depth))], !opts.early_clause),
                    Mode::Late | Mode::Early => {
                        let mut ws: Vec<Option<Name>> = g.free_names().into_iter().map(Some).collect();
                        ws.push(Some(Name::Nabla(g.depth + 1)));
                        (ws, opts.mode == Mode::Late)
                    }
                },
                _ => (vec![None], true),
            };
            out.push(Attack { side, index, theta: t.theta, action: t.action, dist, mover: t.cont, cands, instances, answer_first });
        }
    }
    out
}

/// Decide one attack given a verdict for subgoals. On success returns the
/// subgoals the defence relies on.
fn defend(
    att: &Attack,
    g: &Goal,
    oracle: &mut dyn FnMut(&Goal) -> Result<bool, BisimError>,
) -> Result<Option<Vec<Goal>>, BisimError> {
    let mut used = Vec::new();
    if att.answer_first {
        'cands: for c in 0..att.cands.len() {
            let mut kids = Vec::new();
            for w in 0..att.instances.len() {
                let kid = att.child(g, c, w);
                if !oracle(&kid)? {
                    continue 'cands;
                }
                kids.push(kid);
            }
            return Ok(Some(kids));
        }
        Ok(None)
    } else {
        'names: for w in 0..att.instances.len() {
            for c in 0..att.cands.len() {
                let kid = att.child(g, c, w);
                if oracle(&kid)? {
                    used.push(kid);
                    continue 'names;
                }
            }
            return Ok(None);
        }
        Ok(Some(used))
    }
}

/// A refutation: the attacker move that wins, and for each answer the
/// subgoal that fails together with its own refutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub goal: Goal,
    pub side: Side,
    /// Position of the move among the mover's successors.
    pub move_index: usize,
    pub theta: Substitution,
    pub action: Action,
    /// Name the bound continuations were opened with, when one name serves
    /// every answer.
    pub instance: Option<Name>,
    pub replies: Vec<Reply>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reply {
    /// Position of the answer among the defender's successors.
    pub candidate: usize,
    pub instance: Option<Name>,
    pub witness: Witness,
}

/// One line of a refutation, following the first answer at each level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub side: Side,
    pub move_index: usize,
    pub theta: Substitution,
    pub action: Action,
    pub candidate: Option<usize>,
    pub instance: Option<Name>,
}

impl Witness {
    pub fn trace(&self) -> Vec<Step> {
        let mut out = Vec::new();
        let mut w = self;
        loop {
            let first = w.replies.first();
            out.push(Step {
                side: w.side,
                move_index: w.move_index,
                theta: w.theta.clone(),
                action: w.action,
                candidate: first.map(|r| r.candidate),
                instance: first.and_then(|r| r.instance).or(w.instance),
            });
            match first {
                Some(r) => w = &r.witness,
                None => return out,
            }
        }
    }

    pub fn len(&self) -> usize {
        1 + self.replies.iter().map(|r| r.witness.len()).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BisimResult {
    pub verdict: Verdict,
    pub mode: Mode,
    /// The goal actually checked (in late and early mode, with every
    /// eigenvariable made a nabla constant).
    pub goal: Goal,
    /// Canonical goals forming a bisimulation that contains the root.
    pub certificate: Option<Vec<Goal>>,
    pub witness: Option<Witness>,
    pub stats: Stats,
}

impl BisimResult {
    pub fn bisimilar(&self) -> bool {
        self.verdict == Verdict::Bisimilar
    }
}

/// Search state for one call.
pub struct Game {
    opts: Options,
    memo: HashMap<Goal, bool>,
    support: HashMap<Goal, Vec<Goal>>,
    stats: Stats,
}

impl Game {
    pub fn new(opts: Options) -> Self {
        Game { opts, memo: HashMap::new(), support: HashMap::new(), stats: Stats::default() }
    }

    pub fn decide(&mut self, g: &Goal) -> Result<bool, BisimError> {
        let key = g.canonical();
        if let Some(v) = self.memo.get(&key) {
            return Ok(*v);
        }
        self.stats.goals += 1;
        if let Some(max) = self.opts.max_goals {
            if self.stats.goals > max {
                return Err(BisimError::BudgetExceeded(max));
            }
        }
        let mut used = Vec::new();
        let mut verdict = true;
        for att in attacks(&key, &self.opts) {
            let defence = defend(&att, &key, &mut |kid| {
                self.stats.branches += 1;
                self.decide(kid)
            })?;
            match defence {
                Some(kids) => used.extend(kids.iter().map(Goal::canonical)),
                None => {
                    verdict = false;
                    break;
                }
            }
        }
        if verdict {
            self.support.insert(key.clone(), used);
        }
        self.memo.insert(key, verdict);
        Ok(verdict)
    }

    /// Build a refutation of a goal already decided false.
    pub fn refute(&mut self, g: &Goal) -> Result<Witness, BisimError> {
        for att in attacks(g, &self.opts) {
            let mut failing: Vec<(usize, usize)> = Vec::new();
            let mut shared = None;
            if att.answer_first {
                for c in 0..att.cands.len() {
                    let mut hit = None;
                    for w in 0..att.instances.len() {
                        if !self.decide(&att.child(g, c, w))? {
                            hit = Some(w);
                            break;
                        }
                    }
                    match hit {
                        Some(w) => failing.push((c, w)),
                        None => break,
                    }
                }
                if failing.len() < att.cands.len() {
                    continue;
                }
                if att.instances.len() == 1 {
                    shared = att.instances[0];
                }
            } else {
                let mut found = false;
                for w in 0..att.instances.len() {
                    let mut all = true;
                    for c in 0..att.cands.len() {
                        if self.decide(&att.child(g, c, w))? {
                            all = false;
                            break;
                        }
                    }
                    if all {
                        failing = (0..att.cands.len()).map(|c| (c, w)).collect();
                        shared = att.instances[w];
                        found = true;
                        break;
                    }
                }
                if !found {
                    continue;
                }
            }
            let mut replies = Vec::new();
            for (c, w) in failing {
                let kid = att.child(g, c, w);
                replies.push(Reply { candidate: att.cands[c].0, instance: att.instances[w], witness: self.refute(&kid)? });
            }
            return Ok(Witness {
                goal: g.clone(),
                side: att.side,
                move_index: att.index,
                theta: att.theta,
                action: att.action,
                instance: shared,
                replies,
            });
        }
        Err(BisimError::WitnessMalformed("goal has no failing move".into()))
    }

    fn certificate(&self, root: &Goal) -> Vec<Goal> {
        let mut seen = HashSet::new();
        let mut todo = vec![root.canonical()];
        let mut out = Vec::new();
        while let Some(g) = todo.pop() {
            if !seen.insert(g.clone()) {
                continue;
            }
            if let Some(kids) = self.support.get(&g) {
                todo.extend(kids.iter().cloned());
            }
            out.push(g);
        }
        out.sort();
        out
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }
}

/// Check a goal. In late and early mode eigenvariables are first turned
/// into nabla constants.
pub fn check(goal: &Goal, opts: &Options) -> Result<BisimResult, BisimError> {
    if goal.left.contains_bang() || goal.right.contains_bang() {
        return Err(BisimError::ReplicationUnsupported);
    }
    let start = Instant::now();
    let goal = match opts.mode {
        Mode::Open => goal.clone(),
        Mode::Late | Mode::Early => goal.grounded(),
    };
    let mut game = Game::new(opts.clone());
    let ok = game.decide(&goal)?;
    let (certificate, witness) = if ok {
        (Some(game.certificate(&goal)), None)
    } else {
        (None, Some(game.refute(&goal)?))
    };
    let mut stats = game.stats();
    stats.time_ms = start.elapsed().as_millis() as u64;
    Ok(BisimResult {
        verdict: if ok { Verdict::Bisimilar } else { Verdict::NotBisimilar },
        mode: opts.mode,
        goal,
        certificate,
        witness,
        stats,
    })
}

pub fn bisim(
    left: &Process,
    right: &Process,
    prefix: &Prefix,
    distinction: Distinction,
    mode: Mode,
) -> Result<BisimResult, BisimError> {
    check(&Goal::new(prefix, distinction, left.clone(), right.clone()), &Options::new(mode))
}

pub fn open_bisim(left: &Process, right: &Process, prefix: &Prefix, distinction: Distinction) -> Result<BisimResult, BisimError> {
    bisim(left, right, prefix, distinction, Mode::Open)
}

pub fn late_bisim(left: &Process, right: &Process, prefix: &Prefix) -> Result<BisimResult, BisimError> {
    bisim(left, right, prefix, Distinction::default(), Mode::Late)
}

pub fn early_bisim(left: &Process, right: &Process, prefix: &Prefix) -> Result<BisimResult, BisimError> {
    bisim(left, right, prefix, Distinction::default(), Mode::Early)
}

/// Check that a certificate is closed under the game: every goal in it
/// answers every attack with subgoals that are in it too.
pub fn verify_certificate(root: &Goal, certificate: &[Goal], opts: &Options) -> bool {
    let set: HashSet<Goal> = certificate.iter().cloned().collect();
    if !set.contains(&root.canonical()) {
        return false;
    }
    set.iter().all(|g| {
        attacks(g, opts).iter().all(|att| {
            matches!(defend(att, g, &mut |kid| Ok(set.contains(&kid.canonical()))), Ok(Some(_)))
        })
    })
}

/// Replay a refutation against the game: every move and answer must exist,
/// answers must be exhaustive, and every leaf must be a move that cannot be
/// answered at all.
pub fn replay(w: &Witness, opts: &Options) -> Result<(), BisimError> {
    let bad = |what: &str| Err(BisimError::WitnessMalformed(what.to_string()));
    let g = &w.goal;
    let Some(att) = attacks(g, opts).into_iter().find(|a| a.side == w.side && a.index == w.move_index) else {
        return bad("move does not exist or is discharged");
    };
    if att.theta != w.theta || att.action != w.action {
        return bad("move label differs");
    }
    let pos = |n: Option<Name>| att.instances.iter().position(|x| *x == n);
    let shared = if att.answer_first { None } else { Some(pos(w.instance)) };
    if shared == Some(None) {
        return bad("instance is not one of the case names");
    }
    if w.replies.len() != att.cands.len() {
        return bad("answers are not exhaustive");
    }
    for (k, r) in w.replies.iter().enumerate() {
        if r.candidate != att.cands[k].0 {
            return bad("answer order differs");
        }
        let Some(wi) = pos(r.instance) else { return bad("instance is not one of the case names") };
        if let Some(Some(s)) = shared {
            if s != wi {
                return bad("early answers must share the instance");
            }
        }
        if r.witness.goal != att.child(g, k, wi) {
            return bad("subgoal differs");
        }
        replay(&r.witness, opts)?;
    }
    Ok(())
}
