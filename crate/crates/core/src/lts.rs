//! Symbolic one-step transitions of the late transition system.
//!
//! Each transition is a triple `(theta, action, cont)`: under the
//! instantiation `theta` of the source's eigenvariables the source can
//! perform `action` and become `cont`. `theta` has already been applied to
//! the action and continuation. For bound actions `cont` is the body of a
//! one-name abstraction whose `Bound(0)` is the received or extruded name.
//!
//! Restrictions are opened at the next unused nabla level. Eigenvariable
//! ceilings never reach it, so the restricted name is automatically
//! distinct from every name the process already knows.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::name::{Name, Names};
use crate::syntax::{Action, Naming, Process};
use crate::unify::{compose, unify_all, unify_names, Substitution};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transition {
    pub theta: Substitution,
    pub action: Action,
    pub cont: Process,
}

impl Transition {
    fn new(theta: Substitution, action: Action, cont: Process) -> Self {
        Transition { theta, action, cont }
    }

    /// For bound actions, the continuation with its binder filled by `n`.
    pub fn target(&self, n: Name) -> Process {
        if self.action.is_bound() {
            self.cont.instantiate(n)
        } else {
            self.cont.clone()
        }
    }
}

/// Smallest nabla depth that covers every level the process mentions or
/// any of its eigenvariables may depend on.
pub fn depth_of<T: Names>(t: &T) -> u32 {
    let mut d = 0;
    t.visit_names_at(0, &mut |n, _| match n {
        Name::Nabla(l) => d = d.max(l),
        Name::Eigen(e) => d = d.max(e.ceiling),
        Name::Bound(_) => {}
    });
    d
}

pub fn successors_free(p: &Process) -> Vec<Transition> {
    successors_free_at(p, depth_of(p))
}

pub fn successors_bound(p: &Process) -> Vec<Transition> {
    successors_bound_at(p, depth_of(p))
}

/// Free-action successors with `depth` nabla levels in scope.
pub fn successors_free_at(p: &Process, depth: u32) -> Vec<Transition> {
    dedup(free(p, depth.max(depth_of(p))))
}

pub fn successors_bound_at(p: &Process, depth: u32) -> Vec<Transition> {
    dedup(bound(p, depth.max(depth_of(p))))
}

/// All successors, free actions first.
pub fn successors_at(p: &Process, depth: u32) -> Vec<Transition> {
    let mut all = successors_free_at(p, depth);
    all.extend(successors_bound_at(p, depth));
    all
}

/// Most general unifier of two actions of the same shape.
pub fn unify_actions(a: Action, b: Action) -> Option<Substitution> {
    let pairs: Vec<(Name, Name)> = match (a, b) {
        (Action::Tau, Action::Tau) => vec![],
        (Action::FreeOut(x, y), Action::FreeOut(x2, y2)) | (Action::FreeIn(x, y), Action::FreeIn(x2, y2)) => {
            vec![(x, x2), (y, y2)]
        }
        (Action::BoundOut(x), Action::BoundOut(x2)) | (Action::BoundIn(x), Action::BoundIn(x2)) => vec![(x, x2)],
        _ => return None,
    };
    unify_all(&pairs)
}

pub fn has_no_transition(p: &Process) -> bool {
    successors_free(p).is_empty() && successors_bound(p).is_empty()
}

fn dedup(ts: Vec<Transition>) -> Vec<Transition> {
    let mut out: Vec<Transition> = Vec::with_capacity(ts.len());
    for t in ts {
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

/// Prefix `theta2 ∘ theta1` onto a unifier step and compose the lot.
fn chain(sigma: &Substitution, theta2: &Substitution, theta1: &Substitution) -> Substitution {
    compose(sigma, &compose(theta2, theta1))
}

fn free(p: &Process, d: u32) -> Vec<Transition> {
    let id = Substitution::identity;
    match p {
        Process::Nil | Process::In(..) => vec![],
        Process::Tau(k) => vec![Transition::new(id(), Action::Tau, (**k).clone())],
        Process::Out(x, y, k) => vec![Transition::new(id(), Action::FreeOut(*x, *y), (**k).clone())],
        Process::Match(x, y, k) => matched(*x, *y, k, d, free),
        Process::Sum(l, r) => {
            let mut out = free(l, d);
            out.extend(free(r, d));
            out
        }
        Process::Par(l, r) => {
            let mut out = Vec::new();
            for t in free(l, d) {
                let r2 = t.theta.apply(&**r);
                out.push(Transition::new(t.theta, t.action, Process::par(t.cont, r2)));
            }
            for t in free(r, d) {
                let l2 = t.theta.apply(&**l);
                out.push(Transition::new(t.theta, t.action, Process::par(l2, t.cont)));
            }
            out.extend(close(l, r, d, false));
            out.extend(close(l, r, d, true));
            out.extend(com(l, r, d, false));
            out.extend(com(l, r, d, true));
            out
        }
        Process::Nu(body) => {
            let n = Name::Nabla(d + 1);
            free(&body.instantiate(n), d + 1)
                .into_iter()
                .filter(|t| !t.action.mentions(n))
                .map(|t| Transition::new(t.theta, t.action, Process::nu(t.cont.abstract_over(n))))
                .collect()
        }
        Process::Bang(k) => {
            let mut out = Vec::new();
            for t in free(k, d) {
                let bang = t.theta.apply(p);
                out.push(Transition::new(t.theta, t.action, Process::par(t.cont, bang)));
            }
            // self communication between two copies
            for (theta, inner) in com_between(k, k, d, false) {
                let bang = theta.apply(p);
                out.push(Transition::new(theta, Action::Tau, Process::par(inner, bang)));
            }
            for (theta, inner) in close_between(k, k, d, false) {
                let bang = theta.apply(p);
                out.push(Transition::new(theta, Action::Tau, Process::par(inner, bang)));
            }
            out
        }
    }
}

fn bound(p: &Process, d: u32) -> Vec<Transition> {
    match p {
        Process::Nil | Process::Tau(_) | Process::Out(..) => vec![],
        Process::In(x, body) => vec![Transition::new(Substitution::identity(), Action::BoundIn(*x), (**body).clone())],
        Process::Match(x, y, k) => matched(*x, *y, k, d, bound),
        Process::Sum(l, r) => {
            let mut out = bound(l, d);
            out.extend(bound(r, d));
            out
        }
        Process::Par(l, r) => {
            // the other component has no loose indices, so it can sit under
            // the abstraction unchanged
            let mut out = Vec::new();
            for t in bound(l, d) {
                let r2 = t.theta.apply(&**r);
                out.push(Transition::new(t.theta, t.action, Process::par(t.cont, r2)));
            }
            for t in bound(r, d) {
                let l2 = t.theta.apply(&**l);
                out.push(Transition::new(t.theta, t.action, Process::par(l2, t.cont)));
            }
            out
        }
        Process::Nu(body) => {
            let n = Name::Nabla(d + 1);
            let opened = body.instantiate(n);
            let mut out = Vec::new();
            // res: lambda m. nu n. M m n
            for t in bound(&opened, d + 1) {
                if !t.action.mentions(n) {
                    out.push(Transition::new(t.theta, t.action, Process::nu(t.cont.abstract_over(n))));
                }
            }
            // open: the restricted name is extruded
            for t in free(&opened, d + 1) {
                if let Action::FreeOut(x, y) = t.action {
                    if y == n && x != n {
                        out.push(Transition::new(t.theta, Action::BoundOut(x), t.cont.abstract_over(n)));
                    }
                }
            }
            out
        }
        Process::Bang(k) => bound(k, d)
            .into_iter()
            .map(|t| {
                let bang = t.theta.apply(p);
                Transition::new(t.theta, t.action, Process::par(t.cont, bang))
            })
            .collect(),
    }
}

fn matched(x: Name, y: Name, k: &Process, d: u32, step: fn(&Process, u32) -> Vec<Transition>) -> Vec<Transition> {
    let Some(sigma) = unify_names(x, y) else { return vec![] };
    step(&sigma.apply(k), d)
        .into_iter()
        .map(|t| Transition::new(compose(&t.theta, &sigma), t.action, t.cont))
        .collect()
}

/// Bound output on one side meeting bound input on the other; `flip` puts
/// the output on the right. Continuations are returned unwrapped.
fn close_between(l: &Process, r: &Process, d: u32, flip: bool) -> Vec<(Substitution, Process)> {
    let mut out = Vec::new();
    for t1 in bound(l, d) {
        let ch1 = t1.action.channel().expect("bound action has a channel");
        let wanted_first = if flip { matches!(t1.action, Action::BoundIn(_)) } else { matches!(t1.action, Action::BoundOut(_)) };
        if !wanted_first {
            continue;
        }
        for t2 in bound(&t1.theta.apply(r), d) {
            let ok = if flip { matches!(t2.action, Action::BoundOut(_)) } else { matches!(t2.action, Action::BoundIn(_)) };
            if !ok {
                continue;
            }
            let ch2 = t2.action.channel().expect("bound action has a channel");
            let Some(sigma) = unify_names(t2.theta.name(ch1), ch2) else { continue };
            let left = sigma.apply(&t2.theta.apply(&t1.cont));
            let right = sigma.apply(&t2.cont);
            let theta = chain(&sigma, &t2.theta, &t1.theta);
            out.push((theta, Process::nu(Process::par(left, right))));
        }
    }
    out
}

/// Free output on one side meeting bound input on the other; `flip` puts
/// the output on the right.
fn com_between(l: &Process, r: &Process, d: u32, flip: bool) -> Vec<(Substitution, Process)> {
    let mut out = Vec::new();
    if !flip {
        for t1 in free(l, d) {
            let Action::FreeOut(x, y) = t1.action else { continue };
            for t2 in bound(&t1.theta.apply(r), d) {
                let Action::BoundIn(x2) = t2.action else { continue };
                let Some(sigma) = unify_names(t2.theta.name(x), x2) else { continue };
                let obj = sigma.name(t2.theta.name(y));
                let left = sigma.apply(&t2.theta.apply(&t1.cont));
                let right = sigma.apply(&t2.cont).instantiate(obj);
                out.push((chain(&sigma, &t2.theta, &t1.theta), Process::par(left, right)));
            }
        }
    } else {
        for t1 in bound(l, d) {
            let Action::BoundIn(x) = t1.action else { continue };
            for t2 in free(&t1.theta.apply(r), d) {
                let Action::FreeOut(x2, y) = t2.action else { continue };
                let Some(sigma) = unify_names(t2.theta.name(x), x2) else { continue };
                let obj = sigma.name(y);
                let left = sigma.apply(&t2.theta.apply(&t1.cont)).instantiate(obj);
                let right = sigma.apply(&t2.cont);
                out.push((chain(&sigma, &t2.theta, &t1.theta), Process::par(left, right)));
            }
        }
    }
    out
}

fn close(l: &Process, r: &Process, d: u32, flip: bool) -> Vec<Transition> {
    close_between(l, r, d, flip).into_iter().map(|(theta, c)| Transition::new(theta, Action::Tau, c)).collect()
}

fn com(l: &Process, r: &Process, d: u32, flip: bool) -> Vec<Transition> {
    com_between(l, r, d, flip).into_iter().map(|(theta, c)| Transition::new(theta, Action::Tau, c)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LtsError {
    #[error("state budget of {0} exceeded")]
    StateBudgetExceeded(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub theta: Substitution,
    pub action: Action,
    /// Name the bound object was instantiated with, for bound actions.
    pub object: Option<Name>,
}

/// Reachable states, breadth first. Bound continuations are entered at a
/// fresh nabla level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LtsGraph {
    pub states: Vec<Process>,
    pub edges: Vec<Edge>,
}

pub fn lts_graph(p: &Process, max_states: usize) -> Result<LtsGraph, LtsError> {
    let mut index: BTreeMap<Process, usize> = BTreeMap::new();
    let mut states = vec![p.clone()];
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    if max_states == 0 {
        return Err(LtsError::StateBudgetExceeded(0));
    }
    index.insert(p.clone(), 0);
    while let Some(i) = queue.pop_front() {
        let src = states[i].clone();
        let d = depth_of(&src);
        for t in successors_at(&src, d) {
            let object = t.action.is_bound().then_some(Name::Nabla(d + 1));
            let target = object.map(|n| t.target(n)).unwrap_or_else(|| t.cont.clone());
            let j = match index.get(&target) {
                Some(&j) => j,
                None => {
                    if states.len() >= max_states {
                        return Err(LtsError::StateBudgetExceeded(max_states));
                    }
                    states.push(target.clone());
                    index.insert(target, states.len() - 1);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                }
            };
            edges.push(Edge { from: i, to: j, theta: t.theta, action: t.action, object });
        }
    }
    Ok(LtsGraph { states, edges })
}

impl LtsGraph {
    pub fn to_dot(&self, naming: &Naming) -> String {
        let mut s = String::from("digraph lts {\n");
        for (i, p) in self.states.iter().enumerate() {
            let _ = writeln!(s, "  s{i} [label=\"{}\"];", escape(&naming.process(p)));
        }
        for e in &self.edges {
            let binder = e.object.map(|n| naming.name(n)).unwrap_or_default();
            let label = format!("{} ; {}", naming.action(e.action, &binder), theta_text(&e.theta, naming));
            let _ = writeln!(s, "  s{} -> s{} [label=\"{}\"];", e.from, e.to, escape(&label));
        }
        s.push_str("}\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// `{x:=y, ...}` with surface names.
pub fn theta_text(theta: &Substitution, naming: &Naming) -> String {
    let parts: Vec<String> =
        theta.bindings().map(|(e, n)| format!("{}:={}", naming.name(Name::Eigen(e)), naming.name(n))).collect();
    format!("{{{}}}", parts.join(", "))
}
