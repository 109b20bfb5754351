//! Reference implementations used as test oracles.
//!
//! Everything here works on plain named terms with explicit side conditions
//! and shares no code with the library beyond its data types, so agreement
//! between the two is meaningful.
#![allow(dead_code)]

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use nabla_pi::modal::{Formula, InKind};
use nabla_pi::syntax::Action;
use nabla_pi::{Name, Process};
use rand::Rng;

/// Named process term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum T {
    Nil,
    Tau(Box<T>),
    Out(String, String, Box<T>),
    In(String, String, Box<T>),
    Match(String, String, Box<T>),
    Sum(Box<T>, Box<T>),
    Par(Box<T>, Box<T>),
    Nu(String, Box<T>),
}

use T::*;

pub fn s(x: &str) -> String {
    x.to_string()
}

pub fn b(t: T) -> Box<T> {
    Box::new(t)
}

impl fmt::Display for T {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nil => write!(f, "0"),
            Tau(k) => write!(f, "tau.{}", Unary(k)),
            Out(x, y, k) => write!(f, "{x}!{y}.{}", Unary(k)),
            In(x, y, k) => write!(f, "{x}?({y}).{}", Unary(k)),
            Match(x, y, k) => write!(f, "[{x}={y}]{}", Unary(k)),
            Sum(l, r) => write!(f, "({l} + {r})"),
            Par(l, r) => write!(f, "({l} | {r})"),
            Nu(y, k) => write!(f, "(nu {y}){}", Unary(k)),
        }
    }
}

struct Unary<'a>(&'a T);

impl fmt::Display for Unary<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl T {
    pub fn free_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut see = |n: &String, bound: &Vec<String>| {
            if !bound.contains(n) {
                out.insert(n.clone());
            }
        };
        match self {
            Nil => {}
            Tau(k) => k.collect_free(bound, out),
            Out(x, y, k) | Match(x, y, k) => {
                see(x, bound);
                see(y, bound);
                k.collect_free(bound, out);
            }
            In(x, y, k) => {
                see(x, bound);
                bound.push(y.clone());
                k.collect_free(bound, out);
                bound.pop();
            }
            Sum(l, r) | Par(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Nu(y, k) => {
                bound.push(y.clone());
                k.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn prefixes(&self) -> usize {
        match self {
            Nil => 0,
            Tau(k) | Out(_, _, k) | In(_, _, k) => 1 + k.prefixes(),
            Match(_, _, k) | Nu(_, k) => k.prefixes(),
            Sum(l, r) | Par(l, r) => l.prefixes() + r.prefixes(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Nil => 0,
            Tau(k) | Out(_, _, k) | In(_, _, k) | Match(_, _, k) | Nu(_, k) => 1 + k.size(),
            Sum(l, r) | Par(l, r) => 1 + l.size() + r.size(),
        }
    }
}

thread_local! {
    static FRESH: Cell<u64> = const { Cell::new(0) };
}

/// A name no generated term uses.
pub fn fresh() -> String {
    FRESH.with(|c| {
        let n = c.get();
        c.set(n + 1);
        format!("_f{n}")
    })
}

/// Capture-avoiding `t{to/from}`.
pub fn subst(t: &T, from: &str, to: &str) -> T {
    let r = |n: &String| if n == from { to.to_string() } else { n.clone() };
    match t {
        Nil => Nil,
        Tau(k) => Tau(b(subst(k, from, to))),
        Out(x, y, k) => Out(r(x), r(y), b(subst(k, from, to))),
        Match(x, y, k) => Match(r(x), r(y), b(subst(k, from, to))),
        Sum(l, rr) => Sum(b(subst(l, from, to)), b(subst(rr, from, to))),
        Par(l, rr) => Par(b(subst(l, from, to)), b(subst(rr, from, to))),
        In(x, y, k) => {
            let (y, k) = binder(y, k, from, to);
            In(r(x), y, b(k))
        }
        Nu(y, k) => {
            let (y, k) = binder(y, k, from, to);
            Nu(y, b(k))
        }
    }
}

fn binder(y: &str, k: &T, from: &str, to: &str) -> (String, T) {
    if y == from {
        return (y.to_string(), k.clone());
    }
    if y == to {
        let w = fresh();
        let k = subst(k, y, &w);
        return (w.clone(), subst(&k, from, to));
    }
    (y.to_string(), subst(k, from, to))
}

/// Ground actions; bound actions name their object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Act {
    Tau,
    Out(String, String),
    BOut(String, String),
    BIn(String, String),
}

impl Act {
    fn names(&self) -> Vec<&String> {
        match self {
            Act::Tau => vec![],
            Act::Out(x, y) | Act::BOut(x, y) | Act::BIn(x, y) => vec![x, y],
        }
    }
}

/// Late transitions by the textbook rules. Binders are always renamed to
/// fresh names, which discharges the freshness side conditions of par,
/// close and res.
pub fn steps(t: &T) -> Vec<(Act, T)> {
    match t {
        Nil => vec![],
        Tau(k) => vec![(Act::Tau, (**k).clone())],
        Out(x, y, k) => vec![(Act::Out(x.clone(), y.clone()), (**k).clone())],
        In(x, y, k) => {
            let z = fresh();
            vec![(Act::BIn(x.clone(), z.clone()), subst(k, y, &z))]
        }
        Match(x, y, k) => {
            if x == y {
                steps(k)
            } else {
                vec![]
            }
        }
        Sum(l, r) => {
            let mut v = steps(l);
            v.extend(steps(r));
            v
        }
        Par(l, r) => {
            let (sl, sr) = (steps(l), steps(r));
            let mut v = Vec::new();
            for (a, l2) in &sl {
                v.push((a.clone(), Par(b(l2.clone()), r.clone())));
            }
            for (a, r2) in &sr {
                v.push((a.clone(), Par(l.clone(), b(r2.clone()))));
            }
            for (a1, p1) in &sl {
                for (a2, p2) in &sr {
                    if let Some(t) = interact(a1, p1, a2, p2, false) {
                        v.push((Act::Tau, t));
                    }
                    if let Some(t) = interact(a2, p2, a1, p1, true) {
                        v.push((Act::Tau, t));
                    }
                }
            }
            v
        }
        Nu(y, k) => {
            let w = fresh();
            let k = subst(k, y, &w);
            let mut v = Vec::new();
            for (a, k2) in steps(&k) {
                match &a {
                    Act::Out(x, o) if *o == w && *x != w => v.push((Act::BOut(x.clone(), w.clone()), k2)),
                    _ if a.names().contains(&&w) => {}
                    _ => v.push((a, Nu(w.clone(), b(k2)))),
                }
            }
            v
        }
    }
}

/// Output `a1` from one side, input `a2` from the other. With `swapped` the
/// output came from the right component.
fn interact(a1: &Act, p1: &T, a2: &Act, p2: &T, swapped: bool) -> Option<T> {
    let pair = |o: T, i: T| if swapped { Par(b(i), b(o)) } else { Par(b(o), b(i)) };
    match (a1, a2) {
        (Act::Out(x, y), Act::BIn(x2, z)) if x == x2 => Some(pair(p1.clone(), subst(p2, z, y))),
        (Act::BOut(x, z1), Act::BIn(x2, z2)) if x == x2 => {
            let i = subst(p2, z2, z1);
            Some(Nu(z1.clone(), b(pair(p1.clone(), i))))
        }
        _ => None,
    }
}

/// The oracle's own translation into nameless terms. `env` gives free names.
pub fn to_process(t: &T, env: &BTreeMap<String, Name>) -> Process {
    conv(t, env, &mut Vec::new())
}

fn conv(t: &T, env: &BTreeMap<String, Name>, binders: &mut Vec<String>) -> Process {
    let name = |n: &String, binders: &Vec<String>| match binders.iter().rposition(|b| b == n) {
        Some(i) => Name::Bound((binders.len() - 1 - i) as u32),
        None => *env.get(n).unwrap_or_else(|| panic!("no encoding for free name {n}")),
    };
    match t {
        Nil => Process::Nil,
        Tau(k) => Process::tau(conv(k, env, binders)),
        Out(x, y, k) => Process::out(name(x, binders), name(y, binders), conv(k, env, binders)),
        Match(x, y, k) => Process::matching(name(x, binders), name(y, binders), conv(k, env, binders)),
        Sum(l, r) => Process::sum(conv(l, env, binders), conv(r, env, binders)),
        Par(l, r) => Process::par(conv(l, env, binders), conv(r, env, binders)),
        In(x, y, k) => {
            let x = name(x, binders);
            binders.push(y.clone());
            let k = conv(k, env, binders);
            binders.pop();
            Process::input(x, k)
        }
        Nu(y, k) => {
            binders.push(y.clone());
            let k = conv(k, env, binders);
            binders.pop();
            Process::nu(k)
        }
    }
}

/// Oracle transitions translated to (action, continuation) pairs, bound
/// continuations as abstraction bodies.
pub fn oracle_successors(t: &T, env: &BTreeMap<String, Name>) -> BTreeSet<(Action, Process)> {
    let nm = |n: &String| env[n];
    steps(t)
        .into_iter()
        .map(|(a, k)| match a {
            Act::Tau => (Action::Tau, to_process(&k, env)),
            Act::Out(x, y) => (Action::FreeOut(nm(&x), nm(&y)), to_process(&k, env)),
            Act::BOut(x, z) => (Action::BoundOut(nm(&x)), conv(&k, env, &mut vec![z])),
            Act::BIn(x, z) => (Action::BoundIn(nm(&x)), conv(&k, env, &mut vec![z])),
        })
        .collect()
}

/// Back from nameless terms, naming free names with `name`.
pub fn from_process(p: &Process, name: &dyn Fn(Name) -> String) -> T {
    decode(p, name, &mut Vec::new())
}

fn decode(p: &Process, name: &dyn Fn(Name) -> String, binders: &mut Vec<String>) -> T {
    let n = |x: &Name, binders: &Vec<String>| match x {
        Name::Bound(i) => binders[binders.len() - 1 - *i as usize].clone(),
        other => name(*other),
    };
    match p {
        Process::Nil => Nil,
        Process::Tau(k) => Tau(b(decode(k, name, binders))),
        Process::Out(x, y, k) => Out(n(x, binders), n(y, binders), b(decode(k, name, binders))),
        Process::Match(x, y, k) => Match(n(x, binders), n(y, binders), b(decode(k, name, binders))),
        Process::Sum(l, r) => Sum(b(decode(l, name, binders)), b(decode(r, name, binders))),
        Process::Par(l, r) => Par(b(decode(l, name, binders)), b(decode(r, name, binders))),
        Process::In(x, k) => {
            let x = n(x, binders);
            let y = format!("v{}", binders.len());
            binders.push(y.clone());
            let k = decode(k, name, binders);
            binders.pop();
            In(x, y, b(k))
        }
        Process::Nu(k) => {
            let y = format!("v{}", binders.len());
            binders.push(y.clone());
            let k = decode(k, name, binders);
            binders.pop();
            Nu(y, b(k))
        }
        Process::Bang(_) => panic!("oracle terms are replication free"),
    }
}

/// Rename binders by depth so alpha-equivalent terms print identically.
pub fn canon(t: &T) -> T {
    fn go(t: &T, d: usize) -> T {
        match t {
            Nil => Nil,
            Tau(k) => Tau(b(go(k, d))),
            Out(x, y, k) => Out(x.clone(), y.clone(), b(go(k, d))),
            Match(x, y, k) => Match(x.clone(), y.clone(), b(go(k, d))),
            Sum(l, r) => Sum(b(go(l, d)), b(go(r, d))),
            Par(l, r) => Par(b(go(l, d)), b(go(r, d))),
            In(x, y, k) => {
                let z = format!("%{d}");
                In(x.clone(), z.clone(), b(go(&subst(k, y, &z), d + 1)))
            }
            Nu(y, k) => {
                let z = format!("%{d}");
                Nu(z.clone(), b(go(&subst(k, y, &z), d + 1)))
            }
        }
    }
    go(t, 0)
}

// ---------------------------------------------------------------------------
// ground late and early bisimulation

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ground {
    Late,
    Early,
}

/// Strong late or early bisimilarity with all free names pairwise distinct.
/// Inputs are compared for every known name and one fresh one.
pub fn ground_bisim(p: &T, q: &T, mode: Ground) -> bool {
    GroundOracle { mode, memo: HashMap::new() }.bisim(p, q)
}

struct GroundOracle {
    mode: Ground,
    memo: HashMap<(T, T), bool>,
}

impl GroundOracle {
    fn bisim(&mut self, p: &T, q: &T) -> bool {
        let key = (canon(p), canon(q));
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = self.half(p, q, false) && self.half(q, p, true);
        self.memo.insert(key, v);
        v
    }

    /// Every move of `p` is answered by `q`. `flip` records that the pair
    /// is reversed so recursive calls keep the original orientation.
    fn half(&mut self, p: &T, q: &T, flip: bool) -> bool {
        let mut names: Vec<String> = p.free_names().union(&q.free_names()).cloned().collect();
        let extra = fresh();
        names.push(extra);
        let sq = steps(q);
        for (a, p2) in steps(p) {
            let ok = match &a {
                Act::Tau | Act::Out(..) => {
                    sq.iter().any(|(b2, q2)| *b2 == a && self.rec(p2.clone(), q2.clone(), flip))
                }
                Act::BOut(x, z) => sq.iter().any(|(b2, q2)| match b2 {
                    Act::BOut(x2, z2) if x2 == x => {
                        let w = fresh();
                        self.rec(subst(&p2, z, &w), subst(q2, z2, &w), flip)
                    }
                    _ => false,
                }),
                Act::BIn(x, z) => {
                    let cands: Vec<(String, T)> = sq
                        .iter()
                        .filter_map(|(b2, q2)| match b2 {
                            Act::BIn(x2, z2) if x2 == x => Some((z2.clone(), q2.clone())),
                            _ => None,
                        })
                        .collect();
                    let matches = |w: &String, (z2, q2): &(String, T), me: &mut Self| {
                        me.rec(subst(&p2, z, w), subst(q2, z2, w), flip)
                    };
                    match self.mode {
                        Ground::Late => cands.iter().any(|c| names.iter().all(|w| matches(w, c, self))),
                        Ground::Early => names.iter().all(|w| cands.iter().any(|c| matches(w, c, self))),
                    }
                }
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn rec(&mut self, p: T, q: T, flip: bool) -> bool {
        if flip {
            self.bisim(&q, &p)
        } else {
            self.bisim(&p, &q)
        }
    }
}

// ---------------------------------------------------------------------------
// open bisimulation by closing substitutions

pub type Dist = BTreeSet<(String, String)>;

pub fn dpair(a: &str, b: &str) -> (String, String) {
    if a < b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Open bisimilarity under distinction `d`: for every identification of
/// free names that respects `d`, every move is matched by the same action,
/// and extruded names become distinct from everything known.
pub fn open_bisim(p: &T, q: &T, d: &Dist) -> bool {
    OpenOracle { memo: HashMap::new() }.bisim(p, q, d)
}

struct OpenOracle {
    memo: HashMap<(T, T, Dist), bool>,
}

/// All partitions of `names` into blocks, as maps to block representatives.
pub fn partitions(names: &[String]) -> Vec<BTreeMap<String, String>> {
    let mut out = Vec::new();
    fn go(i: usize, names: &[String], reps: &mut Vec<String>, cur: &mut BTreeMap<String, String>, out: &mut Vec<BTreeMap<String, String>>) {
        if i == names.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..reps.len() {
            cur.insert(names[i].clone(), reps[k].clone());
            go(i + 1, names, reps, cur, out);
        }
        reps.push(names[i].clone());
        cur.insert(names[i].clone(), names[i].clone());
        go(i + 1, names, reps, cur, out);
        reps.pop();
        cur.remove(&names[i]);
    }
    go(0, names, &mut Vec::new(), &mut BTreeMap::new(), &mut out);
    out
}

fn apply_map(t: &T, m: &BTreeMap<String, String>) -> T {
    // rename through fresh intermediates so swaps cannot interfere
    let tmp: Vec<(String, String, String)> =
        m.iter().filter(|(k, v)| k != v).map(|(k, v)| (k.clone(), fresh(), v.clone())).collect();
    let mut t = t.clone();
    for (k, f, _) in &tmp {
        t = subst(&t, k, f);
    }
    for (_, f, v) in &tmp {
        t = subst(&t, f, v);
    }
    t
}

impl OpenOracle {
    fn bisim(&mut self, p: &T, q: &T, d: &Dist) -> bool {
        let fnq: BTreeSet<String> = p.free_names().union(&q.free_names()).cloned().collect();
        let d: Dist = d.iter().filter(|(a, b)| fnq.contains(a) && fnq.contains(b)).cloned().collect();
        let key = (canon(p), canon(q), d.clone());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let names: Vec<String> = fnq.into_iter().collect();
        let mut v = true;
        for sigma in partitions(&names) {
            if d.iter().any(|(a, b)| sigma[a] == sigma[b]) {
                continue;
            }
            let (p1, q1) = (apply_map(p, &sigma), apply_map(q, &sigma));
            let d1: Dist = d.iter().map(|(a, b)| dpair(&sigma[a], &sigma[b])).collect();
            if !(self.half(&p1, &q1, &d1, false) && self.half(&q1, &p1, &d1, true)) {
                v = false;
                break;
            }
        }
        self.memo.insert(key, v);
        v
    }

    fn half(&mut self, p: &T, q: &T, d: &Dist, flip: bool) -> bool {
        let known: BTreeSet<String> = p.free_names().union(&q.free_names()).cloned().collect();
        let sq = steps(q);
        for (a, p2) in steps(p) {
            let ok = sq.iter().any(|(b2, q2)| match (&a, b2) {
                (Act::Tau, Act::Tau) => self.rec(&p2, q2, d, flip),
                (Act::Out(..), Act::Out(..)) if a == *b2 => self.rec(&p2, q2, d, flip),
                (Act::BIn(x, z), Act::BIn(x2, z2)) if x == x2 => {
                    let w = fresh();
                    self.rec(&subst(&p2, z, &w), &subst(q2, z2, &w), d, flip)
                }
                (Act::BOut(x, z), Act::BOut(x2, z2)) if x == x2 => {
                    let w = fresh();
                    let mut d2 = d.clone();
                    for n in &known {
                        d2.insert(dpair(&w, n));
                    }
                    self.rec(&subst(&p2, z, &w), &subst(q2, z2, &w), &d2, flip)
                }
                _ => false,
            });
            if !ok {
                return false;
            }
        }
        true
    }

    fn rec(&mut self, p: &T, q: &T, d: &Dist, flip: bool) -> bool {
        if flip {
            self.bisim(q, p, d)
        } else {
            self.bisim(p, q, d)
        }
    }
}

// ---------------------------------------------------------------------------
// corpus

pub const POOL: [&str; 3] = ["a", "b", "c"];

/// Every term with exactly `size` constructors over free names from `pool`.
/// Binders are named by depth.
pub fn enumerate(size: usize, pool: &[&str]) -> Vec<T> {
    let mut memo = HashMap::new();
    enum_at(size, 0, pool, &mut memo)
}

fn enum_at(size: usize, depth: usize, pool: &[&str], memo: &mut HashMap<(usize, usize), Vec<T>>) -> Vec<T> {
    if let Some(v) = memo.get(&(size, depth)) {
        return v.clone();
    }
    let mut names: Vec<String> = pool.iter().map(|s| s.to_string()).collect();
    names.extend((0..depth).map(|i| format!("u{i}")));
    let mut out = Vec::new();
    if size == 0 {
        out.push(Nil);
    } else {
        for k in enum_at(size - 1, depth, pool, memo) {
            out.push(Tau(b(k.clone())));
            for x in &names {
                for y in &names {
                    out.push(Out(x.clone(), y.clone(), b(k.clone())));
                    if x < y {
                        out.push(Match(x.clone(), y.clone(), b(k.clone())));
                    }
                }
            }
        }
        let binder = format!("u{depth}");
        for k in enum_at(size - 1, depth + 1, pool, memo) {
            for x in &names {
                out.push(In(x.clone(), binder.clone(), b(k.clone())));
            }
            out.push(Nu(binder.clone(), b(k.clone())));
        }
        for ls in 0..size {
            let rs = size - 1 - ls;
            let left = enum_at(ls, depth, pool, memo);
            let right = enum_at(rs, depth, pool, memo);
            for l in &left {
                for r in &right {
                    out.push(Sum(b(l.clone()), b(r.clone())));
                    out.push(Par(b(l.clone()), b(r.clone())));
                }
            }
        }
    }
    memo.insert((size, depth), out.clone());
    out
}

/// Random term with at most `prefixes` action prefixes.
pub fn random_term<R: Rng>(rng: &mut R, prefixes: usize, pool: &[&str]) -> T {
    random_at(rng, prefixes, pool, &mut Vec::new())
}

fn random_at<R: Rng>(rng: &mut R, budget: usize, pool: &[&str], bound: &mut Vec<String>) -> T {
    let pick = |rng: &mut R, bound: &Vec<String>| {
        let n = pool.len() + bound.len();
        let i = rng.gen_range(0..n);
        if i < pool.len() {
            pool[i].to_string()
        } else {
            bound[i - pool.len()].clone()
        }
    };
    if budget == 0 {
        return Nil;
    }
    match rng.gen_range(0..100) {
        0..=9 => Nil,
        10..=21 => Tau(b(random_at(rng, budget - 1, pool, bound))),
        22..=39 => {
            let (x, y) = (pick(rng, bound), pick(rng, bound));
            Out(x, y, b(random_at(rng, budget - 1, pool, bound)))
        }
        40..=56 => {
            let x = pick(rng, bound);
            let y = format!("u{}", bound.len());
            bound.push(y.clone());
            let k = random_at(rng, budget - 1, pool, bound);
            bound.pop();
            In(x, y, b(k))
        }
        57..=64 => {
            let (x, y) = (pick(rng, bound), pick(rng, bound));
            Match(x, y, b(random_at(rng, budget, pool, bound)))
        }
        65..=72 => {
            let y = format!("u{}", bound.len());
            bound.push(y.clone());
            let k = random_at(rng, budget, pool, bound);
            bound.pop();
            Nu(y, b(k))
        }
        73..=86 => {
            let l = rng.gen_range(0..=budget);
            Sum(b(random_at(rng, l, pool, bound)), b(random_at(rng, budget - l, pool, bound)))
        }
        _ => {
            let l = rng.gen_range(0..=budget);
            Par(b(random_at(rng, l, pool, bound)), b(random_at(rng, budget - l, pool, bound)))
        }
    }
}

/// A term related to `t` by a small edit or an algebraic law, so that random
/// pairs are often, but not always, equivalent.
pub fn variant<R: Rng>(rng: &mut R, t: &T, pool: &[&str]) -> T {
    match rng.gen_range(0..7) {
        0 => match t {
            Sum(l, r) => Sum(r.clone(), l.clone()),
            Par(l, r) => Par(r.clone(), l.clone()),
            _ => Sum(b(t.clone()), b(Nil)),
        },
        1 => Sum(b(t.clone()), b(t.clone())),
        2 => Par(b(t.clone()), b(Nil)),
        3 => {
            let x = pool[rng.gen_range(0..pool.len())].to_string();
            Match(x.clone(), x, b(t.clone()))
        }
        4 => expand_one(t),
        5 => mutate(rng, t, pool),
        _ => random_term(rng, t.prefixes().max(1), pool),
    }
}

/// Interleave the first prefixes of a parallel composition, when possible.
fn expand_one(t: &T) -> T {
    match t {
        Par(l, r) => match (&**l, &**r) {
            (Tau(k1), Tau(k2)) => {
                Sum(b(Tau(b(Par(k1.clone(), r.clone())))), b(Tau(b(Par(l.clone(), k2.clone())))))
            }
            _ => t.clone(),
        },
        Tau(k) => Tau(b(expand_one(k))),
        _ => t.clone(),
    }
}

fn mutate<R: Rng>(rng: &mut R, t: &T, pool: &[&str]) -> T {
    match t {
        Nil => Tau(b(Nil)),
        Tau(k) => {
            if rng.gen_bool(0.5) {
                (**k).clone()
            } else {
                Tau(b(mutate(rng, k, pool)))
            }
        }
        Out(x, y, k) => {
            if rng.gen_bool(0.5) {
                let z = pool[rng.gen_range(0..pool.len())].to_string();
                Out(x.clone(), z, k.clone())
            } else {
                Out(x.clone(), y.clone(), b(mutate(rng, k, pool)))
            }
        }
        In(x, y, k) => In(x.clone(), y.clone(), b(mutate(rng, k, pool))),
        Match(x, y, k) => {
            if rng.gen_bool(0.5) {
                (**k).clone()
            } else {
                Match(x.clone(), y.clone(), b(mutate(rng, k, pool)))
            }
        }
        Sum(l, r) => {
            if rng.gen_bool(0.5) {
                Sum(b(mutate(rng, l, pool)), r.clone())
            } else {
                Sum(l.clone(), b(mutate(rng, r, pool)))
            }
        }
        Par(l, r) => {
            if rng.gen_bool(0.5) {
                Par(b(mutate(rng, l, pool)), r.clone())
            } else {
                Sum(l.clone(), r.clone())
            }
        }
        Nu(y, k) => Nu(y.clone(), b(mutate(rng, k, pool))),
    }
}

/// Environment mapping pool names to consecutive nabla levels.
pub fn nabla_env(names: &[&str]) -> BTreeMap<String, Name> {
    names.iter().enumerate().map(|(i, n)| (n.to_string(), Name::Nabla(i as u32 + 1))).collect()
}

pub fn prefix_text(quant: &str, names: &[&str]) -> String {
    names.iter().map(|n| format!("{quant} {n}")).collect::<Vec<_>>().join(", ")
}

// ---------------------------------------------------------------------------
// formulas

/// Random formula of modal depth at most `depth` over `names` and the
/// binders in scope. With `lm` only the late sublogic is produced.
pub fn random_formula<R: Rng>(rng: &mut R, depth: usize, names: &[Name], lm: bool) -> Formula {
    formula_at(rng, depth, names, 0, lm)
}

fn formula_at<R: Rng>(rng: &mut R, depth: usize, names: &[Name], binders: u32, lm: bool) -> Formula {
    let pick = |rng: &mut R| {
        let i = rng.gen_range(0..names.len() + binders as usize);
        if i < names.len() {
            names[i]
        } else {
            Name::Bound((i - names.len()) as u32)
        }
    };
    let leaf = |rng: &mut R| if rng.gen_bool(0.6) { Formula::True } else { Formula::False };
    if depth == 0 {
        return match rng.gen_range(0..4) {
            0 => Formula::match_dia(pick(rng), pick(rng), Formula::True),
            1 => Formula::match_box(pick(rng), pick(rng), Formula::False),
            _ => leaf(rng),
        };
    }
    let sub = |rng: &mut R, b: u32| Box::new(formula_at(rng, depth - 1, names, b, lm));
    let kind = |rng: &mut R| {
        if lm {
            InKind::Late
        } else {
            [InKind::Basic, InKind::Late, InKind::Early][rng.gen_range(0..3)]
        }
    };
    match rng.gen_range(0..13) {
        0 => leaf(rng),
        1 => Formula::And(sub(rng, binders), sub(rng, binders)),
        2 => Formula::Or(sub(rng, binders), sub(rng, binders)),
        3 => Formula::MatchDia(pick(rng), pick(rng), sub(rng, binders)),
        4 => Formula::MatchBox(pick(rng), pick(rng), sub(rng, binders)),
        5 => Formula::FreeDia(Action::Tau, sub(rng, binders)),
        6 => Formula::FreeBox(Action::Tau, sub(rng, binders)),
        7 => Formula::FreeDia(Action::FreeOut(pick(rng), pick(rng)), sub(rng, binders)),
        8 => Formula::FreeBox(Action::FreeOut(pick(rng), pick(rng)), sub(rng, binders)),
        9 => Formula::OutDia(pick(rng), sub(rng, binders + 1)),
        10 => Formula::OutBox(pick(rng), sub(rng, binders + 1)),
        11 => Formula::InDia(kind(rng), pick(rng), sub(rng, binders + 1)),
        _ => Formula::InBox(kind(rng), pick(rng), sub(rng, binders + 1)),
    }
}
