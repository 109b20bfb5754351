use std::collections::BTreeMap;

use super::prefix::Prefix;
use super::{Action, Process};
use crate::name::Name;

const BINDER_NAMES: &[&str] = &["y", "z", "u", "v", "w", "s", "t"];

/// Surface names for free names: prefix entries first, then generated
/// names for eigenvariables and nabla levels created during search.
#[derive(Clone, Debug, Default)]
pub struct Naming {
    names: BTreeMap<Name, String>,
}

impl Naming {
    pub fn from_prefix(prefix: &Prefix) -> Self {
        Naming { names: prefix.encoded().into_iter().map(|(s, n)| (n, s)).collect() }
    }

    pub fn insert(&mut self, name: Name, text: impl Into<String>) {
        self.names.insert(name, text.into());
    }

    fn taken(&self, s: &str) -> bool {
        self.names.values().any(|v| v == s)
    }

    /// Text for a free name, generating `nL` / `wID` for unnamed ones.
    pub fn name(&self, n: Name) -> String {
        if let Some(s) = self.names.get(&n) {
            return s.clone();
        }
        let mut s = match n {
            Name::Nabla(l) => format!("n{l}"),
            Name::Eigen(e) => format!("w{}", e.id),
            Name::Bound(i) => return format!("#{i}"),
        };
        while self.taken(&s) {
            s.push('_');
        }
        s
    }

    /// A binder name that clashes with no free name and no enclosing binder.
    pub fn fresh_binder(&self, scope: &[String]) -> String {
        let ok = |s: &str| !self.taken(s) && !scope.iter().any(|b| b == s);
        for c in BINDER_NAMES {
            if ok(c) {
                return c.to_string();
            }
        }
        (1..)
            .flat_map(|i| BINDER_NAMES.iter().map(move |c| format!("{c}{i}")))
            .find(|s| ok(s))
            .expect("infinite supply")
    }

    fn render(&self, n: Name, scope: &[String]) -> String {
        match n {
            Name::Bound(i) => scope
                .len()
                .checked_sub(i as usize + 1)
                .map(|k| scope[k].clone())
                .unwrap_or_else(|| format!("#{i}")),
            n => self.name(n),
        }
    }

    pub fn process(&self, p: &Process) -> String {
        let mut out = String::new();
        self.proc_at(p, &mut Vec::new(), &mut out);
        out
    }

    /// Render the body of a one-name abstraction, returning the binder name too.
    pub fn abstraction(&self, body: &Process) -> (String, String) {
        let b = self.fresh_binder(&[]);
        let mut scope = vec![b.clone()];
        let mut out = String::new();
        self.proc_at(body, &mut scope, &mut out);
        (b, out)
    }

    fn proc_at(&self, p: &Process, scope: &mut Vec<String>, out: &mut String) {
        match p {
            Process::Sum(l, r) => {
                self.wrapped(l, matches!(**l, Process::Sum(..)), scope, out);
                out.push_str(" + ");
                self.proc_at(r, scope, out);
            }
            Process::Par(l, r) => {
                self.wrapped(l, matches!(**l, Process::Sum(..) | Process::Par(..)), scope, out);
                out.push_str(" | ");
                self.wrapped(r, matches!(**r, Process::Sum(..)), scope, out);
            }
            _ => self.unary(p, scope, out),
        }
    }

    fn wrapped(&self, p: &Process, parens: bool, scope: &mut Vec<String>, out: &mut String) {
        if parens {
            out.push('(');
            self.proc_at(p, scope, out);
            out.push(')');
        } else {
            self.proc_at(p, scope, out);
        }
    }

    fn cont(&self, p: &Process, scope: &mut Vec<String>, out: &mut String) {
        self.wrapped(p, matches!(p, Process::Sum(..) | Process::Par(..)), scope, out);
    }

    fn under(&self, body: &Process, scope: &mut Vec<String>, out: &mut String) -> String {
        let b = self.fresh_binder(scope);
        scope.push(b.clone());
        let mut inner = String::new();
        self.cont(body, scope, &mut inner);
        scope.pop();
        out.push_str(&inner);
        b
    }

    fn unary(&self, p: &Process, scope: &mut Vec<String>, out: &mut String) {
        match p {
            Process::Nil => out.push('0'),
            Process::Tau(k) => {
                out.push_str("tau.");
                self.cont(k, scope, out);
            }
            Process::Out(x, y, k) => {
                out.push_str(&format!("{}!{}.", self.render(*x, scope), self.render(*y, scope)));
                self.cont(k, scope, out);
            }
            Process::In(x, body) => {
                let head = self.render(*x, scope);
                let mut inner = String::new();
                let b = self.under(body, scope, &mut inner);
                out.push_str(&format!("{head}?({b}).{inner}"));
            }
            Process::Match(x, y, k) => {
                out.push_str(&format!("[{}={}]", self.render(*x, scope), self.render(*y, scope)));
                self.cont(k, scope, out);
            }
            Process::Nu(body) => match &**body {
                Process::Out(x, Name::Bound(0), k) if *x != Name::Bound(0) => {
                    // (nu y) x!y.P is written x!(y).P
                    let b = self.fresh_binder(scope);
                    let head = self.render(*x, &scope.clone().into_iter().chain([b.clone()]).collect::<Vec<_>>());
                    scope.push(b.clone());
                    let mut inner = String::new();
                    self.cont(k, scope, &mut inner);
                    scope.pop();
                    out.push_str(&format!("{head}!({b}).{inner}"));
                }
                _ => {
                    let mut inner = String::new();
                    let b = self.under(body, scope, &mut inner);
                    out.push_str(&format!("(nu {b}){inner}"));
                }
            },
            Process::Bang(k) => {
                out.push('!');
                self.cont(k, scope, out);
            }
            Process::Sum(..) | Process::Par(..) => self.wrapped(p, true, scope, out),
        }
    }

    /// Action text; `binder` names the bound object of a bound action.
    pub fn action(&self, a: Action, binder: &str) -> String {
        match a {
            Action::Tau => "tau".into(),
            Action::FreeOut(x, y) => format!("{}!{}", self.name(x), self.name(y)),
            Action::FreeIn(x, y) => format!("{}?{}", self.name(x), self.name(y)),
            Action::BoundOut(x) => format!("{}!({binder})", self.name(x)),
            Action::BoundIn(x) => format!("{}?({binder})", self.name(x)),
        }
    }
}

/// Render a process with free names taken from `naming`.
pub fn pretty(p: &Process, naming: &Prefix) -> String {
    Naming::from_prefix(naming).process(p)
}

pub fn pretty_action(a: Action, naming: &Prefix) -> String {
    Naming::from_prefix(naming).action(a, "_")
}
