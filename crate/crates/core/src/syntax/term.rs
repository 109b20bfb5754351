use std::fmt;

/// Surface process syntax with named binders, as produced by the parser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Nil,
    Tau(Box<Term>),
    Out(String, String, Box<Term>),
    In(String, String, Box<Term>),
    Match(String, String, Box<Term>),
    Sum(Box<Term>, Box<Term>),
    Par(Box<Term>, Box<Term>),
    Nu(String, Box<Term>),
    Bang(Box<Term>),
    /// Use of a declared process, `Ident(args)`.
    Call(String, Vec<String>),
}

impl Term {
    /// Free names, in order of first occurrence. Calls contribute their
    /// arguments.
    pub fn free_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let note = |n: &String, bound: &Vec<String>, out: &mut Vec<String>| {
            if !bound.contains(n) && !out.contains(n) {
                out.push(n.clone());
            }
        };
        match self {
            Term::Nil => {}
            Term::Tau(p) | Term::Bang(p) => p.collect_free(bound, out),
            Term::Out(x, y, p) | Term::Match(x, y, p) => {
                note(x, bound, out);
                note(y, bound, out);
                p.collect_free(bound, out);
            }
            Term::In(x, y, p) => {
                note(x, bound, out);
                bound.push(y.clone());
                p.collect_free(bound, out);
                bound.pop();
            }
            Term::Nu(y, p) => {
                bound.push(y.clone());
                p.collect_free(bound, out);
                bound.pop();
            }
            Term::Sum(l, r) | Term::Par(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Term::Call(_, args) => {
                for a in args {
                    note(a, bound, out);
                }
            }
        }
    }

    pub fn calls(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_calls(&mut out);
        out
    }

    fn collect_calls(&self, out: &mut Vec<String>) {
        match self {
            Term::Nil => {}
            Term::Tau(p)
            | Term::Bang(p)
            | Term::Out(_, _, p)
            | Term::Match(_, _, p)
            | Term::In(_, _, p)
            | Term::Nu(_, p) => p.collect_calls(out),
            Term::Sum(l, r) | Term::Par(l, r) => {
                l.collect_calls(out);
                r.collect_calls(out);
            }
            Term::Call(f, _) => out.push(f.clone()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Nil => write!(f, "0"),
            Term::Tau(p) => write!(f, "tau.{p}"),
            Term::Out(x, y, p) => write!(f, "{x}!{y}.{p}"),
            Term::In(x, y, p) => write!(f, "{x}?({y}).{p}"),
            Term::Match(x, y, p) => write!(f, "[{x}={y}]{p}"),
            Term::Sum(l, r) => write!(f, "({l} + {r})"),
            Term::Par(l, r) => write!(f, "({l} | {r})"),
            Term::Nu(y, p) => write!(f, "(nu {y}){p}"),
            Term::Bang(p) => write!(f, "!{p}"),
            Term::Call(g, args) => write!(f, "{g}({})", args.join(",")),
        }
    }
}
