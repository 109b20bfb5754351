//! Name occurrences.
//!
//! A name is one of three kinds:
//!
//! * `Bound(i)` is a de Bruijn index pointing at the `i`-th enclosing binder
//!   (input, restriction, or a binding modality in a formula).
//! * `Nabla(l)` is a locally scoped constant introduced by a `nabla`
//!   quantifier. Levels inside one judgment are `1..=depth`, and two distinct
//!   levels always denote distinct names.
//! * `Eigen(e)` is an eigenvariable standing for an arbitrary name. Its
//!   `ceiling` is the number of nabla levels it may depend on, so it can only
//!   ever be instantiated with `Nabla(l)` for `l <= ceiling`.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Eigen {
    pub id: u32,
    pub ceiling: u32,
}

impl Eigen {
    pub fn new(id: u32, ceiling: u32) -> Self {
        Eigen { id, ceiling }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Name {
    Bound(u32),
    Nabla(u32),
    Eigen(Eigen),
}

impl Name {
    pub fn eigen(id: u32, ceiling: u32) -> Name {
        Name::Eigen(Eigen::new(id, ceiling))
    }

    pub fn is_bound(self) -> bool {
        matches!(self, Name::Bound(_))
    }

    pub fn is_free(self) -> bool {
        !self.is_bound()
    }

    pub fn as_eigen(self) -> Option<Eigen> {
        match self {
            Name::Eigen(e) => Some(e),
            _ => None,
        }
    }

    /// True when no level-sound instantiation can ever make `self` and
    /// `other` equal.
    pub fn provably_distinct(self, other: Name) -> bool {
        match (self, other) {
            (Name::Nabla(a), Name::Nabla(b)) => a != b,
            (Name::Eigen(e), Name::Nabla(l)) | (Name::Nabla(l), Name::Eigen(e)) => l > e.ceiling,
            _ => false,
        }
    }

    /// Instantiate the binder at `depth` with `with`; looser indices shift down.
    pub(crate) fn instantiate_at(self, depth: u32, with: Name) -> Name {
        match self {
            Name::Bound(i) if i == depth => with,
            Name::Bound(i) if i > depth => Name::Bound(i - 1),
            n => n,
        }
    }

    /// Turn occurrences of `target` into a reference to a new binder at
    /// `depth`; loose indices shift up to make room.
    pub(crate) fn abstract_at(self, depth: u32, target: Name) -> Name {
        match self {
            Name::Bound(i) if i >= depth => Name::Bound(i + 1),
            n if n == target => Name::Bound(depth),
            n => n,
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Name::Bound(i) => write!(f, "#{i}"),
            Name::Nabla(l) => write!(f, "∇{l}"),
            Name::Eigen(e) => write!(f, "E{}^{}", e.id, e.ceiling),
        }
    }
}

/// Anything that contains names, possibly under binders.
///
/// `map_names_at` hands the callback every name occurrence together with the
/// number of binders crossed to reach it. Everything else here is derived.
pub trait Names: Sized {
    fn map_names_at(&self, depth: u32, f: &mut dyn FnMut(Name, u32) -> Name) -> Self;

    fn visit_names_at(&self, depth: u32, f: &mut dyn FnMut(Name, u32));

    fn map_names(&self, f: &mut dyn FnMut(Name, u32) -> Name) -> Self {
        self.map_names_at(0, f)
    }

    /// Treat `self` as the body of a one-name abstraction and fill the hole.
    fn instantiate(&self, with: Name) -> Self {
        self.map_names(&mut |n, d| n.instantiate_at(d, with))
    }

    /// Inverse of [`Names::instantiate`]: abstract every occurrence of `target`.
    fn abstract_over(&self, target: Name) -> Self {
        self.map_names(&mut |n, d| n.abstract_at(d, target))
    }

    /// Rename free names without touching bound ones.
    fn rename_free(&self, f: &mut dyn FnMut(Name) -> Name) -> Self {
        self.map_names(&mut |n, _| if n.is_bound() { n } else { f(n) })
    }

    /// Distinct free (nabla or eigen) names in order of first occurrence.
    fn free_names(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.visit_names_at(0, &mut |n, _| {
            if n.is_free() && !out.contains(&n) {
                out.push(n);
            }
        });
        out
    }

    fn mentions(&self, name: Name) -> bool {
        let mut found = false;
        self.visit_names_at(0, &mut |n, _| found |= n == name);
        found
    }

    /// Highest nabla level occurring free, or 0.
    fn max_level(&self) -> u32 {
        let mut m = 0;
        self.visit_names_at(0, &mut |n, _| {
            if let Name::Nabla(l) = n {
                m = m.max(l);
            }
        });
        m
    }

    /// True when every de Bruijn index is captured by a binder inside `self`.
    fn is_closed_at(&self, depth: u32) -> bool {
        let mut ok = true;
        self.visit_names_at(depth, &mut |n, d| {
            if let Name::Bound(i) = n {
                ok &= i < d;
            }
        });
        ok
    }
}

impl Names for Name {
    fn map_names_at(&self, depth: u32, f: &mut dyn FnMut(Name, u32) -> Name) -> Self {
        f(*self, depth)
    }

    fn visit_names_at(&self, depth: u32, f: &mut dyn FnMut(Name, u32)) {
        f(*self, depth)
    }
}
