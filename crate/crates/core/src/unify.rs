//! Level-checked unification at name type, substitutions and distinctions.
//!
//! Raising is encoded by eigenvariable ceilings: `E(id, c)` may only be
//! instantiated with nabla levels `<= c`, or with eigenvariables whose
//! ceiling is `<= c`. With names as the only instantiable sort, a complete
//! set of unifiers is always empty or a single most general unifier.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::name::{Eigen, Name, Names};

/// Idempotent, level-sound map from eigenvariables to names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Substitution {
    bindings: BTreeMap<u32, (Eigen, Name)>,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution::default()
    }

    /// Single binding. Panics if it is not level-sound or is trivial.
    pub fn single(var: Eigen, to: Name) -> Self {
        assert!(level_sound(var, to), "binding {var:?} to {to:?} is not level-sound");
        assert_ne!(Name::Eigen(var), to, "trivial binding");
        let mut s = Substitution::default();
        s.bindings.insert(var.id, (var, to));
        s
    }

    pub fn is_identity(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn bindings(&self) -> impl Iterator<Item = (Eigen, Name)> + '_ {
        self.bindings.values().copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = Eigen> + '_ {
        self.bindings.values().map(|(e, _)| *e)
    }

    pub fn name(&self, n: Name) -> Name {
        match n {
            Name::Eigen(e) => self.bindings.get(&e.id).map(|(_, t)| *t).unwrap_or(n),
            n => n,
        }
    }

    pub fn apply<T: Names>(&self, t: &T) -> T {
        if self.is_identity() {
            return t.map_names(&mut |n, _| n);
        }
        t.map_names(&mut |n, _| self.name(n))
    }

    pub fn is_level_sound(&self) -> bool {
        self.bindings.values().all(|(e, n)| level_sound(*e, *n))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.bindings.values().map(|(e, n)| format!("{}:={}", Name::Eigen(*e), n)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn level_sound(var: Eigen, to: Name) -> bool {
    match to {
        Name::Nabla(l) => l <= var.ceiling,
        Name::Eigen(e) => e.ceiling <= var.ceiling,
        Name::Bound(_) => false,
    }
}

/// Most general level-sound unifier of two free names, if any.
///
/// Between two eigenvariables the one with the larger ceiling is bound to
/// the other; on equal ceilings the lower id is bound to the higher.
pub fn unify_names(a: Name, b: Name) -> Option<Substitution> {
    match (a, b) {
        _ if a == b => Some(Substitution::identity()),
        (Name::Nabla(_), Name::Nabla(_)) => None,
        (Name::Eigen(e), Name::Nabla(l)) | (Name::Nabla(l), Name::Eigen(e)) => {
            (l <= e.ceiling).then(|| Substitution::single(e, Name::Nabla(l)))
        }
        (Name::Eigen(e1), Name::Eigen(e2)) => {
            let (var, to) = if (e1.ceiling, e2.id) > (e2.ceiling, e1.id) { (e1, e2) } else { (e2, e1) };
            Some(Substitution::single(var, Name::Eigen(to)))
        }
        _ => None,
    }
}

/// Unify two name sequences pointwise, threading the substitution.
pub fn unify_all(pairs: &[(Name, Name)]) -> Option<Substitution> {
    let mut acc = Substitution::identity();
    for &(a, b) in pairs {
        let step = unify_names(acc.name(a), acc.name(b))?;
        acc = compose(&step, &acc);
    }
    Some(acc)
}

/// `outer ∘ inner`: apply `inner` first, then `outer`. The result is
/// normalized back to idempotent form.
pub fn compose(outer: &Substitution, inner: &Substitution) -> Substitution {
    let mut bindings: BTreeMap<u32, (Eigen, Name)> = BTreeMap::new();
    for (e, n) in inner.bindings() {
        bindings.insert(e.id, (e, outer.name(n)));
    }
    for (e, n) in outer.bindings() {
        bindings.entry(e.id).or_insert((e, n));
    }
    // chase chains until no range element is in the domain
    loop {
        let snapshot = bindings.clone();
        let mut changed = false;
        for (_, n) in bindings.values_mut() {
            if let Name::Eigen(t) = *n {
                if let Some((_, m)) = snapshot.get(&t.id) {
                    *n = *m;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    bindings.retain(|_, (e, n)| Name::Eigen(*e) != *n);
    Substitution { bindings }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DistinctionError {
    #[error("a distinction cannot relate a name to itself ({0})")]
    Reflexive(Name),
    #[error("distinctions relate free names only")]
    BoundName,
}

/// Finite symmetric irreflexive relation on free names, stored as
/// canonically ordered pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Distinction {
    pairs: BTreeSet<(Name, Name)>,
}

impl Distinction {
    pub fn new(pairs: impl IntoIterator<Item = (Name, Name)>) -> Result<Self, DistinctionError> {
        let mut d = Distinction::default();
        for (a, b) in pairs {
            d.insert(a, b)?;
        }
        Ok(d)
    }

    pub fn insert(&mut self, a: Name, b: Name) -> Result<(), DistinctionError> {
        if a.is_bound() || b.is_bound() {
            return Err(DistinctionError::BoundName);
        }
        if a == b {
            return Err(DistinctionError::Reflexive(a));
        }
        self.pairs.insert(if a < b { (a, b) } else { (b, a) });
        Ok(())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Name, Name)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn contains(&self, a: Name, b: Name) -> bool {
        self.pairs.contains(&if a < b { (a, b) } else { (b, a) })
    }

    /// Image under `theta`, or `None` when `theta` identifies a related pair.
    pub fn apply(&self, theta: &Substitution) -> Option<Distinction> {
        let mut pairs = BTreeSet::new();
        for (a, b) in self.pairs() {
            let (a, b) = (theta.name(a), theta.name(b));
            if a == b {
                return None;
            }
            pairs.insert(if a < b { (a, b) } else { (b, a) });
        }
        Some(Distinction { pairs })
    }

    /// Rename names with an arbitrary injective map.
    pub fn rename(&self, f: &mut dyn FnMut(Name) -> Name) -> Distinction {
        let pairs = self
            .pairs()
            .map(|(a, b)| {
                let (a, b) = (f(a), f(b));
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        Distinction { pairs }
    }

    /// Drop pairs that levels already keep apart and pairs mentioning a name
    /// outside `live`; neither can ever be violated.
    pub fn restrict(&self, live: &[Name]) -> Distinction {
        let pairs = self
            .pairs()
            .filter(|(a, b)| !a.provably_distinct(*b) && live.contains(a) && live.contains(b))
            .collect();
        Distinction { pairs }
    }
}

/// True iff no related pair is made equal by `theta`.
pub fn respects(theta: &Substitution, d: &Distinction) -> bool {
    d.pairs().all(|(a, b)| theta.name(a) != theta.name(b))
}
