//! Licenses: regular expressions over actions.
//!
//! A license denotes the set of complete action sequences it allows. The
//! operations here are the algebra the rest of the crate is built on:
//! nullability, first-sets, Brzozowski derivatives, emptiness, viability of
//! a prefix, and a bounded enumeration of the trace set.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::action::{Action, Trace};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum License {
    /// The empty language. Internal only.
    Zero,
    /// The language `{ε}`. Internal only.
    One,
    Atom(Action),
    Concat(Arc<License>, Arc<License>),
    Union(Arc<License>, Arc<License>),
    Star(Arc<License>),
}

impl License {
    pub fn atom(a: Action) -> Self {
        License::Atom(a)
    }

    /// Raw concatenation, no simplification.
    pub fn concat_raw(l: License, r: License) -> Self {
        License::Concat(Arc::new(l), Arc::new(r))
    }

    pub fn union_raw(l: License, r: License) -> Self {
        License::Union(Arc::new(l), Arc::new(r))
    }

    pub fn star_raw(l: License) -> Self {
        License::Star(Arc::new(l))
    }

    /// Concatenation with `0·ℓ = ℓ·0 = 0` and `1·ℓ = ℓ·1 = ℓ`.
    pub fn concat(l: License, r: License) -> Self {
        match (&l, &r) {
            (License::Zero, _) | (_, License::Zero) => License::Zero,
            (License::One, _) => r,
            (_, License::One) => l,
            _ => License::concat_raw(l, r),
        }
    }

    /// Union with `ℓ ∪ 0 = 0 ∪ ℓ = ℓ` and `ℓ ∪ ℓ = ℓ`.
    pub fn union(l: License, r: License) -> Self {
        match (&l, &r) {
            (License::Zero, _) => r,
            (_, License::Zero) => l,
            _ if l == r => l,
            _ => License::union_raw(l, r),
        }
    }

    pub fn star(l: License) -> Self {
        match l {
            License::Zero | License::One => License::One,
            License::Star(_) => l,
            _ => License::star_raw(l),
        }
    }

    /// Left-nested concatenation of a sequence; the empty sequence is `One`.
    pub fn seq(items: impl IntoIterator<Item = License>) -> Self {
        items
            .into_iter()
            .reduce(License::concat)
            .unwrap_or(License::One)
    }

    /// Left-nested union; the empty union is `Zero`.
    pub fn any(items: impl IntoIterator<Item = License>) -> Self {
        items
            .into_iter()
            .reduce(License::union)
            .unwrap_or(License::Zero)
    }

    /// Rebuilds the term bottom-up through the simplifying constructors.
    /// The result is either `Zero` or free of `Zero`.
    pub fn simplify(&self) -> License {
        match self {
            License::Zero | License::One | License::Atom(_) => self.clone(),
            License::Concat(l, r) => License::concat(l.simplify(), r.simplify()),
            License::Union(l, r) => License::union(l.simplify(), r.simplify()),
            License::Star(l) => License::star(l.simplify()),
        }
    }

    /// Whether `Zero` or `One` occurs anywhere in the term.
    pub fn has_constants(&self) -> bool {
        match self {
            License::Zero | License::One => true,
            License::Atom(_) => false,
            License::Concat(l, r) | License::Union(l, r) => l.has_constants() || r.has_constants(),
            License::Star(l) => l.has_constants(),
        }
    }

    /// Number of nodes in the term.
    pub fn size(&self) -> usize {
        match self {
            License::Zero | License::One | License::Atom(_) => 1,
            License::Concat(l, r) | License::Union(l, r) => 1 + l.size() + r.size(),
            License::Star(l) => 1 + l.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            License::Zero | License::One | License::Atom(_) => 1,
            License::Concat(l, r) | License::Union(l, r) => 1 + l.depth().max(r.depth()),
            License::Star(l) => 1 + l.depth(),
        }
    }

    /// Every action occurring as an atom.
    pub fn alphabet(&self) -> BTreeSet<Action> {
        let mut out = BTreeSet::new();
        self.collect_alphabet(&mut out);
        out
    }

    fn collect_alphabet(&self, out: &mut BTreeSet<Action>) {
        match self {
            License::Zero | License::One => {}
            License::Atom(a) => {
                out.insert(a.clone());
            }
            License::Concat(l, r) | License::Union(l, r) => {
                l.collect_alphabet(out);
                r.collect_alphabet(out);
            }
            License::Star(l) => l.collect_alphabet(out),
        }
    }

    /// `ε ∈ L⟦ℓ⟧`.
    pub fn nullable(&self) -> bool {
        match self {
            License::Zero | License::Atom(_) => false,
            License::One | License::Star(_) => true,
            License::Concat(l, r) => l.nullable() && r.nullable(),
            License::Union(l, r) => l.nullable() || r.nullable(),
        }
    }

    /// The first-set `S(ℓ)`.
    pub fn first_actions(&self) -> BTreeSet<Action> {
        match self {
            License::Zero | License::One => BTreeSet::new(),
            License::Atom(a) => BTreeSet::from([a.clone()]),
            License::Concat(l, r) => {
                let mut s = l.first_actions();
                if l.nullable() {
                    s.extend(r.first_actions());
                }
                s
            }
            License::Union(l, r) => {
                let mut s = l.first_actions();
                s.extend(r.first_actions());
                s
            }
            License::Star(l) => l.first_actions(),
        }
    }

    /// The Brzozowski derivative `D_a(ℓ)`.
    pub fn derivative(&self, a: &Action) -> License {
        match self {
            License::Zero | License::One => License::Zero,
            License::Atom(b) => {
                if a == b {
                    License::One
                } else {
                    License::Zero
                }
            }
            License::Concat(l, r) => {
                let left = License::concat(l.derivative(a), (**r).clone());
                if l.nullable() {
                    License::union(left, r.derivative(a))
                } else {
                    left
                }
            }
            License::Union(l, r) => License::union(l.derivative(a), r.derivative(a)),
            License::Star(l) => License::concat(l.derivative(a), self.clone()),
        }
    }

    /// Derivative with respect to a whole trace.
    pub fn derivative_trace(&self, s: &[Action]) -> License {
        s.iter().fold(self.simplify(), |l, a| l.derivative(a))
    }

    /// `L⟦ℓ⟧ = ∅`.
    pub fn is_empty(&self) -> bool {
        match self {
            License::Zero => true,
            License::One | License::Atom(_) | License::Star(_) => false,
            License::Concat(l, r) => l.is_empty() || r.is_empty(),
            License::Union(l, r) => l.is_empty() && r.is_empty(),
        }
    }

    /// `ℓ·⊥*`, whose prefixes are exactly the viable sequences of `ℓ`.
    pub fn padded(&self) -> License {
        License::concat(self.simplify(), License::star(License::Atom(Action::Bot)))
    }

    /// Whether `s` is a prefix of some trace of `ℓ` followed by infinitely many `⊥`.
    pub fn viable(&self, s: &[Action]) -> bool {
        !self.padded().derivative_trace(s).is_empty()
    }

    /// `S^k(ℓ)`: the length-`k` prefixes of traces of `ℓ`, for `k ≥ 1`.
    pub fn prefix_sets(&self, k: usize) -> BTreeSet<Trace> {
        assert!(k >= 1, "prefix_sets is defined for k >= 1");
        let l = self.simplify();
        let firsts = l.first_actions();
        if k == 1 {
            return firsts.into_iter().map(|a| vec![a]).collect();
        }
        let mut out = BTreeSet::new();
        for a in firsts {
            for rest in l.derivative(&a).prefix_sets(k - 1) {
                let mut s = Vec::with_capacity(k);
                s.push(a.clone());
                s.extend(rest);
                out.insert(s);
            }
        }
        out
    }

    /// All traces of `L⟦ℓ⟧` of length at most `max_len`, by direct unrolling of
    /// the trace-set clauses.
    pub fn traces(&self, max_len: usize) -> BTreeSet<Trace> {
        match self {
            License::Zero => BTreeSet::new(),
            License::One => BTreeSet::from([Vec::new()]),
            License::Atom(a) => {
                if max_len >= 1 {
                    BTreeSet::from([vec![a.clone()]])
                } else {
                    BTreeSet::new()
                }
            }
            License::Concat(l, r) => {
                let mut out = BTreeSet::new();
                for s1 in l.traces(max_len) {
                    for s2 in r.traces(max_len - s1.len()) {
                        let mut s = s1.clone();
                        s.extend(s2);
                        out.insert(s);
                    }
                }
                out
            }
            License::Union(l, r) => {
                let mut out = l.traces(max_len);
                out.extend(r.traces(max_len));
                out
            }
            License::Star(l) => {
                let body: Vec<Trace> = l
                    .traces(max_len)
                    .into_iter()
                    .filter(|t| !t.is_empty())
                    .collect();
                let mut out = BTreeSet::from([Vec::new()]);
                let mut frontier = vec![Vec::new()];
                while let Some(s) = frontier.pop() {
                    for t in &body {
                        if s.len() + t.len() <= max_len {
                            let mut next = s.clone();
                            next.extend(t.iter().cloned());
                            if out.insert(next.clone()) {
                                frontier.push(next);
                            }
                        }
                    }
                }
                out
            }
        }
    }
}

impl fmt::Display for License {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_prec(self, 0, f)
    }
}

// 0: union, 1: concatenation, 2: star operand
fn fmt_prec(l: &License, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match l {
        License::Zero => f.write_str("0"),
        License::One => f.write_str("1"),
        License::Atom(a) => write!(f, "{a}"),
        License::Union(a, b) => {
            if prec > 0 {
                f.write_str("(")?;
            }
            fmt_prec(a, 0, f)?;
            f.write_str(" | ")?;
            fmt_prec(b, 1, f)?;
            if prec > 0 {
                f.write_str(")")?;
            }
            Ok(())
        }
        License::Concat(a, b) => {
            if prec > 1 {
                f.write_str("(")?;
            }
            fmt_prec(a, 1, f)?;
            f.write_str(" ")?;
            fmt_prec(b, 2, f)?;
            if prec > 1 {
                f.write_str(")")?;
            }
            Ok(())
        }
        License::Star(a) => {
            fmt_prec(a, 3, f)?;
            f.write_str("*")
        }
    }
}
