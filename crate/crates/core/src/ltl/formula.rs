use std::fmt;

use crate::action::{Action, Name};
use crate::automata::StateId;
use crate::license::License;

/// Propositions of the LTL encoding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Prop {
    Issued(Name, License),
    Done(Action, Name),
    Permitted(Action, Name),
    Obligated(Action, Name),
    /// The automaton of `ℓ·⊥*` for license `ℓ` under `n` may be in state `q`.
    InState(Name, License, StateId),
    /// No automaton state of `n` is occupied: not yet issued, or violated.
    Over(Name),
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Issued(n, l) => write!(f, "issued({n}, {l})"),
            Prop::Done(a, n) => write!(f, "done({a}, {n})"),
            Prop::Permitted(a, n) => write!(f, "permitted({a}, {n})"),
            Prop::Obligated(a, n) => write!(f, "obligated({a}, {n})"),
            Prop::InState(n, l, q) => write!(f, "instate({n}, {l}, {q})"),
            Prop::Over(n) => write!(f, "over({n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ltl<P = Prop> {
    True,
    False,
    Prop(P),
    Not(Box<Ltl<P>>),
    And(Vec<Ltl<P>>),
    Or(Vec<Ltl<P>>),
    Implies(Box<Ltl<P>>, Box<Ltl<P>>),
    Iff(Box<Ltl<P>>, Box<Ltl<P>>),
    Next(Box<Ltl<P>>),
    Always(Box<Ltl<P>>),
    Eventually(Box<Ltl<P>>),
    Until(Box<Ltl<P>>, Box<Ltl<P>>),
}

impl<P> Ltl<P> {
    pub fn prop(p: P) -> Self {
        Ltl::Prop(p)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Ltl<P>) -> Self {
        Ltl::Not(Box::new(f))
    }

    /// Conjunction; the empty conjunction is `true`.
    pub fn all(items: impl IntoIterator<Item = Ltl<P>>) -> Self {
        let mut v: Vec<Ltl<P>> = items.into_iter().collect();
        match v.len() {
            0 => Ltl::True,
            1 => v.pop().unwrap(),
            _ => Ltl::And(v),
        }
    }

    /// Disjunction; the empty disjunction is `false`.
    pub fn any(items: impl IntoIterator<Item = Ltl<P>>) -> Self {
        let mut v: Vec<Ltl<P>> = items.into_iter().collect();
        match v.len() {
            0 => Ltl::False,
            1 => v.pop().unwrap(),
            _ => Ltl::Or(v),
        }
    }

    pub fn and(a: Ltl<P>, b: Ltl<P>) -> Self {
        Ltl::And(vec![a, b])
    }

    pub fn or(a: Ltl<P>, b: Ltl<P>) -> Self {
        Ltl::Or(vec![a, b])
    }

    pub fn implies(a: Ltl<P>, b: Ltl<P>) -> Self {
        Ltl::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Ltl<P>, b: Ltl<P>) -> Self {
        Ltl::Iff(Box::new(a), Box::new(b))
    }

    pub fn next(f: Ltl<P>) -> Self {
        Ltl::Next(Box::new(f))
    }

    pub fn always(f: Ltl<P>) -> Self {
        Ltl::Always(Box::new(f))
    }

    pub fn eventually(f: Ltl<P>) -> Self {
        Ltl::Eventually(Box::new(f))
    }

    pub fn until(a: Ltl<P>, b: Ltl<P>) -> Self {
        Ltl::Until(Box::new(a), Box::new(b))
    }

    pub fn size(&self) -> usize {
        match self {
            Ltl::True | Ltl::False | Ltl::Prop(_) => 1,
            Ltl::Not(a) | Ltl::Next(a) | Ltl::Always(a) | Ltl::Eventually(a) => 1 + a.size(),
            Ltl::And(v) | Ltl::Or(v) => 1 + v.iter().map(Ltl::size).sum::<usize>(),
            Ltl::Implies(a, b) | Ltl::Iff(a, b) | Ltl::Until(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Calls `f` on every proposition occurrence.
    pub fn for_each_prop(&self, f: &mut impl FnMut(&P)) {
        match self {
            Ltl::True | Ltl::False => {}
            Ltl::Prop(p) => f(p),
            Ltl::Not(a) | Ltl::Next(a) | Ltl::Always(a) | Ltl::Eventually(a) => a.for_each_prop(f),
            Ltl::And(v) | Ltl::Or(v) => v.iter().for_each(|x| x.for_each_prop(f)),
            Ltl::Implies(a, b) | Ltl::Iff(a, b) | Ltl::Until(a, b) => {
                a.for_each_prop(f);
                b.for_each_prop(f);
            }
        }
    }
}

// 0: -> <->, 1: |, 2: &, 3: U, 4: unary
fn prec<P>(f: &Ltl<P>) -> u8 {
    match f {
        Ltl::Implies(..) | Ltl::Iff(..) => 0,
        Ltl::Or(_) => 1,
        Ltl::And(_) => 2,
        Ltl::Until(..) => 3,
        Ltl::Not(_) | Ltl::Next(_) | Ltl::Always(_) | Ltl::Eventually(_) => 4,
        _ => 5,
    }
}

fn fmt_at<P: fmt::Display>(f: &Ltl<P>, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if prec(f) < min {
        out.write_str("(")?;
        fmt_at(f, 0, out)?;
        return out.write_str(")");
    }
    let join = |v: &[Ltl<P>], sep: &str, child: u8, out: &mut fmt::Formatter<'_>| -> fmt::Result {
        for (i, x) in v.iter().enumerate() {
            if i > 0 {
                out.write_str(sep)?;
            }
            fmt_at(x, child, out)?;
        }
        Ok(())
    };
    match f {
        Ltl::True => out.write_str("true"),
        Ltl::False => out.write_str("false"),
        Ltl::Prop(p) => write!(out, "{p}"),
        Ltl::Not(a) => {
            out.write_str("!")?;
            fmt_at(a, 4, out)
        }
        Ltl::Next(a) => {
            out.write_str("X ")?;
            fmt_at(a, 4, out)
        }
        Ltl::Always(a) => {
            out.write_str("G ")?;
            fmt_at(a, 4, out)
        }
        Ltl::Eventually(a) => {
            out.write_str("F ")?;
            fmt_at(a, 4, out)
        }
        Ltl::And(v) => join(v, " & ", 3, out),
        Ltl::Or(v) => join(v, " | ", 2, out),
        Ltl::Implies(a, b) => {
            fmt_at(a, 1, out)?;
            out.write_str(" -> ")?;
            fmt_at(b, 1, out)
        }
        Ltl::Iff(a, b) => {
            fmt_at(a, 1, out)?;
            out.write_str(" <-> ")?;
            fmt_at(b, 1, out)
        }
        Ltl::Until(a, b) => {
            fmt_at(a, 4, out)?;
            out.write_str(" U ")?;
            fmt_at(b, 4, out)
        }
    }
}

impl<P: fmt::Display> fmt::Display for Ltl<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_at(self, 0, f)
    }
}
