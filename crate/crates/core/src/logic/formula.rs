use std::collections::BTreeSet;
use std::fmt;

use crate::action::{Action, Name};
use crate::license::License;

/// `(a,n)` or, with `complement`, `(ā,n)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionExpr {
    pub action: Action,
    pub name: Name,
    pub complement: bool,
}

impl ActionExpr {
    pub fn pos(action: Action, name: Name) -> Self {
        ActionExpr {
            action,
            name,
            complement: false,
        }
    }

    pub fn neg(action: Action, name: Name) -> Self {
        ActionExpr {
            action,
            name,
            complement: true,
        }
    }

    pub fn complemented(&self) -> Self {
        ActionExpr {
            complement: !self.complement,
            ..self.clone()
        }
    }

    /// Whether the pair `(b, m)` lies in the interpretation of this expression.
    pub fn matches(&self, b: &Action, m: &Name) -> bool {
        m == &self.name && ((b == &self.action) != self.complement)
    }
}

impl fmt::Display for ActionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tilde = if self.complement { "~" } else { "" };
        write!(f, "({tilde}{}, {})", self.action, self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Issue(Name, License),
    Act(ActionExpr),
    Perm(ActionExpr),
    /// `O(a,n)`, shorthand for `¬P(ā,n)`.
    Oblig(Action, Name),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Always(Box<Formula>),
    Eventually(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn always(f: Formula) -> Self {
        Formula::Always(Box::new(f))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    /// `X^k φ`.
    pub fn next_n(k: usize, f: Formula) -> Self {
        (0..k).fold(f, |acc, _| Formula::next(acc))
    }

    /// Conjunction of all items; the empty conjunction is `true`.
    pub fn all(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Disjunction of all items; the empty disjunction is `false`.
    pub fn any(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn act(a: Action, n: &Name) -> Self {
        Formula::Act(ActionExpr::pos(a, n.clone()))
    }

    pub fn perm(a: Action, n: &Name) -> Self {
        Formula::Perm(ActionExpr::pos(a, n.clone()))
    }

    /// Rewrites derived operators into the core ones: `true`, `n:ℓ`, `α`,
    /// `Pα`, `¬`, `∧`, `○`, `□`, `U`.
    pub fn normalize(&self) -> Formula {
        use Formula as F;
        match self {
            F::True | F::Issue(..) | F::Act(_) | F::Perm(_) => self.clone(),
            F::False => F::not(F::True),
            F::Oblig(a, n) => F::not(F::Perm(ActionExpr::neg(a.clone(), n.clone()))),
            F::Not(a) => F::not(a.normalize()),
            F::And(a, b) => F::and(a.normalize(), b.normalize()),
            F::Or(a, b) => F::not(F::and(F::not(a.normalize()), F::not(b.normalize()))),
            F::Implies(a, b) => F::not(F::and(a.normalize(), F::not(b.normalize()))),
            F::Next(a) => F::next(a.normalize()),
            F::Always(a) => F::always(a.normalize()),
            F::Eventually(a) => F::until(F::True, a.normalize()),
            F::Until(a, b) => F::until(a.normalize(), b.normalize()),
        }
    }

    fn children(&self) -> Vec<&Formula> {
        use Formula as F;
        match self {
            F::True | F::False | F::Issue(..) | F::Act(_) | F::Perm(_) | F::Oblig(..) => vec![],
            F::Not(a) | F::Next(a) | F::Always(a) | F::Eventually(a) => vec![a],
            F::And(a, b) | F::Or(a, b) | F::Implies(a, b) | F::Until(a, b) => vec![a, b],
        }
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// `N_φ`: every license name mentioned.
    pub fn names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |g| match g {
            Formula::Issue(n, _) | Formula::Oblig(_, n) => {
                out.insert(n.clone());
            }
            Formula::Act(e) | Formula::Perm(e) => {
                out.insert(e.name.clone());
            }
            _ => {}
        });
        out
    }

    /// `A_φ`: every action mentioned in an action expression.
    pub fn actions(&self) -> BTreeSet<Action> {
        let mut out = BTreeSet::new();
        self.visit(&mut |g| match g {
            Formula::Oblig(a, _) => {
                out.insert(a.clone());
            }
            Formula::Act(e) | Formula::Perm(e) => {
                out.insert(e.action.clone());
            }
            _ => {}
        });
        out
    }

    /// `L_φ`: every issuance `n:ℓ` mentioned.
    pub fn issuances(&self) -> BTreeSet<(Name, License)> {
        let mut out = BTreeSet::new();
        self.visit(&mut |g| {
            if let Formula::Issue(n, l) = g {
                out.insert((n.clone(), l.clone()));
            }
        });
        out
    }

    /// `(name, action)` pairs occurring in action expressions, with their polarity stripped.
    pub fn action_pairs(&self) -> BTreeSet<(Name, Action)> {
        let mut out = BTreeSet::new();
        self.visit(&mut |g| match g {
            Formula::Oblig(a, n) => {
                out.insert((n.clone(), a.clone()));
            }
            Formula::Act(e) | Formula::Perm(e) => {
                out.insert((e.name.clone(), e.action.clone()));
            }
            _ => {}
        });
        out
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Number of temporal operators.
    pub fn temporal_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |g| {
            if matches!(
                g,
                Formula::Next(_) | Formula::Always(_) | Formula::Eventually(_) | Formula::Until(..)
            ) {
                n += 1;
            }
        });
        n
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }
}

// precedence: 0 implication, 1 or, 2 and, 3 until, 4 unary, 5 atom
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 0,
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        Formula::Until(..) => 3,
        Formula::Not(_) | Formula::Next(_) | Formula::Always(_) | Formula::Eventually(_) => 4,
        _ => 5,
    }
}

fn fmt_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if prec(f) < min {
        out.write_str("(")?;
        fmt_at(f, 0, out)?;
        return out.write_str(")");
    }
    match f {
        Formula::True => out.write_str("true"),
        Formula::False => out.write_str("false"),
        Formula::Issue(n, l) => write!(out, "issue({n}, {l})"),
        Formula::Act(e) => write!(out, "{e}"),
        Formula::Perm(e) => write!(out, "P {e}"),
        Formula::Oblig(a, n) => write!(out, "O({a}, {n})"),
        Formula::Not(a) => {
            out.write_str("!")?;
            fmt_at(a, 4, out)
        }
        Formula::Next(a) => {
            out.write_str("X ")?;
            fmt_at(a, 4, out)
        }
        Formula::Always(a) => {
            out.write_str("G ")?;
            fmt_at(a, 4, out)
        }
        Formula::Eventually(a) => {
            out.write_str("F ")?;
            fmt_at(a, 4, out)
        }
        Formula::And(a, b) => {
            fmt_at(a, 2, out)?;
            out.write_str(" & ")?;
            fmt_at(b, 3, out)
        }
        Formula::Or(a, b) => {
            fmt_at(a, 1, out)?;
            out.write_str(" | ")?;
            fmt_at(b, 2, out)
        }
        Formula::Implies(a, b) => {
            fmt_at(a, 1, out)?;
            out.write_str(" -> ")?;
            fmt_at(b, 0, out)
        }
        Formula::Until(a, b) => {
            fmt_at(a, 4, out)?;
            out.write_str(" U ")?;
            fmt_at(b, 3, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_at(self, 0, f)
    }
}
