use std::collections::{BTreeMap, BTreeSet};

use crate::action::{Action, Amount, Name};
use crate::automata::{build_nfa, Nfa};
use crate::license::License;
use crate::logic::Formula;
use crate::ltl::formula::{Ltl, Prop};

/// `φ^T`.
pub fn translate(f: &Formula) -> Ltl {
    use Formula as F;
    let b = |x: &Formula| translate(x);
    match f {
        F::True => Ltl::True,
        F::False => Ltl::False,
        F::Issue(n, l) => Ltl::prop(Prop::Issued(n.clone(), l.clone())),
        F::Act(e) => {
            let p = Ltl::prop(Prop::Done(e.action.clone(), e.name.clone()));
            if e.complement {
                Ltl::not(p)
            } else {
                p
            }
        }
        F::Perm(e) => {
            if e.complement {
                Ltl::not(Ltl::prop(Prop::Obligated(e.action.clone(), e.name.clone())))
            } else {
                Ltl::prop(Prop::Permitted(e.action.clone(), e.name.clone()))
            }
        }
        F::Oblig(a, n) => Ltl::not(Ltl::not(Ltl::prop(Prop::Obligated(a.clone(), n.clone())))),
        F::Not(a) => Ltl::not(b(a)),
        F::And(x, y) => Ltl::and(b(x), b(y)),
        F::Or(x, y) => Ltl::or(b(x), b(y)),
        F::Implies(x, y) => Ltl::implies(b(x), b(y)),
        F::Next(a) => Ltl::next(b(a)),
        F::Always(a) => Ltl::always(b(a)),
        F::Eventually(a) => Ltl::eventually(b(a)),
        F::Until(x, y) => Ltl::until(b(x), b(y)),
    }
}

/// The finite vocabulary a formula is decided over.
#[derive(Debug, Clone)]
pub struct Universe {
    /// `A_φ ∪ alphabet(L_φ) ∪ {⊥}`.
    pub actions: BTreeSet<Action>,
    /// `N_φ`.
    pub names: BTreeSet<Name>,
    /// `L_φ`, grouped by name, each with the automaton of `ℓ·⊥*`.
    pub licenses: BTreeMap<Name, Vec<(License, Nfa)>>,
    /// Two actions outside `actions`, used for behaviour the formula cannot name.
    pub fresh: [Action; 2],
}

impl Universe {
    pub fn of(f: &Formula) -> Universe {
        let mut actions = f.actions();
        actions.insert(Action::Bot);
        let mut licenses: BTreeMap<Name, Vec<(License, Nfa)>> = BTreeMap::new();
        for (n, l) in f.issuances() {
            actions.extend(l.alphabet());
            let nfa = build_nfa(&l).with_bot_padding();
            licenses.entry(n).or_default().push((l, nfa));
        }
        let top = actions
            .iter()
            .filter_map(|a| match a {
                Action::Pay(x) => Some(x.cents()),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let fresh = [
            Action::Pay(Amount::from_cents(top + 100)),
            Action::Pay(Amount::from_cents(top + 101)),
        ];
        Universe {
            actions,
            names: f.names(),
            licenses,
            fresh,
        }
    }

    pub fn licenses_of(&self, n: &Name) -> &[(License, Nfa)] {
        self.licenses.get(n).map_or(&[], Vec::as_slice)
    }

    /// `∨_ℓ issued(n,ℓ)` over the licenses of `n` in `L_φ`.
    pub fn issued_any(&self, n: &Name) -> Ltl {
        Ltl::any(
            self.licenses_of(n)
                .iter()
                .map(|(l, _)| Ltl::prop(Prop::Issued(n.clone(), l.clone()))),
        )
    }

    /// The part of the foreign-license constraints that starts when the license takes effect.
    pub fn foreign_active(&self, n: &Name) -> Ltl {
        let obl_bot = Ltl::prop(Prop::Obligated(Action::Bot, n.clone()));
        let stop = Ltl::next(Ltl::always(obl_bot.clone()));
        let rules = self.actions.iter().flat_map(|a| {
            let done = Ltl::prop(Prop::Done(a.clone(), n.clone()));
            let perm = Ltl::prop(Prop::Permitted(a.clone(), n.clone()));
            let obl = Ltl::prop(Prop::Obligated(a.clone(), n.clone()));
            [
                Ltl::implies(Ltl::and(done.clone(), Ltl::not(perm)), stop.clone()),
                Ltl::implies(Ltl::and(obl, Ltl::not(done)), stop.clone()),
            ]
        });
        let free = Ltl::all(
            self.actions
                .iter()
                .map(|a| Ltl::not(Ltl::prop(Prop::Obligated(a.clone(), n.clone())))),
        );
        let live = Ltl::or(
            Ltl::eventually(Ltl::always(obl_bot)),
            Ltl::always(Ltl::eventually(free)),
        );
        Ltl::and(Ltl::always(Ltl::all(rules)), live)
    }
}

fn p(prop: Prop) -> Ltl {
    Ltl::prop(prop)
}

/// At most one action per name and time.
fn done_schema(u: &Universe) -> Vec<Ltl> {
    let mut out = Vec::new();
    for n in &u.names {
        for a in &u.actions {
            for b in &u.actions {
                if a != b {
                    out.push(Ltl::always(Ltl::implies(
                        p(Prop::Done(a.clone(), n.clone())),
                        Ltl::not(p(Prop::Done(b.clone(), n.clone()))),
                    )));
                }
            }
        }
    }
    out
}

/// Each name is issued at most once, with at most one license.
fn issued_schema(u: &Universe) -> Vec<Ltl> {
    let mut out = Vec::new();
    for (n, ls) in &u.licenses {
        for (l, _) in ls {
            let me = p(Prop::Issued(n.clone(), l.clone()));
            out.push(Ltl::always(Ltl::implies(
                me.clone(),
                Ltl::next(Ltl::always(Ltl::not(me.clone()))),
            )));
            for (l2, _) in ls {
                if l2 != l {
                    let other = p(Prop::Issued(n.clone(), l2.clone()));
                    out.push(Ltl::always(Ltl::implies(
                        me.clone(),
                        Ltl::always(Ltl::not(other)),
                    )));
                }
            }
        }
    }
    out
}

/// Automaton tracking for one license of `n`.
fn lic_schema(n: &Name, l: &License, nfa: &Nfa) -> Vec<Ltl> {
    if !nfa.is_live() {
        return Vec::new();
    }
    let st = |q: usize| p(Prop::InState(n.clone(), l.clone(), q));
    let mut out = vec![Ltl::always(Ltl::iff(
        st(0),
        p(Prop::Issued(n.clone(), l.clone())),
    ))];
    for q in 1..nfa.num_states() {
        out.push(Ltl::not(st(q)));
        let pre = Ltl::any(
            nfa.edges()
                .filter(|(_, _, r)| *r == q)
                .map(|(s, a, _)| Ltl::and(st(s), p(Prop::Done(a.clone(), n.clone())))),
        );
        out.push(Ltl::always(Ltl::iff(Ltl::next(st(q)), pre)));
    }
    out
}

/// Permissions and obligations of `n` read off the automaton states.
fn perm_schema(u: &Universe, n: &Name) -> Vec<Ltl> {
    let ls = u.licenses_of(n);
    let over = p(Prop::Over(n.clone()));
    let all_states = ls.iter().filter(|(_, m)| m.is_live()).flat_map(|(l, m)| {
        (0..m.num_states()).map(move |q| Ltl::not(p(Prop::InState(n.clone(), l.clone(), q))))
    });
    let mut out = vec![Ltl::always(Ltl::iff(over.clone(), Ltl::all(all_states)))];
    out.push(Ltl::always(Ltl::implies(
        over.clone(),
        p(Prop::Obligated(Action::Bot, n.clone())),
    )));
    for a in &u.actions {
        let mut why = Vec::new();
        if a.is_bot() {
            why.push(over.clone());
        }
        for (l, m) in ls.iter().filter(|(_, m)| m.is_live()) {
            for q in 0..m.num_states() {
                if m.transitions(q).iter().any(|(b, _)| b == a) {
                    why.push(p(Prop::InState(n.clone(), l.clone(), q)));
                }
            }
        }
        out.push(Ltl::always(Ltl::iff(
            p(Prop::Permitted(a.clone(), n.clone())),
            Ltl::any(why),
        )));
        let only = Ltl::all(
            u.actions
                .iter()
                .filter(|b| *b != a)
                .map(|b| Ltl::not(p(Prop::Permitted(b.clone(), n.clone())))),
        );
        out.push(Ltl::always(Ltl::iff(
            p(Prop::Obligated(a.clone(), n.clone())),
            Ltl::and(p(Prop::Permitted(a.clone(), n.clone())), only),
        )));
    }
    out
}

/// Constraints for a name whose license is not among those the formula mentions.
fn foreign_schema(u: &Universe, n: &Name) -> Ltl {
    let obl_bot = p(Prop::Obligated(Action::Bot, n.clone()));
    let consistent = u.actions.iter().map(|a| {
        let others = u
            .actions
            .iter()
            .filter(|b| *b != a)
            .map(|b| Ltl::not(p(Prop::Permitted(b.clone(), n.clone()))));
        Ltl::implies(
            p(Prop::Obligated(a.clone(), n.clone())),
            Ltl::all(std::iter::once(p(Prop::Permitted(a.clone(), n.clone()))).chain(others)),
        )
    });
    let mut parts = vec![Ltl::always(Ltl::all(consistent))];
    if !u.licenses_of(n).is_empty() {
        parts.push(Ltl::always(Ltl::not(u.issued_any(n))));
    }
    let weak_until = Ltl::or(
        Ltl::always(obl_bot.clone()),
        Ltl::until(obl_bot, u.foreign_active(n)),
    );
    parts.push(weak_until);
    Ltl::all(parts)
}

/// Constraints for a name issued one of the licenses the formula mentions.
fn licensed_schema(u: &Universe, n: &Name) -> Ltl {
    let obl_bot = p(Prop::Obligated(Action::Bot, n.clone()));
    let mut parts = vec![Ltl::until(obl_bot, u.issued_any(n))];
    for (l, m) in u.licenses_of(n) {
        parts.extend(lic_schema(n, l, m));
    }
    parts.extend(perm_schema(u, n));
    Ltl::all(parts)
}

/// `φ^I`: the constraints every structure arising from a run satisfies.
pub fn implicit_restrictions(f: &Formula) -> Ltl {
    implicit_restrictions_in(&Universe::of(f))
}

pub(crate) fn implicit_restrictions_in(u: &Universe) -> Ltl {
    let mut parts = done_schema(u);
    parts.extend(issued_schema(u));
    for n in &u.names {
        let foreign = foreign_schema(u, n);
        if u.licenses_of(n).is_empty() {
            parts.push(foreign);
        } else {
            parts.push(Ltl::or(licensed_schema(u, n), foreign));
        }
    }
    Ltl::all(parts)
}
