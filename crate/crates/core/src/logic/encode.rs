use thiserror::Error;

use crate::action::{Action, Name};
use crate::license::License;
use crate::logic::formula::{ActionExpr, Formula};
use crate::run::Run;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("only finite runs can be encoded; this run repeats its actions from time {0}")]
pub struct NotFinite(pub usize);

/// `ψ_t`: the actions of issued names and the issuances at time `t`.
fn state_formula(run: &Run, t: usize) -> Formula {
    let acts = run
        .names()
        .into_iter()
        .map(|n| Formula::act(run.act(&n, t), &n));
    let issues = run
        .issued_at(t)
        .map(|(n, l)| Formula::Issue(n.clone(), l.clone()));
    Formula::all(acts.chain(issues))
}

/// `ψ_r`, the formula describing a finite run.
pub fn encode_run(run: &Run) -> Result<Formula, NotFinite> {
    if let Some(s) = run.repeat_from() {
        return Err(NotFinite(s));
    }
    let tf = run.horizon();
    let steps = (0..=tf).map(|t| Formula::next_n(t, state_formula(run, t)));
    let end = Formula::all(
        run.names()
            .into_iter()
            .map(|n| Formula::act(Action::Bot, &n)),
    );
    let tail = Formula::next_n(tf + 1, Formula::always(end));
    Ok(Formula::all(steps.chain(std::iter::once(tail))))
}

/// `φ^i_{n,ℓ}`: the permissions issuing `(n,ℓ)` forces over the next `i` steps.
pub fn license_consequences(n: &Name, l: &License, i: usize) -> Formula {
    let l = l.simplify();
    let firsts = l.first_actions();
    if i == 0 {
        return Formula::all(firsts.into_iter().map(|a| Formula::perm(a, n)));
    }
    Formula::all(firsts.into_iter().map(|a| {
        let rest = license_consequences(n, &l.derivative(&a), i - 1);
        Formula::and(
            Formula::perm(a.clone(), n),
            Formula::implies(Formula::act(a, n), Formula::next(rest)),
        )
    }))
}

/// `n:ℓ ⇒ □((α ⇒ Pα) ∧ (Oα ⇒ α))` for each `α = (a,n)` with `a` drawn from `actions`.
pub fn non_violation_family(n: &Name, l: &License, actions: &[Action]) -> Vec<Formula> {
    actions
        .iter()
        .map(|a| {
            let alpha = Formula::Act(ActionExpr::pos(a.clone(), n.clone()));
            let body = Formula::and(
                Formula::implies(alpha.clone(), Formula::perm(a.clone(), n)),
                Formula::implies(Formula::Oblig(a.clone(), n.clone()), alpha),
            );
            Formula::implies(Formula::Issue(n.clone(), l.clone()), Formula::always(body))
        })
        .collect()
}
