use std::collections::BTreeSet;

use thiserror::Error;

use crate::action::{Action, Name};
use crate::lasso::Lasso;
use crate::license::License;
use crate::logic::{eval, Formula};
use crate::ltl::formula::{Ltl, Prop};
use crate::ltl::structure::{build_structure, ltl_eval, ltl_eval_all, LinearStructure};
use crate::ltl::tableau::{ltl_sat, SatOutcome};
use crate::ltl::translate::{implicit_restrictions_in, translate, Universe};
use crate::permissions::compute_permissions;
use crate::run::Run;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("exceeded budget after {explored} tableau expansions")]
    BudgetExceeded { explored: usize },
    #[error("the run read off the LTL model does not satisfy the formula:\n{0}")]
    WitnessRejected(Run),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat(Run),
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid(Run),
}

/// Is there a run `r` with `r,0 ⊨ φ`? On success the run has been checked
/// against `φ` with the direct semantics.
pub fn lic_sat(f: &Formula, budget: usize) -> Result<SatResult, SatError> {
    let u = Universe::of(f);
    let goal = Ltl::and(translate(f), implicit_restrictions_in(&u));
    let m = match ltl_sat(&goal, budget) {
        SatOutcome::Sat(m) => m,
        SatOutcome::Unsat => return Ok(SatResult::Unsat),
        SatOutcome::BudgetExceeded { explored } => {
            return Err(SatError::BudgetExceeded { explored })
        }
    };
    let run = extract_run(&u, &m);
    let perms = compute_permissions(&run);
    if eval(&run, &perms, 0, f) {
        Ok(SatResult::Sat(run))
    } else {
        Err(SatError::WitnessRejected(run))
    }
}

/// `φ` is valid iff `¬φ` is unsatisfiable; otherwise the counterexample falsifies `φ` at time 0.
pub fn lic_valid(f: &Formula, budget: usize) -> Result<Validity, SatError> {
    Ok(match lic_sat(&Formula::not(f.clone()), budget)? {
        SatResult::Sat(r) => Validity::Invalid(r),
        SatResult::Unsat => Validity::Valid,
    })
}

/// `r ⊨ φ` decided on `M_r` as `M_r, s_0 ⊨ G φ^T`.
pub fn check_run_validity_ltl(r: &Run, f: &Formula) -> bool {
    let m = build_structure(r, &f.names());
    ltl_eval(&m, 0, &Ltl::always(translate(f)))
}

fn done_at(u: &Universe, m: &LinearStructure, n: &Name, i: usize) -> Action {
    u.actions
        .iter()
        .find(|a| m.labels[i].contains(&Prop::Done((*a).clone(), n.clone())))
        .cloned()
        .unwrap_or_else(|| u.fresh[0].clone())
}

fn extract_run(u: &Universe, m: &LinearStructure) -> Run {
    let len = m.labels.len();
    let mut run = Run::new();
    let mut looping = false;
    for n in &u.names {
        for i in 0..len {
            let a = done_at(u, m, n, i);
            if !a.is_bot() {
                looping |= i >= m.loop_start;
                run.perform(n.clone(), i, a)
                    .expect("one action per name and time");
            }
        }
    }
    run.set_horizon(len - 1)
        .expect("horizon covers every event");
    for n in &u.names {
        let issued = (0..m.loop_start).find_map(|i| {
            m.labels[i].iter().find_map(|p| match p {
                Prop::Issued(k, l) if k == n => Some((i, l.clone())),
                _ => None,
            })
        });
        match issued {
            Some((i, l)) => run.issue(n.clone(), i, l).expect("fresh name"),
            None => {
                if let Some((i, l)) = foreign_license(u, m, n) {
                    run.issue(n.clone(), i, l).expect("fresh name");
                }
            }
        }
    }
    if looping {
        run.set_repeat_from(Some(m.loop_start))
            .expect("loop inside horizon");
    }
    run
}

/// A license, and its issuance time, whose permissions over the actions the
/// formula mentions reproduce the `permitted`/`obligated` labels of `n`.
fn foreign_license(u: &Universe, m: &LinearStructure, n: &Name) -> Option<(usize, License)> {
    let lasso: Lasso = m.lasso();
    let active = ltl_eval_all(m, &u.foreign_active(n));
    let j0 = active.iter().position(|&x| x)?;

    // Positions from j0 onwards, split into a prefix and a cycle.
    let mut seq = Vec::new();
    let mut seen = BTreeSet::new();
    let mut i = j0;
    while seen.insert(i) {
        seq.push(i);
        i = lasso.succ(i);
    }
    let cut = seq.iter().position(|&x| x == i).unwrap();

    let obligated = |i: usize| {
        u.actions
            .iter()
            .find(|a| m.labels[i].contains(&Prop::Obligated((*a).clone(), n.clone())))
            .cloned()
    };
    let allowed: Vec<BTreeSet<Action>> = seq
        .iter()
        .map(|&i| match obligated(i) {
            Some(a) => BTreeSet::from([a]),
            None => u
                .actions
                .iter()
                .filter(|a| m.labels[i].contains(&Prop::Permitted((*a).clone(), n.clone())))
                .cloned()
                .chain(u.fresh.iter().cloned())
                .collect(),
        })
        .collect();
    let done: Vec<Action> = seq.iter().map(|&i| done_at(u, m, n, i)).collect();
    let bot_only = BTreeSet::from([Action::Bot]);
    if allowed.iter().all(|r| *r == bot_only) {
        return None;
    }

    let ends_quiet = |k: usize| allowed[k] == bot_only && done[k].is_bot();
    let word = |k: usize| License::seq(done[..k].iter().cloned().map(License::atom));
    let branch = |k: usize, base: License| {
        let others = allowed[k]
            .iter()
            .filter(|b| **b != done[k])
            .cloned()
            .map(License::atom);
        let others: Vec<License> = others.collect();
        (!others.is_empty()).then(|| License::concat(base, License::any(others)))
    };

    let l = if let Some(v) = (0..seq.len()).find(|&k| !allowed[k].contains(&done[k])) {
        License::any((0..=v).filter_map(|k| branch(k, word(k))))
    } else if (cut..seq.len()).all(&ends_quiet) {
        let k0 = (0..cut)
            .rev()
            .take_while(|&k| ends_quiet(k))
            .last()
            .unwrap_or(cut);
        let mut parts: Vec<License> = (0..k0).filter_map(|k| branch(k, word(k))).collect();
        parts.push(word(k0));
        License::any(parts)
    } else {
        let mut parts: Vec<License> = (0..cut).filter_map(|k| branch(k, word(k))).collect();
        let cycle = License::star(License::seq(done[cut..].iter().cloned().map(License::atom)));
        let prefix = License::concat(word(cut), cycle);
        let exits: Vec<License> = (cut..seq.len())
            .filter_map(|k| {
                branch(
                    k,
                    License::seq(done[cut..k].iter().cloned().map(License::atom)),
                )
            })
            .collect();
        parts.push(License::concat(prefix, License::any(exits)));
        License::any(parts)
    };
    let l = if u.licenses_of(n).iter().any(|(k, _)| *k == l) {
        License::union_raw(l.clone(), l)
    } else {
        l
    };
    Some((j0, l))
}
