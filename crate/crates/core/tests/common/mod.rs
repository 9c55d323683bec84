//! Random instances and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use lict_core::{Action, ActionExpr, Formula, License, Name, Run};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn names() -> Vec<Name> {
    vec![Name::new("n"), Name::new("m")]
}

/// A small action pool; `bot` is always the first entry.
pub fn actions() -> Vec<Action> {
    vec![
        Action::Bot,
        Action::pay("1.00"),
        Action::render("w", "d"),
        Action::pay("2.00"),
    ]
}

pub fn rand_license<R: Rng>(rng: &mut R, depth: usize, pool: &[Action]) -> License {
    if depth == 0 || rng.gen_bool(0.25) {
        return License::atom(pool.choose(rng).unwrap().clone());
    }
    match rng.gen_range(0..3) {
        0 => License::concat_raw(
            rand_license(rng, depth - 1, pool),
            rand_license(rng, depth - 1, pool),
        ),
        1 => License::union_raw(
            rand_license(rng, depth - 1, pool),
            rand_license(rng, depth - 1, pool),
        ),
        _ => License::star_raw(rand_license(rng, depth - 1, pool)),
    }
}

/// A run over `names` with horizon at most `tf`; about one in four repeats its actions.
pub fn rand_run<R: Rng>(
    rng: &mut R,
    tf: usize,
    names: &[Name],
    licenses: &[License],
    pool: &[Action],
) -> Run {
    let tf = rng.gen_range(0..=tf);
    let mut r = Run::new();
    for n in names {
        if rng.gen_bool(0.8) {
            let l = licenses.choose(rng).unwrap().clone();
            r.issue(n.clone(), rng.gen_range(0..=tf), l).unwrap();
        }
        for t in 0..=tf {
            let a = pool.choose(rng).unwrap().clone();
            if !a.is_bot() {
                r.perform(n.clone(), t, a).unwrap();
            }
        }
    }
    r.set_horizon(tf).unwrap();
    if rng.gen_bool(0.25) {
        r.set_repeat_from(Some(rng.gen_range(0..=tf))).unwrap();
    }
    r
}

/// A finite run (no repetition) with horizon exactly `tf`.
pub fn rand_finite_run<R: Rng>(
    rng: &mut R,
    tf: usize,
    names: &[Name],
    licenses: &[License],
    pool: &[Action],
) -> Run {
    let mut r = rand_run(rng, tf, names, licenses, pool);
    r.set_repeat_from(None).unwrap();
    r.set_horizon(tf).unwrap();
    r
}

pub struct FormulaGen<'a> {
    pub names: &'a [Name],
    pub actions: &'a [Action],
    pub licenses: &'a [License],
    /// Upper bound on temporal operators in one formula.
    pub max_temporal: usize,
}

impl FormulaGen<'_> {
    pub fn gen<R: Rng>(&self, rng: &mut R, depth: usize) -> Formula {
        let mut budget = self.max_temporal;
        self.go(rng, depth, &mut budget)
    }

    fn atom<R: Rng>(&self, rng: &mut R) -> Formula {
        let n = self.names.choose(rng).unwrap().clone();
        let a = self.actions.choose(rng).unwrap().clone();
        let e = if rng.gen_bool(0.3) {
            ActionExpr::neg(a.clone(), n.clone())
        } else {
            ActionExpr::pos(a.clone(), n.clone())
        };
        match rng.gen_range(0..8) {
            0 if !self.licenses.is_empty() => {
                Formula::Issue(n, self.licenses.choose(rng).unwrap().clone())
            }
            0 | 1 => Formula::True,
            2 | 3 => Formula::Act(e),
            4 | 5 => Formula::Perm(e),
            _ => Formula::Oblig(a, n),
        }
    }

    fn go<R: Rng>(&self, rng: &mut R, depth: usize, temporal: &mut usize) -> Formula {
        if depth == 0 || rng.gen_bool(0.2) {
            return self.atom(rng);
        }
        let pick = rng.gen_range(0..9);
        if pick >= 5 && *temporal == 0 {
            return self.go(rng, depth, temporal);
        }
        if pick >= 5 {
            *temporal -= 1;
        }
        let d = depth - 1;
        match pick {
            0 => Formula::not(self.go(rng, d, temporal)),
            1 => Formula::and(self.go(rng, d, temporal), self.go(rng, d, temporal)),
            2 => Formula::or(self.go(rng, d, temporal), self.go(rng, d, temporal)),
            3 | 4 => Formula::implies(self.go(rng, d, temporal), self.go(rng, d, temporal)),
            5 => Formula::next(self.go(rng, d, temporal)),
            6 => Formula::always(self.go(rng, d, temporal)),
            7 => Formula::eventually(self.go(rng, d, temporal)),
            _ => Formula::until(self.go(rng, d, temporal), self.go(rng, d, temporal)),
        }
    }
}

/// `P_r(n,t)` straight from viability of the action sequence since issuance.
pub fn oracle_permitted(run: &Run, n: &Name, t: usize) -> BTreeSet<Action> {
    let bot = BTreeSet::from([Action::Bot]);
    let Some((i, l)) = run.license(n) else {
        return bot;
    };
    if t < i {
        return bot;
    }
    let s: Vec<Action> = (i..t).map(|k| run.act(n, k)).collect();
    if !l.viable(&s) {
        return bot;
    }
    let mut candidates = l.alphabet();
    candidates.insert(Action::Bot);
    candidates
        .into_iter()
        .filter(|a| {
            let mut s2 = s.clone();
            s2.push(a.clone());
            l.viable(&s2)
        })
        .collect()
}
