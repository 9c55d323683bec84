//! The permission interpretation `P_r` of a run.
//!
//! Each issued license is tracked by subset stepping through the automaton of
//! `ℓ·⊥*`. Up to the horizon the subsets are stored explicitly; past it they
//! become periodic and are kept as a lasso.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::action::{Action, Name};
use crate::automata::{build_nfa, permitted_from, step_subset, Nfa, SubsetState};
use crate::run::Run;

#[derive(Debug, Clone)]
struct Timeline {
    issued_at: usize,
    nfa: Nfa,
    /// Subsets for times `issued_at..=horizon`.
    explicit: Vec<SubsetState>,
    /// Subsets for times `horizon+1 ..`, as a prefix followed by a cycle.
    tail_prefix: Vec<SubsetState>,
    tail_cycle: Vec<SubsetState>,
    sets: HashMap<SubsetState, BTreeSet<Action>>,
}

impl Timeline {
    fn build(run: &Run, name: &Name, issued_at: usize, nfa: Nfa) -> Timeline {
        let h = run.horizon();
        let mut explicit = Vec::with_capacity(h + 1 - issued_at);
        let mut cur = nfa.start();
        for t in issued_at..=h {
            let next = step_subset(&nfa, &cur, &run.act(name, t));
            explicit.push(std::mem::replace(&mut cur, next));
        }
        let period = if run.is_finite() {
            1
        } else {
            h - run.repeat_from().unwrap_or(0) + 1
        };
        let mut seen: HashMap<(SubsetState, usize), usize> = HashMap::new();
        let mut seq: Vec<SubsetState> = Vec::new();
        let mut t = h + 1;
        let (tail_prefix, tail_cycle) = loop {
            let key = (cur.clone(), (t - h - 1) % period);
            if let Some(&i) = seen.get(&key) {
                let cyc = seq.split_off(i);
                break (seq, cyc);
            }
            seen.insert(key, seq.len());
            seq.push(cur.clone());
            cur = step_subset(&nfa, &cur, &run.act(name, t));
            t += 1;
        };
        let mut sets = HashMap::new();
        for ss in explicit.iter().chain(&tail_prefix).chain(&tail_cycle) {
            sets.entry(ss.clone())
                .or_insert_with(|| permitted_from(&nfa, ss, false));
        }
        Timeline {
            issued_at,
            nfa,
            explicit,
            tail_prefix,
            tail_cycle,
            sets,
        }
    }

    fn subset(&self, horizon: usize, t: usize) -> Option<&SubsetState> {
        if t < self.issued_at {
            None
        } else if t <= horizon {
            Some(&self.explicit[t - self.issued_at])
        } else {
            let k = t - horizon - 1;
            Some(if k < self.tail_prefix.len() {
                &self.tail_prefix[k]
            } else {
                &self.tail_cycle[(k - self.tail_prefix.len()) % self.tail_cycle.len()]
            })
        }
    }
}

/// `P_r`, queried per name and time.
#[derive(Debug, Clone)]
pub struct PermissionInterpretation {
    horizon: usize,
    action_period: usize,
    timelines: BTreeMap<Name, Timeline>,
    bot_only: BTreeSet<Action>,
}

/// Computes `P_r` in time polynomial in the run size.
pub fn compute_permissions(run: &Run) -> PermissionInterpretation {
    let timelines = run
        .issuances()
        .map(|(n, t, l)| {
            (
                n.clone(),
                Timeline::build(run, n, t, build_nfa(l).with_bot_padding()),
            )
        })
        .collect();
    let action_period = match run.repeat_from() {
        Some(s) => run.horizon() - s + 1,
        None => 1,
    };
    PermissionInterpretation {
        horizon: run.horizon(),
        action_period,
        timelines,
        bot_only: BTreeSet::from([Action::Bot]),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl PermissionInterpretation {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// The actions permitted under `name` at time `t`. Never empty.
    pub fn permitted(&self, name: &Name, t: usize) -> &BTreeSet<Action> {
        match self
            .timelines
            .get(name)
            .and_then(|tl| tl.subset(self.horizon, t).map(|ss| &tl.sets[ss]))
        {
            Some(s) => s,
            None => &self.bot_only,
        }
    }

    pub fn is_permitted(&self, name: &Name, t: usize, a: &Action) -> bool {
        self.permitted(name, t).contains(a)
    }

    /// The obligated action, if exactly one action is permitted.
    pub fn obligated(&self, name: &Name, t: usize) -> Option<&Action> {
        let s = self.permitted(name, t);
        if s.len() == 1 {
            s.iter().next()
        } else {
            None
        }
    }

    /// The automaton subset of `name` at `t`, if its license is active.
    pub fn subset(&self, name: &Name, t: usize) -> Option<&SubsetState> {
        self.timelines
            .get(name)
            .and_then(|tl| tl.subset(self.horizon, t))
    }

    /// The padded automaton tracking `name`.
    pub fn nfa(&self, name: &Name) -> Option<&Nfa> {
        self.timelines.get(name).map(|tl| &tl.nfa)
    }

    /// Whether the license under `name` has been violated by time `t`.
    pub fn violated(&self, name: &Name, t: usize) -> bool {
        self.subset(name, t).is_some_and(SubsetState::is_empty)
    }

    /// `(start, period)` such that, for every `t ≥ start`, the permissions and
    /// the run's actions at `t` and `t + period` coincide.
    pub fn lasso_bounds(&self) -> (usize, usize) {
        let mut start = self.horizon + 1;
        let mut period = self.action_period;
        for tl in self.timelines.values() {
            start = start.max(self.horizon + 1 + tl.tail_prefix.len());
            period = lcm(period, tl.tail_cycle.len());
        }
        (start, period)
    }

    /// One line per time and name:
    /// `t=<t> n=<name> permits={...} obligated=<action|none>`.
    pub fn dump(&self, names: &BTreeSet<Name>, upto: usize) -> String {
        let mut out = String::new();
        for t in 0..=upto {
            for n in names {
                let set: Vec<String> = self
                    .permitted(n, t)
                    .iter()
                    .map(ToString::to_string)
                    .collect();
                let obl = self
                    .obligated(n, t)
                    .map_or_else(|| "none".to_string(), ToString::to_string);
                let _ = writeln!(
                    out,
                    "t={t} n={n} permits={{{}}} obligated={obl}",
                    set.join(",")
                );
            }
        }
        out
    }
}
