//! Position (Glushkov) automata for licenses and subset stepping.
//!
//! State `0` is the initial state; every other state is a position of an atom
//! in the license. Automata are trimmed so that every state except possibly
//! the initial one can reach a final state.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::action::Action;
use crate::license::License;

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    finals: Vec<bool>,
    trans: Vec<Vec<(Action, StateId)>>,
}

/// A set of automaton states, kept sorted. The empty set marks a violated license.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetState(Vec<StateId>);

impl SubsetState {
    pub fn empty() -> Self {
        SubsetState(Vec::new())
    }

    pub fn from_states(states: impl IntoIterator<Item = StateId>) -> Self {
        let mut v: Vec<StateId> = states.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SubsetState(v)
    }

    pub fn states(&self) -> &[StateId] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, q: StateId) -> bool {
        self.0.binary_search(&q).is_ok()
    }
}

struct Glushkov {
    actions: Vec<Action>,
    follow: Vec<BTreeSet<usize>>,
}

struct Info {
    nullable: bool,
    first: BTreeSet<usize>,
    last: BTreeSet<usize>,
}

impl Glushkov {
    fn walk(&mut self, l: &License) -> Info {
        match l {
            License::Zero => Info {
                nullable: false,
                first: BTreeSet::new(),
                last: BTreeSet::new(),
            },
            License::One => Info {
                nullable: true,
                first: BTreeSet::new(),
                last: BTreeSet::new(),
            },
            License::Atom(a) => {
                self.actions.push(a.clone());
                self.follow.push(BTreeSet::new());
                let p = self.actions.len();
                Info {
                    nullable: false,
                    first: BTreeSet::from([p]),
                    last: BTreeSet::from([p]),
                }
            }
            License::Concat(a, b) => {
                let x = self.walk(a);
                let y = self.walk(b);
                for &p in &x.last {
                    self.follow[p - 1].extend(y.first.iter().copied());
                }
                let mut first = x.first;
                if x.nullable {
                    first.extend(y.first.iter().copied());
                }
                let mut last = y.last;
                if y.nullable {
                    last.extend(x.last.iter().copied());
                }
                Info {
                    nullable: x.nullable && y.nullable,
                    first,
                    last,
                }
            }
            License::Union(a, b) => {
                let mut x = self.walk(a);
                let y = self.walk(b);
                x.first.extend(y.first);
                x.last.extend(y.last);
                Info {
                    nullable: x.nullable || y.nullable,
                    first: x.first,
                    last: x.last,
                }
            }
            License::Star(a) => {
                let x = self.walk(a);
                for &p in &x.last {
                    self.follow[p - 1].extend(x.first.iter().copied());
                }
                Info {
                    nullable: true,
                    first: x.first,
                    last: x.last,
                }
            }
        }
    }
}

/// Builds the trimmed position automaton of `l`.
pub fn build_nfa(l: &License) -> Nfa {
    let mut g = Glushkov {
        actions: Vec::new(),
        follow: Vec::new(),
    };
    let info = g.walk(l);
    let n = g.actions.len() + 1;
    let mut finals = vec![false; n];
    finals[0] = info.nullable;
    for &p in &info.last {
        finals[p] = true;
    }
    let mut trans = vec![Vec::new(); n];
    trans[0] = info
        .first
        .iter()
        .map(|&p| (g.actions[p - 1].clone(), p))
        .collect();
    for (i, f) in g.follow.iter().enumerate() {
        trans[i + 1] = f.iter().map(|&p| (g.actions[p - 1].clone(), p)).collect();
    }
    Nfa { finals, trans }.trimmed()
}

impl Nfa {
    /// Drops states that cannot reach a final state, keeping state `0`.
    fn trimmed(self) -> Nfa {
        let n = self.finals.len();
        let mut live = self.finals.clone();
        loop {
            let mut changed = false;
            for q in 0..n {
                if !live[q] && self.trans[q].iter().any(|(_, r)| live[*r]) {
                    live[q] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut renum = vec![usize::MAX; n];
        let mut next = 0;
        for q in 0..n {
            if q == 0 || live[q] {
                renum[q] = next;
                next += 1;
            }
        }
        let mut finals = vec![false; next];
        let mut trans = vec![Vec::new(); next];
        for q in 0..n {
            if renum[q] == usize::MAX {
                continue;
            }
            finals[renum[q]] = self.finals[q];
            let mut edges: Vec<(Action, StateId)> = self.trans[q]
                .iter()
                .filter(|(_, r)| live[*r])
                .map(|(a, r)| (a.clone(), renum[*r]))
                .collect();
            edges.sort();
            edges.dedup();
            trans[renum[q]] = edges;
        }
        Nfa { finals, trans }
    }

    /// The automaton of `ℓ·⊥*`: a fresh final state reached by `⊥` from every
    /// final state, looping on `⊥`.
    pub fn with_bot_padding(&self) -> Nfa {
        if !self.is_live() {
            return self.clone();
        }
        let pad = self.finals.len();
        let mut finals = self.finals.clone();
        finals.push(true);
        let mut trans = self.trans.clone();
        for (q, out) in trans.iter_mut().enumerate() {
            if self.finals[q] {
                out.push((Action::Bot, pad));
                out.sort();
            }
        }
        trans.push(vec![(Action::Bot, pad)]);
        Nfa { finals, trans }
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.trans.iter().map(Vec::len).sum()
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn transitions(&self, q: StateId) -> &[(Action, StateId)] {
        &self.trans[q]
    }

    /// Every `(source, action, target)` edge.
    pub fn edges(&self) -> impl Iterator<Item = (StateId, &Action, StateId)> + '_ {
        self.trans
            .iter()
            .enumerate()
            .flat_map(|(q, es)| es.iter().map(move |(a, r)| (q, a, *r)))
    }

    /// `Δ(q)`: the actions labelling edges out of `q`.
    pub fn actions_from(&self, q: StateId) -> BTreeSet<Action> {
        self.trans[q].iter().map(|(a, _)| a.clone()).collect()
    }

    /// Whether the accepted language is nonempty.
    pub fn is_live(&self) -> bool {
        self.finals[0] || !self.trans[0].is_empty()
    }

    /// The subset the automaton starts in: `{0}`, or empty for an empty language.
    pub fn start(&self) -> SubsetState {
        if self.is_live() {
            SubsetState(vec![0])
        } else {
            SubsetState::empty()
        }
    }

    pub fn accepts(&self, s: &[Action]) -> bool {
        let ss = s
            .iter()
            .fold(self.start(), |ss, a| step_subset(self, &ss, a));
        ss.states().iter().any(|&q| self.finals[q])
    }

    pub fn alphabet(&self) -> BTreeSet<Action> {
        self.edges().map(|(_, a, _)| a.clone()).collect()
    }

    /// Graphviz rendering of the automaton.
    pub fn to_dot(&self, title: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", title.replace('"', "'"));
        let _ = writeln!(out, "  rankdir=LR;");
        let _ = writeln!(out, "  init [shape=point];");
        for q in 0..self.num_states() {
            let shape = if self.finals[q] {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(out, "  q{q} [shape={shape}];");
        }
        let _ = writeln!(out, "  init -> q0;");
        for (q, a, r) in self.edges() {
            let _ = writeln!(out, "  q{q} -> q{r} [label=\"{a}\"];");
        }
        out.push_str("}\n");
        out
    }
}

/// The image of `ss` under `a`-transitions.
pub fn step_subset(nfa: &Nfa, ss: &SubsetState, a: &Action) -> SubsetState {
    SubsetState::from_states(
        ss.states()
            .iter()
            .flat_map(|&q| nfa.trans[q].iter().filter(|(b, _)| b == a).map(|(_, r)| *r)),
    )
}

/// `∪_{q∈ss} Δ(q)`, plus `⊥` when `padding_ok` and `ss` holds a final state.
/// The empty subset permits exactly `{⊥}`.
pub fn permitted_from(nfa: &Nfa, ss: &SubsetState, padding_ok: bool) -> BTreeSet<Action> {
    if ss.is_empty() {
        return BTreeSet::from([Action::Bot]);
    }
    let mut out: BTreeSet<Action> = ss
        .states()
        .iter()
        .flat_map(|&q| nfa.actions_from(q))
        .collect();
    if padding_ok && ss.states().iter().any(|&q| nfa.finals[q]) {
        out.insert(Action::Bot);
    }
    out
}

/// Iterates `⊥`-steps from `ss` until a subset repeats. The prefix starts with
/// `ss` itself unless `ss` lies on the cycle; the loop is never empty.
pub fn lasso_of(nfa: &Nfa, ss: &SubsetState) -> (Vec<SubsetState>, Vec<SubsetState>) {
    let mut seen: HashMap<SubsetState, usize> = HashMap::new();
    let mut seq = Vec::new();
    let mut cur = ss.clone();
    loop {
        if let Some(&i) = seen.get(&cur) {
            let lp = seq.split_off(i);
            return (seq, lp);
        }
        seen.insert(cur.clone(), seq.len());
        seq.push(cur.clone());
        cur = step_subset(nfa, &cur, &Action::Bot);
    }
}
