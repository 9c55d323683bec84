use std::collections::BTreeSet;
use std::hash::Hash;

use crate::action::Name;
use crate::lasso::Lasso;
use crate::logic::run_lasso;
use crate::ltl::formula::{Ltl, Prop};
use crate::permissions::compute_permissions;
use crate::run::Run;

/// An ultimately periodic sequence of labelled states: after the last state
/// comes the state at `loop_start` again.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearStructure<P = Prop> {
    pub labels: Vec<BTreeSet<P>>,
    pub loop_start: usize,
}

impl<P: Ord> LinearStructure<P> {
    pub fn new(labels: Vec<BTreeSet<P>>, loop_start: usize) -> Self {
        assert!(loop_start < labels.len(), "the loop must be nonempty");
        LinearStructure { labels, loop_start }
    }

    pub fn lasso(&self) -> Lasso {
        Lasso::new(self.loop_start, self.labels.len() - self.loop_start)
    }

    /// `L(s_t)`.
    pub fn label(&self, t: usize) -> &BTreeSet<P> {
        &self.labels[self.lasso().position(t)]
    }

    pub fn holds(&self, t: usize, p: &P) -> bool {
        self.label(t).contains(p)
    }
}

/// `M_r`: labels every time of the run with the issuances, actions,
/// permissions and obligations it carries, together with the automaton
/// states of each license. `extra` adds names that the run never mentions.
pub fn build_structure(run: &Run, extra: &BTreeSet<Name>) -> LinearStructure {
    let perms = compute_permissions(run);
    let lasso = run_lasso(&perms);
    let mut names = run.mentioned_names();
    names.extend(extra.iter().cloned());
    let labels = (0..lasso.len)
        .map(|t| {
            let mut label = BTreeSet::new();
            for (n, l) in run.issued_at(t) {
                label.insert(Prop::Issued(n.clone(), l.clone()));
            }
            for n in &names {
                label.insert(Prop::Done(run.act(n, t), n.clone()));
                let set = perms.permitted(n, t);
                for a in set {
                    label.insert(Prop::Permitted(a.clone(), n.clone()));
                }
                if let Some(a) = perms.obligated(n, t) {
                    label.insert(Prop::Obligated(a.clone(), n.clone()));
                }
                match (perms.subset(n, t), run.license(n)) {
                    (Some(ss), Some((_, l))) if !ss.is_empty() => {
                        for &q in ss.states() {
                            label.insert(Prop::InState(n.clone(), l.clone(), q));
                        }
                    }
                    _ => {
                        label.insert(Prop::Over(n.clone()));
                    }
                }
            }
            label
        })
        .collect();
    LinearStructure::new(labels, lasso.start)
}

fn vector<P: Ord + Hash>(m: &LinearStructure<P>, lasso: &Lasso, f: &Ltl<P>) -> Vec<bool> {
    let n = lasso.len;
    let and = |x: Vec<bool>, y: Vec<bool>| {
        x.into_iter()
            .zip(y)
            .map(|(a, b)| a && b)
            .collect::<Vec<_>>()
    };
    match f {
        Ltl::True => vec![true; n],
        Ltl::False => vec![false; n],
        Ltl::Prop(p) => m.labels.iter().map(|l| l.contains(p)).collect(),
        Ltl::Not(a) => vector(m, lasso, a).into_iter().map(|x| !x).collect(),
        Ltl::And(v) => v
            .iter()
            .fold(vec![true; n], |acc, x| and(acc, vector(m, lasso, x))),
        Ltl::Or(v) => v.iter().fold(vec![false; n], |acc, x| {
            acc.into_iter()
                .zip(vector(m, lasso, x))
                .map(|(a, b)| a || b)
                .collect()
        }),
        Ltl::Implies(a, b) => {
            let (x, y) = (vector(m, lasso, a), vector(m, lasso, b));
            x.into_iter().zip(y).map(|(p, q)| !p || q).collect()
        }
        Ltl::Iff(a, b) => {
            let (x, y) = (vector(m, lasso, a), vector(m, lasso, b));
            x.into_iter().zip(y).map(|(p, q)| p == q).collect()
        }
        Ltl::Next(a) => lasso.next(&vector(m, lasso, a)),
        Ltl::Always(a) => lasso.always(&vector(m, lasso, a)),
        Ltl::Eventually(a) => lasso.until(&vec![true; n], &vector(m, lasso, a)),
        Ltl::Until(a, b) => lasso.until(&vector(m, lasso, a), &vector(m, lasso, b)),
    }
}

/// Truth of `f` at every state of `m`.
pub fn ltl_eval_all<P: Ord + Hash>(m: &LinearStructure<P>, f: &Ltl<P>) -> Vec<bool> {
    vector(m, &m.lasso(), f)
}

/// `M, s_t ⊨ F`.
pub fn ltl_eval<P: Ord + Hash>(m: &LinearStructure<P>, t: usize, f: &Ltl<P>) -> bool {
    let lasso = m.lasso();
    vector(m, &lasso, f)[lasso.position(t)]
}
