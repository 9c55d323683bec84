use std::collections::HashMap;

use crate::action::Name;
use crate::lasso::Lasso;
use crate::logic::formula::{ActionExpr, Formula};
use crate::permissions::PermissionInterpretation;
use crate::run::Run;

/// The finite set of time points that represents all of a run's future.
pub fn run_lasso(p: &PermissionInterpretation) -> Lasso {
    let (start, period) = p.lasso_bounds();
    Lasso::new(start, period)
}

/// Direct model checker over one run, memoizing subformula truth vectors.
pub struct Evaluator<'a> {
    run: &'a Run,
    perms: &'a PermissionInterpretation,
    lasso: Lasso,
    memo: HashMap<Formula, Vec<bool>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(run: &'a Run, perms: &'a PermissionInterpretation) -> Self {
        Evaluator {
            run,
            perms,
            lasso: run_lasso(perms),
            memo: HashMap::new(),
        }
    }

    pub fn lasso(&self) -> Lasso {
        self.lasso
    }

    /// `r,t ⊨ φ`.
    pub fn holds(&mut self, t: usize, f: &Formula) -> bool {
        let pos = self.lasso.position(t);
        self.vector(&f.normalize())[pos]
    }

    /// Truth of a normalized formula at every lasso position.
    pub fn vector(&mut self, f: &Formula) -> Vec<bool> {
        if let Some(v) = self.memo.get(f) {
            return v.clone();
        }
        let n = self.lasso.len;
        let v = match f {
            Formula::True => vec![true; n],
            Formula::False => vec![false; n],
            Formula::Issue(name, l) => {
                let at = self
                    .run
                    .license(name)
                    .filter(|(_, l2)| *l2 == l)
                    .map(|(t, _)| t);
                (0..n).map(|i| Some(i) == at).collect()
            }
            Formula::Act(e) => (0..n)
                .map(|i| e.matches(&self.run.act(&e.name, i), &e.name))
                .collect(),
            Formula::Perm(e) => (0..n).map(|i| self.perm_at(e, i)).collect(),
            Formula::Not(a) => self.vector(a).into_iter().map(|x| !x).collect(),
            Formula::And(a, b) => {
                let (x, y) = (self.vector(a), self.vector(b));
                x.iter().zip(&y).map(|(p, q)| *p && *q).collect()
            }
            Formula::Next(a) => {
                let x = self.vector(a);
                self.lasso.next(&x)
            }
            Formula::Always(a) => {
                let x = self.vector(a);
                self.lasso.always(&x)
            }
            Formula::Until(a, b) => {
                let (x, y) = (self.vector(a), self.vector(b));
                self.lasso.until(&x, &y)
            }
            other => return self.vector(&other.normalize()),
        };
        self.memo.insert(f.clone(), v.clone());
        v
    }

    fn perm_at(&self, e: &ActionExpr, t: usize) -> bool {
        self.perms
            .permitted(&e.name, t)
            .iter()
            .any(|b| e.matches(b, &e.name))
    }
}

/// `r,t ⊨ φ` with `perms = compute_permissions(r)`.
pub fn eval(run: &Run, perms: &PermissionInterpretation, t: usize, f: &Formula) -> bool {
    Evaluator::new(run, perms).holds(t, f)
}

/// The earliest time at which `φ` fails, if any.
pub fn first_failure(run: &Run, perms: &PermissionInterpretation, f: &Formula) -> Option<usize> {
    let mut ev = Evaluator::new(run, perms);
    let v = ev.vector(&f.normalize());
    v.iter().position(|x| !x)
}

/// `r ⊨ φ`: `φ` holds at every time.
pub fn check_spec(run: &Run, f: &Formula) -> bool {
    let perms = crate::permissions::compute_permissions(run);
    first_failure(run, &perms, f).is_none()
}

/// Whether the pair `(b,m)` lies in `A⟦α⟧`.
pub fn interpret_action_expr(
    e: &ActionExpr,
) -> impl Fn(&crate::action::Action, &Name) -> bool + '_ {
    move |b, m| e.matches(b, m)
}
