//! The license logic: formulas, their direct semantics over runs, and the
//! formulas encoding finite runs and the consequences of issuing a license.

mod encode;
mod eval;
mod formula;

pub use encode::{encode_run, license_consequences, non_violation_family, NotFinite};
pub use eval::{check_spec, eval, first_failure, interpret_action_expr, run_lasso, Evaluator};
pub use formula::{ActionExpr, Formula};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{Action, Name};
    use crate::permissions::compute_permissions;
    use crate::run::parse_run;
    use crate::syntax::{parse_formula, parse_license};

    const JOURNAL_RUN: &str = "\
@0 issue n = ((pay[1.00] bot* render[journal,d]) | bot)*
@0 do n pay[1.00]
@1 do n bot
@2 do n render[journal,d]
";

    fn n() -> Name {
        Name::new("n")
    }

    #[test]
    fn action_expr_interpretation() {
        let pos = ActionExpr::pos(Action::pay("1"), n());
        let neg = pos.complemented();
        assert!(pos.matches(&Action::pay("1"), &n()));
        assert!(!pos.matches(&Action::pay("2"), &n()));
        assert!(neg.matches(&Action::render("w", "d"), &n()));
        assert!(!neg.matches(&Action::render("w", "d"), &Name::new("m")));
        assert!(!neg.matches(&Action::pay("1"), &n()));
        let not_bot = ActionExpr::neg(Action::Bot, n());
        let f = interpret_action_expr(&not_bot);
        assert!(f(&Action::pay("0"), &n()));
        assert!(!f(&Action::Bot, &n()));
    }

    #[test]
    fn journal_property() {
        let r = parse_run(JOURNAL_RUN).unwrap();
        let p = compute_permissions(&r);
        let f = parse_formula("pay_n[1.00] => X(!O(render_n[journal,d]))").unwrap();
        assert!(eval(&r, &p, 0, &f));
        assert!(check_spec(&r, &f));
    }

    #[test]
    fn non_violation() {
        let l = parse_license("((pay[1.00] bot* render[journal,d]) | bot)*").unwrap();
        let acts = [
            Action::pay("1"),
            Action::render("journal", "d"),
            Action::Bot,
        ];
        let fam = non_violation_family(&n(), &l, &acts);
        let good = parse_run(JOURNAL_RUN).unwrap();
        assert!(fam.iter().all(|f| check_spec(&good, f)));
        let bad = parse_run(
            "@0 issue n = ((pay[1.00] bot* render[journal,d]) | bot)*\n@0 do n render[journal,d]\n",
        )
        .unwrap();
        assert!(!fam.iter().all(|f| check_spec(&bad, f)));
        assert!(check_spec(&bad, &parse_formula("G true").unwrap()));
    }

    #[test]
    fn negation_and_unfolding() {
        let r = parse_run(JOURNAL_RUN).unwrap();
        let p = compute_permissions(&r);
        for text in [
            "P(render[journal,d], n)",
            "F (render[journal,d], n)",
            "(bot, n) U (render[journal,d], n)",
        ] {
            let f = parse_formula(text).unwrap();
            for t in 0..6 {
                assert_eq!(
                    eval(&r, &p, t, &Formula::not(f.clone())),
                    !eval(&r, &p, t, &f)
                );
            }
        }
        let g = parse_formula("G P(bot, n)").unwrap();
        let Formula::Always(inner) = &g else {
            unreachable!()
        };
        for t in 0..6 {
            let unfolded = Formula::and((**inner).clone(), Formula::next(g.clone()));
            assert_eq!(eval(&r, &p, t, &g), eval(&r, &p, t, &unfolded));
        }
    }

    #[test]
    fn encoding_shapes() {
        let empty = parse_run("").unwrap();
        let f = encode_run(&empty).unwrap();
        assert_eq!(
            f,
            Formula::and(Formula::True, Formula::next(Formula::always(Formula::True)))
        );
        let r = parse_run(JOURNAL_RUN).unwrap();
        let psi = encode_run(&r).unwrap();
        let p = compute_permissions(&r);
        assert!(eval(&r, &p, 0, &psi));
        assert!(!eval(&r, &p, 1, &psi));
        assert!(encode_run(&parse_run("@0 do n bot\nloop 0").unwrap()).is_err());
    }

    #[test]
    fn consequences() {
        let pay = parse_license("pay[1]").unwrap();
        assert_eq!(
            license_consequences(&n(), &pay, 0),
            Formula::perm(Action::pay("1"), &n())
        );
        let ab = parse_license("pay[1] bot").unwrap();
        let want = Formula::and(
            Formula::perm(Action::pay("1"), &n()),
            Formula::implies(
                Formula::act(Action::pay("1"), &n()),
                Formula::next(Formula::perm(Action::Bot, &n())),
            ),
        );
        assert_eq!(license_consequences(&n(), &ab, 1), want);
    }

    #[test]
    fn name_sets() {
        let f = parse_formula("issue(n, pay[1]) -> O(bot, m) | P (~render[w,d], k)").unwrap();
        let names: Vec<String> = f.names().iter().map(ToString::to_string).collect();
        assert_eq!(names, ["k", "m", "n"]);
        assert_eq!(f.actions().len(), 2);
        assert_eq!(f.issuances().len(), 1);
    }
}
