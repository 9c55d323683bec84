use std::collections::BTreeSet;

use lict_core::{
    compile_dr, compute_permissions, dr_traces, Amount, DrLicense, Name, Repetition, Run, Schedule,
};
use proptest::prelude::*;

fn dr() -> impl Strategy<Value = DrLicense> {
    let rep = (1usize..=3, 1usize..=2, 0..3).prop_map(|(p, m, k)| match k {
        0 => Repetition::Single(p),
        1 => Repetition::Exactly(m, p),
        _ => Repetition::Upto(m, p),
    });
    let sched = prop_oneof![
        Just(Schedule::UpFront),
        Just(Schedule::FlatRate),
        Just(Schedule::PerUse)
    ];
    let ids = |prefix: &'static str| {
        (1usize..=2).prop_map(move |k| {
            (0..k)
                .map(|i| format!("{prefix}{i}"))
                .collect::<BTreeSet<_>>()
        })
    };
    (rep, 0u64..500, sched, ids("w"), ids("d")).prop_map(
        |(repetition, cents, schedule, works, devices)| DrLicense {
            repetition,
            amount: Amount::from_cents(cents),
            schedule,
            works,
            devices,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn compilation_preserves_traces(e in dr()) {
        let span = e.repetition.period() * e.repetition.max_periods();
        let direct = dr_traces(&e, span).unwrap();
        prop_assert_eq!(compile_dr(&e, span).unwrap().traces(span), direct.clone());
        let p = e.repetition.period();
        prop_assert!(direct.iter().all(|t| t.len() % p == 0 && t.len() <= span));
    }

    #[test]
    fn upto_grows_with_its_bound(e in dr()) {
        if let Repetition::Upto(m, p) = e.repetition {
            let all = dr_traces(&e, 100).unwrap();
            prop_assert!(all.contains(&Vec::new()));
            if m > 1 {
                let fewer = DrLicense { repetition: Repetition::Upto(m - 1, p), ..e.clone() };
                prop_assert!(dr_traces(&fewer, 100).unwrap().is_subset(&all));
            }
        }
    }

    #[test]
    fn following_a_trace_never_violates(e in dr()) {
        let l = compile_dr(&e, 100).unwrap();
        let n = Name::new("n");
        for t in dr_traces(&e, 100).unwrap() {
            let mut r = Run::new();
            r.issue(n.clone(), 0, l.clone()).unwrap();
            for (i, a) in t.iter().enumerate() {
                if !a.is_bot() {
                    r.perform(n.clone(), i, a.clone()).unwrap();
                }
            }
            r.set_horizon(t.len()).unwrap();
            let perms = compute_permissions(&r);
            for i in 0..=t.len() + 2 {
                prop_assert!(!perms.violated(&n, i));
                prop_assert!(perms.is_permitted(&n, i, &r.act(&n, i)), "{} at {}", e, i);
            }
        }
    }
}
