//! Workloads shared by the benchmarks.

use lict_core::{parse_license, Action, License, Name, Run};

pub fn journal_license() -> License {
    parse_license("((pay[1.00] bot* render[journal,d]) | bot)*").unwrap()
}

/// A compliant journal run of horizon `tf`: pay, idle, read, repeated.
pub fn journal_run(tf: usize) -> Run {
    let n = Name::new("n");
    let mut r = Run::new();
    r.issue(n.clone(), 0, journal_license()).unwrap();
    for t in 0..=tf {
        match t % 3 {
            0 => r.perform(n.clone(), t, Action::pay("1.00")).unwrap(),
            2 => r
                .perform(n.clone(), t, Action::render("journal", "d"))
                .unwrap(),
            _ => {}
        }
    }
    r.set_horizon(tf).unwrap();
    r
}
