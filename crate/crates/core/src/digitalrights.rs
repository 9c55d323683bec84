//! A small rights-expression language for media licenses and its
//! compilation to regular licenses.
//!
//! ```text
//! dr    ::= 'for' ['upto'] [<m>] <p> 'pay' <amount> sched 'for' set 'on' set
//! sched ::= 'upfront' | 'flatrate' | 'peruse'
//! set   ::= '{' <ident> (',' <ident>)* '}'
//! ```
//!
//! A period of length `p` has `p-1` slots in which the client may render any
//! work on any device or do nothing, plus one payment: first for `upfront`,
//! last for `flatrate` and `peruse`. A `peruse` payment is the amount times
//! the number of renders in the period.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::action::{Action, Amount, Trace};
use crate::license::License;
use crate::syntax::{ParseError, Parser, Tok};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Schedule {
    UpFront,
    FlatRate,
    PerUse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Repetition {
    /// One period of length `p`.
    Single(usize),
    /// `m` consecutive periods of length `p`.
    Exactly(usize, usize),
    /// Between zero and `m` consecutive periods of length `p`.
    Upto(usize, usize),
}

impl Repetition {
    pub fn period(self) -> usize {
        match self {
            Repetition::Single(p) | Repetition::Exactly(_, p) | Repetition::Upto(_, p) => p,
        }
    }

    pub fn max_periods(self) -> usize {
        match self {
            Repetition::Single(_) => 1,
            Repetition::Exactly(m, _) | Repetition::Upto(m, _) => m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrLicense {
    pub repetition: Repetition,
    pub amount: Amount,
    pub schedule: Schedule,
    pub works: BTreeSet<String>,
    pub devices: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DrError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{periods} periods of length {period} exceed the cap of {cap} time units")]
    TooLong {
        period: usize,
        periods: usize,
        cap: usize,
    },
    #[error("payment amount overflows")]
    Overflow,
}

fn set(p: &mut Parser, what: &str) -> Result<BTreeSet<String>, ParseError> {
    p.expect(Tok::LBrace)?;
    let mut out = BTreeSet::from([p.ident(what)?]);
    while p.eat(&Tok::Comma) {
        out.insert(p.ident(what)?);
    }
    p.expect(Tok::RBrace)?;
    Ok(out)
}

pub fn parse_dr(text: &str) -> Result<DrLicense, ParseError> {
    let mut p = Parser::new(text, 1)?;
    p.keyword("for")?;
    let upto = p.at_keyword("upto");
    if upto {
        p.keyword("upto")?;
    }
    let here = p.error("");
    let first = p.natural("a period count or length")?;
    let second = if p.at_keyword("pay") {
        None
    } else {
        Some(p.natural("a period length")?)
    };
    let positive = |n: usize, what: &str| {
        if n == 0 {
            Err(ParseError {
                message: format!("{what} must be at least 1"),
                ..here.clone()
            })
        } else {
            Ok(n)
        }
    };
    let repetition = match (upto, second) {
        (false, None) => Repetition::Single(positive(first, "the period length")?),
        (false, Some(pl)) => Repetition::Exactly(
            positive(first, "the period count")?,
            positive(pl, "the period length")?,
        ),
        (true, Some(pl)) => Repetition::Upto(
            positive(first, "the period count")?,
            positive(pl, "the period length")?,
        ),
        (true, None) => {
            return Err(ParseError {
                message: "`upto` needs a period count and a period length".into(),
                ..here
            })
        }
    };
    p.keyword("pay")?;
    let amount = p.amount()?;
    let schedule = match p.word("a schedule")?.as_str() {
        "upfront" => Schedule::UpFront,
        "flatrate" => Schedule::FlatRate,
        "peruse" => Schedule::PerUse,
        other => {
            return Err(p.error(format!(
                "expected `upfront`, `flatrate` or `peruse`, found `{other}`"
            )))
        }
    };
    p.keyword("for")?;
    let works = set(&mut p, "a work")?;
    p.keyword("on")?;
    let devices = set(&mut p, "a device")?;
    p.finish()?;
    Ok(DrLicense {
        repetition,
        amount,
        schedule,
        works,
        devices,
    })
}

impl fmt::Display for DrLicense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repetition {
            Repetition::Single(p) => write!(f, "for {p}")?,
            Repetition::Exactly(m, p) => write!(f, "for {m} {p}")?,
            Repetition::Upto(m, p) => write!(f, "for upto {m} {p}")?,
        }
        let sched = match self.schedule {
            Schedule::UpFront => "upfront",
            Schedule::FlatRate => "flatrate",
            Schedule::PerUse => "peruse",
        };
        let join = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(",");
        write!(
            f,
            " pay {} {sched} for {{{}}} on {{{}}}",
            self.amount,
            join(&self.works),
            join(&self.devices)
        )
    }
}

impl DrLicense {
    /// The renders the license allows in a free slot.
    pub fn renders(&self) -> Vec<Action> {
        self.works
            .iter()
            .flat_map(|w| self.devices.iter().map(move |d| Action::render(w, d)))
            .collect()
    }

    fn check_cap(&self, cap: usize) -> Result<(), DrError> {
        let (period, periods) = (self.repetition.period(), self.repetition.max_periods());
        match period.checked_mul(periods) {
            Some(n) if n <= cap => Ok(()),
            _ => Err(DrError::TooLong {
                period,
                periods,
                cap,
            }),
        }
    }

    fn pay(&self, uses: usize) -> Result<Action, DrError> {
        match self.schedule {
            Schedule::PerUse => self
                .amount
                .times(uses as u64)
                .map(Action::Pay)
                .ok_or(DrError::Overflow),
            _ => Ok(Action::Pay(self.amount)),
        }
    }
}

/// The traces of one period.
fn period_traces(e: &DrLicense) -> Result<BTreeSet<Trace>, DrError> {
    let p = e.repetition.period();
    let mut slots: Vec<Action> = vec![Action::Bot];
    slots.extend(e.renders());
    let mut fills: Vec<Trace> = vec![Vec::new()];
    for _ in 1..p {
        fills = fills
            .iter()
            .flat_map(|s| {
                slots.iter().map(move |a| {
                    let mut s = s.clone();
                    s.push(a.clone());
                    s
                })
            })
            .collect();
    }
    let mut out = BTreeSet::new();
    for s in fills {
        let uses = s.iter().filter(|a| !a.is_bot()).count();
        let pay = e.pay(uses)?;
        let t = match e.schedule {
            Schedule::UpFront => std::iter::once(pay).chain(s).collect(),
            Schedule::FlatRate | Schedule::PerUse => {
                s.into_iter().chain(std::iter::once(pay)).collect()
            }
        };
        out.insert(t);
    }
    Ok(out)
}

fn concat_sets(a: &BTreeSet<Trace>, b: &BTreeSet<Trace>) -> BTreeSet<Trace> {
    a.iter()
        .flat_map(|x| {
            b.iter().map(move |y| {
                let mut s = x.clone();
                s.extend(y.iter().cloned());
                s
            })
        })
        .collect()
}

/// The trace set of `e`, enumerated directly. Fails when the licensed time
/// span `p·m` exceeds `cap`.
pub fn dr_traces(e: &DrLicense, cap: usize) -> Result<BTreeSet<Trace>, DrError> {
    e.check_cap(cap)?;
    let one = period_traces(e)?;
    let power = |n: usize| {
        (0..n).fold(BTreeSet::from([Vec::new()]), |acc, _| {
            concat_sets(&acc, &one)
        })
    };
    Ok(match e.repetition {
        Repetition::Single(_) => one,
        Repetition::Exactly(m, _) => power(m),
        Repetition::Upto(m, _) => (0..=m).flat_map(power).collect(),
    })
}

/// `k` slots containing exactly `n` renders.
fn slots_with(
    k: usize,
    n: usize,
    render: &License,
    memo: &mut Vec<Vec<Option<License>>>,
) -> License {
    if n > k {
        return License::Zero;
    }
    if k == 0 {
        return License::One;
    }
    if let Some(l) = &memo[k][n] {
        return l.clone();
    }
    let quiet = License::concat(
        License::atom(Action::Bot),
        slots_with(k - 1, n, render, memo),
    );
    let l = if n == 0 {
        quiet
    } else {
        let busy = License::concat(render.clone(), slots_with(k - 1, n - 1, render, memo));
        License::union(quiet, busy)
    };
    memo[k][n] = Some(l.clone());
    l
}

/// A regular license with the same trace set as `e`.
pub fn compile_dr(e: &DrLicense, cap: usize) -> Result<License, DrError> {
    e.check_cap(cap)?;
    let p = e.repetition.period();
    let render = License::any(e.renders().into_iter().map(License::atom));
    let slot = License::union(License::atom(Action::Bot), render.clone());
    let free = License::seq(std::iter::repeat_n(slot, p - 1));
    let period = match e.schedule {
        Schedule::UpFront => License::concat(License::atom(e.pay(0)?), free),
        Schedule::FlatRate => License::concat(free, License::atom(e.pay(0)?)),
        Schedule::PerUse => {
            let mut memo = vec![vec![None; p]; p];
            let mut classes = Vec::with_capacity(p);
            for n in 0..p {
                let pay = License::atom(e.pay(n)?);
                classes.push(License::concat(
                    slots_with(p - 1, n, &render, &mut memo),
                    pay,
                ));
            }
            License::any(classes)
        }
    };
    let power = |n: usize| License::seq(std::iter::repeat_n(period.clone(), n));
    Ok(match e.repetition {
        Repetition::Single(_) => period,
        Repetition::Exactly(m, _) => power(m),
        Repetition::Upto(m, _) => License::any((0..=m).map(power)),
    })
}
