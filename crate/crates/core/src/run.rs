//! Runs: which licenses are issued when, and what the client does under each name.
//!
//! Run files are line oriented:
//!
//! ```text
//! # comment
//! @0 issue n = ((pay[1.00] bot* render[journal,d]) | bot)*
//! @0 do n pay[1.00]
//! @2 do n render[journal,d]
//! horizon 4      # optional: extend t_f past the last event
//! loop 1         # optional: actions at t_f+1, ... repeat those from time 1 on
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::action::{Action, Name, Trace};
use crate::license::License;
use crate::syntax::{ParseError, Parser, Tok};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("name reused: `{0}` is already bound to a license")]
    NameReused(Name),
    #[error("two actions for `{name}` at time {time}")]
    DoubleAction { name: Name, time: usize },
    #[error("no license named `{0}` is issued")]
    NotIssued(Name),
    #[error("loop start {start} lies past the horizon {horizon}")]
    LoopOutOfRange { start: usize, horizon: usize },
    #[error("horizon {horizon} is before the last event at time {last}")]
    HorizonTooSmall { horizon: usize, last: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: {source}")]
    Line { line: usize, source: Box<RunError> },
}

/// A finite run. After the horizon `t_f` nothing is issued and, unless a
/// loop start is set, every name does `⊥`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Run {
    horizon: usize,
    issued: BTreeMap<Name, (usize, License)>,
    actions: BTreeMap<usize, BTreeMap<Name, Action>>,
    repeat_from: Option<usize>,
}

impl Run {
    pub fn new() -> Self {
        Run::default()
    }

    /// `t_f`.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    fn last_event(&self) -> usize {
        let a = self.actions.keys().next_back().copied().unwrap_or(0);
        let i = self.issued.values().map(|(t, _)| *t).max().unwrap_or(0);
        a.max(i)
    }

    /// Sets `t_f`; it may not drop below the last recorded event.
    pub fn set_horizon(&mut self, horizon: usize) -> Result<(), RunError> {
        let last = self.last_event();
        if horizon < last {
            return Err(RunError::HorizonTooSmall { horizon, last });
        }
        if let Some(start) = self.repeat_from {
            if start > horizon {
                return Err(RunError::LoopOutOfRange { start, horizon });
            }
        }
        self.horizon = horizon;
        Ok(())
    }

    pub fn repeat_from(&self) -> Option<usize> {
        self.repeat_from
    }

    /// Makes the actions of times `start..=t_f` repeat forever after `t_f`.
    pub fn set_repeat_from(&mut self, start: Option<usize>) -> Result<(), RunError> {
        if let Some(s) = start {
            if s > self.horizon {
                return Err(RunError::LoopOutOfRange {
                    start: s,
                    horizon: self.horizon,
                });
            }
        }
        self.repeat_from = start;
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.repeat_from.is_none()
    }

    /// Issues `license` under `name` at time `t`, extending the horizon if needed.
    pub fn issue(&mut self, name: Name, t: usize, license: License) -> Result<(), RunError> {
        if self.issued.contains_key(&name) {
            return Err(RunError::NameReused(name));
        }
        self.issued.insert(name, (t, license));
        self.horizon = self.horizon.max(t);
        Ok(())
    }

    /// Records that the client does `a` under `name` at time `t`.
    pub fn perform(&mut self, name: Name, t: usize, a: Action) -> Result<(), RunError> {
        let slot = self.actions.entry(t).or_default();
        if slot.contains_key(&name) {
            return Err(RunError::DoubleAction { name, time: t });
        }
        slot.insert(name, a);
        self.horizon = self.horizon.max(t);
        Ok(())
    }

    /// `act(r,t)` restricted to `name`; absent entries are `⊥`.
    pub fn act(&self, name: &Name, t: usize) -> Action {
        let t = self.fold_time(t);
        self.actions
            .get(&t)
            .and_then(|m| m.get(name))
            .cloned()
            .unwrap_or(Action::Bot)
    }

    /// Maps a time past the horizon to the time whose actions it repeats.
    pub fn fold_time(&self, t: usize) -> usize {
        match self.repeat_from {
            Some(s) if t > self.horizon => s + (t - s) % (self.horizon - s + 1),
            _ => t,
        }
    }

    /// Explicitly recorded actions at time `t`.
    pub fn recorded(&self, t: usize) -> impl Iterator<Item = (&Name, &Action)> {
        self.actions.get(&t).into_iter().flat_map(|m| m.iter())
    }

    /// The license issued under `name` and its issuance time.
    pub fn license(&self, name: &Name) -> Option<(usize, &License)> {
        self.issued.get(name).map(|(t, l)| (*t, l))
    }

    /// Every issuance as `(name, time, license)`.
    pub fn issuances(&self) -> impl Iterator<Item = (&Name, usize, &License)> {
        self.issued.iter().map(|(n, (t, l))| (n, *t, l))
    }

    /// `lic(r,t)`.
    pub fn issued_at(&self, t: usize) -> impl Iterator<Item = (&Name, &License)> {
        self.issued
            .iter()
            .filter(move |(_, (u, _))| *u == t)
            .map(|(n, (_, l))| (n, l))
    }

    /// Whether the license named `name` has been issued by time `t`.
    pub fn active(&self, name: &Name, t: usize) -> bool {
        self.issued.get(name).is_some_and(|(u, _)| *u <= t)
    }

    /// `N_r`: the names of issued licenses.
    pub fn names(&self) -> BTreeSet<Name> {
        self.issued.keys().cloned().collect()
    }

    /// Issued names together with every name that has a recorded action.
    pub fn mentioned_names(&self) -> BTreeSet<Name> {
        let mut out = self.names();
        for m in self.actions.values() {
            out.extend(m.keys().cloned());
        }
        out
    }

    /// `r[n,t]`: the actions done under `name` from its issuance up to, not including, `t`.
    pub fn action_sequence(&self, name: &Name, t: usize) -> Result<Trace, RunError> {
        let (t1, _) = self
            .issued
            .get(name)
            .ok_or_else(|| RunError::NotIssued(name.clone()))?;
        Ok((*t1..t).map(|u| self.act(name, u)).collect())
    }

    /// Every license occurring in the run.
    pub fn licenses(&self) -> impl Iterator<Item = &License> {
        self.issued.values().map(|(_, l)| l)
    }
}

fn parse_line(
    run: &mut Run,
    p: &mut Parser,
    deferred: &mut Vec<(usize, usize, bool)>,
    line: usize,
) -> Result<(), RunError> {
    match p.peek() {
        Tok::Eof => return Ok(()),
        Tok::At => {
            p.expect(Tok::At)?;
            let t = p.natural("a time")?;
            if p.at_keyword("issue") {
                p.keyword("issue")?;
                let n = p.name()?;
                p.expect(Tok::Eq)?;
                let l = p.license()?;
                p.finish()?;
                run.issue(n, t, l)?;
            } else {
                p.keyword("do")?;
                let n = p.name()?;
                let a = p.action()?;
                p.finish()?;
                run.perform(n, t, a)?;
            }
        }
        _ if p.at_keyword("horizon") || p.at_keyword("loop") => {
            let is_loop = p.at_keyword("loop");
            p.word("a directive")?;
            let t = p.natural("a time")?;
            p.finish()?;
            deferred.push((line, t, is_loop));
        }
        _ => return Err(p.error("expected `@<time>`, `horizon` or `loop`").into()),
    }
    Ok(())
}

/// Parses a run file.
pub fn parse_run(text: &str) -> Result<Run, RunError> {
    let mut run = Run::new();
    let mut deferred = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut p = Parser::new(line, i + 1)?;
        parse_line(&mut run, &mut p, &mut deferred, i + 1).map_err(|e| match e {
            RunError::Parse(_) => e,
            other => RunError::Line {
                line: i + 1,
                source: Box::new(other),
            },
        })?;
    }
    deferred.sort_by_key(|(_, _, is_loop)| *is_loop);
    for (line, t, is_loop) in deferred {
        let r = if is_loop {
            run.set_repeat_from(Some(t))
        } else {
            run.set_horizon(t)
        };
        r.map_err(|e| RunError::Line {
            line,
            source: Box::new(e),
        })?;
    }
    Ok(run)
}

impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut issued: Vec<_> = self.issuances().collect();
        issued.sort_by_key(|(n, t, _)| (*t, (*n).clone()));
        let mut ti = issued.into_iter().peekable();
        for (t, m) in &self.actions {
            while let Some((n, u, l)) = ti.next_if(|(_, u, _)| u <= t) {
                writeln!(f, "@{u} issue {n} = {l}")?;
            }
            for (n, a) in m {
                writeln!(f, "@{t} do {n} {a}")?;
            }
        }
        for (n, u, l) in ti {
            writeln!(f, "@{u} issue {n} = {l}")?;
        }
        if self.horizon > self.last_event() {
            writeln!(f, "horizon {}", self.horizon)?;
        }
        if let Some(s) = self.repeat_from {
            writeln!(f, "loop {s}")?;
        }
        Ok(())
    }
}
