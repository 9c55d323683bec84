//! The `step` session: extend a run one command at a time.
//!
//! ```text
//! issue <name> <license>      issue a license now
//! do <name> <action> ...      record actions (name/action pairs) now, then advance the clock
//! wait [k]                    advance the clock by k steps (default 1)
//! show                        permitted and obligated actions now
//! eval <formula>              evaluate a formula now
//! undo                        revert the last change
//! quit
//! ```

use std::io::{self, BufRead, Write};

use lict_core::logic::eval;
use lict_core::{compute_permissions, parse_action, parse_formula, parse_license, Name, Run};

struct Session {
    run: Run,
    now: usize,
    history: Vec<(Run, usize)>,
}

impl Session {
    fn new(run: Run) -> Self {
        let empty = run.issuances().next().is_none() && run.mentioned_names().is_empty();
        let now = if empty { 0 } else { run.horizon() + 1 };
        Session {
            run,
            now,
            history: Vec::new(),
        }
    }

    fn change(
        &mut self,
        f: impl FnOnce(&mut Run, &mut usize) -> Result<(), String>,
    ) -> Result<(), String> {
        let (mut run, mut now) = (self.run.clone(), self.now);
        f(&mut run, &mut now)?;
        self.history
            .push((std::mem::replace(&mut self.run, run), self.now));
        self.now = now;
        self.run
            .set_horizon(self.now.max(self.run.horizon()))
            .map_err(|e| e.to_string())
    }

    fn show(&self) -> String {
        let perms = compute_permissions(&self.run);
        let mut out = format!("t={}", self.now);
        for n in self.run.mentioned_names() {
            let set: Vec<String> = perms
                .permitted(&n, self.now)
                .iter()
                .map(ToString::to_string)
                .collect();
            let obl = perms
                .obligated(&n, self.now)
                .map_or_else(|| "none".to_string(), ToString::to_string);
            let state = if perms.violated(&n, self.now) {
                " (violated)"
            } else {
                ""
            };
            out.push_str(&format!(
                "\n{n} permits={{{}}} obligated={obl}{state}",
                set.join(",")
            ));
        }
        out
    }

    /// Handles one line; `None` ends the session.
    fn handle(&mut self, line: &str) -> Option<Result<String, String>> {
        let line = line.trim();
        let (cmd, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        Some(match cmd {
            "" => Ok(String::new()),
            "quit" | "exit" => return None,
            "show" => Ok(self.show()),
            "issue" => {
                let Some((name, text)) = rest.split_once(char::is_whitespace) else {
                    return Some(Err("usage: issue <name> <license>".into()));
                };
                parse_license(text)
                    .map_err(|e| e.to_string())
                    .and_then(|l| {
                        self.change(|r, now| {
                            r.issue(Name::new(name), *now, l).map_err(|e| e.to_string())
                        })
                        .map(|()| format!("issued {name} at t={}", self.now))
                    })
            }
            "do" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                if words.is_empty() || !words.len().is_multiple_of(2) {
                    return Some(Err("usage: do <name> <action> [<name> <action> ...]".into()));
                }
                let mut pairs = Vec::new();
                for p in words.chunks(2) {
                    match parse_action(p[1]) {
                        Ok(a) => pairs.push((Name::new(p[0]), a)),
                        Err(e) => return Some(Err(e.to_string())),
                    }
                }
                self.change(|r, now| {
                    for (n, a) in pairs {
                        if !a.is_bot() {
                            r.perform(n, *now, a).map_err(|e| e.to_string())?;
                        }
                    }
                    *now += 1;
                    Ok(())
                })
                .map(|()| format!("t={}", self.now))
            }
            "wait" => {
                let k = if rest.is_empty() {
                    Ok(1)
                } else {
                    rest.parse::<usize>()
                        .map_err(|_| "usage: wait [k]".to_string())
                };
                k.and_then(|k| {
                    self.change(|_, now| {
                        *now += k;
                        Ok(())
                    })
                })
                .map(|()| format!("t={}", self.now))
            }
            "eval" => parse_formula(rest).map_err(|e| e.to_string()).map(|f| {
                let perms = compute_permissions(&self.run);
                format!(
                    "{} at t={}",
                    eval(&self.run, &perms, self.now, &f),
                    self.now
                )
            }),
            "undo" => match self.history.pop() {
                Some((run, now)) => {
                    self.run = run;
                    self.now = now;
                    Ok(format!("t={}", self.now))
                }
                None => Err("nothing to undo".into()),
            },
            other => Err(format!("unknown command `{other}`")),
        })
    }
}

/// Runs a session over `input`, writing replies to `output`. Errors in a
/// command are reported and the session continues.
pub fn run_repl<R: BufRead, W: Write>(run: Run, input: R, output: &mut W) -> io::Result<()> {
    if let Some(s) = run.repeat_from() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            format!("cannot step a run that repeats from time {s}"),
        ));
    }
    let mut session = Session::new(run);
    for line in input.lines() {
        match session.handle(&line?) {
            None => break,
            Some(Ok(reply)) if reply.is_empty() => {}
            Some(Ok(reply)) => writeln!(output, "{reply}")?,
            Some(Err(e)) => writeln!(output, "error: {e}")?,
        }
        output.flush()?;
    }
    Ok(())
}
