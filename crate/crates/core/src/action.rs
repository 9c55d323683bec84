//! Client actions, payment amounts, license names and traces.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// A non-negative payment amount with two fractional digits, stored in cents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Amount(u64);

impl Amount {
    pub const ZERO: Amount = Amount(0);

    pub fn from_cents(cents: u64) -> Self {
        Amount(cents)
    }

    pub fn cents(self) -> u64 {
        self.0
    }

    /// `self * n`, or `None` on overflow.
    pub fn times(self, n: u64) -> Option<Amount> {
        self.0.checked_mul(n).map(Amount)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid amount `{0}`: expected digits with at most two fractional digits")]
pub struct AmountError(pub String);

impl FromStr for Amount {
    type Err = AmountError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || AmountError(s.to_string());
        let (whole, frac) = match s.split_once('.') {
            Some((w, f)) => (w, f),
            None => (s, ""),
        };
        if whole.is_empty() || !whole.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        if s.contains('.') && frac.is_empty()
            || frac.len() > 2
            || !frac.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(err());
        }
        let whole: u64 = whole.parse().map_err(|_| err())?;
        let mut cents: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| err())?
        };
        if frac.len() == 1 {
            cents *= 10;
        }
        whole
            .checked_mul(100)
            .and_then(|w| w.checked_add(cents))
            .map(Amount)
            .ok_or_else(err)
    }
}

impl fmt::Display for Amount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

/// An opaque identifier for works and devices.
pub type Ident = Arc<str>;

/// One client action. `Bot` is the null action ⊥.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Bot,
    Pay(Amount),
    Render { work: Ident, device: Ident },
}

impl Action {
    pub fn render(work: &str, device: &str) -> Self {
        Action::Render {
            work: work.into(),
            device: device.into(),
        }
    }

    pub fn pay(amount: &str) -> Self {
        Action::Pay(amount.parse().expect("valid amount literal"))
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Action::Bot)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Bot => f.write_str("bot"),
            Action::Pay(x) => write!(f, "pay[{x}]"),
            Action::Render { work, device } => write!(f, "render[{work},{device}]"),
        }
    }
}

/// A license name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite sequence of actions.
pub type Trace = Vec<Action>;

/// Renders a trace as `<a,b,...>`; the empty trace prints as `<>`.
pub fn format_trace(trace: &[Action]) -> String {
    let items: Vec<String> = trace.iter().map(ToString::to_string).collect();
    format!("<{}>", items.join(","))
}
