//! Concrete syntax for actions, licenses and formulas.
//!
//! ```text
//! action   ::= bot | pay[<decimal>] | render[<work>,<device>]
//! license  ::= concat ('|' concat)*
//! concat   ::= postfix+
//! postfix  ::= atom '*'*
//! atom     ::= action | '(' license ')'
//! formula  ::= or ('->' formula)?
//! or       ::= and ('|' and)*
//! and      ::= until ('&' until)*
//! until    ::= unary ('U' until)?
//! unary    ::= ('!' | 'X' | 'G' | 'F') unary | primary
//! primary  ::= true | false | issue(<name>, license) | expr | P expr
//!            | O(<action>, <name>) | '(' formula ')'
//! expr     ::= '(' '~'? action ',' <name> ')' | '~'? sugar
//! sugar    ::= pay_<name>[<decimal>] | render_<name>[<work>,<device>] | bot_<name>
//! ```
//!
//! `=>` is accepted as a synonym for `->`.

use std::fmt;

use thiserror::Error;

use crate::action::{Action, Amount, Name};
use crate::license::License;
use crate::logic::{ActionExpr, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Word(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Bar,
    Star,
    Bang,
    Amp,
    Tilde,
    Arrow,
    At,
    Eq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Word(w) => return write!(f, "`{w}`"),
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrack => "`[`",
            Tok::RBrack => "`]`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Comma => "`,`",
            Tok::Bar => "`|`",
            Tok::Star => "`*`",
            Tok::Bang => "`!`",
            Tok::Amp => "`&`",
            Tok::Tilde => "`~`",
            Tok::Arrow => "`->`",
            Tok::At => "`@`",
            Tok::Eq => "`=`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

/// Splits `text` into tokens. Lines are numbered from `first_line`; `#` starts
/// a comment running to the end of the line.
pub(crate) fn tokenize(
    text: &str,
    first_line: usize,
) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut line = first_line;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        if is_word_char(c) {
            let mut w = String::new();
            while let Some(&c) = chars.peek() {
                if !is_word_char(c) {
                    break;
                }
                w.push(c);
                chars.next();
                col += 1;
            }
            out.push((Tok::Word(w), l0, c0));
            continue;
        }
        chars.next();
        col += 1;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '|' => Tok::Bar,
            '*' => Tok::Star,
            '!' => Tok::Bang,
            '&' => Tok::Amp,
            '~' => Tok::Tilde,
            '@' => Tok::At,
            '-' | '=' if chars.peek() == Some(&'>') => {
                chars.next();
                col += 1;
                Tok::Arrow
            }
            '=' => Tok::Eq,
            _ => {
                return Err(ParseError {
                    line: l0,
                    col: c0,
                    message: format!("unexpected character `{c}`"),
                });
            }
        };
        out.push((tok, l0, c0));
    }
    out.push((Tok::Eof, line, col));
    Ok(out)
}

pub(crate) struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

const ACTION_WORDS: [&str; 3] = ["bot", "pay", "render"];

impl Parser {
    pub(crate) fn new(text: &str, first_line: usize) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(text, first_line)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        let (_, line, col) = self.toks[self.pos];
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    pub(crate) fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&t.to_string()))
        }
    }

    pub(crate) fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn word(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Word(w) => {
                let w = w.clone();
                self.bump();
                Ok(w)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    pub(crate) fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Word(w) if w == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    pub(crate) fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w == kw)
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    pub(crate) fn natural(&mut self, what: &str) -> Result<usize, ParseError> {
        let here = self.error("");
        let w = self.word(what)?;
        w.parse().map_err(|_| ParseError {
            message: format!("expected {what}, found `{w}`"),
            ..here
        })
    }

    pub(crate) fn amount(&mut self) -> Result<Amount, ParseError> {
        let here = self.error("");
        let w = self.word("an amount")?;
        w.parse()
            .map_err(|e: crate::action::AmountError| ParseError {
                message: e.to_string(),
                ..here
            })
    }

    pub(crate) fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        let here = self.error("");
        let w = self.word(what)?;
        if w.contains('.') || w.is_empty() {
            return Err(ParseError {
                message: format!("invalid {what} `{w}`"),
                ..here
            });
        }
        Ok(w)
    }

    pub(crate) fn name(&mut self) -> Result<Name, ParseError> {
        Ok(Name::new(&self.ident("a license name")?))
    }

    fn action_body(&mut self, head: &str) -> Result<Action, ParseError> {
        match head {
            "bot" => Ok(Action::Bot),
            "pay" => {
                self.expect(Tok::LBrack)?;
                let x = self.amount()?;
                self.expect(Tok::RBrack)?;
                Ok(Action::Pay(x))
            }
            "render" => {
                self.expect(Tok::LBrack)?;
                let w = self.ident("a work")?;
                self.expect(Tok::Comma)?;
                let d = self.ident("a device")?;
                self.expect(Tok::RBrack)?;
                Ok(Action::render(&w, &d))
            }
            _ => unreachable!(),
        }
    }

    pub(crate) fn action(&mut self) -> Result<Action, ParseError> {
        match self.peek() {
            Tok::Word(w) if ACTION_WORDS.contains(&w.as_str()) => {
                let w = w.clone();
                self.bump();
                self.action_body(&w)
            }
            _ => Err(self.unexpected("an action")),
        }
    }

    fn starts_license_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen => true,
            Tok::Word(w) => ACTION_WORDS.contains(&w.as_str()) || w == "0" || w == "1",
            _ => false,
        }
    }

    pub(crate) fn license(&mut self) -> Result<License, ParseError> {
        let mut l = self.license_concat()?;
        while self.eat(&Tok::Bar) {
            let r = self.license_concat()?;
            l = License::union_raw(l, r);
        }
        Ok(l)
    }

    fn license_concat(&mut self) -> Result<License, ParseError> {
        let mut l = self.license_postfix()?;
        while self.starts_license_atom() {
            let r = self.license_postfix()?;
            l = License::concat_raw(l, r);
        }
        Ok(l)
    }

    fn license_postfix(&mut self) -> Result<License, ParseError> {
        let mut l = self.license_atom()?;
        while self.eat(&Tok::Star) {
            l = License::star_raw(l);
        }
        Ok(l)
    }

    fn license_atom(&mut self) -> Result<License, ParseError> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let l = self.license()?;
                self.expect(Tok::RParen)?;
                Ok(l)
            }
            Tok::Word(w) if w == "0" || w == "1" => Err(self.error(format!(
                "the constant `{w}` is not part of the license syntax"
            ))),
            _ => Ok(License::Atom(self.action()?)),
        }
    }

    /// Recognizes `pay_n`, `render_n` and `bot_n` words.
    fn sugar_head(&self) -> Option<(String, Name)> {
        let Tok::Word(w) = self.peek() else {
            return None;
        };
        for head in ACTION_WORDS {
            if let Some(rest) = w.strip_prefix(head).and_then(|r| r.strip_prefix('_')) {
                if !rest.is_empty() && !rest.contains('.') {
                    return Some((head.to_string(), Name::new(rest)));
                }
            }
        }
        None
    }

    fn sugar(&mut self) -> Result<Option<(Action, Name)>, ParseError> {
        let Some((head, name)) = self.sugar_head() else {
            return Ok(None);
        };
        self.bump();
        Ok(Some((self.action_body(&head)?, name)))
    }

    fn paren_starts_action(&self) -> bool {
        *self.peek() == Tok::LParen
            && match self.peek_at(1) {
                Tok::Tilde => true,
                Tok::Word(w) => ACTION_WORDS.contains(&w.as_str()),
                _ => false,
            }
    }

    fn action_expr(&mut self) -> Result<ActionExpr, ParseError> {
        if self.paren_starts_action() {
            self.bump();
            let complement = self.eat(&Tok::Tilde);
            let action = self.action()?;
            self.expect(Tok::Comma)?;
            let name = self.name()?;
            self.expect(Tok::RParen)?;
            return Ok(ActionExpr {
                action,
                name,
                complement,
            });
        }
        let complement = self.eat(&Tok::Tilde);
        match self.sugar()? {
            Some((action, name)) => Ok(ActionExpr {
                action,
                name,
                complement,
            }),
            None => Err(self.unexpected("an action expression")),
        }
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        let l = self.formula_or()?;
        if self.eat(&Tok::Arrow) {
            let r = self.formula()?;
            return Ok(Formula::implies(l, r));
        }
        Ok(l)
    }

    fn formula_or(&mut self) -> Result<Formula, ParseError> {
        let mut l = self.formula_and()?;
        while self.eat(&Tok::Bar) {
            l = Formula::or(l, self.formula_and()?);
        }
        Ok(l)
    }

    fn formula_and(&mut self) -> Result<Formula, ParseError> {
        let mut l = self.formula_until()?;
        while self.eat(&Tok::Amp) {
            l = Formula::and(l, self.formula_until()?);
        }
        Ok(l)
    }

    fn formula_until(&mut self) -> Result<Formula, ParseError> {
        let l = self.formula_unary()?;
        if self.at_keyword("U") {
            self.bump();
            let r = self.formula_until()?;
            return Ok(Formula::until(l, r));
        }
        Ok(l)
    }

    fn formula_unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Bang) {
            return Ok(Formula::not(self.formula_unary()?));
        }
        if let Tok::Word(w) = self.peek() {
            let op = match w.as_str() {
                "X" => Some(Formula::next as fn(Formula) -> Formula),
                "G" => Some(Formula::always as fn(Formula) -> Formula),
                "F" => Some(Formula::eventually as fn(Formula) -> Formula),
                _ => None,
            };
            if let Some(op) = op {
                self.bump();
                return Ok(op(self.formula_unary()?));
            }
        }
        self.formula_primary()
    }

    fn formula_primary(&mut self) -> Result<Formula, ParseError> {
        if self.paren_starts_action() || *self.peek() == Tok::Tilde || self.sugar_head().is_some() {
            return Ok(Formula::Act(self.action_expr()?));
        }
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Word(w) => match w.as_str() {
                "true" => {
                    self.bump();
                    Ok(Formula::True)
                }
                "false" => {
                    self.bump();
                    Ok(Formula::False)
                }
                "issue" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let n = self.name()?;
                    self.expect(Tok::Comma)?;
                    let l = self.license()?;
                    self.expect(Tok::RParen)?;
                    Ok(Formula::Issue(n, l))
                }
                "P" => {
                    self.bump();
                    Ok(Formula::Perm(self.action_expr()?))
                }
                "O" => {
                    self.bump();
                    if self.sugar_head().is_some() {
                        let (a, n) = self.sugar()?.expect("sugar head checked");
                        return Ok(Formula::Oblig(a, n));
                    }
                    self.expect(Tok::LParen)?;
                    let f = if let Some((a, n)) = self.sugar()? {
                        Formula::Oblig(a, n)
                    } else {
                        let a = self.action()?;
                        self.expect(Tok::Comma)?;
                        let n = self.name()?;
                        Formula::Oblig(a, n)
                    };
                    self.expect(Tok::RParen)?;
                    Ok(f)
                }
                _ => Err(self.unexpected("a formula")),
            },
            _ => Err(self.unexpected("a formula")),
        }
    }
}

pub fn parse_action(text: &str) -> Result<Action, ParseError> {
    let mut p = Parser::new(text, 1)?;
    let a = p.action()?;
    p.finish()?;
    Ok(a)
}

/// Parses a license. The constants `0` and `1` are rejected.
pub fn parse_license(text: &str) -> Result<License, ParseError> {
    let mut p = Parser::new(text, 1)?;
    let l = p.license()?;
    p.finish()?;
    Ok(l)
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, 1)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}
