//! A small expression language over the named generators of the groupoid.
//!
//! ```text
//! word   := term (('•' | '*') term)*
//! term   := factor (('⊕' | '+') factor)*
//! factor := (atom | '(' word ')') ('^-1')*
//! atom   := x[c] | tau[g] | p[cycles, n] | id[n] | iota0[g] | iota1[c, g]
//! ```
//!
//! `a • b` is the composite `a ∘ b`, so `b` acts first. Atom arguments are
//! kept as text and interpreted by the action at evaluation time.

use std::fmt;
use std::str::FromStr;

use crate::action::GroupAction;
use crate::element::Element;
use crate::error::{Error, Result};

mod factor;

pub use factor::{
    factorize, generating_graph, iota0, iota1, rho, FactorAtom, FactorWord, GeneratingGraph,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Word {
    Split(String),
    Tau(String),
    /// `p[(a b c)(d e), n]`: cycles with 1-based entries.
    Perm {
        cycles: Vec<Vec<usize>>,
        n: usize,
    },
    Id(usize),
    Iota0(String),
    Iota1(String, String),
    Compose(Vec<Word>),
    Sum(Vec<Word>),
    Inverse(Box<Word>),
}

impl Word {
    /// Error positions count characters, not bytes.
    pub fn parse(text: &str) -> Result<Word> {
        let mut p = Parser { text, pos: 0 };
        let parsed = p.word().and_then(|w| {
            p.skip_ws();
            if p.pos != text.len() {
                return Err(Error::parse(p.pos, "unexpected trailing input"));
            }
            Ok(w)
        });
        parsed.map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse {
                pos: text.get(..pos).map_or(pos, |t| t.chars().count()),
                msg,
            },
            other => other,
        })
    }

    /// Evaluates the word; composition nodes check rank against corank.
    pub fn evaluate<A: GroupAction>(&self, action: &A) -> Result<Element<A>> {
        Ok(match self {
            Word::Split(c) => Element::simple_split(action.clone(), action.parse_color(c)?)?,
            Word::Tau(g) | Word::Iota0(g) => iota0(action, action.parse_elem(g)?),
            Word::Perm { cycles, n } => {
                Element::permutation(action.clone(), &cycle_images(cycles, *n)?)?
            }
            Word::Id(n) => Element::identity(action.clone(), *n),
            Word::Iota1(c, g) => iota1(action, action.parse_color(c)?, action.parse_elem(g)?)?,
            Word::Compose(parts) => {
                let (last, rest) = parts.split_last().expect("nonempty composite");
                let mut acc = last.evaluate(action)?;
                for w in rest.iter().rev() {
                    acc = w.evaluate(action)?.compose(&acc)?;
                }
                acc
            }
            Word::Sum(parts) => {
                let values = parts
                    .iter()
                    .map(|w| w.evaluate(action))
                    .collect::<Result<Vec<_>>>()?;
                Element::direct_sum_all(&values)?
            }
            Word::Inverse(w) => w.evaluate(action)?.inverse(),
        })
    }
}

fn cycle_images(cycles: &[Vec<usize>], n: usize) -> Result<Vec<usize>> {
    let mut images: Vec<usize> = (1..=n).collect();
    let mut used = vec![false; n];
    for cycle in cycles {
        for (k, &a) in cycle.iter().enumerate() {
            if a == 0 || a > n || std::mem::replace(&mut used[a - 1], true) {
                return Err(Error::Precondition(format!(
                    "bad cycle entry {a} for n = {n}"
                )));
            }
            images[a - 1] = cycle[(k + 1) % cycle.len()];
        }
    }
    Ok(images)
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Split(c) => write!(f, "x[{c}]"),
            Word::Tau(g) => write!(f, "tau[{g}]"),
            Word::Perm { cycles, n } => {
                f.write_str("p[")?;
                if cycles.is_empty() {
                    f.write_str("()")?;
                }
                for c in cycles {
                    let items: Vec<String> = c.iter().map(usize::to_string).collect();
                    write!(f, "({})", items.join(" "))?;
                }
                write!(f, ",{n}]")
            }
            Word::Id(n) => write!(f, "id[{n}]"),
            Word::Iota0(g) => write!(f, "iota0[{g}]"),
            Word::Iota1(c, g) => write!(f, "iota1[{c},{g}]"),
            Word::Compose(parts) => {
                for (i, w) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" • ")?;
                    }
                    if matches!(w, Word::Compose(_)) {
                        write!(f, "({w})")?;
                    } else {
                        write!(f, "{w}")?;
                    }
                }
                Ok(())
            }
            Word::Sum(parts) => {
                for (i, w) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ⊕ ")?;
                    }
                    if matches!(w, Word::Compose(_) | Word::Sum(_)) {
                        write!(f, "({w})")?;
                    } else {
                        write!(f, "{w}")?;
                    }
                }
                Ok(())
            }
            Word::Inverse(w) => {
                if matches!(**w, Word::Compose(_) | Word::Sum(_)) {
                    write!(f, "({w})^-1")
                } else {
                    write!(f, "{w}^-1")
                }
            }
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut parts = vec![self.term()?];
        while self.eat("•") || self.eat("*") {
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Word::Compose(parts)
        })
    }

    fn term(&mut self) -> Result<Word> {
        let mut parts = vec![self.factor()?];
        while self.eat("⊕") || self.eat("+") {
            parts.push(self.factor()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Word::Sum(parts)
        })
    }

    fn factor(&mut self) -> Result<Word> {
        let mut w = if self.eat("(") {
            let inner = self.word()?;
            if !self.eat(")") {
                return Err(Error::parse(self.pos, "expected `)`"));
            }
            inner
        } else {
            self.atom()?
        };
        while self.eat("^") {
            if !self.eat("-1") {
                return Err(Error::parse(self.pos, "only `^-1` is supported"));
            }
            w = Word::Inverse(Box::new(w));
        }
        Ok(w)
    }

    fn atom(&mut self) -> Result<Word> {
        self.skip_ws();
        let start = self.pos;
        let name_len = self
            .rest()
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(self.rest().len());
        let name = &self.rest()[..name_len];
        if name.is_empty() {
            return Err(Error::parse(start, "expected an atom or `(`"));
        }
        self.pos += name_len;
        if !self.rest().starts_with('[') {
            return Err(Error::parse(
                self.pos,
                format!("expected `[` after `{name}`"),
            ));
        }
        let arg_start = self.pos + 1;
        let arg = self.bracketed()?;
        let bad = |msg: &str| Error::parse(arg_start, msg.to_string());
        let number = |s: &str| -> Result<usize> {
            s.trim()
                .parse()
                .map_err(|_| bad(&format!("expected a number, found {s:?}")))
        };
        Ok(match name {
            "x" => Word::Split(arg.trim().to_string()),
            "tau" => Word::Tau(arg.trim().to_string()),
            "iota0" => Word::Iota0(arg.trim().to_string()),
            "id" => Word::Id(number(arg)?),
            "iota1" => {
                let (c, g) = arg
                    .split_once(',')
                    .ok_or_else(|| bad("expected `color,element`"))?;
                Word::Iota1(c.trim().to_string(), g.trim().to_string())
            }
            "p" => {
                let (cycles, n) = arg
                    .rsplit_once(',')
                    .ok_or_else(|| bad("expected `cycles,n`"))?;
                Word::Perm {
                    cycles: parse_cycles(cycles).map_err(|msg| bad(&msg))?,
                    n: number(n)?,
                }
            }
            other => return Err(Error::parse(start, format!("unknown atom `{other}`"))),
        })
    }

    /// Reads a bracketed argument, respecting nested brackets of any kind.
    fn bracketed(&mut self) -> Result<&'a str> {
        let open = self.pos;
        let mut depth = 0i32;
        for (i, ch) in self.rest().char_indices() {
            match ch {
                '[' | '(' | '{' => depth += 1,
                ']' | ')' | '}' => {
                    depth -= 1;
                    if depth == 0 {
                        if ch != ']' {
                            return Err(Error::parse(open + i, "mismatched bracket"));
                        }
                        let arg = &self.text[open + 1..open + i];
                        self.pos = open + i + 1;
                        return Ok(arg);
                    }
                }
                _ => {}
            }
        }
        Err(Error::parse(open, "unterminated `[`"))
    }
}

fn parse_cycles(text: &str) -> std::result::Result<Vec<Vec<usize>>, String> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| format!("expected a cycle `(a b ...)` in {text:?}"))?;
        let cycle = inner
            .0
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| format!("bad cycle entry {s:?}"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = inner.1.trim_start();
    }
    Ok(cycles)
}
