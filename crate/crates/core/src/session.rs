//! Session files: one ring declaration followed by named ideals.
//!
//! ```text
//! # comments run to the end of the line
//! ring { vars = [X, Y, Z, U, V, W], dim = 3,
//!        quotient = [Z^2, Z*U, Z*V, U*V, Y*Z-U^3, X*Z-V^3] }
//! ideal I = [X, Y, Z, U, V, W]
//! ```

use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};
use crate::ideal::Ideal;
use crate::ring::RingSpec;

/// Coefficient field selected on the command line: `q` or `fp:<prime>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Rationals,
    Prime(PrimeField),
}

impl Default for FieldChoice {
    fn default() -> Self {
        FieldChoice::Prime(PrimeField::default())
    }
}

impl FromStr for FieldChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldChoice::Rationals);
        }
        if s.eq_ignore_ascii_case("fp") {
            return Ok(FieldChoice::default());
        }
        let p = s
            .strip_prefix("fp:")
            .ok_or_else(|| Error::Input(format!("unknown field `{s}` (expected q or fp:<prime>)")))?;
        let p: u64 = p
            .parse()
            .map_err(|_| Error::Input(format!("bad modulus `{p}`")))?;
        let p = u32::try_from(p).map_err(|_| Error::NotPrime(p))?;
        Ok(FieldChoice::Prime(PrimeField::new(p)?))
    }
}

impl FieldChoice {
    pub fn tag(&self) -> String {
        match self {
            FieldChoice::Rationals => Rationals.tag(),
            FieldChoice::Prime(f) => f.tag(),
        }
    }
}

/// A parsed session.
#[derive(Debug)]
pub struct Session<K: Field> {
    pub ring: Arc<RingSpec<K>>,
    pub ideals: Vec<(String, Ideal<K>)>,
}

impl<K: Field> Session<K> {
    /// The named ideal, or the first one when `name` is `None`.
    pub fn ideal(&self, name: Option<&str>) -> Result<&Ideal<K>> {
        match name {
            None => self
                .ideals
                .first()
                .map(|(_, i)| i)
                .ok_or_else(|| Error::Input("the session declares no ideal".into())),
            Some(n) => self
                .ideals
                .iter()
                .find(|(m, _)| m == n)
                .map(|(_, i)| i)
                .ok_or_else(|| Error::Input(format!("no ideal named `{n}`"))),
        }
    }
}

/// Raw text with the position of its first character.
#[derive(Clone, Debug)]
struct Item {
    text: String,
    line: usize,
    column: usize,
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            src: text.as_bytes(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c == b'#' {
                while self.peek().is_some_and(|c| c != b'\n') {
                    self.bump();
                }
            } else if c.is_ascii_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_trivia();
        self.peek().is_none()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_trivia();
        match self.peek() {
            Some(x) if x == c => {
                self.bump();
                Ok(())
            }
            Some(x) => Err(self.error(format!("expected `{}`, found `{}`", c as char, x as char))),
            None => Err(self.error(format!("expected `{}`, found end of input", c as char))),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_trivia();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<Item> {
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
            self.bump();
        }
        if start == self.pos || self.src[start].is_ascii_digit() {
            return Err(Error::Parse {
                line,
                column,
                message: "expected an identifier".into(),
            });
        }
        Ok(Item {
            text: String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
            line,
            column,
        })
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_trivia();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.error("expected a non-negative integer"))
    }

    /// `[a, b, ...]` where items are raw text split at top-level commas.
    fn list(&mut self) -> Result<Vec<Item>> {
        self.expect(b'[')?;
        let mut items = Vec::new();
        loop {
            self.skip_trivia();
            if self.peek() == Some(b']') && items.is_empty() {
                return Err(self.error("empty list"));
            }
            let (line, column) = (self.line, self.column);
            let start = self.pos;
            let mut depth = 0usize;
            loop {
                match self.peek() {
                    None => return Err(self.error("unterminated list")),
                    Some(b'(') => depth += 1,
                    Some(b')') => {
                        depth = depth
                            .checked_sub(1)
                            .ok_or_else(|| self.error("unbalanced `)`"))?
                    }
                    Some(b',') | Some(b']') if depth == 0 => break,
                    Some(b'#') | Some(b'\n') if depth == 0 => break,
                    _ => {}
                }
                self.bump();
            }
            let text = String::from_utf8_lossy(&self.src[start..self.pos]).trim().to_string();
            if text.is_empty() {
                return Err(Error::Parse {
                    line,
                    column,
                    message: "empty list entry".into(),
                });
            }
            items.push(Item { text, line, column });
            self.skip_trivia();
            if self.eat(b']') {
                return Ok(items);
            }
            self.expect(b',')?;
        }
    }
}

fn poly_error(e: Error, item: &Item) -> Error {
    match e {
        Error::Parse { column, message, .. } => Error::Parse {
            line: item.line,
            column: item.column + column - 1,
            message,
        },
        Error::UndeclaredVariable(v) => Error::Parse {
            line: item.line,
            column: item.column,
            message: format!("undeclared variable `{v}`"),
        },
        other => other,
    }
}

/// Parses a session over the given field.
pub fn parse_session<K: Field>(text: &str, field: K) -> Result<Session<K>> {
    let mut sc = Scanner::new(text);
    let kw = sc.ident()?;
    if kw.text != "ring" {
        return Err(Error::Parse {
            line: kw.line,
            column: kw.column,
            message: format!("expected `ring`, found `{}`", kw.text),
        });
    }
    sc.expect(b'{')?;
    let mut vars: Option<Vec<String>> = None;
    let mut dim: Option<usize> = None;
    let mut quotient: Vec<Item> = Vec::new();
    loop {
        if sc.eat(b'}') {
            break;
        }
        let key = sc.ident()?;
        sc.expect(b'=')?;
        match key.text.as_str() {
            "vars" => {
                let items = sc.list()?;
                let mut names = Vec::with_capacity(items.len());
                for it in items {
                    let ok = it.text.bytes().all(|c| c.is_ascii_alphanumeric() || c == b'_')
                        && !it.text.as_bytes()[0].is_ascii_digit();
                    if !ok {
                        return Err(Error::Parse {
                            line: it.line,
                            column: it.column,
                            message: format!("`{}` is not a variable name", it.text),
                        });
                    }
                    if names.contains(&it.text) {
                        return Err(Error::Parse {
                            line: it.line,
                            column: it.column,
                            message: format!("variable `{}` declared twice", it.text),
                        });
                    }
                    names.push(it.text);
                }
                vars = Some(names);
            }
            "dim" => dim = Some(sc.integer()?),
            "quotient" => quotient = sc.list()?,
            other => {
                return Err(Error::Parse {
                    line: key.line,
                    column: key.column,
                    message: format!("unknown ring field `{other}`"),
                })
            }
        }
        if !sc.eat(b',') {
            sc.expect(b'}')?;
            break;
        }
    }
    let vars = vars.ok_or_else(|| sc.error("ring declares no `vars`"))?;
    let dim = dim.unwrap_or(vars.len());
    let nvars = vars.len();
    let base = RingSpec::new(field, vars, Vec::new(), nvars)?;
    let ring = if quotient.is_empty() && dim == nvars {
        base
    } else {
        let defs = quotient
            .iter()
            .map(|it| base.parse(&it.text).map_err(|e| poly_error(e, it)))
            .collect::<Result<Vec<_>>>()?;
        RingSpec::new(base.field().clone(), base.names().to_vec(), defs, dim)?
    };

    let mut ideals: Vec<(String, Ideal<K>)> = Vec::new();
    while !sc.at_end() {
        let kw = sc.ident()?;
        if kw.text != "ideal" {
            return Err(Error::Parse {
                line: kw.line,
                column: kw.column,
                message: format!("expected `ideal`, found `{}`", kw.text),
            });
        }
        let name = sc.ident()?;
        if ideals.iter().any(|(n, _)| *n == name.text) {
            return Err(Error::Parse {
                line: name.line,
                column: name.column,
                message: format!("ideal `{}` declared twice", name.text),
            });
        }
        sc.expect(b'=')?;
        let items = sc.list()?;
        let gens = items
            .iter()
            .map(|it| ring.parse(&it.text).map_err(|e| poly_error(e, it)))
            .collect::<Result<Vec<_>>>()?;
        ideals.push((name.text, Ideal::new(&ring, gens)?));
    }
    Ok(Session { ring, ideals })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX34: &str = "# a three-dimensional quotient\nring {vars=[X,Y,Z,U,V,W], dim=3,\n  quotient=[Z^2, Z*U, Z*V, U*V, Y*Z-U^3, X*Z-V^3]}\nideal I = [X,Y,Z,U,V,W]\n";

    #[test]
    fn parses_sessions() {
        let s = parse_session(
            "ring {vars = [X,Y,Z], dim = 3} ideal I = [X^2-Y^2, Y^2-Z^2, X*Y, X*Z, Y*Z]",
            PrimeField::default(),
        )
        .unwrap();
        assert!(s.ring.is_polynomial_ring());
        assert_eq!(s.ideal(Some("I")).unwrap().length(), 5);
        let s = parse_session(EX34, PrimeField::default()).unwrap();
        assert_eq!(s.ring.dim(), 3);
        assert_eq!(s.ring.defining().len(), 6);
        assert_eq!(s.ideal(None).unwrap().length(), 1);
        assert!(s.ideal(Some("J")).is_err());
    }

    #[test]
    fn reports_positions() {
        let e = parse_session("ring {vars=[X,Y]}\nideal I = []", Rationals).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse_session("ring {vars=[X,Y]}\nideal I = [X, Y + W]", Rationals).unwrap_err();
        match e {
            Error::Parse { line, column, message } => {
                assert_eq!((line, column), (2, 15));
                assert!(message.contains('W'));
            }
            other => panic!("{other}"),
        }
        let e = parse_session("ring {vars=[X,Y]}\nideal I = [X, Y +]", Rationals).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 18, .. }), "{e}");
        assert!(parse_session("ring {vars=[X,Y], dim=1}", Rationals).is_err());
        assert!(parse_session("ring {vars=[X,X]}", Rationals).is_err());
        assert!(parse_session("ideal I = [X]", Rationals).is_err());
    }

    #[test]
    fn field_choice() {
        assert_eq!("q".parse::<FieldChoice>().unwrap(), FieldChoice::Rationals);
        assert_eq!("fp:5".parse::<FieldChoice>().unwrap().tag(), "fp:5");
        assert!(matches!("fp:6".parse::<FieldChoice>(), Err(Error::NotPrime(6))));
        assert!("gf".parse::<FieldChoice>().is_err());
    }
}
