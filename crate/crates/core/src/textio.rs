//! Text form of polynomials, monomials, rings and field specifications.
//!
//! Grammar:
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*'? factor)*
//! factor := base ('^' uint)?
//! base   := integer ('/' integer)? | variable | 't' | '(' expr ')'
//! ```
//!
//! Variables are `x, y, z` or `x1 .. x9`, fixed by the ring. In proper
//! extensions of a prime field `t` stands for the generator of the field.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fields::Field;
use crate::poly::{Monomial, Poly};

/// Largest exponent literal, and largest total degree of any intermediate.
pub const MAX_EXPONENT: u32 = 1 << 16;
const MAX_NESTING: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { offset: usize, name: String },
    #[error("exponent or degree above {MAX_EXPONENT} at offset {offset}")]
    ExponentOverflow { offset: usize },
    #[error("zero denominator at offset {offset}")]
    ZeroDenominator { offset: usize },
    #[error("`{0}` is not a monomial")]
    NotAMonomial(String),
    #[error("bad ring declaration `{0}`")]
    Ring(String),
    #[error("bad field specification `{0}`")]
    FieldSpec(String),
}

impl TextError {
    /// Byte offset into the source, for errors tied to a position.
    pub fn offset(&self) -> Option<usize> {
        match self {
            TextError::Syntax { offset, .. }
            | TextError::UnknownVariable { offset, .. }
            | TextError::ExponentOverflow { offset }
            | TextError::ZeroDenominator { offset } => Some(*offset),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Namespace {
    /// `x, y, z`
    Letters,
    /// `x1 .. x9`
    Indexed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ring {
    pub namespace: Namespace,
    pub nvars: usize,
}

const LETTERS: [&str; 3] = ["x", "y", "z"];

impl Ring {
    pub fn letters(nvars: usize) -> Result<Self, TextError> {
        if !(1..=3).contains(&nvars) {
            return Err(TextError::Ring(format!("{nvars} letter variables")));
        }
        Ok(Ring {
            namespace: Namespace::Letters,
            nvars,
        })
    }

    pub fn indexed(nvars: usize) -> Result<Self, TextError> {
        if !(1..=9).contains(&nvars) {
            return Err(TextError::Ring(format!("{nvars} indexed variables")));
        }
        Ok(Ring {
            namespace: Namespace::Indexed,
            nvars,
        })
    }

    /// Letters up to three variables, indexed names beyond.
    pub fn default_for(nvars: usize) -> Result<Self, TextError> {
        if nvars <= 3 {
            Self::letters(nvars)
        } else {
            Self::indexed(nvars)
        }
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.nvars).map(|i| self.name(i)).collect()
    }

    fn name(&self, i: usize) -> String {
        match self.namespace {
            Namespace::Letters => LETTERS[i].to_string(),
            Namespace::Indexed => format!("x{}", i + 1),
        }
    }
}

impl FromStr for Ring {
    type Err = TextError;

    /// `x,y` or `x1,x2,x3`: the leading variables of one namespace, in order.
    fn from_str(s: &str) -> Result<Self, TextError> {
        let names: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || TextError::Ring(s.to_string());
        let ring = if names.first() == Some(&"x1") {
            Ring::indexed(names.len()).map_err(|_| bad())?
        } else {
            Ring::letters(names.len()).map_err(|_| bad())?
        };
        if ring.names() != names {
            return Err(bad());
        }
        Ok(ring)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names().join(","))
    }
}

/// `q` for the rationals, `p` for a prime field, `p^m` for an extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Rational,
    Finite { p: u64, m: u32 },
}

impl FromStr for FieldSpec {
    type Err = TextError;

    fn from_str(s: &str) -> Result<Self, TextError> {
        let t = s.trim();
        if matches!(t, "q" | "Q" | "rational") {
            return Ok(FieldSpec::Rational);
        }
        let bad = || TextError::FieldSpec(s.to_string());
        let (p, m) = match t.split_once('^') {
            Some((p, m)) => (p.trim(), m.trim().parse::<u32>().map_err(|_| bad())?),
            None => (t, 1),
        };
        let p = p.parse::<u64>().map_err(|_| bad())?;
        if p < 2 || m == 0 {
            return Err(bad());
        }
        let (p, k) = prime_power(p);
        Ok(FieldSpec::Finite {
            p,
            m: m.checked_mul(k).ok_or_else(bad)?,
        })
    }
}

/// Writes `q = r^k` with `r` the least factor of `q`; `k = 1` unless `q` is a
/// power of that factor. Values beyond any supported field are left alone.
fn prime_power(q: u64) -> (u64, u32) {
    if q >= 1 << 40 {
        return (q, 1);
    }
    let r = (2..)
        .take_while(|d| d * d <= q)
        .find(|d| q.is_multiple_of(*d))
        .unwrap_or(q);
    let (mut rest, mut k) = (q, 0);
    while rest % r == 0 {
        rest /= r;
        k += 1;
    }
    if rest == 1 {
        (r, k)
    } else {
        (q, 1)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => f.write_str("q"),
            FieldSpec::Finite { p, m: 1 } => write!(f, "{p}"),
            FieldSpec::Finite { p, m } => write!(f, "{p}^{m}"),
        }
    }
}

struct Parser<'a, F: Field> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
    ring: &'a Ring,
    field: &'a F,
    generator: Option<F::Elem>,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&mut self) -> Option<u8> {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn syntax<T>(&self, offset: usize, message: &str) -> Result<T, TextError> {
        Err(TextError::Syntax {
            offset,
            message: message.to_string(),
        })
    }

    fn constant(&self, c: F::Elem) -> Poly<F> {
        Poly::constant(self.field, self.ring.nvars, c)
    }

    fn mul(&self, a: &Poly<F>, b: &Poly<F>, offset: usize) -> Result<Poly<F>, TextError> {
        let d = a.total_degree().unwrap_or(0) + b.total_degree().unwrap_or(0);
        if d > MAX_EXPONENT {
            return Err(TextError::ExponentOverflow { offset });
        }
        Ok(a * b)
    }

    fn expr(&mut self) -> Result<Poly<F>, TextError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return self.syntax(self.pos, "nesting too deep");
        }
        let negate = self.peek() == Some(b'-');
        if negate {
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly<F>, TextError> {
        let mut acc = self.factor()?;
        loop {
            let at = self.pos;
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = self.mul(&acc, &f, at)?;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' => {
                    let f = self.factor()?;
                    acc = self.mul(&acc, &f, at)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly<F>, TextError> {
        let base = self.base()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.peek().map(|_| self.pos).unwrap_or(self.pos);
        let digits = self.digits();
        if digits.is_empty() {
            return self.syntax(at, "expected an exponent");
        }
        let k = match digits.parse::<u32>() {
            Ok(k) if k <= MAX_EXPONENT => k,
            _ => return Err(TextError::ExponentOverflow { offset: at }),
        };
        let d = base.total_degree().unwrap_or(0);
        if u64::from(d) * u64::from(k) > u64::from(MAX_EXPONENT) {
            return Err(TextError::ExponentOverflow { offset: at });
        }
        Ok(base.pow(k))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<Poly<F>, TextError> {
        let at = self.pos;
        let Some(c) = self.peek() else {
            return self.syntax(at, "unexpected end of input, expected a term");
        };
        let at = self.pos;
        match c {
            b'0'..=b'9' => {
                let num: BigInt = self.digits().parse().expect("digits");
                if self.peek() != Some(b'/') {
                    return Ok(self.constant(self.field.from_bigint(&num)));
                }
                self.pos += 1;
                let den_at = self.peek().map(|_| self.pos).unwrap_or(self.pos);
                let den = self.digits();
                if den.is_empty() {
                    return self.syntax(den_at, "expected a denominator");
                }
                let den: BigInt = den.parse().expect("digits");
                match self.field.from_ratio(&num, &den) {
                    Some(c) => Ok(self.constant(c)),
                    None => Err(TextError::ZeroDenominator { offset: den_at }),
                }
            }
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.syntax(self.pos, "expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            c if c.is_ascii_alphabetic() => self.variable(at),
            _ => self.syntax(at, "expected a term"),
        }
    }

    fn variable(&mut self, at: usize) -> Result<Poly<F>, TextError> {
        let c = self.src[at];
        self.pos += 1;
        if c == b't' {
            if let Some(g) = &self.generator {
                return Ok(self.constant(g.clone()));
            }
        }
        let unknown = |name: String| Err(TextError::UnknownVariable { offset: at, name });
        let index = match self.ring.namespace {
            Namespace::Letters => match LETTERS.iter().position(|l| l.as_bytes()[0] == c) {
                Some(i) => i,
                None => return unknown((c as char).to_string()),
            },
            Namespace::Indexed => {
                let digits = self.digits();
                if c != b'x' || digits.is_empty() {
                    return unknown(format!("{}{digits}", c as char));
                }
                match digits.parse::<usize>() {
                    Ok(i) if i >= 1 => i - 1,
                    _ => return unknown(format!("x{digits}")),
                }
            }
        };
        if index >= self.ring.nvars {
            let name = String::from_utf8_lossy(&self.src[at..self.pos]).into_owned();
            return unknown(name);
        }
        let m = Monomial::var(self.ring.nvars, index);
        Ok(Poly::monomial(self.field, m, self.field.one()))
    }
}

/// Parses `src` into a polynomial over `field` in the variables of `ring`.
pub fn parse_poly<F: Field>(src: &str, ring: &Ring, field: &F) -> Result<Poly<F>, TextError> {
    let mut parser = Parser {
        src: src.as_bytes(),
        pos: 0,
        depth: 0,
        ring,
        field,
        generator: field.adjoined_generator(),
    };
    if parser.peek().is_none() {
        return parser.syntax(parser.pos, "empty input");
    }
    let p = parser.expr()?;
    if parser.peek().is_some() {
        let at = parser.pos;
        return parser.syntax(at, "unexpected character");
    }
    Ok(p)
}

/// A monic monomial such as `x^2y` or `1`.
pub fn parse_monomial(src: &str, ring: &Ring) -> Result<Monomial, TextError> {
    let field = crate::fields::Rationals;
    let p = parse_poly(src, ring, &field)?;
    match p.leading() {
        Some((m, c)) if p.len() == 1 && field.is_one(c) => Ok(m.clone()),
        _ => Err(TextError::NotAMonomial(src.to_string())),
    }
}

pub fn format_monomial(m: &Monomial, ring: &Ring) -> String {
    let mut out = String::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => out.push_str(&ring.name(i)),
            e => out.push_str(&format!("{}^{e}", ring.name(i))),
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// Canonical text: terms in descending lexicographic order, `x > y > z`.
pub fn format_poly<F: Field>(p: &Poly<F>, ring: &Ring) -> String {
    let field = p.field();
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by(|a, b| b.0.exponents().cmp(a.0.exponents()));
    let mut out = String::new();
    for (i, (m, c)) in terms.into_iter().enumerate() {
        let negative = field.is_negative(c);
        let mag = if negative { field.neg(c) } else { c.clone() };
        let body = if m.is_one() {
            field.format_elem(&mag)
        } else if field.is_one(&mag) {
            format_monomial(m, ring)
        } else {
            let cs = field.format_elem(&mag);
            let cs = if cs.contains(' ') {
                format!("({cs})")
            } else {
                cs
            };
            format!("{cs}{}", format_monomial(m, ring))
        };
        match (i, negative) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
