//! The operator expression language: parsing, elaboration into operators, and
//! rendering back to text.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' ['-'] int)?
//! atom   := int ['/' int] | 'c' | 'x'i | 'y'i | 'd'i | 'del'
//!         | 's(' int ',' int ')' | 'e' | 'e_' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::cherednik::{idempotent, CherednikContext};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::locfrac::LocFrac;
use crate::perm::{Character, Perm};
use crate::poly::Poly;
use crate::scalar::RatFunc;
use crate::skew::SkewOperator;

/// Largest exponent magnitude accepted by the parser.
pub const MAX_EXPONENT: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Rational(BigRational),
    Param,
    X(usize),
    /// The Dunkl operator `D_c(y_i)`.
    Y(usize),
    /// The plain derivative `∂_i`.
    D(usize),
    Del,
    Swap(usize, usize),
    Trivial,
    Sign,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// Terms with a `negated` flag each.
    Sum(Vec<(bool, Expr)>),
    Product(Vec<Expr>),
    Power {
        base: Box<Expr>,
        exp: i64,
        offset: usize,
    },
    Atom(Atom),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Comma,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b',' => Tok::Comma,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(src[start..i].parse().expect("ascii digits"))));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character {ch:?}"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => self.error("expected an integer"),
        }
    }

    fn index(&mut self, raw: &str, offset: usize) -> Result<usize> {
        let idx: usize = raw.parse().map_err(|_| Error::Syntax {
            offset,
            message: format!("bad index {raw:?}"),
        })?;
        if idx == 0 || idx > self.n {
            return Err(Error::IndexOutOfRange { index: idx, n: self.n });
        }
        Ok(idx)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let neg = self.eat(&Tok::Minus);
        terms.push((neg, self.term()?));
        loop {
            if self.eat(&Tok::Plus) {
                terms.push((false, self.term()?));
            } else if self.eat(&Tok::Minus) {
                terms.push((true, self.term()?));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 && !terms[0].0 {
            terms.pop().expect("one term").1
        } else {
            Expr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        while self.eat(&Tok::Star) {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            Expr::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let offset = self.offset();
        let neg = self.eat(&Tok::Minus);
        let v = self.int()?;
        let exp = i64::try_from(&v)
            .ok()
            .filter(|e| *e <= MAX_EXPONENT)
            .ok_or(Error::Syntax {
                offset,
                message: format!("exponent larger than {MAX_EXPONENT}"),
            })?;
        Ok(Expr::Power {
            base: Box::new(base),
            exp: if neg { -exp } else { exp },
            offset,
        })
    }

    fn atom(&mut self) -> Result<Expr> {
        let offset = self.offset();
        let Some(tok) = self.peek().cloned() else {
            return self.error("unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Int(num) => {
                if self.eat(&Tok::Slash) {
                    let den = self.int()?;
                    if den.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    Ok(Expr::Atom(Atom::Rational(BigRational::new(num, den))))
                } else {
                    Ok(Expr::Atom(Atom::Rational(BigRational::from_integer(num))))
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => self.ident(&name, offset),
            _ => {
                self.pos -= 1;
                self.error("expected an atom")
            }
        }
    }

    fn ident(&mut self, name: &str, offset: usize) -> Result<Expr> {
        let atom = match name {
            "c" => Atom::Param,
            "del" => Atom::Del,
            "e" => Atom::Trivial,
            "e_" => Atom::Sign,
            "s" => {
                self.expect(&Tok::LParen, "'(' after s")?;
                let i_off = self.offset();
                let i = self.int()?.to_string();
                let i = self.index(&i, i_off)?;
                self.expect(&Tok::Comma, "','")?;
                let j_off = self.offset();
                let j = self.int()?.to_string();
                let j = self.index(&j, j_off)?;
                self.expect(&Tok::RParen, "')'")?;
                if i == j {
                    return Err(Error::Syntax {
                        offset,
                        message: format!("s({i},{j}) is not a transposition"),
                    });
                }
                Atom::Swap(i, j)
            }
            _ => {
                let (head, digits) = name.split_at(1);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::Syntax {
                        offset,
                        message: format!("unknown identifier {name:?}"),
                    });
                }
                let idx = self.index(digits, offset)?;
                match head {
                    "x" => Atom::X(idx),
                    "y" => Atom::Y(idx),
                    "d" => Atom::D(idx),
                    _ => {
                        return Err(Error::Syntax {
                            offset,
                            message: format!("unknown identifier {name:?}"),
                        })
                    }
                }
            }
        };
        Ok(Expr::Atom(atom))
    }
}

/// Parses `src` for rank `n`. Indices are checked here.
pub fn parse(src: &str, n: usize) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
        n,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

fn elaborate_atom(atom: &Atom, ctx: &CherednikContext<RatFunc>) -> Result<SkewOperator<RatFunc>> {
    let n = ctx.n();
    Ok(match atom {
        Atom::Rational(r) => SkewOperator::constant(n, RatFunc::from_rational(r)),
        Atom::Param => SkewOperator::constant(n, RatFunc::param()),
        Atom::X(i) => SkewOperator::x(n, *i)?,
        Atom::Y(i) => ctx.dunkl(*i)?,
        Atom::D(i) => SkewOperator::partial(n, *i)?,
        Atom::Del => SkewOperator::delta_power(n, 1),
        Atom::Swap(i, j) => SkewOperator::group_element(&Perm::transposition(n, *i, *j)?),
        Atom::Trivial => idempotent(n, Character::Trivial),
        Atom::Sign => idempotent(n, Character::Sign),
    })
}

/// The constant `k` when `u` is multiplication by a scalar.
fn as_scalar(u: &SkewOperator<RatFunc>) -> Option<RatFunc> {
    if u.is_zero() {
        return Some(RatFunc::zero());
    }
    let mut terms = u.terms();
    let (k, f) = terms.next()?;
    if terms.next().is_some() || k.order() != 0 || !k.group().is_identity() {
        return None;
    }
    f.as_constant()
}

fn elaborate_in(e: &Expr, ctx: &CherednikContext<RatFunc>) -> Result<SkewOperator<RatFunc>> {
    let n = ctx.n();
    match e {
        Expr::Atom(a) => elaborate_atom(a, ctx),
        Expr::Sum(terms) => {
            let mut acc = SkewOperator::zero(n);
            for (neg, t) in terms {
                let v = elaborate_in(t, ctx)?;
                acc = if *neg { acc.sub(&v) } else { acc.add(&v) };
            }
            Ok(acc)
        }
        Expr::Product(factors) => {
            let mut acc = SkewOperator::one(n);
            for f in factors {
                acc = acc.mul(&elaborate_in(f, ctx)?);
            }
            Ok(acc)
        }
        Expr::Power { base, exp, offset } => {
            if *exp >= 0 {
                if **base == Expr::Atom(Atom::Del) {
                    return Ok(SkewOperator::delta_power(n, *exp));
                }
                return Ok(elaborate_in(base, ctx)?.pow(*exp as u32));
            }
            if **base == Expr::Atom(Atom::Del) {
                return Ok(SkewOperator::delta_power(n, *exp));
            }
            let b = elaborate_in(base, ctx)?;
            let s = as_scalar(&b).ok_or(Error::IllegalNegativeExponent { offset: *offset })?;
            let inv = s.inv().ok_or(Error::DivisionByZero)?;
            Ok(SkewOperator::constant(n, inv.pow((-*exp) as u32)))
        }
    }
}

/// Elaborates with `y<i>` read as `D_c(y_i)` for the formal parameter `c`.
pub fn elaborate(e: &Expr, n: usize) -> Result<SkewOperator<RatFunc>> {
    elaborate_in(e, &CherednikContext::new(n, RatFunc::param())?)
}

pub fn parse_operator(src: &str, n: usize) -> Result<SkewOperator<RatFunc>> {
    elaborate(&parse(src, n)?, n)
}

/// Parses an expression that must denote a function (no derivatives or group elements).
pub fn parse_function(src: &str, n: usize) -> Result<LocFrac<RatFunc>> {
    let op = parse_operator(src, n)?;
    if op.is_zero() {
        return Ok(LocFrac::zero(n));
    }
    let mut terms = op.terms();
    match (terms.next(), terms.next()) {
        (Some((k, f)), None) if k.order() == 0 && k.group().is_identity() => Ok(f.clone()),
        _ => Err(Error::NotAFunction(src.to_string())),
    }
}

/// Canonical text; re-parses to an equal operator.
pub fn render(u: &SkewOperator<RatFunc>) -> String {
    u.render()
}

/// Text for a function, in the same grammar.
pub fn render_function(f: &LocFrac<RatFunc>) -> String {
    SkewOperator::from_locfrac(f.clone()).render()
}

/// `Poly` in `x` only, as an operator-language string.
pub fn render_poly(p: &Poly<RatFunc>) -> String {
    p.to_string()
}
