//! String syntax for field elements.
//!
//! Grammar: sums and differences of products and quotients of powers of
//! integers, `t` (function fields) and `s = √π` (quadratic extensions), with
//! parentheses. Output always re-parses to the same element.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Elem, Field, FieldError, Poly, RatFn};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(char),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, FieldError> {
    let err = || FieldError::Parse(s.to_string());
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Int(digits.parse().map_err(|_| err())?));
        } else if c == 't' || c == 's' {
            out.push(Tok::Var(c));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(err());
        }
    }
    Ok(out)
}

struct Parser<'a> {
    k: &'a Field,
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self) -> FieldError {
        FieldError::Parse(self.src.to_string())
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Elem, FieldError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let r = self.term()?;
                acc = self.k.add(&acc, &r);
            } else if self.eat('-') {
                let r = self.term()?;
                acc = self.k.sub(&acc, &r);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Elem, FieldError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let r = self.unary()?;
                acc = self.k.mul(&acc, &r);
            } else if self.eat('/') {
                let r = self.unary()?;
                if self.k.is_zero(&r) {
                    return Err(self.err());
                }
                acc = self.k.div(&acc, &r);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Elem, FieldError> {
        if self.eat('-') {
            let x = self.unary()?;
            return Ok(self.k.neg(&x));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Elem, FieldError> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.peek() {
                Some(Tok::Int(n)) => i64::try_from(n.clone()).map_err(|_| self.err())?,
                _ => return Err(self.err()),
            };
            self.pos += 1;
            let e = if neg { -e } else { e };
            if e < 0 && self.k.is_zero(&base) {
                return Err(self.err());
            }
            return Ok(self.k.pow(&base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Elem, FieldError> {
        let tok = self.peek().cloned().ok_or_else(|| self.err())?;
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(self.k.integer_elem(n)),
            Tok::Var('t') => self.k.t().ok_or_else(|| self.err()),
            Tok::Var('s') => self.k.sqrt_ramifier().ok_or_else(|| self.err()),
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err());
                }
                Ok(e)
            }
            _ => Err(self.err()),
        }
    }
}

pub fn parse(k: &Field, s: &str) -> Result<Elem, FieldError> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(FieldError::Parse(s.to_string()));
    }
    let mut p = Parser {
        k,
        toks,
        pos: 0,
        src: s,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err());
    }
    Ok(e)
}

fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (e, c) in p.0.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = if e == 0 {
            format_rational(c)
        } else if c.is_one() {
            format!("t^{e}")
        } else if (-c).is_one() {
            format!("-t^{e}")
        } else {
            format!("{}*t^{e}", format_rational(c))
        };
        if !out.is_empty() && !term.starts_with('-') {
            out.push('+');
        }
        out.push_str(&term);
    }
    out
}

fn format_ratfn(f: &RatFn) -> String {
    if f.den.is_one() {
        format_poly(&f.num)
    } else {
        format!("({})/({})", format_poly(&f.num), format_poly(&f.den))
    }
}

pub fn format(k: &Field, a: &Elem) -> String {
    match a {
        Elem::Q(q) => format_rational(q),
        Elem::F(f) => format_ratfn(f),
        Elem::Quad(x, y) => {
            let b = k.base().expect("quadratic element");
            let re = b.format(x);
            if b.is_zero(y) {
                return re;
            }
            let im = format!("({})*s", b.format(y));
            if b.is_zero(x) {
                im
            } else {
                format!("{re}+{im}")
            }
        }
    }
}
