//! Integer expressions in the factor index `j`.
//!
//! Grammar: integer constants, `j`, `+`, `-`, `*`, parentheses, and the two
//! primitives `floor(j/2)` and `ceil(j/2)`. Restricted to one parity class
//! `j = 2t + r`, every expression is a polynomial in `t` with integer
//! coefficients, which is what makes termination of instantiation decidable.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(i64),
    J,
    FloorHalf,
    CeilHalf,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn constant(v: i64) -> Self {
        Expr::Const(v)
    }

    pub fn parse(input: &str) -> Result<Self> {
        let mut p = Parser { src: input, chars: input.char_indices().peekable() };
        let e = p.expr()?;
        p.skip_ws();
        if let Some(&(_, c)) = p.chars.peek() {
            return Err(p.err(format!("unexpected `{c}`")));
        }
        Ok(e)
    }

    pub fn eval(&self, j: i64) -> i64 {
        match self {
            Expr::Const(v) => *v,
            Expr::J => j,
            Expr::FloorHalf => j.div_euclid(2),
            Expr::CeilHalf => (j + 1).div_euclid(2),
            Expr::Neg(a) => -a.eval(j),
            Expr::Add(a, b) => a.eval(j) + b.eval(j),
            Expr::Sub(a, b) => a.eval(j) - b.eval(j),
            Expr::Mul(a, b) => a.eval(j) * b.eval(j),
        }
    }

    pub fn minus(self, other: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(other))
    }

    /// Coefficients (constant term first) of the polynomial in `t` obtained
    /// by substituting `j = 2t + parity`.
    pub fn parity_poly(&self, parity: i64) -> Vec<i128> {
        let mut p = match self {
            Expr::Const(v) => vec![*v as i128],
            Expr::J => vec![parity as i128, 2],
            Expr::FloorHalf => vec![0, 1],
            Expr::CeilHalf => vec![parity as i128, 1],
            Expr::Neg(a) => a.parity_poly(parity).into_iter().map(|c| -c).collect(),
            Expr::Add(a, b) => poly_add(&a.parity_poly(parity), &b.parity_poly(parity), 1),
            Expr::Sub(a, b) => poly_add(&a.parity_poly(parity), &b.parity_poly(parity), -1),
            Expr::Mul(a, b) => poly_mul(&a.parity_poly(parity), &b.parity_poly(parity)),
        };
        while p.len() > 1 && p.last() == Some(&0) {
            p.pop();
        }
        p
    }

    /// Smallest `t0 >= 0` such that the parity-class polynomial is strictly
    /// increasing for all `t >= t0`, or `None` if it never is.
    pub fn increasing_from(&self, parity: i64) -> Option<i128> {
        let p = self.parity_poly(parity);
        let lead = *p.last()?;
        if p.len() < 2 || lead <= 0 {
            return None;
        }
        // D(t) = P(t+1) - P(t); positive beyond the Cauchy root bound.
        let shifted = taylor_shift_one(&p);
        let mut d = poly_add(&shifted, &p, -1);
        while d.len() > 1 && d.last() == Some(&0) {
            d.pop();
        }
        let d_lead = *d.last().unwrap();
        let max_ratio = d[..d.len() - 1].iter().map(|c| (c.abs() + d_lead - 1) / d_lead).max().unwrap_or(0);
        Some(if d.len() == 1 { 0 } else { max_ratio + 2 })
    }
}

fn poly_add(a: &[i128], b: &[i128], sign: i128) -> Vec<i128> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += sign * c;
    }
    out
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (k, y) in b.iter().enumerate() {
            out[i + k] += x * y;
        }
    }
    out
}

/// Coefficients of `P(t + 1)`.
fn taylor_shift_one(p: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; p.len()];
    for (k, c) in p.iter().enumerate() {
        let mut binom = 1i128;
        for (i, o) in out.iter_mut().enumerate().take(k + 1) {
            *o += c * binom;
            binom = binom * (k - i) as i128 / (i + 1) as i128;
        }
    }
    out
}

/// Scans `j_min ..= j_max` and returns every `(j, expr(j))` with
/// `expr(j) <= bound`.
///
/// An unbounded range is only accepted when `expr` eventually increases in
/// both parity classes; the scan stops once both classes are past their
/// monotone point and above `bound`.
pub(crate) fn scan_at_most(
    rule: usize,
    expr: &Expr,
    j_min: i64,
    j_max: Option<i64>,
    bound: i64,
) -> Result<Vec<(i64, i64)>> {
    let thresholds = [expr.increasing_from(0), expr.increasing_from(1)];
    if j_max.is_none() && thresholds.iter().any(Option::is_none) {
        return Err(Error::NonTerminating { rule, expr: expr.to_string() });
    }
    let mut done = [false; 2];
    let mut out = Vec::new();
    let mut j = j_min;
    while j_max.is_none_or(|hi| j <= hi) {
        let parity = j.rem_euclid(2) as usize;
        let v = expr.eval(j);
        if v <= bound {
            out.push((j, v));
        } else if let Some(t0) = thresholds[parity] {
            if (j.div_euclid(2) as i128) >= t0 {
                done[parity] = true;
            }
        }
        if done[0] && done[1] {
            break;
        }
        j += 1;
    }
    Ok(out)
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Expr::parse(s)
    }
}

impl From<i64> for Expr {
    fn from(v: i64) -> Self {
        Expr::Const(v)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(self, f, 0)
    }
}

fn write_prec(e: &Expr, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
    match e {
        Expr::Const(v) if *v < 0 && prec > 0 => write!(f, "({v})"),
        Expr::Const(v) => write!(f, "{v}"),
        Expr::J => f.write_str("j"),
        Expr::FloorHalf => f.write_str("floor(j/2)"),
        Expr::CeilHalf => f.write_str("ceil(j/2)"),
        Expr::Neg(a) => {
            f.write_str("-")?;
            write_prec(a, f, 3)
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            if prec > 1 {
                f.write_str("(")?;
            }
            write_prec(a, f, 1)?;
            f.write_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " })?;
            write_prec(b, f, 2)?;
            if prec > 1 {
                f.write_str(")")?;
            }
            Ok(())
        }
        Expr::Mul(a, b) => {
            if prec > 2 {
                f.write_str("(")?;
            }
            write_prec(a, f, 2)?;
            f.write_str("*")?;
            write_prec(b, f, 3)?;
            if prec > 2 {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Expr::Const(v)),
            Raw::Text(s) => Expr::parse(&s).map_err(serde::de::Error::custom),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
}

impl Parser<'_> {
    fn err(&self, reason: String) -> Error {
        Error::Parse { input: self.src.to_string(), reason }
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().map(|&(_, c)| c)
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.chars.next();
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.err(format!("expected `{want}`, found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.chars.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some('-') | Some('−') => {
                    self.chars.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while matches!(self.peek(), Some('*') | Some('·')) {
            self.chars.next();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if matches!(self.peek(), Some('-') | Some('−')) {
            self.chars.next();
            return Ok(match self.unary()? {
                Expr::Const(v) => Expr::Const(-v),
                e => Expr::Neg(Box::new(e)),
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('(') => {
                self.chars.next();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut v: i64 = 0;
                while let Some(&(_, d)) = self.chars.peek() {
                    let Some(digit) = d.to_digit(10) else { break };
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(digit as i64))
                        .ok_or_else(|| self.err("integer literal overflows".into()))?;
                    self.chars.next();
                }
                Ok(Expr::Const(v))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let mut word = String::new();
                while let Some(&(_, d)) = self.chars.peek() {
                    if !d.is_ascii_alphabetic() {
                        break;
                    }
                    word.push(d);
                    self.chars.next();
                }
                match word.as_str() {
                    "j" => Ok(Expr::J),
                    "floor" | "ceil" => {
                        self.expect('(')?;
                        self.expect('j')?;
                        self.expect('/')?;
                        self.expect('2')?;
                        self.expect(')')?;
                        Ok(if word == "floor" { Expr::FloorHalf } else { Expr::CeilHalf })
                    }
                    other => Err(self.err(format!("unknown identifier `{other}`"))),
                }
            }
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of input".into())),
        }
    }
}
