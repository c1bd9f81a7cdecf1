//! Exact integer polynomials in `z`, ordinary and Laurent.
//!
//! Both types keep a canonical form: no leading or trailing zero
//! coefficients, and the zero polynomial is an empty coefficient list.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

static ZERO: BigInt = BigInt::ZERO;

/// Operations shared by the two polynomial representations, so series code
/// can be written once for both.
pub trait Poly: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync {
    /// Whether negative exponents are representable.
    const LAURENT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    /// `coeff * z^exp`; fails for a negative exponent in the ordinary type.
    fn monomial(coeff: BigInt, exp: i64) -> Result<Self>;
    fn is_zero(&self) -> bool;
    fn coeff_at(&self, exp: i64) -> &BigInt;
    /// `self += ±z^shift * other`.
    fn add_shifted(&mut self, other: &Self, shift: i64, negate: bool);
    /// `scale * z^shift * self`.
    fn scaled_shifted(&self, scale: &BigInt, shift: i64) -> Self;
    fn product(&self, other: &Self) -> Self;
    fn eval_at_one(&self) -> BigInt;
    /// Nonzero `(exponent, coefficient)` pairs in ascending exponent order.
    fn terms(&self) -> Vec<(i64, &BigInt)>;
}

/// Polynomial in `z` with arbitrary-precision coefficients, stored densely
/// from the constant term upward.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPolynomial {
    coeffs: Vec<BigInt>,
}

impl ZPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    pub fn monomial(c: impl Into<BigInt>, exp: usize) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); exp + 1];
        coeffs[exp] = c;
        Self { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().copied().map(BigInt::from).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero outside the stored range.
    pub fn coeff(&self, k: usize) -> &BigInt {
        self.coeffs.get(k).unwrap_or(&ZERO)
    }

    /// Coefficient of `z^k` for a possibly negative `k`.
    pub fn coeff_i(&self, k: i64) -> &BigInt {
        usize::try_from(k).map_or(&ZERO, |k| self.coeff(k))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// `p(z^-1)` as a Laurent polynomial.
    pub fn mirrored(&self) -> LaurentPolynomial {
        LaurentPolynomial::from(self.clone()).mirrored()
    }
}

impl Poly for ZPolynomial {
    const LAURENT: bool = false;

    fn zero() -> Self {
        ZPolynomial::zero()
    }

    fn one() -> Self {
        ZPolynomial::one()
    }

    fn monomial(coeff: BigInt, exp: i64) -> Result<Self> {
        let exp = usize::try_from(exp).map_err(|_| Error::NegativeZExponent(exp))?;
        Ok(ZPolynomial::monomial(coeff, exp))
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn coeff_at(&self, exp: i64) -> &BigInt {
        self.coeff_i(exp)
    }

    fn add_shifted(&mut self, other: &Self, shift: i64, negate: bool) {
        if other.is_zero() {
            return;
        }
        let shift = usize::try_from(shift).expect("negative shift on an ordinary polynomial");
        let need = other.coeffs.len() + shift;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, BigInt::zero());
        }
        for (dst, src) in self.coeffs[shift..].iter_mut().zip(&other.coeffs) {
            if negate {
                *dst -= src;
            } else {
                *dst += src;
            }
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    fn scaled_shifted(&self, scale: &BigInt, shift: i64) -> Self {
        if scale.is_zero() || self.is_zero() {
            return Self::zero();
        }
        let shift = usize::try_from(shift).expect("negative shift on an ordinary polynomial");
        let mut coeffs = vec![BigInt::zero(); shift];
        coeffs.extend(self.coeffs.iter().map(|c| c * scale));
        Self::from_coeffs(coeffs)
    }

    fn product(&self, other: &Self) -> Self {
        self * other
    }

    fn eval_at_one(&self) -> BigInt {
        ZPolynomial::eval_at_one(self)
    }

    fn terms(&self) -> Vec<(i64, &BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k as i64, c)).collect()
    }
}

impl Add for &ZPolynomial {
    type Output = ZPolynomial;

    fn add(self, rhs: &ZPolynomial) -> ZPolynomial {
        let mut out = self.clone();
        out.add_shifted(rhs, 0, false);
        out
    }
}

impl Sub for &ZPolynomial {
    type Output = ZPolynomial;

    fn sub(self, rhs: &ZPolynomial) -> ZPolynomial {
        let mut out = self.clone();
        out.add_shifted(rhs, 0, true);
        out
    }
}

impl Neg for &ZPolynomial {
    type Output = ZPolynomial;

    fn neg(self) -> ZPolynomial {
        ZPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &ZPolynomial {
    type Output = ZPolynomial;

    fn mul(self, rhs: &ZPolynomial) -> ZPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return ZPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ZPolynomial::from_coeffs(coeffs)
    }
}

impl fmt::Debug for ZPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPolynomial({self})")
    }
}

impl fmt::Display for ZPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, Poly::terms(self))
    }
}

/// Polynomial in `z` and `z^-1`. Entry `t` of `coeffs` is the coefficient of
/// `z^(min_exp + t)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPolynomial {
    min_exp: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self { min_exp: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::new(0, vec![BigInt::one()])
    }

    pub fn new(min_exp: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { min_exp, coeffs };
        p.normalize();
        p
    }

    pub fn from_i64s(min_exp: i64, coeffs: &[i64]) -> Self {
        Self::new(min_exp, coeffs.iter().copied().map(BigInt::from).collect())
    }

    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        Self::new(exp, vec![c.into()])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_exp += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.min_exp = 0;
        }
    }

    /// Lowest exponent with a nonzero coefficient; `None` for zero.
    pub fn min_exp(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.min_exp)
    }

    pub fn max_exp(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.min_exp + self.coeffs.len() as i64 - 1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: i64) -> &BigInt {
        let t = exp - self.min_exp;
        usize::try_from(t).ok().and_then(|t| self.coeffs.get(t)).unwrap_or(&ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Substitutes `z -> z^-1`.
    pub fn mirrored(&self) -> Self {
        match self.max_exp() {
            None => Self::zero(),
            Some(max) => {
                let mut coeffs = self.coeffs.clone();
                coeffs.reverse();
                Self { min_exp: -max, coeffs }
            }
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.mirrored()
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Converts to an ordinary polynomial when no negative exponent is present.
    pub fn to_ordinary(&self) -> Option<ZPolynomial> {
        match self.min_exp() {
            None => Some(ZPolynomial::zero()),
            Some(lo) if lo >= 0 => {
                let mut coeffs = vec![BigInt::zero(); lo as usize];
                coeffs.extend(self.coeffs.iter().cloned());
                Some(ZPolynomial::from_coeffs(coeffs))
            }
            Some(_) => None,
        }
    }
}

impl From<ZPolynomial> for LaurentPolynomial {
    fn from(p: ZPolynomial) -> Self {
        LaurentPolynomial::new(0, p.into_coeffs())
    }
}

impl Poly for LaurentPolynomial {
    const LAURENT: bool = true;

    fn zero() -> Self {
        LaurentPolynomial::zero()
    }

    fn one() -> Self {
        LaurentPolynomial::one()
    }

    fn monomial(coeff: BigInt, exp: i64) -> Result<Self> {
        Ok(LaurentPolynomial::monomial(coeff, exp))
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn coeff_at(&self, exp: i64) -> &BigInt {
        self.coeff(exp)
    }

    fn add_shifted(&mut self, other: &Self, shift: i64, negate: bool) {
        let Some(other_lo) = other.min_exp() else {
            return;
        };
        let other_lo = other_lo + shift;
        let other_hi = other_lo + other.coeffs.len() as i64 - 1;
        if self.is_zero() {
            self.min_exp = other_lo;
            self.coeffs = if negate { other.coeffs.iter().map(|c| -c).collect() } else { other.coeffs.clone() };
            return;
        }
        if other_lo < self.min_exp {
            let pad = (self.min_exp - other_lo) as usize;
            self.coeffs.splice(0..0, std::iter::repeat_n(BigInt::zero(), pad));
            self.min_exp = other_lo;
        }
        let need = (other_hi - self.min_exp + 1) as usize;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, BigInt::zero());
        }
        let start = (other_lo - self.min_exp) as usize;
        for (dst, src) in self.coeffs[start..].iter_mut().zip(&other.coeffs) {
            if negate {
                *dst -= src;
            } else {
                *dst += src;
            }
        }
        self.normalize();
    }

    fn scaled_shifted(&self, scale: &BigInt, shift: i64) -> Self {
        if scale.is_zero() || self.is_zero() {
            return Self::zero();
        }
        LaurentPolynomial::new(self.min_exp + shift, self.coeffs.iter().map(|c| c * scale).collect())
    }

    fn product(&self, other: &Self) -> Self {
        self * other
    }

    fn eval_at_one(&self) -> BigInt {
        LaurentPolynomial::eval_at_one(self)
    }

    fn terms(&self) -> Vec<(i64, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| (self.min_exp + t as i64, c))
            .collect()
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        out.add_shifted(rhs, 0, false);
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        out.add_shifted(rhs, 0, true);
        out
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPolynomial::new(self.min_exp + rhs.min_exp, coeffs)
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPolynomial({self})")
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, Poly::terms(self))
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: Vec<(i64, &BigInt)>) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (idx, (exp, c)) in terms.into_iter().enumerate() {
        let negative = c.sign() == num_bigint::Sign::Minus;
        let mag = c.magnitude();
        if idx == 0 {
            if negative {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if negative { " - " } else { " + " })?;
        }
        let unit = mag.is_one();
        match exp {
            0 => write!(f, "{mag}")?,
            1 if unit => f.write_str("z")?,
            1 => write!(f, "{mag}z")?,
            e if unit => write!(f, "z^{e}")?,
            e => write!(f, "{mag}z^{e}")?,
        }
    }
    Ok(())
}
