//! Truncated power series in `q` whose coefficients are polynomials in `z`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{Poly, ZPolynomial};

/// The `±` in a factor `(1 ± z^b q^c)^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Self> {
        match v {
            -1 => Some(Sign::Minus),
            1 => Some(Sign::Plus),
            _ => None,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.as_i64())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_i64(v).ok_or_else(|| serde::de::Error::custom(format!("sign must be -1 or 1, got {v}")))
    }
}

/// One concrete factor `(1 + sign * z^z_exp * q^q_exp)^exponent`.
///
/// A negative exponent is a denominator factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub sign: Sign,
    pub z_exp: i64,
    pub q_exp: i64,
    pub exponent: i64,
}

impl Factor {
    pub fn new(sign: Sign, z_exp: i64, q_exp: i64, exponent: i64) -> Self {
        Self { sign, z_exp, q_exp, exponent }
    }

    /// `(sign, zExp, qExp, exponent)` with the sign as `±1`.
    pub fn as_tuple(&self) -> (i64, i64, i64, i64) {
        (self.sign.as_i64(), self.z_exp, self.q_exp, self.exponent)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.sign == Sign::Plus { '+' } else { '-' };
        write!(f, "(1 {op} z^{} q^{})^{}", self.z_exp, self.q_exp, self.exponent)
    }
}

/// Generalized binomial coefficient `C(e, t)` for any integer `e`.
pub fn binomial(e: i64, t: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..t {
        acc *= BigInt::from(e) - BigInt::from(i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Series `sum_{n <= order} F_n(z) q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries<P> {
    terms: Vec<P>,
}

impl<P: Poly> TruncatedSeries<P> {
    /// The series `1`.
    pub fn one(order: usize) -> Self {
        let mut terms = vec![P::zero(); order + 1];
        terms[0] = P::one();
        Self { terms }
    }

    pub fn zero(order: usize) -> Self {
        Self { terms: vec![P::zero(); order + 1] }
    }

    /// Builds from explicit terms; the order is `terms.len() - 1`.
    pub fn from_terms(terms: Vec<P>) -> Self {
        assert!(!terms.is_empty(), "a truncated series has at least one term");
        Self { terms }
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, n: usize) -> &P {
        &self.terms[n]
    }

    pub fn terms(&self) -> &[P] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<P> {
        self.terms
    }

    /// Multiplies in place by one factor, one unit of exponent at a time:
    /// dividing by `(1 + sX)` runs `F_n -= s z^b F_{n-c}` upward in `n`,
    /// multiplying runs `F_n += s z^b F_{n-c}` downward.
    pub fn mul_factor_in_place(&mut self, factor: &Factor) -> Result<()> {
        if factor.q_exp < 1 {
            return Err(Error::ZeroQExponent);
        }
        if !P::LAURENT && factor.z_exp < 0 {
            return Err(Error::NegativeZExponent(factor.z_exp));
        }
        let c = factor.q_exp as usize;
        let order = self.order();
        if c > order || factor.exponent == 0 {
            return Ok(());
        }
        let plus = factor.sign == Sign::Plus;
        for _ in 0..factor.exponent.unsigned_abs() {
            if factor.exponent < 0 {
                for n in c..=order {
                    let (lo, hi) = self.terms.split_at_mut(n);
                    hi[0].add_shifted(&lo[n - c], factor.z_exp, plus);
                }
            } else {
                for n in (c..=order).rev() {
                    let (lo, hi) = self.terms.split_at_mut(n);
                    hi[0].add_shifted(&lo[n - c], factor.z_exp, !plus);
                }
            }
        }
        Ok(())
    }
}

/// Expands a single factor `(1 + sign z^z_exp q^q_exp)^exponent` to `q^order`
/// by the generalized binomial theorem.
pub fn expand_factor<P: Poly>(factor: &Factor, order: usize) -> Result<TruncatedSeries<P>> {
    if factor.q_exp < 1 {
        return Err(Error::ZeroQExponent);
    }
    if !P::LAURENT && factor.z_exp < 0 {
        return Err(Error::NegativeZExponent(factor.z_exp));
    }
    let mut out = TruncatedSeries::zero(order);
    let step = factor.q_exp as usize;
    for (t, n) in (0..=order).step_by(step).enumerate() {
        let t = t as u64;
        let mut c = binomial(factor.exponent, t);
        if factor.sign == Sign::Minus && t % 2 == 1 {
            c = -c;
        }
        out.terms[n] = P::monomial(c, factor.z_exp * t as i64)?;
    }
    Ok(out)
}

/// Cauchy product of two series of equal order.
pub fn series_mul_truncated<P: Poly>(s: &TruncatedSeries<P>, t: &TruncatedSeries<P>) -> Result<TruncatedSeries<P>> {
    if s.order() != t.order() {
        return Err(Error::OrderMismatch { left: s.order(), right: t.order() });
    }
    let order = s.order();
    let mut out = TruncatedSeries::<P>::zero(order);
    for (i, a) in s.terms.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in t.terms[..=order - i].iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let prod = a.product(b);
            out.terms[i + j].add_shifted(&prod, 0, false);
        }
    }
    Ok(out)
}

/// A factor `(1 + sign z^z_exp)^exponent` of a single-variable product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnivariateFactor {
    pub sign: Sign,
    pub z_exp: i64,
    pub exponent: i64,
}

impl UnivariateFactor {
    pub fn new(sign: Sign, z_exp: i64, exponent: i64) -> Self {
        Self { sign, z_exp, exponent }
    }
}

/// Coefficients of `z^0 .. z^max_exp` of a product of univariate factors.
pub fn expand_univariate_product(factors: &[UnivariateFactor], max_exp: usize) -> Result<ZPolynomial> {
    let mut coeffs = vec![BigInt::zero(); max_exp + 1];
    coeffs[0] = BigInt::one();
    for f in factors {
        if f.z_exp < 1 {
            return Err(Error::ZeroZExponent);
        }
        let d = f.z_exp as usize;
        if d > max_exp {
            continue;
        }
        for _ in 0..f.exponent.unsigned_abs() {
            // divide by (1 + s z^d) upward, multiply downward
            if f.exponent < 0 {
                for k in d..=max_exp {
                    let (lo, hi) = coeffs.split_at_mut(k);
                    match f.sign {
                        Sign::Minus => hi[0] += &lo[k - d],
                        Sign::Plus => hi[0] -= &lo[k - d],
                    }
                }
            } else {
                for k in (d..=max_exp).rev() {
                    let (lo, hi) = coeffs.split_at_mut(k);
                    match f.sign {
                        Sign::Minus => hi[0] -= &lo[k - d],
                        Sign::Plus => hi[0] += &lo[k - d],
                    }
                }
            }
        }
    }
    Ok(ZPolynomial::from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::LaurentPolynomial;

    fn zp(c: &[i64]) -> ZPolynomial {
        ZPolynomial::from_i64s(c)
    }

    fn mono(c: i64, e: usize) -> ZPolynomial {
        ZPolynomial::monomial(c, e)
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::zero());
        assert_eq!(binomial(-1, 4), BigInt::one());
        assert_eq!(binomial(-2, 2), BigInt::from(3));
        assert_eq!(binomial(-3, 3), BigInt::from(-10));
    }

    #[test]
    fn geometric_factor() {
        let s = expand_factor::<ZPolynomial>(&Factor::new(Sign::Minus, 1, 1, -1), 3).unwrap();
        assert_eq!(s.terms(), &[mono(1, 0), mono(1, 1), mono(1, 2), mono(1, 3)]);
    }

    #[test]
    fn binomial_square_factor() {
        let s = expand_factor::<ZPolynomial>(&Factor::new(Sign::Plus, 1, 2, 2), 4).unwrap();
        assert_eq!(s.terms(), &[mono(1, 0), zp(&[]), mono(2, 1), zp(&[]), mono(1, 2)]);
    }

    #[test]
    fn negative_binomial_factor() {
        let s = expand_factor::<ZPolynomial>(&Factor::new(Sign::Minus, 2, 3, -2), 6).unwrap();
        let z = ZPolynomial::zero();
        assert_eq!(s.terms(), &[mono(1, 0), z.clone(), z.clone(), mono(2, 2), z.clone(), z, mono(3, 4)]);
    }

    #[test]
    fn factor_errors() {
        assert!(matches!(
            expand_factor::<ZPolynomial>(&Factor::new(Sign::Minus, 1, 0, -1), 3),
            Err(Error::ZeroQExponent)
        ));
        assert!(matches!(
            expand_factor::<ZPolynomial>(&Factor::new(Sign::Minus, -1, 1, -1), 3),
            Err(Error::NegativeZExponent(-1))
        ));
        let l = expand_factor::<LaurentPolynomial>(&Factor::new(Sign::Minus, -1, 1, -1), 2).unwrap();
        assert_eq!(l.term(2), &LaurentPolynomial::monomial(1, -2));
    }

    #[test]
    fn cauchy_square_of_geometric() {
        let s = expand_factor::<ZPolynomial>(&Factor::new(Sign::Minus, 1, 1, -1), 2).unwrap();
        let sq = series_mul_truncated(&s, &s).unwrap();
        assert_eq!(sq.terms(), &[mono(1, 0), mono(2, 1), mono(3, 2)]);
    }

    #[test]
    fn cauchy_identity_and_direct() {
        let s = TruncatedSeries::from_terms(vec![zp(&[3, 1]), zp(&[0, 0, 5]), zp(&[-1])]);
        let one = TruncatedSeries::one(2);
        assert_eq!(series_mul_truncated(&s, &one).unwrap(), s);

        let a = TruncatedSeries::from_terms(vec![zp(&[1]), zp(&[0, 1])]);
        let b = TruncatedSeries::from_terms(vec![zp(&[1]), zp(&[0, 0, 1])]);
        let ab = series_mul_truncated(&a, &b).unwrap();
        assert_eq!(ab.terms(), &[zp(&[1]), zp(&[0, 1, 1])]);
    }

    #[test]
    fn cauchy_order_mismatch() {
        let a = TruncatedSeries::<ZPolynomial>::one(2);
        let b = TruncatedSeries::<ZPolynomial>::one(3);
        assert!(matches!(series_mul_truncated(&a, &b), Err(Error::OrderMismatch { left: 2, right: 3 })));
    }

    #[test]
    fn in_place_matches_binomial_expansion() {
        for f in [
            Factor::new(Sign::Minus, 1, 1, -1),
            Factor::new(Sign::Plus, 1, 2, 3),
            Factor::new(Sign::Minus, 2, 3, -2),
            Factor::new(Sign::Plus, 0, 1, -3),
            Factor::new(Sign::Minus, 0, 2, 2),
        ] {
            let mut s = TruncatedSeries::<ZPolynomial>::one(9);
            s.mul_factor_in_place(&f).unwrap();
            assert_eq!(s, expand_factor(&f, 9).unwrap(), "{f}");
        }
    }

    #[test]
    fn univariate_products() {
        let parts: Vec<_> = (1..=5).map(|d| UnivariateFactor::new(Sign::Minus, d, -1)).collect();
        assert_eq!(expand_univariate_product(&parts, 5).unwrap(), zp(&[1, 1, 2, 3, 5, 7]));
        assert_eq!(expand_univariate_product(&[], 3).unwrap(), zp(&[1]));
        let evens = [UnivariateFactor::new(Sign::Minus, 2, -1)];
        assert_eq!(expand_univariate_product(&evens, 6).unwrap(), zp(&[1, 0, 1, 0, 1, 0, 1]));
        let bad = [UnivariateFactor::new(Sign::Minus, 0, -1)];
        assert!(matches!(expand_univariate_product(&bad, 3), Err(Error::ZeroZExponent)));
    }

    #[test]
    fn univariate_numerators() {
        // (1 + z)^2 (1 - z^2)
        let f = [UnivariateFactor::new(Sign::Plus, 1, 2), UnivariateFactor::new(Sign::Minus, 2, 1)];
        assert_eq!(expand_univariate_product(&f, 5).unwrap(), zp(&[1, 2, 0, -2, -1]));
    }
}
