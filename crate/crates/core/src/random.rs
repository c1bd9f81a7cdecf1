//! Seeded generators for randomized specs and sequences. Index ranges stay
//! at `j <= 12` and slopes at most 6 so every exponent is in oracle reach.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::Expr;
use crate::poly::ZPolynomial;
use crate::series::Sign;
use crate::spec::{FactorRule, PolynomialSequence, ProductSpec};

pub const MAX_J: i64 = 12;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `slope * j + offset`, or `slope * (j - base) + offset` when `base != 0`.
fn affine_expr(slope: i64, base: i64, offset: i64) -> Expr {
    let j = if base == 0 { Expr::J } else { Expr::J.minus(Expr::Const(base)) };
    let scaled = if slope == 1 { j } else { Expr::Mul(Box::new(Expr::Const(slope)), Box::new(j)) };
    match (slope, offset) {
        (0, o) => Expr::Const(o),
        (_, 0) => scaled,
        (_, o) => Expr::Add(Box::new(scaled), Box::new(Expr::Const(o))),
    }
}

fn rule(a: Expr, b: Expr, c: Expr, sign: Sign, j_min: i64, j_max: i64) -> FactorRule {
    FactorRule { a, b, c, sign, j_min, j_max: Some(j_max) }
}

/// Any sign, numerators or denominators, `b >= 0`, `c >= 1`.
pub fn random_spec<R: Rng>(rng: &mut R) -> ProductSpec {
    let count = rng.gen_range(1..=3);
    let rules = (0..count)
        .map(|_| {
            let a = if rng.gen_bool(0.2) { Expr::J } else { Expr::Const(rng.gen_range(-2..=2)) };
            let b = affine_expr(rng.gen_range(0..=2), 0, rng.gen_range(0..=2));
            let c = affine_expr(rng.gen_range(1..=3), 0, rng.gen_range(0..=2));
            let sign = if rng.gen_bool(0.5) { Sign::Minus } else { Sign::Plus };
            let j_min = rng.gen_range(1..=2);
            rule(a, b, c, sign, j_min, rng.gen_range(j_min..=MAX_J))
        })
        .collect();
    ProductSpec::new(rules, false).named("random")
}

/// `(1 - z q)^-1` times one or two denominator families with
/// `m b(j) <= c(j) - 1` for `j >= 2`, for a random `m` in `2..=3`.
pub fn random_upper_spec<R: Rng>(rng: &mut R) -> ProductSpec {
    let m = rng.gen_range(2..=3);
    let mut rules = vec![FactorRule::single(1, 1, 1, Sign::Minus)];
    for _ in 0..rng.gen_range(1..=2) {
        let (beta1, beta0) = (rng.gen_range(0..=2i64), rng.gen_range(0..=2i64));
        let delta1 = rng.gen_range(0..=(6 - m * beta1).max(0));
        let delta0 = rng.gen_range(1..=3);
        // c(j) = m b(j) + delta1 (j - 2) + delta0
        let c_slope = m * beta1 + delta1;
        let c_offset = m * (2 * beta1 + beta0) + delta0;
        let b = affine_expr(beta1, 0, beta0);
        let c = if c_slope == 0 { Expr::Const(c_offset) } else { affine_expr(c_slope, 2, c_offset) };
        let a = Expr::Const(rng.gen_range(1..=3));
        rules.push(rule(a, b, c, Sign::Minus, 2, rng.gen_range(2..=MAX_J)));
    }
    ProductSpec::new(rules, false).named(format!("random-upper(m>={m})"))
}

/// `(1 - q^c1)^-1` times a denominator family with `b(j) > 0` and `c(j)`
/// strictly increasing above `c1`.
pub fn random_lower_spec<R: Rng>(rng: &mut R) -> ProductSpec {
    let c1 = rng.gen_range(1..=3);
    let (beta1, beta0) = (rng.gen_range(1..=2), rng.gen_range(0..=2));
    let gamma1 = rng.gen_range(1..=4);
    let gamma0 = rng.gen_range((c1 - gamma1 + 1).max(0)..=c1 + 2);
    let rules = vec![
        FactorRule::single(1, 0, c1, Sign::Minus),
        rule(
            Expr::Const(rng.gen_range(1..=2)),
            affine_expr(beta1, 1, beta0),
            affine_expr(gamma1, 1, gamma0),
            Sign::Minus,
            2,
            MAX_J,
        ),
    ];
    ProductSpec::new(rules, false).named("random-lower")
}

/// `B_0 ..= B_order` with `deg B_l <= l` and coefficients in `-5..=5`.
pub fn random_poly_sequence<R: Rng>(rng: &mut R, order: usize) -> PolynomialSequence<ZPolynomial> {
    let polys = (0..=order)
        .map(|l| ZPolynomial::from_coeffs((0..=l).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect()))
        .collect();
    PolynomialSequence::new(None, polys)
}

/// `c_0 ..= c_order` in `-5..=5`.
pub fn random_series<R: Rng>(rng: &mut R, order: usize) -> Vec<BigInt> {
    (0..=order).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect()
}
