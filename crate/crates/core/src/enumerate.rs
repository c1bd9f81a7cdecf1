//! Brute-force oracles that share no code with the series engine: the
//! exponent-vector sum for a single coefficient polynomial, and partition
//! counts by dynamic programming.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::Result;
use crate::poly::Poly;
use crate::series::Sign;
use crate::spec::{instantiate_raw, ProductSpec, RawFactor};

/// Multiplicities `e_j` attached to a list of instantiated factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentVector {
    multiplicities: Vec<u64>,
}

impl ExponentVector {
    pub fn zeros(len: usize) -> Self {
        Self { multiplicities: vec![0; len] }
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    /// Total `q`-weight `sum e_j c(j)`.
    pub fn mu(&self, factors: &[RawFactor]) -> i64 {
        self.multiplicities.iter().zip(factors).map(|(&e, f)| e as i64 * f.c).sum()
    }

    /// Total `z`-weight `sum e_j b(j)`.
    pub fn nu(&self, factors: &[RawFactor]) -> i64 {
        self.multiplicities.iter().zip(factors).map(|(&e, f)| e as i64 * f.b).sum()
    }

    /// `prod_j C(-a_j, e_j) sign_j^e_j`, the coefficient this vector
    /// contributes. For a denominator this is `C(a_j + e_j - 1, e_j)`.
    pub fn weight(&self, factors: &[RawFactor]) -> BigInt {
        self.multiplicities.iter().zip(factors).map(|(&e, f)| factor_weight(f, e)).product()
    }
}

fn factor_weight(f: &RawFactor, e: u64) -> BigInt {
    let mut w = BigInt::one();
    // C(-a, e) = (-a)(-a-1)...(-a-e+1) / e!
    for i in 0..e {
        w *= BigInt::from(-f.a) - BigInt::from(i);
        w /= BigInt::from(i + 1);
    }
    if f.sign == Sign::Minus && e % 2 == 1 {
        w = -w;
    }
    w
}

/// Visits every exponent vector over `factors` with `mu = n`.
///
/// Factors are scanned from the largest `c` down; a branch is cut as soon as
/// the remaining weight is positive but below every `c` still available.
pub fn for_each_exponent_vector(factors: &[RawFactor], n: i64, mut visit: impl FnMut(&ExponentVector)) {
    let mut order: Vec<usize> = (0..factors.len()).filter(|&i| factors[i].a != 0 && factors[i].c <= n).collect();
    order.sort_by_key(|&i| factors[i].c);
    let mut min_c = vec![i64::MAX; order.len() + 1];
    for (pos, &i) in order.iter().enumerate() {
        min_c[pos + 1] = min_c[pos].min(factors[i].c);
    }
    let mut ev = ExponentVector::zeros(factors.len());
    descend(factors, &order, &min_c, order.len(), n, &mut ev, &mut visit);
}

fn descend(
    factors: &[RawFactor],
    order: &[usize],
    min_c: &[i64],
    level: usize,
    remaining: i64,
    ev: &mut ExponentVector,
    visit: &mut impl FnMut(&ExponentVector),
) {
    if remaining == 0 {
        visit(ev);
        return;
    }
    if level == 0 || remaining < min_c[level] {
        return;
    }
    let idx = order[level - 1];
    let f = &factors[idx];
    // a numerator (1 + X)^e has no terms beyond X^e
    let cap = if f.a < 0 { (-f.a) as u64 } else { u64::MAX };
    let mut e = 0u64;
    loop {
        let left = remaining - e as i64 * f.c;
        if left < 0 || e > cap {
            break;
        }
        ev.multiplicities[idx] = e;
        descend(factors, order, min_c, level - 1, left, ev, visit);
        e += 1;
    }
    ev.multiplicities[idx] = 0;
}

/// `F_n` computed directly as the exponent-vector sum.
///
/// Same descent as [`for_each_exponent_vector`], but the weight and the
/// `z`-degree are carried down the recursion instead of recomputed per leaf.
pub fn coefficient_by_enumeration<P: Poly>(spec: &ProductSpec, n: usize) -> Result<P> {
    let factors = instantiate_raw(spec, n)?;
    let mut order: Vec<&RawFactor> = factors.iter().filter(|f| f.a != 0 && f.c <= n as i64).collect();
    order.sort_by_key(|f| f.c);
    let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
    accumulate(&order, n as i64, 0, &BigInt::one(), &mut acc);
    let mut out = P::zero();
    for (exp, c) in acc {
        if !c.is_zero() {
            out.add_shifted(&P::monomial(c, exp)?, 0, false);
        }
    }
    Ok(out)
}

fn accumulate(factors: &[&RawFactor], remaining: i64, nu: i64, weight: &BigInt, acc: &mut BTreeMap<i64, BigInt>) {
    if remaining == 0 {
        *acc.entry(nu).or_default() += weight;
        return;
    }
    let Some((f, rest)) = factors.split_last() else { return };
    if remaining < factors[0].c {
        return;
    }
    // running C(-a, e) sign^e
    let mut binom = BigInt::one();
    let mut e = 0i64;
    while e * f.c <= remaining {
        if e > 0 {
            binom = binom * (-f.a - (e - 1)) / e;
            if f.sign == Sign::Minus {
                binom = -binom;
            }
            if binom.is_zero() {
                break;
            }
        }
        accumulate(rest, remaining - e * f.c, nu + e * f.b, &(weight * &binom), acc);
        e += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionConstraint {
    None,
    /// Every part strictly below the bound.
    PartsLessThan(u64),
    NoOnes,
    ExactlyKParts(u64),
}

/// Number of partitions of `n` under a constraint.
pub fn partition_count(n: u64, constraint: PartitionConstraint) -> BigUint {
    match constraint {
        PartitionConstraint::None => parts_in_range(n, 1, n),
        PartitionConstraint::PartsLessThan(i) => parts_in_range(n, 1, i.saturating_sub(1)),
        PartitionConstraint::NoOnes => parts_in_range(n, 2, n),
        PartitionConstraint::ExactlyKParts(k) => exactly_k_parts(n, k),
    }
}

/// `p(0..=n_max)` in one pass.
pub fn partition_counts(n_max: u64) -> Vec<BigUint> {
    let n = n_max as usize;
    let mut table = vec![BigUint::zero(); n + 1];
    table[0] = BigUint::one();
    for part in 1..=n {
        for s in part..=n {
            let (lo, hi) = table.split_at_mut(s);
            hi[0] += &lo[s - part];
        }
    }
    table
}

fn parts_in_range(n: u64, lo: u64, hi: u64) -> BigUint {
    let n = n as usize;
    let mut table = vec![BigUint::zero(); n + 1];
    table[0] = BigUint::one();
    for part in lo as usize..=(hi as usize).min(n) {
        for s in part..=n {
            let (a, b) = table.split_at_mut(s);
            b[0] += &a[s - part];
        }
    }
    table.swap_remove(n)
}

fn exactly_k_parts(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(u8::from(n == 0 && k == 0));
    }
    let (n, k) = (n as usize, k as usize);
    // p(s, t) = p(s - 1, t - 1) + p(s - t, t)
    let mut table = vec![vec![BigUint::zero(); k + 1]; n + 1];
    table[0][0] = BigUint::one();
    for s in 1..=n {
        for t in 1..=k.min(s) {
            let v = &table[s - 1][t - 1] + &table[s - t][t];
            table[s][t] = v;
        }
    }
    table[n][k].clone()
}
