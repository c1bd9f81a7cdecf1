//! Two-sided families: the crank and Donaldson-Thomas products, the two
//! convolutions that transport tail stabilization, and the two-sided
//! stabilization check
//! `[z^(+-(n-k))] F_n = [z^(+-(n+1-k))] F_(n+1)` for `0 <= k <= n/2`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{LaurentPolynomial, ZPolynomial};
use crate::report::{Certification, Onset, ReportKind, StabilizationReport};
use crate::spec::{expand_laurent_product, presets, LaurentSequence, PolynomialSequence};
use crate::stabilization::{check_hypotheses, scan_upper_shift, HypothesisKind};

/// `M_0 ..= M_order` of `prod (1 - q^k) / ((1 - z q^k)(1 - z^-1 q^k))`.
pub fn expand_crank(order: usize) -> Result<LaurentSequence> {
    expand_laurent_product(&presets::crank(), order)
}

fn same_order(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::OrderMismatch { left: a, right: b });
    }
    Ok(())
}

/// `F_n(z) = sum_l A_l(z) B_(n-l)(z^-1)`.
pub fn convolve_mirrored(
    a: &PolynomialSequence<ZPolynomial>,
    b: &PolynomialSequence<ZPolynomial>,
) -> Result<LaurentSequence> {
    same_order(a.order(), b.order())?;
    let mirrored: Vec<LaurentPolynomial> = b.polys().iter().map(ZPolynomial::mirrored).collect();
    let polys = (0..=a.order())
        .map(|n| {
            (0..=n).fold(LaurentPolynomial::zero(), |acc, l| {
                &acc + &(&LaurentPolynomial::from(a.poly(l).clone()) * &mirrored[n - l])
            })
        })
        .collect();
    Ok(PolynomialSequence::new(None, polys))
}

/// `F_n(z) = sum_l c_(n-l) A_l(z)` for a plain `q`-series `c_0, c_1, ...`.
pub fn convolve_with_series(
    a: &PolynomialSequence<ZPolynomial>,
    q: &[BigInt],
) -> Result<PolynomialSequence<ZPolynomial>> {
    same_order(a.order(), q.len().saturating_sub(1))?;
    let polys = (0..=a.order())
        .map(|n| {
            (0..=n).fold(ZPolynomial::zero(), |acc, l| &acc + &(&ZPolynomial::constant(q[n - l].clone()) * a.poly(l)))
        })
        .collect();
    Ok(PolynomialSequence::new(None, polys))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    fn name(self) -> &'static str {
        match self {
            Side::Positive => "positive",
            Side::Negative => "negative",
        }
    }

    fn sign(self) -> i64 {
        match self {
            Side::Positive => 1,
            Side::Negative => -1,
        }
    }
}

/// Largest `K` with `[z^(s(n-k))] F_n = [z^(s(n+1-k))] F_(n+1)` for all
/// `0 <= k <= K` (`-1` if `k = 0` already fails), capped at `n`.
fn tail_extent(lo: &LaurentPolynomial, hi: &LaurentPolynomial, n: i64, s: i64) -> i64 {
    (0..=n).find(|&k| lo.coeff(s * (n - k)) != hi.coeff(s * (n + 1 - k))).map_or(n, |k| k - 1)
}

/// One tail family for `k <= floor(n/m)`, recorded under the side's name.
fn scan_tail(report: &mut StabilizationReport, seq: &LaurentSequence, side: Side, m: i64) -> Vec<Onset> {
    let s = side.sign();
    let mut ok = true;
    let mut onsets = Vec::new();
    for n in 0..seq.order() {
        let (lo, hi) = (seq.poly(n), seq.poly(n + 1));
        let n = n as i64;
        let predicted = n / m;
        let empirical = tail_extent(lo, hi, n, s);
        if empirical < predicted {
            ok = false;
            for k in 0..=predicted {
                let (x, y) = (lo.coeff(s * (n - k)), hi.coeff(s * (n + 1 - k)));
                if x != y {
                    report.witness(side.name(), n, s * (n - k), x, y);
                }
            }
        }
        onsets.push(Onset { n, predicted, empirical });
    }
    report.record(side.name(), ok);
    onsets
}

fn two_sided_report(seq: &LaurentSequence) -> Result<StabilizationReport> {
    let mut report =
        StabilizationReport::new(ReportKind::TwoSided, seq.order()).with_status(Certification::CheckedToOrder);
    report.m = Some(2);
    if let Some(spec) = seq.spec() {
        let shape = check_hypotheses(spec, HypothesisKind::TwoSided, seq.order())?;
        if !shape.satisfied {
            report.status = Certification::EmpiricalOnly;
            for v in &shape.violations {
                report.notes.push(format!("shape: j = {}, b = {}, c = {}: {}", v.j, v.b, v.c, v.reason));
            }
        }
    }
    Ok(report)
}

/// Both tail families. Reported onsets are the smaller of the two sides.
pub fn verify_two_sided(seq: &LaurentSequence) -> Result<StabilizationReport> {
    let mut report = two_sided_report(seq)?;
    let pos = scan_tail(&mut report, seq, Side::Positive, 2);
    let neg = scan_tail(&mut report, seq, Side::Negative, 2);
    report.onsets = pos
        .into_iter()
        .zip(neg)
        .map(|(p, q)| Onset { n: p.n, predicted: p.predicted, empirical: p.empirical.min(q.empirical) })
        .collect();
    Ok(report)
}

/// A single tail family of the two-sided check.
pub fn verify_one_side(seq: &LaurentSequence, side: Side) -> Result<StabilizationReport> {
    let mut report = two_sided_report(seq)?;
    report.onsets = scan_tail(&mut report, seq, side, 2);
    Ok(report)
}

/// Positive tail of a mirrored convolution, `k <= floor(n/m)`.
pub fn verify_mirrored_convolution(seq: &LaurentSequence, m: i64) -> StabilizationReport {
    let mut report = StabilizationReport::new(ReportKind::MirroredConvolution, seq.order());
    report.m = Some(m);
    report.onsets = scan_tail(&mut report, seq, Side::Positive, m);
    report
}

/// `[z^k] F_n = [z^(k+1)] F_(n+1)` for `k >= ceil(n/2)`.
pub fn verify_series_convolution(seq: &PolynomialSequence<ZPolynomial>) -> StabilizationReport {
    let mut report = StabilizationReport::new(ReportKind::SeriesConvolution, seq.order());
    report.m = Some(2);
    scan_upper_shift(&mut report, seq, 1, "shift", |n| (n as i64 + 1) / 2);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{partition_count, PartitionConstraint};
    use crate::spec::expand_product;

    fn lp(min: i64, c: &[i64]) -> LaurentPolynomial {
        LaurentPolynomial::from_i64s(min, c)
    }

    #[test]
    fn crank_examples() {
        let m = expand_crank(12).unwrap();
        assert_eq!(m.poly(0), &LaurentPolynomial::one());
        assert_eq!(m.poly(1), &lp(-1, &[1, -1, 1]));
        assert_eq!(m.poly(2), &lp(-2, &[1, 0, 0, 0, 1]));
        for n in 4..=12 {
            assert_eq!(m.coeff(n, n as i64 - 2), &BigInt::from(1));
        }
        for n in 0..=12 {
            assert!(m.poly(n).is_symmetric());
            assert_eq!(m.poly(n).eval_at_one(), BigInt::from(partition_count(n as u64, PartitionConstraint::None)));
        }
    }

    #[test]
    fn mirrored_examples() {
        let a = expand_product(&presets::partitions(), 4).unwrap();
        let mut unit = vec![ZPolynomial::zero(); 5];
        unit[0] = ZPolynomial::one();
        let e = PolynomialSequence::new(None, unit);
        let f = convolve_mirrored(&a, &e).unwrap();
        for n in 0..=4 {
            assert_eq!(f.poly(n), &LaurentPolynomial::from(a.poly(n).clone()));
        }
        let f = convolve_mirrored(&a, &a).unwrap();
        assert_eq!(f.poly(2), &lp(-2, &[1, 1, 1, 1, 1]));
        let f0 = convolve_mirrored(&a.truncated(0), &a.truncated(0)).unwrap();
        assert_eq!(f0.order(), 0);
        assert_eq!(f0.poly(0), &LaurentPolynomial::one());
        assert!(matches!(convolve_mirrored(&a, &a.truncated(2)), Err(Error::OrderMismatch { .. })));
    }

    #[test]
    fn series_examples() {
        let a = expand_product(&presets::partitions(), 10).unwrap();
        let mut delta = vec![BigInt::from(0); 11];
        delta[0] = BigInt::from(1);
        assert_eq!(convolve_with_series(&a, &delta).unwrap().polys(), a.polys());
        let ones = vec![BigInt::from(1); 11];
        let f = convolve_with_series(&a, &ones).unwrap();
        let mut running = BigInt::from(0);
        for n in 0..=10 {
            running += BigInt::from(partition_count(n as u64, PartitionConstraint::None));
            assert_eq!(f.poly(n).eval_at_one(), running);
            assert_eq!(f.coeff(n, n as i64), &BigInt::from(1));
        }
        assert!(verify_series_convolution(&f).identity_holds);
        assert!(convolve_with_series(&a, &ones[..5]).is_err());
    }

    #[test]
    fn two_sided_crank() {
        let m = expand_crank(30).unwrap();
        let r = verify_two_sided(&m).unwrap();
        assert!(r.identity_holds, "{:?}", r.witnesses);
        assert_eq!(r.status, Certification::CheckedToOrder);
        assert_eq!(m.coeff(10, 10), &BigInt::from(1));
        assert_eq!(m.coeff(11, 11), &BigInt::from(1));
        let pos = verify_one_side(&m, Side::Positive).unwrap();
        let neg = verify_one_side(&m, Side::Negative).unwrap();
        assert_eq!(pos.onsets, neg.onsets);
    }

    #[test]
    fn two_sided_shape_refused() {
        let seq = expand_laurent_product(&presets::partitions(), 6).unwrap();
        let r = verify_two_sided(&seq).unwrap();
        assert_eq!(r.status, Certification::EmpiricalOnly);
    }

    #[test]
    fn corrupted_crank_caught() {
        let mut m = expand_crank(12).unwrap();
        let bumped = &m.poly(8).clone() + &LaurentPolynomial::monomial(1, 6);
        m.replace(8, bumped);
        let r = verify_two_sided(&m).unwrap();
        assert!(!r.checks["positive"]);
        assert!(r.checks["negative"]);
    }
}
