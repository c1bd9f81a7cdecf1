//! Coefficient stabilization for products `prod (1 - z^b(j) q^c(j))^(-a_j)`.
//!
//! * upper tail: with one factor `(1 - zq)^-1` and `m b(j) <= c(j)`
//!   elsewhere, `[z^k] F_n = [z^(k+1)] F_(n+1)` for `k > n/m`, and the top
//!   coefficients `[z^(n-l)] F_n` equal `[z^l] prod (1 - z^(c-b))^(-a)`
//!   for `l <= n/m` and are bounded by it for every `l`;
//! * lower tail: with one factor `(1 - q^c1)^-1` and `(m+1) b(j) > c(j)`
//!   elsewhere, `[z^k] F_n = [z^k] F_(n+c1)` for `k <= n/(m+1)`;
//! * period two: for `prod_(j>=2) (1 - z q^j)^(-a_j)` with `a_2 = 1`,
//!   `deg F_n = floor(n/2)` and `[z^k] F_n = [z^(k+1)] F_(n+2)` for `k >= n/3`.
//!
//! Every real-valued bound is turned into an integer range that never
//! exceeds it: `k > n/m` becomes `k >= floor(n/m) + 1`, `k <= n/(m+1)`
//! becomes `k <= floor(n/(m+1))`, `k >= n/3` becomes `k >= ceil(n/3)`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::scan_at_most;
use crate::poly::ZPolynomial;
use crate::report::{Onset, ReportKind, StabilizationReport};
use crate::series::{expand_univariate_product, Sign, UnivariateFactor};
use crate::spec::{instantiate_raw, PolynomialSequence, ProductSpec, RawFactor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum HypothesisKind {
    UpperTail,
    LowerTail,
    Periodic,
    TwoSided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Option<usize>,
    pub j: i64,
    pub b: i64,
    pub c: i64,
    pub reason: String,
}

impl Violation {
    fn at(f: &RawFactor, reason: impl Into<String>) -> Self {
        Self { rule: Some(f.rule), j: f.j, b: f.b, c: f.c, reason: reason.into() }
    }

    fn missing(b: i64, c: i64, reason: impl Into<String>) -> Self {
        Self { rule: None, j: 1, b, c, reason: reason.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub kind: HypothesisKind,
    pub satisfied: bool,
    /// Upper tail: the largest valid `m`. Lower tail: the smallest.
    pub m: Option<i64>,
    /// Lower tail: `c(1)` of the `z`-free factor.
    pub c1: Option<i64>,
    pub violations: Vec<Violation>,
}

impl HypothesisCheck {
    fn finish(kind: HypothesisKind, m: Option<i64>, c1: Option<i64>, violations: Vec<Violation>) -> Self {
        Self { kind, satisfied: violations.is_empty(), m, c1, violations }
    }
}

/// Checks the hypotheses of one stabilization statement on the factors with
/// `c(j) <= order`; higher factors cannot influence `F_0 .. F_order`.
pub fn check_hypotheses(spec: &ProductSpec, kind: HypothesisKind, order: usize) -> Result<HypothesisCheck> {
    let raw: Vec<RawFactor> = instantiate_raw(spec, order)?.into_iter().filter(|f| f.a != 0).collect();
    Ok(match kind {
        HypothesisKind::UpperTail => check_upper(&raw, order),
        HypothesisKind::LowerTail => check_lower(&raw),
        HypothesisKind::Periodic => check_periodic(&raw),
        HypothesisKind::TwoSided => check_two_sided(&raw),
    })
}

fn denominator_violations(raw: &[RawFactor]) -> Vec<Violation> {
    raw.iter()
        .filter(|f| f.sign == Sign::Plus || f.a < 0)
        .map(|f| Violation::at(f, "not a factor (1 - z^b q^c)^(-a) with a >= 0"))
        .collect()
}

fn unit_exponent(raw: &[RawFactor], b: i64, c: i64) -> i64 {
    raw.iter().filter(|f| f.b == b && f.c == c && f.sign == Sign::Minus).map(|f| f.a).sum()
}

fn require_unit(raw: &[RawFactor], b: i64, c: i64, what: &str, violations: &mut Vec<Violation>) {
    let total = unit_exponent(raw, b, c);
    if total == 1 {
        return;
    }
    let reason = format!("{what} must appear with exponent exactly -1 (found {})", -total);
    let hits: Vec<_> = raw.iter().filter(|f| f.b == b && f.c == c && f.sign == Sign::Minus).collect();
    if hits.is_empty() {
        violations.push(Violation::missing(b, c, reason));
    } else {
        violations.extend(hits.into_iter().map(|f| Violation::at(f, reason.clone())));
    }
}

fn check_upper(raw: &[RawFactor], order: usize) -> HypothesisCheck {
    let mut violations = denominator_violations(raw);
    // the first factor: a_1 = b(1) = c(1) = 1
    for f in raw.iter().filter(|f| f.c == 1 && f.b != 0 && f.b != 1) {
        violations.push(Violation::at(f, "b(1) must be 1"));
    }
    require_unit(raw, 1, 1, "(1 - z q)", &mut violations);
    let rest: Vec<&RawFactor> = raw.iter().filter(|f| !(f.b == 1 && f.c == 1)).collect();
    for f in rest.iter().filter(|f| f.b < 0) {
        violations.push(Violation::at(f, "negative z-exponent"));
    }
    let m = rest.iter().filter(|f| f.b > 0).map(|f| f.c.div_euclid(f.b)).min().unwrap_or(order as i64 + 1).max(1);
    if m < 2 {
        for f in rest.iter().filter(|f| 2 * f.b > f.c) {
            violations.push(Violation::at(f, "2 b(j) > c(j)"));
        }
    }
    let m = (m >= 2).then_some(m);
    HypothesisCheck::finish(HypothesisKind::UpperTail, m, None, violations)
}

fn check_lower(raw: &[RawFactor]) -> HypothesisCheck {
    let mut violations = denominator_violations(raw);
    let zero_b: Vec<&RawFactor> = raw.iter().filter(|f| f.b == 0).collect();
    let c1 = match zero_b.as_slice() {
        [] => {
            violations.push(Violation::missing(0, 1, "no factor with b(1) = 0"));
            None
        }
        [f] => {
            if f.a != 1 {
                violations.push(Violation::at(f, format!("a_1 must be 1 (found {})", f.a)));
            }
            Some(f.c)
        }
        many => {
            for f in many {
                violations.push(Violation::at(f, "only one factor may have b = 0"));
            }
            None
        }
    };
    let rest: Vec<&RawFactor> = raw.iter().filter(|f| f.b != 0).collect();
    for f in rest.iter().filter(|f| f.b < 0) {
        violations.push(Violation::at(f, "b(j) must be positive for j >= 2"));
    }
    // smallest m with (m + 1) b > c, i.e. m >= floor(c / b)
    let m = rest.iter().filter(|f| f.b > 0).map(|f| f.c.div_euclid(f.b)).max().unwrap_or(1).max(1);
    HypothesisCheck::finish(HypothesisKind::LowerTail, Some(m), c1, violations)
}

fn check_periodic(raw: &[RawFactor]) -> HypothesisCheck {
    let mut violations = denominator_violations(raw);
    for f in raw {
        if f.b != 1 {
            violations.push(Violation::at(f, "every factor must carry z^1"));
        }
        if f.c < 2 {
            violations.push(Violation::at(f, "a_1 must be 0 (no q^1 factor)"));
        }
    }
    require_unit(raw, 1, 2, "(1 - z q^2)", &mut violations);
    HypothesisCheck::finish(HypothesisKind::Periodic, None, None, violations)
}

fn check_two_sided(raw: &[RawFactor]) -> HypothesisCheck {
    let mut violations = Vec::new();
    for f in raw {
        if f.b.abs() > 1 {
            violations.push(Violation::at(f, "z-exponent must be -1, 0 or 1"));
        } else if f.b != 0 && f.sign == Sign::Plus {
            violations.push(Violation::at(f, "z-carrying factors must be (1 - z^±1 q^i)"));
        }
    }
    require_unit(raw, 1, 1, "(1 - z q)", &mut violations);
    require_unit(raw, -1, 1, "(1 - z^-1 q)", &mut violations);
    HypothesisCheck::finish(HypothesisKind::TwoSided, None, None, violations)
}

/// Coefficients `z^0 ..= z^order` of the single-variable limit product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitSequence {
    order: usize,
    poly: ZPolynomial,
}

impl LimitSequence {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn poly(&self) -> &ZPolynomial {
        &self.poly
    }

    pub fn coeff(&self, l: usize) -> &BigInt {
        assert!(l <= self.order, "z^{l} is beyond the computed order {}", self.order);
        self.poly.coeff(l)
    }

    pub fn coeffs(&self) -> Vec<BigInt> {
        (0..=self.order).map(|l| self.poly.coeff(l).clone()).collect()
    }
}

/// `prod_(j>=2) (1 + sign z^(c(j)-b(j)))^(-a_j)` truncated at `z^max_exp`,
/// where "j >= 2" means every factor but the single `(1 - zq)^-1`.
pub fn limiting_sequence(spec: &ProductSpec, max_exp: usize) -> Result<LimitSequence> {
    spec.validate()?;
    let bound = max_exp as i64;
    let mut factors = Vec::new();
    let mut unit_seen = 0i64;
    for (idx, rule) in spec.rules.iter().enumerate() {
        let diff = rule.c.clone().minus(rule.b.clone());
        for (j, d) in scan_at_most(idx, &diff, rule.j_min, rule.j_max, bound)? {
            let a = rule.a.eval(j);
            let b = rule.b.eval(j);
            let c = b + d;
            if c < 1 {
                return Err(Error::NonPositiveQExponent { rule: idx, j, value: c });
            }
            if a == 0 {
                continue;
            }
            if b == 1 && c == 1 && rule.sign == Sign::Minus {
                unit_seen += a;
                continue;
            }
            if d <= 0 {
                return Err(Error::NonPositiveDifference { rule: idx, j, value: d });
            }
            factors.push(UnivariateFactor::new(rule.sign, d, -a));
        }
    }
    if unit_seen != 1 {
        return Err(Error::HypothesisFailed(format!(
            "the factor (1 - z q) must appear with exponent -1, found {}",
            -unit_seen
        )));
    }
    factors.sort_by_key(|f| (f.z_exp, f.sign, f.exponent));
    Ok(LimitSequence { order: max_exp, poly: expand_univariate_product(&factors, max_exp)? })
}

/// Least `k0 >= 0` with `[z^k] a = [z^(k+1)] b` for every `k >= k0`.
pub(crate) fn shift_onset(a: &ZPolynomial, b: &ZPolynomial) -> i64 {
    let top = a.len().max(b.len()) as i64;
    for k in (0..=top).rev() {
        if a.coeff_i(k) != b.coeff_i(k + 1) {
            return k + 1;
        }
    }
    0
}

/// Largest `K <= cap` with `[z^k] a = [z^k] b` for every `0 <= k <= K`;
/// `-1` if they already differ at `k = 0`.
pub(crate) fn agreement_extent(a: &ZPolynomial, b: &ZPolynomial, cap: i64) -> i64 {
    (0..=cap).find(|&k| a.coeff_i(k) != b.coeff_i(k)).map_or(cap, |k| k - 1)
}

/// Scans the shift identity `[z^k] F_n = [z^(k+1)] F_(n+step)` for all
/// `k >= predicted(n)` and records onsets and witnesses.
pub(crate) fn scan_upper_shift(
    report: &mut StabilizationReport,
    seq: &PolynomialSequence<ZPolynomial>,
    step: usize,
    check: &str,
    predicted: impl Fn(usize) -> i64,
) {
    let mut ok = true;
    for n in 0..=seq.order().saturating_sub(step) {
        if n + step > seq.order() {
            break;
        }
        let (a, b) = (seq.poly(n), seq.poly(n + step));
        let empirical = shift_onset(a, b);
        let threshold = predicted(n);
        if empirical > threshold {
            ok = false;
            for k in threshold..empirical {
                if a.coeff_i(k) != b.coeff_i(k + 1) {
                    report.witness(check, n as i64, k, a.coeff_i(k), b.coeff_i(k + 1));
                }
            }
        }
        report.onsets.push(Onset { n: n as i64, predicted: threshold, empirical });
    }
    report.record(check, ok);
}

/// Upper-tail shift, optional limit-sequence match and upper bound.
pub fn verify_upper(
    seq: &PolynomialSequence<ZPolynomial>,
    m: i64,
    limit: Option<&LimitSequence>,
) -> Result<StabilizationReport> {
    if seq.order() < 2 {
        return Err(Error::InvalidParameters("sequence order must be at least 2".into()));
    }
    if m < 1 {
        return Err(Error::InvalidParameters(format!("m = {m} must be positive")));
    }
    let order = seq.order();
    let mut report = StabilizationReport::new(ReportKind::UpperTail, order);
    report.m = Some(m);
    scan_upper_shift(&mut report, seq, 1, "shift", |n| n as i64 / m + 1);

    if let Some(limit) = limit {
        if limit.order() < order {
            return Err(Error::LimitTooShort { have: limit.order(), need: order });
        }
        let (mut matches, mut bounded) = (true, true);
        for n in 0..=order {
            let f = seq.poly(n);
            for l in 0..=n {
                let top = f.coeff(n - l);
                let lim = limit.coeff(l);
                if l as i64 <= n as i64 / m && top != lim {
                    matches = false;
                    report.witness("limit", n as i64, (n - l) as i64, top, lim);
                }
                if top > lim {
                    bounded = false;
                    report.witness("bound", n as i64, (n - l) as i64, top, lim);
                }
            }
        }
        report.limit_match = Some(matches);
        report.bound_holds = Some(bounded);
    }
    Ok(report)
}

/// `[z^k] F_n = [z^k] F_(n+c1)` for `0 <= k <= floor(n/(m+1))`.
pub fn verify_lower_shift(seq: &PolynomialSequence<ZPolynomial>, c1: usize, m: i64) -> StabilizationReport {
    let order = seq.order();
    let mut report = StabilizationReport::new(ReportKind::LowerTail, order);
    report.m = Some(m);
    let mut ok = true;
    for n in 0..=order {
        if n + c1 > order {
            break;
        }
        let (a, b) = (seq.poly(n), seq.poly(n + c1));
        let predicted = n as i64 / (m + 1);
        let empirical = agreement_extent(a, b, n as i64);
        if empirical < predicted {
            ok = false;
            for k in 0..=predicted {
                if a.coeff_i(k) != b.coeff_i(k) {
                    report.witness("shift", n as i64, k, a.coeff_i(k), b.coeff_i(k));
                }
            }
        }
        report.onsets.push(Onset { n: n as i64, predicted, empirical });
    }
    report.record("shift", ok);
    report
}

/// Degree law `deg F_n = floor(n/2)` (for `n != 1`, where `F_1 = 0`) and
/// the period-two shift for `k >= ceil(n/3)`.
pub fn verify_periodic_shift(seq: &PolynomialSequence<ZPolynomial>) -> StabilizationReport {
    let order = seq.order();
    let mut report = StabilizationReport::new(ReportKind::Periodic, order);
    let mut degree_ok = true;
    for n in 0..=order {
        let f = seq.poly(n);
        let deg = f.degree().map_or(-1, |d| d as i64);
        let expected = if n == 1 { -1 } else { n as i64 / 2 };
        if deg != expected {
            degree_ok = false;
            report.witness("degree", n as i64, 0, &BigInt::from(deg), &BigInt::from(expected));
        }
    }
    report.record("degree", degree_ok);
    scan_upper_shift(&mut report, seq, 2, "shift", |n| (n as i64 + 2) / 3);
    report
}

/// `[z^(n-ell)] F_n` straight from the limit product, with no bivariate
/// expansion. Only valid inside the stable range `ell <= floor(n/m)`.
pub fn fast_tail_coefficient(spec: &ProductSpec, n: u64, ell: u64) -> Result<BigInt> {
    // the first factor has c = 1, so look at least that far
    let hyp = check_hypotheses(spec, HypothesisKind::UpperTail, n.max(1) as usize)?;
    let Some(m) = hyp.m.filter(|_| hyp.satisfied) else {
        let why = hyp.violations.first().map_or_else(|| "no valid m".to_string(), |v| v.reason.clone());
        return Err(Error::HypothesisFailed(why));
    };
    let m = m as u64;
    if ell > n / m {
        return Err(Error::OutsideStableRange { n, ell, m });
    }
    Ok(limiting_sequence(spec, ell as usize)?.coeff(ell as usize).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{partition_count, PartitionConstraint};
    use crate::spec::{expand_product, presets, FactorRule};

    fn zp(c: &[i64]) -> ZPolynomial {
        ZPolynomial::from_i64s(c)
    }

    fn lower_example() -> ProductSpec {
        ProductSpec::new(vec![FactorRule::denominator("1", "j - 1", "2*j - 1")], false)
    }

    #[test]
    fn partitions_upper_hypotheses() {
        let h = check_hypotheses(&presets::partitions(), HypothesisKind::UpperTail, 20).unwrap();
        assert!(h.satisfied);
        assert_eq!(h.m, Some(2));
    }

    #[test]
    fn lower_example_hypotheses() {
        let h = check_hypotheses(&lower_example(), HypothesisKind::LowerTail, 30).unwrap();
        assert!(h.satisfied, "{:?}", h.violations);
        assert_eq!(h.m, Some(3));
        assert_eq!(h.c1, Some(1));
    }

    #[test]
    fn wrong_first_factor() {
        let spec = ProductSpec::new(
            vec![FactorRule::single(1, 2, 1, Sign::Minus), FactorRule::denominator("1", "1", "j").with_range(2, None)],
            false,
        );
        let h = check_hypotheses(&spec, HypothesisKind::UpperTail, 10).unwrap();
        assert!(!h.satisfied);
        assert!(h.violations.iter().any(|v| v.j == 1 && v.b == 2));
    }

    #[test]
    fn doubled_first_factor_refused() {
        let spec = ProductSpec::new(
            vec![FactorRule::denominator("1", "1", "j"), FactorRule::single(1, 1, 1, Sign::Minus)],
            false,
        );
        assert!(!check_hypotheses(&spec, HypothesisKind::UpperTail, 10).unwrap().satisfied);
    }

    #[test]
    fn periodic_and_two_sided_shapes() {
        assert!(check_hypotheses(&presets::no_ones(), HypothesisKind::Periodic, 20).unwrap().satisfied);
        assert!(!check_hypotheses(&presets::partitions(), HypothesisKind::Periodic, 20).unwrap().satisfied);
        assert!(check_hypotheses(&presets::crank(), HypothesisKind::TwoSided, 20).unwrap().satisfied);
        assert!(check_hypotheses(&presets::donaldson_thomas(), HypothesisKind::TwoSided, 20).unwrap().satisfied);
        assert!(!check_hypotheses(&presets::partitions(), HypothesisKind::TwoSided, 20).unwrap().satisfied);
    }

    #[test]
    fn limit_of_partitions_is_p() {
        assert_eq!(limiting_sequence(&presets::partitions(), 5).unwrap().poly(), &zp(&[1, 1, 2, 3, 5, 7]));
        assert_eq!(limiting_sequence(&presets::partitions(), 0).unwrap().coeffs(), vec![BigInt::from(1)]);
    }

    #[test]
    fn limit_with_odd_differences() {
        let spec = ProductSpec::new(
            vec![
                FactorRule::single(1, 1, 1, Sign::Minus),
                FactorRule::denominator("1", "j - 1", "3*j - 2").with_range(2, None),
            ],
            false,
        );
        let lim = limiting_sequence(&spec, 4).unwrap();
        assert_eq!(lim.coeffs(), [1, 0, 0, 1, 0].map(BigInt::from).to_vec());
    }

    #[test]
    fn limit_rejects_zero_difference() {
        let spec = ProductSpec::new(
            vec![FactorRule::denominator("1", "1", "j"), FactorRule::single(1, 2, 2, Sign::Minus)],
            false,
        );
        assert!(matches!(limiting_sequence(&spec, 4), Err(Error::NonPositiveDifference { .. })));
    }

    #[test]
    fn upper_on_partitions() {
        let seq = expand_product(&presets::partitions(), 20).unwrap();
        let lim = limiting_sequence(&presets::partitions(), 20).unwrap();
        let r = verify_upper(&seq, 2, Some(&lim)).unwrap();
        assert!(r.identity_holds && r.limit_match == Some(true) && r.bound_holds == Some(true));
        assert_eq!(seq.coeff(10, 8), &BigInt::from(2));
        assert_eq!(seq.coeff(11, 9), &BigInt::from(2));
        assert_eq!(BigInt::from(partition_count(10, PartitionConstraint::ExactlyKParts(8))), BigInt::from(2));
        for o in &r.onsets {
            assert!(o.empirical <= o.predicted);
        }
    }

    #[test]
    fn upper_rejects_short_limit_and_order() {
        let seq = expand_product(&presets::partitions(), 10).unwrap();
        let lim = limiting_sequence(&presets::partitions(), 5).unwrap();
        assert!(matches!(verify_upper(&seq, 2, Some(&lim)), Err(Error::LimitTooShort { have: 5, need: 10 })));
        let short = expand_product(&presets::partitions(), 1).unwrap();
        assert!(verify_upper(&short, 2, None).is_err());
    }

    #[test]
    fn constant_sequence_is_vacuous() {
        let seq = PolynomialSequence::new(None, vec![ZPolynomial::one(); 6]);
        let r = verify_upper(&seq, 2, None).unwrap();
        assert!(r.identity_holds);
    }

    #[test]
    fn corrupted_sequence_caught() {
        let mut seq = expand_product(&presets::partitions(), 12).unwrap();
        let mut bad = seq.poly(7).clone().into_coeffs();
        bad[6] += 1;
        seq.replace(7, ZPolynomial::from_coeffs(bad));
        let r = verify_upper(&seq, 2, None).unwrap();
        assert!(!r.identity_holds);
        assert!(r.witnesses.iter().any(|w| (w.n == 6 || w.n == 7) && w.check == "shift"));
    }

    #[test]
    fn lower_on_example() {
        let seq = expand_product(&lower_example(), 40).unwrap();
        let r = verify_lower_shift(&seq, 1, 3);
        assert!(r.identity_holds);
        for n in 0..=40 {
            assert_eq!(seq.coeff(n, 0), &BigInt::from(1));
        }
        let mut broken = seq.clone();
        broken.replace(20, &broken.poly(20).clone() + &ZPolynomial::one());
        assert!(!verify_lower_shift(&broken, 1, 3).identity_holds);
    }

    #[test]
    fn periodic_on_no_ones() {
        let seq = expand_product(&presets::no_ones(), 30).unwrap();
        assert_eq!(seq.coeff(6, 2), &BigInt::from(2));
        assert_eq!(seq.coeff(8, 3), &BigInt::from(2));
        assert_eq!(seq.poly(7).degree(), Some(3));
        assert_eq!(seq.poly(0), &ZPolynomial::one());
        assert!(seq.poly(1).is_zero());
        let r = verify_periodic_shift(&seq);
        assert!(r.identity_holds, "{:?}", r.witnesses);
    }

    #[test]
    fn fast_tail_examples() {
        let spec = presets::partitions();
        assert_eq!(fast_tail_coefficient(&spec, 1_000_000, 50).unwrap(), BigInt::from(204226));
        assert_eq!(fast_tail_coefficient(&spec, 100, 0).unwrap(), BigInt::from(1));
        assert!(matches!(fast_tail_coefficient(&spec, 10, 6), Err(Error::OutsideStableRange { n: 10, ell: 6, m: 2 })));
        let seq = expand_product(&spec, 30).unwrap();
        for n in 0..=30u64 {
            for ell in 0..=n / 2 {
                assert_eq!(&fast_tail_coefficient(&spec, n, ell).unwrap(), seq.coeff(n as usize, (n - ell) as i64));
            }
        }
    }
}
