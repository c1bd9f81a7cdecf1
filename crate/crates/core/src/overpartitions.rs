//! Plane overpartitions counted by number of overlined entries:
//! `prod (1 + z q^n)^n / ((1 - q^n)^ceil(n/2) (1 - z^2 q^n)^floor(n/2))`.
//!
//! Overline rules: in a row only the last occurrence of a value may be
//! overlined; in a column every occurrence of a value after the first must
//! be overlined. An entry is subject to both rules at once.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::ZPolynomial;
use crate::report::{ReportKind, StabilizationReport};
use crate::series::{expand_univariate_product, Sign, UnivariateFactor};
use crate::spec::{expand_product, FactorRule, PolynomialSequence, ProductSpec};
use crate::stabilization::scan_upper_shift;

/// Largest weight the enumerator accepts.
pub const MAX_ENUMERATION_WEIGHT: u64 = 10;

pub fn plane_overpartition_spec() -> ProductSpec {
    ProductSpec::new(
        vec![
            FactorRule::parse("-j", "1", "j", Sign::Plus, 1, None),
            FactorRule::denominator("ceil(j/2)", "0", "j"),
            FactorRule::denominator("floor(j/2)", "2", "j"),
        ],
        false,
    )
    .named("plane_overpartitions")
}

/// Rows of a plane partition: weakly decreasing along rows and columns.
pub type PlanePartition = Vec<Vec<u64>>;

/// Every plane partition of `n`.
pub fn plane_partitions(n: u64) -> Vec<PlanePartition> {
    fn next_row(rest: u64, above: &[u64], rows: &mut PlanePartition, out: &mut Vec<PlanePartition>) {
        if rest == 0 {
            out.push(rows.clone());
            return;
        }
        extend(rest, above, &mut Vec::new(), rows, out);
    }

    fn extend(rest: u64, above: &[u64], row: &mut Vec<u64>, rows: &mut PlanePartition, out: &mut Vec<PlanePartition>) {
        let col = row.len();
        if col == above.len() {
            return;
        }
        let cap = above[col].min(row.last().copied().unwrap_or(u64::MAX)).min(rest);
        for v in 1..=cap {
            row.push(v);
            rows.push(row.clone());
            next_row(rest - v, row, rows, out);
            rows.pop();
            extend(rest - v, above, row, rows, out);
            row.pop();
        }
    }

    let mut out = Vec::new();
    next_row(n, &vec![n; n as usize], &mut Vec::new(), &mut out);
    out
}

/// `sum z^(overlines)` over the legal overline assignments of one plane
/// partition.
pub fn overline_polynomial(pp: &PlanePartition) -> ZPolynomial {
    let (mut forced, mut free) = (0usize, 0u32);
    for (r, row) in pp.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            let row_last = row.get(c + 1) != Some(&v);
            let column_repeat = r > 0 && pp[r - 1][c] == v;
            match (column_repeat, row_last) {
                (true, false) => return ZPolynomial::zero(),
                (true, true) => forced += 1,
                (false, true) => free += 1,
                (false, false) => {}
            }
        }
    }
    let binomials: Vec<BigInt> = (0..=free).map(|k| binomial(free, k)).collect();
    &ZPolynomial::monomial(1, forced) * &ZPolynomial::from_coeffs(binomials)
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// `[q^n]` of the product, computed by listing plane overpartitions.
pub fn enumerate_plane_overpartitions(n: u64) -> Result<ZPolynomial> {
    if n > MAX_ENUMERATION_WEIGHT {
        return Err(Error::InvalidParameters(format!(
            "enumeration is limited to weight {MAX_ENUMERATION_WEIGHT}, got {n}"
        )));
    }
    Ok(plane_partitions(n).par_iter().map(overline_polynomial).reduce(ZPolynomial::zero, |a, b| &a + &b))
}

/// `[z^(k+1)] F_(n+1) = [z^k] F_n` for `k >= ceil(2n/3)`.
pub fn verify_pop_sequence(seq: &PolynomialSequence<ZPolynomial>) -> Result<StabilizationReport> {
    if seq.order() < 2 {
        return Err(Error::InvalidParameters("sequence order must be at least 2".into()));
    }
    let mut report = StabilizationReport::new(ReportKind::PlaneOverpartition, seq.order());
    scan_upper_shift(&mut report, seq, 1, "shift", |n| (2 * n as i64 + 2) / 3);
    Ok(report)
}

pub fn verify_pop_stabilization(order: usize) -> Result<StabilizationReport> {
    verify_pop_sequence(&expand_product(&plane_overpartition_spec(), order)?)
}

/// `[q^n] prod ((1 + q^n) / (1 - q^n))^n`, the `z = 1` specialization.
pub fn unweighted_counts(order: usize) -> Result<ZPolynomial> {
    let factors: Vec<UnivariateFactor> = (1..=order as i64)
        .flat_map(|n| [UnivariateFactor::new(Sign::Plus, n, n), UnivariateFactor::new(Sign::Minus, n, -n)])
        .collect();
    expand_univariate_product(&factors, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Factor;
    use crate::spec::instantiate_factors;

    fn zp(c: &[i64]) -> ZPolynomial {
        ZPolynomial::from_i64s(c)
    }

    #[test]
    fn instantiated_factors() {
        let mut f: Vec<_> =
            instantiate_factors(&plane_overpartition_spec(), 2).unwrap().iter().map(Factor::as_tuple).collect();
        f.sort();
        let mut expected = vec![(1, 1, 1, 1), (-1, 0, 1, -1), (1, 1, 2, 2), (-1, 0, 2, -1), (-1, 2, 2, -1)];
        expected.sort();
        assert_eq!(f, expected);
    }

    #[test]
    fn plane_partition_counts() {
        let counts: Vec<usize> = (0..=6).map(|n| plane_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 6, 13, 24, 48]);
    }

    #[test]
    fn small_weights() {
        assert_eq!(enumerate_plane_overpartitions(0).unwrap(), ZPolynomial::one());
        assert_eq!(enumerate_plane_overpartitions(1).unwrap(), zp(&[1, 1]));
        assert_eq!(enumerate_plane_overpartitions(2).unwrap(), zp(&[2, 3, 1]));
        assert!(enumerate_plane_overpartitions(MAX_ENUMERATION_WEIGHT + 1).is_err());
    }

    #[test]
    fn column_rule_forces_overline() {
        // a column (1; 1): the lower 1 is forced, the upper may go either way
        assert_eq!(overline_polynomial(&vec![vec![1], vec![1]]), zp(&[0, 1, 1]));
        // (1 1; 1): the lower-left 1 is forced but the top-left is not row-last
        assert_eq!(overline_polynomial(&vec![vec![1, 1], vec![1]]), zp(&[0, 1, 1]));
        // (2 2; 2 2): the lower-left 2 would be forced but is not row-last
        assert!(overline_polynomial(&vec![vec![2, 2], vec![2, 2]]).is_zero());
    }

    #[test]
    fn enumeration_matches_product() {
        let seq = expand_product(&plane_overpartition_spec(), 6).unwrap();
        for n in 0..=6 {
            assert_eq!(&enumerate_plane_overpartitions(n as u64).unwrap(), seq.poly(n), "n={n}");
        }
    }

    #[test]
    fn specialization_at_one() {
        let seq = expand_product(&plane_overpartition_spec(), 20).unwrap();
        let counts = unweighted_counts(20).unwrap();
        for n in 0..=20 {
            assert_eq!(&seq.poly(n).eval_at_one(), counts.coeff(n));
        }
    }

    #[test]
    fn stabilization() {
        let r = verify_pop_stabilization(30).unwrap();
        assert!(r.identity_holds, "{:?}", r.witnesses);
        let seq = expand_product(&plane_overpartition_spec(), 2).unwrap();
        assert_eq!(seq.coeff(1, 1), &BigInt::from(1));
        assert_eq!(seq.coeff(2, 2), &BigInt::from(1));
    }

    #[test]
    fn corrupted_caught() {
        let mut seq = expand_product(&plane_overpartition_spec(), 14).unwrap();
        let bumped = &seq.poly(9).clone() + &ZPolynomial::monomial(1, 8);
        seq.replace(9, bumped);
        let r = verify_pop_sequence(&seq).unwrap();
        assert!(!r.identity_holds);
        assert!(r.witnesses.iter().any(|w| w.n == 8 || w.n == 9));
    }
}
