//! Partitions with prescribed subsums: `Lambda_{m,i}(n, k)` counts the
//! partitions of `n` whose parts at indices `j = i (mod m)` sum to `k`
//! (parts in weakly decreasing order, indexed from 1).

use num_bigint::BigInt;
use num_traits::Zero;

use crate::enumerate::partition_counts;
use crate::error::{Error, Result};
use crate::poly::ZPolynomial;
use crate::report::{Certification, Onset, ReportKind, StabilizationReport};
use crate::series::Sign;
use crate::spec::{expand_product, FactorRule, PolynomialSequence, ProductSpec};
use crate::stabilization::{agreement_extent, shift_onset};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsumForm {
    /// `prod_j prod_(b<i) (1 - z^(j-1) q^((j-1)m+b))^-1 prod_(b>=i) (1 - z^j q^((j-1)m+b))^-1`
    Csw,
    /// `prod_(b<i) (1 - q^b)^-1 prod_(a>=1) prod_(d<m) (1 - z^a q^(i+(a-1)m+d))^-1`
    Rewritten,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsumSpec {
    m: i64,
    i: i64,
}

impl SubsumSpec {
    pub fn new(m: i64, i: i64) -> Result<Self> {
        if m < 1 || i < 1 || i > m {
            return Err(Error::InvalidParameters(format!("need m >= 1 and 1 <= i <= m, got m = {m}, i = {i}")));
        }
        Ok(Self { m, i })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn i(&self) -> i64 {
        self.i
    }
}

/// `slope * j + offset` in the rule grammar.
fn affine(slope: i64, offset: i64) -> String {
    let head = match slope {
        0 => return offset.to_string(),
        1 => "j".to_string(),
        s => format!("{s}*j"),
    };
    match offset {
        0 => head,
        o if o > 0 => format!("{head} + {o}"),
        o => format!("{head} - {}", -o),
    }
}

pub fn subsum_spec(m: i64, i: i64, form: SubsumForm) -> Result<ProductSpec> {
    let s = SubsumSpec::new(m, i)?;
    let (m, i) = (s.m, s.i);
    let mut rules = Vec::new();
    match form {
        SubsumForm::Csw => {
            for b in 1..=m {
                let z = if b < i { "j - 1" } else { "j" };
                rules.push(FactorRule::denominator("1", z, &affine(m, b - m)));
            }
        }
        SubsumForm::Rewritten => {
            for b in 1..i {
                rules.push(FactorRule::single(1, 0, b, Sign::Minus));
            }
            for d in 0..m {
                rules.push(FactorRule::denominator("1", "j", &affine(m, i - m + d)));
            }
        }
    }
    let tag = match form {
        SubsumForm::Csw => "csw_original",
        SubsumForm::Rewritten => "subsums",
    };
    Ok(ProductSpec::new(rules, false).named(format!("{tag}({m},{i})")))
}

/// `prod_(j>=1) (1 - z^(j-1) q^((j-1)m+b))^-1` for `m >= 2`, `1 <= b < m`.
pub fn single_family_spec(m: i64, b: i64) -> Result<ProductSpec> {
    if m < 2 || b < 1 || b >= m {
        return Err(Error::InvalidParameters(format!("need m >= 2 and 1 <= b < m, got m = {m}, b = {b}")));
    }
    Ok(ProductSpec::new(vec![FactorRule::denominator("1", "j - 1", &affine(m, b - m))], false)
        .named(format!("single_family({m},{b})")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaTable {
    spec: SubsumSpec,
    rows: Vec<ZPolynomial>,
}

impl LambdaTable {
    pub fn spec(&self) -> SubsumSpec {
        self.spec
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    /// `sum_k Lambda(n, k) z^k`.
    pub fn row(&self, n: usize) -> &ZPolynomial {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[ZPolynomial] {
        &self.rows
    }

    pub fn get(&self, n: usize, k: i64) -> &BigInt {
        self.rows[n].coeff_i(k)
    }
}

pub fn lambda_table(m: i64, i: i64, order: usize) -> Result<LambdaTable> {
    let spec = SubsumSpec::new(m, i)?;
    let seq = expand_product(&subsum_spec(m, i, SubsumForm::Rewritten)?, order)?;
    Ok(LambdaTable { spec, rows: seq.polys().to_vec() })
}

/// Calls `visit` on every partition of `n`, parts weakly decreasing.
pub fn for_each_partition(n: u64, mut visit: impl FnMut(&[u64])) {
    fn go(rest: u64, max: u64, parts: &mut Vec<u64>, visit: &mut impl FnMut(&[u64])) {
        if rest == 0 {
            visit(parts);
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            parts.push(p);
            go(rest - p, p, parts, visit);
            parts.pop();
        }
    }
    go(n, n, &mut Vec::new(), &mut visit);
}

/// Row `n` of the table, by listing every partition of `n`.
pub fn lambda_oracle(m: i64, i: i64, n: u64) -> Result<ZPolynomial> {
    let s = SubsumSpec::new(m, i)?;
    let (m, i) = (s.m as usize, s.i as usize);
    let mut counts = vec![BigInt::zero(); n as usize + 1];
    for_each_partition(n, |parts| {
        let sum: u64 = parts.iter().enumerate().filter(|(idx, _)| (idx + 1) % m == i % m).map(|(_, &p)| p).sum();
        counts[sum as usize] += 1;
    });
    Ok(ZPolynomial::from_coeffs(counts))
}

fn p_table(order: usize) -> Vec<BigInt> {
    partition_counts(order as u64).into_iter().map(BigInt::from).collect()
}

/// All three statements about `A_n = [q^n] prod (1 - z^(j-1) q^((j-1)m+b))^-1`
/// for `0 <= k <= n/(m+1)`: the shift `A_n -> A_(n+b)` ("part1"), vanishing
/// when `b` does not divide `n - mk` ("part2"), and the plateau `p(k)` when
/// it does and `bk <= n/(m+1)` ("part3").
pub fn verify_single_family_props(m: i64, b: i64, order: usize) -> Result<StabilizationReport> {
    let seq = expand_product(&single_family_spec(m, b)?, order)?;
    let p = p_table(order);
    let mut report = StabilizationReport::new(ReportKind::SingleFamily, order);
    report.m = Some(m);
    let (m, b) = (m as usize, b as usize);
    let (mut part1, mut part2, mut part3) = (true, true, true);
    for n in 0..=order {
        let a = seq.poly(n);
        let top = n / (m + 1);
        for (k, pk) in p.iter().enumerate().take(top + 1) {
            let v = a.coeff(k);
            if (n - m * k) % b != 0 {
                if !v.is_zero() {
                    part2 = false;
                    report.witness("part2", n as i64, k as i64, v, &BigInt::zero());
                }
            } else if b * k * (m + 1) <= n && v != pk {
                part3 = false;
                report.witness("part3", n as i64, k as i64, v, pk);
            }
        }
        if n + b <= order {
            let next = seq.poly(n + b);
            let empirical = agreement_extent(a, next, n as i64);
            if empirical < top as i64 {
                part1 = false;
                for k in 0..=top {
                    if a.coeff(k) != next.coeff(k) {
                        report.witness("part1", n as i64, k as i64, a.coeff(k), next.coeff(k));
                    }
                }
            }
            report.onsets.push(Onset { n: n as i64, predicted: top as i64, empirical });
        }
    }
    report.record("part1", part1);
    report.record("part2", part2);
    report.record("part3", part3);
    Ok(report)
}

/// `[z^k] F_n = [z^k] F_(n+1) = sum_l p(l) p(k-l)` for `k <= n/3` on
/// `G_{2,2}`, with the two sub-products checked separately: the even part
/// `B_(2k) = p(k) z^k`, `B_odd = 0`, and the plateau `[z^k] A_n = p(k)`.
pub fn verify_g22_convolution(order: usize) -> Result<StabilizationReport> {
    let f = expand_product(&subsum_spec(2, 2, SubsumForm::Rewritten)?, order)?;
    let odd = ProductSpec::new(vec![FactorRule::denominator("1", "j - 1", "2*j - 1")], false);
    let even = ProductSpec::new(vec![FactorRule::denominator("1", "j", "2*j")], false);
    let a = expand_product(&odd, order)?;
    let b = expand_product(&even, order)?;
    let p = p_table(order);
    let conv: Vec<BigInt> = (0..=order / 3).map(|k| (0..=k).map(|l| &p[l] * &p[k - l]).sum()).collect();

    let mut report = StabilizationReport::new(ReportKind::G22Convolution, order);
    let (mut conv_ok, mut shift_ok, mut a_ok, mut b_ok) = (true, true, true, true);
    for n in 0..=order {
        for k in 0..=n / 3 {
            let v = f.coeff(n, k as i64);
            if v != &conv[k] {
                conv_ok = false;
                report.witness("convolution", n as i64, k as i64, v, &conv[k]);
            }
            if n < order && v != f.coeff(n + 1, k as i64) {
                shift_ok = false;
                report.witness("shift", n as i64, k as i64, v, f.coeff(n + 1, k as i64));
            }
            if a.coeff(n, k as i64) != &p[k] {
                a_ok = false;
                report.witness("a-plateau", n as i64, k as i64, a.coeff(n, k as i64), &p[k]);
            }
        }
        let expected = if n % 2 == 0 { ZPolynomial::monomial(p[n / 2].clone(), n / 2) } else { ZPolynomial::zero() };
        if b.poly(n) != &expected {
            b_ok = false;
            report.witness("b-expansion", n as i64, (n / 2) as i64, &b.poly(n).eval_at_one(), &expected.eval_at_one());
        }
    }
    report.record("convolution", conv_ok);
    report.record("shift", shift_ok);
    report.record("a-plateau", a_ok);
    report.record("b-expansion", b_ok);
    Ok(report)
}

/// `Lambda(n, j) = Lambda(n-i, j-1)` for `j >= floor(n/(i+1)) + 1`; only
/// certified when `m > i + 1`.
pub fn verify_subsum_shift(m: i64, i: i64, order: usize) -> Result<StabilizationReport> {
    let table = lambda_table(m, i, order)?;
    let mut report = StabilizationReport::new(ReportKind::SubsumShift, order);
    report.m = Some(m);
    if m <= i + 1 {
        report = report.with_status(Certification::EmpiricalOnly);
        report.notes.push(format!("m = {m} is not above i + 1 = {}; the scan is empirical only", i + 1));
    }
    let step = i as usize;
    let mut ok = true;
    for n in step..=order {
        let (lo, hi) = (table.row(n - step), table.row(n));
        let predicted = n as i64 / (i + 1) + 1;
        // shift_onset works in the index of the smaller row: j = k + 1
        let empirical = shift_onset(lo, hi) + 1;
        if empirical > predicted {
            ok = false;
            for j in predicted..empirical {
                if hi.coeff_i(j) != lo.coeff_i(j - 1) {
                    report.witness("shift", n as i64, j, hi.coeff_i(j), lo.coeff_i(j - 1));
                }
            }
        }
        report.onsets.push(Onset { n: n as i64, predicted, empirical });
    }
    report.record("shift", ok);
    Ok(report)
}

/// Both product forms, expanded to the same order.
pub fn forms_agree(m: i64, i: i64, order: usize) -> Result<bool> {
    let a: PolynomialSequence<ZPolynomial> = expand_product(&subsum_spec(m, i, SubsumForm::Csw)?, order)?;
    let b = expand_product(&subsum_spec(m, i, SubsumForm::Rewritten)?, order)?;
    Ok(a.polys() == b.polys())
}

/// Sum of the table row at `z = 1`; equals `p(n)`.
pub fn row_total(row: &ZPolynomial) -> BigInt {
    row.coeffs().iter().fold(BigInt::zero(), |acc, c| acc + c)
}
