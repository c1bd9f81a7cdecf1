//! Timing the fast tail path against bivariate expansions that reach the
//! same coefficient.
//!
//! Two comparators:
//! * the windowed expansion: only monomials `z^k q^t` with deficit
//!   `t - k <= ell` are kept, and factors are applied row by row in `k` so
//!   memory stays at `O(#factors * ell)`. This is the cheapest bivariate
//!   route we know and runs at the requested `n`;
//! * the full expansion of `F_0 ..= F_N`, only feasible for small `N`.
//!   Its cost grows with `N`, so its time at `N <= n` bounds the time at
//!   `n` from below.

use std::collections::VecDeque;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::enumerate::{partition_count, PartitionConstraint};
use crate::error::{Error, Result};
use crate::report::decimal;
use crate::series::Sign;
use crate::spec::{expand_product, instantiate_raw, ProductSpec};
use crate::stabilization::{check_hypotheses, fast_tail_coefficient, HypothesisKind};

/// `[z^(n-ell)] F_n` by a windowed bivariate expansion. Needs a product of
/// denominators `(1 - z^b q^c)^-a` with `0 <= b <= c`.
pub fn windowed_tail_coefficient(spec: &ProductSpec, n: u64, ell: u64) -> Result<BigInt> {
    if ell > n {
        return Err(Error::InvalidParameters(format!("ell = {ell} exceeds n = {n}")));
    }
    let (target, width) = ((n - ell) as usize, ell as usize);
    // unit factors (b, d) with d = c - b
    let mut units: Vec<(usize, usize)> = Vec::new();
    for f in instantiate_raw(spec, n as usize)? {
        if f.a == 0 {
            continue;
        }
        if f.sign == Sign::Plus || f.a < 0 || f.b < 0 || f.b > f.c {
            return Err(Error::InvalidParameters(format!(
                "windowed expansion needs factors (1 - z^b q^c)^(-a) with a >= 0 and 0 <= b <= c (rule {}, j = {})",
                f.rule, f.j
            )));
        }
        let d = (f.c - f.b) as usize;
        if d <= width && f.b as usize <= target {
            units.extend(std::iter::repeat_n((f.b as usize, d), f.a as usize));
        }
    }
    units.sort_unstable();

    let zero_row = vec![BigInt::zero(); width + 1];
    let mut first_row = zero_row.clone();
    first_row[0] = BigInt::one();
    // history[i]: rows of the i-th partial product at k - b_i ..= k - 1,
    // followed by the row at k once computed
    let mut history: Vec<VecDeque<Vec<BigInt>>> =
        units.iter().map(|&(b, _)| (0..b.max(1)).map(|_| zero_row.clone()).collect()).collect();

    let mut last = zero_row.clone();
    for k in 0..=target {
        let base = if k == 0 { &first_row } else { &zero_row };
        for i in 0..units.len() {
            let (b, d) = units[i];
            let (done, rest) = history.split_at_mut(i);
            let prev: &Vec<BigInt> = if i == 0 { base } else { done[i - 1].back().expect("row present") };
            let slot = &mut rest[0];
            let mut row = slot.pop_front().expect("row present");
            if b == 0 {
                // row = prev / (1 - y^d), ascending in the deficit
                for (r, p) in row.iter_mut().zip(prev) {
                    r.clone_from(p);
                }
                for e in d..=width {
                    let (lo, hi) = row.split_at_mut(e);
                    hi[0] += &lo[e - d];
                }
            } else if d == 0 {
                for (r, p) in row.iter_mut().zip(prev) {
                    *r += p;
                }
            } else {
                // row holds the partial product at k - b; overwrite from the top
                for e in (0..=width).rev() {
                    if e >= d {
                        let (lo, hi) = row.split_at_mut(e);
                        hi[0].clone_from(&prev[e]);
                        hi[0] += &lo[e - d];
                    } else {
                        row[e].clone_from(&prev[e]);
                    }
                }
            }
            slot.push_back(row);
        }
        if k == target {
            last = match history.last() {
                Some(h) => h.back().expect("row present").clone(),
                None => base.clone(),
            };
        }
    }
    Ok(last[width].clone())
}

#[derive(Clone, Debug, Serialize)]
pub struct Timed {
    pub n: u64,
    #[serde(serialize_with = "decimal")]
    pub value: BigInt,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub spec: String,
    pub n: u64,
    pub ell: u64,
    pub m: i64,
    pub fast: Timed,
    /// Windowed bivariate expansion at the same `n`.
    pub windowed: Option<Timed>,
    /// Full expansion at a smaller `n`, with the fast value there.
    pub full: Option<Timed>,
    #[serde(serialize_with = "option_decimal")]
    pub fast_at_full_n: Option<BigInt>,
    /// Independent count, for presets that have one.
    #[serde(serialize_with = "option_decimal")]
    pub oracle: Option<BigInt>,
    pub agree: bool,
    /// Windowed time over fast time.
    pub speedup: Option<f64>,
    /// Full-expansion time at the smaller `n` over fast time at `n`.
    pub full_speedup_lower_bound: Option<f64>,
}

fn option_decimal<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bench report serializes")
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BenchOptions {
    pub windowed: bool,
    /// Run the full expansion at this `n` (capped at the requested `n`).
    pub full_n: Option<u64>,
    /// Timed fast runs after one warmup; the median is reported.
    pub repeats: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self { windowed: true, full_n: Some(2000), repeats: 5 }
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let v = f()?;
    Ok((v, start.elapsed().as_secs_f64()))
}

pub fn bench_tail(spec: &ProductSpec, n: u64, ell: u64, opts: BenchOptions) -> Result<BenchReport> {
    let hyp = check_hypotheses(spec, HypothesisKind::UpperTail, n.max(1) as usize)?;
    let m = hyp.m.filter(|_| hyp.satisfied).ok_or_else(|| {
        Error::HypothesisFailed(hyp.violations.first().map_or_else(|| "no valid m".into(), |v| v.reason.clone()))
    })?;

    fast_tail_coefficient(spec, n, ell)?;
    let mut runs = Vec::with_capacity(opts.repeats.max(1));
    let mut value = BigInt::zero();
    for _ in 0..opts.repeats.max(1) {
        let (v, s) = timed(|| fast_tail_coefficient(spec, n, ell))?;
        value = v;
        runs.push(s);
    }
    runs.sort_by(f64::total_cmp);
    let fast = Timed { n, value, seconds: runs[runs.len() / 2] };

    let mut agree = true;
    let windowed = if opts.windowed {
        let (v, s) = timed(|| windowed_tail_coefficient(spec, n, ell))?;
        agree &= v == fast.value;
        Some(Timed { n, value: v, seconds: s })
    } else {
        None
    };

    let (mut full, mut fast_at_full_n) = (None, None);
    if let Some(full_n) = opts.full_n.map(|f| f.min(n)) {
        if ell > full_n / m as u64 {
            return Err(Error::OutsideStableRange { n: full_n, ell, m: m as u64 });
        }
        let (seq, s) = timed(|| expand_product(spec, full_n as usize))?;
        let v = seq.coeff(full_n as usize, (full_n - ell) as i64).clone();
        let at = fast_tail_coefficient(spec, full_n, ell)?;
        agree &= v == at;
        full = Some(Timed { n: full_n, value: v, seconds: s });
        fast_at_full_n = Some(at);
    }

    let oracle = match spec.name.as_deref() {
        Some("partitions") => Some(BigInt::from(partition_count(ell, PartitionConstraint::None))),
        _ => None,
    };
    if let Some(o) = &oracle {
        agree &= o == &fast.value;
    }

    let ratio = |t: &Option<Timed>| t.as_ref().map(|t| t.seconds / fast.seconds.max(1e-9));
    Ok(BenchReport {
        spec: spec.label(),
        n,
        ell,
        m,
        speedup: ratio(&windowed),
        full_speedup_lower_bound: ratio(&full),
        fast,
        windowed,
        full,
        fast_at_full_n,
        oracle,
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_upper_spec, seeded};
    use crate::spec::presets;

    #[test]
    fn windowed_matches_full_expansion() {
        let mut specs = vec![presets::partitions(), presets::plane_partitions()];
        let mut rng = seeded(11);
        specs.extend((0..4).map(|_| random_upper_spec(&mut rng)));
        for spec in specs {
            let seq = expand_product(&spec, 30).unwrap();
            for n in 0..=30u64 {
                for ell in 0..=n {
                    let w = windowed_tail_coefficient(&spec, n, ell).unwrap();
                    assert_eq!(&w, seq.coeff(n as usize, (n - ell) as i64), "{} n={n} ell={ell}", spec.to_json());
                }
            }
        }
    }

    #[test]
    fn windowed_rejects_numerators() {
        let spec = crate::overpartitions::plane_overpartition_spec();
        assert!(windowed_tail_coefficient(&spec, 10, 2).is_err());
    }

    #[test]
    fn small_bench_agrees() {
        let opts = BenchOptions { windowed: true, full_n: Some(60), repeats: 1 };
        let r = bench_tail(&presets::partitions(), 200, 10, opts).unwrap();
        assert!(r.agree);
        assert_eq!(r.fast.value, BigInt::from(42));
        assert_eq!(r.oracle, Some(BigInt::from(42)));
        assert_eq!(r.full.as_ref().unwrap().n, 60);
    }
}
