//! Symbolic product specifications and their expansion.
//!
//! A [`ProductSpec`] is a list of [`FactorRule`]s; rule `r` contributes the
//! factors `(1 + sign z^b(j) q^c(j))^(-a(j))` for `j` in its index range.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{scan_at_most, Expr};
use crate::poly::{LaurentPolynomial, Poly, ZPolynomial};
use crate::series::{expand_factor, series_mul_truncated, Factor, Sign, TruncatedSeries};

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRule {
    pub a: Expr,
    pub b: Expr,
    pub c: Expr,
    pub sign: Sign,
    #[serde(rename = "jmin", default = "one")]
    pub j_min: i64,
    #[serde(rename = "jmax", default)]
    pub j_max: Option<i64>,
}

impl FactorRule {
    /// Parses the three expressions; panics on malformed input, so only
    /// meant for presets and tests.
    pub fn parse(a: &str, b: &str, c: &str, sign: Sign, j_min: i64, j_max: Option<i64>) -> Self {
        let p = |s: &str| Expr::parse(s).unwrap_or_else(|e| panic!("bad preset expression: {e}"));
        Self { a: p(a), b: p(b), c: p(c), sign, j_min, j_max }
    }

    /// `(1 - z^b q^c)^(-a)` for `j >= 1`.
    pub fn denominator(a: &str, b: &str, c: &str) -> Self {
        Self::parse(a, b, c, Sign::Minus, 1, None)
    }

    /// A single factor `(1 + sign z^b q^c)^(-a)`.
    pub fn single(a: i64, b: i64, c: i64, sign: Sign) -> Self {
        Self { a: a.into(), b: b.into(), c: c.into(), sign, j_min: 1, j_max: Some(1) }
    }

    pub fn with_range(mut self, j_min: i64, j_max: Option<i64>) -> Self {
        self.j_min = j_min;
        self.j_max = j_max;
        self
    }
}

/// One factor of a rule evaluated at a specific index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RawFactor {
    pub rule: usize,
    pub j: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub sign: Sign,
}

impl RawFactor {
    pub fn factor(&self) -> Factor {
        Factor::new(self.sign, self.b, self.c, -self.a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rules: Vec<FactorRule>,
    pub laurent: bool,
}

impl ProductSpec {
    pub fn new(rules: Vec<FactorRule>, laurent: bool) -> Self {
        Self { name: None, rules, laurent }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Builds a preset by name. Parameterized presets take the form
    /// `subsums(m,i)`, `csw_original(m,i)`, `single_family(m,b)`.
    pub fn preset(name: &str) -> Result<Self> {
        let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        let (base, args) = match compact.split_once('(') {
            Some((base, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| Error::UnknownPreset(name.into()))?;
                let args = inner
                    .split(',')
                    .map(|s| s.parse::<i64>().map_err(|_| Error::UnknownPreset(name.into())))
                    .collect::<Result<Vec<_>>>()?;
                (base, args)
            }
            None => (compact.as_str(), Vec::new()),
        };
        let pair = |args: &[i64]| match args {
            [x, y] => Ok((*x, *y)),
            _ => Err(Error::InvalidParameters(format!("preset `{base}` takes two integer parameters"))),
        };
        let spec = match (base, args.is_empty()) {
            ("partitions", true) => presets::partitions(),
            ("no_ones", true) => presets::no_ones(),
            ("plane_partitions", true) => presets::plane_partitions(),
            ("crank", true) => presets::crank(),
            ("dt", true) => presets::donaldson_thomas(),
            ("plane_overpartitions", true) => crate::overpartitions::plane_overpartition_spec(),
            ("subsums", false) => {
                let (m, i) = pair(&args)?;
                crate::subsums::subsum_spec(m, i, crate::subsums::SubsumForm::Rewritten)?
            }
            ("csw_original", false) => {
                let (m, i) = pair(&args)?;
                crate::subsums::subsum_spec(m, i, crate::subsums::SubsumForm::Csw)?
            }
            ("single_family", false) => {
                let (m, b) = pair(&args)?;
                crate::subsums::single_family_spec(m, b)?
            }
            _ => return Err(Error::UnknownPreset(name.into())),
        };
        Ok(spec)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SpecJson = serde_json::from_str(text)?;
        match raw {
            SpecJson::Preset { preset, m, i, b } => {
                let name = match (m, i, b) {
                    (None, None, None) => preset,
                    (Some(m), Some(i), None) => format!("{preset}({m},{i})"),
                    (Some(m), None, Some(b)) => format!("{preset}({m},{b})"),
                    _ => return Err(Error::InvalidParameters("preset parameters must be m,i or m,b".into())),
                };
                Self::preset(&name)
            }
            SpecJson::Rules { rules, laurent, name } => {
                let spec = ProductSpec { name, rules, laurent };
                spec.validate()?;
                Ok(spec)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    /// Static checks that do not need instantiation.
    pub fn validate(&self) -> Result<()> {
        for (idx, r) in self.rules.iter().enumerate() {
            if r.j_min < 1 {
                return Err(Error::InvalidRule { rule: idx, reason: format!("jmin = {} must be positive", r.j_min) });
            }
            if let Some(hi) = r.j_max {
                if hi < r.j_min {
                    return Err(Error::InvalidRule {
                        rule: idx,
                        reason: format!("jmax = {hi} is below jmin = {}", r.j_min),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| "custom".into())
    }
}

#[derive(Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum SpecJson {
    Preset {
        preset: String,
        m: Option<i64>,
        i: Option<i64>,
        b: Option<i64>,
    },
    Rules {
        rules: Vec<FactorRule>,
        #[serde(default)]
        laurent: bool,
        #[serde(default)]
        name: Option<String>,
    },
}

/// Every `(rule, j)` factor with `c(j) <= order`, in rule then index order.
/// Factors with `a(j) = 0` are kept; they are trivial but still indexed.
pub fn instantiate_raw(spec: &ProductSpec, order: usize) -> Result<Vec<RawFactor>> {
    spec.validate()?;
    let bound = i64::try_from(order).map_err(|_| Error::InvalidParameters("order too large".into()))?;
    let mut out = Vec::new();
    for (idx, rule) in spec.rules.iter().enumerate() {
        for (j, c) in scan_at_most(idx, &rule.c, rule.j_min, rule.j_max, bound)? {
            if c < 1 {
                return Err(Error::NonPositiveQExponent { rule: idx, j, value: c });
            }
            let b = rule.b.eval(j);
            if b < 0 && !spec.laurent {
                return Err(Error::NegativeZExponent(b));
            }
            out.push(RawFactor { rule: idx, j, a: rule.a.eval(j), b, c, sign: rule.sign });
        }
    }
    Ok(out)
}

/// Concrete factors with `qExp <= order`. Factors sharing `(sign, zExp,
/// qExp)` are merged by adding exponents; zero exponents are dropped. Output
/// is ordered by `(qExp, zExp, sign)`.
pub fn instantiate_factors(spec: &ProductSpec, order: usize) -> Result<Vec<Factor>> {
    Ok(merge_factors(&instantiate_raw(spec, order)?))
}

pub(crate) fn merge_factors(raw: &[RawFactor]) -> Vec<Factor> {
    let mut merged: BTreeMap<(i64, i64, Sign), i64> = BTreeMap::new();
    for f in raw {
        *merged.entry((f.c, f.b, f.sign)).or_default() -= f.a;
    }
    merged.into_iter().filter(|&(_, e)| e != 0).map(|((c, b, sign), e)| Factor::new(sign, b, c, e)).collect()
}

/// The polynomials `F_0 .. F_N` of a product, or any other indexed family
/// of polynomials built from one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialSequence<P> {
    spec: Option<ProductSpec>,
    polys: Vec<P>,
}

impl<P: Poly> PolynomialSequence<P> {
    pub fn new(spec: Option<ProductSpec>, polys: Vec<P>) -> Self {
        assert!(!polys.is_empty(), "a sequence holds at least F_0");
        Self { spec, polys }
    }

    pub fn spec(&self) -> Option<&ProductSpec> {
        self.spec.as_ref()
    }

    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, n: usize) -> &P {
        &self.polys[n]
    }

    pub fn polys(&self) -> &[P] {
        &self.polys
    }

    /// `[z^k] F_n`.
    pub fn coeff(&self, n: usize, k: i64) -> &BigInt {
        self.polys[n].coeff_at(k)
    }

    /// Overwrites one member; used to build deliberately broken sequences.
    pub fn replace(&mut self, n: usize, p: P) {
        self.polys[n] = p;
    }

    /// Keeps `F_0 ..= F_order`.
    pub fn truncated(&self, order: usize) -> Self {
        Self { spec: self.spec.clone(), polys: self.polys[..=order.min(self.order())].to_vec() }
    }
}

pub type LaurentSequence = PolynomialSequence<LaurentPolynomial>;

fn expand_with<P: Poly>(spec: &ProductSpec, order: usize) -> Result<PolynomialSequence<P>> {
    let mut series = TruncatedSeries::<P>::one(order);
    for f in instantiate_factors(spec, order)? {
        series.mul_factor_in_place(&f)?;
    }
    Ok(PolynomialSequence::new(Some(spec.clone()), series.into_terms()))
}

/// `F_n = [q^n]` of the product, for `n <= order`.
pub fn expand_product(spec: &ProductSpec, order: usize) -> Result<PolynomialSequence<ZPolynomial>> {
    if spec.laurent {
        return Err(Error::LaurentSpec);
    }
    expand_with(spec, order)
}

/// Laurent counterpart of [`expand_product`]; accepts any spec.
pub fn expand_laurent_product(spec: &ProductSpec, order: usize) -> Result<LaurentSequence> {
    expand_with(spec, order)
}

/// Same result as the in-place expansion, computed instead as a chain of
/// Cauchy products of individually expanded factors.
pub fn expand_product_cauchy<P: Poly>(spec: &ProductSpec, order: usize) -> Result<PolynomialSequence<P>> {
    let mut acc = TruncatedSeries::<P>::one(order);
    for f in instantiate_factors(spec, order)? {
        acc = series_mul_truncated(&acc, &expand_factor(&f, order)?)?;
    }
    Ok(PolynomialSequence::new(Some(spec.clone()), acc.into_terms()))
}

/// Presets whose factor algebra lives here; the subsum and overpartition
/// families are built in their own modules.
pub mod presets {
    use super::*;

    /// `prod_{j>=1} (1 - z q^j)^-1`: partitions by number of parts.
    pub fn partitions() -> ProductSpec {
        ProductSpec::new(vec![FactorRule::denominator("1", "1", "j")], false).named("partitions")
    }

    /// `prod_{j>=2} (1 - z q^j)^-1`: partitions without ones.
    pub fn no_ones() -> ProductSpec {
        ProductSpec::new(vec![FactorRule::denominator("1", "1", "j").with_range(2, None)], false).named("no_ones")
    }

    /// `prod_{j>=1} (1 - z q^j)^-j`: plane partitions by trace.
    pub fn plane_partitions() -> ProductSpec {
        ProductSpec::new(vec![FactorRule::denominator("j", "1", "j")], false).named("plane_partitions")
    }

    /// `prod (1 - q^k) / ((1 - z q^k)(1 - z^-1 q^k))`: the crank.
    pub fn crank() -> ProductSpec {
        ProductSpec::new(
            vec![
                FactorRule::denominator("1", "1", "j"),
                FactorRule::denominator("1", "-1", "j"),
                FactorRule::denominator("-1", "0", "j"),
            ],
            true,
        )
        .named("crank")
    }

    /// `prod (1 - z q^k)^-k (1 - z^-1 q^k)^-k (1 - q^k)^-2k`.
    pub fn donaldson_thomas() -> ProductSpec {
        ProductSpec::new(
            vec![
                FactorRule::denominator("j", "1", "j"),
                FactorRule::denominator("j", "-1", "j"),
                FactorRule::denominator("2*j", "0", "j"),
            ],
            true,
        )
        .named("dt")
    }
}
