//! Coefficient stabilization for two-variable partition products.
//!
//! A [`ProductSpec`] describes `prod_j (1 + sign z^b(j) q^c(j))^(-a(j))`;
//! [`expand_product`] turns it into the polynomials `F_n(z) = [q^n]`, and the
//! verifiers in [`stabilization`], [`subsums`], [`laurent`] and
//! [`overpartitions`] check the shift identities between them. Each
//! expansion has a brute-force counterpart in [`enumerate`].

pub mod bench;
pub mod enumerate;
pub mod error;
pub mod expr;
pub mod laurent;
pub mod output;
pub mod overpartitions;
pub mod poly;
pub mod random;
pub mod report;
pub mod series;
pub mod spec;
pub mod stabilization;
pub mod subsums;

pub use enumerate::{coefficient_by_enumeration, partition_count, PartitionConstraint};
pub use error::{Error, Result};
pub use expr::Expr;
pub use poly::{LaurentPolynomial, Poly, ZPolynomial};
pub use report::{Certification, StabilizationReport};
pub use series::{Factor, Sign, TruncatedSeries};
pub use spec::{
    expand_laurent_product, expand_product, expand_product_cauchy, presets, FactorRule, LaurentSequence,
    PolynomialSequence, ProductSpec,
};
pub use stabilization::{
    check_hypotheses, fast_tail_coefficient, limiting_sequence, HypothesisCheck, HypothesisKind, LimitSequence,
};
