//! JSON and CSV emitters. Every big integer is written as a decimal string
//! and every list is in ascending index order.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use crate::poly::{LaurentPolynomial, ZPolynomial};
use crate::spec::{LaurentSequence, PolynomialSequence};
use crate::stabilization::LimitSequence;
use crate::subsums::LambdaTable;

#[derive(Serialize)]
struct Row {
    n: usize,
    coeffs: Vec<String>,
}

#[derive(Serialize)]
struct LaurentTerm {
    zexp: i64,
    value: String,
}

#[derive(Serialize)]
struct LaurentRow {
    n: usize,
    coeffs: Vec<LaurentTerm>,
}

#[derive(Serialize)]
struct SequenceDoc<R> {
    spec: String,
    order: usize,
    polys: Vec<R>,
}

fn dense(p: &ZPolynomial) -> Vec<String> {
    p.coeffs().iter().map(BigInt::to_string).collect()
}

fn laurent_terms(p: &LaurentPolynomial) -> Vec<LaurentTerm> {
    let min = p.min_exp().unwrap_or(0);
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(i, c)| LaurentTerm { zexp: min + i as i64, value: c.to_string() })
        .collect()
}

fn label<P: crate::poly::Poly>(seq: &PolynomialSequence<P>) -> String {
    seq.spec().map_or_else(|| "custom".into(), |s| s.label())
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("document serializes")
}

/// `{"spec", "order", "polys": [{"n", "coeffs": [c_0, c_1, ...]}]}`.
pub fn sequence_json(seq: &PolynomialSequence<ZPolynomial>) -> String {
    let polys = seq.polys().iter().enumerate().map(|(n, p)| Row { n, coeffs: dense(p) }).collect();
    pretty(&SequenceDoc { spec: label(seq), order: seq.order(), polys })
}

/// `{"spec", "order", "polys": [{"n", "coeffs": [{"zexp", "value"}]}]}`,
/// zero coefficients omitted.
pub fn laurent_json(seq: &LaurentSequence) -> String {
    let polys = seq.polys().iter().enumerate().map(|(n, p)| LaurentRow { n, coeffs: laurent_terms(p) }).collect();
    pretty(&SequenceDoc { spec: label(seq), order: seq.order(), polys })
}

/// `n,k,value` over the dense coefficient range of each row.
pub fn sequence_csv(seq: &PolynomialSequence<ZPolynomial>) -> String {
    rows_csv(seq.polys())
}

pub fn laurent_csv(seq: &LaurentSequence) -> String {
    let mut out = String::from("n,k,value\n");
    for (n, p) in seq.polys().iter().enumerate() {
        for t in laurent_terms(p) {
            writeln!(out, "{n},{},{}", t.zexp, t.value).unwrap();
        }
    }
    out
}

pub fn lambda_csv(table: &LambdaTable) -> String {
    rows_csv(table.rows())
}

fn rows_csv(rows: &[ZPolynomial]) -> String {
    let mut out = String::from("n,k,value\n");
    for (n, p) in rows.iter().enumerate() {
        for (k, c) in p.coeffs().iter().enumerate() {
            writeln!(out, "{n},{k},{c}").unwrap();
        }
    }
    out
}

#[derive(Serialize)]
struct LimitDoc {
    spec: String,
    kmax: usize,
    coeffs: Vec<String>,
}

pub fn limit_json(spec_label: &str, limit: &LimitSequence) -> String {
    let coeffs = limit.coeffs().iter().map(BigInt::to_string).collect();
    pretty(&LimitDoc { spec: spec_label.into(), kmax: limit.order(), coeffs })
}

pub fn limit_csv(limit: &LimitSequence) -> String {
    let mut out = String::from("k,value\n");
    for (k, c) in limit.coeffs().iter().enumerate() {
        writeln!(out, "{k},{c}").unwrap();
    }
    out
}
