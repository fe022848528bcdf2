#![allow(dead_code)]

use std::sync::Arc;

use amalgrade_core::{Field, IdealHandle, Kernel, Monomial, Polynomial, Ring, RingPresentation};
use proptest::prelude::*;

pub fn ring_over(field: Field, names: &[&str], rels: &[&str]) -> Ring {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let k = Arc::new(Kernel::default());
    let base = RingPresentation::polynomial(field, names.clone(), k.clone()).unwrap();
    let rels = rels.iter().map(|r| base.parse(r).unwrap()).collect();
    RingPresentation::quotient(field, names, rels, k).unwrap()
}

pub fn ring(names: &[&str], rels: &[&str]) -> Ring {
    ring_over(Field::Rationals, names, rels)
}

pub fn ideal(r: &Ring, g: &[&str]) -> IdealHandle {
    r.ideal(g.iter().map(|s| r.parse(s).unwrap()).collect()).unwrap()
}

/// Exponent vectors with entries below `max_exp`.
pub fn exponents(nvars: usize, max_exp: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..max_exp, nvars)
}

pub fn monomial(nvars: usize, max_exp: u32) -> impl Strategy<Value = Monomial> {
    exponents(nvars, max_exp).prop_map(|e| Monomial::from_exponents(&e).unwrap())
}

/// Sparse polynomial with small integer coefficients.
pub fn poly(field: Field, nvars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((exponents(nvars, max_exp), -5i64..=5), 0..=max_terms).prop_map(move |terms| {
        let terms = terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e).unwrap(), field.from_i64(c))).collect();
        Polynomial::from_terms(field, nvars, terms)
    })
}

/// Monomial with coefficient one, of total degree between 1 and `max_deg`.
pub fn monomial_poly(field: Field, nvars: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    exponents(nvars, max_deg + 1)
        .prop_filter("degree in range", move |e| {
            let d: u32 = e.iter().sum();
            (1..=max_deg).contains(&d)
        })
        .prop_map(move |e| Polynomial::monomial(field, Monomial::from_exponents(&e).unwrap(), field.one()))
}

/// Generators of a monomial ideal.
pub fn monomial_gens(field: Field, nvars: usize, max_deg: u32, max_gens: usize) -> impl Strategy<Value = Vec<Polynomial>> {
    prop::collection::vec(monomial_poly(field, nvars, max_deg), 1..=max_gens)
}

pub fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rationals), Just(Field::Prime(32003)), Just(Field::Prime(7))]
}
