//! Sparse vectors of a free module `P^r` over a polynomial ring `P`.
//!
//! A vector does not remember its term order; callers pass the [`TermOrder`]
//! the terms are sorted by. Polynomials are the rank-one case (component 0).

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::field::{Field, Scalar};
use crate::monomial::{Monomial, MonomialOrder, TermOrder};
use crate::poly::Polynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub comp: u32,
    pub mono: Monomial,
    pub coef: Scalar,
}

/// Terms strictly descending under the order the vector was built with.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModVec {
    pub(crate) terms: Vec<Term>,
}

impl ModVec {
    pub fn zero() -> Self {
        ModVec { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Build from unsorted terms, combining duplicates.
    pub fn from_terms(field: Field, ord: &TermOrder, mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| ord.cmp(b.comp, &b.mono, a.comp, &a.mono));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.comp == t.comp && last.mono == t.mono => {
                    last.coef = field.add(&last.coef, &t.coef);
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !field.is_zero(&t.coef));
        ModVec { terms: out }
    }

    /// `p * e_comp`.
    pub fn from_poly(p: &Polynomial, comp: u32, ord: &TermOrder) -> Self {
        let mut terms: Vec<Term> = p.terms().iter().map(|(m, c)| Term { comp, mono: *m, coef: c.clone() }).collect();
        if p.order() != ord.mono {
            terms.sort_by(|a, b| ord.mono.cmp(&b.mono, &a.mono));
        }
        ModVec { terms }
    }

    /// Dense vector of polynomials → sparse vector.
    pub fn from_dense(entries: &[Polynomial], ord: &TermOrder) -> Self {
        let mut terms = Vec::new();
        for (i, p) in entries.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push(Term { comp: i as u32, mono: *m, coef: c.clone() });
            }
        }
        terms.sort_by(|a, b| ord.cmp(b.comp, &b.mono, a.comp, &a.mono));
        ModVec { terms }
    }

    /// Entry `comp` as a polynomial in canonical order.
    pub fn component(&self, field: Field, nvars: usize, comp: u32) -> Polynomial {
        let terms = self.terms.iter().filter(|t| t.comp == comp).map(|t| (t.mono, t.coef.clone())).collect();
        Polynomial::from_terms(field, nvars, terms)
    }

    pub fn to_dense(&self, field: Field, nvars: usize, rank: usize) -> Vec<Polynomial> {
        let mut buckets: Vec<Vec<(Monomial, Scalar)>> = alloc::vec![Vec::new(); rank];
        for t in &self.terms {
            buckets[t.comp as usize].push((t.mono, t.coef.clone()));
        }
        buckets.into_iter().map(|b| Polynomial::from_terms(field, nvars, b)).collect()
    }

    /// Interpret a rank-one vector as a polynomial.
    pub fn to_poly(&self, field: Field, nvars: usize) -> Polynomial {
        debug_assert!(self.terms.iter().all(|t| t.comp == 0));
        let terms = self.terms.iter().map(|t| (t.mono, t.coef.clone())).collect();
        Polynomial::from_terms(field, nvars, terms)
    }

    /// Rank-one vector with terms already sorted by `mono` → polynomial without re-sorting.
    pub(crate) fn into_poly_sorted(self, field: Field, nvars: usize, mono: MonomialOrder) -> Polynomial {
        let terms = self.terms.into_iter().map(|t| (t.mono, t.coef)).collect();
        Polynomial::from_sorted(field, nvars, mono, terms)
    }

    pub fn resort(&mut self, ord: &TermOrder) {
        self.terms.sort_by(|a, b| ord.cmp(b.comp, &b.mono, a.comp, &a.mono));
    }

    /// Move component `c` to `map(c)`; re-sorts.
    pub fn map_components(&self, ord: &TermOrder, map: impl Fn(u32) -> u32) -> Self {
        let mut v = ModVec { terms: self.terms.iter().map(|t| Term { comp: map(t.comp), mono: t.mono, coef: t.coef.clone() }).collect() };
        v.resort(ord);
        v
    }

    pub fn scale(&self, field: Field, c: &Scalar) -> Self {
        if field.is_zero(c) {
            return ModVec::zero();
        }
        ModVec { terms: self.terms.iter().map(|t| Term { comp: t.comp, mono: t.mono, coef: field.mul(&t.coef, c) }).collect() }
    }

    pub fn mul_term(&self, field: Field, m: &Monomial, c: &Scalar) -> Self {
        if field.is_zero(c) {
            return ModVec::zero();
        }
        ModVec {
            terms: self.terms.iter().map(|t| Term { comp: t.comp, mono: t.mono.mul(m), coef: field.mul(&t.coef, c) }).collect(),
        }
    }

    /// Multiply every entry by a polynomial.
    pub fn mul_poly(&self, field: Field, ord: &TermOrder, p: &Polynomial) -> Self {
        let mut acc = ModVec::zero();
        for (m, c) in p.terms() {
            acc = acc.add(field, ord, &self.mul_term(field, m, c));
        }
        acc
    }

    pub fn monic(&self, field: Field) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some(t) => self.scale(field, &field.inv(&t.coef).expect("nonzero")),
        }
    }

    pub fn add(&self, field: Field, ord: &TermOrder, other: &ModVec) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        merge_into(&mut out, field, ord, &self.terms, &other.terms, None);
        ModVec { terms: out }
    }

    pub fn sub(&self, field: Field, ord: &TermOrder, other: &ModVec) -> Self {
        self.add(field, ord, &other.scale(field, &field.from_i64(-1)))
    }

    /// `self[from..] - c * m * other`, keeping `self[..from]` untouched.
    pub(crate) fn sub_scaled_tail(&mut self, field: Field, ord: &TermOrder, from: usize, other: &ModVec, m: &Monomial, c: &Scalar) {
        let neg = field.neg(c);
        let mut out = Vec::with_capacity(self.terms.len() - from + other.terms.len());
        merge_into(&mut out, field, ord, &self.terms[from..], &other.terms, Some((m, &neg)));
        self.terms.truncate(from);
        self.terms.extend(out);
    }
}

/// Merge `a + scale * b` into `out`; `scale` multiplies `b` by a term on the fly.
fn merge_into(out: &mut Vec<Term>, field: Field, ord: &TermOrder, a: &[Term], b: &[Term], scale: Option<(&Monomial, &Scalar)>) {
    let bterm = |t: &Term| -> Term {
        match scale {
            None => t.clone(),
            Some((m, c)) => Term { comp: t.comp, mono: t.mono.mul(m), coef: field.mul(&t.coef, c) },
        }
    };
    let (mut i, mut j) = (0, 0);
    let mut pending_b: Option<Term> = None;
    loop {
        if pending_b.is_none() && j < b.len() {
            pending_b = Some(bterm(&b[j]));
            j += 1;
        }
        match (i < a.len(), pending_b.as_ref()) {
            (false, None) => break,
            (true, None) => {
                out.extend_from_slice(&a[i..]);
                break;
            }
            (false, Some(_)) => {
                out.push(pending_b.take().unwrap());
            }
            (true, Some(tb)) => {
                let ta = &a[i];
                match ord.cmp(ta.comp, &ta.mono, tb.comp, &tb.mono) {
                    Ordering::Greater => {
                        out.push(ta.clone());
                        i += 1;
                    }
                    Ordering::Less => out.push(pending_b.take().unwrap()),
                    Ordering::Equal => {
                        let s = field.add(&ta.coef, &tb.coef);
                        if !field.is_zero(&s) {
                            out.push(Term { comp: ta.comp, mono: ta.mono, coef: s });
                        }
                        i += 1;
                        pending_b = None;
                    }
                }
            }
        }
    }
}
