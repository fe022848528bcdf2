//! Sparse multivariate polynomials over a [`Field`].

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{mismatch, Error, Result};
use crate::field::{Field, Scalar};
use crate::monomial::{Monomial, MonomialOrder, MAX_VARS};

/// A polynomial in canonical form: no zero coefficients, terms strictly
/// descending under `order`. Structural equality is mathematical equality.
#[derive(Clone)]
pub struct Polynomial {
    field: Field,
    nvars: usize,
    order: MonomialOrder,
    terms: Vec<(Monomial, Scalar)>,
}

impl Polynomial {
    pub fn zero(field: Field, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        Polynomial { field, nvars, order: MonomialOrder::DegRevLex, terms: Vec::new() }
    }

    pub fn constant(field: Field, nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(field, nvars);
        if !field.is_zero(&c) {
            p.terms.push((Monomial::one(nvars), c));
        }
        p
    }

    pub fn from_i64(field: Field, nvars: usize, c: i64) -> Self {
        Self::constant(field, nvars, field.from_i64(c))
    }

    pub fn one(field: Field, nvars: usize) -> Self {
        Self::from_i64(field, nvars, 1)
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(field, nvars);
        p.terms.push((Monomial::var(nvars, i), field.one()));
        p
    }

    pub fn monomial(field: Field, m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(field, m.nvars());
        if !field.is_zero(&c) {
            p.terms.push((m, c));
        }
        p
    }

    /// Canonicalize an arbitrary list of terms (duplicates are summed).
    pub fn from_terms(field: Field, nvars: usize, mut terms: Vec<(Monomial, Scalar)>) -> Self {
        let order = MonomialOrder::DegRevLex;
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Scalar)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = field.add(lc, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !field.is_zero(c));
        Polynomial { field, nvars, order, terms: out }
    }

    /// Build from already sorted, zero-free terms under `order`.
    pub(crate) fn from_sorted(field: Field, nvars: usize, order: MonomialOrder, terms: Vec<(Monomial, Scalar)>) -> Self {
        Polynomial { field, nvars, order, terms }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Scalar)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Degree in variable `i` (0 for the zero polynomial).
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(i)).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_homogeneous_weighted(&[1; MAX_VARS][..self.nvars])
    }

    pub fn is_homogeneous_weighted(&self, weights: &[u32]) -> bool {
        let mut it = self.terms.iter().map(|(m, _)| {
            m.exponents().iter().zip(weights).map(|(&e, &w)| e as u32 * w).sum::<u32>()
        });
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Variables occurring in some term, as a bitmask.
    pub fn support_mask(&self) -> u32 {
        self.terms.iter().fold(0, |acc, (m, _)| acc | m.support_mask())
    }

    /// The maximal term under `ord`.
    pub fn leading_term(&self, ord: MonomialOrder) -> Result<(Monomial, Scalar)> {
        if ord == self.order {
            return self.terms.first().cloned().ok_or(Error::ZeroPolynomial);
        }
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp(&a.0, &b.0))
            .cloned()
            .ok_or(Error::ZeroPolynomial)
    }

    /// Re-sort under another order; the polynomial is unchanged mathematically.
    pub fn with_order(mut self, ord: MonomialOrder) -> Self {
        if ord != self.order {
            self.terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
            self.order = ord;
        }
        self
    }

    fn same_ambient(&self, other: &Polynomial) -> bool {
        self.field == other.field && self.nvars == other.nvars
    }

    fn check_ambient(&self, other: &Polynomial) -> Result<()> {
        if self.same_ambient(other) {
            Ok(())
        } else {
            Err(mismatch("polynomials from different rings"))
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ambient(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ambient(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ambient(other)?;
        Ok(self.product(other))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let other_sorted;
        let other = if other.order == self.order {
            other
        } else {
            other_sorted = other.clone().with_order(self.order);
            &other_sorted
        };
        let f = self.field;
        let ord = self.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let c = if i == self.terms.len() {
                Ordering::Less
            } else if j == other.terms.len() {
                Ordering::Greater
            } else {
                ord.cmp(&self.terms[i].0, &other.terms[j].0)
            };
            match c {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((*m, if negate { f.neg(c) } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let (m, a) = &self.terms[i];
                    let b = &other.terms[j].1;
                    let s = if negate { f.sub(a, b) } else { f.add(a, b) };
                    if !f.is_zero(&s) {
                        out.push((*m, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial { field: f, nvars: self.nvars, order: ord, terms: out }
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        let f = self.field;
        let mut acc: Vec<(Monomial, Scalar)> = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.push((ma.mul(mb), f.mul(ca, cb)));
            }
        }
        let p = Polynomial::from_terms(f, self.nvars, acc);
        p.with_order(self.order)
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let f = self.field;
        if f.is_zero(c) {
            let mut z = Polynomial::zero(f, self.nvars);
            z.order = self.order;
            return z;
        }
        let terms = self.terms.iter().map(|(m, a)| (*m, f.mul(a, c))).collect();
        Polynomial { field: f, nvars: self.nvars, order: self.order, terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        let terms = self.terms.iter().map(|(t, a)| (t.mul(m), a.clone())).collect();
        Polynomial { field: self.field, nvars: self.nvars, order: self.order, terms }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.field, self.nvars).with_order(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.product(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base);
            }
        }
        acc
    }

    /// Divide by the leading coefficient (under the stored order).
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&self.field.inv(c).expect("nonzero")),
        }
    }

    /// Evaluate variable `i` at `images[i]`; the result lives in the images' ambient.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.nvars {
            return Err(mismatch("substitution needs one image per variable"));
        }
        let (field, nvars) = match images.first() {
            Some(p) => (p.field, p.nvars),
            None => {
                return Ok(Polynomial::constant(self.field, 0, self.constant_term()));
            }
        };
        if images.iter().any(|p| p.field != field || p.nvars != nvars) || field != self.field {
            return Err(mismatch("substitution images from different rings"));
        }
        // cache powers per variable
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| alloc::vec![Polynomial::one(field, nvars), p.clone()]).collect();
        let mut acc: Vec<(Monomial, Scalar)> = Vec::new();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(field, nvars, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().product(&images[i]);
                    powers[i].push(next);
                }
                t = t.product(&powers[i][e as usize]);
            }
            acc.extend(t.terms);
        }
        Ok(Polynomial::from_terms(field, nvars, acc))
    }

    /// Move into an ambient with `nvars` variables, sending variable `i` to `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Polynomial {
        debug_assert_eq!(map.len(), self.nvars);
        let terms = self.terms.iter().map(|(m, c)| (m.remap(nvars, map), c.clone())).collect();
        Polynomial::from_terms(self.field, nvars, terms)
    }

    /// Embed into `nvars >= self.nvars` variables, shifting indices by `offset`.
    pub fn shift(&self, nvars: usize, offset: usize) -> Polynomial {
        let map: Vec<usize> = (0..self.nvars).map(|i| i + offset).collect();
        self.remap(nvars, &map)
    }

    /// Render with the given variable names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { p: self, names }
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if !self.same_ambient(other) || self.terms.len() != other.terms.len() {
            return false;
        }
        if self.order == other.order {
            self.terms == other.terms
        } else {
            self.terms == other.clone().with_order(self.order).terms
        }
    }
}

impl Eq for Polynomial {}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("ambient mismatch")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("ambient mismatch")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("ambient mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&self.field.from_i64(-1))
    }
}

pub struct PolyDisplay<'a> {
    p: &'a Polynomial,
    names: &'a [String],
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, names: &[String]) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        match names.get(i) {
            Some(n) => f.write_str(n)?,
            None => write!(f, "x{i}")?,
        }
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        if p.terms.is_empty() {
            return f.write_str("0");
        }
        let field = p.field;
        for (k, (m, c)) in p.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { field.neg(c) } else { c.clone() };
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !field.is_one(&abs) {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, m, self.names)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> (Polynomial, Polynomial) {
        let q = Field::Rationals;
        (Polynomial::var(q, 2, 0), Polynomial::var(q, 2, 1))
    }

    #[test]
    fn cancellation() {
        let (x, y) = xy();
        let s = &(&x + &y) + &(&x - &y);
        assert_eq!(s, x.scale(&Field::Rationals.from_i64(2)));
    }

    #[test]
    fn difference_of_squares() {
        let (x, _) = xy();
        let one = Polynomial::one(Field::Rationals, 2);
        let p = &(&x + &one) * &(&x - &one);
        assert_eq!(p, &x.pow(2) - &one);
    }

    #[test]
    fn frobenius_over_f2() {
        let f2 = Field::Prime(2);
        let x = Polynomial::var(f2, 1, 0);
        let one = Polynomial::one(f2, 1);
        let s = &x + &one;
        // (x+1)^2 = x^2 + 2x + 1 and 2 = 0
        let expanded = &(&x * &x) + &(&(&x * &one).scale(&f2.from_i64(2)) + &one);
        assert_eq!(s.pow(2), expanded);
        assert_eq!(s.pow(2), &x.pow(2) + &one);
    }

    #[test]
    fn leading_terms() {
        let (x, y) = xy();
        let p = &(&x.pow(2) * &y) + &(&x * &y.pow(2));
        let lt = p.leading_term(MonomialOrder::Lex).unwrap();
        assert_eq!(lt.0, Monomial::from_exponents(&[2, 1]).unwrap());
        let lt = p.leading_term(MonomialOrder::DegRevLex).unwrap();
        assert_eq!(lt.0, Monomial::from_exponents(&[2, 1]).unwrap());
        let five = Polynomial::from_i64(Field::Rationals, 2, 5);
        let (m, c) = five.leading_term(MonomialOrder::Lex).unwrap();
        assert!(m.is_one());
        assert_eq!(c, Field::Rationals.from_i64(5));
        assert_eq!(Polynomial::zero(Field::Rationals, 2).leading_term(MonomialOrder::Lex), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Polynomial::var(Field::Rationals, 2, 0);
        let b = Polynomial::var(Field::Rationals, 3, 0);
        assert!(matches!(a.checked_add(&b), Err(Error::AmbientMismatch(_))));
        let c = Polynomial::var(Field::Prime(5), 2, 0);
        assert!(a.checked_mul(&c).is_err());
    }

    #[test]
    fn substitution() {
        let (x, y) = xy();
        // t -> x^2 from Q[t]
        let t = Polynomial::var(Field::Rationals, 1, 0);
        let p = &t.pow(3) - &t;
        let img = p.substitute(&[x.pow(2)]).unwrap();
        assert_eq!(img, &x.pow(6) - &x.pow(2));
        let q = &x * &y;
        assert_eq!(q.substitute(&[y.clone(), x.clone()]).unwrap(), q);
    }

    #[test]
    fn orders_do_not_change_equality() {
        let (x, y) = xy();
        let p = &(&x.pow(2) + &y.pow(3)) + &x;
        let lex = p.clone().with_order(MonomialOrder::Lex);
        assert_eq!(p, lex);
        assert_eq!(lex.terms()[0].0, Monomial::from_exponents(&[2, 0]).unwrap());
    }
}
