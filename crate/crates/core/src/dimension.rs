//! Krull dimension from leading monomials, minimal primes on a decidable
//! fragment, and heights.
//!
//! The prime decider works on ideals of the polynomial cover. It eliminates
//! variables occurring linearly, splits along variable factors and rational
//! roots, and certifies primality only in a few explicit shapes. Anything else
//! is reported as `NotDecidable`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::grade::{GradeValue, HeightValue};
use crate::groebner::{ideal_basis, Kernel};
use crate::module::FPModule;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;
use crate::ring::{IdealHandle, Ring};

/// Krull dimension; the zero ring has dimension `-∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dimension {
    MinusInfinity,
    Finite(u32),
}

impl Dimension {
    pub fn finite(self) -> Option<u32> {
        match self {
            Dimension::Finite(d) => Some(d),
            Dimension::MinusInfinity => None,
        }
    }
}

impl core::fmt::Display for Dimension {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Dimension::Finite(d) => write!(f, "{d}"),
            Dimension::MinusInfinity => f.write_str("-inf"),
        }
    }
}

/// Keep only masks that contain no other mask.
fn minimal_masks(mut masks: Vec<u32>) -> Vec<u32> {
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks.dedup();
    let mut out: Vec<u32> = Vec::new();
    for m in masks {
        if !out.iter().any(|&o| o & m == o) {
            out.push(m);
        }
    }
    out
}

/// All minimal sets of variables meeting every support. `None` if some support is empty.
pub fn minimal_vertex_covers(supports: &[u32]) -> Option<Vec<u32>> {
    if supports.contains(&0) {
        return None;
    }
    let edges = minimal_masks(supports.to_vec());
    let mut covers = Vec::new();
    fn go(edges: &[u32], chosen: u32, out: &mut Vec<u32>) {
        match edges.iter().find(|&&e| e & chosen == 0) {
            None => out.push(chosen),
            Some(&e) => {
                let mut bits = e;
                while bits != 0 {
                    let v = bits.trailing_zeros();
                    bits &= bits - 1;
                    go(edges, chosen | (1 << v), out);
                }
            }
        }
    }
    go(&edges, 0, &mut covers);
    Some(minimal_masks(covers))
}

/// `dim k[x]/J` from a Groebner basis of `J`: number of variables minus the
/// smallest cover of the leading-monomial supports.
pub fn dimension_of_basis(nvars: usize, gb: &[Polynomial]) -> Dimension {
    let supports: Vec<u32> = gb
        .iter()
        .map(|g| g.leading_term(MonomialOrder::DegRevLex).expect("nonzero").0.support_mask())
        .collect();
    match minimal_vertex_covers(&supports) {
        None => Dimension::MinusInfinity,
        Some(c) => Dimension::Finite(nvars as u32 - c.iter().map(|m| m.count_ones()).min().unwrap_or(0)),
    }
}

pub fn krull_dim(ring: &Ring) -> Dimension {
    dimension_of_basis(ring.nvars(), ring.groebner_basis())
}

/// `dim R/a`.
pub fn dim_quotient(a: &IdealHandle) -> Dimension {
    dimension_of_basis(a.ring().nvars(), a.groebner_basis())
}

const NODE_LIMIT: usize = 4096;

struct Decider<'a> {
    field: Field,
    nvars: usize,
    kernel: &'a Kernel,
    nodes: usize,
}

fn not_decidable(msg: impl Into<String>) -> Error {
    Error::NotDecidable(msg.into())
}

impl Decider<'_> {
    fn basis(&self, gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
        ideal_basis(self.field, self.nvars, MonomialOrder::DegRevLex, gens, self.kernel)
    }

    /// Minimal primes of the ideal with reduced basis `gb`, as generator lists.
    fn min_primes(&mut self, gb: Vec<Polynomial>) -> Result<Vec<Vec<Polynomial>>> {
        self.nodes += 1;
        if self.nodes > NODE_LIMIT {
            return Err(not_decidable("prime search exceeded its node limit"));
        }
        if gb.iter().any(|g| g.is_constant()) {
            return Ok(Vec::new());
        }
        if gb.is_empty() {
            return Ok(alloc::vec![Vec::new()]);
        }
        if gb.iter().all(|g| g.is_monomial()) {
            let supports: Vec<u32> = gb.iter().map(|g| g.support_mask()).collect();
            let covers = minimal_vertex_covers(&supports).expect("proper");
            return Ok(covers.into_iter().map(|c| self.vars_of(c)).collect());
        }
        if let Some((k, i)) = linear_variable(&gb) {
            let g = &gb[k];
            let c = coefficient_of_var(g, i);
            let rest = &g.scale(&self.field.inv(&c).expect("nonzero")) - &Polynomial::var(self.field, self.nvars, i);
            let mut images: Vec<Polynomial> = (0..self.nvars).map(|v| Polynomial::var(self.field, self.nvars, v)).collect();
            images[i] = -&rest;
            let others: Vec<Polynomial> = gb.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, p)| p.substitute(&images)).collect::<Result<_>>()?;
            let sub = self.basis(&others)?;
            let primes = self.min_primes(sub)?;
            return Ok(primes
                .into_iter()
                .map(|mut p| {
                    p.push(g.clone());
                    p
                })
                .collect());
        }
        if let Some(branches) = self.split(&gb)? {
            let mut all = Vec::new();
            for extra in branches {
                let mut gens = gb.clone();
                gens.push(extra);
                let b = self.basis(&gens)?;
                all.extend(self.min_primes(b)?);
            }
            return self.minimalize(all);
        }
        if gb.len() == 1 && self.certified_irreducible(&gb[0])? {
            return Ok(alloc::vec![gb]);
        }
        Err(not_decidable("ideal is outside the decidable fragment"))
    }

    fn vars_of(&self, mask: u32) -> Vec<Polynomial> {
        (0..self.nvars).filter(|v| mask & (1 << v) != 0).map(|v| Polynomial::var(self.field, self.nvars, v)).collect()
    }

    /// Branch ideals whose union of zero sets is the zero set of `gb`:
    /// a variable factor `x^a h` gives `x_v` for each `v` in the support and `h`;
    /// a univariate element with a root `r` gives `x - r` and the cofactor.
    fn split(&self, gb: &[Polynomial]) -> Result<Option<Vec<Polynomial>>> {
        for g in gb {
            let common = g.terms().iter().map(|(m, _)| *m).reduce(|a, b| gcd_monomial(&a, &b)).expect("nonzero");
            if common.is_one() {
                continue;
            }
            let mut branches: Vec<Polynomial> = common.support().map(|v| Polynomial::var(self.field, self.nvars, v)).collect();
            let h = divide_by_monomial(g, &common);
            if !h.is_constant() {
                branches.push(h);
            }
            return Ok(Some(branches));
        }
        for g in gb {
            let mask = g.support_mask();
            if mask.count_ones() != 1 {
                continue;
            }
            let v = mask.trailing_zeros() as usize;
            let coeffs = univariate_coefficients(g, v);
            if let Some(r) = find_root(self.field, &coeffs)? {
                let x_minus_r = &Polynomial::var(self.field, self.nvars, v) - &Polynomial::constant(self.field, self.nvars, r.clone());
                let q = synthetic_division(self.field, &coeffs, &r);
                let cof = from_univariate(self.field, self.nvars, v, &q);
                let mut branches = alloc::vec![x_minus_r];
                if !cof.is_constant() {
                    branches.push(cof);
                }
                return Ok(Some(branches));
            }
        }
        Ok(None)
    }

    /// Primality certificates for a principal ideal `(p)` of a polynomial ring:
    /// degree one in some variable with coprime coefficients, or univariate of
    /// degree at most three without roots.
    fn certified_irreducible(&self, p: &Polynomial) -> Result<bool> {
        let mask = p.support_mask();
        if mask.count_ones() == 1 {
            let v = mask.trailing_zeros() as usize;
            let coeffs = univariate_coefficients(p, v);
            let d = coeffs.len() - 1;
            return Ok(d == 1 || (d <= 3 && find_root(self.field, &coeffs)?.is_none()));
        }
        for v in 0..self.nvars {
            if p.degree_in(v) != 1 {
                continue;
            }
            let (a, b) = split_linear(p, v);
            if coprime(self, &a, &b)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Drop duplicates and non-minimal members.
    fn minimalize(&self, primes: Vec<Vec<Polynomial>>) -> Result<Vec<Vec<Polynomial>>> {
        let mut bases: Vec<Vec<Polynomial>> = Vec::new();
        for p in primes {
            let b = self.basis(&p)?;
            if !bases.contains(&b) {
                bases.push(b);
            }
        }
        let mut keep = Vec::new();
        for (i, p) in bases.iter().enumerate() {
            let mut minimal = true;
            for (j, q) in bases.iter().enumerate() {
                if i != j && self.contains(p, q)? {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                keep.push(p.clone());
            }
        }
        Ok(keep)
    }

    /// `q ⊆ p` for reduced bases.
    fn contains(&self, p: &[Polynomial], q: &[Polynomial]) -> Result<bool> {
        Ok(q.iter().all(|g| crate::groebner::normal_form(g, p, MonomialOrder::DegRevLex, self.kernel).is_zero()))
    }
}

fn coprime(d: &Decider<'_>, a: &Polynomial, b: &Polynomial) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        let other = if a.is_zero() { b } else { a };
        return Ok(other.is_constant() && !other.is_zero());
    }
    if a.is_constant() || b.is_constant() {
        return Ok(true);
    }
    // gcd(a, b) = 1 iff (a) ∩ (b) = (ab)
    let n = d.nvars + 1;
    if n > crate::monomial::MAX_VARS {
        return Err(Error::TooManyVariables(n));
    }
    let t = Polynomial::var(d.field, n, 0);
    let one = Polynomial::one(d.field, n);
    let gens = alloc::vec![&t * &a.shift(n, 1), &(&one - &t) * &b.shift(n, 1)];
    let gb = ideal_basis(d.field, n, MonomialOrder::Block(1), &gens, d.kernel)?;
    let lcm: Vec<&Polynomial> = gb.iter().filter(|g| g.support_mask() & 1 == 0).collect();
    Ok(lcm.len() == 1 && lcm[0].monic() == (a * b).shift(n, 1).monic())
}

/// `g` contains a term `c * x_i` and no other term involving `x_i`.
fn linear_variable(gb: &[Polynomial]) -> Option<(usize, usize)> {
    for (k, g) in gb.iter().enumerate() {
        for i in 0..g.nvars() {
            let with_i: Vec<&Monomial> = g.terms().iter().map(|(m, _)| m).filter(|m| m.exponent(i) > 0).collect();
            if with_i.len() == 1 && with_i[0].degree() == 1 {
                return Some((k, i));
            }
        }
    }
    None
}

fn coefficient_of_var(g: &Polynomial, i: usize) -> Scalar {
    g.terms().iter().find(|(m, _)| m.exponent(i) == 1 && m.degree() == 1).map(|(_, c)| c.clone()).expect("linear term")
}

fn gcd_monomial(a: &Monomial, b: &Monomial) -> Monomial {
    let e: Vec<u32> = a.exponents().iter().zip(b.exponents()).map(|(x, y)| (*x).min(*y) as u32).collect();
    Monomial::from_exponents(&e).expect("fits")
}

fn divide_by_monomial(g: &Polynomial, m: &Monomial) -> Polynomial {
    let terms = g.terms().iter().map(|(t, c)| (m.quotient_of(t).expect("divides"), c.clone())).collect();
    Polynomial::from_terms(g.field(), g.nvars(), terms)
}

/// `p = a * x_v + b` with `a, b` free of `x_v`; requires degree one in `x_v`.
fn split_linear(p: &Polynomial, v: usize) -> (Polynomial, Polynomial) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (m, c) in p.terms() {
        if m.exponent(v) == 1 {
            let e: Vec<u32> = (0..p.nvars()).map(|i| if i == v { 0 } else { m.exponent(i) }).collect();
            a.push((Monomial::from_exponents(&e).expect("fits"), c.clone()));
        } else {
            b.push((*m, c.clone()));
        }
    }
    (Polynomial::from_terms(p.field(), p.nvars(), a), Polynomial::from_terms(p.field(), p.nvars(), b))
}

/// Coefficients `c_0..c_d` of a polynomial in the single variable `v`.
fn univariate_coefficients(p: &Polynomial, v: usize) -> Vec<Scalar> {
    let d = p.degree_in(v) as usize;
    let mut out = alloc::vec![p.field().zero(); d + 1];
    for (m, c) in p.terms() {
        out[m.exponent(v) as usize] = c.clone();
    }
    out
}

fn from_univariate(field: Field, nvars: usize, v: usize, coeffs: &[Scalar]) -> Polynomial {
    let terms = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !field.is_zero(c))
        .map(|(e, c)| {
            let mut exps = alloc::vec![0u32; nvars];
            exps[v] = e as u32;
            (Monomial::from_exponents(&exps).expect("fits"), c.clone())
        })
        .collect();
    Polynomial::from_terms(field, nvars, terms)
}

fn eval(field: Field, coeffs: &[Scalar], x: &Scalar) -> Scalar {
    coeffs.iter().rev().fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c))
}

/// Quotient of `p` by `x - r`, assuming `r` is a root.
fn synthetic_division(field: Field, coeffs: &[Scalar], r: &Scalar) -> Vec<Scalar> {
    let d = coeffs.len() - 1;
    let mut q = alloc::vec![field.zero(); d];
    let mut carry = field.zero();
    for k in (1..=d).rev() {
        carry = field.add(&coeffs[k], &field.mul(&carry, r));
        q[k - 1] = carry.clone();
    }
    q
}

const DIVISOR_LIMIT: u64 = 1 << 40;
const RESIDUE_SCAN_LIMIT: u32 = 1 << 17;

fn divisors(n: &BigInt) -> Result<Vec<u64>> {
    let n = n.abs().to_u64().filter(|&n| n <= DIVISOR_LIMIT).ok_or_else(|| not_decidable("coefficient too large for the root test"))?;
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            if k * k != n {
                out.push(n / k);
            }
        }
        k += 1;
    }
    out.sort_unstable();
    Ok(out)
}

/// A root in the coefficient field, by the rational root test over ℚ or by
/// exhaustion over small prime fields.
fn find_root(field: Field, coeffs: &[Scalar]) -> Result<Option<Scalar>> {
    match field {
        Field::Prime(p) => {
            if p > RESIDUE_SCAN_LIMIT {
                return Err(not_decidable(format!("root search over F_{p}")));
            }
            Ok((0..p).map(Scalar::Residue).find(|x| field.is_zero(&eval(field, coeffs, x))))
        }
        Field::Rationals => {
            let rats: Vec<BigRational> = coeffs
                .iter()
                .map(|c| match c {
                    Scalar::Rational(r) => r.clone(),
                    Scalar::Residue(_) => unreachable!("rational field"),
                })
                .collect();
            let den = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            let ints: Vec<BigInt> = rats.iter().map(|r| (r * BigRational::from_integer(den.clone())).to_integer()).collect();
            if ints[0].is_zero() {
                return Ok(Some(field.zero()));
            }
            let lead = ints.last().expect("nonempty");
            for u in divisors(&ints[0])? {
                for v in divisors(lead)? {
                    for sign in [Sign::Plus, Sign::Minus] {
                        let cand = Scalar::Rational(BigRational::new(BigInt::from_biguint(sign, u.into()), BigInt::from(v)));
                        if field.is_zero(&eval(field, coeffs, &cand)) {
                            return Ok(Some(cand));
                        }
                    }
                }
            }
            Ok(None)
        }
    }
}

fn decider(ring: &Ring) -> Decider<'_> {
    Decider { field: ring.field(), nvars: ring.nvars(), kernel: ring.kernel(), nodes: 0 }
}

/// The ideal is prime, decided by the same certificates as [`minimal_primes`].
pub fn is_certified_prime(a: &IdealHandle) -> Result<bool> {
    if a.is_unit() {
        return Ok(false);
    }
    let mut d = decider(a.ring());
    match d.min_primes(a.groebner_basis().to_vec()) {
        Ok(ps) => {
            let ps = d.minimalize(ps)?;
            Ok(ps.len() == 1 && ps[0] == a.groebner_basis())
        }
        Err(Error::NotDecidable(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Verify a claimed list of minimal primes of `a`: each certified prime and
/// containing `a`, pairwise incomparable, and their intersection inside `√a`.
pub fn verify_decomposition(a: &IdealHandle, claim: &[IdealHandle]) -> Result<()> {
    let ring = a.ring();
    let mut inter: Option<IdealHandle> = None;
    for (i, p) in claim.iter().enumerate() {
        if !is_certified_prime(p)? {
            return Err(not_decidable(format!("no primality certificate for {}", p.describe())));
        }
        if !p.contains_ideal(a)? {
            return Err(not_decidable(format!("{} does not contain {}", p.describe(), a.describe())));
        }
        for q in &claim[..i] {
            if p.contains_ideal(q)? || q.contains_ideal(p)? {
                return Err(not_decidable("claimed primes are comparable"));
            }
        }
        inter = Some(match inter {
            None => p.clone(),
            Some(acc) => acc.intersection(p)?,
        });
    }
    let inter = inter.unwrap_or_else(|| ring.unit_ideal());
    let quotient = ring.quotient_by(a)?;
    for g in inter.generators() {
        if !crate::ring::is_nilpotent(g, &quotient)? {
            return Err(not_decidable("claimed primes miss part of the zero set"));
        }
    }
    Ok(())
}

fn claimed_components(ring: &Ring) -> Result<Option<Vec<IdealHandle>>> {
    match ring.claimed_components() {
        None => Ok(None),
        Some(c) => {
            let claim: Vec<IdealHandle> = c.iter().map(|g| ring.ideal(g.clone())).collect::<Result<_>>()?;
            verify_decomposition(&ring.zero_ideal(), &claim)?;
            Ok(Some(claim))
        }
    }
}

/// Minimal primes of `a`, or `NotDecidable`. A ring carrying claimed
/// components of `(0)` lets undecidable cases split along those components.
pub fn minimal_primes(a: &IdealHandle) -> Result<Vec<IdealHandle>> {
    let ring = a.ring();
    let mut d = decider(ring);
    let primes = match d.min_primes(a.groebner_basis().to_vec()) {
        Ok(p) => d.minimalize(p)?,
        Err(Error::NotDecidable(why)) => {
            let comps = claimed_components(ring)?.ok_or(Error::NotDecidable(why))?;
            let mut all = Vec::new();
            for q in comps {
                let sum = a.sum(&q)?;
                if q.contains_ideal(a)? {
                    all.push(q.groebner_basis().to_vec());
                } else {
                    d.nodes = 0;
                    all.extend(d.min_primes(sum.groebner_basis().to_vec())?);
                }
            }
            d.minimalize(all)?
        }
        Err(e) => return Err(e),
    };
    primes.into_iter().map(|p| ring.ideal(p)).collect()
}

/// `ht p` for a prime `p`, given the minimal primes of `(0)`.
fn height_of_prime(p: &IdealHandle, min0: &[IdealHandle]) -> Result<u32> {
    let dp = dim_quotient(p).finite().expect("proper prime");
    let mut best: Option<u32> = None;
    for q in min0 {
        if p.contains_ideal(q)? {
            let dq = dim_quotient(q).finite().expect("proper prime");
            let h = dq - dp;
            best = Some(best.map_or(h, |b: u32| b.max(h)));
        }
    }
    best.ok_or_else(|| not_decidable("prime contains no minimal prime of (0)"))
}

pub fn height(a: &IdealHandle) -> Result<HeightValue> {
    if a.is_unit() {
        return Ok(GradeValue::Infinite);
    }
    let min0 = minimal_primes(&a.ring().zero_ideal())?;
    let mut best: Option<u32> = None;
    for p in minimal_primes(a)? {
        let h = height_of_prime(&p, &min0)?;
        best = Some(best.map_or(h, |b: u32| b.min(h)));
    }
    Ok(best.map_or(GradeValue::Infinite, GradeValue::Finite))
}

/// Height of `a` measured on `Supp M = V(ann M)`: heights in `R/ann M`.
pub fn height_on_module(a: &IdealHandle, m: &FPModule) -> Result<HeightValue> {
    let ann = m.annihilator()?;
    if a.sum(&ann)?.is_unit() {
        return Ok(GradeValue::Infinite);
    }
    let sub = a.ring().quotient_by(&ann)?;
    let image = sub.ideal(a.generators().to_vec())?;
    height(&image)
}
