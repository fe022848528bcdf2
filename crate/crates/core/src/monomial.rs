//! Dense exponent vectors and the term orders used by the Groebner kernel.

use core::cmp::Ordering;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the number of variables of any cover ring, including the
/// auxiliary variables introduced by elimination.
pub const MAX_VARS: usize = 32;

/// A power product `x_0^e_0 ... x_{n-1}^e_{n-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    nvars: u8,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        Monomial { exps: [0; MAX_VARS], nvars: nvars as u8, degree: 0 }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        assert!(i < nvars);
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::TooManyVariables(exps.len()));
        }
        let mut m = Self::one(exps.len());
        for (i, &e) in exps.iter().enumerate() {
            let e = u16::try_from(e).map_err(|_| Error::Invalid("exponent too large".into()))?;
            m.exps[i] = e;
            m.degree += e as u32;
        }
        Ok(m)
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn exponents(&self) -> &[u16] {
        &self.exps[..self.nvars as usize]
    }

    #[inline]
    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exponents().iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i)
    }

    /// Bitmask of the support.
    pub fn support_mask(&self) -> u32 {
        self.support().fold(0u32, |acc, i| acc | (1 << i))
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut r = *self;
        for i in 0..self.nvars as usize {
            r.exps[i] = self.exps[i].checked_add(other.exps[i]).expect("exponent overflow");
        }
        r.degree = self.degree + other.degree;
        r
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree
            && (0..self.nvars as usize).all(|i| self.exps[i] <= other.exps[i])
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut r = *other;
        for i in 0..self.nvars as usize {
            r.exps[i] -= self.exps[i];
        }
        r.degree = other.degree - self.degree;
        Some(r)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut r = *self;
        let mut d = 0;
        for i in 0..self.nvars as usize {
            r.exps[i] = self.exps[i].max(other.exps[i]);
            d += r.exps[i] as u32;
        }
        r.degree = d;
        r
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        (0..self.nvars as usize).all(|i| self.exps[i] == 0 || other.exps[i] == 0)
    }

    /// Reindex into an ambient with `nvars` variables; variable `i` goes to `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Monomial {
        let mut r = Monomial::one(nvars);
        for i in 0..self.nvars as usize {
            if self.exps[i] > 0 {
                r.exps[map[i]] += self.exps[i];
            }
        }
        r.degree = self.degree;
        r
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents())
    }
}

/// Monomial orders. `Block(k)` compares the first `k` variables by degrevlex
/// and breaks ties by degrevlex on the rest, so it eliminates the first block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    DegRevLex,
    Block(usize),
}

fn degrevlex_range(a: &Monomial, b: &Monomial, lo: usize, hi: usize) -> Ordering {
    let da: u32 = a.exps[lo..hi].iter().map(|&e| e as u32).sum();
    let db: u32 = b.exps[lo..hi].iter().map(|&e| e as u32).sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (lo..hi).rev() {
        if a.exps[i] != b.exps[i] {
            return b.exps[i].cmp(&a.exps[i]);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let n = a.nvars as usize;
        match self {
            MonomialOrder::Lex => a.exps[..n].cmp(&b.exps[..n]),
            MonomialOrder::DegRevLex => {
                if a.degree != b.degree {
                    return a.degree.cmp(&b.degree);
                }
                for i in (0..n).rev() {
                    if a.exps[i] != b.exps[i] {
                        return b.exps[i].cmp(&a.exps[i]);
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block(k) => {
                let k = (*k).min(n);
                degrevlex_range(a, b, 0, k).then_with(|| degrevlex_range(a, b, k, n))
            }
        }
    }
}

/// Extension of a monomial order to free modules. Position-over-term puts
/// lower component indices first; term-over-position compares monomials first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct TermOrder {
    pub mono: MonomialOrder,
    pub position_first: bool,
}

impl TermOrder {
    pub const fn pot(mono: MonomialOrder) -> Self {
        TermOrder { mono, position_first: true }
    }

    pub const fn top(mono: MonomialOrder) -> Self {
        TermOrder { mono, position_first: false }
    }

    #[inline]
    pub fn cmp(&self, ca: u32, a: &Monomial, cb: u32, b: &Monomial) -> Ordering {
        if self.position_first {
            cb.cmp(&ca).then_with(|| self.mono.cmp(a, b))
        } else {
            self.mono.cmp(a, b).then_with(|| cb.cmp(&ca))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    #[test]
    fn degrevlex_tie_break() {
        // x^2 y vs x y^2: same degree, last variable smaller exponent wins
        let o = MonomialOrder::DegRevLex;
        assert_eq!(o.cmp(&m(&[2, 1]), &m(&[1, 2])), Ordering::Greater);
        // x y z^0 vs ... classic: x*z < y^2 in degrevlex
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(MonomialOrder::Lex.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Greater);
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let o = MonomialOrder::Block(1);
        // t beats any power of x
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 9])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 2]), &m(&[0, 1])), Ordering::Greater);
    }

    #[test]
    fn division_and_lcm() {
        let a = m(&[1, 2, 0]);
        let b = m(&[2, 1, 1]);
        assert_eq!(a.lcm(&b), m(&[2, 2, 1]));
        assert!(a.divides(&a.lcm(&b)));
        assert_eq!(a.quotient_of(&m(&[3, 2, 1])), Some(m(&[2, 0, 1])));
        assert!(!a.is_coprime(&b));
        assert!(m(&[1, 0]).is_coprime(&m(&[0, 4])));
    }

    #[test]
    fn position_over_term() {
        let o = TermOrder::pot(MonomialOrder::DegRevLex);
        assert_eq!(o.cmp(0, &m(&[0]), 1, &m(&[5])), Ordering::Greater);
        let t = TermOrder::top(MonomialOrder::DegRevLex);
        assert_eq!(t.cmp(0, &m(&[0]), 1, &m(&[5])), Ordering::Less);
    }
}
