//! Buchberger's algorithm for submodules of `P^r` (ideals are rank one).
//!
//! Pairs are filtered with the Gebauer–Möller installation of Buchberger's
//! criteria and selected by sugar degree, ties broken by basis index.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::modvec::{ModVec, Term};
use crate::monomial::{Monomial, MonomialOrder, TermOrder};
use crate::poly::Polynomial;

pub const DEFAULT_BUDGET: u64 = 200_000;

/// Shared resource limits and counters for one experiment.
#[derive(Debug)]
pub struct Kernel {
    budget: u64,
    spairs: AtomicU64,
    max_coeff_bits: AtomicU64,
}

impl Default for Kernel {
    fn default() -> Self {
        Kernel::with_budget(DEFAULT_BUDGET)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub struct KernelStats {
    pub spairs: u64,
    pub max_coeff_bits: u64,
}

impl Kernel {
    /// `budget` bounds the number of S-pairs any single basis computation may process.
    pub fn with_budget(budget: u64) -> Self {
        Kernel { budget, spairs: AtomicU64::new(0), max_coeff_bits: AtomicU64::new(0) }
    }

    pub fn shared(budget: u64) -> Arc<Self> {
        Arc::new(Self::with_budget(budget))
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn stats(&self) -> KernelStats {
        KernelStats {
            spairs: self.spairs.load(AtomicOrdering::Relaxed),
            max_coeff_bits: self.max_coeff_bits.load(AtomicOrdering::Relaxed),
        }
    }

    fn record(&self, spairs: u64, basis: &[ModVec]) {
        self.spairs.fetch_add(spairs, AtomicOrdering::Relaxed);
        let bits = basis.iter().flat_map(|v| v.terms.iter()).map(|t| t.coef.bit_length()).max().unwrap_or(0);
        self.max_coeff_bits.fetch_max(bits, AtomicOrdering::Relaxed);
    }
}

struct Elem {
    v: ModVec,
    comp: u32,
    lm: Monomial,
    sugar: u32,
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    comp: u32,
    lcm: Monomial,
    sugar: u32,
}

fn vec_degree(v: &ModVec) -> u32 {
    v.terms.iter().map(|t| t.mono.degree()).max().unwrap_or(0)
}

/// Buchberger engine for one field and one term order.
pub struct Engine<'k> {
    pub field: Field,
    pub order: TermOrder,
    kernel: &'k Kernel,
}

impl<'k> Engine<'k> {
    pub fn new(field: Field, order: TermOrder, kernel: &'k Kernel) -> Self {
        Engine { field, order, kernel }
    }

    fn find_reducer<'a>(&self, t: &Term, basis: &'a [&ModVec]) -> Option<&'a ModVec> {
        basis.iter().copied().find(|g| {
            let l = &g.terms[0];
            l.comp == t.comp && l.mono.divides(&t.mono)
        })
    }

    /// Full reduction: no term of the result is divisible by a leading term of `basis`.
    pub fn reduce(&self, mut f: ModVec, basis: &[&ModVec]) -> ModVec {
        let field = self.field;
        let mut pos = 0;
        while pos < f.terms.len() {
            let t = &f.terms[pos];
            match self.find_reducer(t, basis) {
                Some(g) => {
                    let lead = &g.terms[0];
                    let m = lead.mono.quotient_of(&t.mono).expect("divides");
                    let c = field.div(&t.coef, &lead.coef).expect("nonzero lead");
                    f.sub_scaled_tail(field, &self.order, pos, g, &m, &c);
                }
                None => pos += 1,
            }
        }
        f
    }

    /// Reduce only until the leading term is irreducible.
    pub fn top_reduce(&self, mut f: ModVec, basis: &[&ModVec]) -> ModVec {
        let field = self.field;
        while let Some(t) = f.terms.first() {
            match self.find_reducer(t, basis) {
                Some(g) => {
                    let lead = &g.terms[0];
                    let m = lead.mono.quotient_of(&t.mono).expect("divides");
                    let c = field.div(&t.coef, &lead.coef).expect("nonzero lead");
                    f.sub_scaled_tail(field, &self.order, 0, g, &m, &c);
                }
                None => break,
            }
        }
        f
    }

    /// Reduced Groebner basis of the submodule generated by `gens`, sorted
    /// ascending by leading term. The product criterion is used only when
    /// every generator lives in component 0.
    pub fn groebner(&self, gens: Vec<ModVec>) -> Result<Vec<ModVec>> {
        let field = self.field;
        let rank_one = gens.iter().all(|g| g.terms.iter().all(|t| t.comp == 0));
        let mut elems: Vec<Elem> = Vec::new();
        let mut live: Vec<usize> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut processed: u64 = 0;

        let mut inputs: Vec<ModVec> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        for g in inputs.iter_mut() {
            g.resort(&self.order);
        }
        for g in inputs {
            let sugar = vec_degree(&g);
            let basis: Vec<&ModVec> = live.iter().map(|&k| &elems[k].v).collect();
            let h = self.reduce(g, &basis);
            if h.is_zero() {
                continue;
            }
            self.install(h.monic(field), sugar, rank_one, &mut elems, &mut live, &mut pairs);
        }

        while !pairs.is_empty() {
            let best = (0..pairs.len())
                .min_by(|&a, &b| {
                    let (p, q) = (&pairs[a], &pairs[b]);
                    (p.sugar, p.lcm.degree(), p.i, p.j).cmp(&(q.sugar, q.lcm.degree(), q.i, q.j))
                })
                .expect("nonempty");
            let pair = pairs.swap_remove(best);
            processed += 1;
            if processed > self.kernel.budget {
                self.kernel.record(processed, &[]);
                return Err(Error::BudgetExceeded { budget: self.kernel.budget });
            }
            let (a, b) = (&elems[pair.i], &elems[pair.j]);
            let ma = a.lm.quotient_of(&pair.lcm).expect("lcm");
            let mb = b.lm.quotient_of(&pair.lcm).expect("lcm");
            let one = field.one();
            let mut s = a.v.mul_term(field, &ma, &one);
            s.sub_scaled_tail(field, &self.order, 0, &b.v, &mb, &one);
            let basis: Vec<&ModVec> = live.iter().map(|&k| &elems[k].v).collect();
            let h = self.reduce(s, &basis);
            if h.is_zero() {
                continue;
            }
            let sugar = pair.sugar.max(vec_degree(&h));
            self.install(h.monic(field), sugar, rank_one, &mut elems, &mut live, &mut pairs);
        }

        // minimalize, then interreduce
        let mut keep: Vec<ModVec> = Vec::new();
        let mut candidates: Vec<&Elem> = live.iter().map(|&k| &elems[k]).collect();
        candidates.sort_by(|x, y| self.order.cmp(x.comp, &x.lm, y.comp, &y.lm));
        for (idx, e) in candidates.iter().enumerate() {
            let redundant = candidates[..idx].iter().any(|o| o.comp == e.comp && o.lm.divides(&e.lm));
            if !redundant {
                keep.push(e.v.clone());
            }
        }
        let mut out = Vec::with_capacity(keep.len());
        for i in 0..keep.len() {
            let others: Vec<&ModVec> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v).collect();
            let lead = ModVec { terms: alloc::vec![keep[i].terms[0].clone()] };
            let tail = ModVec { terms: keep[i].terms[1..].to_vec() };
            let tail = self.reduce(tail, &others);
            let mut v = lead;
            v.terms.extend(tail.terms);
            out.push(v.monic(field));
        }
        self.kernel.record(processed, &out);
        Ok(out)
    }

    fn install(&self, h: ModVec, sugar: u32, rank_one: bool, elems: &mut Vec<Elem>, live: &mut Vec<usize>, pairs: &mut Vec<Pair>) {
        let lead = h.terms[0].clone();
        let hidx = elems.len();
        elems.push(Elem { v: h, comp: lead.comp, lm: lead.mono, sugar });
        let he = &elems[hidx];

        // candidate pairs (h, g)
        let mut cands: Vec<Pair> = live
            .iter()
            .map(|&g| &elems[g])
            .enumerate()
            .filter(|(_, g)| g.comp == he.comp)
            .map(|(k, g)| {
                let gi = live[k];
                let lcm = he.lm.lcm(&g.lm);
                let s1 = he.sugar + lcm.degree() - he.lm.degree();
                let s2 = g.sugar + lcm.degree() - g.lm.degree();
                Pair { i: gi, j: hidx, comp: he.comp, lcm, sugar: s1.max(s2) }
            })
            .collect();
        cands.sort_by(|x, y| (x.lcm.degree(), x.i).cmp(&(y.lcm.degree(), y.i)));

        let coprime = |p: &Pair| rank_one && elems[p.i].lm.is_coprime(&elems[p.j].lm);
        let mut d: Vec<Pair> = Vec::new();
        for (k, p) in cands.iter().enumerate() {
            if coprime(p) {
                d.push(p.clone());
                continue;
            }
            let dominated_later = cands[k + 1..].iter().any(|q| q.lcm.divides(&p.lcm));
            let dominated_kept = d.iter().any(|q| q.lcm.divides(&p.lcm));
            if !dominated_later && !dominated_kept {
                d.push(p.clone());
            }
        }
        // drop exact duplicates of lcm among later-kept ones: the first (smallest index) wins
        let mut e: Vec<Pair> = Vec::new();
        for p in d {
            if coprime(&p) {
                continue;
            }
            e.push(p);
        }

        let hlm = elems[hidx].lm;
        let hcomp = elems[hidx].comp;
        pairs.retain(|p| {
            if p.comp != hcomp || !hlm.divides(&p.lcm) {
                return true;
            }
            let l1 = elems[p.i].lm.lcm(&hlm);
            let l2 = elems[p.j].lm.lcm(&hlm);
            l1 == p.lcm || l2 == p.lcm
        });
        pairs.extend(e);
        live.retain(|&g| !(elems[g].comp == hcomp && hlm.divides(&elems[g].lm)));
        live.push(hidx);
    }
}

/// Reduced Groebner basis of an ideal of `k[x_0..x_{n-1}]` under `order`.
pub fn ideal_basis(field: Field, nvars: usize, order: MonomialOrder, gens: &[Polynomial], kernel: &Kernel) -> Result<Vec<Polynomial>> {
    let top = TermOrder::pot(order);
    let engine = Engine::new(field, top, kernel);
    let vecs = gens.iter().map(|g| ModVec::from_poly(g, 0, &top)).collect();
    let gb = engine.groebner(vecs)?;
    Ok(gb.into_iter().map(|v| v.into_poly_sorted(field, nvars, order).with_order(MonomialOrder::DegRevLex)).collect())
}

/// Normal form of `p` modulo a Groebner basis computed under `order`.
pub fn normal_form(p: &Polynomial, basis: &[Polynomial], order: MonomialOrder, kernel: &Kernel) -> Polynomial {
    let top = TermOrder::pot(order);
    let engine = Engine::new(p.field(), top, kernel);
    let vecs: Vec<ModVec> = basis.iter().map(|g| ModVec::from_poly(g, 0, &top)).collect();
    let refs: Vec<&ModVec> = vecs.iter().collect();
    let r = engine.reduce(ModVec::from_poly(p, 0, &top), &refs);
    r.into_poly_sorted(p.field(), p.nvars(), order).with_order(MonomialOrder::DegRevLex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use alloc::string::{String, ToString};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn polys(n: &[String], src: &[&str]) -> Vec<Polynomial> {
        src.iter().map(|s| parse_polynomial(s, n, Field::Rationals).unwrap()).collect()
    }

    #[test]
    fn univariate_single_generator() {
        let n = names(&["x"]);
        let k = Kernel::default();
        let gb = ideal_basis(Field::Rationals, 1, MonomialOrder::DegRevLex, &polys(&n, &["x^2 - 1"]), &k).unwrap();
        assert_eq!(gb, polys(&n, &["x^2 - 1"]));
    }

    #[test]
    fn one_s_pair_by_hand() {
        // S(xy - 1, y^2 - 1) = y(xy - 1) - x(y^2 - 1) = x - y
        let n = names(&["x", "y"]);
        let k = Kernel::default();
        let gb = ideal_basis(Field::Rationals, 2, MonomialOrder::Lex, &polys(&n, &["x*y - 1", "y^2 - 1"]), &k).unwrap();
        assert!(gb.contains(&polys(&n, &["x - y"])[0]), "{gb:?}");
        assert_eq!(gb.len(), 2);
    }

    #[test]
    fn unit_ideal() {
        let n = names(&["x"]);
        let k = Kernel::default();
        let gb = ideal_basis(Field::Rationals, 1, MonomialOrder::DegRevLex, &polys(&n, &["x", "1 - x"]), &k).unwrap();
        assert_eq!(gb, polys(&n, &["1"]));
    }

    #[test]
    fn normal_forms() {
        let n = names(&["x", "y"]);
        let k = Kernel::default();
        let o = MonomialOrder::DegRevLex;
        let x2 = polys(&n, &["x^2"]);
        let gb = ideal_basis(Field::Rationals, 2, o, &polys(&n, &["x"]), &k).unwrap();
        assert!(normal_form(&x2[0], &gb, o, &k).is_zero());
        let gb = ideal_basis(Field::Rationals, 2, o, &polys(&n, &["x*y - 1"]), &k).unwrap();
        let y = polys(&n, &["y"]);
        assert_eq!(normal_form(&y[0], &gb, o, &k), y[0]);
        let gb = ideal_basis(Field::Rationals, 2, o, &polys(&n, &["x^2 - 1"]), &k).unwrap();
        assert_eq!(normal_form(&polys(&n, &["x^3"])[0], &gb, o, &k), polys(&n, &["x"])[0]);
    }

    #[test]
    fn budget_is_enforced() {
        let n = names(&["x", "y", "z"]);
        let k = Kernel::with_budget(1);
        let r = ideal_basis(Field::Rationals, 3, MonomialOrder::Lex, &polys(&n, &["x^2 + y*z", "y^2 + x*z", "z^2 + x*y"]), &k);
        assert_eq!(r, Err(Error::BudgetExceeded { budget: 1 }));
    }

    #[test]
    fn cyclic3_is_deterministic() {
        let n = names(&["x", "y", "z"]);
        let k = Kernel::default();
        let g = polys(&n, &["x + y + z", "x*y + y*z + z*x", "x*y*z - 1"]);
        let a = ideal_basis(Field::Rationals, 3, MonomialOrder::Lex, &g, &k).unwrap();
        let mut rev = g.clone();
        rev.reverse();
        let b = ideal_basis(Field::Rationals, 3, MonomialOrder::Lex, &rev, &k).unwrap();
        assert_eq!(a, b);
        // known lex basis: z^3 - 1, y^2 + yz + z^2, x + y + z
        assert_eq!(a, polys(&n, &["z^3 - 1", "y^2 + y*z + z^2", "x + y + z"]));
    }
}
