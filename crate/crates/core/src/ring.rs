//! Affine algebras `k[x]/I`, their ideals, and maps between them.
//!
//! Quotient arithmetic is cover-ring arithmetic followed by a normal form;
//! there is no separate residue-class type.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, mismatch, Error, Result};
use crate::field::Field;
use crate::groebner::{ideal_basis, normal_form, Kernel};
use crate::monomial::{MonomialOrder, MAX_VARS};
use crate::parse::parse_polynomial;
use crate::poly::Polynomial;

pub type Ring = Arc<RingPresentation>;

/// `k[x_1..x_n]/I` with the reduced degrevlex basis of `I` computed at construction.
pub struct RingPresentation {
    names: Vec<String>,
    field: Field,
    defining: Vec<Polynomial>,
    gb: Vec<Polynomial>,
    graded: bool,
    kernel: Arc<Kernel>,
    components: Option<Vec<Vec<Polynomial>>>,
}

impl fmt::Debug for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl RingPresentation {
    pub fn polynomial(field: Field, names: Vec<String>, kernel: Arc<Kernel>) -> Result<Ring> {
        Self::quotient(field, names, Vec::new(), kernel)
    }

    pub fn quotient(field: Field, names: Vec<String>, defining: Vec<Polynomial>, kernel: Arc<Kernel>) -> Result<Ring> {
        if names.len() > MAX_VARS {
            return Err(Error::TooManyVariables(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(invalid(format!("duplicate variable '{n}'")));
            }
        }
        let nvars = names.len();
        for p in &defining {
            if p.field() != field || p.nvars() != nvars {
                return Err(mismatch("defining polynomial from another ring"));
            }
        }
        let defining: Vec<Polynomial> = defining.into_iter().filter(|p| !p.is_zero()).collect();
        let gb = ideal_basis(field, nvars, MonomialOrder::DegRevLex, &defining, &kernel)?;
        debug_assert!(defining.iter().all(|p| normal_form(p, &gb, MonomialOrder::DegRevLex, &kernel).is_zero()));
        let graded = defining.iter().all(|p| p.is_homogeneous());
        Ok(Arc::new(RingPresentation { names, field, defining, gb, graded, kernel, components: None }))
    }

    /// Same ring, carrying a claimed list of minimal primes of `(0)` for the
    /// prime decider to verify and use.
    pub fn with_claimed_components(&self, comps: Vec<Vec<Polynomial>>) -> Result<Ring> {
        for c in comps.iter().flatten() {
            self.check(c)?;
        }
        Ok(Arc::new(RingPresentation {
            names: self.names.clone(),
            field: self.field,
            defining: self.defining.clone(),
            gb: self.gb.clone(),
            graded: self.graded,
            kernel: self.kernel.clone(),
            components: Some(comps),
        }))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn defining(&self) -> &[Polynomial] {
        &self.defining
    }

    /// Reduced degrevlex basis of the defining ideal, in the polynomial cover.
    pub fn groebner_basis(&self) -> &[Polynomial] {
        &self.gb
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.gb.is_empty()
    }

    pub fn is_zero_ring(&self) -> bool {
        self.gb.iter().any(|g| g.is_constant())
    }

    pub fn kernel(&self) -> &Arc<Kernel> {
        &self.kernel
    }

    pub fn claimed_components(&self) -> Option<&[Vec<Polynomial>]> {
        self.components.as_deref()
    }

    pub fn check(&self, p: &Polynomial) -> Result<()> {
        if p.field() != self.field || p.nvars() != self.nvars() {
            return Err(mismatch("polynomial does not belong to this ring"));
        }
        Ok(())
    }

    /// Same cover ring and field.
    pub fn same_cover(&self, other: &RingPresentation) -> bool {
        self.field == other.field && self.names.len() == other.names.len()
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        parse_polynomial(text, &self.names, self.field)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.field, self.nvars(), i)
    }

    pub fn vars(&self) -> Vec<Polynomial> {
        (0..self.nvars()).map(|i| self.var(i)).collect()
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.field, self.nvars())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.field, self.nvars())
    }

    /// Canonical representative modulo the defining ideal.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        if self.gb.is_empty() {
            return p.clone();
        }
        normal_form(p, &self.gb, MonomialOrder::DegRevLex, &self.kernel)
    }

    /// `p == 0` in the quotient.
    pub fn is_zero_element(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn show(&self, p: &Polynomial) -> String {
        p.display(&self.names).to_string()
    }

    pub fn describe(&self) -> String {
        let mut s = format!("{}[{}]", self.field, self.names.join(","));
        if !self.defining.is_empty() {
            let gens: Vec<String> = self.defining.iter().map(|p| self.show(p)).collect();
            s.push_str(&format!("/({})", gens.join(", ")));
        }
        s
    }

    pub fn ideal(self: &Arc<Self>, gens: Vec<Polynomial>) -> Result<IdealHandle> {
        IdealHandle::new(self.clone(), gens)
    }

    pub fn zero_ideal(self: &Arc<Self>) -> IdealHandle {
        IdealHandle::new(self.clone(), Vec::new()).expect("zero ideal")
    }

    pub fn unit_ideal(self: &Arc<Self>) -> IdealHandle {
        IdealHandle::new(self.clone(), alloc::vec![self.one()]).expect("unit ideal")
    }

    /// The ideal of all variables.
    pub fn graded_maximal(self: &Arc<Self>) -> Result<IdealHandle> {
        IdealHandle::new(self.clone(), self.vars())
    }

    /// `k[x]/J` for an ideal `J` of this ring.
    pub fn quotient_by(self: &Arc<Self>, ideal: &IdealHandle) -> Result<Ring> {
        let mut defining = self.defining.clone();
        defining.extend(ideal.generators().iter().cloned());
        RingPresentation::quotient(self.field, self.names.clone(), defining, self.kernel.clone())
    }
}

/// A finitely generated ideal of a presented ring, with its basis in the cover.
#[derive(Clone)]
pub struct IdealHandle {
    ring: Ring,
    gens: Vec<Polynomial>,
    gb: Vec<Polynomial>,
}

impl fmt::Debug for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl IdealHandle {
    /// Generators are reduced modulo the defining ideal; zeros are dropped.
    pub fn new(ring: Ring, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            ring.check(g)?;
        }
        let gens: Vec<Polynomial> = gens.iter().map(|g| ring.reduce(g)).filter(|g| !g.is_zero()).collect();
        let mut all = ring.gb.clone();
        all.extend(gens.iter().cloned());
        let gb = ideal_basis(ring.field, ring.nvars(), MonomialOrder::DegRevLex, &all, &ring.kernel)?;
        Ok(IdealHandle { ring, gens, gb })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Reduced degrevlex basis of `gens + I` in the cover ring.
    pub fn groebner_basis(&self) -> &[Polynomial] {
        &self.gb
    }

    /// Reduced basis of `gens + I` under any order.
    pub fn groebner_basis_in(&self, order: MonomialOrder) -> Result<Vec<Polynomial>> {
        if order == MonomialOrder::DegRevLex {
            return Ok(self.gb.clone());
        }
        ideal_basis(self.ring.field, self.ring.nvars(), order, &self.gb, &self.ring.kernel)
    }

    pub fn is_unit(&self) -> bool {
        self.gb.iter().any(|g| g.is_constant())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// True when the ideal is generated by monomials (modulo nothing: the ring must be a polynomial ring
    /// for this to be meaningful combinatorially).
    pub fn is_monomial(&self) -> bool {
        self.gb.iter().all(|g| g.is_monomial())
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        self.ring.check(p)?;
        Ok(normal_form(p, &self.gb, MonomialOrder::DegRevLex, &self.ring.kernel))
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    fn same_ring(&self, other: &IdealHandle) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || (self.ring.same_cover(&other.ring) && self.ring.gb == other.ring.gb) {
            Ok(())
        } else {
            Err(mismatch("ideals of different rings"))
        }
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &IdealHandle) -> Result<bool> {
        self.same_ring(other)?;
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as ideals: reduced bases coincide.
    pub fn same_ideal(&self, other: &IdealHandle) -> Result<bool> {
        self.same_ring(other)?;
        Ok(self.gb == other.gb)
    }

    pub fn sum(&self, other: &IdealHandle) -> Result<IdealHandle> {
        self.same_ring(other)?;
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        IdealHandle::new(self.ring.clone(), g)
    }

    pub fn product(&self, other: &IdealHandle) -> Result<IdealHandle> {
        self.same_ring(other)?;
        let mut g = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                g.push(a * b);
            }
        }
        IdealHandle::new(self.ring.clone(), g)
    }

    /// `self ∩ other` via `t*self + (1-t)*other`, eliminating `t`.
    pub fn intersection(&self, other: &IdealHandle) -> Result<IdealHandle> {
        self.same_ring(other)?;
        let r = &self.ring;
        let n = r.nvars();
        if n + 1 > MAX_VARS {
            return Err(Error::TooManyVariables(n + 1));
        }
        let t = Polynomial::var(r.field, n + 1, 0);
        let one_minus_t = &Polynomial::one(r.field, n + 1) - &t;
        let mut gens = Vec::new();
        for g in &self.gb {
            gens.push(&t * &g.shift(n + 1, 1));
        }
        for g in &other.gb {
            gens.push(&one_minus_t * &g.shift(n + 1, 1));
        }
        let mut mask = alloc::vec![false; n + 1];
        mask[0] = true;
        let kept = eliminate(r.field, n + 1, &gens, &mask, &r.kernel)?;
        let down: Vec<Polynomial> = kept.iter().map(|p| unshift(p, n, 1)).collect();
        IdealHandle::new(r.clone(), down)
    }

    /// Intersection with the subring generated by the variables not in `vars`,
    /// returned as an ideal of the same ring.
    pub fn eliminate(&self, vars: &[usize]) -> Result<IdealHandle> {
        let n = self.ring.nvars();
        let mut mask = alloc::vec![false; n];
        for &v in vars {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, max: n.saturating_sub(1) });
            }
            mask[v] = true;
        }
        let kept = eliminate(self.ring.field, n, &self.gb, &mask, &self.ring.kernel)?;
        IdealHandle::new(self.ring.clone(), kept)
    }

    pub fn describe(&self) -> String {
        if self.gens.is_empty() {
            return "(0)".to_string();
        }
        let g: Vec<String> = self.gens.iter().map(|p| self.ring.show(p)).collect();
        format!("({})", g.join(", "))
    }
}

/// Drop the first `offset` variables of a polynomial that does not involve them.
pub(crate) fn unshift(p: &Polynomial, nvars: usize, offset: usize) -> Polynomial {
    let terms = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let exps: Vec<u32> = m.exponents()[offset..].iter().map(|&e| e as u32).collect();
            (crate::monomial::Monomial::from_exponents(&exps).expect("fits"), c.clone())
        })
        .collect();
    Polynomial::from_terms(p.field(), nvars, terms)
}

/// Elements of the reduced basis of `(gens)` that avoid the masked variables,
/// computed under a block order eliminating them.
pub fn eliminate(field: Field, nvars: usize, gens: &[Polynomial], mask: &[bool], kernel: &Kernel) -> Result<Vec<Polynomial>> {
    // permutation: eliminated variables first
    let mut perm: Vec<usize> = (0..nvars).filter(|&i| mask[i]).collect();
    let k = perm.len();
    perm.extend((0..nvars).filter(|&i| !mask[i]));
    let mut to_new = alloc::vec![0; nvars];
    for (new, &old) in perm.iter().enumerate() {
        to_new[old] = new;
    }
    let moved: Vec<Polynomial> = gens.iter().map(|g| g.remap(nvars, &to_new)).collect();
    let gb = ideal_basis(field, nvars, MonomialOrder::Block(k), &moved, kernel)?;
    let elim_mask: u32 = if k == 0 { 0 } else { (1u32 << k) - 1 };
    Ok(gb
        .into_iter()
        .filter(|g| g.support_mask() & elim_mask == 0)
        .map(|g| g.remap(nvars, &perm))
        .collect())
}

/// A ring homomorphism given by the images of the source variables.
#[derive(Clone)]
pub struct RingMap {
    source: Ring,
    target: Ring,
    images: Vec<Polynomial>,
}

impl fmt::Debug for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> = self.images.iter().map(|p| self.target.show(p)).collect();
        write!(f, "{} -> {}: ({})", self.source.describe(), self.target.describe(), imgs.join(", "))
    }
}

impl RingMap {
    /// Checks that every defining relation of the source maps to zero.
    pub fn new(source: Ring, target: Ring, images: Vec<Polynomial>) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(mismatch("need one image per source variable"));
        }
        if source.field() != target.field() {
            return Err(mismatch("source and target fields differ"));
        }
        for p in &images {
            target.check(p)?;
        }
        let images: Vec<Polynomial> = images.iter().map(|p| target.reduce(p)).collect();
        let map = RingMap { source, target, images };
        for g in map.source.defining() {
            if !map.target.is_zero_element(&map.raw_apply(g)?) {
                return Err(invalid(format!("map is not well defined: {} does not vanish", map.source.show(g))));
            }
        }
        Ok(map)
    }

    pub fn identity(ring: &Ring) -> Self {
        RingMap { source: ring.clone(), target: ring.clone(), images: ring.vars() }
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        Arc::ptr_eq(&self.source, &self.target) && self.images == self.source.vars()
    }

    fn raw_apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if self.source.nvars() == 0 {
            self.source.check(p)?;
            return Ok(Polynomial::constant(self.target.field(), self.target.nvars(), p.constant_term()));
        }
        p.substitute(&self.images)
    }

    /// Image of `p`, reduced in the target.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        self.source.check(p)?;
        Ok(self.target.reduce(&self.raw_apply(p)?))
    }

    /// The ideal generated by the image of `ideal`.
    pub fn extend(&self, ideal: &IdealHandle) -> Result<IdealHandle> {
        if !Arc::ptr_eq(ideal.ring(), &self.source) && !(ideal.ring().same_cover(&self.source)) {
            return Err(mismatch("ideal is not in the source ring"));
        }
        let g = ideal.generators().iter().map(|p| self.apply(p)).collect::<Result<Vec<_>>>()?;
        IdealHandle::new(self.target.clone(), g)
    }

    /// Graph-ideal elimination: in `k[target, source]` take the target relations,
    /// `extra` and `s_i - image_i`, then eliminate the target variables.
    fn graph_eliminate(&self, extra: &[Polynomial]) -> Result<IdealHandle> {
        let m = self.target.nvars();
        let n = self.source.nvars();
        if m + n > MAX_VARS {
            return Err(Error::TooManyVariables(m + n));
        }
        let field = self.source.field();
        let total = m + n;
        let mut gens: Vec<Polynomial> = Vec::new();
        for g in self.target.groebner_basis().iter().chain(extra) {
            gens.push(g.shift(total, 0));
        }
        for (i, img) in self.images.iter().enumerate() {
            let s = Polynomial::var(field, total, m + i);
            gens.push(&s - &img.shift(total, 0));
        }
        let mut mask = alloc::vec![false; total];
        for b in mask.iter_mut().take(m) {
            *b = true;
        }
        let kept = eliminate(field, total, &gens, &mask, self.source.kernel())?;
        let down: Vec<Polynomial> = kept.iter().map(|p| unshift(p, n, m)).collect();
        IdealHandle::new(self.source.clone(), down)
    }

    pub fn kernel(&self) -> Result<IdealHandle> {
        self.graph_eliminate(&[])
    }

    /// Preimage of an ideal of the target.
    pub fn contract(&self, q: &IdealHandle) -> Result<IdealHandle> {
        if !q.ring().same_cover(&self.target) {
            return Err(mismatch("ideal is not in the target ring"));
        }
        self.graph_eliminate(q.generators())
    }
}

/// `b` is nilpotent in `ring`: `1 ∈ I + (1 - w b)` with a fresh variable `w`.
pub fn is_nilpotent(b: &Polynomial, ring: &Ring) -> Result<bool> {
    ring.check(b)?;
    let n = ring.nvars();
    if n + 1 > MAX_VARS {
        return Err(Error::TooManyVariables(n + 1));
    }
    let w = Polynomial::var(ring.field(), n + 1, n);
    let mut gens: Vec<Polynomial> = ring.groebner_basis().iter().map(|g| g.shift(n + 1, 0)).collect();
    gens.push(&Polynomial::one(ring.field(), n + 1) - &(&w * &b.shift(n + 1, 0)));
    let gb = ideal_basis(ring.field(), n + 1, MonomialOrder::DegRevLex, &gens, ring.kernel())?;
    Ok(gb.iter().any(|g| g.is_constant()))
}
