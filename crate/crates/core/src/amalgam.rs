//! The amalgamation `A ⋈^f J = {(a, f(a) + j)}` as a presented ring.
//!
//! The cover ring is `k[x, T_1..T_m]` with `x` the variables of `A` and `T_u`
//! standing for `(0, j_u)`. The defining ideal is `ker φ_A ∩ ker φ_B` where
//! `φ_A : T -> 0` and `φ_B : x -> f(x), T_u -> j_u`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::dimension::is_certified_prime;
use crate::error::{invalid, mismatch, Error, Result};
use crate::grade::{koszul_grade, GradeValue};
use crate::groebner::{ideal_basis, normal_form};
use crate::module::FPModule;
use crate::monomial::{MonomialOrder, MAX_VARS};
use crate::poly::Polynomial;
use crate::ring::{is_nilpotent, IdealHandle, Ring, RingMap, RingPresentation};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mode {
    /// `J` is finitely generated as an `A`-module and a presentation is attached.
    pub module_finite: bool,
    /// Every subring generator is nilpotent in `B`.
    pub nilpotent: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trust {
    #[default]
    Verify,
    Attested,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generation {
    Verified,
    Attested,
    Failed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    General,
    Duplication,
    TrivialExtension,
}

/// `J` as an `A`-module: `module` is presented on generators whose images in `B` are `generators`.
#[derive(Clone, Debug)]
pub struct JModule {
    pub module: FPModule,
    pub generators: Vec<Polynomial>,
}

#[derive(Clone, Debug)]
pub struct AmalgamDatum {
    f: RingMap,
    j: IdealHandle,
    gens: Vec<Polynomial>,
    mode: Mode,
    trust: Trust,
    construction: Construction,
    j_module: Option<JModule>,
    free_basis: Option<Vec<Polynomial>>,
}

/// The `f(A)`-submodule of `B` spanned by `gens`, via the graph of
/// `A[E]/(E)^2 -> B[t]/(t^2)`, `E_u -> g_u t`.
///
/// Variables of the graph ring: `B` (m), `t`, `A` (n), `E` (k); the first
/// `m + 1` are eliminated.
struct Span {
    m: usize,
    n: usize,
    k: usize,
    gb: Vec<Polynomial>,
    order: MonomialOrder,
    a: Ring,
    b: Ring,
}

impl Span {
    fn new(f: &RingMap, gens: &[Polynomial]) -> Result<Span> {
        let (a, b) = (f.source().clone(), f.target().clone());
        let (m, n, k) = (b.nvars(), a.nvars(), gens.len());
        let total = m + 1 + n + k;
        if total > MAX_VARS {
            return Err(Error::TooManyVariables(total));
        }
        let field = a.field();
        let t = Polynomial::var(field, total, m);
        let mut g: Vec<Polynomial> = b.groebner_basis().iter().map(|p| p.shift(total, 0)).collect();
        g.push(&t * &t);
        for (i, img) in f.images().iter().enumerate() {
            g.push(&Polynomial::var(field, total, m + 1 + i) - &img.shift(total, 0));
        }
        for (u, gu) in gens.iter().enumerate() {
            g.push(&Polynomial::var(field, total, m + 1 + n + u) - &(&gu.shift(total, 0) * &t));
        }
        let order = MonomialOrder::Block(m + 1);
        let gb = ideal_basis(field, total, order, &g, a.kernel())?;
        Ok(Span { m, n, k, gb, order, a, b })
    }

    fn total(&self) -> usize {
        self.m + 1 + self.n + self.k
    }

    fn target_mask(&self) -> u32 {
        (1u32 << (self.m + 1)) - 1
    }

    /// `h` lies in the span.
    fn contains(&self, h: &Polynomial) -> Result<bool> {
        self.b.check(h)?;
        let total = self.total();
        let t = Polynomial::var(self.a.field(), total, self.m);
        let ht = &h.shift(total, 0) * &t;
        let r = normal_form(&ht, &self.gb, self.order, self.a.kernel());
        Ok(r.support_mask() & self.target_mask() == 0)
    }

    /// Relations among the spanning elements, as columns over `A`.
    fn relations(&self) -> Vec<Vec<Polynomial>> {
        let (m, n, k) = (self.m, self.n, self.k);
        let field = self.a.field();
        let mut cols = Vec::new();
        for g in &self.gb {
            if g.support_mask() & self.target_mask() != 0 {
                continue;
            }
            let edeg: Vec<u32> = g.terms().iter().map(|(mono, _)| (0..k).map(|u| mono.exponent(m + 1 + n + u)).sum()).collect();
            if edeg.iter().all(|&d| d == 0) {
                // kernel of f: kills every generator
                let a_poly = restrict(g, m + 1, n);
                for u in 0..k {
                    let mut col = alloc::vec![Polynomial::zero(field, n); k];
                    col[u] = a_poly.clone();
                    cols.push(col);
                }
            } else if edeg.iter().all(|&d| d == 1) {
                let mut col = alloc::vec![Vec::new(); k];
                for (mono, c) in g.terms() {
                    let u = (0..k).find(|&u| mono.exponent(m + 1 + n + u) == 1).expect("degree one");
                    let exps: Vec<u32> = (0..n).map(|i| mono.exponent(m + 1 + i)).collect();
                    col[u].push((crate::monomial::Monomial::from_exponents(&exps).expect("fits"), c.clone()));
                }
                cols.push(col.into_iter().map(|t| Polynomial::from_terms(field, n, t)).collect());
            }
        }
        cols
    }
}

/// The `A`-block (variables `first..first + n`) of a graph-ring polynomial, as a polynomial over `A`.
fn restrict(g: &Polynomial, first: usize, n: usize) -> Polynomial {
    let terms = g
        .terms()
        .iter()
        .map(|(mono, c)| {
            let exps: Vec<u32> = (0..n).map(|i| mono.exponent(first + i)).collect();
            (crate::monomial::Monomial::from_exponents(&exps).expect("fits"), c.clone())
        })
        .collect();
    Polynomial::from_terms(g.field(), n, terms)
}

/// `J` as an `A`-module on the given generators; errors if they do not span `J`.
pub fn j_module_presentation(f: &RingMap, j: &IdealHandle, module_gens: &[Polynomial]) -> Result<JModule> {
    for g in module_gens {
        if !j.contains(g)? {
            return Err(invalid("module generator is not in J"));
        }
    }
    let span = Span::new(f, module_gens)?;
    let b = f.target();
    for h in j.generators() {
        if !span.contains(h)? {
            return Err(invalid(format!("module generators do not span J over A: {} is missing", b.show(h))));
        }
    }
    for y in b.vars() {
        for g in module_gens {
            if !span.contains(&(&y * g))? {
                return Err(invalid("module generators do not span J over A: the span is not an ideal of B"));
            }
        }
    }
    let module = FPModule::new(f.source().clone(), module_gens.len(), span.relations())?;
    Ok(JModule { module, generators: module_gens.to_vec() })
}

impl AmalgamDatum {
    /// Checks that `gens ⊆ J`, nilpotency in nilpotent mode, and in
    /// module-finite mode computes the `A`-module presentation of `J` on
    /// `module_gens` (default: `gens`).
    pub fn new(f: RingMap, j: IdealHandle, gens: Vec<Polynomial>, mode: Mode, module_gens: Option<Vec<Polynomial>>) -> Result<Self> {
        if !Arc::ptr_eq(j.ring(), f.target()) && !j.ring().same_cover(f.target()) {
            return Err(mismatch("J is not an ideal of the target of f"));
        }
        for g in &gens {
            if !j.contains(g)? {
                return Err(invalid(format!("subring generator {} is not in J", f.target().show(g))));
            }
        }
        let span_j = f.target().ideal(gens.clone())?;
        if !span_j.same_ideal(&j)? {
            return Err(invalid("subring generators do not generate J as an ideal"));
        }
        if mode.nilpotent {
            for g in &gens {
                if !is_nilpotent(g, f.target())? {
                    return Err(invalid(format!("{} is not nilpotent", f.target().show(g))));
                }
            }
        }
        let j_module = if mode.module_finite {
            let mg = module_gens.unwrap_or_else(|| gens.clone());
            Some(j_module_presentation(&f, &j, &mg)?)
        } else {
            None
        };
        Ok(AmalgamDatum { f, j, gens, mode, trust: Trust::Verify, construction: Construction::General, j_module, free_basis: None })
    }

    pub fn with_trust(mut self, trust: Trust) -> Self {
        self.trust = trust;
        self
    }

    /// Attach a certificate that `B` is free over `A` on `basis`: the basis spans `B`
    /// and has no relations.
    pub fn with_free_basis(mut self, basis: Vec<Polynomial>) -> Result<Self> {
        let span = Span::new(&self.f, &basis)?;
        let b = self.f.target();
        if !span.contains(&b.one())? || !b.vars().iter().all(|y| basis.iter().all(|e| span.contains(&(y * e)).unwrap_or(false))) {
            return Err(invalid("basis does not span B over A"));
        }
        let rel = FPModule::new(self.f.source().clone(), basis.len(), span.relations())?;
        if !rel.relations().is_empty() {
            return Err(invalid("basis elements satisfy a relation over A"));
        }
        self.free_basis = Some(basis);
        Ok(self)
    }

    pub fn a(&self) -> &Ring {
        self.f.source()
    }

    pub fn b(&self) -> &Ring {
        self.f.target()
    }

    pub fn f(&self) -> &RingMap {
        &self.f
    }

    pub fn j(&self) -> &IdealHandle {
        &self.j
    }

    pub fn subring_gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn trust(&self) -> Trust {
        self.trust
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn j_module(&self) -> Option<&JModule> {
        self.j_module.as_ref()
    }

    pub fn free_basis(&self) -> Option<&[Polynomial]> {
        self.free_basis.as_deref()
    }

    /// `f` is flat and integral by certificate: the identity, or `B` free of finite rank.
    pub fn flat_integral_certificate(&self) -> Option<&'static str> {
        if self.f.is_identity() || self.construction == Construction::Duplication {
            Some("identity")
        } else if self.free_basis.is_some() {
            Some("free basis")
        } else {
            None
        }
    }

    /// `kgr_A(a, J)`: over `A` with the module presentation when available,
    /// otherwise over `B` on the extended sequence, which has the same Koszul cohomology.
    pub fn j_grade(&self, a: &IdealHandle) -> Result<GradeValue> {
        match &self.j_module {
            Some(jm) => koszul_grade(a, &jm.module),
            None => self.j_grade_over_b(a),
        }
    }

    pub fn j_grade_over_b(&self, a: &IdealHandle) -> Result<GradeValue> {
        let ext = self.f.extend(a)?;
        koszul_grade(&ext, &FPModule::from_ideal(&self.j)?)
    }

    /// Generators of `J` have no constant term, and neither do the images of
    /// the variables of `A`: the graded stand-in for `J ⊆ Jac(B)` with `f` local.
    pub fn is_graded_local(&self) -> bool {
        let zero_const = |p: &Polynomial| self.b().field().is_zero(&self.b().reduce(p).constant_term());
        self.a().is_graded() && self.gens.iter().all(zero_const) && self.f.images().iter().all(zero_const)
    }
}

fn fresh_names(taken: &[String], count: usize) -> Vec<String> {
    let candidate = |i: usize, style: usize| match (count, style) {
        (1, 0) => "T".to_string(),
        (_, 0) => format!("T{}", i + 1),
        (_, s) => format!("T{}_{}", "_".repeat(s), i + 1),
    };
    for style in 0.. {
        let names: Vec<String> = (0..count).map(|i| candidate(i, style)).collect();
        if names.iter().all(|n| !taken.contains(n)) {
            return names;
        }
    }
    unreachable!()
}

/// Decide whether the `j_u` generate `0 × J`: every `y_k j_u` must lie in the
/// non-unital `f(A)`-algebra they generate.
pub fn verify_generation(d: &AmalgamDatum) -> Result<Generation> {
    if d.trust == Trust::Attested {
        return Ok(Generation::Attested);
    }
    let (a, b) = (d.a(), d.b());
    let (m, n, k) = (b.nvars(), a.nvars(), d.gens.len());
    let total = m + n + k;
    if total > MAX_VARS {
        return Err(Error::TooManyVariables(total));
    }
    let field = a.field();
    let mut g: Vec<Polynomial> = b.groebner_basis().iter().map(|p| p.shift(total, 0)).collect();
    for (i, img) in d.f.images().iter().enumerate() {
        g.push(&Polynomial::var(field, total, m + i) - &img.shift(total, 0));
    }
    for (u, j) in d.gens.iter().enumerate() {
        g.push(&Polynomial::var(field, total, m + n + u) - &j.shift(total, 0));
    }
    let order = MonomialOrder::Block(m);
    let gb = ideal_basis(field, total, order, &g, a.kernel())?;
    let bmask = if m == 0 { 0 } else { (1u32 << m) - 1 };
    let mut ideal_t: Vec<Polynomial> = gb.iter().filter(|p| p.support_mask() & bmask == 0).cloned().collect();
    ideal_t.extend((0..k).map(|u| Polynomial::var(field, total, m + n + u)));
    let ideal_t = ideal_basis(field, total, MonomialOrder::DegRevLex, &ideal_t, a.kernel())?;
    for y in 0..m {
        for j in &d.gens {
            let h = (&b.var(y) * j).shift(total, 0);
            let r = normal_form(&h, &gb, order, a.kernel());
            if r.support_mask() & bmask != 0 {
                return Ok(Generation::Failed);
            }
            if !normal_form(&r, &ideal_t, MonomialOrder::DegRevLex, a.kernel()).is_zero() {
                return Ok(Generation::Failed);
            }
        }
    }
    Ok(Generation::Verified)
}

#[derive(Clone, Debug)]
pub struct AmalgamRing {
    ring: Ring,
    cover: Ring,
    iota: RingMap,
    proj_a: RingMap,
    proj_b: RingMap,
    generation: Generation,
    datum: Arc<AmalgamDatum>,
}

fn component_maps(d: &AmalgamDatum, cover: &Ring) -> Result<(RingMap, RingMap)> {
    let (a, b) = (d.a(), d.b());
    let mut img_a = a.vars();
    img_a.extend(core::iter::repeat_n(a.zero(), d.gens.len()));
    let mut img_b = d.f.images().to_vec();
    img_b.extend(d.gens.iter().cloned());
    Ok((RingMap::new(cover.clone(), a.clone(), img_a)?, RingMap::new(cover.clone(), b.clone(), img_b)?))
}

/// Present `A ⋈^f J`.
pub fn build_amalgamation(d: AmalgamDatum) -> Result<AmalgamRing> {
    let (a, b) = (d.a().clone(), d.b().clone());
    let mut names = a.names().to_vec();
    names.extend(fresh_names(a.names(), d.gens.len()));
    if names.len() > MAX_VARS {
        return Err(Error::TooManyVariables(names.len()));
    }
    let cover = RingPresentation::polynomial(a.field(), names.clone(), a.kernel().clone())?;
    let (phi_a, phi_b) = component_maps(&d, &cover)?;
    let defining = phi_a.kernel()?.intersection(&phi_b.kernel()?)?;
    let ring = RingPresentation::quotient(a.field(), names, defining.generators().to_vec(), a.kernel().clone())?;
    let n = a.nvars();
    let iota = RingMap::new(a.clone(), ring.clone(), (0..n).map(|i| ring.var(i)).collect())?;
    let proj_a = RingMap::new(ring.clone(), a.clone(), phi_a.images().to_vec())?;
    let proj_b = RingMap::new(ring.clone(), b, phi_b.images().to_vec())?;
    let generation = verify_generation(&d)?;
    Ok(AmalgamRing { ring, cover, iota, proj_a, proj_b, generation, datum: Arc::new(d) })
}

/// `ker φ_A ∩ ker φ_B` recomputed as the kernel of one map into `A × B`,
/// presented as `k[x_A, y_B, z]` with `z` the idempotent `(1, 0)`.
pub fn defining_ideal_via_product(r: &AmalgamRing) -> Result<IdealHandle> {
    let d = &r.datum;
    let (a, b) = (d.a(), d.b());
    let (n, m) = (a.nvars(), b.nvars());
    let total = n + m + 1;
    let field = a.field();
    let mut names: Vec<String> = a.names().iter().map(|s| format!("{s}_a")).collect();
    names.extend(b.names().iter().map(|s| format!("{s}_b")));
    names.push("z".to_string());
    let z = Polynomial::var(field, total, n + m);
    let one_z = &Polynomial::one(field, total) - &z;
    let mut rels = alloc::vec![&(&z * &z) - &z];
    for k in 0..m {
        rels.push(&z * &Polynomial::var(field, total, n + k));
    }
    for i in 0..n {
        rels.push(&one_z * &Polynomial::var(field, total, i));
    }
    for g in a.groebner_basis() {
        rels.push(&z * &g.shift(total, 0));
    }
    for h in b.groebner_basis() {
        rels.push(&one_z * &h.shift(total, n));
    }
    let product = RingPresentation::quotient(field, names, rels, a.kernel().clone())?;
    let mut images = Vec::new();
    for (i, fx) in d.f.images().iter().enumerate() {
        images.push(&(&z * &Polynomial::var(field, total, i)) + &(&one_z * &fx.shift(total, n)));
    }
    for j in &d.gens {
        images.push(&one_z * &j.shift(total, n));
    }
    RingMap::new(r.cover.clone(), product, images)?.kernel()
}

impl AmalgamRing {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// The polynomial ring `k[x, T]` the presentation is a quotient of.
    pub fn cover(&self) -> &Ring {
        &self.cover
    }

    pub fn iota(&self) -> &RingMap {
        &self.iota
    }

    pub fn proj_a(&self) -> &RingMap {
        &self.proj_a
    }

    pub fn proj_b(&self) -> &RingMap {
        &self.proj_b
    }

    pub fn datum(&self) -> &AmalgamDatum {
        &self.datum
    }

    pub fn generation(&self) -> Generation {
        self.generation
    }

    /// The variables `T_u`.
    pub fn t_vars(&self) -> Vec<Polynomial> {
        let n = self.datum.a().nvars();
        (n..self.ring.nvars()).map(|i| self.ring.var(i)).collect()
    }

    /// The ideal of all variables, i.e. `𝔪'` for `𝔪` the graded maximal ideal of `A`.
    pub fn graded_maximal(&self) -> Result<IdealHandle> {
        self.ring.graded_maximal()
    }
}

/// `a^e`, generated by the `ι_A`-images of the generators of `a`.
pub fn extend_ideal(a: &IdealHandle, r: &AmalgamRing) -> Result<IdealHandle> {
    r.iota.extend(a)
}

/// `p' = p ⋈^f J`, generated by `ι_A(p)` and the `T_u`. Requires a primality certificate for `p`.
pub fn prime_p_prime(p: &IdealHandle, r: &AmalgamRing) -> Result<IdealHandle> {
    if !is_certified_prime(p)? {
        return Err(Error::NotDecidable(format!("no primality certificate for {}", p.describe())));
    }
    let mut g: Vec<Polynomial> = p.generators().iter().map(|x| r.iota.apply(x)).collect::<Result<_>>()?;
    g.extend(r.t_vars());
    r.ring.ideal(g)
}

/// `q̄^f = proj_B^{-1}(q)` for `q` not containing `J`.
pub fn prime_q_bar(q: &IdealHandle, r: &AmalgamRing) -> Result<IdealHandle> {
    if q.contains_ideal(r.datum.j())? {
        return Err(invalid("q contains J; its preimage is of the form p'"));
    }
    r.proj_b.contract(q)
}

/// `A ⊕ J` as an `A`-module.
pub fn amalgam_as_a_module(r: &AmalgamRing) -> Result<FPModule> {
    let jm = r.datum.j_module().ok_or_else(|| Error::NotDecidable("J has no A-module presentation (algebra mode)".into()))?;
    FPModule::free(r.datum.a(), 1)?.direct_sum(&jm.module)
}

/// `B = A ⋉ M` with `J = 0 ⋉ M`: one variable per generator of `M`,
/// relations from `M` and all products of the new variables.
pub fn trivial_extension(a: &Ring, m: &FPModule) -> Result<AmalgamDatum> {
    if !m.ring().same_cover(a) {
        return Err(mismatch("module is not over A"));
    }
    let n = a.nvars();
    let r = m.rank();
    let mut names = a.names().to_vec();
    names.extend(fresh_names(a.names(), r).into_iter().map(|s| s.replace('T', "e")));
    let total = n + r;
    if total > MAX_VARS {
        return Err(Error::TooManyVariables(total));
    }
    let field = a.field();
    let e = |i: usize| Polynomial::var(field, total, n + i);
    let mut rels: Vec<Polynomial> = a.groebner_basis().iter().map(|g| g.shift(total, 0)).collect();
    for col in m.relations() {
        let s = col.iter().enumerate().fold(Polynomial::zero(field, total), |acc, (i, c)| &acc + &(&c.shift(total, 0) * &e(i)));
        rels.push(s);
    }
    for i in 0..r {
        for j in i..r {
            rels.push(&e(i) * &e(j));
        }
    }
    let b = RingPresentation::quotient(field, names, rels, a.kernel().clone())?;
    let f = RingMap::new(a.clone(), b.clone(), (0..n).map(|i| b.var(i)).collect())?;
    let gens: Vec<Polynomial> = (0..r).map(|i| b.var(n + i)).collect();
    let j = b.ideal(gens.clone())?;
    let jm = JModule { module: m.clone(), generators: gens.clone() };
    let d = AmalgamDatum {
        f,
        j,
        gens,
        mode: Mode { module_finite: true, nilpotent: true },
        trust: Trust::Verify,
        construction: Construction::TrivialExtension,
        j_module: Some(jm),
        free_basis: None,
    };
    Ok(d)
}

/// `A ⋈ I`: `B = A`, `f = id`, `J = I`, module presentation from the syzygies of `I`.
pub fn duplication(a: &Ring, i: &IdealHandle) -> Result<AmalgamDatum> {
    if !Arc::ptr_eq(i.ring(), a) && !i.ring().same_cover(a) {
        return Err(mismatch("ideal is not in A"));
    }
    let f = RingMap::identity(a);
    let gens = i.generators().to_vec();
    let mut nilpotent = true;
    for g in &gens {
        nilpotent &= is_nilpotent(g, a)?;
    }
    let module = FPModule::from_ideal(i)?;
    Ok(AmalgamDatum {
        f,
        j: i.clone(),
        gens: gens.clone(),
        mode: Mode { module_finite: true, nilpotent },
        trust: Trust::Verify,
        construction: Construction::Duplication,
        j_module: Some(JModule { module, generators: gens }),
        free_basis: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::krull_dim;
    use crate::field::Field;
    use crate::groebner::Kernel;

    fn ring(names: &[&str], rels: &[&str]) -> Ring {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let k = Arc::new(Kernel::default());
        let base = RingPresentation::polynomial(Field::Rationals, names.clone(), k.clone()).unwrap();
        let rels = rels.iter().map(|r| base.parse(r).unwrap()).collect();
        RingPresentation::quotient(Field::Rationals, names, rels, k).unwrap()
    }

    fn ideal(r: &Ring, g: &[&str]) -> IdealHandle {
        r.ideal(g.iter().map(|s| r.parse(s).unwrap()).collect()).unwrap()
    }

    fn defining(r: &AmalgamRing, g: &[&str]) -> bool {
        let want = ideal(r.cover(), g);
        let got = r.cover().ideal(r.ring().defining().to_vec()).unwrap();
        got.same_ideal(&want).unwrap()
    }

    #[test]
    fn duplication_of_the_line() {
        let a = ring(&["x"], &[]);
        let r = build_amalgamation(duplication(&a, &ideal(&a, &["x"])).unwrap()).unwrap();
        assert!(defining(&r, &["T^2 - x*T"]));
        assert_eq!(r.generation(), Generation::Verified);
        let cross = defining_ideal_via_product(&r).unwrap();
        assert!(cross.same_ideal(&r.cover().ideal(r.ring().defining().to_vec()).unwrap()).unwrap());
        let m = amalgam_as_a_module(&r).unwrap();
        assert_eq!((m.rank(), m.relations().len()), (2, 0));
    }

    #[test]
    fn trivial_extension_by_free_module() {
        let a = ring(&["x"], &[]);
        let d = trivial_extension(&a, &FPModule::free(&a, 1).unwrap()).unwrap();
        assert_eq!(d.b().defining().len(), 1);
        let r = build_amalgamation(d).unwrap();
        assert!(defining(&r, &["T^2"]));
        assert_eq!(krull_dim(r.ring()), krull_dim(&a));
    }

    #[test]
    fn trivial_extension_over_the_field() {
        let k = ring(&[], &[]);
        let d = trivial_extension(&k, &FPModule::free(&k, 2).unwrap()).unwrap();
        let b = d.b();
        assert!(b.ideal(b.defining().to_vec()).unwrap().same_ideal(&ideal(b, &["e1^2", "e1*e2", "e2^2"])).unwrap());
    }

    #[test]
    fn trivial_extension_by_maximal_ideal() {
        let a = ring(&["x", "y"], &[]);
        let m = FPModule::from_ideal(&a.graded_maximal().unwrap()).unwrap();
        let d = trivial_extension(&a, &m).unwrap();
        let b = d.b().clone();
        assert!(b.is_zero_element(&b.parse("y*e1 - x*e2").unwrap()) || b.is_zero_element(&b.parse("x*e2 - y*e1").unwrap()));
        let r = build_amalgamation(d).unwrap();
        let cross = defining_ideal_via_product(&r).unwrap();
        assert!(cross.same_ideal(&r.cover().ideal(r.ring().defining().to_vec()).unwrap()).unwrap());
        let am = amalgam_as_a_module(&r).unwrap();
        assert_eq!((am.rank(), am.relations().len()), (3, 1));
    }

    #[test]
    fn non_cohen_macaulay_amalgam() {
        let a = ring(&["X"], &[]);
        let b = ring(&["X", "Y"], &[]);
        let f = RingMap::new(a.clone(), b.clone(), alloc::vec![b.parse("X").unwrap()]).unwrap();
        let j = ideal(&b, &["X", "Y"]);
        let d = AmalgamDatum::new(f, j.clone(), j.generators().to_vec(), Mode::default(), None).unwrap();
        let r = build_amalgamation(d).unwrap();
        assert_eq!(r.generation(), Generation::Verified);
        assert!(defining(&r, &["(X - T1)*T1", "(X - T1)*T2"]));
        let e = extend_ideal(&ideal(&a, &["X"]), &r).unwrap();
        assert!(e.same_ideal(&ideal(r.ring(), &["X"])).unwrap());
        let p0 = prime_p_prime(&a.zero_ideal(), &r).unwrap();
        assert!(p0.same_ideal(&ideal(r.ring(), &["T1", "T2"])).unwrap());
        // module-finite mode is refused: J is not finite over A
        let f = RingMap::new(a.clone(), b.clone(), alloc::vec![b.parse("X").unwrap()]).unwrap();
        let mf = Mode { module_finite: true, nilpotent: false };
        assert!(AmalgamDatum::new(f, j.clone(), j.generators().to_vec(), mf, None).is_err());
    }

    #[test]
    fn generation_can_fail() {
        let k = ring(&[], &[]);
        let b = ring(&["y", "z"], &[]);
        let f = RingMap::new(k, b.clone(), Vec::new()).unwrap();
        let j = ideal(&b, &["y"]);
        let d = AmalgamDatum::new(f, j, alloc::vec![b.parse("y").unwrap()], Mode::default(), None).unwrap();
        assert_eq!(verify_generation(&d).unwrap(), Generation::Failed);
        assert_eq!(verify_generation(&d.with_trust(Trust::Attested)).unwrap(), Generation::Attested);
    }

    #[test]
    fn primes_of_the_duplication() {
        let a = ring(&["x"], &[]);
        let r = build_amalgamation(duplication(&a, &ideal(&a, &["x"])).unwrap()).unwrap();
        let p = prime_p_prime(&ideal(&a, &["x"]), &r).unwrap();
        assert!(p.same_ideal(&ideal(r.ring(), &["x", "T"])).unwrap());
        let q = ideal(&a, &["x - 1"]);
        let qb = prime_q_bar(&q, &r).unwrap();
        for g in qb.generators() {
            assert!(q.contains(&r.proj_b().apply(g).unwrap()).unwrap());
        }
        assert!(prime_q_bar(&ideal(&a, &["x"]), &r).is_err());
        assert!(prime_p_prime(&ideal(&a, &["x^2"]), &r).is_err());
    }

    #[test]
    fn duplication_along_zero_is_a() {
        let a = ring(&["x", "y"], &[]);
        let r = build_amalgamation(duplication(&a, &a.zero_ideal()).unwrap()).unwrap();
        assert_eq!(r.ring().nvars(), 2);
        assert!(r.ring().defining().is_empty());
    }

    #[test]
    fn free_flat_certificate() {
        let a = ring(&["x"], &[]);
        let b = ring(&["x", "s"], &["s^2 - x"]);
        let f = RingMap::new(a.clone(), b.clone(), alloc::vec![b.parse("x").unwrap()]).unwrap();
        let j = ideal(&b, &["s"]);
        let mf = Mode { module_finite: true, nilpotent: false };
        assert!(AmalgamDatum::new(f.clone(), j.clone(), alloc::vec![b.parse("s").unwrap()], mf, None).is_err());
        let d = AmalgamDatum::new(f, j, alloc::vec![b.parse("s").unwrap()], mf, Some(alloc::vec![b.parse("s").unwrap(), b.parse("x").unwrap()])).unwrap();
        let jm = d.j_module().unwrap();
        assert_eq!(jm.module.rank(), 2);
        assert!(d.clone().with_free_basis(alloc::vec![b.parse("1").unwrap()]).is_err());
        let d = d.with_free_basis(alloc::vec![b.parse("1").unwrap(), b.parse("s").unwrap()]).unwrap();
        assert_eq!(d.flat_integral_certificate(), Some("free basis"));
        let r = build_amalgamation(d).unwrap();
        assert_eq!(krull_dim(r.ring()), krull_dim(&a));
    }
}
