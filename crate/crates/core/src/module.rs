//! Finitely presented modules `R^r / N`, maps between them, and finite complexes.
//!
//! Vectors are dense `Vec<Polynomial>` of length `rank`. Submodule bases are
//! computed in the polynomial cover with the defining ideal folded in as
//! `I * e_i`, under position-over-term degrevlex.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, mismatch, Error, Result};
use crate::groebner::Engine;
use crate::modvec::ModVec;
use crate::monomial::{MonomialOrder, TermOrder};
use crate::poly::Polynomial;
use crate::ring::{IdealHandle, Ring};

const ORDER: TermOrder = TermOrder::pot(MonomialOrder::DegRevLex);

#[derive(Clone)]
pub struct FPModule {
    ring: Ring,
    rank: usize,
    relations: Vec<Vec<Polynomial>>,
    gb: Arc<Vec<ModVec>>,
}

impl fmt::Debug for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<String> = self
            .relations
            .iter()
            .map(|c| {
                let e: Vec<String> = c.iter().map(|p| self.ring.show(p)).collect();
                format!("[{}]", e.join(", "))
            })
            .collect();
        write!(f, "R^{} / <{}>", self.rank, cols.join(", "))
    }
}

/// `rel * e_i` for every defining relation and every component below `rank`.
fn ambient_relations(ring: &Ring, rank: usize, offset: u32) -> Vec<ModVec> {
    let mut out = Vec::new();
    for i in 0..rank {
        for g in ring.groebner_basis() {
            out.push(ModVec::from_poly(g, offset + i as u32, &ORDER));
        }
    }
    out
}

fn engine(ring: &Ring) -> Engine<'_> {
    Engine::new(ring.field(), ORDER, ring.kernel())
}

fn check_vec(ring: &Ring, v: &[Polynomial], rank: usize) -> Result<()> {
    if v.len() != rank {
        return Err(mismatch("vector length differs from module rank"));
    }
    for p in v {
        ring.check(p)?;
    }
    Ok(())
}

impl FPModule {
    /// `relations` are columns of length `rank`; entries are reduced modulo the ring.
    pub fn new(ring: Ring, rank: usize, relations: Vec<Vec<Polynomial>>) -> Result<Self> {
        for c in &relations {
            check_vec(&ring, c, rank)?;
        }
        let relations: Vec<Vec<Polynomial>> = relations
            .into_iter()
            .map(|c| c.iter().map(|p| ring.reduce(p)).collect::<Vec<_>>())
            .filter(|c: &Vec<Polynomial>| c.iter().any(|p| !p.is_zero()))
            .collect();
        let mut gens: Vec<ModVec> = relations.iter().map(|c| ModVec::from_dense(c, &ORDER)).collect();
        gens.extend(ambient_relations(&ring, rank, 0));
        let gb = engine(&ring).groebner(gens)?;
        Ok(FPModule { ring, rank, relations, gb: Arc::new(gb) })
    }

    pub fn free(ring: &Ring, rank: usize) -> Result<Self> {
        FPModule::new(ring.clone(), rank, Vec::new())
    }

    pub fn zero(ring: &Ring) -> Self {
        FPModule { ring: ring.clone(), rank: 0, relations: Vec::new(), gb: Arc::new(Vec::new()) }
    }

    /// `R / a`.
    pub fn cyclic(ideal: &IdealHandle) -> Result<Self> {
        let rels = ideal.generators().iter().map(|g| alloc::vec![g.clone()]).collect();
        FPModule::new(ideal.ring().clone(), 1, rels)
    }

    /// The ideal `a` as a module: generators `a_1..a_k`, relations their syzygies.
    pub fn from_ideal(ideal: &IdealHandle) -> Result<Self> {
        let ring = ideal.ring();
        let gens: Vec<Vec<Polynomial>> = ideal.generators().iter().map(|g| alloc::vec![g.clone()]).collect();
        syzygies(&gens, &FPModule::free(ring, 1)?)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &[Vec<Polynomial>] {
        &self.relations
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn unit_vector(&self, i: usize) -> Vec<Polynomial> {
        let mut v = alloc::vec![self.ring.zero(); self.rank];
        v[i] = self.ring.one();
        v
    }

    pub fn normal_form(&self, v: &[Polynomial]) -> Result<Vec<Polynomial>> {
        check_vec(&self.ring, v, self.rank)?;
        let refs: Vec<&ModVec> = self.gb.iter().collect();
        let r = engine(&self.ring).reduce(ModVec::from_dense(v, &ORDER), &refs);
        Ok(r.to_dense(self.ring.field(), self.ring.nvars(), self.rank))
    }

    pub fn is_zero_element(&self, v: &[Polynomial]) -> Result<bool> {
        Ok(self.normal_form(v)?.iter().all(|p| p.is_zero()))
    }

    /// `M = 0`: every basis vector lies in the relation submodule.
    pub fn is_zero(&self) -> bool {
        (0..self.rank).all(|i| self.is_zero_element(&self.unit_vector(i)).expect("own vector"))
    }

    pub fn direct_sum(&self, other: &FPModule) -> Result<FPModule> {
        if !Arc::ptr_eq(&self.ring, &other.ring) && !self.ring.same_cover(&other.ring) {
            return Err(mismatch("modules over different rings"));
        }
        let (a, b) = (self.rank, other.rank);
        let mut rels = Vec::new();
        for c in &self.relations {
            let mut v = c.clone();
            v.extend(core::iter::repeat_n(self.ring.zero(), b));
            rels.push(v);
        }
        for c in &other.relations {
            let mut v = alloc::vec![self.ring.zero(); a];
            v.extend(c.iter().cloned());
            rels.push(v);
        }
        // component-disjoint bases union to a basis
        let mut gb: Vec<ModVec> = self.gb.iter().cloned().collect();
        gb.extend(other.gb.iter().map(|v| v.map_components(&ORDER, |c| c + a as u32)));
        gb.sort_by(|x, y| {
            let (s, t) = (&x.terms()[0], &y.terms()[0]);
            ORDER.cmp(s.comp, &s.mono, t.comp, &t.mono)
        });
        Ok(FPModule { ring: self.ring.clone(), rank: a + b, relations: rels, gb: Arc::new(gb) })
    }

    /// `M^n`.
    pub fn power(&self, n: usize) -> Result<FPModule> {
        let mut acc = FPModule::zero(&self.ring);
        for _ in 0..n {
            acc = acc.direct_sum(self)?;
        }
        Ok(acc)
    }

    /// Same generators, extra relations.
    pub fn with_relations(&self, extra: &[Vec<Polynomial>]) -> Result<FPModule> {
        let mut rels = self.relations.clone();
        rels.extend(extra.iter().cloned());
        FPModule::new(self.ring.clone(), self.rank, rels)
    }

    /// `v` lies in the submodule generated by `gens` (modulo the relations).
    pub fn in_span(&self, v: &[Polynomial], gens: &[Vec<Polynomial>]) -> Result<bool> {
        self.with_relations(gens)?.is_zero_element(v)
    }

    /// `ann(M)`: kernel of `R -> M^r`, `1 -> (e_1, .., e_r)`.
    pub fn annihilator(&self) -> Result<IdealHandle> {
        let r = self.rank;
        let big = self.power(r)?;
        let mut v = Vec::with_capacity(r * r);
        for i in 0..r {
            v.extend(self.unit_vector(i));
        }
        let k = kernel_generators(&[v], &big)?;
        self.ring.ideal(k.into_iter().map(|mut c| c.remove(0)).collect())
    }
}

/// Generators of `{a in R^k : sum a_j g_j = 0 in M}`.
pub fn kernel_generators(gens: &[Vec<Polynomial>], m: &FPModule) -> Result<Vec<Vec<Polynomial>>> {
    let ring = &m.ring;
    let r = m.rank;
    let k = gens.len();
    for g in gens {
        check_vec(ring, g, r)?;
    }
    let mut input: Vec<ModVec> = Vec::with_capacity(k + m.gb.len());
    for (j, g) in gens.iter().enumerate() {
        let mut dense = g.clone();
        dense.extend(core::iter::repeat_n(ring.zero(), k));
        dense[r + j] = ring.one();
        input.push(ModVec::from_dense(&dense, &ORDER));
    }
    input.extend(m.gb.iter().cloned());
    // defining ideal on the new coordinates keeps the kernel reduced modulo I
    input.extend(ambient_relations(ring, k, r as u32));
    let gb = engine(ring).groebner(input)?;
    let mut out = Vec::new();
    for v in gb {
        if (v.terms()[0].comp as usize) < r {
            continue;
        }
        let proj = v.map_components(&ORDER, |c| c - r as u32);
        let dense: Vec<Polynomial> = proj.to_dense(ring.field(), ring.nvars(), k).iter().map(|p| ring.reduce(p)).collect();
        if dense.iter().any(|p| !p.is_zero()) {
            out.push(dense);
        }
    }
    Ok(out)
}

/// Presentation of the kernel of `R^k -> M` sending `e_j` to `gens[j]`.
pub fn syzygies(gens: &[Vec<Polynomial>], m: &FPModule) -> Result<FPModule> {
    let k = kernel_generators(gens, m)?;
    FPModule::new(m.ring.clone(), gens.len(), k)
}

/// A homomorphism given by the images of the source generators.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: FPModule,
    target: FPModule,
    columns: Vec<Vec<Polynomial>>,
}

impl ModuleMap {
    /// Checks that every source relation maps into the target relations.
    pub fn new(source: FPModule, target: FPModule, columns: Vec<Vec<Polynomial>>) -> Result<Self> {
        let map = Self::new_unchecked(source, target, columns)?;
        for rel in &map.source.relations {
            if !map.target.is_zero_element(&map.apply_raw(rel))? {
                return Err(invalid("module map is not well defined"));
            }
        }
        Ok(map)
    }

    pub(crate) fn new_unchecked(source: FPModule, target: FPModule, columns: Vec<Vec<Polynomial>>) -> Result<Self> {
        if columns.len() != source.rank {
            return Err(mismatch("need one column per source generator"));
        }
        for c in &columns {
            check_vec(&target.ring, c, target.rank)?;
        }
        Ok(ModuleMap { source, target, columns })
    }

    pub fn source(&self) -> &FPModule {
        &self.source
    }

    pub fn target(&self) -> &FPModule {
        &self.target
    }

    pub fn columns(&self) -> &[Vec<Polynomial>] {
        &self.columns
    }

    fn apply_raw(&self, v: &[Polynomial]) -> Vec<Polynomial> {
        let ring = &self.target.ring;
        let mut out = alloc::vec![ring.zero(); self.target.rank];
        for (a, col) in v.iter().zip(&self.columns) {
            if a.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(col) {
                *o = &*o + &(a * c);
            }
        }
        out
    }

    pub fn apply(&self, v: &[Polynomial]) -> Result<Vec<Polynomial>> {
        check_vec(&self.source.ring, v, self.source.rank)?;
        self.target.normal_form(&self.apply_raw(v))
    }

    pub fn is_zero(&self) -> Result<bool> {
        for c in &self.columns {
            if !self.target.is_zero_element(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if other.source.rank != self.target.rank {
            return Err(mismatch("maps do not compose"));
        }
        let cols = self.columns.iter().map(|c| other.apply_raw(c)).collect();
        ModuleMap::new_unchecked(self.source.clone(), other.target.clone(), cols)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `d_i : C_i -> C_{i+1}`.
    Cochain,
    /// `d_i : C_{i+1} -> C_i`.
    Chain,
}

#[derive(Clone, Debug)]
pub struct FiniteComplex {
    modules: Vec<FPModule>,
    maps: Vec<ModuleMap>,
    direction: Direction,
}

#[derive(Clone, Debug)]
pub struct Homology {
    pub module: FPModule,
    /// Kernel generators, as vectors of the complex term.
    pub generators: Vec<Vec<Polynomial>>,
    pub is_zero: bool,
}

impl FiniteComplex {
    /// Checks shapes and that consecutive composites vanish.
    pub fn new(modules: Vec<FPModule>, maps: Vec<ModuleMap>, direction: Direction) -> Result<Self> {
        let c = Self::new_unchecked(modules, maps, direction)?;
        for w in c.maps.windows(2) {
            let (first, second) = match direction {
                Direction::Cochain => (&w[0], &w[1]),
                Direction::Chain => (&w[1], &w[0]),
            };
            if !first.then(second)?.is_zero()? {
                return Err(invalid("consecutive differentials do not compose to zero"));
            }
        }
        Ok(c)
    }

    pub(crate) fn new_unchecked(modules: Vec<FPModule>, maps: Vec<ModuleMap>, direction: Direction) -> Result<Self> {
        if modules.is_empty() || maps.len() + 1 != modules.len() {
            return Err(invalid("a complex of n+1 terms needs n maps"));
        }
        for (i, d) in maps.iter().enumerate() {
            let (s, t) = match direction {
                Direction::Cochain => (i, i + 1),
                Direction::Chain => (i + 1, i),
            };
            if d.source.rank != modules[s].rank || d.target.rank != modules[t].rank {
                return Err(mismatch("differential does not match complex terms"));
            }
        }
        Ok(FiniteComplex { modules, maps, direction })
    }

    /// Highest index.
    pub fn length(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn modules(&self) -> &[FPModule] {
        &self.modules
    }

    pub fn maps(&self) -> &[ModuleMap] {
        &self.maps
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    fn incoming_outgoing(&self, i: usize) -> (Option<&ModuleMap>, Option<&ModuleMap>) {
        let l = self.length();
        match self.direction {
            Direction::Cochain => (if i > 0 { self.maps.get(i - 1) } else { None }, if i < l { self.maps.get(i) } else { None }),
            Direction::Chain => (if i < l { self.maps.get(i) } else { None }, if i > 0 { self.maps.get(i - 1) } else { None }),
        }
    }

    fn cycles(&self, i: usize) -> Result<Vec<Vec<Polynomial>>> {
        let term = &self.modules[i];
        match self.incoming_outgoing(i).1 {
            Some(d) => kernel_generators(&d.columns, &d.target),
            None => Ok((0..term.rank).map(|j| term.unit_vector(j)).collect()),
        }
    }

    fn boundaries(&self, i: usize) -> Vec<Vec<Polynomial>> {
        match self.incoming_outgoing(i).0 {
            Some(d) => d.columns.clone(),
            None => Vec::new(),
        }
    }

    /// Whether the `i`-th homology vanishes, by testing each cycle generator
    /// for membership in boundaries plus relations.
    pub fn homology_is_zero(&self, i: usize) -> Result<bool> {
        if i > self.length() {
            return Err(Error::IndexOutOfRange { index: i, max: self.length() });
        }
        let cycles = self.cycles(i)?;
        if cycles.is_empty() {
            return Ok(true);
        }
        let quotient = self.modules[i].with_relations(&self.boundaries(i))?;
        for z in &cycles {
            if !quotient.is_zero_element(z)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Presentation of `ker / im` at index `i`.
    pub fn homology(&self, i: usize) -> Result<Homology> {
        if i > self.length() {
            return Err(Error::IndexOutOfRange { index: i, max: self.length() });
        }
        let cycles = self.cycles(i)?;
        let quotient = self.modules[i].with_relations(&self.boundaries(i))?;
        let mut is_zero = true;
        for z in &cycles {
            if !quotient.is_zero_element(z)? {
                is_zero = false;
                break;
            }
        }
        let module = syzygies(&cycles, &quotient)?;
        Ok(Homology { module, generators: cycles, is_zero })
    }
}

/// Truncated free resolution `F_0 <- F_1 <- ... <- F_depth` of `M`, as a chain complex
/// of free modules. Stops early once a kernel is zero.
pub fn free_resolution_steps(m: &FPModule, depth_limit: usize) -> Result<FiniteComplex> {
    if depth_limit == 0 {
        return Err(invalid("depth limit must be at least 1"));
    }
    let ring = m.ring();
    let mut modules = alloc::vec![FPModule::free(ring, m.rank)?];
    let mut maps: Vec<ModuleMap> = Vec::new();
    let mut cols: Vec<Vec<Polynomial>> = m.relations.clone();
    for _ in 0..depth_limit {
        if cols.is_empty() {
            break;
        }
        let src = FPModule::free(ring, cols.len())?;
        let tgt = modules.last().unwrap().clone();
        let next = kernel_generators(&cols, &tgt)?;
        maps.push(ModuleMap::new_unchecked(src.clone(), tgt, cols)?);
        modules.push(src);
        cols = next;
    }
    FiniteComplex::new_unchecked(modules, maps, Direction::Chain)
}
