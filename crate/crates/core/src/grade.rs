//! Koszul grade through the Hom-Koszul cochain complex, and an Ext-based
//! grade computed from a free resolution of `R/a`.

use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::module::{free_resolution_steps, Direction, FPModule, FiniteComplex, ModuleMap};
use crate::poly::Polynomial;
use crate::ring::IdealHandle;

/// A natural number or `∞`. Used for grades and heights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GradeValue {
    Finite(u32),
    Infinite,
}

pub type HeightValue = GradeValue;

impl GradeValue {
    pub fn finite(self) -> Option<u32> {
        match self {
            GradeValue::Finite(n) => Some(n),
            GradeValue::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == GradeValue::Infinite
    }
}

impl From<u32> for GradeValue {
    fn from(n: u32) -> Self {
        GradeValue::Finite(n)
    }
}

impl fmt::Display for GradeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradeValue::Finite(n) => write!(f, "{n}"),
            GradeValue::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for GradeValue {
    fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        match self {
            GradeValue::Finite(n) => s.serialize_u32(*n),
            GradeValue::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for GradeValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = GradeValue;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or \"inf\"")
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> core::result::Result<GradeValue, E> {
                u32::try_from(v).map(GradeValue::Finite).map_err(E::custom)
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> core::result::Result<GradeValue, E> {
                if v == "inf" {
                    Ok(GradeValue::Infinite)
                } else {
                    Err(E::custom("expected \"inf\""))
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Subsets of `0..l` of size `k` as bitmasks, in increasing numeric order.
fn subsets(l: usize, k: usize) -> Vec<u32> {
    (0u32..(1u32 << l)).filter(|m| m.count_ones() as usize == k).collect()
}

/// `Hom(K(x), M)` as a cochain complex `M^{C(l,0)} -> M^{C(l,1)} -> ... -> M^{C(l,l)}`.
/// The differential sends the `(T, s)` generator to `sum_{x not in T} ± x e_{(T ∪ x, s)}`,
/// the sign being `(-1)^{position of x in T ∪ x}`.
pub fn hom_koszul_complex(xs: &[Polynomial], m: &FPModule) -> Result<FiniteComplex> {
    let l = xs.len();
    if l > 16 {
        return Err(invalid("Koszul complex on more than 16 elements"));
    }
    let ring = m.ring();
    for x in xs {
        ring.check(x)?;
    }
    let r = m.rank();
    let levels: Vec<Vec<u32>> = (0..=l).map(|k| subsets(l, k)).collect();
    let modules: Vec<FPModule> = levels.iter().map(|lv| m.power(lv.len())).collect::<Result<_>>()?;
    let mut maps = Vec::with_capacity(l);
    for i in 0..l {
        let (src, tgt) = (&levels[i], &levels[i + 1]);
        let mut cols = Vec::with_capacity(src.len() * r);
        for &t in src {
            for s in 0..r {
                let mut col = alloc::vec![ring.zero(); tgt.len() * r];
                for v in 0..l {
                    if t & (1 << v) != 0 {
                        continue;
                    }
                    let big = t | (1 << v);
                    let pos = (big & ((1 << v) - 1)).count_ones();
                    let block = tgt.binary_search(&big).expect("subset present");
                    col[block * r + s] = if pos % 2 == 0 { xs[v].clone() } else { -&xs[v] };
                }
                cols.push(col);
            }
        }
        maps.push(ModuleMap::new_unchecked(modules[i].clone(), modules[i + 1].clone(), cols)?);
    }
    FiniteComplex::new_unchecked(modules, maps, Direction::Cochain)
}

/// Least `i` with `H^i(Hom(K(x), M)) ≠ 0` for the given generators `x` of `a`.
///
/// When `M = aM` every cohomology vanishes and the answer is `∞`; otherwise
/// the top cohomology `M/aM` is nonzero and bounds the search.
pub fn koszul_grade(a: &IdealHandle, m: &FPModule) -> Result<GradeValue> {
    let xs = a.generators();
    let l = xs.len();
    let top = m.with_relations(&scaled_generators(xs, m))?;
    if top.is_zero() {
        return Ok(GradeValue::Infinite);
    }
    if l == 0 {
        return Ok(GradeValue::Finite(0));
    }
    let c = hom_koszul_complex(xs, m)?;
    for i in 0..l {
        if !c.homology_is_zero(i)? {
            return Ok(GradeValue::Finite(i as u32));
        }
    }
    Ok(GradeValue::Finite(l as u32))
}

/// `x_j e_s` for every generator and every basis vector of `M`: spans `aM`.
fn scaled_generators(xs: &[Polynomial], m: &FPModule) -> Vec<Vec<Polynomial>> {
    let mut out = Vec::new();
    for x in xs {
        for s in 0..m.rank() {
            let mut v = alloc::vec![m.ring().zero(); m.rank()];
            v[s] = x.clone();
            out.push(v);
        }
    }
    out
}

/// Least `i` with `Ext^i(R/a, M) ≠ 0`, searching `i <= #generators of a`.
/// Returns `∞` when none of those Ext modules is nonzero.
pub fn ext_grade(a: &IdealHandle, m: &FPModule) -> Result<GradeValue> {
    if a.is_unit() {
        return Err(invalid("ext grade needs a proper ideal"));
    }
    if m.is_zero() {
        return Err(invalid("ext grade needs a nonzero module"));
    }
    let l = a.generators().len();
    let res = free_resolution_steps(&FPModule::cyclic(a)?, l + 1)?;
    let hom = hom_into(&res, m)?;
    for i in 0..=l.min(hom.length()) {
        if !hom.homology_is_zero(i)? {
            return Ok(GradeValue::Finite(i as u32));
        }
    }
    Ok(GradeValue::Infinite)
}

/// `Hom(F, M)` for a chain complex `F` of free modules.
fn hom_into(res: &FiniteComplex, m: &FPModule) -> Result<FiniteComplex> {
    let ring = m.ring();
    let r = m.rank();
    let modules: Vec<FPModule> = res.modules().iter().map(|f| m.power(f.rank())).collect::<Result<_>>()?;
    let mut maps = Vec::new();
    for (i, d) in res.maps().iter().enumerate() {
        // d : F_{i+1} -> F_i, columns indexed by c, rows by j
        let (a, b) = (d.target().rank(), d.source().rank());
        let mut cols = Vec::with_capacity(a * r);
        for j in 0..a {
            for s in 0..r {
                let mut col = alloc::vec![ring.zero(); b * r];
                for c in 0..b {
                    col[c * r + s] = d.columns()[c][j].clone();
                }
                cols.push(col);
            }
        }
        maps.push(ModuleMap::new_unchecked(modules[i].clone(), modules[i + 1].clone(), cols)?);
    }
    FiniteComplex::new_unchecked(modules, maps, Direction::Cochain)
}
