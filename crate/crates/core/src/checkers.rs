//! Cohen-Macaulay checks over finite ideal families, and the transfer
//! criteria for amalgamations evaluated as row-wise biconditionals.
//!
//! "CM in the sense of a family" means `kgr(a) = ht(a)` for every member.
//! Universal statements ("for every ideal") are never claimed.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::amalgam::{extend_ideal, prime_p_prime, AmalgamDatum, AmalgamRing};
use crate::dimension::{height, krull_dim, minimal_primes};
use crate::error::{Error, Result};
use crate::grade::{koszul_grade, GradeValue, HeightValue};
use crate::module::FPModule;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::{IdealHandle, Ring};

pub const SAMPLE_COUNT: usize = 25;
pub const SAMPLE_DEGREE: u32 = 3;
pub const SAMPLE_SEED: u64 = 42;
const SAMPLE_MAX_GENS: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FamilyKind {
    MaximalGraded,
    ExplicitList,
    MonomialSample { count: usize, degree_bound: u32, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct IdealFamily {
    ring: Ring,
    members: Vec<IdealHandle>,
    kind: FamilyKind,
}

impl IdealFamily {
    pub fn maximal_graded(ring: &Ring) -> Result<Self> {
        Ok(IdealFamily { ring: ring.clone(), members: alloc::vec![ring.graded_maximal()?], kind: FamilyKind::MaximalGraded })
    }

    pub fn explicit(ring: &Ring, members: Vec<IdealHandle>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Invalid("an ideal family needs at least one member".into()));
        }
        if members.iter().any(|m| !m.ring().same_cover(ring)) {
            return Err(crate::error::mismatch("family member is not an ideal of the family's ring"));
        }
        Ok(IdealFamily { ring: ring.clone(), members, kind: FamilyKind::ExplicitList })
    }

    /// `count` monomial ideals with 1 to 3 generators of degree 1 to `degree_bound`,
    /// drawn from ChaCha8 seeded with `seed`. Over a ring without variables the
    /// family is `{(0)}`.
    pub fn monomial_sample(ring: &Ring, count: usize, degree_bound: u32, seed: u64) -> Result<Self> {
        let kind = FamilyKind::MonomialSample { count, degree_bound, seed };
        let n = ring.nvars();
        if n == 0 || count == 0 || degree_bound == 0 {
            return Ok(IdealFamily { ring: ring.clone(), members: alloc::vec![ring.zero_ideal()], kind });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut members = Vec::with_capacity(count);
        for _ in 0..count {
            let ngens = 1 + rng.next_u32() % SAMPLE_MAX_GENS;
            let mut gens = Vec::new();
            for _ in 0..ngens {
                let d = 1 + rng.next_u32() % degree_bound;
                let mut exps = alloc::vec![0u32; n];
                for _ in 0..d {
                    exps[(rng.next_u32() as usize) % n] += 1;
                }
                let m = Monomial::from_exponents(&exps)?;
                gens.push(Polynomial::monomial(ring.field(), m, ring.field().one()));
            }
            members.push(ring.ideal(gens)?);
        }
        Ok(IdealFamily { ring: ring.clone(), members, kind })
    }

    /// The default sample: 25 ideals, degree at most 3, seed 42.
    pub fn default_sample(ring: &Ring) -> Result<Self> {
        Self::monomial_sample(ring, SAMPLE_COUNT, SAMPLE_DEGREE, SAMPLE_SEED)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn members(&self) -> &[IdealHandle] {
        &self.members
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }
}

/// First 16 hex digits of the SHA-256 of the reduced Gröbner basis as text.
pub fn fingerprint(a: &IdealHandle) -> String {
    let mut h = Sha256::new();
    h.update(a.ring().describe().as_bytes());
    for g in a.groebner_basis() {
        h.update(b"|");
        h.update(a.ring().show(g).as_bytes());
    }
    let digest = h.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "state", content = "reason")]
pub enum RowStatus {
    Decided,
    /// Height not decidable by the prime decider.
    Skipped(String),
    /// Budget exhausted or the recheck disagreed.
    Failed(String),
}

impl RowStatus {
    fn from_error(e: &Error) -> RowStatus {
        match e {
            Error::NotDecidable(why) => RowStatus::Skipped(why.clone()),
            other => RowStatus::Failed(other.to_string()),
        }
    }

    pub fn is_decided(&self) -> bool {
        *self == RowStatus::Decided
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmRow {
    pub ideal: String,
    pub fingerprint: String,
    pub kgr: Option<GradeValue>,
    pub ht: Option<HeightValue>,
    pub equal: Option<bool>,
    pub rechecked: bool,
    pub status: RowStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Verdict {
    CmOverFamily,
    Counterexample { witness: String, kgr: GradeValue, ht: HeightValue },
    /// Some row failed; no verdict either way.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmReport {
    pub ring: String,
    pub rows: Vec<CmRow>,
    pub verdict: Verdict,
    pub annotations: Vec<String>,
}

impl CmReport {
    pub fn is_cm(&self) -> bool {
        self.verdict == Verdict::CmOverFamily
    }

    pub fn resource_exhausted(&self) -> bool {
        self.rows.iter().any(|r| matches!(&r.status, RowStatus::Failed(w) if w.contains("budget")))
    }
}

/// Every tenth row (starting with the first) is recomputed on reversed generators.
fn recheck_index(i: usize) -> bool {
    i % 10 == 0
}

fn reversed(a: &IdealHandle) -> Result<IdealHandle> {
    let mut g = a.generators().to_vec();
    g.reverse();
    a.ring().ideal(g)
}

fn grade_and_height(a: &IdealHandle) -> (Option<GradeValue>, Option<HeightValue>, RowStatus) {
    let free = match FPModule::free(a.ring(), 1) {
        Ok(m) => m,
        Err(e) => return (None, None, RowStatus::from_error(&e)),
    };
    let k = match koszul_grade(a, &free) {
        Ok(k) => k,
        Err(e) => return (None, None, RowStatus::from_error(&e)),
    };
    match height(a) {
        Ok(h) => (Some(k), Some(h), RowStatus::Decided),
        Err(e) => (Some(k), None, RowStatus::from_error(&e)),
    }
}

fn cm_row(i: usize, a: &IdealHandle) -> CmRow {
    let (kgr, ht, mut status) = grade_and_height(a);
    let mut rechecked = false;
    if recheck_index(i) && status.is_decided() {
        rechecked = true;
        match reversed(a) {
            Ok(b) => {
                let (k2, h2, _) = grade_and_height(&b);
                if (k2, h2) != (kgr, ht) {
                    status = RowStatus::Failed("recheck with reversed generators disagrees".into());
                }
            }
            Err(e) => status = RowStatus::Failed(e.to_string()),
        }
    }
    let equal = match (kgr, ht, status.is_decided()) {
        (Some(k), Some(h), true) => Some(k == h),
        _ => None,
    };
    CmRow { ideal: a.describe(), fingerprint: fingerprint(a), kgr, ht, equal, rechecked, status }
}

fn verdict_of(rows: &[CmRow]) -> Verdict {
    if rows.iter().any(|r| matches!(r.status, RowStatus::Failed(_))) {
        return Verdict::Inconclusive;
    }
    match rows.iter().find(|r| r.equal == Some(false)) {
        Some(r) => Verdict::Counterexample { witness: r.ideal.clone(), kgr: r.kgr.expect("decided"), ht: r.ht.expect("decided") },
        None => Verdict::CmOverFamily,
    }
}

fn cm_report_for(ring: &Ring, members: &[IdealHandle]) -> CmReport {
    let rows: Vec<CmRow> = members.iter().enumerate().map(|(i, a)| cm_row(i, a)).collect();
    let verdict = verdict_of(&rows);
    let mut annotations = Vec::new();
    let skipped = rows.iter().filter(|r| matches!(r.status, RowStatus::Skipped(_))).count();
    if skipped > 0 {
        annotations.push(format!("{skipped} row(s) skipped: height not decidable"));
    }
    annotations.push("verdict is over the family only".to_string());
    CmReport { ring: ring.describe(), rows, verdict, annotations }
}

/// `kgr(a) = ht(a)` row by row over the family.
pub fn cm_in_sense_of(ring: &Ring, family: &IdealFamily) -> CmReport {
    if !family.ring().same_cover(ring) {
        let rows = family
            .members()
            .iter()
            .map(|a| CmRow {
                ideal: a.describe(),
                fingerprint: fingerprint(a),
                kgr: None,
                ht: None,
                equal: None,
                rechecked: false,
                status: RowStatus::Failed("family is over a different ring".into()),
            })
            .collect();
        return CmReport { ring: ring.describe(), rows, verdict: Verdict::Inconclusive, annotations: Vec::new() };
    }
    cm_report_for(ring, family.members())
}

/// Both sides of the maximal-ideal criterion for a graded-local module-finite datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalReport {
    pub inapplicable: Option<String>,
    pub kgr_amalgam: Option<GradeValue>,
    pub kgr_a: Option<GradeValue>,
    pub kgr_j: Option<GradeValue>,
    pub ht_amalgam: Option<HeightValue>,
    pub ht_a: Option<HeightValue>,
    pub dim_a: Option<u32>,
    pub dim_amalgam: Option<u32>,
    /// `kgr(m') = min(kgr(m, A), kgr(m, J))`.
    pub grade_min_holds: bool,
    pub amalgam_cm: bool,
    pub a_cm_and_j_full: bool,
    pub consistent: bool,
    pub status: RowStatus,
}

impl MaximalReport {
    fn inapplicable(why: &str) -> Self {
        MaximalReport {
            inapplicable: Some(why.to_string()),
            kgr_amalgam: None,
            kgr_a: None,
            kgr_j: None,
            ht_amalgam: None,
            ht_a: None,
            dim_a: None,
            dim_amalgam: None,
            grade_min_holds: false,
            amalgam_cm: false,
            a_cm_and_j_full: false,
            consistent: false,
            status: RowStatus::Skipped(why.to_string()),
        }
    }

    pub fn applicable(&self) -> bool {
        self.inapplicable.is_none()
    }
}

/// For a graded-local module-finite `J ≠ 0`:
/// `kgr(m') = min(kgr(m, A), kgr(m, J))`, and the amalgam is CM at `m'`
/// exactly when `A` is CM at `m` and `kgr(m, J) = dim A`.
pub fn check_maximal_criterion(r: &AmalgamRing) -> MaximalReport {
    let d = r.datum();
    if d.j_module().is_none() {
        return MaximalReport::inapplicable("J has no A-module presentation");
    }
    if !d.is_graded_local() {
        return MaximalReport::inapplicable("instance is not graded-local");
    }
    if d.j().is_zero() {
        return MaximalReport::inapplicable("J = 0");
    }
    match maximal_inner(r) {
        Ok(rep) => rep,
        Err(e) => {
            let mut rep = MaximalReport::inapplicable("");
            rep.inapplicable = None;
            rep.status = RowStatus::from_error(&e);
            rep
        }
    }
}

fn maximal_inner(r: &AmalgamRing) -> Result<MaximalReport> {
    let d = r.datum();
    let a = d.a();
    let m = a.graded_maximal()?;
    let mp = r.graded_maximal()?;
    let kgr_amalgam = koszul_grade(&mp, &FPModule::free(r.ring(), 1)?)?;
    let kgr_a = koszul_grade(&m, &FPModule::free(a, 1)?)?;
    let kgr_j = d.j_grade(&m)?;
    let ht_amalgam = height(&mp)?;
    let ht_a = height(&m)?;
    let dim_a = krull_dim(a).finite();
    let dim_amalgam = krull_dim(r.ring()).finite();
    let grade_min_holds = kgr_amalgam == kgr_a.min(kgr_j);
    let amalgam_cm = kgr_amalgam == ht_amalgam;
    let a_cm_and_j_full = kgr_a == ht_a && dim_a.is_some_and(|n| kgr_j == GradeValue::Finite(n));
    Ok(MaximalReport {
        inapplicable: None,
        kgr_amalgam: Some(kgr_amalgam),
        kgr_a: Some(kgr_a),
        kgr_j: Some(kgr_j),
        ht_amalgam: Some(ht_amalgam),
        ht_a: Some(ht_a),
        dim_a,
        dim_amalgam,
        grade_min_holds,
        amalgam_cm,
        a_cm_and_j_full,
        consistent: grade_min_holds && amalgam_cm == a_cm_and_j_full && dim_a == dim_amalgam,
        status: RowStatus::Decided,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    /// `a` and its extension `a^e`.
    Extended,
    /// A minimal prime `p` of a member and its lift `p'`.
    PrimeLift,
}

/// One row of a transfer criterion: data on `A`, data on the amalgam, both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferRow {
    pub kind: RowKind,
    pub ideal: String,
    pub fingerprint: String,
    pub kgr_a: Option<GradeValue>,
    pub kgr_j: Option<GradeValue>,
    pub ht_a: Option<HeightValue>,
    pub kgr_amalgam: Option<GradeValue>,
    pub ht_amalgam: Option<HeightValue>,
    /// `kgr_A(a) = ht a` and `kgr_A(a, J) >= ht a`.
    pub hypothesis: Option<bool>,
    /// `kgr(a^e) = ht(a^e)` in the amalgam.
    pub conclusion: Option<bool>,
    /// Extension rows of the nilpotent criterion: under the hypothesis,
    /// `kgr(a^e) = kgr_A(a)`. Flat-integral rows: hypothesis with `kgr_A(a, J) = ht a` instead.
    pub side_check: Option<bool>,
    /// Nilpotent rows: `ht a = ht a^e` and the minimal primes correspond.
    pub primes_check: Option<bool>,
    /// Amalgam CM on the row and `ht a^e >= ht a` force the hypothesis.
    pub descent_check: Option<bool>,
    pub status: RowStatus,
}

impl TransferRow {
    pub fn consistent(&self) -> bool {
        match (self.hypothesis, self.conclusion) {
            (Some(h), Some(c)) => h == c && self.side_check != Some(false) && self.primes_check != Some(false) && self.descent_check != Some(false),
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub criterion: String,
    pub inapplicable: Option<String>,
    pub certificate: Option<String>,
    pub rows: Vec<TransferRow>,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    pub consistent: bool,
    pub annotations: Vec<String>,
}

impl TransferReport {
    fn inapplicable(criterion: &str, why: String) -> Self {
        TransferReport {
            criterion: criterion.to_string(),
            inapplicable: Some(why),
            certificate: None,
            rows: Vec::new(),
            hypothesis_holds: false,
            conclusion_holds: false,
            consistent: false,
            annotations: Vec::new(),
        }
    }

    pub fn applicable(&self) -> bool {
        self.inapplicable.is_none()
    }

    pub fn resource_exhausted(&self) -> bool {
        self.rows.iter().any(|r| matches!(&r.status, RowStatus::Failed(w) if w.contains("budget")))
    }

    fn finish(mut self) -> Self {
        let decided: Vec<&TransferRow> = self.rows.iter().filter(|r| r.status.is_decided()).collect();
        self.hypothesis_holds = decided.iter().all(|r| r.hypothesis == Some(true));
        self.conclusion_holds = decided.iter().all(|r| r.conclusion == Some(true));
        let failed = self.rows.iter().any(|r| matches!(r.status, RowStatus::Failed(_)));
        self.consistent = !failed && self.rows.iter().all(TransferRow::consistent) && self.hypothesis_holds == self.conclusion_holds;
        let skipped = self.rows.iter().filter(|r| matches!(r.status, RowStatus::Skipped(_))).count();
        if skipped > 0 {
            self.annotations.push(format!("{skipped} row(s) skipped: not decidable"));
        }
        self.annotations.push("evaluated over the family only".to_string());
        self
    }
}

struct RowInputs<'a> {
    kind: RowKind,
    a: &'a IdealHandle,
    ext: &'a IdealHandle,
}

fn transfer_row(d: &AmalgamDatum, inp: &RowInputs<'_>, index: usize) -> TransferRow {
    let mut row = TransferRow {
        kind: inp.kind,
        ideal: inp.a.describe(),
        fingerprint: fingerprint(inp.a),
        kgr_a: None,
        kgr_j: None,
        ht_a: None,
        kgr_amalgam: None,
        ht_amalgam: None,
        hypothesis: None,
        conclusion: None,
        side_check: None,
        primes_check: None,
        descent_check: None,
        status: RowStatus::Decided,
    };
    let r = transfer_values(d, inp, &mut row).and_then(|()| {
        if recheck_index(index) {
            let mut again = row.clone();
            let (ra, re) = (reversed(inp.a)?, reversed(inp.ext)?);
            transfer_values(d, &RowInputs { kind: inp.kind, a: &ra, ext: &re }, &mut again)?;
            if (again.kgr_a, again.kgr_j, again.ht_a, again.kgr_amalgam, again.ht_amalgam) != (row.kgr_a, row.kgr_j, row.ht_a, row.kgr_amalgam, row.ht_amalgam) {
                return Err(Error::Invalid("recheck with reversed generators disagrees".into()));
            }
        }
        Ok(())
    });
    if let Err(e) = r {
        row.status = match e {
            Error::Invalid(w) => RowStatus::Failed(w),
            other => RowStatus::from_error(&other),
        };
        row.hypothesis = None;
        row.conclusion = None;
    }
    row
}

fn transfer_values(d: &AmalgamDatum, inp: &RowInputs<'_>, row: &mut TransferRow) -> Result<()> {
    let kgr_a = koszul_grade(inp.a, &FPModule::free(d.a(), 1)?)?;
    let kgr_j = d.j_grade(inp.a)?;
    let kgr_amalgam = koszul_grade(inp.ext, &FPModule::free(inp.ext.ring(), 1)?)?;
    row.kgr_a = Some(kgr_a);
    row.kgr_j = Some(kgr_j);
    row.kgr_amalgam = Some(kgr_amalgam);
    let ht_a = height(inp.a)?;
    row.ht_a = Some(ht_a);
    let ht_amalgam = height(inp.ext)?;
    row.ht_amalgam = Some(ht_amalgam);
    let hyp = kgr_a == ht_a && kgr_j >= ht_a;
    let concl = kgr_amalgam == ht_amalgam;
    row.hypothesis = Some(hyp);
    row.conclusion = Some(concl);
    row.descent_check = (concl && ht_amalgam >= ht_a).then_some(hyp);
    Ok(())
}

fn extension_rows(r: &AmalgamRing, family: &IdealFamily) -> Result<Vec<(IdealHandle, IdealHandle)>> {
    family.members().iter().map(|a| Ok((a.clone(), extend_ideal(a, r)?))).collect()
}

/// `Min(p^e) = {p'}` for a prime `p` of `A`.
fn lift_is_unique_minimal(p: &IdealHandle, lift: &IdealHandle, r: &AmalgamRing) -> Result<bool> {
    let mins = minimal_primes(&extend_ideal(p, r)?)?;
    Ok(mins.len() == 1 && mins[0].same_ideal(lift)?)
}

/// `Min(a^e) = {p' : p ∈ Min(a)}`.
fn minimal_primes_correspond(a: &IdealHandle, ext: &IdealHandle, r: &AmalgamRing) -> Result<bool> {
    let lifts: Vec<IdealHandle> = minimal_primes(a)?.iter().map(|p| prime_p_prime(p, r)).collect::<Result<_>>()?;
    let mins = minimal_primes(ext)?;
    if mins.len() != lifts.len() {
        return Ok(false);
    }
    for m in &mins {
        let mut found = false;
        for l in &lifts {
            if m.same_ideal(l)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nilpotent `J`: the amalgam is CM over `F^e` and the prime lifts exactly
/// when `A` is CM over `F` and `kgr_A(a, J) >= ht a`, row by row.
pub fn check_nilpotent_criterion(r: &AmalgamRing, family: &IdealFamily) -> TransferReport {
    const NAME: &str = "nilpotent_ideal_criterion";
    let d = r.datum();
    if !d.mode().nilpotent {
        return TransferReport::inapplicable(NAME, "J is not verified nilpotent".into());
    }
    if !family.ring().same_cover(d.a()) {
        return TransferReport::inapplicable(NAME, "family is not over A".into());
    }
    let mut rep = TransferReport::inapplicable(NAME, String::new());
    rep.inapplicable = None;
    let pairs = match extension_rows(r, family) {
        Ok(p) => p,
        Err(e) => return TransferReport::inapplicable(NAME, e.to_string()),
    };
    let mut primes: Vec<IdealHandle> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for (i, (a, ext)) in pairs.iter().enumerate() {
        let mut row = transfer_row(d, &RowInputs { kind: RowKind::Extended, a, ext }, i);
        if row.status.is_decided() {
            if row.hypothesis == Some(true) {
                row.side_check = Some(row.kgr_amalgam == row.kgr_a);
            }
            match minimal_primes_correspond(a, ext, r) {
                Ok(ok) => row.primes_check = Some(ok && row.ht_a == row.ht_amalgam),
                Err(e) => row.status = RowStatus::from_error(&e),
            }
            if let Ok(mins) = minimal_primes(a) {
                for p in mins {
                    if seen.insert(fingerprint(&p)) {
                        primes.push(p);
                    }
                }
            }
        }
        rep.rows.push(row);
    }
    for (i, p) in primes.iter().enumerate() {
        let lift = match prime_p_prime(p, r) {
            Ok(l) => l,
            Err(_) => continue,
        };
        let mut row = transfer_row(d, &RowInputs { kind: RowKind::PrimeLift, a: p, ext: &lift }, i);
        if row.status.is_decided() {
            match lift_is_unique_minimal(p, &lift, r) {
                Ok(ok) => row.primes_check = Some(ok && row.ht_a == row.ht_amalgam),
                Err(e) => row.status = RowStatus::from_error(&e),
            }
        }
        rep.rows.push(row);
    }
    rep.finish()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeMinReport {
    pub ideal: String,
    pub fingerprint: String,
    pub kgr_extended: GradeValue,
    pub kgr_a: GradeValue,
    pub kgr_j: GradeValue,
    pub holds: bool,
}

/// `kgr(b^e) = min(kgr_A(b, A), kgr_A(b, J))`, the left side computed in the
/// amalgam, the right side over `A` with the presentation of `J`.
pub fn check_grade_min(r: &AmalgamRing, b: &IdealHandle) -> Result<GradeMinReport> {
    let d = r.datum();
    let jm = d.j_module().ok_or_else(|| Error::NotDecidable("J has no A-module presentation".into()))?;
    let ext = extend_ideal(b, r)?;
    let kgr_extended = koszul_grade(&ext, &FPModule::free(r.ring(), 1)?)?;
    let kgr_a = koszul_grade(b, &FPModule::free(d.a(), 1)?)?;
    let kgr_j = koszul_grade(b, &jm.module)?;
    Ok(GradeMinReport { ideal: b.describe(), fingerprint: fingerprint(b), kgr_extended, kgr_a, kgr_j, holds: kgr_extended == kgr_a.min(kgr_j) })
}

/// Flat and integral `f` (identity or free of finite rank): the amalgam is CM
/// over `F^e` exactly when `A` is CM over `F` and `kgr_A(a, J) >= ht a`; with
/// `J` module-finite and nonzero the inequality is an equality.
pub fn check_flat_integral_criterion(r: &AmalgamRing, family: &IdealFamily) -> TransferReport {
    const NAME: &str = "flat_integral_criterion";
    let d = r.datum();
    let Some(cert) = d.flat_integral_certificate() else {
        return TransferReport::inapplicable(NAME, "no certificate that f is flat and integral".into());
    };
    if !family.ring().same_cover(d.a()) {
        return TransferReport::inapplicable(NAME, "family is not over A".into());
    }
    let pairs = match extension_rows(r, family) {
        Ok(p) => p,
        Err(e) => return TransferReport::inapplicable(NAME, e.to_string()),
    };
    let mut rep = TransferReport::inapplicable(NAME, String::new());
    rep.inapplicable = None;
    rep.certificate = Some(cert.to_string());
    for (i, (a, ext)) in pairs.iter().enumerate() {
        let mut row = transfer_row(d, &RowInputs { kind: RowKind::Extended, a, ext }, i);
        if row.status.is_decided() && d.j_module().is_some() && !d.j().is_zero() {
            let eq_form = row.kgr_a == row.ht_a && row.kgr_j == row.ht_a;
            row.side_check = Some(eq_form == row.conclusion.unwrap_or(false));
        }
        rep.rows.push(row);
    }
    rep.finish()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JGradeRow {
    pub ideal: String,
    pub fingerprint: String,
    pub kgr_j: Option<GradeValue>,
    pub ht: Option<HeightValue>,
    pub equal: Option<bool>,
    pub status: RowStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JGradeReport {
    pub rows: Vec<JGradeRow>,
    /// Every decided row has `kgr_A(a, J) = ht a` and none failed.
    pub holds: bool,
}

/// `kgr_A(a, J)` against `ht a` over a family of ideals of `A`.
pub fn check_j_grade_height(r: &AmalgamRing, family: &IdealFamily) -> JGradeReport {
    let d = r.datum();
    let rows: Vec<JGradeRow> = family
        .members()
        .iter()
        .map(|a| {
            let mut row = JGradeRow { ideal: a.describe(), fingerprint: fingerprint(a), kgr_j: None, ht: None, equal: None, status: RowStatus::Decided };
            match d.j_grade(a).and_then(|k| Ok((k, height(a)?))) {
                Ok((k, h)) => {
                    row.kgr_j = Some(k);
                    row.ht = Some(h);
                    row.equal = Some(k == h);
                }
                Err(e) => row.status = RowStatus::from_error(&e),
            }
            row
        })
        .collect();
    let holds = rows.iter().all(|r| !matches!(r.status, RowStatus::Failed(_)) && r.equal != Some(false));
    JGradeReport { rows, holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::{build_amalgamation, duplication, trivial_extension, Mode};
    use crate::field::Field;
    use crate::groebner::Kernel;
    use crate::ring::{RingMap, RingPresentation};
    use alloc::sync::Arc;

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

    #[test]
    fn sample_is_reproducible() {
        let r = ring(&["x", "y"], &[]);
        let f1 = IdealFamily::default_sample(&r).unwrap();
        let f2 = IdealFamily::default_sample(&r).unwrap();
        assert_eq!(f1.members().len(), 25);
        let fp = |f: &IdealFamily| f.members().iter().map(fingerprint).collect::<Vec<_>>();
        assert_eq!(fp(&f1), fp(&f2));
        assert_ne!(fp(&f1), fp(&IdealFamily::monomial_sample(&r, 25, 3, 7).unwrap()));
        assert!(f1.members().iter().all(|m| m.is_monomial()));
    }

    #[test]
    fn polynomial_ring_is_cm_over_sample() {
        let r = ring(&["x", "y"], &[]);
        let rep = cm_in_sense_of(&r, &IdealFamily::default_sample(&r).unwrap());
        assert_eq!(rep.verdict, Verdict::CmOverFamily);
        assert!(rep.rows.iter().all(|row| row.equal == Some(true)));
        assert!(rep.rows.iter().filter(|r| r.rechecked).count() >= 2);
    }

    #[test]
    fn non_cm_ring_at_maximal_ideal() {
        let r = ring(&["X", "Y", "Z"], &["(X - Y)*Y", "(X - Y)*Z"]);
        let rep = cm_in_sense_of(&r, &IdealFamily::maximal_graded(&r).unwrap());
        match rep.verdict {
            Verdict::Counterexample { kgr, ht, .. } => assert_eq!((kgr, ht), (GradeValue::Finite(1), GradeValue::Finite(2))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn artinian_ring() {
        let r = ring(&["x"], &["x^2"]);
        let rep = cm_in_sense_of(&r, &IdealFamily::explicit(&r, alloc::vec![ideal(&r, &["x"])]).unwrap());
        assert!(rep.is_cm());
        assert_eq!(rep.rows[0].kgr, Some(GradeValue::Finite(0)));
    }

    #[test]
    fn maximal_criterion_cases() {
        let a = ring(&["x"], &[]);
        let r = build_amalgamation(duplication(&a, &ideal(&a, &["x"])).unwrap()).unwrap();
        let rep = check_maximal_criterion(&r);
        assert!(rep.consistent && rep.amalgam_cm && rep.a_cm_and_j_full, "{rep:?}");

        let a = ring(&["x", "y"], &[]);
        let m = FPModule::from_ideal(&a.graded_maximal().unwrap()).unwrap();
        let r = build_amalgamation(trivial_extension(&a, &m).unwrap()).unwrap();
        let rep = check_maximal_criterion(&r);
        assert!(rep.consistent && !rep.amalgam_cm, "{rep:?}");
        assert_eq!(rep.kgr_amalgam, Some(GradeValue::Finite(1)));
        assert_eq!(rep.kgr_j, Some(GradeValue::Finite(1)));

        let r = build_amalgamation(trivial_extension(&a, &FPModule::free(&a, 1).unwrap()).unwrap()).unwrap();
        let rep = check_maximal_criterion(&r);
        assert!(rep.consistent && rep.amalgam_cm, "{rep:?}");
        assert_eq!(rep.kgr_amalgam, Some(GradeValue::Finite(2)));
    }

    #[test]
    fn maximal_criterion_needs_module_finite() {
        let a = ring(&["X"], &[]);
        let b = ring(&["X", "Y"], &[]);
        let f = RingMap::new(a, b.clone(), alloc::vec![b.parse("X").unwrap()]).unwrap();
        let j = ideal(&b, &["X", "Y"]);
        let d = AmalgamDatum::new(f, j.clone(), j.generators().to_vec(), Mode::default(), None).unwrap();
        let r = build_amalgamation(d).unwrap();
        assert!(!check_maximal_criterion(&r).applicable());
        assert!(!check_nilpotent_criterion(&r, &IdealFamily::maximal_graded(r.datum().a()).unwrap()).applicable());
    }

    #[test]
    fn nilpotent_criterion_trivial_extensions() {
        let a = ring(&["x", "y"], &[]);
        let fam = IdealFamily::monomial_sample(&a, 6, 2, 42).unwrap();
        let r = build_amalgamation(trivial_extension(&a, &FPModule::free(&a, 1).unwrap()).unwrap()).unwrap();
        let rep = check_nilpotent_criterion(&r, &fam);
        assert!(rep.consistent && rep.hypothesis_holds && rep.conclusion_holds, "{rep:#?}");
        assert!(rep.rows.iter().any(|r| r.kind == RowKind::PrimeLift));

        let m = FPModule::from_ideal(&a.graded_maximal().unwrap()).unwrap();
        let r = build_amalgamation(trivial_extension(&a, &m).unwrap()).unwrap();
        let fam = IdealFamily::explicit(&a, alloc::vec![a.graded_maximal().unwrap(), ideal(&a, &["x"])]).unwrap();
        let rep = check_nilpotent_criterion(&r, &fam);
        assert!(rep.consistent && !rep.hypothesis_holds && !rep.conclusion_holds, "{rep:#?}");
        assert_eq!(rep.rows[0].hypothesis, Some(false));
    }

    #[test]
    fn nilpotent_criterion_over_a_field() {
        let k = ring(&[], &[]);
        let r = build_amalgamation(trivial_extension(&k, &FPModule::free(&k, 1).unwrap()).unwrap()).unwrap();
        let rep = check_nilpotent_criterion(&r, &IdealFamily::default_sample(&k).unwrap());
        assert!(rep.consistent && rep.conclusion_holds, "{rep:#?}");
        assert_eq!(rep.rows[0].kgr_amalgam, Some(GradeValue::Finite(0)));
    }

    #[test]
    fn j_grade_rows_for_the_inclusion() {
        let a = ring(&["X"], &[]);
        let b = ring(&["X", "Y"], &[]);
        let f = RingMap::new(a.clone(), b.clone(), alloc::vec![b.parse("X").unwrap()]).unwrap();
        let j = ideal(&b, &["X", "Y"]);
        let d = AmalgamDatum::new(f, j.clone(), j.generators().to_vec(), Mode::default(), None).unwrap();
        let r = build_amalgamation(d).unwrap();
        let fam = IdealFamily::explicit(&a, alloc::vec![a.zero_ideal(), ideal(&a, &["X"]), ideal(&a, &["X^2"])]).unwrap();
        let rep = check_j_grade_height(&r, &fam);
        assert!(rep.holds, "{rep:?}");
        let ks: Vec<_> = rep.rows.iter().map(|r| r.kgr_j).collect();
        assert_eq!(ks, alloc::vec![Some(GradeValue::Finite(0)), Some(GradeValue::Finite(1)), Some(GradeValue::Finite(1))]);
    }

    #[test]
    fn grade_min_examples() {
        let a = ring(&["x"], &[]);
        let r = build_amalgamation(duplication(&a, &ideal(&a, &["x"])).unwrap()).unwrap();
        let rep = check_grade_min(&r, &ideal(&a, &["x"])).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.kgr_extended, GradeValue::Finite(1));
        assert!(check_grade_min(&r, &a.zero_ideal()).unwrap().holds);

        let a = ring(&["x", "y"], &[]);
        let m = FPModule::from_ideal(&a.graded_maximal().unwrap()).unwrap();
        let r = build_amalgamation(trivial_extension(&a, &m).unwrap()).unwrap();
        let rep = check_grade_min(&r, &ideal(&a, &["x"])).unwrap();
        assert!(rep.holds && rep.kgr_extended == GradeValue::Finite(1));
    }

    #[test]
    fn duplication_flat_criterion() {
        let a = ring(&["x"], &[]);
        let r = build_amalgamation(duplication(&a, &ideal(&a, &["x"])).unwrap()).unwrap();
        let fam = IdealFamily::explicit(&a, alloc::vec![a.zero_ideal(), ideal(&a, &["x"])]).unwrap();
        let rep = check_flat_integral_criterion(&r, &fam);
        assert!(rep.consistent && rep.conclusion_holds, "{rep:#?}");

        let a = ring(&["x", "y"], &[]);
        let r = build_amalgamation(duplication(&a, &a.graded_maximal().unwrap()).unwrap()).unwrap();
        let fam = IdealFamily::maximal_graded(&a).unwrap();
        let rep = check_flat_integral_criterion(&r, &fam);
        assert!(rep.consistent && !rep.conclusion_holds, "{rep:#?}");
        assert_eq!((rep.rows[0].kgr_amalgam, rep.rows[0].ht_amalgam), (Some(GradeValue::Finite(1)), Some(GradeValue::Finite(2))));
        let cm = cm_in_sense_of(r.ring(), &IdealFamily::maximal_graded(r.ring()).unwrap());
        assert!(matches!(cm.verdict, Verdict::Counterexample { .. }));

        let r = build_amalgamation(duplication(&a, &a.zero_ideal()).unwrap()).unwrap();
        let rep = check_flat_integral_criterion(&r, &IdealFamily::default_sample(&a).unwrap());
        assert!(rep.consistent && rep.conclusion_holds, "{rep:#?}");
    }
}
