//! Build the objects declared in an instance file and execute its checks.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use amalgrade_core::{
    build_amalgamation, check_flat_integral_criterion, check_j_grade_height, check_grade_min, check_maximal_criterion, check_nilpotent_criterion,
    cm_in_sense_of, duplication, extend_ideal, krull_dim, trivial_extension, AmalgamDatum, AmalgamRing, Error, FPModule, Field, IdealFamily, IdealHandle,
    Kernel, Mode, Polynomial, Ring, RingMap, RingPresentation, Trust, Verdict, DEFAULT_BUDGET,
};
use serde_json::json;

use crate::dsl::{check_text, poly_error, AmalgamDef, CheckDef, Expectation, FamilyDef, InstanceFile, ModuleDef, ParseError, PolyText, Pos, Stmt, Value};
use crate::report::{CheckOutcome, InstanceReport, Status, Timing};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Replace every declared coefficient field.
    pub field: Option<Field>,
    /// Seed for monomial samples that do not fix their own.
    pub seed: u64,
    pub budget: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { field: None, seed: amalgrade_core::checkers::SAMPLE_SEED, budget: DEFAULT_BUDGET }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{pos}: {message}")]
    Resource { pos: Pos, message: String },
}

impl RunError {
    fn at(pos: Pos, e: Error) -> RunError {
        if e.is_resource() {
            RunError::Resource { pos, message: e.to_string() }
        } else {
            RunError::Parse(ParseError { pos, message: e.to_string() })
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, RunError::Resource { .. })
    }
}

/// Everything declared in an instance, built.
pub struct Environment {
    pub kernel: Arc<Kernel>,
    pub rings: HashMap<String, Ring>,
    pub ideals: HashMap<String, IdealHandle>,
    pub maps: HashMap<String, RingMap>,
    pub modules: HashMap<String, FPModule>,
    pub amalgams: HashMap<String, Arc<AmalgamRing>>,
    /// In declaration order.
    pub amalgam_order: Vec<String>,
    pub families: HashMap<String, IdealFamily>,
}

impl Environment {
    fn ring(&self, name: &str) -> &Ring {
        self.rings.get(name).unwrap_or_else(|| self.amalgams[name].ring())
    }

    /// Amalgams in declaration order.
    pub fn amalgams(&self) -> impl Iterator<Item = (&str, &Arc<AmalgamRing>)> {
        self.amalgam_order.iter().map(|n| (n.as_str(), &self.amalgams[n]))
    }
}

fn polys(ring: &Ring, ps: &[PolyText]) -> Result<Vec<Polynomial>, RunError> {
    ps.iter().map(|p| ring.parse(&p.text).map_err(|e| RunError::Parse(poly_error(p, e)))).collect()
}

fn field_of(spec: crate::dsl::FieldSpec, opts: &Options, pos: Pos) -> Result<Field, RunError> {
    match opts.field {
        Some(f) => Ok(f),
        None => spec.field().map_err(|e| RunError::at(pos, e)),
    }
}

/// Build every declaration in order.
pub fn build(file: &InstanceFile, opts: &Options) -> Result<Environment, RunError> {
    let kernel = Kernel::shared(opts.budget);
    let mut env = Environment {
        kernel: kernel.clone(),
        rings: HashMap::new(),
        ideals: HashMap::new(),
        maps: HashMap::new(),
        modules: HashMap::new(),
        amalgams: HashMap::new(),
        amalgam_order: Vec::new(),
        families: HashMap::new(),
    };
    for (stmt, &pos) in file.statements.iter().zip(&file.positions) {
        let at = |e: Error| RunError::at(pos, e);
        match stmt {
            Stmt::Name(_) | Stmt::Check { .. } => {}
            Stmt::Ring { name, field, vars, relations } => {
                let field = field_of(*field, opts, pos)?;
                let base = RingPresentation::polynomial(field, vars.clone(), kernel.clone()).map_err(at)?;
                let rels = polys(&base, relations)?;
                let ring = RingPresentation::quotient(field, vars.clone(), rels, kernel.clone()).map_err(at)?;
                env.rings.insert(name.clone(), ring);
            }
            Stmt::Ideal { name, ring, gens } => {
                let r = env.ring(ring).clone();
                let g = polys(&r, gens)?;
                env.ideals.insert(name.clone(), r.ideal(g).map_err(at)?);
            }
            Stmt::Map { name, source, target, images } => {
                let (s, t) = (env.ring(source).clone(), env.ring(target).clone());
                let imgs = polys(&t, images)?;
                env.maps.insert(name.clone(), RingMap::new(s, t, imgs).map_err(at)?);
            }
            Stmt::Module { name, ring, def } => {
                let r = env.ring(ring).clone();
                let m = match def {
                    ModuleDef::Free(n) => FPModule::free(&r, *n),
                    ModuleDef::Quotient(i) => FPModule::cyclic(&env.ideals[i]),
                    ModuleDef::Ideal(i) => FPModule::from_ideal(&env.ideals[i]),
                    ModuleDef::Presented { rank, columns } => {
                        let cols = columns.iter().map(|c| polys(&r, c)).collect::<Result<Vec<_>, _>>()?;
                        FPModule::new(r.clone(), *rank, cols)
                    }
                }
                .map_err(at)?;
                env.modules.insert(name.clone(), m);
            }
            Stmt::Amalgam { name, def } => {
                let d = datum(&env, def).map_err(at)?;
                let r = build_amalgamation(d).map_err(at)?;
                env.amalgams.insert(name.clone(), Arc::new(r));
                env.amalgam_order.push(name.clone());
            }
            Stmt::Family { name, ring, def } => {
                let r = env.ring(ring).clone();
                let fam = match def {
                    FamilyDef::Maximal => IdealFamily::maximal_graded(&r),
                    FamilyDef::Sample { count, degree, seed } => IdealFamily::monomial_sample(&r, *count, *degree, seed.unwrap_or(opts.seed)),
                    FamilyDef::List(ms) => {
                        let ideals = ms.iter().map(|m| polys(&r, m).and_then(|g| r.ideal(g).map_err(at))).collect::<Result<Vec<_>, _>>()?;
                        IdealFamily::explicit(&r, ideals)
                    }
                    FamilyDef::Extend(f) => {
                        let am = &env.amalgams[ring];
                        let ext = env.families[f].members().iter().map(|a| extend_ideal(a, am)).collect::<Result<Vec<_>, _>>().map_err(at)?;
                        IdealFamily::explicit(&r, ext)
                    }
                }
                .map_err(at)?;
                env.families.insert(name.clone(), fam);
            }
        }
    }
    Ok(env)
}

fn datum(env: &Environment, def: &AmalgamDef) -> Result<AmalgamDatum, Error> {
    match def {
        AmalgamDef::Duplication { a, ideal } => duplication(&env.rings[a], &env.ideals[ideal]),
        AmalgamDef::TrivialExtension { a, module } => trivial_extension(&env.rings[a], &env.modules[module]),
        AmalgamDef::General { b, f, j, gens, mode, module_gens, basis, attested, .. } => {
            let bring = &env.rings[b];
            let parse = |ps: &[PolyText]| ps.iter().map(|p| bring.parse(&p.text)).collect::<Result<Vec<_>, _>>();
            let jd = env.ideals[j].clone();
            let gens = match gens {
                Some(g) => parse(g)?,
                None => jd.generators().to_vec(),
            };
            let mg = module_gens.as_deref().map(parse).transpose()?;
            let mode = Mode { module_finite: mode.module_finite, nilpotent: mode.nilpotent };
            let mut d = AmalgamDatum::new(env.maps[f].clone(), jd, gens, mode, mg)?;
            if *attested {
                d = d.with_trust(Trust::Attested);
            }
            if let Some(bs) = basis {
                d = d.with_free_basis(parse(bs)?)?;
            }
            Ok(d)
        }
    }
}

fn to_value(v: amalgrade_core::GradeValue) -> Value {
    match v {
        amalgrade_core::GradeValue::Finite(n) => Value::Finite(n),
        amalgrade_core::GradeValue::Infinite => Value::Infinite,
    }
}

fn consistency(applicable: bool, consistent: bool) -> &'static str {
    match (applicable, consistent) {
        (false, _) => "inapplicable",
        (true, true) => "consistent",
        (true, false) => "inconsistent",
    }
}

/// Observed label, whether a budget ran out, and the detailed report.
fn run_check(env: &Environment, check: &CheckDef) -> (String, bool, serde_json::Value) {
    let holds = |b: bool| if b { "holds" } else { "fails" }.to_string();
    match check {
        CheckDef::Cm { ring, family } => {
            let rep = cm_in_sense_of(env.ring(ring), &env.families[family]);
            let label = match rep.verdict {
                Verdict::CmOverFamily => "cm",
                Verdict::Counterexample { .. } => "counterexample",
                Verdict::Inconclusive => "inconclusive",
            };
            (label.into(), rep.resource_exhausted(), json!(rep))
        }
        CheckDef::MaximalCriterion { amalgam } => {
            let rep = check_maximal_criterion(&env.amalgams[amalgam]);
            let resource = matches!(&rep.status, amalgrade_core::RowStatus::Failed(w) if w.contains("budget"));
            (consistency(rep.applicable(), rep.consistent).into(), resource, json!(rep))
        }
        CheckDef::NilpotentCriterion { amalgam, family } => {
            let rep = check_nilpotent_criterion(&env.amalgams[amalgam], &env.families[family]);
            (consistency(rep.applicable(), rep.consistent).into(), rep.resource_exhausted(), json!(rep))
        }
        CheckDef::FlatIntegralCriterion { amalgam, family } => {
            let rep = check_flat_integral_criterion(&env.amalgams[amalgam], &env.families[family]);
            (consistency(rep.applicable(), rep.consistent).into(), rep.resource_exhausted(), json!(rep))
        }
        CheckDef::GradeMin { amalgam, ideal } => match check_grade_min(&env.amalgams[amalgam], &env.ideals[ideal]) {
            Ok(rep) => (holds(rep.holds), false, json!(rep)),
            Err(Error::NotDecidable(w)) => ("inapplicable".into(), false, json!({ "reason": w })),
            Err(e) => ("failed".into(), e.is_resource(), json!({ "error": e.to_string() })),
        },
        CheckDef::JGradeHeight { amalgam, family } => {
            let rep = check_j_grade_height(&env.amalgams[amalgam], &env.families[family]);
            let resource = rep.rows.iter().any(|r| matches!(&r.status, amalgrade_core::RowStatus::Failed(w) if w.contains("budget")));
            (holds(rep.holds), resource, json!(rep))
        }
        CheckDef::DimensionTransfer { amalgam } => {
            let r = &env.amalgams[amalgam];
            let (da, dr) = (krull_dim(r.datum().a()), krull_dim(r.ring()));
            (holds(da == dr), false, json!({ "dim_a": da.to_string(), "dim_amalgam": dr.to_string() }))
        }
        CheckDef::Generation { amalgam } => {
            let g = env.amalgams[amalgam].generation();
            (json!(g).as_str().unwrap_or_default().to_string(), false, json!({ "generation": g }))
        }
        CheckDef::Presentation { amalgam, relations } => {
            let r = &env.amalgams[amalgam];
            let result = polys(r.cover(), relations).map_err(|e| e.to_string()).and_then(|rels| {
                let want = r.cover().ideal(rels).map_err(|e| e.to_string())?;
                let got = r.cover().ideal(r.ring().defining().to_vec()).map_err(|e| e.to_string())?;
                want.same_ideal(&got).map_err(|e| e.to_string())
            });
            let shown: Vec<String> = r.ring().defining().iter().map(|p| r.ring().show(p)).collect();
            match result {
                Ok(same) => (holds(same), false, json!({ "ring": r.ring().describe(), "defining": shown })),
                Err(e) => ("failed".into(), false, json!({ "error": e })),
            }
        }
    }
}

fn matches(expect: &Expectation, label: &str, detail: &serde_json::Value) -> bool {
    match expect {
        Expectation::Label(l) => l == label,
        Expectation::Counterexample { kgr, ht } => {
            if label != "counterexample" {
                return false;
            }
            let v = &detail["verdict"];
            let parse = |x: &serde_json::Value| serde_json::from_value::<amalgrade_core::GradeValue>(x.clone()).ok().map(to_value);
            parse(&v["kgr"]) == Some(*kgr) && parse(&v["ht"]) == Some(*ht)
        }
    }
}

/// Build the instance and run its checks in order.
pub fn run_checks(file: &InstanceFile, opts: &Options) -> InstanceReport {
    let start = Instant::now();
    let name = file.name().unwrap_or("unnamed").to_string();
    let mut report = InstanceReport::new(name, opts);
    let env = match build(file, opts) {
        Ok(env) => env,
        Err(e) => {
            report.status = if e.is_resource() { Status::Resource } else { Status::Error };
            report.error = Some(e.to_string());
            report.timing = Timing { total_ms: start.elapsed().as_millis() as u64, checks_ms: Vec::new() };
            return report;
        }
    };
    let mut checks_ms = Vec::new();
    for (check, expect) in file.checks() {
        let t = Instant::now();
        let (observed, resource, detail) = run_check(&env, check);
        checks_ms.push(t.elapsed().as_millis() as u64);
        let matches = expect.map(|e| matches(e, &observed, &detail));
        report.checks.push(CheckOutcome { check: check_text(check), observed, expected: expect.map(|e| e.to_string()), matches, resource_exhausted: resource, detail });
    }
    report.kernel = env.kernel.stats();
    report.status = if report.checks.iter().any(|c| c.resource_exhausted) {
        Status::Resource
    } else if report.checks.iter().any(|c| c.matches == Some(false)) {
        Status::Mismatch
    } else {
        Status::Ok
    };
    report.timing = Timing { total_ms: start.elapsed().as_millis() as u64, checks_ms };
    report
}
