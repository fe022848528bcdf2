//! Acceptance criteria: one PASS/FAIL line each. Grades and heights are
//! compared exactly; the only tolerances are the wall-clock limits below.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use amalgrade::corpus::CORPUS;
use amalgrade::{build, parse_instance, Environment, Options};
use amalgrade_core::{
    build_amalgamation, check_j_grade_height, check_grade_min, check_maximal_criterion, check_nilpotent_criterion, cm_in_sense_of, duplication,
    ext_grade, extend_ideal, koszul_grade, krull_dim, trivial_extension, AmalgamDatum, FPModule, Field, GradeValue, IdealFamily, IdealHandle, Kernel,
    Mode, Monomial, Polynomial, Ring, RingMap, RingPresentation, Verdict,
};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const SEED: u64 = 20240611;
const LIMIT_EXAMPLE: Duration = Duration::from_secs(10);
const LIMIT_RANDOM: Duration = Duration::from_secs(180);
const LIMIT_CORPUS: Duration = Duration::from_secs(300);

type Outcome = Result<String, String>;

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

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:?}, limit {:?}", start.elapsed(), limit))
}

fn random_monomial_ideal(rng: &mut ChaCha8Rng, r: &Ring, max_deg: u32, max_gens: u32) -> IdealHandle {
    let n = r.nvars();
    let k = 1 + rng.next_u32() % max_gens;
    let gens = (0..k)
        .map(|_| {
            let d = 1 + rng.next_u32() % max_deg;
            let mut e = vec![0u32; n];
            for _ in 0..d {
                e[rng.next_u32() as usize % n] += 1;
            }
            Polynomial::monomial(r.field(), Monomial::from_exponents(&e).unwrap(), r.field().one())
        })
        .collect();
    r.ideal(gens).unwrap()
}

fn corpus_envs() -> Vec<(&'static str, Environment)> {
    CORPUS.iter().map(|(stem, text)| (*stem, build(&parse_instance(text).unwrap(), &Options::default()).unwrap())).collect()
}

/// Non-CM amalgam of the inclusion `Q[X] -> Q[X,Y]` along `J = (X, Y)`.
fn inclusion_example() -> Outcome {
    let start = Instant::now();
    let a = ring(&["X"], &[]);
    let b = ring(&["X", "Y"], &[]);
    let f = RingMap::new(a.clone(), b.clone(), vec![b.parse("X").unwrap()]).unwrap();
    let j = ideal(&b, &["X", "Y"]);
    let d = AmalgamDatum::new(f, j.clone(), j.generators().to_vec(), Mode::default(), None).map_err(|e| e.to_string())?;
    let r = build_amalgamation(d).map_err(|e| e.to_string())?;
    // rename T1 -> Y, T2 -> Z: same variable positions in Q[X,Y,Z]
    let target = ring(&["X", "Y", "Z"], &[]);
    let rels: Vec<Polynomial> = ["(X - Y)*Y", "(X - Y)*Z"].iter().map(|s| target.parse(s).unwrap()).collect();
    ensure(r.ring().nvars() == 3, || "amalgam does not have three variables".into())?;
    let want = r.cover().ideal(rels).unwrap();
    let got = r.cover().ideal(r.ring().defining().to_vec()).unwrap();
    ensure(want.same_ideal(&got).unwrap(), || format!("presentation {}", r.ring().describe()))?;
    let rep = cm_in_sense_of(r.ring(), &IdealFamily::maximal_graded(r.ring()).unwrap());
    let (kgr, ht) = match rep.verdict {
        Verdict::Counterexample { kgr, ht, .. } => (kgr, ht),
        other => return Err(format!("verdict {other:?}")),
    };
    ensure((kgr, ht) == (GradeValue::Finite(1), GradeValue::Finite(2)), || format!("kgr={kgr} ht={ht}"))?;
    let fam = IdealFamily::explicit(&a, vec![a.zero_ideal(), ideal(&a, &["X"]), ideal(&a, &["X^2"])]).unwrap();
    ensure(cm_in_sense_of(&a, &fam).is_cm(), || "A is not CM over the family".into())?;
    let rows = check_j_grade_height(&r, &fam);
    ensure(rows.holds && rows.rows.iter().all(|r| r.equal == Some(true)), || format!("{rows:?}"))?;
    within(start, LIMIT_EXAMPLE)?;
    Ok(format!("kgr(m)=1, ht(m)=2, counterexample; A CM; J rows {:?}; {:?}", rows.rows.iter().map(|r| r.kgr_j.unwrap().to_string()).collect::<Vec<_>>(), start.elapsed()))
}

fn grade_min_random() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut count = 0;
    for i in 0..60 {
        let a = if rng.next_u32() % 2 == 0 { ring(&["x"], &[]) } else { ring(&["x", "y"], &[]) };
        let i_ideal = random_monomial_ideal(&mut rng, &a, 2, 2);
        let d = match rng.next_u32() % 4 {
            0 => duplication(&a, &i_ideal),
            1 => trivial_extension(&a, &FPModule::free(&a, 1).unwrap()),
            2 => trivial_extension(&a, &FPModule::cyclic(&i_ideal).unwrap()),
            _ => trivial_extension(&a, &FPModule::from_ideal(&i_ideal).unwrap()),
        }
        .map_err(|e| format!("instance {i}: {e}"))?;
        let r = build_amalgamation(d).map_err(|e| format!("instance {i}: {e}"))?;
        let b = random_monomial_ideal(&mut rng, &a, 3, 3);
        let rep = check_grade_min(&r, &b).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(rep.holds, || format!("instance {i}: {rep:?}"))?;
        count += 1;
    }
    within(start, LIMIT_RANDOM)?;
    Ok(format!("{count} instances, all exact; {:?}", start.elapsed()))
}

fn oracle_pairs(env: &Environment) -> Vec<(IdealHandle, FPModule)> {
    let mut out = Vec::new();
    for (_, r) in env.amalgams() {
        let d = r.datum();
        let m = d.a().graded_maximal().unwrap();
        out.push((m.clone(), FPModule::free(d.a(), 1).unwrap()));
        if let Some(jm) = d.j_module() {
            out.push((m.clone(), jm.module.clone()));
        }
        out.push((r.graded_maximal().unwrap(), FPModule::free(r.ring(), 1).unwrap()));
        out.push((extend_ideal(&m, r).unwrap(), FPModule::free(r.ring(), 1).unwrap()));
    }
    for i in env.ideals.values() {
        out.push((i.clone(), FPModule::free(i.ring(), 1).unwrap()));
    }
    for m in env.modules.values() {
        if let Ok(mx) = m.ring().graded_maximal() {
            out.push((mx, m.clone()));
        }
    }
    out
}

fn oracle_agreement() -> Outcome {
    let start = Instant::now();
    let mut corpus_pairs = 0;
    for (stem, env) in corpus_envs() {
        for (a, m) in oracle_pairs(&env) {
            if a.is_unit() || m.is_zero() {
                continue;
            }
            let k = koszul_grade(&a, &m).map_err(|e| format!("{stem}: {e}"))?;
            let e = ext_grade(&a, &m).map_err(|e| format!("{stem}: {e}"))?;
            ensure(k == e, || format!("{stem}: {} koszul {k} ext {e}", a.describe()))?;
            corpus_pairs += 1;
        }
    }
    let rings = [
        ring(&["x", "y"], &[]),
        ring(&["x", "y", "z"], &[]),
        ring(&["x", "y"], &["x*y"]),
        ring(&["x", "y", "z"], &["x*z - y^2"]),
        ring(&["X", "Y", "Z"], &["(X - Y)*Y", "(X - Y)*Z"]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut random_pairs = 0;
    while random_pairs < 120 {
        let r = &rings[rng.next_u32() as usize % rings.len()];
        let a = random_monomial_ideal(&mut rng, r, 2, 3);
        let n = random_monomial_ideal(&mut rng, r, 2, 2);
        let m = match rng.next_u32() % 4 {
            0 => FPModule::free(r, 1).unwrap(),
            1 => FPModule::cyclic(&n).unwrap(),
            2 => FPModule::from_ideal(&n).unwrap(),
            _ => FPModule::free(r, 1).unwrap().direct_sum(&FPModule::cyclic(&n).unwrap()).unwrap(),
        };
        if a.is_unit() || m.is_zero() {
            continue;
        }
        let k = koszul_grade(&a, &m).map_err(|e| e.to_string())?;
        let e = ext_grade(&a, &m).map_err(|e| e.to_string())?;
        ensure(k == e, || format!("{} on {}: koszul {k} ext {e}", a.describe(), r.describe()))?;
        random_pairs += 1;
    }
    within(start, LIMIT_RANDOM)?;
    Ok(format!("{corpus_pairs} corpus pairs, {random_pairs} random pairs; {:?}", start.elapsed()))
}

fn generating_set_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let rings = [ring(&["x", "y", "z"], &[]), ring(&["x", "y"], &["x*y"]), ring(&["X", "Y", "Z"], &["(X - Y)*Y", "(X - Y)*Z"])];
    let mut count = 0;
    let mut i = 0;
    while count < 60 {
        let r = &rings[i % rings.len()];
        i += 1;
        let a = random_monomial_ideal(&mut rng, r, 3, 3);
        let h = random_monomial_ideal(&mut rng, r, 2, 1);
        // monomials can vanish in the quotient rings
        let (g, Some(h)) = (a.generators(), h.generators().first().cloned()) else { continue };
        if g.is_empty() {
            continue;
        }
        let mut more = g.to_vec();
        more.push(&(&g[0] * &h) + g.last().unwrap());
        more.push(g[0].scale(&r.field().from_i64(-3)));
        let b = r.ideal(more).unwrap();
        for m in [FPModule::free(r, 1).unwrap(), FPModule::from_ideal(&r.graded_maximal().unwrap()).unwrap()] {
            let (x, y) = (koszul_grade(&a, &m).map_err(|e| e.to_string())?, koszul_grade(&b, &m).map_err(|e| e.to_string())?);
            ensure(x == y, || format!("{} vs augmented: {x} != {y}", a.describe()))?;
        }
        count += 1;
    }
    Ok(format!("{count} ideals, two modules each"))
}

fn maximal_criterion() -> Outcome {
    let mut seen = Vec::new();
    let (mut positive, mut negative) = (false, false);
    for (stem, env) in corpus_envs() {
        for (name, r) in env.amalgams() {
            let d = r.datum();
            if d.j_module().is_none() || !d.is_graded_local() || d.j().is_zero() {
                continue;
            }
            let rep = check_maximal_criterion(r);
            ensure(rep.applicable() && rep.status.is_decided(), || format!("{stem}/{name}: {rep:?}"))?;
            ensure(rep.grade_min_holds, || format!("{stem}/{name}: kgr(m') != min: {rep:?}"))?;
            ensure(rep.consistent, || format!("{stem}/{name}: one-sided: {rep:?}"))?;
            if stem == "triv_free" {
                positive = rep.amalgam_cm && rep.a_cm_and_j_full;
            }
            if stem == "triv_max" {
                negative = !rep.amalgam_cm && rep.kgr_amalgam == Some(GradeValue::Finite(1)) && rep.kgr_j == Some(GradeValue::Finite(1)) && rep.dim_a == Some(2);
            }
            seen.push(stem);
        }
    }
    ensure(positive, || "free trivial extension is not the positive case".into())?;
    ensure(negative, || "trivial extension by (x,y) is not the negative case".into())?;
    Ok(format!("{} instances: {}", seen.len(), seen.join(", ")))
}

fn nilpotent_reports() -> Vec<(String, amalgrade_core::TransferReport)> {
    let mut out = Vec::new();
    for (stem, env) in corpus_envs() {
        for (name, r) in env.amalgams() {
            if r.datum().mode().nilpotent {
                let fam = IdealFamily::default_sample(r.datum().a()).unwrap();
                out.push((format!("{stem}/{name}"), check_nilpotent_criterion(r, &fam)));
            }
        }
    }
    out
}

fn nilpotent_criterion(reports: &[(String, amalgrade_core::TransferReport)]) -> Outcome {
    let mut rows = 0;
    for (name, rep) in reports {
        ensure(rep.applicable(), || format!("{name}: {:?}", rep.inapplicable))?;
        for row in &rep.rows {
            ensure(row.status.is_decided(), || format!("{name}: undecided row {row:?}"))?;
            ensure(row.hypothesis == row.conclusion, || format!("{name}: one-sided row {row:?}"))?;
            ensure(row.side_check != Some(false) && row.descent_check != Some(false), || format!("{name}: {row:?}"))?;
            rows += 1;
        }
        ensure(rep.consistent, || format!("{name}: report inconsistent"))?;
    }
    ensure(reports.len() >= 4, || "too few nilpotent instances".into())?;
    Ok(format!("{} instances, {rows} rows, no one-sided outcome", reports.len()))
}

fn minimal_prime_transfer(reports: &[(String, amalgrade_core::TransferReport)]) -> Outcome {
    let mut rows = 0;
    for (name, rep) in reports {
        for row in rep.rows.iter().filter(|r| r.status.is_decided()) {
            ensure(row.ht_a == row.ht_amalgam, || format!("{name}: heights differ {row:?}"))?;
            ensure(row.primes_check == Some(true), || format!("{name}: minimal primes do not correspond {row:?}"))?;
            rows += 1;
        }
    }
    Ok(format!("{rows} decided rows"))
}

fn dimension_transfer() -> Outcome {
    let mut seen = 0;
    for (stem, env) in corpus_envs() {
        for (name, r) in env.amalgams() {
            if r.datum().j_module().is_some() {
                let (da, dr) = (krull_dim(r.datum().a()), krull_dim(r.ring()));
                ensure(da == dr, || format!("{stem}/{name}: dim A {da}, dim R {dr}"))?;
                seen += 1;
            }
        }
    }
    Ok(format!("{seen} module-finite instances"))
}

fn duplication_verdicts() -> Outcome {
    let a = ring(&["x"], &[]);
    let r = build_amalgamation(duplication(&a, &ideal(&a, &["x"])).unwrap()).unwrap();
    let sample = IdealFamily::default_sample(&a).unwrap();
    let ext: Vec<IdealHandle> = sample.members().iter().map(|m| extend_ideal(m, &r).unwrap()).collect();
    let rep = cm_in_sense_of(r.ring(), &IdealFamily::explicit(r.ring(), ext).unwrap());
    ensure(rep.is_cm(), || format!("Q[x] duplicated along (x): {:?}", rep.verdict))?;
    ensure(cm_in_sense_of(r.ring(), &IdealFamily::maximal_graded(r.ring()).unwrap()).is_cm(), || "not CM at the maximal ideal".into())?;

    let a = ring(&["x", "y"], &[]);
    let m = a.graded_maximal().unwrap();
    let r = build_amalgamation(duplication(&a, &m).unwrap()).unwrap();
    let me = extend_ideal(&m, &r).unwrap();
    let rep = cm_in_sense_of(r.ring(), &IdealFamily::explicit(r.ring(), vec![me.clone()]).unwrap());
    match &rep.verdict {
        Verdict::Counterexample { witness, kgr, ht } => {
            ensure(*witness == me.describe(), || format!("witness {witness}"))?;
            ensure((*kgr, *ht) == (GradeValue::Finite(1), GradeValue::Finite(2)), || format!("kgr={kgr} ht={ht}"))?;
            Ok(format!("Q[x]⋈(x) CM over {} ideals; Q[x,y]⋈(x,y) counterexample at {witness} (kgr=1, ht=2)", sample.members().len()))
        }
        other => Err(format!("{other:?}")),
    }
}

fn corpus_binary() -> Outcome {
    let start = Instant::now();
    let dir = std::env::temp_dir().join(format!("amalgrade-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let path = dir.join(format!("corpus{run}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_amalgrade"))
            .args(["corpus", "--field", "qq", "--seed", "42", "--jobs", "2", "--json"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(0), || format!("exit {:?}\n{}", out.status.code(), String::from_utf8_lossy(&out.stdout)))?;
        let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        for inst in v["instances"].as_array_mut().unwrap() {
            inst.as_object_mut().unwrap().remove("timing");
        }
        outputs.push(serde_json::to_string(&v).unwrap());
    }
    ensure(outputs[0] == outputs[1], || "reruns differ outside the timing block".into())?;
    within(start, LIMIT_CORPUS)?;
    Ok(format!("{} instances, two runs bit-identical modulo timing; {:?}", CORPUS.len(), start.elapsed()))
}

fn main() {
    let nilpotent = nilpotent_reports();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("non-CM inclusion amalgam: presentation, kgr=1 < ht=2 at m, A CM, J rows", Box::new(inclusion_example)),
        ("grade of an extension is the min over A and J (random module-finite)", Box::new(grade_min_random)),
        ("Koszul grade agrees with the Ext grade", Box::new(oracle_agreement)),
        ("Koszul grade ignores redundant generators", Box::new(generating_set_invariance)),
        ("maximal-ideal criterion on graded-local module-finite corpus", Box::new(maximal_criterion)),
        ("nilpotent-J criterion row by row over the seeded sample", Box::new(|| nilpotent_criterion(&nilpotent))),
        ("heights and minimal primes transfer for nilpotent J", Box::new(|| minimal_prime_transfer(&nilpotent))),
        ("Krull dimension transfers for module-finite J", Box::new(dimension_transfer)),
        ("duplication verdicts along (x) and (x,y)", Box::new(duplication_verdicts)),
        ("bundled corpus through the binary, deterministic", Box::new(corpus_binary)),
    ];
    let mut failed = 0;
    for (i, (what, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("criterion {:>2} PASS  {what}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {what}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
