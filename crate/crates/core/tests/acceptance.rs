//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always visible.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::*;
use dcf_core::algebra::{macaulay_member, occurring_vars, AlgIdeal, MacaulayResult, MonomialOrder, PrimeStatus, PrimeWitness};
use dcf_core::geometry::{
    charset_certify, instance_validate, naive_vs_tau_demo, open_set_equality_check, projection_closure_check,
    sample_points, saturation_members, witness_search, CertStatus, InstanceFile, RejectionStage,
    WitnessStatus,
};
use dcf_core::prolong::{d_compatibility_check, tau};
use dcf_core::{DiffPoly, Exec, FieldMode, ModelPoint, RankedSystem, Ranking, Ring};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn fixture(name: &str) -> InstanceFile {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    let text = std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    InstanceFile::parse(&text).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tau_of(f: &DiffPoly, ring: &Ring) -> DiffPoly {
    tau(f, ring).unwrap().into_inner()
}

fn chain_rule() -> Outcome {
    let mut r = rng(101);
    for k in 0..250 {
        let ring = random_ring(&mut r, FieldMode::RationalT);
        let f = random_poly(&mut r, &ring, SMALL);
        let p = random_point(&mut r, &ring, 3, 5);
        let d = ring.d_symbol();
        let dp = (1..=ring.n as u32).fold(ModelPoint::new(), |acc, j| acc.with(j, oracle_dt(p.get(j).unwrap(), d)));
        let lhs = oracle_eval(&tau_of(&f, &ring), &p, &dp);
        let rhs = oracle_dt(&oracle_eval(&f, &p, &ModelPoint::new()), d);
        ensure(lhs == rhs, || format!("pair {k}: f = {f}, p = {p}"))?;
        let c = d_compatibility_check(&f, &p, &ring).map_err(|e| e.to_string())?;
        ensure(c.holds(), || format!("d_compatibility_check failed on pair {k}"))?;
    }
    Ok("250 pairs".into())
}

fn product_rule() -> Outcome {
    let mut r = rng(202);
    for k in 0..250 {
        let ring = random_ring(&mut r, FieldMode::RationalT);
        let f = random_poly(&mut r, &ring, SMALL);
        let g = random_poly(&mut r, &ring, SMALL);
        let defect = &(&tau_of(&(&f * &g), &ring) - &(&f * &tau_of(&g, &ring))) - &(&g * &tau_of(&f, &ring));
        ensure(defect.is_zero(), || format!("pair {k}: f = {f}, g = {g}"))?;
    }
    Ok("250 pairs".into())
}

fn reduction_certificates() -> Outcome {
    let mut r = rng(303);
    let lshape = Shape {
        order: 1,
        degree: 2,
        height: 3,
        terms: 3,
    };
    let fshape = Shape {
        order: 2,
        degree: 2,
        height: 3,
        terms: 3,
    };
    let mut done = 0;
    let mut steps = 0;
    while done < 200 {
        let ring = random_ring(&mut r, FieldMode::RationalT);
        let lambda: Vec<DiffPoly> = (0..r.gen_range(1..=2))
            .map(|_| random_poly(&mut r, &ring, lshape))
            .filter(|p| !p.is_constant())
            .collect();
        let Ok(sys) = RankedSystem::autoreduced_check(&lambda, &Ranking::Orderly) else {
            continue;
        };
        let f = random_poly(&mut r, &ring, fshape);
        let cert = sys.full_reduce(&f);
        let combo = cert.cofactors.iter().fold(DiffPoly::zero(), |acc, ((k, theta), c)| {
            &acc + &(c * &sys.elements()[*k].poly.apply_theta(theta))
        });
        let identity = (&(&(&cert.premultiplier * &f) - &cert.remainder) - &combo).is_zero();
        ensure(identity, || format!("identity fails for f = {f}"))?;
        let reduced = sys.elements().iter().all(|e| {
            cert.remainder.variables().iter().all(|v| match v.derivative_of(&e.leader) {
                Some(theta) if !theta.is_zero() => false,
                Some(_) => cert.remainder.degree_in(v) < e.leader_degree,
                None => true,
            })
        });
        ensure(reduced, || format!("remainder {} not reduced", cert.remainder))?;
        let h = sys.h_product().pow(cert.h_exponent());
        ensure(h.div_exact(&cert.premultiplier).is_some(), || {
            format!("premultiplier {} does not divide H^{}", cert.premultiplier, cert.h_exponent())
        })?;
        steps += cert.steps;
        done += 1;
    }
    Ok(format!("{done} pairs, {steps} elimination steps"))
}

fn naive_vs_tau() -> Outcome {
    let file = fixture("naive-vs-tau.sys");
    let cert = charset_certify(&file.lambda, &file.ranking, &file.prime);
    let rep = naive_vs_tau_demo(&file.s, &cert, &file.ring, 1, 1, 1, Exec::default()).map_err(|e| e.to_string())?;
    let d = rep.discrepancy.ok_or("no discrepancy found")?;
    let coords: Vec<String> = d.coords.iter().map(|(v, c)| format!("{v}={c}")).collect();
    ensure(coords == ["x1=0", "y1=1"], || format!("discrepancy at {coords:?}"))?;

    let file = fixture("constant-slope.sys");
    let cert = charset_certify(&file.lambda, &file.ranking, &file.prime);
    let rep = naive_vs_tau_demo(
        &file.lambda,
        &cert,
        &file.ring,
        file.bounds.height,
        200,
        file.bounds.degree,
        Exec::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure(rep.samples_checked == 200, || format!("only {} samples", rep.samples_checked))?;
    ensure(rep.members_checked == 10, || format!("only {} generators", rep.members_checked))?;
    ensure(rep.violations.is_empty(), || format!("{} violations", rep.violations.len()))?;
    Ok("discrepancy (0, 1); 200 samples x 10 generators clean".into())
}

fn rosenfeld_pipeline() -> Outcome {
    let f = fixture("coherent-pair.sys");
    let c = charset_certify(&f.lambda, &f.ranking, &f.prime);
    ensure(c.status == CertStatus::Certified, || format!("coherent pair: {}", c.status))?;

    let f = fixture("incoherent-pair.sys");
    let c = charset_certify(&f.lambda, &f.ranking, &f.prime);
    ensure(c.status == CertStatus::Rejected(RejectionStage::Coherence), || {
        format!("incoherent pair: {}", c.status)
    })?;
    let rem: Vec<String> = c.coherence.as_ref().unwrap().evidence.iter().map(|e| e.remainder.to_string()).collect();
    ensure(rem == ["-1"], || format!("remainders {rem:?}"))?;

    let f = fixture("square.sys");
    let c = charset_certify(&f.lambda, &f.ranking, &f.prime);
    ensure(c.status == CertStatus::Rejected(RejectionStage::Primality), || format!("square: {}", c.status))?;
    let v = c.algebraic_primality.as_ref().ok_or("no primality verdict")?;
    ensure(v.status == PrimeStatus::NotPrime, || "square not refuted".into())?;
    let Some(PrimeWitness::ZeroDivisors { f: a, g: b }) = &v.witness else {
        return Err(format!("witness {:?}", v.witness));
    };
    // (Λ) = (x1²): a·b must lie in it while a and b do not.
    let ideal = AlgIdeal::new(occurring_vars(&f.lambda), f.lambda.clone(), MonomialOrder::GRevLex).unwrap();
    let ok = ideal.contains(&(a * b)).unwrap() && !ideal.contains(a).unwrap() && !ideal.contains(b).unwrap();
    ensure(ok, || format!("witness ({a}, {b}) does not verify"))?;
    Ok(format!("certified / coherence -1 / zero divisors ({a}, {b})"))
}

fn groebner_cross_validation() -> Outcome {
    let mut r = rng(606);
    let shape = Shape {
        order: 0,
        degree: 3,
        height: 4,
        terms: 3,
    };
    let (mut decisive, mut members) = (0, 0);
    for k in 0..100 {
        let ring = Ring::new(1, r.gen_range(1..=3), FieldMode::Constants).unwrap();
        let gens: Vec<DiffPoly> = (0..r.gen_range(1..=3)).map(|_| random_poly(&mut r, &ring, shape)).collect();
        let vars = occurring_vars(gens.iter());
        let ideal = AlgIdeal::new(vars.clone(), gens.clone(), MonomialOrder::GRevLex)
            .unwrap()
            .buchberger();
        ensure(ideal.self_check(Exec::Sequential), || format!("ideal {k}: S-polynomial self-check"))?;
        // Alternate constructed members and arbitrary polynomials.
        let f = if k % 2 == 0 {
            gens.iter().fold(DiffPoly::zero(), |acc, g| {
                let q = random_poly(&mut r, &ring, Shape { degree: 1, ..shape });
                &acc + &(&q * g)
            })
        } else {
            random_poly(&mut r, &ring, Shape { degree: 2, ..shape })
        };
        if !f.variables().iter().all(|v| vars.contains(v)) {
            continue;
        }
        let m = ideal.ideal_member(&f).map_err(|e| e.to_string())?;
        ensure(m.verify(&f), || format!("ideal {k}: division certificate"))?;
        match macaulay_member(&f, &ideal, 6).map_err(|e| e.to_string())? {
            MacaulayResult::Member => {
                decisive += 1;
                ensure(m.member, || format!("ideal {k}: Macaulay says member of {f}"))?;
            }
            MacaulayResult::NotMemberAtBound if !m.member => decisive += 1,
            _ => {}
        }
        members += m.member as usize;
    }
    Ok(format!("100 ideals, {decisive} decisive comparisons, {members} members"))
}

fn axiom_end_to_end() -> Outcome {
    let file = fixture("basic.axiom");
    let inst = instance_validate(&file, Exec::default())
        .map_err(|e| e.to_string())?
        .map_err(|r| format!("basic fixture rejected: {r}"))?;
    let proj = projection_closure_check(&inst).map_err(|e| e.to_string())?;
    ensure(proj.holds, || "projection surrogate fails".into())?;
    let rep = witness_search(&inst, 1, 1, Exec::default()).map_err(|e| e.to_string())?;
    let w = rep.witness.ok_or("no witness")?;
    ensure(w.to_string() == "x1 := t2", || format!("witness {w}"))?;
    ensure(rep.checks.iter().all(|c| c.passed()), || "witness transcript fails".into())?;

    let file = fixture("exhausted.axiom");
    let inst = instance_validate(&file, Exec::default())
        .map_err(|e| e.to_string())?
        .map_err(|r| format!("exhaustion fixture rejected: {r}"))?;
    let rep = witness_search(&inst, 1, 1, Exec::default()).map_err(|e| e.to_string())?;
    ensure(rep.status == WitnessStatus::Exhausted, || format!("status {}", rep.status))?;
    // Values c0 + c1 t1 + c2 t2 with c in {-1, 0, 1}.
    let grid = 3u64.pow(3);
    let s = &rep.stats;
    let complete = s.candidates == grid
        && s.failures.iter().sum::<u64>() == grid
        && s.per_level.iter().sum::<u64>() == grid;
    ensure(complete, || format!("transcript {s:?}"))?;
    Ok(format!("witness x1 := t2; exhausted after {grid} candidates"))
}

fn proof_chain_replay() -> Outcome {
    let file = fixture("constant-slope.sys");
    let cert = charset_certify(&file.lambda, &file.ranking, &file.prime);
    let members = saturation_members(&cert, &file.ring, 5).map_err(|e| e.to_string())?;
    let mut distinct = members.clone();
    distinct.sort_by_key(|g| g.to_string());
    distinct.dedup();
    ensure(distinct.len() == 5, || format!("{} distinct members", distinct.len()))?;
    let samples = sample_points(&cert, &file.ring, &[], file.bounds.degree, file.bounds.height, 20)
        .map_err(|e| e.to_string())?;
    ensure(samples.len() == 20, || format!("{} samples", samples.len()))?;
    for g in &members {
        let v = open_set_equality_check(&cert, g, &samples, &file.ring).map_err(|e| e.to_string())?;
        ensure(v.product_rule, || format!("product rule fails for {g}"))?;
        ensure(v.membership_identity, || format!("membership identity fails for {g}"))?;
        ensure(v.samples_checked == 20 && v.violations.is_empty(), || {
            format!("{g}: violations at {:?}", v.violations)
        })?;
    }
    Ok("5 members x 20 samples".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 tau chain rule", 30, chain_rule),
        ("2 tau product rule", 30, product_rule),
        ("3 reduction certificates", 60, reduction_certificates),
        ("4 naive vs tau", 10, naive_vs_tau),
        ("5 rosenfeld pipeline", 5, rosenfeld_pipeline),
        ("6 groebner cross-validation", 120, groebner_cross_validation),
        ("7 axiom end to end", 10, axiom_end_to_end),
        ("8 proof chain replay", 10, proof_chain_replay),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > Duration::from_secs(limit) => {
                Err(format!("{detail}; took {took:.2?}, limit {limit}s"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({took:.2?}, limit {limit}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} ({took:.2?})");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
