mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dcf_core::algebra::{
    macaulay_member, occurring_vars, primality_oracle, AlgIdeal, MonomialOrder, PrimalityConfig, PrimeStatus,
};
use dcf_core::geometry::{
    charset_certify_with, evaluate_checks, instance_validate, naive_vs_tau_demo, projection_closure_check,
    witness_search, CertStatus, CharSetCertificate, InstanceFile, WitnessStatus,
};
use dcf_core::prolong::{d_compatibility_check, tau};
use dcf_core::{DerivVar, DiffPoly, Error, Exec, FieldMode, RankedSystem, Ranking, Ring};

use report::Report;

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_NEGATIVE: u8 = 2;

#[derive(Parser)]
#[command(name = "dcfw", version, about = "Differential-algebra workbench")]
struct Cli {
    /// Number of derivations δ₁..δ_m.
    #[arg(long, global = true, default_value_t = 1)]
    m: usize,
    /// Number of differential indeterminates x₁..x_n.
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,
    /// Base field: constants or rational_t.
    #[arg(long, global = true, default_value = "constants")]
    field: FieldMode,
    /// orderly, or elim:i,j,... (highest priority first).
    #[arg(long, global = true, default_value = "orderly")]
    ranking: Ranking,
    /// Recorded in the trailer; every command is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print only the machine-readable trailer.
    #[arg(long, global = true)]
    machine: bool,
    /// Run data-parallel loops on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct AlgOpts {
    /// Comma-separated variables, largest first (default: those occurring).
    #[arg(long)]
    vars: Option<String>,
    /// grevlex, lex or block:k.
    #[arg(long, default_value = "grevlex")]
    order: MonomialOrder,
}

#[derive(Args, Clone)]
struct PrimeOpts {
    #[arg(long, default_value_t = 2)]
    degree_bound: u32,
    #[arg(long, default_value_t = 3)]
    height_bound: u32,
    #[arg(long, default_value_t = 200_000)]
    max_candidates: usize,
    /// Accept primality when the cascade is undecided (recorded as conditional).
    #[arg(long)]
    assert_prime: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the canonical form of a polynomial.
    Parse { poly: String },
    /// Apply δᵢ.
    Derive {
        poly: String,
        #[arg(long, short)]
        i: usize,
    },
    /// Print τf, or compare τf(p, Dp) with D(f(p)).
    Tau {
        poly: String,
        /// Model point such as "x1 := t2; x2 := 1".
        #[arg(long)]
        check_point: Option<String>,
    },
    /// Ritt reduction of a polynomial by an autoreduced set.
    Reduce {
        poly: String,
        /// `;`-separated autoreduced set.
        #[arg(long)]
        by: String,
        /// Partial reduction (proper derivatives only).
        #[arg(long, conflicts_with = "full")]
        partial: bool,
        /// Full reduction (the default).
        #[arg(long)]
        full: bool,
        /// Re-verify the certificate identity before printing.
        #[arg(long)]
        check: bool,
    },
    /// Δ-pairs and their remainders.
    Coherent {
        set: String,
        /// Re-verify the reduction certificate of every Δ-pair.
        #[arg(long)]
        check: bool,
    },
    /// Leaders, initials, separants and H.
    Hprod {
        set: String,
        /// Recompute H from the printed initials and separants.
        #[arg(long)]
        check: bool,
    },
    /// Reduced Gröbner basis.
    Groebner {
        gens: String,
        #[command(flatten)]
        alg: AlgOpts,
    },
    /// Ideal membership with a division certificate.
    Member {
        poly: String,
        #[arg(long)]
        ideal: String,
        #[command(flatten)]
        alg: AlgOpts,
        /// Also run the Macaulay-matrix oracle at this degree bound.
        #[arg(long)]
        macaulay: Option<u32>,
    },
    /// Elimination ideal.
    Eliminate {
        gens: String,
        /// Comma-separated variables to eliminate.
        #[arg(long, default_value = "")]
        drop: String,
        #[command(flatten)]
        alg: AlgOpts,
    },
    /// Saturation I : h^∞.
    Saturate {
        gens: String,
        #[arg(long)]
        by: String,
        #[command(flatten)]
        alg: AlgOpts,
    },
    /// Primality cascade.
    Prime {
        gens: String,
        #[command(flatten)]
        alg: AlgOpts,
        #[command(flatten)]
        prime: PrimeOpts,
    },
    /// Characteristic-set certification of the [lambda] section of a file.
    Certify { file: PathBuf },
    /// Axiom-scheme instances.
    Axiom {
        #[command(subcommand)]
        cmd: AxiomCmd,
    },
    /// Demonstrations.
    Demo {
        #[command(subcommand)]
        cmd: DemoCmd,
    },
}

#[derive(Subcommand)]
enum AxiomCmd {
    Validate { file: PathBuf },
    Project { file: PathBuf },
    Witness {
        file: PathBuf,
        /// Override the file's degree bound.
        #[arg(long)]
        degree: Option<u32>,
        /// Override the file's height bound.
        #[arg(long)]
        height: Option<u32>,
    },
}

#[derive(Subcommand)]
enum DemoCmd {
    /// Naive prolongation of [S] versus τ of the certified [lambda].
    NaiveVsTau { file: PathBuf },
}

struct Ctx {
    ring: Ring,
    ranking: Ranking,
    exec: Exec,
    machine: bool,
    seed: Option<u64>,
}

impl Ctx {
    fn emit(&self, mut r: Report, code: u8) -> Result<u8, Error> {
        if let Some(s) = self.seed {
            r.machine("seed", s);
        }
        r.machine("exit", code);
        print!("{}", r.render(self.machine));
        Ok(code)
    }

    /// Single-value commands print just the value in human mode.
    fn value(&self, key: &str, v: impl std::fmt::Display) -> Result<u8, Error> {
        if self.machine {
            let mut r = Report::new();
            r.machine(key, v);
            return self.emit(r, EXIT_OK);
        }
        println!("{v}");
        Ok(EXIT_OK)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let ring = Ring::new(cli.m, cli.n, cli.field)?;
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let ctx = Ctx {
        ring,
        ranking: cli.ranking,
        exec,
        machine: cli.machine,
        seed: cli.seed,
    };
    let ring = &ctx.ring;
    match cli.cmd {
        Cmd::Parse { poly } => ctx.value("result", ring.parse(&poly)?),
        Cmd::Derive { poly, i } => ctx.value("result", ring.derive(&ring.parse(&poly)?, i)?),
        Cmd::Tau { poly, check_point } => {
            let f = ring.parse(&poly)?;
            match check_point {
                None => ctx.value("result", tau(&f, ring)?),
                Some(p) => {
                    let p = ring.parse_model_point(&p)?;
                    let c = d_compatibility_check(&f, &p, ring)?;
                    let mut r = Report::new();
                    r.both("tau", tau(&f, ring)?);
                    r.both("point", &p);
                    r.both("tau_at_point", &c.tau_value);
                    r.both("d_of_value", &c.d_of_value);
                    r.both("holds", c.holds());
                    let code = if c.holds() { EXIT_OK } else { EXIT_NEGATIVE };
                    ctx.emit(r, code)
                }
            }
        }
        Cmd::Reduce {
            poly, by, partial, check, ..
        } => cmd_reduce(&ctx, &poly, &by, partial, check),
        Cmd::Coherent { set, check } => cmd_coherent(&ctx, &set, check),
        Cmd::Hprod { set, check } => cmd_hprod(&ctx, &set, check),
        Cmd::Groebner { gens, alg } => {
            let ideal = build_ideal(ring, &gens, &alg, &[])?.buchberger_with(ctx.exec);
            let ok = ideal.self_check(ctx.exec);
            let mut r = Report::new();
            r.both("order", ideal.order());
            r.both("vars", join_vars(ideal.vars()));
            for (k, b) in ideal.basis().unwrap_or(&[]).iter().enumerate() {
                r.line(&format!("basis[{k}]"), b);
                r.machine(&format!("basis.{k}"), b);
            }
            r.both("basis_size", ideal.basis().map(|b| b.len()).unwrap_or(0));
            r.both("s_polynomial_self_check", pass(ok));
            ctx.emit(r, if ok { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Cmd::Member { poly, ideal, alg, macaulay } => {
            let f = ring.parse(&poly)?;
            let ideal = build_ideal(ring, &ideal, &alg, std::slice::from_ref(&f))?.buchberger_with(ctx.exec);
            let m = ideal.ideal_member(&f)?;
            let mut r = Report::new();
            r.both("member", m.member);
            r.both("normal_form", &m.normal_form);
            for (q, b) in m.quotients.iter().zip(&m.basis) {
                if !q.is_zero() {
                    r.text(format!("  ({q}) * ({b})"));
                }
            }
            r.both("certificate_verified", pass(m.verify(&f)));
            if let Some(d) = macaulay {
                r.both("macaulay", format!("{} at degree {d}", macaulay_member(&f, &ideal, d)?));
            }
            ctx.emit(r, if m.member { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Cmd::Eliminate { gens, drop, alg } => {
            let ideal = build_ideal(ring, &gens, &alg, &[])?;
            let drop = parse_vars(ring, &drop)?;
            let e = ideal.eliminate(&drop)?;
            let mut r = Report::new();
            r.both("dropped", join_vars(&drop));
            r.both("remaining_vars", join_vars(e.vars()));
            list(&mut r, "gens", e.gens());
            ctx.emit(r, EXIT_OK)
        }
        Cmd::Saturate { gens, by, alg } => {
            let h = ring.parse(&by)?;
            let ideal = build_ideal(ring, &gens, &alg, std::slice::from_ref(&h))?;
            let s = ideal.saturate(&h)?;
            let mut r = Report::new();
            r.both("saturating_by", &h);
            list(&mut r, "gens", s.gens());
            r.both("unit", s.is_unit());
            ctx.emit(r, EXIT_OK)
        }
        Cmd::Prime { gens, alg, prime } => {
            let ideal = build_ideal(ring, &gens, &alg, &[])?;
            let cfg = PrimalityConfig {
                degree_bound: prime.degree_bound,
                height_bound: prime.height_bound,
                max_candidates: prime.max_candidates,
                assert_prime: prime.assert_prime,
            };
            let v = primality_oracle(&ideal, &cfg)?;
            let mut r = Report::new();
            r.both("status", v.status);
            r.both("method", v.method.map(|m| m.to_string()).unwrap_or_else(|| "none".into()));
            if let Some(w) = &v.witness {
                r.both("witness", w);
            }
            r.both("witness_verified", pass(v.verify(&ideal)?));
            let code = if v.status == PrimeStatus::NotPrime { EXIT_NEGATIVE } else { EXIT_OK };
            ctx.emit(r, code)
        }
        Cmd::Certify { file } => cmd_certify(&ctx, &file),
        Cmd::Axiom { cmd } => cmd_axiom(&ctx, cmd),
        Cmd::Demo {
            cmd: DemoCmd::NaiveVsTau { file },
        } => cmd_demo(&ctx, &file),
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn join_vars(vs: &[DerivVar]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

fn list(r: &mut Report, key: &str, polys: &[DiffPoly]) {
    for (k, p) in polys.iter().enumerate() {
        r.line(&format!("{key}[{k}]"), p);
        r.machine(&format!("{key}.{k}"), p);
    }
    r.both(&format!("{key}_count"), polys.len());
}

fn parse_vars(ring: &Ring, text: &str) -> Result<Vec<DerivVar>, Error> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| ring.parse_var(s))
        .collect()
}

fn build_ideal(ring: &Ring, gens: &str, alg: &AlgOpts, extra: &[DiffPoly]) -> Result<AlgIdeal, Error> {
    let gens = ring.parse_list(gens)?;
    let vars = match &alg.vars {
        Some(v) => parse_vars(ring, v)?,
        None => occurring_vars(gens.iter().chain(extra)),
    };
    AlgIdeal::new(vars, gens, alg.order)
}

fn ranked(ctx: &Ctx, set: &str, r: &mut Report) -> Result<Option<RankedSystem>, Error> {
    let polys = ctx.ring.parse_list(set)?;
    match RankedSystem::autoreduced_check(&polys, &ctx.ranking) {
        Ok(s) => Ok(Some(s)),
        Err(e) => {
            r.both("autoreduced", "no");
            r.both("reason", &e);
            Ok(None)
        }
    }
}

fn cmd_reduce(ctx: &Ctx, poly: &str, by: &str, partial: bool, check: bool) -> Result<u8, Error> {
    let f = ctx.ring.parse(poly)?;
    let mut r = Report::new();
    let Some(sys) = ranked(ctx, by, &mut r)? else {
        return ctx.emit(r, EXIT_NEGATIVE);
    };
    let cert = if partial { sys.partial_reduce(&f) } else { sys.full_reduce(&f) };
    let ok = !check || cert.verify(&f, &sys);
    r.both("mode", if partial { "partial" } else { "full" });
    r.both("remainder", &cert.remainder);
    r.both("premultiplier", &cert.premultiplier);
    r.both("steps", cert.steps);
    for ((k, theta), c) in &cert.cofactors {
        r.text(format!(
            "  cofactor of {}: {c}",
            sys.derivative_of_element(*k, theta)
        ));
    }
    let powers: Vec<String> = sys
        .elements()
        .iter()
        .enumerate()
        .map(|(k, _)| format!("I^{} S^{}", cert.initial_powers[k], cert.separant_powers[k]))
        .collect();
    r.both("powers", powers.join(", "));
    r.both("h_exponent", cert.h_exponent());
    r.both("reduced", sys.is_reduced(&cert.remainder, !partial));
    if check {
        r.both("certificate_verified", pass(ok));
    }
    ctx.emit(r, if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_coherent(ctx: &Ctx, set: &str, check: bool) -> Result<u8, Error> {
    let mut r = Report::new();
    let Some(sys) = ranked(ctx, set, &mut r)? else {
        return ctx.emit(r, EXIT_NEGATIVE);
    };
    let rep = sys.coherence_check_with(ctx.exec);
    for (k, e) in rep.evidence.iter().enumerate() {
        let a = sys.elements()[e.pair.first].source_index;
        let b = sys.elements()[e.pair.second].source_index;
        r.text(format!(
            "pair ({a}, {b}) at {}: {} -> remainder {}",
            e.pair.theta.exps().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            e.pair.poly,
            e.remainder
        ));
        r.machine(&format!("pair.{k}.remainder"), &e.remainder);
    }
    r.both("pairs", rep.evidence.len());
    r.both("coherent", rep.coherent);
    let mut ok = true;
    if check {
        ok = rep.evidence.iter().all(|e| {
            let c = sys.full_reduce(&e.pair.poly);
            c.verify(&e.pair.poly, &sys) && c.remainder == e.remainder
        });
        r.both("certificates_verified", pass(ok));
    }
    ctx.emit(r, if rep.coherent && ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_hprod(ctx: &Ctx, set: &str, check: bool) -> Result<u8, Error> {
    let mut r = Report::new();
    let Some(sys) = ranked(ctx, set, &mut r)? else {
        return ctx.emit(r, EXIT_NEGATIVE);
    };
    for e in sys.elements() {
        r.text(format!(
            "element {}: leader {} (degree {}), initial {}, separant {}",
            e.source_index, e.leader, e.leader_degree, e.initial, e.separant
        ));
    }
    r.both("H", sys.h_product());
    let mut ok = true;
    if check {
        let h = sys
            .elements()
            .iter()
            .fold(DiffPoly::one(), |acc, e| &(&acc * &e.initial) * &e.separant);
        ok = &h == sys.h_product();
        r.both("H_verified", pass(ok));
    }
    ctx.emit(r, if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn read_instance(path: &PathBuf) -> Result<InstanceFile, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    InstanceFile::parse(&text)
}

fn certificate_lines(r: &mut Report, cert: &CharSetCertificate) {
    if let Some(sys) = &cert.system {
        for e in sys.elements() {
            r.text(format!("  {}  [leader {}]", e.poly, e.leader));
        }
        r.both("H", sys.h_product());
    }
    if let Some(c) = &cert.coherence {
        for (k, e) in c.evidence.iter().enumerate() {
            r.line(&format!("delta_pair[{k}].remainder"), &e.remainder);
            r.machine(&format!("delta_pair.{k}.remainder"), &e.remainder);
        }
        r.both("coherent", c.coherent);
    }
    if let Some(v) = &cert.algebraic_primality {
        r.both("lambda_ideal_primality", v.status);
        if let Some(w) = &v.witness {
            r.both("lambda_ideal_witness", w);
        }
    }
    if let Some(h) = cert.h_in_ideal {
        r.both("H_in_lambda_ideal", h);
    }
    if let Some(v) = &cert.saturation_primality {
        r.both("saturation_primality", v.status);
        if let Some(w) = &v.witness {
            r.both("saturation_witness", w);
        }
    }
    r.both("status", &cert.status);
}

fn cmd_certify(ctx: &Ctx, path: &PathBuf) -> Result<u8, Error> {
    let file = read_instance(path)?;
    let cert = charset_certify_with(&file.lambda, &file.ranking, &file.prime, ctx.exec);
    let mut r = Report::new();
    r.both("ranking", &file.ranking);
    certificate_lines(&mut r, &cert);
    let ok = cert.verify(&file.prime)?;
    r.both("certificate_reverified", pass(ok));
    let code = match cert.status {
        CertStatus::Rejected(_) => EXIT_NEGATIVE,
        _ if !ok => EXIT_NEGATIVE,
        _ => EXIT_OK,
    };
    ctx.emit(r, code)
}

fn cmd_axiom(ctx: &Ctx, cmd: AxiomCmd) -> Result<u8, Error> {
    let (path, degree, height) = match &cmd {
        AxiomCmd::Validate { file } | AxiomCmd::Project { file } => (file, None, None),
        AxiomCmd::Witness { file, degree, height } => (file, *degree, *height),
    };
    let file = read_instance(path)?;
    let mut r = Report::new();
    let inst = match instance_validate(&file, ctx.exec)? {
        Ok(inst) => inst,
        Err(rej) => {
            r.both("valid", false);
            r.both("rejection", &rej);
            if matches!(cmd, AxiomCmd::Witness { .. }) {
                r.both("status", WitnessStatus::InvalidInstance);
            }
            return ctx.emit(r, EXIT_NEGATIVE);
        }
    };
    r.both("valid", true);
    r.both("charset", &inst.cert.status);
    r.both("order_bound", inst.bounds.order);
    r.both("open_set_point", &inst.o_witness);
    match cmd {
        AxiomCmd::Validate { .. } => ctx.emit(r, EXIT_OK),
        AxiomCmd::Project { .. } => {
            let v = projection_closure_check(&inst)?;
            for (k, (e, rem)) in v.eliminants.iter().enumerate() {
                r.text(format!("eliminant {k}: {e} -> remainder {rem}"));
                r.machine(&format!("eliminant.{k}"), e);
                r.machine(&format!("eliminant.{k}.remainder"), rem);
            }
            r.both("surrogate", format!("order-{} elimination of the y-variables", v.order_bound));
            r.both("projection_contains_V", v.holds);
            ctx.emit(r, if v.holds { EXIT_OK } else { EXIT_NEGATIVE })
        }
        AxiomCmd::Witness { .. } => {
            let d = degree.unwrap_or(file.bounds.degree);
            let h = height.unwrap_or(file.bounds.height);
            let rep = witness_search(&inst, d, h, ctx.exec)?;
            r.both("status", rep.status);
            r.both("degree", d);
            r.both("height", h);
            r.both("candidates", rep.stats.candidates);
            let kinds = ["lambda", "H", "open", "W"];
            for (k, n) in kinds.iter().zip(rep.stats.failures) {
                r.both(&format!("failed_at_{k}"), n);
            }
            r.both(
                "per_level",
                rep.stats.per_level.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            );
            if let Some(w) = &rep.witness {
                r.both("witness", w);
                let replay = evaluate_checks(&inst, w)?;
                for c in &replay {
                    r.text(format!(
                        "  {} {} -> {} ({})",
                        c.kind.label(),
                        c.poly,
                        c.value,
                        if c.expect_zero { "expect 0" } else { "expect nonzero" }
                    ));
                }
                r.both("witness_reverified", pass(replay.iter().all(|c| c.passed())));
            }
            let code = if rep.status == WitnessStatus::Found { EXIT_OK } else { EXIT_NEGATIVE };
            ctx.emit(r, code)
        }
    }
}

fn cmd_demo(ctx: &Ctx, path: &PathBuf) -> Result<u8, Error> {
    let file = read_instance(path)?;
    let cert = charset_certify_with(&file.lambda, &file.ranking, &file.prime, ctx.exec);
    let mut r = Report::new();
    r.both("lambda_status", &cert.status);
    if !cert.status.is_usable() {
        return ctx.emit(r, EXIT_NEGATIVE);
    }
    let s = if file.s.is_empty() { file.lambda.clone() } else { file.s.clone() };
    let rep = naive_vs_tau_demo(
        &s,
        &cert,
        &file.ring,
        file.bounds.height,
        file.bounds.samples,
        file.bounds.degree,
        ctx.exec,
    )?;
    for g in &rep.naive_gens {
        r.text(format!("  naive generator: {g}"));
    }
    match &rep.discrepancy {
        Some(d) => {
            let coords: Vec<String> = d.coords.iter().map(|(v, c)| format!("{v} = {c}")).collect();
            r.both("discrepancy", "found");
            r.both("point", coords.join(", "));
            r.both("violated", format!("tau({}) = {} -> {}", d.violated, d.tau_g, d.tau_value));
        }
        None => {
            r.both("discrepancy", "not-found-at-bounds");
        }
    }
    r.both("grid_points", rep.grid_points);
    r.both("samples", rep.samples_checked);
    r.both("members", rep.members_checked);
    r.both("sample_violations", rep.violations.len());
    let code = if rep.discrepancy.is_some() && rep.violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    ctx.emit(r, code)
}
