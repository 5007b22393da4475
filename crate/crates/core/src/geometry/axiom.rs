//! Instances of the geometric axiom scheme: validation, the projection
//! surrogate, and witness search over polynomial models.

use std::fmt;

use super::charset::{charset_certify_with, sat_ideal_member, CharSetCertificate};
use super::demo::in_open_set;
use super::grid::ModelGrid;
use super::instance::{Bounds, InstanceFile};
use crate::algebra::{occurring_vars, AlgIdeal, MonomialOrder, PrimalityConfig};
use crate::diffpoly::{eval_at_model_point, eval_doubled, DerivVar, DiffPoly, Family, ModelPoint, MultiIndex, Ring};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::prolong::tau;
use crate::scalar::Scalar;

/// A validated instance: certified Λ, inequations cutting O, generators of W.
#[derive(Clone, Debug)]
pub struct AxiomInstance {
    pub ring: Ring,
    pub cert: CharSetCertificate,
    pub open_extra: Vec<DiffPoly>,
    pub w_gens: Vec<DiffPoly>,
    pub bounds: Bounds,
    /// A point of O found during validation.
    pub o_witness: ModelPoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceRejection {
    /// Λ is not certified.
    Charset(String),
    /// Some f or τf (f ∈ Λ) is not in the radical of the truncated ideal of W.
    NotInW { poly: DiffPoly, order_bound: u32 },
    /// An inequation lies in [Λ]:H^∞, so O is empty.
    OpenSetEmpty { inequation: DiffPoly },
    /// No point of O was found within the model bounds.
    OpenSetNotWitnessed { degree: u32, height: u32, candidates: u64 },
}

impl fmt::Display for InstanceRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceRejection::Charset(s) => write!(f, "Λ is not a certified characteristic set: {s}"),
            InstanceRejection::NotInW { poly, order_bound } => write!(
                f,
                "`{poly}` does not vanish on W (not in the radical of the order-{order_bound} truncation)"
            ),
            InstanceRejection::OpenSetEmpty { inequation } => {
                write!(f, "O is empty: `{inequation}` vanishes on V(Λ) away from V(H)")
            }
            InstanceRejection::OpenSetNotWitnessed {
                degree,
                height,
                candidates,
            } => write!(
                f,
                "no point of O found at degree {degree}, height {height} ({candidates} candidates)"
            ),
        }
    }
}

/// `θw` for every generator w and every θ of order at most `order`.
pub fn truncated_w_ideal(w: &[DiffPoly], m: usize, order: u32) -> Vec<DiffPoly> {
    let mut out: Vec<DiffPoly> = Vec::new();
    for theta in MultiIndex::up_to_order(m, order) {
        for g in w {
            let d = g.apply_theta(&theta);
            if !d.is_zero() && !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

fn w_ideal(w: &[DiffPoly], extra: &[DiffPoly], m: usize, order: u32) -> Result<AlgIdeal> {
    let gens = truncated_w_ideal(w, m, order);
    let vars = occurring_vars(gens.iter().chain(extra));
    AlgIdeal::new(vars, gens, MonomialOrder::GRevLex)
}

/// Check the hypotheses on (Λ, O, W); see [`InstanceRejection`] for the
/// possible failures.
pub fn instance_validate(file: &InstanceFile, exec: Exec) -> Result<std::result::Result<AxiomInstance, InstanceRejection>> {
    instance_validate_with(file, &file.prime, exec)
}

pub fn instance_validate_with(
    file: &InstanceFile,
    prime: &PrimalityConfig,
    exec: Exec,
) -> Result<std::result::Result<AxiomInstance, InstanceRejection>> {
    let ring = &file.ring;
    let cert = charset_certify_with(&file.lambda, &file.ranking, prime, exec);
    if !cert.status.is_usable() {
        return Ok(Err(InstanceRejection::Charset(cert.status.to_string())));
    }
    let sys = cert.system()?.clone();
    let mut needed = Vec::new();
    for e in sys.elements() {
        needed.push(e.poly.clone());
        needed.push(tau(&e.poly, ring)?.into_inner());
    }
    let ideal = w_ideal(&file.w, &needed, ring.m, file.bounds.order)?;
    for p in &needed {
        if !ideal.radical_member(p)? {
            return Ok(Err(InstanceRejection::NotInW {
                poly: p.clone(),
                order_bound: file.bounds.order,
            }));
        }
    }
    for g in &file.open {
        if sat_ideal_member(g, &cert)?.0 {
            return Ok(Err(InstanceRejection::OpenSetEmpty { inequation: g.clone() }));
        }
    }
    let grid = ModelGrid {
        vars: (1..=ring.n as u32).collect(),
        symbols: ring.d_symbol(),
        degree: file.bounds.degree,
        height: file.bounds.height,
    };
    let mut examined = 0u64;
    for level in grid.levels()? {
        let hit = par::find_first(exec, 0..level.size, |i| {
            let p = level.point(i)?;
            in_open_set(&cert, &file.open, &p).ok()?.then_some(p)
        });
        match hit {
            Some((_, p)) => {
                return Ok(Ok(AxiomInstance {
                    ring: ring.clone(),
                    cert,
                    open_extra: file.open.clone(),
                    w_gens: file.w.clone(),
                    bounds: file.bounds.clone(),
                    o_witness: p,
                }))
            }
            None => examined += level.exact_count(),
        }
    }
    Ok(Err(InstanceRejection::OpenSetNotWitnessed {
        degree: file.bounds.degree,
        height: file.bounds.height,
        candidates: examined,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionVerdict {
    /// The truncation order of the surrogate.
    pub order_bound: u32,
    /// Eliminants with their remainders against Λ.
    pub eliminants: Vec<(DiffPoly, DiffPoly)>,
    pub holds: bool,
}

/// Eliminate the y-variables from the truncated ideal of W and require each
/// eliminant to reduce to zero against Λ.
pub fn projection_closure_check(inst: &AxiomInstance) -> Result<ProjectionVerdict> {
    let sys = inst.cert.system()?;
    let ideal = w_ideal(&inst.w_gens, &[], inst.ring.m, inst.bounds.order)?;
    let drop: Vec<DerivVar> = ideal.vars().iter().filter(|v| v.family == Family::Y).cloned().collect();
    let elim = ideal.eliminate(&drop)?;
    let mut eliminants = Vec::new();
    for e in elim.gens() {
        let rc = sys.full_reduce(e);
        if !rc.verify(e, sys) {
            return Err(Error::RejectedCertificate("reduction certificate failed to verify".into()));
        }
        eliminants.push((e.clone(), rc.remainder));
    }
    let holds = eliminants.iter().all(|(_, r)| r.is_zero());
    Ok(ProjectionVerdict {
        order_bound: inst.bounds.order,
        eliminants,
        holds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Lambda,
    H,
    Open,
    W,
}

impl CheckKind {
    pub fn label(&self) -> &'static str {
        match self {
            CheckKind::Lambda => "lambda",
            CheckKind::H => "H",
            CheckKind::Open => "open",
            CheckKind::W => "W",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub kind: CheckKind,
    pub poly: DiffPoly,
    pub value: Scalar,
    /// Lambda and W checks expect zero; H and open checks expect nonzero.
    pub expect_zero: bool,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.value.is_zero() == self.expect_zero
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessStatus {
    Found,
    Exhausted,
    InvalidInstance,
}

impl fmt::Display for WitnessStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessStatus::Found => "found",
            WitnessStatus::Exhausted => "exhausted",
            WitnessStatus::InvalidInstance => "invalid_instance",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub candidates: u64,
    pub degree: u32,
    pub height: u32,
    /// Candidates rejected at their first failing check, per check kind in
    /// the order lambda, H, open, W.
    pub failures: [u64; 4],
    /// Candidates per level, in level order.
    pub per_level: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub status: WitnessStatus,
    pub witness: Option<ModelPoint>,
    /// Evaluation transcript at the witness.
    pub checks: Vec<CheckRecord>,
    pub stats: SearchStats,
    pub rejection: Option<InstanceRejection>,
}

/// Evaluate every check at ā (and Dā for W) from scratch.
pub fn evaluate_checks(inst: &AxiomInstance, a: &ModelPoint) -> Result<Vec<CheckRecord>> {
    let sys = inst.cert.system()?;
    let da = a.derivative(inst.ring.d_symbol());
    let mut out = Vec::new();
    for e in sys.elements() {
        out.push(CheckRecord {
            kind: CheckKind::Lambda,
            poly: e.poly.clone(),
            value: eval_at_model_point(&e.poly, a)?,
            expect_zero: true,
        });
    }
    out.push(CheckRecord {
        kind: CheckKind::H,
        poly: sys.h_product().clone(),
        value: eval_at_model_point(sys.h_product(), a)?,
        expect_zero: false,
    });
    for g in &inst.open_extra {
        out.push(CheckRecord {
            kind: CheckKind::Open,
            poly: g.clone(),
            value: eval_at_model_point(g, a)?,
            expect_zero: false,
        });
    }
    for w in &inst.w_gens {
        out.push(CheckRecord {
            kind: CheckKind::W,
            poly: w.clone(),
            value: eval_doubled(w, a, Some(&da))?,
            expect_zero: true,
        });
    }
    Ok(out)
}

/// First failing check kind, or `None` when ā passes everything.
fn first_failure(inst: &AxiomInstance, a: &ModelPoint) -> Result<Option<usize>> {
    let sys = inst.cert.system()?;
    for e in sys.elements() {
        if !eval_at_model_point(&e.poly, a)?.is_zero() {
            return Ok(Some(0));
        }
    }
    if eval_at_model_point(sys.h_product(), a)?.is_zero() {
        return Ok(Some(1));
    }
    for g in &inst.open_extra {
        if eval_at_model_point(g, a)?.is_zero() {
            return Ok(Some(2));
        }
    }
    let da = a.derivative(inst.ring.d_symbol());
    for w in &inst.w_gens {
        if !eval_doubled(w, a, Some(&da))?.is_zero() {
            return Ok(Some(3));
        }
    }
    Ok(None)
}

const CHUNK: u64 = 2048;

/// Enumerate model points in grid order and return the first ā ∈ O with
/// (ā, Dā) ∈ V(W). The outcome does not depend on `exec`.
pub fn witness_search(inst: &AxiomInstance, degree: u32, height: u32, exec: Exec) -> Result<WitnessReport> {
    let grid = ModelGrid {
        vars: (1..=inst.ring.n as u32).collect(),
        symbols: inst.ring.d_symbol(),
        degree,
        height,
    };
    let mut stats = SearchStats {
        degree,
        height,
        ..SearchStats::default()
    };
    for level in grid.levels()? {
        let mut level_count = 0u64;
        let mut start = 0u64;
        while start < level.size {
            let end = (start + CHUNK).min(level.size);
            let idx: Vec<u64> = (start..end).collect();
            let outcomes = par::map(exec, &idx, |i| match level.point(*i) {
                None => Ok(None),
                Some(p) => first_failure(inst, &p).map(|f| Some((p, f))),
            });
            for o in outcomes {
                let Some((p, fail)) = o? else { continue };
                stats.candidates += 1;
                level_count += 1;
                match fail {
                    Some(k) => stats.failures[k] += 1,
                    None => {
                        stats.per_level.push(level_count);
                        let checks = evaluate_checks(inst, &p)?;
                        if !checks.iter().all(|c| c.passed()) {
                            return Err(Error::RejectedCertificate(
                                "witness failed to re-verify".into(),
                            ));
                        }
                        return Ok(WitnessReport {
                            status: WitnessStatus::Found,
                            witness: Some(p),
                            checks,
                            stats,
                            rejection: None,
                        });
                    }
                }
            }
            start = end;
        }
        stats.per_level.push(level_count);
    }
    Ok(WitnessReport {
        status: WitnessStatus::Exhausted,
        witness: None,
        checks: Vec::new(),
        stats,
        rejection: None,
    })
}

/// Validate, then search at the file's bounds.
pub fn witness_search_file(file: &InstanceFile, exec: Exec) -> Result<WitnessReport> {
    match instance_validate(file, exec)? {
        Ok(inst) => witness_search(&inst, file.bounds.degree, file.bounds.height, exec),
        Err(rej) => Ok(WitnessReport {
            status: WitnessStatus::InvalidInstance,
            witness: None,
            checks: Vec::new(),
            stats: SearchStats::default(),
            rejection: Some(rej),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = "[ring]\nm=1 n=1 field=rational_t\n[lambda]\nd1 x1\n[W]\nd1 x1\nd1 y1\ny1 - 1\n[bounds]\norder=1 degree=1 height=1\n";

    #[test]
    fn basic_instance_end_to_end() {
        let f = InstanceFile::parse(BASIC).unwrap();
        let inst = instance_validate(&f, Exec::Parallel).unwrap().unwrap();
        let pv = projection_closure_check(&inst).unwrap();
        assert!(pv.holds);
        assert!(pv.eliminants.iter().any(|(e, _)| e.to_string() == "d1 x1"));
        let rep = witness_search(&inst, 1, 1, Exec::Parallel).unwrap();
        assert_eq!(rep.status, WitnessStatus::Found);
        assert_eq!(rep.witness.as_ref().unwrap().to_string(), "x1 := t2");
        let seq = witness_search(&inst, 1, 1, Exec::Sequential).unwrap();
        assert_eq!(seq.witness, rep.witness);
        assert_eq!(seq.stats, rep.stats);
    }

    #[test]
    fn projection_misses_with_extra_generator() {
        let f = InstanceFile::parse(&BASIC.replace("y1 - 1\n", "y1 - 1\nx1\n")).unwrap();
        let inst = instance_validate(&f, Exec::Sequential).unwrap().unwrap();
        let pv = projection_closure_check(&inst).unwrap();
        assert!(!pv.holds);
    }

    #[test]
    fn rejections() {
        let f = InstanceFile::parse("[ring]\nm=1 n=1 field=rational_t\n[lambda]\nx1\n[open]\nx1\n[W]\nx1\ny1\n").unwrap();
        assert!(matches!(
            instance_validate(&f, Exec::Sequential).unwrap(),
            Err(InstanceRejection::OpenSetEmpty { .. })
        ));
        let f = InstanceFile::parse("[ring]\nm=1 n=1 field=rational_t\n[lambda]\nx1\n[W]\ny1\n").unwrap();
        assert!(matches!(
            instance_validate(&f, Exec::Sequential).unwrap(),
            Err(InstanceRejection::NotInW { .. })
        ));
    }

    #[test]
    fn trivial_and_exhausted_searches() {
        let f = InstanceFile::parse("[ring]\nm=1 n=1 field=rational_t\n[lambda]\nx1\n[W]\nx1\ny1\n").unwrap();
        let rep = witness_search_file(&f, Exec::Parallel).unwrap();
        assert_eq!(rep.witness.unwrap().to_string(), "x1 := 0");
        let f = InstanceFile::parse(&BASIC.replace("y1 - 1", "y1^2 + 1")).unwrap();
        let rep = witness_search_file(&f, Exec::Parallel).unwrap();
        assert_eq!(rep.status, WitnessStatus::Exhausted);
        assert_eq!(rep.stats.candidates, 27);
        assert_eq!(rep.stats.failures.iter().sum::<u64>(), 27);
    }
}
