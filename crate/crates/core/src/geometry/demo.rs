//! Naive prolongation data versus τ of the certified ideal, and the
//! pointwise check of τg on the open set O.

use std::collections::BTreeSet;

use super::charset::{sat_ideal_member, CharSetCertificate};
use super::grid::{digit_value, ModelGrid};
use crate::diffpoly::{eval_at_model_point, eval_doubled, DerivVar, DiffPoly, FieldMode, ModelPoint, MultiIndex, Ring};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::prolong::tau;
use crate::scalar::Scalar;

/// `f, τf` for each `f` in `s`, pairwise in input order.
pub fn naive_prolongation_gens(s: &[DiffPoly], ring: &Ring) -> Result<Vec<DiffPoly>> {
    let mut out = Vec::with_capacity(2 * s.len());
    for f in s {
        ring.check_x_only(f)?;
        out.push(f.clone());
        out.push(tau(f, ring)?.into_inner());
    }
    Ok(out)
}

/// Members of [Λ]:H^∞ built as products of small multipliers with
/// derivatives of the elements, each confirmed by a reduction to zero.
pub fn saturation_members(cert: &CharSetCertificate, ring: &Ring, count: usize) -> Result<Vec<DiffPoly>> {
    let sys = cert.system()?;
    let mut multipliers = vec![DiffPoly::one()];
    for j in 1..=ring.n as u32 {
        multipliers.push(ring.x(j));
    }
    for j in 1..=ring.n as u32 {
        for i in 1..=ring.m {
            multipliers.push(DiffPoly::var(DerivVar::x(j, MultiIndex::unit(ring.m, i))));
        }
    }
    if ring.field == FieldMode::RationalT {
        multipliers.push(DiffPoly::constant(Scalar::symbol(ring.d_symbol())));
    }
    let thetas = MultiIndex::up_to_order(ring.m, 2);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    'outer: for mult in &multipliers {
        for theta in &thetas {
            for e in sys.elements() {
                let g = mult * &e.poly.apply_theta(theta);
                if g.is_zero() || !seen.insert(g.clone()) {
                    continue;
                }
                if !sat_ideal_member(&g, cert)?.0 {
                    return Err(Error::RejectedCertificate(format!(
                        "constructed member `{g}` does not reduce to zero"
                    )));
                }
                out.push(g);
                if out.len() == count {
                    break 'outer;
                }
            }
        }
    }
    Ok(out)
}

/// Does ā lie in O: Λ(ā) = 0, H(ā) ≠ 0 and every extra inequation holds?
pub fn in_open_set(cert: &CharSetCertificate, extras: &[DiffPoly], a: &ModelPoint) -> Result<bool> {
    let sys = cert.system()?;
    for f in sys.elements() {
        if !eval_at_model_point(&f.poly, a)?.is_zero() {
            return Ok(false);
        }
    }
    if eval_at_model_point(sys.h_product(), a)?.is_zero() {
        return Ok(false);
    }
    for g in extras {
        if eval_at_model_point(g, a)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Points (ā, b̄) with ā ∈ O and τf(ā, b̄) = 0 for every f ∈ Λ, both
/// coordinates drawn from the model grid at the given bounds. Pairs are
/// emitted round-robin over ā.
pub fn sample_points(
    cert: &CharSetCertificate,
    ring: &Ring,
    extras: &[DiffPoly],
    degree: u32,
    height: u32,
    count: usize,
) -> Result<Vec<(ModelPoint, ModelPoint)>> {
    let sys = cert.system()?;
    let taus: Vec<DiffPoly> = sys
        .elements()
        .iter()
        .map(|e| tau(&e.poly, ring).map(|t| t.into_inner()))
        .collect::<Result<_>>()?;
    let grid = ModelGrid {
        vars: (1..=ring.n as u32).collect(),
        symbols: ring.d_symbol(),
        degree,
        height,
    };
    let levels = grid.levels()?;
    let all_points: Vec<ModelPoint> = levels
        .iter()
        .flat_map(|l| (0..l.size).filter_map(move |i| l.point(i)))
        .collect();
    let mut xs = Vec::new();
    for a in &all_points {
        if in_open_set(cert, extras, a)? {
            xs.push(a.clone());
            if xs.len() == count {
                break;
            }
        }
    }
    let mut per_x: Vec<Vec<ModelPoint>> = Vec::with_capacity(xs.len());
    for a in &xs {
        let mut ys = Vec::new();
        for b in &all_points {
            let mut ok = true;
            for t in &taus {
                if !eval_doubled(t, a, Some(b))?.is_zero() {
                    ok = false;
                    break;
                }
            }
            if ok {
                ys.push(b.clone());
                if ys.len() == count {
                    break;
                }
            }
        }
        per_x.push(ys);
    }
    let mut out = Vec::new();
    let rounds = per_x.iter().map(|v| v.len()).max().unwrap_or(0);
    for r in 0..rounds {
        for (a, ys) in xs.iter().zip(&per_x) {
            if let Some(b) = ys.get(r) {
                out.push((a.clone(), b.clone()));
                if out.len() == count {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// A coordinate point of the doubled affine space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub coords: Vec<(DerivVar, i64)>,
    /// The element g of the certified ideal with τg ≠ 0 there.
    pub violated: DiffPoly,
    pub tau_g: DiffPoly,
    pub tau_value: Scalar,
}

#[derive(Clone, Debug)]
pub struct DemoReport {
    pub naive_gens: Vec<DiffPoly>,
    pub tested: Vec<DiffPoly>,
    /// Part (a): a point of V(naive gens) where some τg does not vanish.
    pub discrepancy: Option<Discrepancy>,
    pub grid_height: u32,
    pub grid_points: u64,
    /// Part (b): samples of O checked against τg for each tested member.
    pub samples_checked: usize,
    pub members_checked: usize,
    pub violations: Vec<(usize, usize)>,
}

fn eval_at_coords(f: &DiffPoly, coords: &[(DerivVar, i64)]) -> Scalar {
    let v = f.substitute(|v| {
        coords
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, c)| DiffPoly::from_int(*c))
    });
    v.as_constant().expect("every coordinate is assigned")
}

/// Compare the naive prolongation of `s` with τ of the certified ideal.
pub fn naive_vs_tau_demo(
    s: &[DiffPoly],
    cert: &CharSetCertificate,
    ring: &Ring,
    height: u32,
    samples: usize,
    sample_degree: u32,
    exec: Exec,
) -> Result<DemoReport> {
    let naive = naive_prolongation_gens(s, ring)?;
    let tested = saturation_members(cert, ring, 10)?;
    let taus: Vec<DiffPoly> = tested
        .iter()
        .map(|g| tau(g, ring).map(|t| t.into_inner()))
        .collect::<Result<_>>()?;
    // Part (a) uses elements of Λ only, whose variables bound the grid.
    let sys = cert.system()?;
    let checks: Vec<(DiffPoly, DiffPoly)> = sys
        .elements()
        .iter()
        .map(|e| tau(&e.poly, ring).map(|t| (e.poly.clone(), t.into_inner())))
        .collect::<Result<_>>()?;
    let mut vars = BTreeSet::new();
    for f in naive.iter().chain(checks.iter().map(|(_, t)| t)) {
        vars.extend(f.variables());
    }
    let vars: Vec<DerivVar> = vars.into_iter().collect();
    let base = 2 * height as u64 + 1;
    let points = base
        .checked_pow(vars.len() as u32)
        .ok_or_else(|| Error::Config("discrepancy grid too large".into()))?;
    let found = par::find_first(exec, 0..points, |i| {
        let mut rest = i;
        let mut coords = vec![(vars[0].clone(), 0); vars.len()];
        for k in (0..vars.len()).rev() {
            coords[k] = (vars[k].clone(), digit_value(rest % base));
            rest /= base;
        }
        if !naive.iter().all(|f| eval_at_coords(f, &coords).is_zero()) {
            return None;
        }
        checks.iter().find_map(|(g, t)| {
            let v = eval_at_coords(t, &coords);
            (!v.is_zero()).then(|| Discrepancy {
                coords: coords.clone(),
                violated: g.clone(),
                tau_g: t.clone(),
                tau_value: v,
            })
        })
    });
    let pts = sample_points(cert, ring, &[], sample_degree, height.max(1), samples)?;
    let mut violations = Vec::new();
    for (si, (a, b)) in pts.iter().enumerate() {
        for (gi, t) in taus.iter().enumerate() {
            if !eval_doubled(t, a, Some(b))?.is_zero() {
                violations.push((si, gi));
            }
        }
    }
    Ok(DemoReport {
        naive_gens: naive,
        members_checked: tested.len(),
        tested,
        discrepancy: found.map(|(_, d)| d),
        grid_height: height,
        grid_points: points,
        samples_checked: pts.len(),
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenSetVerdict {
    /// ℓ with H^ℓ·g ∈ [Λ], from the reduction certificate.
    pub ell: u32,
    /// τ(H^ℓg) − H^ℓτg − gτ(H^ℓ) expands to zero.
    pub product_rule: bool,
    /// H^ℓ·g equals the recorded combination of derivatives of Λ times
    /// H^ℓ / premultiplier.
    pub membership_identity: bool,
    pub samples_checked: usize,
    /// Samples where τg(ā, b̄) ≠ 0.
    pub violations: Vec<usize>,
}

impl OpenSetVerdict {
    pub fn passed(&self) -> bool {
        self.product_rule && self.membership_identity && self.violations.is_empty()
    }
}

/// For g ∈ [Λ]:H^∞ and samples (ā, b̄) of O with τf(ā, b̄) = 0 for f ∈ Λ,
/// check τg(ā, b̄) = 0 together with the symbolic identities behind it.
pub fn open_set_equality_check(
    cert: &CharSetCertificate,
    g: &DiffPoly,
    samples: &[(ModelPoint, ModelPoint)],
    ring: &Ring,
) -> Result<OpenSetVerdict> {
    let sys = cert.system()?;
    let (member, rc) = sat_ideal_member(g, cert)?;
    if !member {
        return Err(Error::Precondition(format!("`{g}` is not in the saturation ideal")));
    }
    let taus: Vec<DiffPoly> = sys
        .elements()
        .iter()
        .map(|e| tau(&e.poly, ring).map(|t| t.into_inner()))
        .collect::<Result<_>>()?;
    for (k, (a, b)) in samples.iter().enumerate() {
        if !in_open_set(cert, &[], a)? {
            return Err(Error::Precondition(format!(
                "sample {k} ({a}) is not a point of V(Λ) outside V(H)"
            )));
        }
        for t in &taus {
            if !eval_doubled(t, a, Some(b))?.is_zero() {
                return Err(Error::Precondition(format!(
                    "sample {k}: τ of an element does not vanish at ({a}; {b})"
                )));
            }
        }
    }
    let ell = rc.h_exponent();
    let hl = sys.h_product().pow(ell);
    let tg = tau(g, ring)?.into_inner();
    let th = tau(&hl, ring)?.into_inner();
    let lhs = tau(&(&hl * g), ring)?.into_inner();
    let product_rule = (&(&lhs - &(&hl * &tg)) - &(g * &th)).is_zero();
    let membership_identity = match hl.div_exact(&rc.premultiplier) {
        Some(q) => (&(&hl * g) - &(&q * &rc.combination(sys))).is_zero(),
        None => false,
    };
    let mut violations = Vec::new();
    for (k, (a, b)) in samples.iter().enumerate() {
        if !eval_doubled(&tg, a, Some(b))?.is_zero() {
            violations.push(k);
        }
    }
    Ok(OpenSetVerdict {
        ell,
        product_rule,
        membership_identity,
        samples_checked: samples.len(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimalityConfig;
    use crate::geometry::charset::charset_certify;
    use crate::ranking::Ranking;
    use crate::scalar::TPoly;

    fn cert(r: &Ring, s: &str) -> CharSetCertificate {
        charset_certify(&r.parse_list(s).unwrap(), &Ranking::Orderly, &PrimalityConfig::default())
    }

    #[test]
    fn naive_gens_examples() {
        let r = Ring::new(1, 1, FieldMode::Constants).unwrap();
        let g = naive_prolongation_gens(&r.parse_list("x1^2").unwrap(), &r).unwrap();
        assert_eq!(g, r.parse_list("x1^2; 2*x1*y1").unwrap());
        let g = naive_prolongation_gens(&r.parse_list("d1 x1 - 1").unwrap(), &r).unwrap();
        assert_eq!(g, r.parse_list("d1 x1 - 1; d1 y1").unwrap());
    }

    #[test]
    fn discrepancy_for_square() {
        let r = Ring::new(1, 1, FieldMode::RationalT).unwrap();
        let c = cert(&r, "x1");
        let rep = naive_vs_tau_demo(&r.parse_list("x1^2").unwrap(), &c, &r, 1, 10, 1, Exec::Parallel).unwrap();
        let d = rep.discrepancy.unwrap();
        let vals: Vec<i64> = d.coords.iter().map(|(_, v)| *v).collect();
        assert_eq!(vals, vec![0, 1]);
        assert_eq!(d.violated, r.parse("x1").unwrap());
        let rep = naive_vs_tau_demo(&r.parse_list("x1").unwrap(), &c, &r, 1, 10, 1, Exec::Sequential).unwrap();
        assert!(rep.discrepancy.is_none());
        assert!(rep.violations.is_empty());
    }

    #[test]
    fn open_set_examples() {
        let r = Ring::new(1, 1, FieldMode::RationalT).unwrap();
        let c = cert(&r, "d1 x1 - 1");
        let g = r.parse("d1 d1 x1").unwrap();
        let s = vec![(ModelPoint::new().with(1, TPoly::symbol(1)), ModelPoint::new().with(1, TPoly::one()))];
        let v = open_set_equality_check(&c, &g, &s, &r).unwrap();
        assert!(v.passed());
        let samples = sample_points(&c, &r, &[], 1, 1, 30).unwrap();
        assert_eq!(samples.len(), 30);
        let c = cert(&r, "x1");
        let s = vec![(ModelPoint::new().with(1, TPoly::zero()), ModelPoint::new().with(1, TPoly::zero()))];
        let v = open_set_equality_check(&c, &r.parse("x1^3").unwrap(), &s, &r).unwrap();
        assert!(v.passed());
        let bad = vec![(ModelPoint::new().with(1, TPoly::one()), ModelPoint::new().with(1, TPoly::zero()))];
        assert!(matches!(
            open_set_equality_check(&c, &r.parse("x1^3").unwrap(), &bad, &r),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn members_reduce_to_zero() {
        let r = Ring::new(1, 1, FieldMode::RationalT).unwrap();
        let c = cert(&r, "x1*d1 x1 - 1");
        let ms = saturation_members(&c, &r, 10).unwrap();
        assert_eq!(ms.len(), 10);
    }
}
