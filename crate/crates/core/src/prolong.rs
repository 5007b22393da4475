//! The prolongation τ with τf(a, Da) = D(f(a)) for D = ∂/∂t_{m+1}.

use std::fmt;

use crate::diffpoly::{eval_at_model_point, eval_doubled, DiffPoly, Family, FieldMode, ModelPoint, Ring};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::scalar::Scalar;

/// A polynomial over the doubled variables that is linear in the y-family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TauPoly(DiffPoly);

impl TauPoly {
    /// Wrap `p` after checking y-linearity.
    pub fn new(p: DiffPoly) -> Result<Self> {
        if !Self::is_y_linear(&p) {
            return Err(Error::Precondition(format!("`{p}` is not linear in the y-variables")));
        }
        Ok(TauPoly(p))
    }

    pub fn is_y_linear(p: &DiffPoly) -> bool {
        p.terms().all(|(m, _)| {
            m.factors()
                .iter()
                .filter(|(v, _)| v.family == Family::Y)
                .map(|(_, e)| *e)
                .sum::<u32>()
                <= 1
        })
    }

    pub fn value(&self) -> &DiffPoly {
        &self.0
    }

    pub fn into_inner(self) -> DiffPoly {
        self.0
    }

    /// The part free of y-variables (which equals f^D).
    pub fn y_free_part(&self) -> DiffPoly {
        DiffPoly::from_terms(
            self.0
                .terms()
                .filter(|(m, _)| m.factors().iter().all(|(v, _)| v.family == Family::X))
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }
}

impl fmt::Display for TauPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// f^D: D applied to every coefficient.
pub fn coefficient_d(f: &DiffPoly, ring: &Ring) -> DiffPoly {
    f.coeff_derivative(ring.d_symbol())
}

pub fn tau(f: &DiffPoly, ring: &Ring) -> Result<TauPoly> {
    if let Some(v) = f.variables().into_iter().find(|v| v.family == Family::Y) {
        return Err(Error::YVariable(v.to_string()));
    }
    let mut out = coefficient_d(f, ring);
    for v in f.variables() {
        let dy = DiffPoly::var(v.with_family(Family::Y));
        out = &out + &(&f.formal_partial(&v) * &dy);
    }
    TauPoly::new(out)
}

/// `(f, τf)` for each element, in input order.
pub fn tau_set(polys: &[DiffPoly], ring: &Ring, exec: Exec) -> Result<Vec<(DiffPoly, TauPoly)>> {
    par::map(exec, polys, |f| tau(f, ring).map(|t| (f.clone(), t)))
        .into_iter()
        .collect()
}

/// Result of comparing τf(p, Dp) with D(f(p)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DCompatibility {
    pub tau_value: Scalar,
    pub d_of_value: Scalar,
}

impl DCompatibility {
    pub fn holds(&self) -> bool {
        self.tau_value == self.d_of_value
    }
}

pub fn d_compatibility_check(f: &DiffPoly, p: &ModelPoint, ring: &Ring) -> Result<DCompatibility> {
    if ring.field != FieldMode::RationalT {
        return Err(Error::Precondition(
            "the chain-rule check needs field mode rational_t".into(),
        ));
    }
    let t = tau(f, ring)?;
    let d = ring.d_symbol();
    let dp = p.derivative(d);
    let tau_value = eval_doubled(t.value(), p, Some(&dp))?;
    let d_of_value = eval_at_model_point(f, p)?.derivative(d);
    Ok(DCompatibility {
        tau_value,
        d_of_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::TPoly;

    #[test]
    fn tau_examples() {
        let r = Ring::new(1, 1, FieldMode::Constants).unwrap();
        let t = |s: &str| tau(&r.parse(s).unwrap(), &r).unwrap().to_string();
        assert_eq!(t("x1"), "y1");
        assert_eq!(t("x1^2"), "2*x1*y1");
        assert_eq!(t("d1 x1"), "d1 y1");
        let rt = Ring::new(1, 1, FieldMode::RationalT).unwrap();
        let f = rt.parse("t2*x1").unwrap();
        assert_eq!(tau(&f, &rt).unwrap().value(), &rt.parse("x1 + t2*y1").unwrap());
        assert!(matches!(tau(&r.parse("y1").unwrap(), &r), Err(Error::YVariable(_))));
    }

    #[test]
    fn tau_set_keeps_order() {
        let r = Ring::new(1, 1, FieldMode::Constants).unwrap();
        let s = r.parse_list("d1 x1; x1^2").unwrap();
        let out = tau_set(&s, &r, Exec::Parallel).unwrap();
        assert_eq!(out[0].1.to_string(), "d1 y1");
        assert_eq!(out[1].1.to_string(), "2*x1*y1");
        assert!(tau_set(&[], &r, Exec::Sequential).unwrap().is_empty());
    }

    #[test]
    fn chain_rule_examples() {
        let r = Ring::new(2, 1, FieldMode::RationalT).unwrap();
        let p = ModelPoint::new().with(1, TPoly::symbol(3));
        let c = d_compatibility_check(&r.parse("x1^2").unwrap(), &p, &r).unwrap();
        assert!(c.holds());
        assert_eq!(c.tau_value, Scalar::symbol(3) * Scalar::from_int(2));
        let p = ModelPoint::new().with(1, TPoly::symbol(1).mul(&TPoly::symbol(3)));
        let c = d_compatibility_check(&r.parse("d1 x1").unwrap(), &p, &r).unwrap();
        assert!(c.holds());
        assert_eq!(c.tau_value, Scalar::one());
        let p = ModelPoint::new().with(1, TPoly::one());
        let c = d_compatibility_check(&r.parse("t3*x1").unwrap(), &p, &r).unwrap();
        assert!(c.holds());
        assert_eq!(c.d_of_value, Scalar::one());
        let c = d_compatibility_check(&r.parse("x1").unwrap(), &ModelPoint::new(), &r);
        assert!(c.is_err());
    }

    #[test]
    fn y_linearity_and_free_part() {
        let r = Ring::new(1, 1, FieldMode::RationalT).unwrap();
        let f = r.parse("t2^2*x1^3 + d1 x1").unwrap();
        let t = tau(&f, &r).unwrap();
        assert_eq!(t.y_free_part(), r.parse("2*t2*x1^3").unwrap());
        assert!(TauPoly::new(r.parse("y1^2").unwrap()).is_err());
    }
}
