use std::collections::BTreeMap;
use std::fmt;

use super::poly::DiffPoly;
use super::var::{DerivVar, Family};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, TPoly};

/// Concrete values for the x-variables: xⱼ ↦ a polynomial in t₁..t_{m+1}.
/// The derivative θxⱼ evaluates to the matching iterated partial derivative.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ModelPoint {
    pub assignment: BTreeMap<u32, TPoly>,
}

impl ModelPoint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: u32, value: TPoly) -> Self {
        self.assignment.insert(var, value);
        self
    }

    pub fn get(&self, var: u32) -> Option<&TPoly> {
        self.assignment.get(&var)
    }

    /// ∂^θ of the assigned value.
    pub fn value_of(&self, v: &DerivVar) -> Option<TPoly> {
        let mut p = self.assignment.get(&v.var)?.clone();
        for (i, e) in v.theta.exps().iter().enumerate() {
            for _ in 0..*e {
                p = p.derivative(i + 1);
            }
        }
        Some(p)
    }

    /// The point obtained by applying ∂/∂t_k to every assigned value.
    pub fn derivative(&self, k: usize) -> ModelPoint {
        ModelPoint {
            assignment: self
                .assignment
                .iter()
                .map(|(j, p)| (*j, p.derivative(k)))
                .collect(),
        }
    }
}

impl fmt::Display for ModelPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (j, p)) in self.assignment.iter().enumerate() {
            if n > 0 {
                write!(f, "; ")?;
            }
            write!(f, "x{j} := {p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ModelPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModelPoint({self})")
    }
}

/// Substitute model values for the x-family and, optionally, the y-family.
pub fn eval_doubled(f: &DiffPoly, x: &ModelPoint, y: Option<&ModelPoint>) -> Result<Scalar> {
    let mut cache: BTreeMap<DerivVar, TPoly> = BTreeMap::new();
    for v in f.variables() {
        let val = match v.family {
            Family::X => x.value_of(&v),
            Family::Y => match y {
                Some(y) => y.value_of(&v),
                None => return Err(Error::YVariable(v.to_string())),
            },
        };
        let val = val.ok_or_else(|| Error::Unassigned(v.to_string()))?;
        cache.insert(v, val);
    }
    let mut num_acc = TPoly::zero();
    let mut frac_acc: Option<Scalar> = None;
    for (m, c) in f.terms() {
        let mut prod = TPoly::one();
        for (v, e) in m.factors() {
            prod = prod.mul(&cache[v].pow(*e));
        }
        match c.as_tpoly() {
            Some(cp) => num_acc = num_acc.add(&cp.mul(&prod)),
            None => {
                let t = c * &Scalar::from_tpoly(prod);
                frac_acc = Some(match frac_acc {
                    Some(a) => &a + &t,
                    None => t,
                });
            }
        }
    }
    let base = Scalar::from_tpoly(num_acc);
    Ok(match frac_acc {
        Some(a) => &base + &a,
        None => base,
    })
}

/// Evaluate an x-only polynomial at a model point.
pub fn eval_at_model_point(f: &DiffPoly, p: &ModelPoint) -> Result<Scalar> {
    eval_doubled(f, p, None)
}
