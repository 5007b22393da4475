use std::fmt;
use std::str::FromStr;

use super::parse::Parser;
use super::model::ModelPoint;
use super::poly::DiffPoly;
use super::var::{DerivVar, Family, MultiIndex};
use crate::error::{Error, Result};

/// Which base field coefficients live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FieldMode {
    /// ℚ; every derivation kills every coefficient.
    #[default]
    Constants,
    /// ℚ(t₁,…,t_{m+1}); δᵢ = ∂/∂tᵢ and D = ∂/∂t_{m+1}.
    RationalT,
}

impl FromStr for FieldMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "constants" => Ok(FieldMode::Constants),
            "rational_t" | "rational-t" => Ok(FieldMode::RationalT),
            other => Err(Error::Config(format!(
                "unknown field mode `{other}` (expected constants or rational_t)"
            ))),
        }
    }
}

impl fmt::Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldMode::Constants => write!(f, "constants"),
            FieldMode::RationalT => write!(f, "rational_t"),
        }
    }
}

/// m Δ-derivations, n differential indeterminates, and a base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    pub m: usize,
    pub n: usize,
    pub field: FieldMode,
}

impl Ring {
    pub fn new(m: usize, n: usize, field: FieldMode) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        Ok(Ring { m, n, field })
    }

    /// Index of the t-symbol on which D acts.
    pub fn d_symbol(&self) -> usize {
        self.m + 1
    }

    pub fn x(&self, var: u32) -> DiffPoly {
        DiffPoly::var(self.xv(var, &[]))
    }

    /// θxᵢ with θ given by a (possibly short) exponent list.
    pub fn xv(&self, var: u32, exps: &[u32]) -> DerivVar {
        DerivVar::x(var, self.theta(exps))
    }

    pub fn yv(&self, var: u32, exps: &[u32]) -> DerivVar {
        DerivVar::y(var, self.theta(exps))
    }

    pub fn theta(&self, exps: &[u32]) -> MultiIndex {
        let mut v = vec![0; self.m];
        for (i, e) in exps.iter().enumerate().take(self.m) {
            v[i] = *e;
        }
        MultiIndex::new(v)
    }

    pub fn parse(&self, text: &str) -> Result<DiffPoly> {
        Parser::new(self, text).parse_all()
    }

    /// Parse a `;`-separated list; empty entries are skipped.
    pub fn parse_list(&self, text: &str) -> Result<Vec<DiffPoly>> {
        text.split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| self.parse(s))
            .collect()
    }

    /// A single derivative such as `d1 x2` or `y1`.
    pub fn parse_var(&self, text: &str) -> Result<DerivVar> {
        let p = self.parse(text)?;
        let mut terms = p.terms();
        if let (Some((m, c)), None) = (terms.next(), terms.next()) {
            if let [(v, 1)] = m.factors() {
                if c.is_one() {
                    return Ok(v.clone());
                }
            }
        }
        Err(Error::Syntax {
            pos: 0,
            msg: format!("expected a single derivative, got `{}`", text.trim()),
        })
    }

    /// Parse `x1 := t2; x2 := 1 - t1^2`. Values are polynomials in
    /// t₁..t_{m+1} in either field mode.
    pub fn parse_model_point(&self, text: &str) -> Result<ModelPoint> {
        let tring = Ring {
            field: FieldMode::RationalT,
            ..self.clone()
        };
        let mut p = ModelPoint::new();
        let mut offset = 0;
        for part in text.split(';') {
            let here = offset;
            offset += part.len() + 1;
            if part.trim().is_empty() {
                continue;
            }
            let (lhs, rhs) = part.split_once(":=").ok_or_else(|| Error::Syntax {
                pos: here,
                msg: format!("expected `xj := value`, got `{}`", part.trim()),
            })?;
            let v = self.parse_var(lhs).map_err(|e| shift(e, here))?;
            if v.family != Family::X || !v.theta.is_zero() {
                return Err(Error::Syntax {
                    pos: here,
                    msg: format!("model points assign plain x-variables, got `{v}`"),
                });
            }
            let rhs_t = rhs.trim_start();
            let rpos = here + lhs.len() + 2 + (rhs.len() - rhs_t.len());
            let val = tring.parse(rhs_t).map_err(|e| shift(e, rpos))?;
            let t = val
                .as_constant()
                .and_then(|c| c.as_tpoly())
                .ok_or_else(|| Error::Syntax {
                    pos: rpos,
                    msg: format!("value `{}` must be a polynomial in t", rhs.trim()),
                })?;
            p = p.with(v.var, t);
        }
        Ok(p)
    }

    /// δᵢ, validated against the ring.
    pub fn derive(&self, f: &DiffPoly, i: usize) -> Result<DiffPoly> {
        if i == 0 || i > self.m {
            return Err(Error::DerivationIndex { index: i, m: self.m });
        }
        Ok(f.derivative(i))
    }

    /// Check that a variable belongs to this ring.
    pub fn check_var(&self, v: &DerivVar) -> Result<()> {
        if v.var == 0 || v.var as usize > self.n || v.theta.len() != self.m {
            return Err(Error::Config(format!("variable {v} does not belong to the ring")));
        }
        Ok(())
    }

    pub fn check_x_only(&self, f: &DiffPoly) -> Result<()> {
        if let Some(v) = f.variables().into_iter().find(|v| v.family == Family::Y) {
            return Err(Error::YVariable(v.to_string()));
        }
        Ok(())
    }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Syntax { pos, msg } => Error::Syntax { pos: pos + by, msg },
        Error::IndexOutOfRange { pos, msg } => Error::IndexOutOfRange { pos: pos + by, msg },
        other => other,
    }
}

impl Default for Ring {
    fn default() -> Self {
        Ring {
            m: 1,
            n: 1,
            field: FieldMode::Constants,
        }
    }
}
