//! Rankings on derivative variables.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::diffpoly::{DerivVar, DiffPoly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Ranking {
    /// Compare (order, index, lex exponents).
    #[default]
    Orderly,
    /// Compare (variable priority, order, lex exponents). The list names the
    /// variable indices from highest to lowest priority.
    Elimination(Vec<u32>),
}

impl Ranking {
    pub fn elimination(priority: Vec<u32>) -> Result<Self> {
        let mut sorted = priority.clone();
        sorted.sort_unstable();
        let n = sorted.len() as u32;
        if sorted != (1..=n).collect::<Vec<_>>() {
            return Err(Error::Config(format!(
                "elimination ranking needs a permutation of 1..={n}, got {priority:?}"
            )));
        }
        Ok(Ranking::Elimination(priority))
    }

    fn priority(&self, var: u32) -> usize {
        match self {
            Ranking::Orderly => var as usize,
            Ranking::Elimination(p) => {
                let pos = p.iter().position(|v| *v == var).unwrap_or(p.len());
                p.len() - pos
            }
        }
    }

    /// Compare two derivatives. The y-family ranks above the x-family.
    pub fn compare(&self, u: &DerivVar, v: &DerivVar) -> Ordering {
        u.family.cmp(&v.family).then_with(|| match self {
            Ranking::Orderly => u
                .order()
                .cmp(&v.order())
                .then(u.var.cmp(&v.var))
                .then_with(|| u.theta.cmp(&v.theta)),
            Ranking::Elimination(_) => self
                .priority(u.var)
                .cmp(&self.priority(v.var))
                .then(u.order().cmp(&v.order()))
                .then_with(|| u.theta.cmp(&v.theta)),
        })
    }

    /// Highest-ranked variable of `f`.
    pub fn leader(&self, f: &DiffPoly) -> Option<DerivVar> {
        f.variables().into_iter().max_by(|a, b| self.compare(a, b))
    }

    /// Variables of `f`, highest-ranked first.
    pub fn sorted_vars_desc(&self, f: &DiffPoly) -> Vec<DerivVar> {
        let mut vs: Vec<_> = f.variables().into_iter().collect();
        vs.sort_by(|a, b| self.compare(b, a));
        vs
    }
}

impl FromStr for Ranking {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "orderly" {
            return Ok(Ranking::Orderly);
        }
        if let Some(rest) = s.strip_prefix("elim:").or_else(|| s.strip_prefix("elimination:")) {
            let vars = rest
                .split(',')
                .map(|t| {
                    t.trim()
                        .trim_start_matches('x')
                        .parse::<u32>()
                        .map_err(|_| Error::Config(format!("bad variable `{t}` in ranking")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ranking::elimination(vars);
        }
        Err(Error::Config(format!(
            "unknown ranking `{s}` (expected orderly or elim:i,j,...)"
        )))
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ranking::Orderly => write!(f, "orderly"),
            Ranking::Elimination(p) => {
                let s: Vec<String> = p.iter().map(|v| v.to_string()).collect();
                write!(f, "elim:{}", s.join(","))
            }
        }
    }
}
