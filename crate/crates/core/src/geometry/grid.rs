//! Enumeration of model points: each xⱼ gets a polynomial in t₁..t_s with
//! integer coefficients.
//!
//! Order: by level k = 0, 1, …, d, where level k holds the points whose
//! largest coefficient-carrying degree is exactly k. Within a level the
//! coefficient vector is read as a mixed-radix numeral, most significant
//! first: variables x₁, x₂, … in turn, and inside one variable the
//! t-monomials of degree ≤ k in graded order (1, t₁, …, t_s, t₁², t₁t₂, …).
//! Each digit runs through the values 0, 1, −1, 2, −2, … up to the height.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::diffpoly::ModelPoint;
use crate::error::{Error, Result};
use crate::scalar::{TExps, TPoly};

/// t-monomials of degree ≤ `d` in `s` symbols, graded, lex within a degree
/// (t₁ first).
pub fn t_monomials(s: usize, d: u32) -> Vec<TExps> {
    fn rec(s: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == s {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(s, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for deg in 0..=d {
        let mut level = Vec::new();
        rec(s, deg, &mut Vec::with_capacity(s), &mut level);
        out.extend(level);
    }
    out
}

/// The k-th value in the order 0, 1, −1, 2, −2, ….
pub fn digit_value(k: u64) -> i64 {
    let k = k as i64;
    if k % 2 == 1 {
        (k + 1) / 2
    } else {
        -(k / 2)
    }
}

#[derive(Clone, Debug)]
pub struct ModelGrid {
    /// Variable indices xⱼ, in significance order.
    pub vars: Vec<u32>,
    /// Number of t-symbols.
    pub symbols: usize,
    pub degree: u32,
    pub height: u32,
}

/// One level of the grid.
#[derive(Clone, Debug)]
pub struct GridLevel {
    pub level: u32,
    monos: Vec<TExps>,
    vars: Vec<u32>,
    base: u64,
    pub size: u64,
}

impl ModelGrid {
    pub fn levels(&self) -> Result<Vec<GridLevel>> {
        let base = 2 * self.height as u64 + 1;
        (0..=self.degree)
            .map(|level| {
                let monos = t_monomials(self.symbols, level);
                let digits = (monos.len() * self.vars.len()) as u32;
                let size = base.checked_pow(digits).ok_or_else(|| {
                    Error::Config(format!(
                        "search grid level {level} has {base}^{digits} points, too many to index"
                    ))
                })?;
                Ok(GridLevel {
                    level,
                    monos,
                    vars: self.vars.clone(),
                    base,
                    size,
                })
            })
            .collect()
    }

    /// Total number of points over all levels (points of lower levels are
    /// counted once, at their own level).
    pub fn total(&self) -> Result<u64> {
        Ok(self.levels()?.iter().map(|l| l.exact_count()).sum())
    }
}

impl GridLevel {
    /// The point with index `i`, or `None` when it belongs to a lower level.
    pub fn point(&self, i: u64) -> Option<ModelPoint> {
        let nd = self.monos.len() * self.vars.len();
        let mut digits = vec![0u64; nd];
        let mut rest = i;
        for slot in digits.iter_mut().rev() {
            *slot = rest % self.base;
            rest /= self.base;
        }
        let per = self.monos.len();
        let top = self.level;
        let reaches = digits
            .iter()
            .enumerate()
            .any(|(k, d)| *d != 0 && self.monos[k % per].iter().sum::<u32>() == top);
        if top > 0 && !reaches {
            return None;
        }
        let mut p = ModelPoint::new();
        for (vi, v) in self.vars.iter().enumerate() {
            let terms = (0..per).filter_map(|k| {
                let d = digits[vi * per + k];
                (d != 0).then(|| {
                    (
                        self.monos[k].clone(),
                        BigRational::from_integer(BigInt::from(digit_value(d))),
                    )
                })
            });
            p = p.with(*v, TPoly::from_terms(terms));
        }
        Some(p)
    }

    /// Number of indices that denote points of exactly this level.
    pub fn exact_count(&self) -> u64 {
        if self.level == 0 {
            return self.size;
        }
        let lower = self
            .monos
            .iter()
            .filter(|m| m.iter().sum::<u32>() < self.level)
            .count()
            * self.vars.len();
        self.size - self.base.pow(lower as u32)
    }
}
