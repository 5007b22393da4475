//! Membership by linear algebra on the degree-truncated Macaulay matrix.
//! Independent of the Gröbner engine; used as a cross-check oracle.

use std::collections::HashMap;
use std::fmt;

use super::ideal::{AlgIdeal, VarMap};
use super::mpoly::{Exps, MPoly, MonomialOrder};
use crate::diffpoly::DiffPoly;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MacaulayResult {
    Member,
    NotMemberAtBound,
    /// The bound is below the degree of `f`.
    Indeterminate,
}

impl fmt::Display for MacaulayResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MacaulayResult::Member => "member",
            MacaulayResult::NotMemberAtBound => "not-member-at-bound",
            MacaulayResult::Indeterminate => "indeterminate",
        })
    }
}

/// All exponent vectors in `n` variables of total degree at most `d`.
fn monomials_up_to(n: usize, d: u32) -> Vec<Exps> {
    fn rec(n: usize, left: u32, cur: &mut Exps, out: &mut Vec<Exps>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Echelon form keyed by pivot monomial.
struct Echelon {
    pivots: HashMap<Exps, MPoly>,
}

impl Echelon {
    fn reduce(&self, mut p: MPoly) -> MPoly {
        loop {
            let Some(lm) = p.lm().cloned() else { return p };
            match self.pivots.get(&lm) {
                Some(row) => {
                    let c = p.lc().expect("nonzero").clone();
                    p = p.add_scaled(row, &vec![0; p.nvars()], &(-&c));
                }
                None => return p,
            }
        }
    }

    fn insert(&mut self, row: MPoly) {
        let r = self.reduce(row);
        if let Some(lm) = r.lm().cloned() {
            self.pivots.insert(lm, r.monic());
        }
    }
}

/// Is `f` in the span of `{m·g : deg(m·g) ≤ d}` for generators `g` of `ideal`?
pub fn macaulay_member(f: &DiffPoly, ideal: &AlgIdeal, d: u32) -> Result<MacaulayResult> {
    let order = MonomialOrder::GRevLex;
    let map = VarMap::new(ideal.vars(), 0);
    let mf = map.to_mpoly(f, order)?;
    if mf.is_zero() {
        return Ok(MacaulayResult::Member);
    }
    if mf.total_degree() > d {
        return Ok(MacaulayResult::Indeterminate);
    }
    let n = map.nvars();
    let mut ech = Echelon {
        pivots: HashMap::new(),
    };
    for g in ideal.gens() {
        let mg = map.to_mpoly(g, order)?;
        if mg.is_zero() {
            continue;
        }
        let dg = mg.total_degree();
        if dg > d {
            continue;
        }
        for m in monomials_up_to(n, d - dg) {
            ech.insert(mg.mul_term(&m, &crate::Scalar::one()));
        }
    }
    Ok(if ech.reduce(mf).is_zero() {
        MacaulayResult::Member
    } else {
        MacaulayResult::NotMemberAtBound
    })
}
