//! Buchberger's algorithm with the normal selection strategy.

use std::cmp::Ordering;

use super::mpoly::{coprime, divides, lcm, Exps, MPoly, MonomialOrder};
use crate::par::{self, Exec};

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Exps,
}

/// Statistics of one Buchberger run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroebnerStats {
    pub pairs_considered: usize,
    pub pairs_skipped: usize,
    pub reductions_to_zero: usize,
}

fn select(pairs: &[Pair], order: MonomialOrder) -> usize {
    let mut best = 0;
    for (k, p) in pairs.iter().enumerate().skip(1) {
        let b = &pairs[best];
        let c = order
            .cmp(&p.lcm, &b.lcm)
            .then((p.j, p.i).cmp(&(b.j, b.i)));
        if c == Ordering::Less {
            best = k;
        }
    }
    best
}

/// Buchberger's second criterion: some other basis element's leading
/// monomial divides lcm(i, j) and both pairs with it are already treated.
fn chain_skip(p: &Pair, basis: &[MPoly], pending: &[Pair]) -> bool {
    let is_pending = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        pending.iter().any(|q| q.i == a && q.j == b)
    };
    basis.iter().enumerate().any(|(k, g)| {
        k != p.i
            && k != p.j
            && divides(g.lm().expect("nonzero"), &p.lcm)
            && !is_pending(p.i, k)
            && !is_pending(p.j, k)
    })
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by
/// decreasing leading monomial.
pub fn groebner(gens: &[MPoly]) -> (Vec<MPoly>, GroebnerStats) {
    let mut stats = GroebnerStats::default();
    let mut basis: Vec<MPoly> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(g.monic());
        }
    }
    if basis.is_empty() {
        return (basis, stats);
    }
    let order = basis[0].order();
    if basis.iter().any(|g| g.is_constant()) {
        let n = basis[0].nvars();
        return (vec![MPoly::constant(n, order, crate::Scalar::one())], stats);
    }
    let mut pairs: Vec<Pair> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push(Pair {
                i,
                j,
                lcm: lcm(basis[i].lm().expect("nonzero"), basis[j].lm().expect("nonzero")),
            });
        }
    }
    while !pairs.is_empty() {
        let k = select(&pairs, order);
        let p = pairs.swap_remove(k);
        stats.pairs_considered += 1;
        let (fi, fj) = (&basis[p.i], &basis[p.j]);
        if coprime(fi.lm().expect("nonzero"), fj.lm().expect("nonzero"))
            || chain_skip(&p, &basis, &pairs)
        {
            stats.pairs_skipped += 1;
            continue;
        }
        let s = fi.spoly(fj).normal_form(&basis);
        if s.is_zero() {
            stats.reductions_to_zero += 1;
            continue;
        }
        let s = s.monic();
        if s.is_constant() {
            let n = s.nvars();
            return (vec![MPoly::constant(n, order, crate::Scalar::one())], stats);
        }
        let new = basis.len();
        let slm = s.lm().expect("nonzero").clone();
        basis.push(s);
        for (i, b) in basis[..new].iter().enumerate() {
            pairs.push(Pair {
                i,
                j: new,
                lcm: lcm(b.lm().expect("nonzero"), &slm),
            });
        }
    }
    (reduce_basis(basis), stats)
}

/// Minimalize and interreduce a Gröbner basis.
pub fn reduce_basis(basis: Vec<MPoly>) -> Vec<MPoly> {
    let mut minimal: Vec<MPoly> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let lm = g.lm().expect("nonzero");
        let redundant = basis.iter().enumerate().any(|(l, h)| {
            let hl = h.lm().expect("nonzero");
            l != k && divides(hl, lm) && (hl != lm || l < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<MPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != k)
            .map(|(_, g)| g.clone())
            .collect();
        let (e, c) = minimal[k].terms().next().expect("nonzero").clone();
        let lead = MPoly::from_terms(minimal[k].nvars(), minimal[k].order(), [(e, c)]);
        let tail = minimal[k].sub(&lead).normal_form(&others);
        out.push(lead.add(&tail).monic());
    }
    out.sort_by(|a, b| {
        let o = a.order();
        o.cmp(b.lm().expect("nonzero"), a.lm().expect("nonzero"))
    });
    out
}

/// Every S-polynomial of `basis` reduces to zero.
pub fn self_check(basis: &[MPoly], exec: Exec) -> bool {
    let mut idx = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            idx.push((i, j));
        }
    }
    par::map(exec, &idx, |(i, j)| basis[*i].spoly(&basis[*j]).normal_form(basis).is_zero())
        .into_iter()
        .all(|b| b)
}
