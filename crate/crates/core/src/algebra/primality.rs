//! Desk-scale primality cascade for polynomial ideals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ideal::AlgIdeal;
use super::mpoly::{Exps, MPoly, MonomialOrder};
use crate::diffpoly::{DerivVar, DiffPoly, Monomial};
use crate::error::Result;
use crate::scalar::{Scalar, TPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimalityConfig {
    /// Largest total degree of a candidate factor or probe polynomial.
    pub degree_bound: u32,
    /// Largest absolute value of a candidate integer coefficient.
    pub height_bound: u32,
    /// Budget of candidates per search stage.
    pub max_candidates: usize,
    /// Accept the ideal as prime when the cascade ends undecided.
    pub assert_prime: bool,
}

impl Default for PrimalityConfig {
    fn default() -> Self {
        PrimalityConfig {
            degree_bound: 2,
            height_bound: 3,
            max_candidates: 200_000,
            assert_prime: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeStatus {
    Prime,
    NotPrime,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeMethod {
    Linear,
    PrincipalIrreducible,
    Certificate,
    Counterexample,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeWitness {
    /// `f·g ∈ I` with `f, g ∉ I`.
    ZeroDivisors { f: DiffPoly, g: DiffPoly },
    /// `1 ∈ I`.
    UnitIdeal,
    /// No factor of degree ≤ `degree_bound` with coefficients of height
    /// ≤ `height_bound` exists; `candidates` were tried.
    Irreducible {
        degree_bound: u32,
        height_bound: u32,
        candidates: usize,
    },
    /// The search ended without a decision.
    Searched {
        degree_bound: u32,
        height_bound: u32,
        candidates: usize,
        truncated: bool,
    },
    Asserted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimalityVerdict {
    pub status: PrimeStatus,
    pub method: Option<PrimeMethod>,
    pub witness: Option<PrimeWitness>,
}

impl fmt::Display for PrimeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrimeStatus::Prime => "prime",
            PrimeStatus::NotPrime => "not_prime",
            PrimeStatus::Unknown => "unknown",
        })
    }
}

impl fmt::Display for PrimeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrimeMethod::Linear => "linear",
            PrimeMethod::PrincipalIrreducible => "principal-irreducible",
            PrimeMethod::Certificate => "certificate",
            PrimeMethod::Counterexample => "counterexample",
        })
    }
}

impl fmt::Display for PrimeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeWitness::ZeroDivisors { f: a, g: b } => write!(f, "zero divisors ({a}) * ({b})"),
            PrimeWitness::UnitIdeal => write!(f, "1 lies in the ideal"),
            PrimeWitness::Irreducible {
                degree_bound,
                height_bound,
                candidates,
            } => write!(
                f,
                "no factor up to degree {degree_bound}, height {height_bound} ({candidates} candidates)"
            ),
            PrimeWitness::Searched {
                degree_bound,
                height_bound,
                candidates,
                truncated,
            } => write!(
                f,
                "undecided after {candidates} candidates (degree {degree_bound}, height {height_bound}{})",
                if *truncated { ", budget exhausted" } else { "" }
            ),
            PrimeWitness::Asserted => write!(f, "user-asserted"),
        }
    }
}

impl PrimalityVerdict {
    fn prime(method: PrimeMethod, witness: Option<PrimeWitness>) -> Self {
        PrimalityVerdict {
            status: PrimeStatus::Prime,
            method: Some(method),
            witness,
        }
    }

    fn not_prime(witness: PrimeWitness) -> Self {
        PrimalityVerdict {
            status: PrimeStatus::NotPrime,
            method: Some(PrimeMethod::Counterexample),
            witness: Some(witness),
        }
    }

    /// Re-check a verdict's witness against `ideal`.
    pub fn verify(&self, ideal: &AlgIdeal) -> Result<bool> {
        Ok(match &self.witness {
            Some(PrimeWitness::ZeroDivisors { f, g }) => {
                self.status == PrimeStatus::NotPrime
                    && ideal.contains(&(f * g))?
                    && !ideal.contains(f)?
                    && !ideal.contains(g)?
            }
            Some(PrimeWitness::UnitIdeal) => ideal.contains(&DiffPoly::one())?,
            _ => self.status != PrimeStatus::NotPrime,
        })
    }
}

/// Scalar-coefficient polynomial lifted to integer coefficients in the
/// ideal variables followed by the t-symbols.
struct Lifted {
    nx: usize,
    poly: MPoly,
}

/// Clear denominators and remove the content in `ℚ[t]`, then view the
/// result as an integer polynomial in `vars` and t. Returns `None` when a
/// variable outside `vars` occurs.
fn lift(f: &DiffPoly, vars: &[DerivVar]) -> Option<Lifted> {
    let mut den = TPoly::one();
    for (_, c) in f.terms() {
        let d = c.denominator();
        let g = den.gcd(&d);
        den = den.mul(&d.div_exact(&g).expect("gcd divides"));
    }
    let mut coeffs: Vec<(Monomial, TPoly)> = f
        .terms()
        .map(|(m, c)| {
            let s = c * &Scalar::from_tpoly(den.clone());
            (m.clone(), s.as_tpoly().expect("denominators cleared"))
        })
        .collect();
    let mut content = coeffs[0].1.clone();
    for (_, c) in &coeffs[1..] {
        content = content.gcd(c);
    }
    if !content.is_one() {
        for (_, c) in coeffs.iter_mut() {
            *c = c.div_exact(&content).expect("content divides");
        }
    }
    let width = coeffs.iter().map(|(_, c)| c.width()).max().unwrap_or(0);
    let nx = vars.len();
    let mut terms: Vec<(Exps, BigRational)> = Vec::new();
    for (m, c) in &coeffs {
        let mut ex = vec![0u32; nx + width];
        for (v, k) in m.factors() {
            let i = vars.iter().position(|w| w == v)?;
            ex[i] = *k;
        }
        for (te, r) in c.terms() {
            let mut e = ex.clone();
            for (j, k) in te.iter().enumerate() {
                e[nx + j] = *k;
            }
            terms.push((e, r.clone()));
        }
    }
    let mut l = BigInt::one();
    for (_, r) in &terms {
        l = l.lcm(r.denom());
    }
    let mut ints: Vec<BigInt> = terms
        .iter()
        .map(|(_, r)| (r * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if !g.is_zero() && !g.is_one() {
        for c in ints.iter_mut() {
            *c = &*c / &g;
        }
    }
    let order = MonomialOrder::GRevLex;
    let poly = MPoly::from_terms(
        nx + width,
        order,
        terms
            .into_iter()
            .zip(ints)
            .map(|((e, _), c)| (e, Scalar::from_bigint(c))),
    );
    Some(Lifted { nx, poly })
}

fn unlift(p: &MPoly, nx: usize, vars: &[DerivVar]) -> DiffPoly {
    DiffPoly::from_terms(p.terms().map(|(e, c)| {
        let m = Monomial::from_factors(
            e[..nx]
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| (vars[i].clone(), *k)),
        );
        let mut s = c.clone();
        for (j, k) in e[nx..].iter().enumerate() {
            if *k > 0 {
                s = &s * &Scalar::symbol(j + 1).pow(*k);
            }
        }
        (m, s)
    }))
}

fn monomials_of_degree_range(n: usize, lo: u32, hi: u32) -> Vec<Exps> {
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
    let mut all = Vec::new();
    rec(n, hi, &mut Vec::new(), &mut all);
    all.retain(|e| e.iter().sum::<u32>() >= lo);
    all
}

enum FactorSearch {
    Found(DiffPoly, DiffPoly),
    Exhausted { candidates: usize, degree: u32 },
    Truncated { candidates: usize },
}

/// Search for a factorization of `f` into two factors of positive degree
/// in `vars`, with integer coefficients in the lifted variables.
fn factor_search(f: &DiffPoly, vars: &[DerivVar], cfg: &PrimalityConfig) -> FactorSearch {
    let Some(Lifted { nx, poly }) = lift(f, vars) else {
        return FactorSearch::Truncated { candidates: 0 };
    };
    let total = poly.total_degree();
    let top = cfg.degree_bound.min(total / 2);
    let n = poly.nvars();
    let h = cfg.height_bound as i64;
    let lm_f = poly.lm().expect("nonzero").clone();
    let mut candidates = 0usize;
    let single = |a: &MPoly| -> Option<(DiffPoly, DiffPoly)> {
        let al = a.lm()?;
        if !al.iter().zip(&lm_f).all(|(x, y)| x <= y) {
            return None;
        }
        if !(0..nx).any(|i| a.uses_var(i)) || a.total_degree() == 0 {
            return None;
        }
        let (r, q) = poly.normal_form_with_quotients(std::slice::from_ref(a));
        if !r.is_zero() || !(0..nx).any(|i| q[0].uses_var(i)) {
            return None;
        }
        Some((unlift(a, nx, vars), unlift(&q[0], nx, vars)))
    };
    for k in 1..=top {
        let monos = monomials_of_degree_range(n, 0, k);
        let len = monos.len();
        let mut digits = vec![-h; len];
        loop {
            // Only canonical sign representatives whose degree is exactly k.
            let top_nonzero = (0..len).rev().find(|i| digits[*i] != 0);
            let ok = match top_nonzero {
                Some(i) => digits[i] > 0,
                None => false,
            };
            let deg_k = ok
                && (0..len).any(|i| digits[i] != 0 && monos[i].iter().sum::<u32>() == k);
            if deg_k {
                candidates += 1;
                if candidates > cfg.max_candidates {
                    return FactorSearch::Truncated {
                        candidates: candidates - 1,
                    };
                }
                let a = MPoly::from_terms(
                    n,
                    MonomialOrder::GRevLex,
                    (0..len)
                        .filter(|i| digits[*i] != 0)
                        .map(|i| (monos[i].clone(), Scalar::from_int(digits[i]))),
                );
                if let Some((x, y)) = single(&a) {
                    return FactorSearch::Found(x, y);
                }
            }
            let mut pos = 0;
            loop {
                if pos == len {
                    break;
                }
                if digits[pos] < h {
                    digits[pos] += 1;
                    break;
                }
                digits[pos] = -h;
                pos += 1;
            }
            if pos == len {
                break;
            }
        }
    }
    FactorSearch::Exhausted {
        candidates,
        degree: top,
    }
}

/// Candidate probe polynomials: variables, pairwise sums and differences,
/// variable plus or minus one, and monomials up to the degree bound.
fn probes(vars: &[DerivVar], cfg: &PrimalityConfig) -> Vec<DiffPoly> {
    let mut out: Vec<DiffPoly> = Vec::new();
    let xs: Vec<DiffPoly> = vars.iter().map(|v| DiffPoly::var(v.clone())).collect();
    out.extend(xs.iter().cloned());
    for i in 0..xs.len() {
        for j in (i + 1)..xs.len() {
            out.push(&xs[i] - &xs[j]);
            out.push(&xs[i] + &xs[j]);
        }
        out.push(&xs[i] - &DiffPoly::one());
        out.push(&xs[i] + &DiffPoly::one());
    }
    for e in monomials_of_degree_range(vars.len(), 2, cfg.degree_bound.max(1)) {
        out.push(DiffPoly::term(
            Monomial::from_factors(
                e.iter()
                    .enumerate()
                    .filter(|(_, k)| **k > 0)
                    .map(|(i, k)| (vars[i].clone(), *k)),
            ),
            Scalar::one(),
        ));
    }
    out
}

/// Run the cascade: unit ideal, linear, principal factor search, then a
/// zero-divisor probe; `unknown` when none decides.
pub fn primality_oracle(ideal: &AlgIdeal, cfg: &PrimalityConfig) -> Result<PrimalityVerdict> {
    let ideal = ideal.buchberger();
    let basis = ideal.basis().expect("attached").to_vec();
    if basis.len() == 1 && basis[0].is_constant() {
        return Ok(PrimalityVerdict::not_prime(PrimeWitness::UnitIdeal));
    }
    if basis.iter().all(|g| g.total_degree() <= 1) {
        return Ok(PrimalityVerdict::prime(PrimeMethod::Linear, None));
    }
    let vars = ideal.vars().to_vec();
    let emit = |a: DiffPoly, b: DiffPoly| -> Result<Option<PrimalityVerdict>> {
        let v = PrimalityVerdict::not_prime(PrimeWitness::ZeroDivisors { f: a, g: b });
        Ok(if v.verify(&ideal)? { Some(v) } else { None })
    };
    let mut candidates = 0usize;
    let mut truncated = false;
    if basis.len() == 1 {
        match factor_search(&basis[0], &vars, cfg) {
            FactorSearch::Found(a, b) => {
                if let Some(v) = emit(a, b)? {
                    return Ok(v);
                }
            }
            FactorSearch::Exhausted { candidates, degree } => {
                return Ok(PrimalityVerdict::prime(
                    PrimeMethod::PrincipalIrreducible,
                    Some(PrimeWitness::Irreducible {
                        degree_bound: degree,
                        height_bound: cfg.height_bound,
                        candidates,
                    }),
                ));
            }
            FactorSearch::Truncated { candidates: c } => {
                candidates += c;
                truncated = true;
            }
        }
    } else {
        for g in &basis {
            match factor_search(g, &vars, cfg) {
                FactorSearch::Found(a, b) => {
                    if let Some(v) = emit(a, b)? {
                        return Ok(v);
                    }
                }
                FactorSearch::Exhausted { candidates: c, .. } => candidates += c,
                FactorSearch::Truncated { candidates: c } => {
                    candidates += c;
                    truncated = true;
                }
            }
        }
        let ps: Vec<DiffPoly> = probes(&vars, cfg)
            .into_iter()
            .filter(|p| !ideal.contains(p).unwrap_or(true))
            .collect();
        'outer: for i in 0..ps.len() {
            for j in i..ps.len() {
                candidates += 1;
                if candidates > cfg.max_candidates {
                    truncated = true;
                    break 'outer;
                }
                if ideal.contains(&(&ps[i] * &ps[j]))? {
                    if let Some(v) = emit(ps[i].clone(), ps[j].clone())? {
                        return Ok(v);
                    }
                }
            }
        }
    }
    if cfg.assert_prime {
        return Ok(PrimalityVerdict::prime(
            PrimeMethod::Certificate,
            Some(PrimeWitness::Asserted),
        ));
    }
    Ok(PrimalityVerdict {
        status: PrimeStatus::Unknown,
        method: None,
        witness: Some(PrimeWitness::Searched {
            degree_bound: cfg.degree_bound,
            height_bound: cfg.height_bound,
            candidates,
            truncated,
        }),
    })
}
