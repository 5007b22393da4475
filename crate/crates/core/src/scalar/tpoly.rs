//! Multivariate polynomials over ℚ in the parameter symbols t₁, t₂, ….
//!
//! Exponent vectors are stored with trailing zeros stripped, so the same
//! polynomial has one representation regardless of how many symbols the
//! surrounding ring declares. Keys are ordered lexicographically with t₁ most
//! significant, which is a monomial order and is used for division.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector over t₁, t₂, … with trailing zeros stripped.
pub type TExps = Vec<u32>;

fn trim(mut e: TExps) -> TExps {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn exps_add(a: &[u32], b: &[u32]) -> TExps {
    let len = a.len().max(b.len());
    let v = (0..len)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect();
    trim(v)
}

fn exps_sub(a: &[u32], b: &[u32]) -> Option<TExps> {
    let len = a.len().max(b.len());
    let mut v = Vec::with_capacity(len);
    for i in 0..len {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        v.push(x.checked_sub(y)?);
    }
    Some(trim(v))
}

/// A polynomial in t₁, t₂, … with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TPoly {
    terms: BTreeMap<TExps, BigRational>,
}

impl PartialOrd for TPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().rev().cmp(other.terms.iter().rev())
    }
}

impl TPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Self { terms }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    /// The symbol tᵢ (1-based).
    pub fn symbol(i: usize) -> Self {
        assert!(i >= 1, "t-symbols are 1-based");
        let mut e = vec![0; i];
        e[i - 1] = 1;
        Self::monomial(e, BigRational::one())
    }

    pub fn monomial(exps: TExps, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(exps), c);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (TExps, BigRational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(trim(e), c);
        }
        p
    }

    fn add_term(&mut self, e: TExps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Vec::new())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&TExps, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&TExps, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Number of symbols that can occur (highest symbol index present).
    pub fn width(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms
            .keys()
            .map(|e| e.get(i - 1).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(exps_add(ea, eb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// ∂/∂tᵢ (1-based).
    pub fn derivative(&self, i: usize) -> Self {
        let idx = i - 1;
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let k = e.get(idx).copied().unwrap_or(0);
            if k == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[idx] -= 1;
            out.add_term(trim(ne), c * BigRational::from_integer(BigInt::from(k)));
        }
        out
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (le, lc) = d.leading().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((re, rc)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            let qe = exps_sub(&re, &le)?;
            let qc = rc / &lc;
            let t = Self::monomial(qe.clone(), qc.clone());
            rem = rem.sub(&d.mul(&t));
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading_coeff().recip())
    }

    fn highest_symbol(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.len())
            .max()
            .unwrap_or(0)
    }

    /// Coefficients with respect to tᵢ: power ↦ coefficient free of tᵢ.
    fn coeffs_in(&self, i: usize) -> BTreeMap<u32, TPoly> {
        let idx = i - 1;
        let mut out: BTreeMap<u32, TPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e.get(idx).copied().unwrap_or(0);
            let mut ne = e.clone();
            if idx < ne.len() {
                ne[idx] = 0;
            }
            out.entry(k).or_default().add_term(trim(ne), c.clone());
        }
        out
    }

    fn times_symbol_pow(&self, i: usize, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        let mut e = vec![0; i];
        e[i - 1] = k;
        self.mul(&Self::monomial(e, BigRational::one()))
    }

    /// Pseudo-remainder of `self` by `d` with respect to tᵢ.
    fn prem(&self, d: &Self, i: usize) -> Self {
        let dd = d.degree_in(i);
        let dc = d.coeffs_in(i);
        let lc = dc.get(&dd).cloned().unwrap_or_default();
        let mut r = self.clone();
        loop {
            let rd = r.degree_in(i);
            if r.is_zero() || rd < dd {
                return r;
            }
            let rl = r.coeffs_in(i).remove(&rd).unwrap_or_default();
            r = r.mul(&lc).sub(&d.mul(&rl).times_symbol_pow(i, rd - dd));
        }
    }

    /// Content with respect to tᵢ (gcd of coefficients, monic).
    fn content_in(&self, i: usize) -> Self {
        let mut g = Self::zero();
        for c in self.coeffs_in(i).values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.as_constant().is_some() || other.as_constant().is_some() {
            return Self::one();
        }
        let v = self.highest_symbol().max(other.highest_symbol());
        let da = self.degree_in(v);
        let db = other.degree_in(v);
        if da == 0 {
            return self.gcd(&other.content_in(v));
        }
        if db == 0 {
            return other.gcd(&self.content_in(v));
        }
        let ca = self.content_in(v);
        let cb = other.content_in(v);
        let c = ca.gcd(&cb);
        let mut a = self.div_exact(&ca).expect("content divides");
        let mut b = other.div_exact(&cb).expect("content divides");
        if a.degree_in(v) < b.degree_in(v) {
            std::mem::swap(&mut a, &mut b);
        }
        // primitive PRS
        loop {
            let r = a.prem(&b, v);
            if r.is_zero() {
                break;
            }
            if r.degree_in(v) == 0 {
                b = Self::one();
                break;
            }
            let rc = r.content_in(v);
            a = b;
            b = r.div_exact(&rc).expect("content divides");
        }
        let bc = b.content_in(v);
        let pb = b.div_exact(&bc).expect("content divides");
        c.mul(&pb).monic()
    }

    /// Evaluate at rational values for t₁, t₂, … (missing symbols count as zero).
    pub fn eval(&self, at: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, k) in e.iter().enumerate() {
                let x = at.get(i).cloned().unwrap_or_else(BigRational::zero);
                for _ in 0..*k {
                    t *= &x;
                }
            }
            acc += t;
        }
        acc
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

/// Writes `t1^2*t2`-style monomials; returns false for the unit monomial.
fn write_texps(f: &mut fmt::Formatter<'_>, e: &[u32]) -> Result<bool, fmt::Error> {
    let mut first = true;
    for (i, k) in e.iter().enumerate() {
        if *k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "t{}", i + 1)?;
        if *k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(!first)
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit_mono = e.is_empty();
            if unit_mono {
                write_rational(f, &a)?;
            } else {
                if !a.is_one() {
                    write_rational(f, &a)?;
                    write!(f, "*")?;
                }
                write_texps(f, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TPoly({self})")
    }
}

pub(crate) fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize) -> TPoly {
        TPoly::symbol(i)
    }
    fn c(x: i64) -> TPoly {
        TPoly::from_int(x)
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (t1 + t2)(t1 - 1) and (t1 + t2)(t2 + 3)
        let f = t(1).add(&t(2));
        let a = f.mul(&t(1).sub(&c(1)));
        let b = f.mul(&t(2).add(&c(3)));
        assert_eq!(a.gcd(&b), f.monic());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let a = t(1).mul(&t(1)).add(&c(1));
        let b = t(1).sub(&t(3));
        assert!(a.gcd(&b).is_one());
    }

    #[test]
    fn gcd_with_content_in_lower_symbols() {
        // t1*t2^2 and t1^2*t2 share t1*t2
        let a = t(1).mul(&t(2)).mul(&t(2));
        let b = t(1).mul(&t(1)).mul(&t(2));
        assert_eq!(a.gcd(&b), t(1).mul(&t(2)));
    }

    #[test]
    fn exact_division() {
        let a = t(1).mul(&t(1)).sub(&c(1));
        let q = a.div_exact(&t(1).sub(&c(1))).unwrap();
        assert_eq!(q, t(1).add(&c(1)));
        assert!(a.div_exact(&t(2)).is_none());
    }

    #[test]
    fn derivative_and_display() {
        let p = t(1).pow(2).mul(&t(3)).scale(&BigRational::new(3.into(), 2.into()));
        assert_eq!(p.to_string(), "3/2*t1^2*t3");
        assert_eq!(p.derivative(1).to_string(), "3*t1*t3");
        assert!(p.derivative(2).is_zero());
        assert_eq!(t(2).sub(&c(1)).to_string(), "t2 - 1");
    }
}
