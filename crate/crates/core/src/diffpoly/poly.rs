use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed};

use super::var::{DerivVar, Family, MultiIndex};
use crate::scalar::{fmt_rational, Scalar};

/// A power product of derivative variables, stored ascending by variable.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(DerivVar, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: DerivVar, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_factors<I: IntoIterator<Item = (DerivVar, u32)>>(it: I) -> Self {
        let mut map: BTreeMap<DerivVar, u32> = BTreeMap::new();
        for (v, e) in it {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn factors(&self) -> &[(DerivVar, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: &DerivVar) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when it is a monomial.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == *v {
                let d = e.checked_sub(other.0[j].1)?;
                if d > 0 {
                    out.push((v.clone(), d));
                }
                j += 1;
            } else {
                if j < other.0.len() && other.0[j].0 < *v {
                    return None;
                }
                out.push((v.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Remove `v` entirely, returning its exponent.
    pub(crate) fn split_off(&self, v: &DerivVar) -> (u32, Monomial) {
        match self.0.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) => {
                let mut rest = self.0.clone();
                let (_, e) = rest.remove(i);
                (e, Monomial(rest))
            }
            Err(_) => (0, self.clone()),
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = &DerivVar> {
        self.0.iter().map(|(v, _)| v)
    }
}

/// Graded order; ties broken lexicographically with the highest variable most
/// significant. This is a monomial order, so it also drives exact division.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let mut a = self.0.iter().rev();
            let mut b = other.0.iter().rev();
            loop {
                match (a.next(), b.next()) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some((va, ea)), Some((vb, eb))) => {
                        let c = va.cmp(vb).then(ea.cmp(eb));
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, (v, e)) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A differential polynomial: a finite sum of scalar multiples of monomials.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Scalar::from_int(c))
    }

    pub fn var(v: DerivVar) -> Self {
        Self::term(Monomial::var(v, 1), Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DiffPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
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
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// `Some(c)` when the polynomial has no variables (zero gives `Some(0)`).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<DerivVar> {
        self.terms
            .keys()
            .flat_map(|m| m.variables().cloned())
            .collect()
    }

    pub fn has_family(&self, fam: Family) -> bool {
        self.terms
            .keys()
            .any(|m| m.variables().any(|v| v.family == fam))
    }

    pub fn degree_in(&self, v: &DerivVar) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    /// Decompose as Σ cₖ·vᵏ with each cₖ free of `v`.
    pub fn coeffs_in(&self, v: &DerivVar) -> BTreeMap<u32, DiffPoly> {
        let mut out: BTreeMap<u32, DiffPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Coefficient of the highest power of `v`.
    pub fn lead_coeff_in(&self, v: &DerivVar) -> DiffPoly {
        let d = self.degree_in(v);
        self.coeffs_in(v).remove(&d).unwrap_or_default()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        // Multiplying by a monomial is injective on monomials, so no collisions.
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.mul(mono), x * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = DiffPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to a single variable.
    pub fn formal_partial(&self, v: &DerivVar) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            if e == 0 {
                continue;
            }
            let mono = rest.mul(&Monomial::var(v.clone(), e - 1));
            out.add_term(mono, c * &Scalar::from_int(e as i64));
        }
        out
    }

    /// Apply ∂/∂tᵢ to every coefficient.
    pub fn coeff_derivative(&self, i: usize) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.derivative(i));
        }
        out
    }

    /// δᵢ (1-based) on both families: Leibniz over monomials, ∂/∂tᵢ on coefficients.
    /// The caller guarantees `i` is a valid derivation index for the ring.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = self.coeff_derivative(i);
        for v in self.variables() {
            let part = self.formal_partial(&v);
            let mut dv = v.clone();
            dv.theta.bump(i);
            out = &out + &(&part * &DiffPoly::var(dv));
        }
        out
    }

    /// θ applied to the polynomial.
    pub fn apply_theta(&self, theta: &MultiIndex) -> Self {
        let mut out = self.clone();
        for (i, e) in theta.exps().iter().enumerate() {
            for _ in 0..*e {
                out = out.derivative(i + 1);
            }
        }
        out
    }

    /// Substitute each variable's family, keeping index and θ.
    pub fn map_vars<F: Fn(&DerivVar) -> DerivVar>(&self, f: F) -> Self {
        DiffPoly::from_terms(self.terms.iter().map(|(m, c)| {
            (
                Monomial::from_factors(m.factors().iter().map(|(v, e)| (f(v), *e))),
                c.clone(),
            )
        }))
    }

    /// Substitute variables by polynomials.
    pub fn substitute<F: Fn(&DerivVar) -> Option<DiffPoly>>(&self, f: F) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut t = DiffPoly::constant(c.clone());
            for (v, e) in m.factors() {
                let base = f(v).unwrap_or_else(|| DiffPoly::var(v.clone()));
                t = &t * &base.pow(*e);
            }
            out = &out + &t;
        }
        out
    }

    /// Exact quotient by `d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &DiffPoly) -> Option<DiffPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let (lm, lc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = DiffPoly::zero();
        while let Some((rm, rc)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = rm.div(&lm)?;
            let qc = &rc * &lc_inv;
            rem = &rem - &d.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Largest t-symbol index occurring in any coefficient.
    pub fn symbol_width(&self) -> usize {
        self.terms
            .values()
            .map(Scalar::symbol_width)
            .max()
            .unwrap_or(0)
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: DiffPoly) -> DiffPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

impl From<DerivVar> for DiffPoly {
    fn from(v: DerivVar) -> Self {
        DiffPoly::var(v)
    }
}

impl From<Scalar> for DiffPoly {
    fn from(c: Scalar) -> Self {
        DiffPoly::constant(c)
    }
}

// Coefficient printing: rational constants print bare, single-term
// t-polynomials print as a product, anything else is parenthesised.
fn write_term(f: &mut fmt::Formatter<'_>, first: bool, m: &Monomial, c: &Scalar) -> fmt::Result {
    let neg = match c {
        Scalar::Rat(r) => r.is_negative(),
        Scalar::Frac { num, den } => den.is_one() && num.len() == 1 && c.is_negative_lead(),
    };
    let c = if neg { -c } else { c.clone() };
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    let coeff_str = match &c {
        Scalar::Rat(r) => {
            if r.is_one() {
                None
            } else {
                Some(fmt_rational(r))
            }
        }
        Scalar::Frac { num, den } if den.is_one() && num.len() == 1 => Some(num.to_string()),
        Scalar::Frac { num, den } if den.is_one() => Some(format!("({num})")),
        other => {
            let num = other.numerator();
            let den = other.denominator();
            let n = if num.len() == 1 && !num.leading_coeff().is_negative() {
                num.to_string()
            } else {
                format!("({num})")
            };
            Some(format!("{n}/({den})"))
        }
    };
    match coeff_str {
        None => write!(f, "{m}"),
        Some(s) if m.is_one() => write!(f, "{s}"),
        Some(s) => write!(f, "{s}*{m}"),
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms().enumerate() {
            write_term(f, n == 0, m, c)?;
        }
        Ok(())
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffPoly({self})")
    }
}
