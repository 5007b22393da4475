use std::cmp::Ordering;
use std::fmt;

/// Exponents (e₁,…,e_m) of a derivative operator δ₁^{e₁}···δ_m^{e_m}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(m: usize) -> Self {
        MultiIndex(vec![0; m])
    }

    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex(exps)
    }

    /// The unit vector for δᵢ (1-based).
    pub fn unit(m: usize, i: usize) -> Self {
        let mut v = vec![0; m];
        v[i - 1] = 1;
        MultiIndex(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.0.len(), other.0.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` when every component stays non-negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &Self) -> Self {
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub(crate) fn bump(&mut self, i: usize) {
        self.0[i - 1] += 1;
    }

    /// All multi-indices of length `m` with order at most `r`, in a fixed order.
    pub fn up_to_order(m: usize, r: u32) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(m)];
        let mut frontier = out.clone();
        for _ in 0..r {
            let mut next = Vec::new();
            for th in &frontier {
                for i in 1..=m {
                    let mut n = th.clone();
                    n.bump(i);
                    if !out.contains(&n) && !next.contains(&n) {
                        next.push(n);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// x-family variables are the differential indeterminates; the y-family
/// holds the second coordinates of prolongations.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Family {
    X,
    Y,
}

/// A derivative θxᵢ or θyᵢ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DerivVar {
    pub family: Family,
    pub var: u32,
    pub theta: MultiIndex,
}

impl DerivVar {
    pub fn x(var: u32, theta: MultiIndex) -> Self {
        DerivVar {
            family: Family::X,
            var,
            theta,
        }
    }

    pub fn y(var: u32, theta: MultiIndex) -> Self {
        DerivVar {
            family: Family::Y,
            var,
            theta,
        }
    }

    pub fn order(&self) -> u32 {
        self.theta.order()
    }

    pub fn with_family(&self, family: Family) -> Self {
        DerivVar {
            family,
            var: self.var,
            theta: self.theta.clone(),
        }
    }

    pub fn apply(&self, theta: &MultiIndex) -> Self {
        DerivVar {
            family: self.family,
            var: self.var,
            theta: self.theta.add(theta),
        }
    }

    /// `Some(φ)` when `self = φ·base` (same family and index).
    pub fn derivative_of(&self, base: &DerivVar) -> Option<MultiIndex> {
        if self.family != base.family || self.var != base.var {
            return None;
        }
        self.theta.checked_sub(&base.theta)
    }
}

/// Canonical storage order: family, then order, index, and lex exponents.
/// This coincides with the orderly ranking used by default.
impl Ord for DerivVar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.family
            .cmp(&other.family)
            .then(self.order().cmp(&other.order()))
            .then(self.var.cmp(&other.var))
            .then(self.theta.cmp(&other.theta))
    }
}

impl PartialOrd for DerivVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DerivVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.theta.exps().iter().enumerate() {
            for _ in 0..*e {
                write!(f, "d{} ", i + 1)?;
            }
        }
        let fam = match self.family {
            Family::X => 'x',
            Family::Y => 'y',
        };
        write!(f, "{fam}{}", self.var)
    }
}

impl fmt::Debug for DerivVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_repeats_operators() {
        let v = DerivVar::x(2, MultiIndex::new(vec![2, 1]));
        assert_eq!(v.to_string(), "d1 d1 d2 x2");
    }

    #[test]
    fn derivative_of_checks_family_and_divisibility() {
        let base = DerivVar::x(1, MultiIndex::new(vec![1, 0]));
        let v = DerivVar::x(1, MultiIndex::new(vec![2, 1]));
        assert_eq!(v.derivative_of(&base), Some(MultiIndex::new(vec![1, 1])));
        assert_eq!(base.derivative_of(&v), None);
        assert_eq!(v.with_family(Family::Y).derivative_of(&base), None);
    }

    #[test]
    fn up_to_order_counts() {
        // multi-indices in 2 variables of order <= 2: 1 + 2 + 3
        assert_eq!(MultiIndex::up_to_order(2, 2).len(), 6);
        assert_eq!(MultiIndex::up_to_order(0, 3).len(), 1);
    }
}
