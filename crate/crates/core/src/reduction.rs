//! Leaders, initials and separants; autoreduced sets; Ritt reduction with
//! cofactor certificates; Δ-pairs and coherence.

use std::collections::BTreeMap;
use std::fmt;

use crate::diffpoly::{DerivVar, DiffPoly, Family, Monomial, MultiIndex};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::ranking::Ranking;

/// Leader, initial and separant of a non-constant polynomial.
pub fn leader_initial_separant(
    f: &DiffPoly,
    ranking: &Ranking,
) -> Result<(DerivVar, DiffPoly, DiffPoly)> {
    let leader = ranking.leader(f).ok_or(Error::ConstantPolynomial)?;
    let initial = f.lead_coeff_in(&leader);
    let separant = f.formal_partial(&leader);
    Ok((leader, initial, separant))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedElement {
    pub poly: DiffPoly,
    /// Position in the caller's input sequence.
    pub source_index: usize,
    pub leader: DerivVar,
    pub leader_degree: u32,
    pub initial: DiffPoly,
    pub separant: DiffPoly,
}

/// An autoreduced set with cached leaders, initials, separants and H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedSystem {
    ranking: Ranking,
    elements: Vec<RankedElement>,
    h: DiffPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutoreduceRejection {
    Empty,
    Constant { index: usize },
    YVariable { index: usize },
    SameLeader { first: usize, second: usize, leader: DerivVar },
    ProperDerivative { reducer: usize, offender: usize, var: DerivVar },
    LeaderDegree { reducer: usize, offender: usize, var: DerivVar, degree: u32 },
}

impl fmt::Display for AutoreduceRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AutoreduceRejection::*;
        match self {
            Empty => write!(f, "empty set"),
            Constant { index } => write!(f, "element {index} is a constant"),
            YVariable { index } => write!(f, "element {index} contains a y-variable"),
            SameLeader { first, second, leader } => {
                write!(f, "elements {first} and {second} share the leader {leader}")
            }
            ProperDerivative { reducer, offender, var } => write!(
                f,
                "element {offender} contains {var}, a proper derivative of the leader of element {reducer}"
            ),
            LeaderDegree { reducer, offender, var, degree } => write!(
                f,
                "element {offender} has degree {degree} in {var}, the leader of element {reducer}, \
                 not below that element's leader degree"
            ),
        }
    }
}

/// Is `f` reduced with respect to `g` (given g's leader and leader degree)?
fn reduced_against(f: &DiffPoly, leader: &DerivVar, leader_degree: u32) -> std::result::Result<(), (DerivVar, Option<u32>)> {
    for v in f.variables() {
        if let Some(phi) = v.derivative_of(leader) {
            if !phi.is_zero() {
                return Err((v, None));
            }
            let d = f.degree_in(&v);
            if d >= leader_degree {
                return Err((v, Some(d)));
            }
        }
    }
    Ok(())
}

impl RankedSystem {
    /// Accepts `polys` iff they form an autoreduced set; elements are stored
    /// in increasing leader rank.
    pub fn autoreduced_check(
        polys: &[DiffPoly],
        ranking: &Ranking,
    ) -> std::result::Result<RankedSystem, AutoreduceRejection> {
        if polys.is_empty() {
            return Err(AutoreduceRejection::Empty);
        }
        let mut elems: Vec<(usize, RankedElement)> = Vec::with_capacity(polys.len());
        for (i, p) in polys.iter().enumerate() {
            if p.has_family(Family::Y) {
                return Err(AutoreduceRejection::YVariable { index: i });
            }
            let (leader, initial, separant) = leader_initial_separant(p, ranking)
                .map_err(|_| AutoreduceRejection::Constant { index: i })?;
            let leader_degree = p.degree_in(&leader);
            elems.push((
                i,
                RankedElement {
                    poly: p.clone(),
                    source_index: i,
                    leader,
                    leader_degree,
                    initial,
                    separant,
                },
            ));
        }
        for a in 0..elems.len() {
            for b in 0..elems.len() {
                if a == b {
                    continue;
                }
                let (ia, ea) = &elems[a];
                let (ib, eb) = &elems[b];
                if a < b && ea.leader == eb.leader {
                    return Err(AutoreduceRejection::SameLeader {
                        first: *ia,
                        second: *ib,
                        leader: ea.leader.clone(),
                    });
                }
                if let Err((var, deg)) = reduced_against(&eb.poly, &ea.leader, ea.leader_degree) {
                    return Err(match deg {
                        None => AutoreduceRejection::ProperDerivative {
                            reducer: *ia,
                            offender: *ib,
                            var,
                        },
                        Some(degree) => AutoreduceRejection::LeaderDegree {
                            reducer: *ia,
                            offender: *ib,
                            var,
                            degree,
                        },
                    });
                }
            }
        }
        elems.sort_by(|(_, a), (_, b)| ranking.compare(&a.leader, &b.leader));
        let elements: Vec<RankedElement> = elems.into_iter().map(|(_, e)| e).collect();
        let h = h_of(&elements);
        Ok(RankedSystem {
            ranking: ranking.clone(),
            elements,
            h,
        })
    }

    pub fn ranking(&self) -> &Ranking {
        &self.ranking
    }

    pub fn elements(&self) -> &[RankedElement] {
        &self.elements
    }

    pub fn polys(&self) -> Vec<DiffPoly> {
        self.elements.iter().map(|e| e.poly.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// H_Λ, the product of all initials and separants.
    pub fn h_product(&self) -> &DiffPoly {
        &self.h
    }

    /// θg for the element at `index`.
    pub fn derivative_of_element(&self, index: usize, theta: &MultiIndex) -> DiffPoly {
        self.elements[index].poly.apply_theta(theta)
    }

    /// Does `f` contain no proper derivative of a leader (and, when `full`,
    /// no leader to a degree at or above the element's)?
    pub fn is_reduced(&self, f: &DiffPoly, full: bool) -> bool {
        self.elements.iter().all(|e| {
            f.variables().into_iter().all(|v| match v.derivative_of(&e.leader) {
                None => true,
                Some(phi) if !phi.is_zero() => false,
                Some(_) => {
                    (!full && e.leader_degree > 1) || f.degree_in(&v) < e.leader_degree
                }
            })
        })
    }

    /// Partial reduction: removes proper derivatives of leaders using separants.
    pub fn partial_reduce(&self, f: &DiffPoly) -> ReductionCertificate {
        self.reduce(f, false)
    }

    /// Full Ritt reduction: partial reduction plus pseudo-division by initials.
    pub fn full_reduce(&self, f: &DiffPoly) -> ReductionCertificate {
        self.reduce(f, true)
    }

    /// The element and operator that eliminate `v`, if any. Among several
    /// candidates the element with the highest-ranked leader wins.
    ///
    /// Separant steps cover every θu_g with θ ≠ 1, and also u_g itself when g
    /// is linear in its leader (there the initial is the separant).
    fn reducer_for(&self, h: &DiffPoly, v: &DerivVar, full: bool) -> Option<(usize, MultiIndex)> {
        for (k, e) in self.elements.iter().enumerate().rev() {
            if let Some(phi) = v.derivative_of(&e.leader) {
                if !phi.is_zero() {
                    return Some((k, phi));
                }
                if (full || e.leader_degree == 1) && h.degree_in(v) >= e.leader_degree {
                    return Some((k, phi));
                }
            }
        }
        None
    }

    fn reduce(&self, f: &DiffPoly, full: bool) -> ReductionCertificate {
        let mut cert = ReductionCertificate {
            remainder: f.clone(),
            premultiplier: DiffPoly::one(),
            cofactors: BTreeMap::new(),
            initial_powers: vec![0; self.elements.len()],
            separant_powers: vec![0; self.elements.len()],
            steps: 0,
        };
        'outer: loop {
            let h = &cert.remainder;
            for v in self.ranking.sorted_vars_desc(h) {
                if let Some((k, phi)) = self.reducer_for(h, &v, full) {
                    let elem = &self.elements[k];
                    let (divisor, lc) = if phi.is_zero() {
                        (elem.poly.clone(), elem.initial.clone())
                    } else {
                        let d = elem.poly.apply_theta(&phi);
                        debug_assert_eq!(d.degree_in(&v), 1);
                        debug_assert_eq!(d.lead_coeff_in(&v), elem.separant);
                        (d, elem.separant.clone())
                    };
                    let (count, quot, rem) = pseudo_divide(h, &divisor, &lc, &v);
                    let mult = lc.pow(count);
                    if !mult.is_one() {
                        cert.premultiplier = &cert.premultiplier * &mult;
                        for c in cert.cofactors.values_mut() {
                            *c = &*c * &mult;
                        }
                    }
                    let slot = cert.cofactors.entry((k, phi.clone())).or_default();
                    *slot = &*slot + &quot;
                    if slot.is_zero() {
                        cert.cofactors.remove(&(k, phi.clone()));
                    }
                    if phi.is_zero() && elem.leader_degree > 1 {
                        cert.initial_powers[k] += count;
                    } else {
                        cert.separant_powers[k] += count;
                    }
                    cert.steps += count as usize;
                    cert.remainder = rem;
                    continue 'outer;
                }
            }
            break;
        }
        cert
    }

    /// Δ-pairs of elements whose leaders are derivatives of the same xᵢ.
    /// Pairs follow the caller's input order: for inputs f before g the pair
    /// is S_g·φ_f(f) − S_f·φ_g(g).
    pub fn delta_pairs(&self) -> Vec<DeltaPair> {
        let mut order: Vec<usize> = (0..self.elements.len()).collect();
        order.sort_by_key(|k| self.elements[*k].source_index);
        let mut out = Vec::new();
        for (x, &a) in order.iter().enumerate() {
            for &b in &order[x + 1..] {
                let (ea, eb) = (&self.elements[a], &self.elements[b]);
                if ea.leader.family != eb.leader.family || ea.leader.var != eb.leader.var {
                    continue;
                }
                let theta = ea.leader.theta.join(&eb.leader.theta);
                let phi_a = theta.checked_sub(&ea.leader.theta).expect("max dominates");
                let phi_b = theta.checked_sub(&eb.leader.theta).expect("max dominates");
                let poly = &(&eb.separant * &ea.poly.apply_theta(&phi_a))
                    - &(&ea.separant * &eb.poly.apply_theta(&phi_b));
                out.push(DeltaPair {
                    first: a,
                    second: b,
                    theta,
                    poly,
                });
            }
        }
        out
    }

    /// Every Δ-pair must full-reduce to zero.
    pub fn coherence_check(&self) -> CoherenceReport {
        self.coherence_check_with(Exec::default())
    }

    pub fn coherence_check_with(&self, exec: Exec) -> CoherenceReport {
        let pairs = self.delta_pairs();
        let remainders = par::map(exec, &pairs, |p| self.full_reduce(&p.poly).remainder);
        let evidence: Vec<PairEvidence> = pairs
            .into_iter()
            .zip(remainders)
            .map(|(pair, remainder)| PairEvidence { pair, remainder })
            .collect();
        let coherent = evidence.iter().all(|e| e.remainder.is_zero());
        CoherenceReport { coherent, evidence }
    }
}

fn h_of(elements: &[RankedElement]) -> DiffPoly {
    elements.iter().fold(DiffPoly::one(), |acc, e| {
        &acc * &(&e.initial * &e.separant)
    })
}

/// Lazy pseudo-division of `h` by `divisor` in `v`, where `lc` is the
/// divisor's coefficient of its top power of `v`. Returns `(c, q, r)` with
/// `lc^c·h = q·divisor + r` and deg_v r < deg_v divisor.
fn pseudo_divide(h: &DiffPoly, divisor: &DiffPoly, lc: &DiffPoly, v: &DerivVar) -> (u32, DiffPoly, DiffPoly) {
    let d = divisor.degree_in(v);
    let mut r = h.clone();
    let mut q = DiffPoly::zero();
    let mut count = 0;
    loop {
        let k = r.degree_in(v);
        if r.is_zero() || k < d {
            return (count, q, r);
        }
        let top = r.lead_coeff_in(v);
        let shift = DiffPoly::term(Monomial::var(v.clone(), k - d), crate::Scalar::one());
        let t = &top * &shift;
        r = &(lc * &r) - &(&t * divisor);
        q = &(lc * &q) + &t;
        count += 1;
    }
}

/// `premultiplier·f − remainder = Σ cofactor_{k,θ}·θ(Λ_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionCertificate {
    pub remainder: DiffPoly,
    pub premultiplier: DiffPoly,
    /// Keyed by (element position in the ranked system, θ).
    pub cofactors: BTreeMap<(usize, MultiIndex), DiffPoly>,
    pub initial_powers: Vec<u32>,
    pub separant_powers: Vec<u32>,
    pub steps: usize,
}

impl ReductionCertificate {
    /// Σ cofactor·θg.
    pub fn combination(&self, sys: &RankedSystem) -> DiffPoly {
        self.cofactors
            .iter()
            .fold(DiffPoly::zero(), |acc, ((k, theta), c)| {
                &acc + &(c * &sys.derivative_of_element(*k, theta))
            })
    }

    /// premultiplier·f − remainder − Σ cofactor·θg; zero for a sound certificate.
    pub fn defect(&self, f: &DiffPoly, sys: &RankedSystem) -> DiffPoly {
        &(&(&self.premultiplier * f) - &self.remainder) - &self.combination(sys)
    }

    /// Re-check the certificate identity and the premultiplier's factorisation.
    pub fn verify(&self, f: &DiffPoly, sys: &RankedSystem) -> bool {
        if !self.defect(f, sys).is_zero() {
            return false;
        }
        let expected = sys
            .elements()
            .iter()
            .enumerate()
            .fold(DiffPoly::one(), |acc, (k, e)| {
                &(&acc * &e.initial.pow(self.initial_powers[k])) * &e.separant.pow(self.separant_powers[k])
            });
        expected == self.premultiplier
    }

    /// Smallest ℓ with premultiplier | H^ℓ, read off the recorded exponents.
    pub fn h_exponent(&self) -> u32 {
        self.initial_powers
            .iter()
            .chain(self.separant_powers.iter())
            .copied()
            .max()
            .unwrap_or(0)
    }

    pub fn uses_initials(&self) -> bool {
        self.initial_powers.iter().any(|p| *p > 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaPair {
    pub first: usize,
    pub second: usize,
    pub theta: MultiIndex,
    pub poly: DiffPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairEvidence {
    pub pair: DeltaPair,
    pub remainder: DiffPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceReport {
    pub coherent: bool,
    pub evidence: Vec<PairEvidence>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::{FieldMode, Ring};

    fn ring(m: usize) -> Ring {
        Ring::new(m, 2, FieldMode::Constants).unwrap()
    }
    fn tring(m: usize) -> Ring {
        Ring::new(m, 2, FieldMode::RationalT).unwrap()
    }
    fn sys(r: &Ring, s: &[&str]) -> RankedSystem {
        let ps: Vec<_> = s.iter().map(|x| r.parse(x).unwrap()).collect();
        RankedSystem::autoreduced_check(&ps, &Ranking::Orderly).unwrap()
    }

    #[test]
    fn leader_initial_separant_examples() {
        let r = ring(2);
        let rk = Ranking::Orderly;
        let (u, i, s) = leader_initial_separant(&r.parse("x1*d1 x1^2 + d2 x1").unwrap(), &rk).unwrap();
        assert_eq!(u, r.xv(1, &[1]));
        assert_eq!(i, r.parse("x1").unwrap());
        assert_eq!(s, r.parse("2*x1*d1 x1").unwrap());
        let (u, i, s) = leader_initial_separant(&r.parse("d1 d2 x1 + x1^3").unwrap(), &rk).unwrap();
        assert_eq!(u, r.xv(1, &[1, 1]));
        assert!(i.is_one() && s.is_one());
        let (u, i, s) = leader_initial_separant(&r.parse("x1*x2").unwrap(), &rk).unwrap();
        assert_eq!(u, r.xv(2, &[]));
        assert_eq!(i, r.x(1));
        assert_eq!(s, r.x(1));
        assert_eq!(
            leader_initial_separant(&DiffPoly::from_int(3), &rk),
            Err(Error::ConstantPolynomial)
        );
    }

    #[test]
    fn autoreduced_examples() {
        let r = ring(2);
        let s = sys(&r, &["d1 x1 - 1", "d2 x1"]);
        assert!(s.h_product().is_one());
        let bad = |v: &[&str]| {
            let ps: Vec<_> = v.iter().map(|x| r.parse(x).unwrap()).collect();
            RankedSystem::autoreduced_check(&ps, &Ranking::Orderly).unwrap_err()
        };
        assert!(matches!(bad(&["x1", "x1^2"]), AutoreduceRejection::SameLeader { .. }));
        assert!(matches!(
            bad(&["x1", "d1 x1"]),
            AutoreduceRejection::ProperDerivative { reducer: 0, offender: 1, .. }
        ));
        assert!(matches!(
            bad(&["x1^2", "x2 + x1^3"]),
            AutoreduceRejection::LeaderDegree { reducer: 0, offender: 1, degree: 3, .. }
        ));
        assert!(matches!(bad(&["x1", "2"]), AutoreduceRejection::Constant { index: 1 }));
    }

    #[test]
    fn h_product_examples() {
        let r = ring(2);
        assert!(sys(&r, &["d1 x1 - 1"]).h_product().is_one());
        assert_eq!(
            sys(&r, &["x1*d1 x1^2 + d2 x1"]).h_product(),
            &r.parse("2*x1^2*d1 x1").unwrap()
        );
        let tr = tring(1);
        assert_eq!(sys(&tr, &["x1^2 - t1"]).h_product(), &tr.parse("2*x1").unwrap());
    }

    #[test]
    fn partial_reduce_examples() {
        let r = ring(1);
        let s = sys(&r, &["d1 x1 - x1"]);
        let f = r.parse("d1 d1 x1").unwrap();
        let c = s.partial_reduce(&f);
        assert_eq!(c.remainder, r.x(1));
        assert!(c.premultiplier.is_one());
        assert_eq!(c.steps, 2);
        let theta0 = MultiIndex::zero(1);
        let theta1 = MultiIndex::unit(1, 1);
        assert!(c.cofactors.contains_key(&(0, theta0)));
        assert!(c.cofactors.contains_key(&(0, theta1)));
        assert!(c.verify(&f, &s));

        let s = sys(&r, &["d1 x1"]);
        let f = r.parse("x1^5").unwrap();
        let c = s.partial_reduce(&f);
        assert_eq!(c.remainder, f);
        assert_eq!(c.steps, 0);

        let tr = tring(1);
        let s = sys(&tr, &["x1^2 - t1"]);
        let f = tr.parse("d1 x1").unwrap();
        let c = s.partial_reduce(&f);
        assert_eq!(c.remainder, DiffPoly::one());
        assert_eq!(c.premultiplier, tr.parse("2*x1").unwrap());
        assert!(c.verify(&f, &s));
    }

    #[test]
    fn full_reduce_examples() {
        let r = ring(1);
        let s = sys(&r, &["x1"]);
        let c = s.full_reduce(&r.x(1));
        assert!(c.remainder.is_zero() && c.premultiplier.is_one());

        let tr = tring(1);
        let s = sys(&tr, &["x1^2 - t1"]);
        let f = tr.parse("x1^2 - t1 + d1 x1*0 + 1").unwrap();
        assert_eq!(s.full_reduce(&f).remainder, DiffPoly::one());

        // x·x' = 1 forces x'' = -1/x^3, so the remainder is -1 with premultiplier x^3.
        let s = sys(&r, &["x1*d1 x1 - 1"]);
        let f = r.parse("d1 d1 x1").unwrap();
        let c = s.full_reduce(&f);
        assert_eq!(c.remainder, DiffPoly::from_int(-1));
        assert_eq!(c.premultiplier, r.parse("x1^3").unwrap());
        assert!(c.verify(&f, &s));
        // g is linear in its leader, so every step is booked against the separant.
        assert_eq!((c.initial_powers[0], c.separant_powers[0]), (0, 3));
    }

    #[test]
    fn coherence_examples() {
        let r = ring(2);
        let s = sys(&r, &["d1 x1 - 1", "d2 x1"]);
        let rep = s.coherence_check();
        assert!(rep.coherent);
        assert_eq!(rep.evidence.len(), 1);
        assert!(rep.evidence[0].pair.poly.is_zero());

        let tr = tring(2);
        let s = sys(&tr, &["d1 x1 - t2", "d2 x1"]);
        let rep = s.coherence_check();
        assert!(!rep.coherent);
        assert_eq!(rep.evidence[0].remainder, DiffPoly::from_int(-1));

        let s = sys(&r, &["x1"]);
        let rep = s.coherence_check();
        assert!(rep.coherent && rep.evidence.is_empty());
    }
}
