//! Random generators and independent evaluators shared by the test targets.
#![allow(dead_code)]

use dcf_core::{DerivVar, DiffPoly, Family, FieldMode, ModelPoint, Monomial, MultiIndex, Ring, Scalar, TPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub order: u32,
    pub degree: u32,
    pub height: i64,
    pub terms: usize,
}

pub const SMALL: Shape = Shape {
    order: 2,
    degree: 3,
    height: 5,
    terms: 4,
};

pub fn random_ring(rng: &mut impl Rng, field: FieldMode) -> Ring {
    Ring::new(rng.gen_range(1..=2), rng.gen_range(1..=2), field).unwrap()
}

pub fn random_theta(rng: &mut impl Rng, m: usize, order: u32) -> MultiIndex {
    let mut e = vec![0u32; m];
    if m > 0 {
        for _ in 0..rng.gen_range(0..=order) {
            e[rng.gen_range(0..m)] += 1;
        }
    }
    MultiIndex::new(e)
}

pub fn random_var(rng: &mut impl Rng, ring: &Ring, order: u32) -> DerivVar {
    DerivVar::x(rng.gen_range(1..=ring.n as u32), random_theta(rng, ring.m, order))
}

fn nonzero(rng: &mut impl Rng, height: i64) -> i64 {
    let c = rng.gen_range(1..=height);
    if rng.gen_bool(0.5) {
        -c
    } else {
        c
    }
}

/// c₀ or, in t-mode, c₀ + c₁·t_k.
pub fn random_coeff(rng: &mut impl Rng, ring: &Ring, height: i64) -> Scalar {
    let c0 = Scalar::from_int(nonzero(rng, height));
    if ring.field == FieldMode::Constants || rng.gen_bool(0.5) {
        return c0;
    }
    let k = rng.gen_range(1..=ring.m + 1);
    &c0 + &(&Scalar::from_int(rng.gen_range(-height..=height)) * &Scalar::symbol(k))
}

pub fn random_poly(rng: &mut impl Rng, ring: &Ring, shape: Shape) -> DiffPoly {
    let terms = (0..rng.gen_range(1..=shape.terms)).map(|_| {
        let deg = rng.gen_range(0..=shape.degree);
        let mono = Monomial::from_factors((0..deg).map(|_| (random_var(rng, ring, shape.order), 1)));
        (mono, random_coeff(rng, ring, shape.height))
    });
    DiffPoly::from_terms(terms.collect::<Vec<_>>())
}

pub fn random_tpoly(rng: &mut impl Rng, symbols: usize, degree: u32, height: i64) -> TPoly {
    let terms = (0..rng.gen_range(1..=3)).map(|_| {
        let mut e = vec![0u32; symbols];
        for _ in 0..rng.gen_range(0..=degree) {
            e[rng.gen_range(0..symbols)] += 1;
        }
        let c = rng.gen_range(-height..=height);
        (e, BigRational::from_integer(BigInt::from(c)))
    });
    TPoly::from_terms(terms.collect::<Vec<_>>())
}

/// Every xⱼ gets a value in t₁..t_{m+1}.
pub fn random_point(rng: &mut impl Rng, ring: &Ring, degree: u32, height: i64) -> ModelPoint {
    (1..=ring.n as u32).fold(ModelPoint::new(), |p, j| {
        p.with(j, random_tpoly(rng, ring.m + 1, degree, height))
    })
}

/// ∂^θ of a value, computed term by term.
fn oracle_partial(p: &TPoly, theta: &MultiIndex) -> TPoly {
    let mut out = TPoly::zero();
    for (e, c) in p.terms() {
        let mut c = c.clone();
        let mut e2 = e.clone();
        for (i, k) in theta.exps().iter().enumerate() {
            for _ in 0..*k {
                let have = e2.get(i).copied().unwrap_or(0);
                if have == 0 {
                    c = BigRational::from_integer(BigInt::from(0));
                    break;
                }
                c *= BigRational::from_integer(BigInt::from(have));
                e2[i] -= 1;
            }
        }
        out = out.add(&TPoly::from_terms([(e2, c)]));
    }
    out
}

/// Evaluate with polynomial coefficients only; y-variables read from `y`.
pub fn oracle_eval(f: &DiffPoly, x: &ModelPoint, y: &ModelPoint) -> TPoly {
    let mut acc = TPoly::zero();
    for (mono, c) in f.terms() {
        let mut term = c.as_tpoly().expect("polynomial coefficient");
        for (v, e) in mono.factors() {
            let src = match v.family {
                Family::X => x,
                Family::Y => y,
            };
            let base = oracle_partial(src.get(v.var).expect("assigned"), &v.theta);
            for _ in 0..*e {
                term = term.mul(&base);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// ∂/∂t_k of a value, independently of the library's derivative.
pub fn oracle_dt(p: &TPoly, k: usize) -> TPoly {
    let mut e = vec![0; k];
    e[k - 1] = 1;
    oracle_partial(p, &MultiIndex::new(e))
}
