mod common;

use common::*;
use dcf_core::algebra::{occurring_vars, primality_oracle, AlgIdeal, MonomialOrder, PrimalityConfig, PrimeStatus};
use dcf_core::geometry::{charset_certify, sat_ideal_member};
use dcf_core::prolong::{tau, TauPoly};
use dcf_core::{
    DerivVar, DiffPoly, FieldMode, ModelPoint, MultiIndex, RankedSystem, Ranking, Ring, TPoly,
};
use proptest::prelude::*;
use rand::Rng;
use std::cmp::Ordering;

fn t_ring(seed: u64) -> (rand_chacha::ChaCha8Rng, Ring) {
    let mut r = rng(seed);
    let ring = random_ring(&mut r, FieldMode::RationalT);
    (r, ring)
}

fn tau_of(f: &DiffPoly, ring: &Ring) -> DiffPoly {
    tau(f, ring).unwrap().into_inner()
}

/// Λ with |Λ| ≤ 2 that passes the autoreduced check, by rejection sampling.
fn random_system(r: &mut impl Rng, ring: &Ring, ranking: &Ranking) -> (Vec<DiffPoly>, RankedSystem) {
    let shape = Shape {
        order: 1,
        degree: 2,
        height: 3,
        terms: 3,
    };
    loop {
        let k = r.gen_range(1..=2);
        let polys: Vec<DiffPoly> = (0..k)
            .map(|_| random_poly(r, ring, shape))
            .filter(|p| !p.is_constant())
            .collect();
        if polys.is_empty() {
            continue;
        }
        if let Ok(sys) = RankedSystem::autoreduced_check(&polys, ranking) {
            return (polys, sys);
        }
    }
}

fn free_of_t1(p: TPoly) -> TPoly {
    TPoly::from_terms(
        p.terms()
            .filter(|(e, _)| e.first().copied().unwrap_or(0) == 0)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect::<Vec<_>>(),
    )
}

/// Independent reducedness test: no proper derivative of a leader, and
/// leader degree below the element's.
fn is_reduced(f: &DiffPoly, sys: &RankedSystem) -> bool {
    sys.elements().iter().all(|e| {
        f.variables().iter().all(|v| match v.derivative_of(&e.leader) {
            Some(theta) if !theta.is_zero() => false,
            Some(_) => f.degree_in(v) < e.leader_degree,
            None => true,
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn derivations_commute(seed in any::<u64>()) {
        let (mut r, ring) = t_ring(seed);
        let f = random_poly(&mut r, &ring, SMALL);
        for i in 1..=ring.m {
            for j in 1..=ring.m {
                let a = ring.derive(&ring.derive(&f, i).unwrap(), j).unwrap();
                let b = ring.derive(&ring.derive(&f, j).unwrap(), i).unwrap();
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>()) {
        let (mut r, ring) = t_ring(seed);
        let f = random_poly(&mut r, &ring, SMALL);
        let g = random_poly(&mut r, &ring, SMALL);
        let i = r.gen_range(1..=ring.m);
        let lhs = ring.derive(&(&f * &g), i).unwrap();
        let rhs = &(&f * &ring.derive(&g, i).unwrap()) + &(&g * &ring.derive(&f, i).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_commutes_with_derivation(seed in any::<u64>()) {
        let (mut r, ring) = t_ring(seed);
        let f = random_poly(&mut r, &ring, SMALL);
        let p = random_point(&mut r, &ring, 3, 5);
        let i = r.gen_range(1..=ring.m);
        let none = ModelPoint::new();
        let lhs = oracle_eval(&ring.derive(&f, i).unwrap(), &p, &none);
        let rhs = oracle_dt(&oracle_eval(&f, &p, &none), i);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn parse_print_roundtrip(seed in any::<u64>()) {
        let (mut r, ring) = t_ring(seed);
        let f = random_poly(&mut r, &ring, SMALL);
        let printed = f.to_string();
        prop_assert_eq!(ring.parse(&printed).unwrap(), f, "{}", printed);
    }

    #[test]
    fn reduction_certificates(seed in any::<u64>(), elim in any::<bool>()) {
        let (mut r, ring) = t_ring(seed);
        let ranking = if elim && ring.n == 2 { Ranking::elimination(vec![2, 1]).unwrap() } else { Ranking::Orderly };
        let (_, sys) = random_system(&mut r, &ring, &ranking);
        let f = random_poly(&mut r, &ring, Shape { order: 2, degree: 2, height: 3, terms: 3 });
        for full in [false, true] {
            let cert = if full { sys.full_reduce(&f) } else { sys.partial_reduce(&f) };
            let combo = cert.cofactors.iter().fold(DiffPoly::zero(), |acc, ((k, theta), c)| {
                &acc + &(c * &sys.elements()[*k].poly.apply_theta(theta))
            });
            prop_assert!((&(&(&cert.premultiplier * &f) - &cert.remainder) - &combo).is_zero());
            prop_assert!(cert.h_exponent() as usize <= cert.steps);
            let h = sys.h_product().pow(cert.h_exponent());
            prop_assert!(h.div_exact(&cert.premultiplier).is_some());
            if full {
                prop_assert!(is_reduced(&cert.remainder, &sys));
                prop_assert_eq!(&sys.full_reduce(&cert.remainder).remainder, &cert.remainder);
            }
        }
    }

    #[test]
    fn tau_product_rule(seed in any::<u64>()) {
        let (mut r, ring) = t_ring(seed);
        let f = random_poly(&mut r, &ring, SMALL);
        let g = random_poly(&mut r, &ring, SMALL);
        let lhs = tau_of(&(&f * &g), &ring);
        let rhs = &(&f * &tau_of(&g, &ring)) + &(&g * &tau_of(&f, &ring));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tau_linearity(seed in any::<u64>(), constants in any::<bool>()) {
        let mut r = rng(seed);
        let field = if constants { FieldMode::Constants } else { FieldMode::RationalT };
        let ring = random_ring(&mut r, field);
        let f = random_poly(&mut r, &ring, SMALL);
        let g = random_poly(&mut r, &ring, SMALL);
        let a = random_coeff(&mut r, &ring, 5);
        let b = random_coeff(&mut r, &ring, 5);
        let d = ring.d_symbol();
        let lhs = tau_of(&(&f.scale(&a) + &g.scale(&b)), &ring);
        let rhs = &(&(&tau_of(&f, &ring).scale(&a) + &tau_of(&g, &ring).scale(&b)) + &f.scale(&a.derivative(d)))
            + &g.scale(&b.derivative(d));
        prop_assert_eq!(&lhs, &rhs);
        if constants {
            prop_assert_eq!(lhs, &tau_of(&f, &ring).scale(&a) + &tau_of(&g, &ring).scale(&b));
        }
    }

    #[test]
    fn tau_commutes_with_derivations(seed in any::<u64>()) {
        let (mut r, ring) = t_ring(seed);
        let f = random_poly(&mut r, &ring, SMALL);
        for i in 1..=ring.m {
            let lhs = tau_of(&ring.derive(&f, i).unwrap(), &ring);
            let rhs = tau_of(&f, &ring).derivative(i);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn tau_values_are_y_linear(seed in any::<u64>()) {
        let (mut r, ring) = t_ring(seed);
        let f = random_poly(&mut r, &ring, SMALL);
        let t = tau_of(&f, &ring);
        prop_assert!(TauPoly::is_y_linear(&t));
        prop_assert!(TauPoly::new(t).is_ok());
    }

    #[test]
    fn chain_rule_semantics(seed in any::<u64>()) {
        let (mut r, ring) = t_ring(seed);
        let f = random_poly(&mut r, &ring, SMALL);
        let p = random_point(&mut r, &ring, 3, 5);
        let d = ring.d_symbol();
        let dp = (1..=ring.n as u32).fold(ModelPoint::new(), |acc, j| {
            acc.with(j, oracle_dt(p.get(j).unwrap(), d))
        });
        let lhs = oracle_eval(&tau_of(&f, &ring), &p, &dp);
        let rhs = oracle_dt(&oracle_eval(&f, &p, &ModelPoint::new()), d);
        prop_assert_eq!(lhs, rhs);
        let check = dcf_core::prolong::d_compatibility_check(&f, &p, &ring).unwrap();
        prop_assert!(check.holds());
    }

    #[test]
    fn saturation_and_elimination(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = Ring::new(1, 3, FieldMode::Constants).unwrap();
        let shape = Shape { order: 0, degree: 2, height: 3, terms: 3 };
        let gens: Vec<DiffPoly> = (0..r.gen_range(1..=2)).map(|_| random_poly(&mut r, &ring, shape)).collect();
        let h = random_poly(&mut r, &ring, Shape { terms: 2, degree: 1, ..shape });
        let vars = (1..=3).map(|j| DerivVar::x(j, MultiIndex::zero(1))).collect::<Vec<_>>();
        let ideal = AlgIdeal::new(vars.clone(), gens.clone(), MonomialOrder::GRevLex).unwrap();
        let sat = ideal.saturate(&h).unwrap();
        for g in &gens {
            prop_assert!(sat.contains(g).unwrap());
        }
        let twice = sat.saturate(&h).unwrap();
        for g in twice.gens() {
            prop_assert!(sat.contains(g).unwrap());
        }
        for g in sat.gens() {
            prop_assert!(twice.contains(g).unwrap());
        }
        let drop = vec![vars[r.gen_range(0..3)].clone()];
        let e = ideal.eliminate(&drop).unwrap();
        for g in e.gens() {
            prop_assert!(!g.variables().contains(&drop[0]));
            prop_assert!(ideal.contains(g).unwrap());
        }
    }

    #[test]
    fn not_prime_witnesses_verify(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = Ring::new(1, 2, FieldMode::Constants).unwrap();
        let shape = Shape { order: 0, degree: 2, height: 2, terms: 2 };
        let a = random_poly(&mut r, &ring, shape);
        let b = random_poly(&mut r, &ring, shape);
        let gens = vec![&a * &b];
        prop_assume!(!gens[0].is_constant());
        let ideal = AlgIdeal::new(occurring_vars(&gens), gens, MonomialOrder::GRevLex).unwrap();
        let v = primality_oracle(&ideal, &PrimalityConfig { max_candidates: 20_000, ..Default::default() }).unwrap();
        prop_assert!(v.verify(&ideal).unwrap());
        if v.status == PrimeStatus::NotPrime {
            prop_assert!(v.witness.is_some());
        }
    }

    #[test]
    fn combinations_vanish_with_their_prolongations(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = Ring::new(1, 1, FieldMode::RationalT).unwrap();
        let lambda = [ring.parse("d1 x1 - 1").unwrap()];
        let shape = Shape { order: 2, degree: 2, height: 3, terms: 3 };
        let g = (0..r.gen_range(1..=3)).fold(DiffPoly::zero(), |acc, _| {
            let q = random_poly(&mut r, &ring, shape);
            let theta = random_theta(&mut r, 1, 2);
            &acc + &(&q * &lambda[0].apply_theta(&theta))
        });
        // x1 = t1 + q(t2) solves d1 x1 = 1; any y1 = s(t2) solves τ(d1 x1 - 1) = d1 y1 = 0.
        let q = free_of_t1(random_tpoly(&mut r, 2, 2, 4));
        let a = ModelPoint::new().with(1, TPoly::symbol(1).add(&q));
        let b = ModelPoint::new().with(1, free_of_t1(random_tpoly(&mut r, 2, 2, 4)));
        prop_assert!(oracle_eval(&g, &a, &b).is_zero());
        prop_assert!(oracle_eval(&tau_of(&g, &ring), &a, &b).is_zero());
    }

    #[test]
    fn saturation_membership_is_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = Ring::new(1, 1, FieldMode::RationalT).unwrap();
        let cert = charset_certify(&[ring.parse("x1*d1 x1 - 1").unwrap()], &Ranking::Orderly, &PrimalityConfig::default());
        let lambda = cert.system().unwrap().elements()[0].poly.clone();
        let shape = Shape { order: 1, degree: 2, height: 3, terms: 3 };
        let g = &random_poly(&mut r, &ring, shape) * &lambda.apply_theta(&random_theta(&mut r, 1, 1));
        let f = random_poly(&mut r, &ring, shape);
        prop_assert!(sat_ideal_member(&g, &cert).unwrap().0);
        prop_assert!(sat_ideal_member(&(&g * &f), &cert).unwrap().0);
    }
}

fn ranking_axioms(ranking: &Ranking, ring: &Ring, seed: u64) {
    let mut r = rng(seed);
    for _ in 0..10_000 {
        let u = random_var(&mut r, ring, 3);
        let v = random_var(&mut r, ring, 3);
        let w = random_var(&mut r, ring, 3);
        let theta = random_theta(&mut r, ring.m, 2);
        let c = ranking.compare(&u, &v);
        assert_eq!(c, ranking.compare(&v, &u).reverse());
        assert_eq!(c == Ordering::Equal, u == v);
        if !theta.is_zero() {
            assert_eq!(ranking.compare(&u.apply(&theta), &u), Ordering::Greater, "{u} {theta:?}");
        }
        if c == Ordering::Greater {
            assert_eq!(ranking.compare(&u.apply(&theta), &v.apply(&theta)), Ordering::Greater);
            if ranking.compare(&v, &w) == Ordering::Greater {
                assert_eq!(ranking.compare(&u, &w), Ordering::Greater);
            }
        }
    }
}

#[test]
fn ranking_axioms_hold() {
    let ring = Ring::new(2, 3, FieldMode::Constants).unwrap();
    ranking_axioms(&Ranking::Orderly, &ring, 1);
    ranking_axioms(&Ranking::elimination(vec![2, 3, 1]).unwrap(), &ring, 2);
    ranking_axioms(&Ranking::elimination(vec![1, 2, 3]).unwrap(), &ring, 3);
}
