use proptest::prelude::*;

use strength_fano::algebra::parse::parse_many;
use strength_fano::fano;
use strength_fano::ideals::{
    groebner_basis, is_groebner_basis, normal_form, GroebnerLimits, IdealBasis,
};
use strength_fano::residual::{self, Direction, PlaneChart};
use strength_fano::strength::{quadric_strength, smooth_strength, StrengthValue};
use strength_fano::unirat;
use strength_fano::{parse_in, FieldSpec, Monomial, Polynomial, Ring, Scalar, Substitution};

const Q: FieldSpec = FieldSpec::Rationals;
const F101: FieldSpec = FieldSpec::Prime(101);

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(Q), Just(F101)]
}

fn poly_from(ring: &Ring, field: FieldSpec, terms: Vec<(Vec<u16>, i64, i64)>) -> Polynomial {
    Polynomial::from_terms(
        ring,
        field,
        terms.into_iter().map(|(e, num, den)| {
            let c = match field {
                FieldSpec::Rationals => Scalar::new(num.into(), den.into()),
                _ => Scalar::from_integer(num.rem_euclid(101).into()),
            };
            (Monomial::from_exponents(e), c)
        }),
    )
}

/// Arbitrary polynomial in `n` variables with exponents at most 3.
fn poly(n: usize, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u16>, i64, i64)>> {
    prop::collection::vec(
        (prop::collection::vec(0u16..=3, n), -9i64..=9, 1i64..=4),
        0..=max_terms,
    )
}

/// Homogeneous polynomial of degree `d` in `n` variables.
fn homogeneous(
    n: usize,
    d: u32,
    max_terms: usize,
) -> impl Strategy<Value = Vec<(Vec<u16>, i64, i64)>> {
    let monos = strength_fano::algebra::monomial::monomials_of_degree(n, d);
    prop::collection::vec((0..monos.len(), -9i64..=9, 1i64..=3), 1..=max_terms).prop_map(
        move |ts| {
            ts.into_iter()
                .map(|(i, c, den)| (monos[i].exponents().to_vec(), c, den))
                .collect()
        },
    )
}

fn nonzero(p: Polynomial) -> Option<Polynomial> {
    (!p.is_zero()).then_some(p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_then_parse_round_trips(field in field_strategy(), ts in poly(4, 8)) {
        let ring = Ring::indexed("x", 4);
        let f = poly_from(&ring, field, ts);
        let back = parse_in(&f.to_string(), &ring, field).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn ring_laws(field in field_strategy(), a in poly(3, 5), b in poly(3, 5), c in poly(3, 5)) {
        let ring = Ring::indexed("x", 3);
        let (a, b, c) = (poly_from(&ring, field, a), poly_from(&ring, field, b), poly_from(&ring, field, c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(-(-a.clone()), a);
    }

    #[test]
    fn euler_relation(field in field_strategy(), d in 1u32..=4, stride in 1usize..=6, c in 1i64..=50) {
        let ring = Ring::indexed("x", 4);
        let monos = strength_fano::algebra::monomial::monomials_of_degree(4, d);
        let f = Polynomial::from_terms(&ring, field, monos.iter().step_by(stride).enumerate().map(|(i, m)| (m.clone(), field.from_i64(c - i as i64))));
        let mut euler = Polynomial::zero(&ring, field);
        for (i, di) in f.gradient().iter().enumerate() {
            euler = &euler + &(&Polynomial::var_at(&ring, field, i) * di);
        }
        prop_assert_eq!(euler, f.scale(&field.from_i64(d as i64)));
    }

    #[test]
    fn collect_then_reassemble(field in field_strategy(), ts in poly(4, 8), split in 1usize..=3) {
        let ring = Ring::indexed("x", 4);
        let f = poly_from(&ring, field, ts);
        let names: Vec<&str> = ring.vars()[..split].iter().map(String::as_str).collect();
        let parts = f.collect_coefficients(&names).unwrap();
        prop_assert_eq!(Polynomial::reassemble(&ring, field, &names, &parts).unwrap(), f);
    }

    #[test]
    fn substitution_is_a_ring_map(field in field_strategy(), a in poly(2, 4), b in poly(2, 4), i0 in poly(3, 3), i1 in poly(3, 3)) {
        let src = Ring::indexed("x", 2);
        let dst = Ring::indexed("y", 3);
        let (a, b) = (poly_from(&src, field, a), poly_from(&src, field, b));
        let s = Substitution::new(&dst, field)
            .with("x0", poly_from(&dst, field, i0)).unwrap()
            .with("x1", poly_from(&dst, field, i1)).unwrap();
        let sa = a.substitute(&s).unwrap();
        let sb = b.substitute(&s).unwrap();
        prop_assert_eq!((&a * &b).substitute(&s).unwrap(), &sa * &sb);
        prop_assert_eq!((&a + &b).substitute(&s).unwrap(), &sa + &sb);
    }

    #[test]
    fn groebner_post_conditions(field in field_strategy(), gens in prop::collection::vec(poly(3, 3), 1..=3)) {
        let ring = Ring::indexed("x", 3);
        let gens: Vec<Polynomial> = gens.into_iter().map(|t| poly_from(&ring, field, t)).collect();
        prop_assume!(gens.iter().any(|g| !g.is_zero()));
        let input = IdealBasis::new(gens.clone()).unwrap();
        let limits = GroebnerLimits { max_basis_size: 400, max_pair_degree: 14 };
        match groebner_basis(&input, limits) {
            Ok(gb) => {
                prop_assert!(is_groebner_basis(&gb));
                for g in &gens {
                    prop_assert!(normal_form(g, &gb).is_zero());
                }
                for g in gb.generators() {
                    let lc = g.leading_term().unwrap().1.clone();
                    prop_assert_eq!(lc, field.one());
                }
            }
            Err(e) => prop_assert!(e.is_inconclusive()),
        }
    }

    #[test]
    fn fano_coefficients_reassemble(field in field_strategy(), k in 1usize..=2, ts in homogeneous(4, 3, 4)) {
        let ring = Ring::indexed("x", 4);
        let Some(f) = nonzero(poly_from(&ring, field, ts)) else { return Ok(()); };
        let sys = fano::fano_equations(&[f], k).unwrap();
        prop_assert_eq!(fano::reassemble(&sys, 0).unwrap(), fano::substituted_source(&sys, 0).unwrap());
        let slots = strength_fano::bounds::binomial(3 + k as u64, k as u64) as usize;
        prop_assert_eq!(sys.equations.len(), slots);
    }

    #[test]
    fn smooth_strength_below_quadric_ceiling(field in field_strategy(), ts in homogeneous(5, 2, 6)) {
        let ring = Ring::indexed("x", 5);
        let Some(f) = nonzero(poly_from(&ring, field, ts)) else { return Ok(()); };
        let s = quadric_strength(&f).unwrap().value;
        let ss = smooth_strength(&f, GroebnerLimits::default()).unwrap().value;
        prop_assert!(ss <= StrengthValue::Finite(2 * s + 2), "{} has strength {} but smooth strength {}", f, s, ss);
    }

    #[test]
    fn strength_drops_under_linear_specialization(
        field in field_strategy(),
        ts in homogeneous(4, 2, 6),
        forms in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 4),
    ) {
        let ring = Ring::indexed("x", 4);
        let Some(f) = nonzero(poly_from(&ring, field, ts)) else { return Ok(()); };
        let v = Ring::indexed("v", 3);
        let mut s = Substitution::new(&v, field);
        for (j, row) in forms.iter().enumerate() {
            let l = Polynomial::from_terms(&v, field, row.iter().enumerate().map(|(i, &c)| (Monomial::var(3, i), field.from_i64(c))));
            s.insert(ring.var(j), l).unwrap();
        }
        let g = f.substitute(&s).unwrap();
        let limits = GroebnerLimits::default();
        prop_assert!(smooth_strength(&g, limits).unwrap().value <= smooth_strength(&f, limits).unwrap().value);
        if !g.is_zero() {
            prop_assert!(quadric_strength(&g).unwrap().value <= quadric_strength(&f).unwrap().value);
        }
    }

    #[test]
    fn residual_restriction_is_first_order(field in field_strategy(), h in homogeneous(4, 2, 4), l in homogeneous(4, 1, 2)) {
        let ring = Ring::indexed("x", 4);
        // x2·h + x3·l² vanishes on the line {x2 = x3 = 0}
        let x2 = Polynomial::var_at(&ring, field, 2);
        let x3 = Polynomial::var_at(&ring, field, 3);
        let l = poly_from(&ring, field, l);
        let f = &(&x2 * &poly_from(&ring, field, h)) + &(&x3 * &(&l * &l));
        prop_assume!(!f.is_zero());
        let plane = PlaneChart::coordinate(1, 3, field).unwrap();
        let r = residual::residual(&f, &plane, &Direction::Symbolic).unwrap();
        let formula = residual::first_order_formula(&f, &plane, &Direction::Symbolic).unwrap();
        prop_assert_eq!(r.restriction, formula);
    }

    #[test]
    fn quadric_maps_land_on_the_quadric(field in field_strategy(), ts in homogeneous(4, 2, 6), lin in prop::collection::vec(-3i64..=3, 3)) {
        // No x0² term and some x0·xj term, so e0 is a smooth point.
        let ring = Ring::indexed("x", 4);
        let rest = poly_from(&ring, field, ts.into_iter().filter(|(e, _, _)| e[0] == 0).collect());
        prop_assume!(lin.iter().any(|&c| c != 0));
        let x0 = Polynomial::var_at(&ring, field, 0);
        let l = Polynomial::from_terms(&ring, field, lin.iter().enumerate().map(|(i, &c)| (Monomial::var(4, i + 1), field.from_i64(c))));
        prop_assume!(!l.is_zero());
        let f = &(&x0 * &l) + &rest;
        let p = vec![field.one(), field.zero(), field.zero(), field.zero()];
        let rec = unirat::quadric_parametrization(&f, &p, 0).unwrap();
        prop_assert!(rec.verification.substitution_ok);
        // Reducible quadrics share a linear factor that normalization strips.
        prop_assert!(rec.degree <= 2);
        prop_assert!(rec.components.iter().all(|c| c.is_zero() || (c.is_homogeneous() && c.degree() == Some(rec.degree))));
    }
}

#[test]
fn parse_many_shares_one_ring() {
    let fs = parse_many(&["x0*x1", "x2 + y"], Q).unwrap();
    assert_eq!(fs[0].ring(), fs[1].ring());
}
