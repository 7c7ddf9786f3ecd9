//! Randomized invariants. Each case draws a seed and builds its inputs from a
//! deterministic generator, so failures shrink to a reproducible seed.

mod common;

use std::sync::Arc;

use common::*;
use gha::algebra::{free_module_action, FreePolyElement, Generator, GhaElement, Presentation};
use gha::modtheory::ModuleDescriptor;
use gha::parse::{parse_element, parse_poly, parse_scalar};
use gha::poly::{periodic_points, solve};
use gha::structure::{affine_conjugate, iso_check};
use gha::{Field, Poly, Scalar};
use proptest::prelude::*;
use rand::Rng;

fn pres(f: Poly, field: Field) -> Arc<Presentation> {
    Presentation::new(f, field).expect("valid presentation")
}

fn random_pres(rng: &mut impl Rng, field: Field, max_degree: usize) -> Arc<Presentation> {
    let degree = rng.gen_range(0..=max_degree);
    pres(poly_of_degree(rng, &field, degree, 2), field)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn product_acts_like_composition_of_actions(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = Field::exact(4);
        let p = random_pres(&mut rng, field, 2);
        let a = random_element(&mut rng, &p, 3, 3);
        let b = random_element(&mut rng, &p, 3, 3);
        let one = FreePolyElement::constant(field.one());
        prop_assert_eq!(
            free_module_action(&(&a * &b), &one),
            free_module_action(&a, &free_module_action(&b, &one))
        );
    }

    #[test]
    fn multiplication_is_associative(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = random_pres(&mut rng, Field::exact(3), 2);
        let a = random_element(&mut rng, &p, 2, 2);
        let b = random_element(&mut rng, &p, 2, 2);
        let c = random_element(&mut rng, &p, 2, 2);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn multiplication_distributes(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = random_pres(&mut rng, Field::exact(1), 3);
        let a = random_element(&mut rng, &p, 2, 3);
        let b = random_element(&mut rng, &p, 2, 3);
        let c = random_element(&mut rng, &p, 2, 3);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn degrees_add_for_nonconstant_f(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = Field::exact(5);
        let degree = rng.gen_range(1..=3);
        let p = pres(poly_of_degree(&mut rng, &field, degree, 2), field);
        let a = nonzero_element(&mut rng, &p, 3, 3);
        let b = nonzero_element(&mut rng, &p, 3, 3);
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        prop_assert_eq!((&a * &b).degree().ok(), Some(da + db));
    }

    #[test]
    fn elements_print_and_reparse(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = random_pres(&mut rng, Field::exact(6), 3);
        let e = random_element(&mut rng, &p, 4, 4);
        let text = e.to_string();
        prop_assert_eq!(parse_element(&text, &p).unwrap(), e, "{}", text);
    }

    #[test]
    fn polynomials_and_scalars_print_and_reparse(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = Field::exact(5);
        let degree = rng.gen_range(0..=5);
        let f = poly_of_degree(&mut rng, &field, degree, 4).scale(&nonzero_rational(&mut rng, &field));
        prop_assert_eq!(parse_poly(&f.to_string(), &field).unwrap(), f.clone());
        for c in f.coeffs() {
            prop_assert_eq!(&parse_scalar(&c.to_string(), &field).unwrap(), c);
        }
    }

    #[test]
    fn descriptors_survive_json(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = Field::exact(3);
        let d = ModuleDescriptor::Cmod {
            zdot: &small_scalar(&mut rng, &field, 5) * &small_rational(&mut rng, &field),
            n: rng.gen_range(1..=6),
        };
        let text = serde_json::to_string(&d).unwrap();
        prop_assert_eq!(ModuleDescriptor::from_json(&text, &field).unwrap(), d);
    }

    #[test]
    fn field_axioms_in_q_zeta5(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let k = Field::exact(5);
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
            let z = k.zeta(5, rng.gen_range(0..5));
            &small_scalar(rng, &k, 4) + &(&small_rational(rng, &k) * &z)
        };
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, k.zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), k.one());
        }
    }

    #[test]
    fn roots_of_unity_have_their_order(n in 1u32..=12, k in 0i64..24) {
        let field = Field::exact(n);
        let order = n / num_integer::gcd(n, k.rem_euclid(n as i64) as u32);
        prop_assert_eq!(field.zeta(n, k).root_of_unity_order(64), Some(order));
        prop_assert_eq!(field.zeta(n, k).pow(order as u64), field.one());
    }

    #[test]
    fn promotion_commutes_with_arithmetic(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let k = Field::exact(7);
        let a = small_scalar(&mut rng, &k, 9);
        let b = nonzero_scalar(&mut rng, &k, 9);
        let tol = 1e-9;
        let close = |x: &Scalar, y: &Scalar| (x.to_complex() - y.to_complex()).norm() <= tol * (1.0 + x.norm());
        let (pa, pb) = (a.promote(tol), b.promote(tol));
        prop_assert!(close(&(&a + &b).promote(tol), &(&pa + &pb)));
        prop_assert!(close(&(&a * &b).promote(tol), &(&pa * &pb)));
        prop_assert!(close(&a.try_div(&b).unwrap().promote(tol), &pa.try_div(&pb).unwrap()));
    }

    #[test]
    fn composition_multiplies_degrees(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = Field::exact(3);
        let (dp, dq) = (rng.gen_range(0..=4), rng.gen_range(1..=4));
        let p = poly_of_degree(&mut rng, &field, dp, 3);
        let q = poly_of_degree(&mut rng, &field, dq, 3);
        let composed = p.compose(&q);
        prop_assert_eq!(composed.degree(), Some(dp * dq));
        let at = small_scalar(&mut rng, &field, 3);
        prop_assert_eq!(composed.evaluate(&at), p.evaluate(&q.evaluate(&at)));
    }

    #[test]
    fn monic_products_of_linear_factors_are_solved(roots in prop::collection::btree_set(-6i64..=6, 1..=4)) {
        let field = Field::exact(1);
        let h = Poly::identity(&field);
        let p = roots
            .iter()
            .fold(Poly::constant(field.one()), |acc, &r| &acc * &h.add_scalar(&field.int(-r)));
        let rs = solve(&p, &field).unwrap();
        prop_assert!(rs.exact);
        prop_assert_eq!(rs.roots.len(), roots.len());
        let product = rs
            .roots
            .iter()
            .fold(Poly::constant(field.one()), |acc, r| &acc * &h.add_scalar(&-r));
        prop_assert_eq!(product, p);
    }
}

proptest! {
    #![proptest_config(config(20))]

    #[test]
    fn z_is_central(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = random_pres(&mut rng, Field::exact(4), 3);
        let z = GhaElement::generator(&p, Generator::Z);
        prop_assert!(z.is_central());
    }

    #[test]
    fn isomorphism_is_reflexive_and_symmetric(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = Field::exact(1);
        let (d1, d2) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        let f1 = poly_of_degree(&mut rng, &field, d1, 3);
        let f2 = poly_of_degree(&mut rng, &field, d2, 3);
        prop_assert!(iso_check(&f1, &f1, &field).unwrap().isomorphic);
        prop_assert_eq!(
            iso_check(&f1, &f2, &field).unwrap().isomorphic,
            iso_check(&f2, &f1, &field).unwrap().isomorphic
        );
    }

    #[test]
    fn affine_conjugates_are_recognized(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = Field::exact(1);
        let degree = rng.gen_range(2..=3);
        let f1 = poly_of_degree(&mut rng, &field, degree, 3);
        let a = nonzero_rational(&mut rng, &field);
        let c = small_rational(&mut rng, &field);
        let f2 = affine_conjugate(&f1, &a, &c).unwrap();
        let v = iso_check(&f1, &f2, &field).unwrap();
        prop_assert!(v.isomorphic, "{} vs {}", f1, f2);
        let w = v.witness.unwrap();
        let (src, dst) = if w.swapped { (&f2, &f1) } else { (&f1, &f2) };
        prop_assert_eq!(&affine_conjugate(src, &w.a, &w.c).unwrap(), dst);
    }

    #[test]
    fn periodic_orbits_have_exact_period(c in -8i64..=2, n in 1usize..=3) {
        let field = Field::exact(1);
        let f = Poly::from_ints(&[0, 0, 1], &field).add_scalar(&field.ratio(4 * c + 1, 4));
        let set = periodic_points(&f, n, &field).unwrap();
        for orbit in &set.orbits {
            prop_assert_eq!(orbit.period(), n);
            if orbit.backend() == gha::Backend::Exact {
                prop_assert!(orbit.validate(&f).is_ok());
            } else {
                let fp = f.promote(field.tol);
                for i in 0..n as i64 {
                    let image = fp.evaluate(orbit.at(i)).to_complex();
                    prop_assert!((image - orbit.at(i + 1).to_complex()).norm() < 1e-6);
                }
            }
        }
    }
}
