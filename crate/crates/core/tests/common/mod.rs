#![allow(dead_code)]

use std::sync::Arc;

use gha::algebra::{GhaElement, Presentation};
use gha::{Field, Poly, Scalar};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p + q zeta_N` with small integers, or a plain integer when `N = 1`.
pub fn small_scalar(rng: &mut impl Rng, field: &Field, bound: i64) -> Scalar {
    let p = field.int(rng.gen_range(-bound..=bound));
    if field.conductor == 1 {
        return p;
    }
    let q = field.int(rng.gen_range(-bound..=bound));
    &p + &(&q * &field.zeta(field.conductor, 1))
}

pub fn nonzero_scalar(rng: &mut impl Rng, field: &Field, bound: i64) -> Scalar {
    loop {
        let s = small_scalar(rng, field, bound);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn small_rational(rng: &mut impl Rng, field: &Field) -> Scalar {
    field.ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn nonzero_rational(rng: &mut impl Rng, field: &Field) -> Scalar {
    loop {
        let s = small_rational(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A polynomial of exactly the given degree.
pub fn poly_of_degree(rng: &mut impl Rng, field: &Field, degree: usize, bound: i64) -> Poly {
    let mut coeffs: Vec<Scalar> = (0..degree).map(|_| small_scalar(rng, field, bound)).collect();
    coeffs.push(nonzero_scalar(rng, field, bound));
    Poly::from_coeffs(coeffs)
}

/// Sum of up to `terms` monomials `x^i g(h) y^k` with `i, k, deg g <= max_exp`.
pub fn random_element(
    rng: &mut impl Rng,
    pres: &Arc<Presentation>,
    terms: usize,
    max_exp: u32,
) -> GhaElement {
    random_element_bounded(rng, pres, terms, max_exp, 3)
}

/// As [`random_element`] with coefficients `p + q zeta_N`, `|p|, |q| <= bound`.
pub fn random_element_bounded(
    rng: &mut impl Rng,
    pres: &Arc<Presentation>,
    terms: usize,
    max_exp: u32,
    bound: i64,
) -> GhaElement {
    let field = *pres.field();
    let count = rng.gen_range(1..=terms);
    let parts = (0..count).map(|_| {
        let i = rng.gen_range(0..=max_exp);
        let k = rng.gen_range(0..=max_exp);
        let deg = rng.gen_range(0..=max_exp as usize);
        ((i, k), poly_of_degree(rng, &field, deg, bound))
    });
    GhaElement::from_terms(pres, parts.collect::<Vec<_>>())
}

pub fn nonzero_element(
    rng: &mut impl Rng,
    pres: &Arc<Presentation>,
    terms: usize,
    max_exp: u32,
) -> GhaElement {
    loop {
        let e = random_element(rng, pres, terms, max_exp);
        if !e.is_zero() {
            return e;
        }
    }
}
