//! Center of H(f) and the isomorphism problem between two such algebras.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, GhaElement, Generator, Presentation};
use crate::poly::{recognize, roots_complex, Poly, PolyError, RootConfig};
use crate::scalar::{Backend, Field, Scalar, ScalarError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructureError {
    #[error("conjugation needs a nonzero scale factor")]
    ZeroScale,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CenterCase {
    /// The center is C[z].
    #[serde(rename = "trivial-Cz")]
    Trivial,
    /// `f = w h + (1 - w) c` with `w` of finite order `l`.
    #[serde(rename = "cyclotomic-case")]
    Cyclotomic,
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterDescription {
    pub schema_version: u32,
    pub case: CenterCase,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<Scalar>,
    pub generators: Vec<GhaElement>,
}

/// `(w, c, l)` when `f = w h + (1 - w) c` and `w` has multiplicative order `l`.
pub fn rotation_form(f: &Poly, max_order: u32) -> Option<(Scalar, Scalar, u32)> {
    if f.degree() != Some(1) {
        return None;
    }
    let w = f.coeffs()[1].clone();
    let b = f.coeffs()[0].clone();
    let l = w.root_of_unity_order(max_order)?;
    if w.is_one() {
        // f = h; c is arbitrary and taken to be 0
        return b.is_zero().then(|| (w.clone(), b.zero_like(), 1));
    }
    let c = b.try_div(&(&w.one_like() - &w)).ok()?;
    Some((w, c, l))
}

/// Generators of the center: `{x^l, y^l, (h - c)^l, z}` in the rotation case
/// and `{z}` otherwise.
pub fn center(pres: &Arc<Presentation>) -> CenterDescription {
    let z = GhaElement::generator(pres, Generator::Z);
    match rotation_form(pres.f(), pres.field().max_order) {
        Some((_, c, l)) => {
            let x = GhaElement::generator(pres, Generator::X);
            let y = GhaElement::generator(pres, Generator::Y);
            let shifted = pres.h().add_scalar(&-&c).pow(l);
            CenterDescription {
                schema_version: SCHEMA_VERSION,
                case: CenterCase::Cyclotomic,
                l: Some(l),
                c: Some(c),
                generators: vec![x.pow(l), y.pow(l), GhaElement::from_poly(pres, shifted), z],
            }
        }
        None => CenterDescription {
            schema_version: SCHEMA_VERSION,
            case: CenterCase::Trivial,
            l: None,
            c: None,
            generators: vec![z],
        },
    }
}

/// `a f(a^{-1}(h - c)) + c`.
pub fn affine_conjugate(f: &Poly, a: &Scalar, c: &Scalar) -> Result<Poly, StructureError> {
    let a_inv = a.inv().map_err(|_| StructureError::ZeroScale)?;
    a.same_backend(c)?;
    if let Some(b) = f.backend() {
        if b != a.backend() {
            return Err(ScalarError::BackendMismatch.into());
        }
    }
    let inner = Poly::from_coeffs(vec![-&(&a_inv * c), a_inv]);
    Ok(f.compose(&inner).scale(a).add_scalar(c))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub a: Scalar,
    pub c: Scalar,
    pub swapped: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoVerdict {
    pub schema_version: u32,
    pub isomorphic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// The witness was found numerically and is not certified in the exact field.
    pub numeric_witness: bool,
    pub reason: String,
}

impl IsoVerdict {
    fn yes(case: u8, witness: Option<Witness>, reason: impl Into<String>) -> Self {
        IsoVerdict {
            schema_version: SCHEMA_VERSION,
            isomorphic: true,
            case: Some(case),
            witness,
            numeric_witness: false,
            reason: reason.into(),
        }
    }

    fn no(reason: impl Into<String>) -> Self {
        IsoVerdict {
            schema_version: SCHEMA_VERSION,
            isomorphic: false,
            case: None,
            witness: None,
            numeric_witness: false,
            reason: reason.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Constant,
    Identity,
    Translation,
    Linear,
    Higher(usize),
}

fn shape(f: &Poly) -> Shape {
    match f.degree() {
        None | Some(0) => Shape::Constant,
        Some(1) if f.coeffs()[1].is_one() => {
            if f.coeffs()[0].is_zero() {
                Shape::Identity
            } else {
                Shape::Translation
            }
        }
        Some(1) => Shape::Linear,
        Some(d) => Shape::Higher(d),
    }
}

/// Decides whether H(f1) and H(f2) are isomorphic.
pub fn iso_check(f1: &Poly, f2: &Poly, field: &Field) -> Result<IsoVerdict, StructureError> {
    f1.check_compatible(f2)?;
    let (s1, s2) = (shape(f1), shape(f2));
    let verdict = match (s1, s2) {
        (Shape::Constant, Shape::Constant) => IsoVerdict::yes(1, None, "both f are constant"),
        (Shape::Identity, Shape::Identity) => IsoVerdict::yes(2, None, "both algebras are commutative"),
        (Shape::Translation, Shape::Translation) => {
            let (c1, c2) = (&f1.coeffs()[0], &f2.coeffs()[0]);
            let witness = Witness {
                a: c2.try_div(c1)?,
                c: c1.zero_like(),
                swapped: false,
            };
            IsoVerdict::yes(3, Some(witness), "both f are nonzero translations")
        }
        (Shape::Linear, Shape::Linear) => linear_case(f1, f2)?,
        (Shape::Higher(d1), Shape::Higher(d2)) if d1 == d2 => higher_case(f1, f2, field)?,
        (Shape::Higher(d1), Shape::Higher(d2)) => {
            IsoVerdict::no(format!("degrees differ ({d1} vs {d2})"))
        }
        _ => IsoVerdict::no(format!("f1 and f2 are of different types ({s1:?} vs {s2:?})")),
    };
    Ok(verdict)
}

fn linear_case(f1: &Poly, f2: &Poly) -> Result<IsoVerdict, StructureError> {
    let (b1, a1) = (&f1.coeffs()[0], &f1.coeffs()[1]);
    let (b2, a2) = (&f2.coeffs()[0], &f2.coeffs()[1]);
    let one = a1.one_like();
    if a1 == a2 {
        // f1(h - c) + c = f2
        let c = (b2 - b1).try_div(&(&one - a1))?;
        return Ok(IsoVerdict::yes(
            4,
            Some(Witness { a: one, c, swapped: false }),
            "equal multipliers",
        ));
    }
    if (a1 * a2).is_one() {
        let c = b2.try_div(&(&one - a2))?;
        return Ok(IsoVerdict::yes(
            4,
            Some(Witness { a: one, c, swapped: true }),
            "inverse multipliers",
        ));
    }
    Ok(IsoVerdict::no("multipliers are neither equal nor inverse"))
}

/// Residual between two polynomials relative to the size of `reference`.
fn poly_close(p: &Poly, q: &Poly, tol: f64) -> bool {
    let diff = p - q;
    diff.norm1() <= 100.0 * tol * (1.0 + q.norm1())
}

/// Solves `c` from the `h^{d-1}` coefficient of `a f1(a^{-1}(h - c)) + c = f2`.
fn solve_shift(f1: &Poly, f2: &Poly, a: &Scalar) -> Option<Scalar> {
    let d = f1.degree()?;
    let (pd, pd1) = (&f1.coeffs()[d], &f1.coeffs()[d - 1]);
    let qd1 = &f2.coeffs()[d - 1];
    let a_inv = a.inv().ok()?;
    // q_{d-1} = -d c p_d a^{1-d} + p_{d-1} a^{2-d}
    let a1d = a_inv.pow(d as u64 - 1);
    let a2d = &a1d * a;
    let slope = &(&pd.int_like(-(d as i64)) * pd) * &a1d;
    (qd1 - &(pd1 * &a2d)).try_div(&slope).ok()
}

fn higher_case(f1: &Poly, f2: &Poly, field: &Field) -> Result<IsoVerdict, StructureError> {
    let d = f1.degree().unwrap();
    let ratio = f1.leading().unwrap().try_div(f2.leading().unwrap())?;
    let exact = f1.backend() == Some(Backend::Exact);

    if exact {
        let conductor = [f1, f2]
            .iter()
            .flat_map(|p| p.coeffs())
            .fold(field.conductor, |acc, c| match c {
                Scalar::Exact(x) => num_integer::lcm(acc, x.conductor()),
                Scalar::Approx(_) => acc,
            });
        let exact_field = Field::exact(conductor);
        for a in exact_roots(&ratio, d - 1, &exact_field, field.tol)? {
            if let Some(c) = solve_shift(f1, f2, &a) {
                if affine_conjugate(f1, &a, &c)? == *f2 {
                    return Ok(IsoVerdict::yes(
                        5,
                        Some(Witness { a, c, swapped: false }),
                        "affine conjugate",
                    ));
                }
            }
        }
        // no certified witness in the working field; try numerically
        let (g1, g2) = (f1.promote(field.tol), f2.promote(field.tol));
        if let Some(w) = numeric_witness(&g1, &g2, d, field.tol)? {
            let mut verdict = IsoVerdict::yes(5, Some(w), "affine conjugate (numeric witness)");
            verdict.numeric_witness = true;
            return Ok(verdict);
        }
        return Ok(IsoVerdict::no("no affine conjugacy between f1 and f2"));
    }
    match numeric_witness(f1, f2, d, field.tol)? {
        Some(w) => Ok(IsoVerdict::yes(5, Some(w), "affine conjugate")),
        None => Ok(IsoVerdict::no("no affine conjugacy between f1 and f2")),
    }
}

/// Exact `k`-th roots of `r` in the given field (all when `k = 1`).
fn exact_roots(r: &Scalar, k: usize, exact: &Field, tol: f64) -> Result<Vec<Scalar>, StructureError> {
    if k == 1 {
        return Ok(vec![r.clone()]);
    }
    let mut coeffs = vec![-r.to_complex()];
    coeffs.extend(std::iter::repeat(num_complex::Complex64::new(0.0, 0.0)).take(k - 1));
    coeffs.push(num_complex::Complex64::new(1.0, 0.0));
    let numeric = roots_complex(&coeffs, &RootConfig::with_tol(tol))?;
    let mut out: Vec<Scalar> = Vec::new();
    for z in numeric {
        for cand in recognize(z, exact) {
            if cand.pow(k as u64) == *r && !out.contains(&cand) {
                out.push(cand);
            }
        }
    }
    Ok(out)
}

fn numeric_witness(f1: &Poly, f2: &Poly, d: usize, tol: f64) -> Result<Option<Witness>, StructureError> {
    let ratio = f1.leading().unwrap().try_div(f2.leading().unwrap())?;
    let candidates: Vec<Scalar> = if d == 2 {
        vec![ratio]
    } else {
        let mut coeffs = vec![-ratio.to_complex()];
        coeffs.extend(std::iter::repeat(num_complex::Complex64::new(0.0, 0.0)).take(d - 2));
        coeffs.push(num_complex::Complex64::new(1.0, 0.0));
        roots_complex(&coeffs, &RootConfig::with_tol(tol))?
            .into_iter()
            .map(|z| Scalar::Approx(crate::scalar::ApproxComplex::new(z, tol)))
            .collect()
    };
    for a in candidates {
        let Some(c) = solve_shift(f1, f2, &a) else { continue };
        if poly_close(&affine_conjugate(f1, &a, &c)?, f2, tol) {
            return Ok(Some(Witness { a, c, swapped: false }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::exact(1)
    }

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_ints(coeffs, &q())
    }

    #[test]
    fn center_cases() {
        let f3 = Field::exact(3);
        let pres = Presentation::new(Poly::monomial(f3.zeta(3, 1), 1), f3).unwrap();
        let c = center(&pres);
        assert_eq!(c.case, CenterCase::Cyclotomic);
        assert_eq!(c.l, Some(3));
        let names: Vec<String> = c.generators.iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["x^3", "y^3", "h^3", "x*y + (-1)*h"]);
        assert!(c.generators.iter().all(GhaElement::is_central));

        let ident = Presentation::new(p(&[0, 1]), q()).unwrap();
        let c = center(&ident);
        assert_eq!((c.l, c.generators.len()), (Some(1), 4));
        assert_eq!(c.generators[2].to_string(), "h");

        let sq = Presentation::new(p(&[0, 0, 1]), q()).unwrap();
        assert_eq!(center(&sq).case, CenterCase::Trivial);
        let tr = Presentation::new(p(&[1, 1]), q()).unwrap();
        assert_eq!(center(&tr).case, CenterCase::Trivial);
    }

    #[test]
    fn rotation_about_a_point() {
        // f = -h + 2 = w h + (1 - w) c with w = -1, c = 1
        let (w, c, l) = rotation_form(&p(&[2, -1]), 1024).unwrap();
        assert_eq!((w, c, l), (q().int(-1), q().one(), 2));
    }

    #[test]
    fn conjugation() {
        let f = p(&[1, 3, 0, 2]);
        assert_eq!(affine_conjugate(&f, &q().one(), &q().zero()).unwrap(), f);
        let a = q().int(3);
        let sq = affine_conjugate(&p(&[0, 0, 1]), &a, &q().zero()).unwrap();
        assert_eq!(sq, Poly::monomial(q().ratio(1, 3), 2));
        assert_eq!(
            affine_conjugate(&f, &q().zero(), &q().one()),
            Err(StructureError::ZeroScale)
        );
    }

    #[test]
    fn verdict_table() {
        let field = q();
        let check = |a: &Poly, b: &Poly| iso_check(a, b, &field).unwrap();
        assert_eq!(check(&p(&[3]), &p(&[-7])).case, Some(1));
        assert_eq!(check(&p(&[0, 1]), &p(&[0, 1])).case, Some(2));
        assert_eq!(check(&p(&[1, 1]), &p(&[5, 1])).case, Some(3));
        let half = Poly::monomial(field.ratio(1, 2), 1);
        let v = check(&p(&[1, 2]), &half);
        assert_eq!(v.case, Some(4));
        assert!(v.witness.unwrap().swapped);
        assert!(!check(&p(&[0, 2]), &p(&[0, 3])).isomorphic);
        assert!(!check(&p(&[0, 0, 1]), &p(&[1, 0, 1])).isomorphic);
        assert!(!check(&p(&[0, 0, 1]), &p(&[0, 0, 0, 1])).isomorphic);
        assert!(!check(&p(&[0, 1]), &p(&[1, 1])).isomorphic);
    }

    #[test]
    fn case_five_witness() {
        let field = q();
        let f1 = p(&[1, -2, 0, 3]);
        let (a, c) = (field.ratio(-2, 3), field.ratio(5, 7));
        let f2 = affine_conjugate(&f1, &a, &c).unwrap();
        let v = iso_check(&f1, &f2, &field).unwrap();
        assert_eq!(v.case, Some(5));
        assert!(!v.numeric_witness);
        let w = v.witness.unwrap();
        assert_eq!(affine_conjugate(&f1, &w.a, &w.c).unwrap(), f2);
    }

    #[test]
    fn numeric_fallback_outside_the_field() {
        // a = 1 + zeta(8) does not lie in Q, so only a numeric witness exists
        let f8 = Field::exact(8);
        let f1 = Poly::from_ints(&[0, 0, 0, 1], &f8);
        let a = &f8.one() + &f8.zeta(8, 1);
        let f2 = affine_conjugate(&f1, &a, &f8.zero()).unwrap();
        let v = iso_check(&f1, &f2, &Field::exact(1)).unwrap();
        assert!(v.isomorphic && v.numeric_witness);
    }
}
