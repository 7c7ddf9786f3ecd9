//! Univariate polynomials in `h` over [`Scalar`].

mod dynamics;
mod roots;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::scalar::{Backend, Cyclotomic, Field, Scalar, ScalarError};

pub(crate) use dynamics::recognize;
pub use dynamics::{periodic_points, solve, LinearFamily, Orbit, OrbitSet, RootSet};
pub use roots::{roots, roots_complex, RootConfig};

pub const DEFAULT_MAX_DEGREE: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("degree {degree} exceeds the configured maximum {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("root finding did not converge after {iterations} iterations")]
    NoConvergence {
        iterations: usize,
        partial: Vec<Complex64>,
    },
    #[error("the zero polynomial has every point as a root")]
    ZeroPolynomial,
    #[error("root finding needs a polynomial of degree at least 1")]
    ConstantPolynomial,
    #[error("continuum of orbits: f = h fixes every point; handle the commutative case separately")]
    ContinuumOfOrbits,
}

/// Dense coefficients, index = exponent; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn from_ints(coeffs: &[i64], field: &Field) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| field.int(c)).collect())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(c: Scalar, degree: usize) -> Self {
        let mut coeffs = vec![c.zero_like(); degree];
        coeffs.push(c);
        Poly::from_coeffs(coeffs)
    }

    /// The polynomial `h`.
    pub fn identity(field: &Field) -> Self {
        Poly::monomial(field.one(), 1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&Scalar> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn backend(&self) -> Option<Backend> {
        self.coeffs.first().map(Scalar::backend)
    }

    pub fn check_compatible(&self, other: &Poly) -> Result<(), ScalarError> {
        match (self.backend(), other.backend()) {
            (Some(a), Some(b)) if a != b => Err(ScalarError::BackendMismatch),
            _ => Ok(()),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.len() == 2 && self.coeffs[0].is_zero() && self.coeffs[1].is_one()
    }

    /// `h` in the backend of `self` (exact when `self` is zero).
    pub fn identity_like(&self) -> Self {
        match self.coeffs.first() {
            Some(c) => Poly::monomial(c.one_like(), 1),
            None => Poly::identity(&Field::default()),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add_scalar(&self, s: &Scalar) -> Self {
        let mut coeffs = self.coeffs.clone();
        match coeffs.first_mut() {
            Some(c0) => *c0 = &*c0 + s,
            None => coeffs.push(s.clone()),
        }
        Poly::from_coeffs(coeffs)
    }

    /// Horner evaluation.
    pub fn evaluate(&self, at: &Scalar) -> Scalar {
        let mut acc = at.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    pub fn evaluate_complex(&self, at: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * at + c.to_complex())
    }

    /// `self(inner(h))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        if let (Some(p), Some(q)) = (exact_coeffs(&self.coeffs), exact_coeffs(&inner.coeffs)) {
            if !q.is_empty() {
                let out = crate::scalar::poly_compose(&p, &q);
                return Poly::from_coeffs(out.into_iter().map(Scalar::Exact).collect());
            }
        }
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = (&acc * inner).add_scalar(c);
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = match self.coeffs.first() {
            Some(c) => Poly::constant(c.one_like()),
            None if e == 0 => Poly::constant(Field::default().one()),
            None => return Poly::zero(),
        };
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `f^{(i)}`, with `f^{(0)} = h`, bounded by [`DEFAULT_MAX_DEGREE`].
    pub fn iterate(&self, i: usize) -> Result<Poly, PolyError> {
        self.iterate_bounded(i, DEFAULT_MAX_DEGREE)
    }

    pub fn iterate_bounded(&self, i: usize, max_degree: usize) -> Result<Poly, PolyError> {
        if let Some(d) = self.degree() {
            if d >= 2 && i > 0 {
                // d^i > max_degree, checked without overflow
                let mut degree: usize = 1;
                for _ in 0..i {
                    degree = degree.saturating_mul(d);
                    if degree > max_degree {
                        return Err(PolyError::DegreeOverflow {
                            degree,
                            max: max_degree,
                        });
                    }
                }
            }
        }
        let mut acc = self.identity_like();
        for _ in 0..i {
            acc = self.compose(&acc);
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &c.int_like(k as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        let lead = divisor.leading().ok_or(ScalarError::DivisionByZero)?;
        let lead_inv = lead.inv()?;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![lead.zero_like(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * dj);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.inv().expect("leading coefficient is nonzero")),
            None => Poly::zero(),
        }
    }

    /// Monic gcd by Euclid's algorithm; meaningful for exact coefficients.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("divisor is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self / gcd(self, self')`, the product of the distinct linear factors.
    pub fn square_free_part(&self) -> Poly {
        if self.is_constant() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).expect("gcd is nonzero").0.monic()
    }

    pub fn promote(&self, tol: f64) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c.promote(tol)).collect())
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(Scalar::to_complex).collect()
    }

    /// Sum of coefficient magnitudes.
    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(Scalar::norm).sum()
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = &*c + s;
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

fn exact_coeffs(coeffs: &[Scalar]) -> Option<Vec<Cyclotomic>> {
    coeffs
        .iter()
        .map(|c| match c {
            Scalar::Exact(x) => Some(x.clone()),
            Scalar::Approx(_) => None,
        })
        .collect()
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let (Some(a), Some(b)) = (exact_coeffs(&self.coeffs), exact_coeffs(&rhs.coeffs)) {
            let out = crate::scalar::poly_product(&a, &b);
            return Poly::from_coeffs(out.into_iter().map(Scalar::Exact).collect());
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Poly::from_coeffs(out)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

pub(crate) fn needs_parens(s: &str) -> bool {
    s.starts_with('-') || s.contains(' ')
}

pub(crate) fn wrap(s: String) -> String {
    if needs_parens(&s) {
        format!("({s})")
    } else {
        s
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Poly {
    /// Canonical syntax, highest degree first: `h^2 + 2*h + (-3/4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let power = match j {
                0 => String::new(),
                1 => "h".to_string(),
                _ => format!("h^{j}"),
            };
            parts.push(if j == 0 {
                wrap(c.to_string())
            } else if c.is_one() && c.tol().is_none() {
                power
            } else {
                format!("{}*{}", wrap(c.to_string()), power)
            });
        }
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::exact(1)
    }

    /// h^2 + 2h - 3/4
    fn example15() -> Poly {
        let f = q();
        Poly::from_coeffs(vec![f.ratio(-3, 4), f.int(2), f.int(1)])
    }

    #[test]
    fn difference_of_squares() {
        let f = q();
        let a = Poly::from_ints(&[1, 1], &f);
        let b = Poly::from_ints(&[-1, 1], &f);
        assert_eq!(&a * &b, Poly::from_ints(&[-1, 0, 1], &f));
    }

    #[test]
    fn half_is_a_fixed_point_of_example15() {
        let f = q();
        assert_eq!(example15().evaluate(&f.ratio(1, 2)), f.ratio(1, 2));
    }

    #[test]
    fn fixed_points_of_monomial_maps() {
        // w^(m-1) = 1 makes w a fixed point of h^m
        let f = Field::exact(4);
        let w = f.zeta(4, 1);
        assert_eq!(Poly::monomial(f.one(), 5).evaluate(&w), w);
    }

    #[test]
    fn composition() {
        let f = q();
        let sq = Poly::monomial(f.one(), 2);
        assert_eq!(sq.compose(&sq), Poly::monomial(f.one(), 4));
        let p = example15();
        assert_eq!(p.compose(&Poly::identity(&f)), p);
        // f(f(h)) - h = (h + 3/2)^3 (h - 1/2)
        let lhs = &p.compose(&p) - &Poly::identity(&f);
        let a = Poly::from_coeffs(vec![f.ratio(3, 2), f.one()]);
        let b = Poly::from_coeffs(vec![f.ratio(-1, 2), f.one()]);
        assert_eq!(lhs, &(&(&a * &a) * &a) * &b);
    }

    #[test]
    fn iteration() {
        let f = Field::exact(3);
        let wh = Poly::monomial(f.zeta(3, 1), 1);
        assert_eq!(wh.iterate(3).unwrap(), Poly::identity(&f));
        let p = example15();
        assert_eq!(p.iterate(1).unwrap(), p);
        assert_eq!(p.iterate(0).unwrap(), Poly::identity(&f));
        let sq = Poly::monomial(f.one(), 2);
        assert_eq!(sq.iterate(3).unwrap(), Poly::monomial(f.one(), 8));
        assert!(matches!(
            sq.iterate(13),
            Err(PolyError::DegreeOverflow { max: 4096, .. })
        ));
    }

    #[test]
    fn division_and_gcd() {
        let f = q();
        let p = example15();
        let sq = &p.compose(&p) - &Poly::identity(&f);
        let (quot, rem) = sq.div_rem(&(&p - &Poly::identity(&f))).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quot.degree(), Some(2));
        // square-free part of (h+3/2)^3 (h-1/2) is (h+3/2)(h-1/2) = f - h
        assert_eq!(sq.square_free_part(), &p - &Poly::identity(&f));
    }

    #[test]
    fn canonical_display() {
        assert_eq!(example15().to_string(), "h^2 + 2*h + (-3/4)");
        let f = Field::exact(3);
        assert_eq!(Poly::monomial(f.zeta(3, 1), 1).to_string(), "zeta(3)*h");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::monomial(f.int(-1), 1).to_string(), "(-1)*h");
    }

    #[test]
    fn mismatch_detected() {
        let a = Poly::from_ints(&[1, 1], &q());
        let b = Poly::from_ints(&[1, 1], &Field::approx(1e-9));
        assert_eq!(a.check_compatible(&b), Err(ScalarError::BackendMismatch));
    }
}
