//! Coefficient arithmetic.
//!
//! A [`Scalar`] is either an exact element of a cyclotomic field Q(zeta_N) or an
//! approximate complex number compared up to a tolerance. Values of the two
//! backends never mix: the operator impls panic on a mismatch and the `try_*`
//! methods report it as [`ScalarError::BackendMismatch`]. Promotion from exact
//! to approximate goes through [`Scalar::promote`] and is one-way.

mod approx;
mod cyclotomic;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use approx::ApproxComplex;
pub use cyclotomic::{cyclotomic_polynomial, euler_phi, Cyclotomic};
pub(crate) use cyclotomic::{divisors, poly_compose, poly_product, rational_to_f64};

pub type Rational = BigRational;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ORDER: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("backend mismatch: exact and approximate scalars cannot be combined")]
    BackendMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Approx,
}

/// The working coefficient field: which backend, the exact conductor and the
/// numeric tolerances used by the approximate backend.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Field {
    pub backend: Backend,
    pub conductor: u32,
    pub tol: f64,
    pub max_order: u32,
}

impl Default for Field {
    fn default() -> Self {
        Field::exact(1)
    }
}

impl Field {
    pub fn exact(conductor: u32) -> Self {
        Field {
            backend: Backend::Exact,
            conductor: conductor.max(1),
            tol: DEFAULT_TOL,
            max_order: DEFAULT_MAX_ORDER,
        }
    }

    pub fn approx(tol: f64) -> Self {
        Field {
            backend: Backend::Approx,
            conductor: 1,
            tol,
            max_order: DEFAULT_MAX_ORDER,
        }
    }

    /// The approximate field with the same tolerances.
    pub fn to_approx(&self) -> Self {
        Field {
            backend: Backend::Approx,
            ..*self
        }
    }

    pub fn is_exact(&self) -> bool {
        self.backend == Backend::Exact
    }

    pub fn int(&self, v: i64) -> Scalar {
        match self.backend {
            Backend::Exact => Scalar::Exact(Cyclotomic::from_int(1, v)),
            Backend::Approx => self.complex(Complex64::new(v as f64, 0.0)),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.int(0)
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn rational(&self, q: BigRational) -> Scalar {
        match self.backend {
            Backend::Exact => Scalar::Exact(Cyclotomic::from_rational(1, q)),
            Backend::Approx => self.complex(Complex64::new(rational_to_f64(&q), 0.0)),
        }
    }

    pub fn ratio(&self, num: i64, den: i64) -> Scalar {
        self.rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `zeta_n^k = exp(2 pi i k / n)`.
    pub fn zeta(&self, n: u32, k: i64) -> Scalar {
        match self.backend {
            Backend::Exact => Scalar::Exact(Cyclotomic::zeta(n, k)),
            Backend::Approx => {
                let angle = std::f64::consts::TAU * (k.rem_euclid(n as i64) as f64) / n as f64;
                self.complex(Complex64::from_polar(1.0, angle))
            }
        }
    }

    pub fn imaginary_unit(&self) -> Scalar {
        match self.backend {
            Backend::Exact => self.zeta(4, 1),
            Backend::Approx => self.complex(Complex64::i()),
        }
    }

    /// An approximate scalar; panics if the field is exact.
    pub fn complex(&self, value: Complex64) -> Scalar {
        assert!(
            self.backend == Backend::Approx,
            "floating-point values require the approximate backend"
        );
        Scalar::Approx(ApproxComplex::new(value, self.tol))
    }

    /// Brings a scalar into this field's backend (exact -> approx promotes; approx -> exact panics).
    pub fn coerce(&self, s: &Scalar) -> Scalar {
        match (self.backend, s) {
            (Backend::Exact, Scalar::Exact(_)) => s.clone(),
            (Backend::Approx, _) => s.promote(self.tol),
            (Backend::Exact, Scalar::Approx(_)) => {
                panic!("approximate scalar cannot be demoted to the exact backend")
            }
        }
    }

    /// Roots of unity of Q(zeta_N) for this field's conductor (exact) or the
    /// conductor-th roots (approx). Used to seed candidate searches.
    pub fn roots_of_unity(&self) -> Vec<Scalar> {
        let n = self.conductor;
        let order = if n % 2 == 0 { n } else { 2 * n };
        (0..order as i64).map(|k| self.zeta(order, k)).collect()
    }
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Cyclotomic),
    Approx(ApproxComplex),
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Approx(_) => Backend::Approx,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(c) => c.is_zero(),
            Scalar::Approx(a) => a.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(c) => c.is_one(),
            Scalar::Approx(a) => (a.value() - 1.0).norm() <= a.tol(),
        }
    }

    /// An integer in the same backend (and tolerance) as `self`.
    pub fn int_like(&self, v: i64) -> Scalar {
        match self {
            Scalar::Exact(_) => Scalar::Exact(Cyclotomic::from_int(1, v)),
            Scalar::Approx(a) => {
                Scalar::Approx(ApproxComplex::new(Complex64::new(v as f64, 0.0), a.tol()))
            }
        }
    }

    pub fn zero_like(&self) -> Scalar {
        self.int_like(0)
    }

    pub fn one_like(&self) -> Scalar {
        self.int_like(1)
    }

    pub fn same_backend(&self, other: &Scalar) -> Result<(), ScalarError> {
        if self.backend() == other.backend() {
            Ok(())
        } else {
            Err(ScalarError::BackendMismatch)
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.same_backend(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.same_backend(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.same_backend(other)?;
        Ok(self * other)
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.same_backend(other)?;
        Ok(self * &other.inv()?)
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Exact(c) => c.inv().map(Scalar::Exact),
            Scalar::Approx(a) => a.inv().map(Scalar::Approx),
        }
    }

    pub fn pow(&self, e: u64) -> Scalar {
        match self {
            Scalar::Exact(c) => Scalar::Exact(c.pow(e)),
            Scalar::Approx(a) => Scalar::Approx(a.pow(e)),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(c) => c.to_complex(),
            Scalar::Approx(a) => a.value(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn tol(&self) -> Option<f64> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Approx(a) => Some(a.tol()),
        }
    }

    /// One-way promotion to the approximate backend.
    pub fn promote(&self, tol: f64) -> Scalar {
        Scalar::Approx(ApproxComplex::new(self.to_complex(), tol))
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Exact(c) => c.as_rational(),
            Scalar::Approx(_) => None,
        }
    }

    /// The least `l` with `self^l = 1`, if `self` is a root of unity.
    ///
    /// Exact values test the divisors of 2N; approximate values search
    /// denominators up to `max_order`.
    pub fn root_of_unity_order(&self, max_order: u32) -> Option<u32> {
        match self {
            Scalar::Exact(c) => c.root_of_unity_order(),
            Scalar::Approx(a) => a.root_of_unity_order(max_order),
        }
    }

    /// Lexicographic (re, im) key used for canonical orderings.
    pub fn sort_key(&self) -> (f64, f64) {
        let c = self.to_complex();
        (c.re, c.im)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Approx(a), Scalar::Approx(b)) => a == b,
            _ => false,
        }
    }
}

fn mismatch() -> ! {
    panic!("{}", ScalarError::BackendMismatch)
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.add(b)),
            (Scalar::Approx(a), Scalar::Approx(b)) => Scalar::Approx(a.add(b)),
            _ => mismatch(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.sub(b)),
            (Scalar::Approx(a), Scalar::Approx(b)) => Scalar::Approx(a.sub(b)),
            _ => mismatch(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.mul(b)),
            (Scalar::Approx(a), Scalar::Approx(b)) => Scalar::Approx(a.mul(b)),
            _ => mismatch(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(a.neg()),
            Scalar::Approx(a) => Scalar::Approx(a.neg()),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Serialized in the canonical textual form.
impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(c) => c.fmt(f),
            Scalar::Approx(a) => a.fmt(f),
        }
    }
}
