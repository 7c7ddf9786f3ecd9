use std::fmt;

use num_complex::Complex64;

use super::ScalarError;

/// A floating-point complex number carrying the tolerance used for equality.
#[derive(Clone, Copy, Debug)]
pub struct ApproxComplex {
    value: Complex64,
    tol: f64,
}

impl ApproxComplex {
    pub fn new(value: Complex64, tol: f64) -> Self {
        debug_assert!(value.re.is_finite() && value.im.is_finite(), "non-finite {value}");
        ApproxComplex { value, tol }
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn is_zero(&self) -> bool {
        self.value.norm() <= self.tol
    }

    fn with(&self, other: &Self, value: Complex64) -> Self {
        ApproxComplex::new(value, self.tol.max(other.tol))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.with(other, self.value + other.value)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.with(other, self.value - other.value)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.with(other, self.value * other.value)
    }

    pub fn neg(&self) -> Self {
        ApproxComplex::new(-self.value, self.tol)
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(ApproxComplex::new(self.value.inv(), self.tol))
    }

    pub fn pow(&self, e: u64) -> Self {
        ApproxComplex::new(self.value.powu(e as u32), self.tol)
    }

    /// Detects `self = exp(2 pi i p/q)` with `q <= max_order`, verifying `|self^q - 1| <= tol`.
    pub fn root_of_unity_order(&self, max_order: u32) -> Option<u32> {
        if (self.value.norm() - 1.0).abs() > self.tol {
            return None;
        }
        let turns = (self.value.arg() / std::f64::consts::TAU).rem_euclid(1.0);
        (1..=max_order).find_map(|q| {
            let p = (turns * q as f64).round();
            let close = (turns - p / q as f64).abs() <= self.tol;
            let verified = (self.value.powu(q) - 1.0).norm() <= self.tol;
            (close && verified).then_some(q)
        })
    }
}

impl PartialEq for ApproxComplex {
    fn eq(&self, other: &Self) -> bool {
        (self.value - other.value).norm() <= self.tol.max(other.tol)
    }
}

pub(crate) fn fmt_f64(x: f64) -> String {
    // Display for f64 is the shortest round-tripping decimal and never uses exponents.
    let s = format!("{x}");
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

impl fmt::Display for ApproxComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Complex64 { re, im } = self.value;
        if im == 0.0 {
            return f.write_str(&fmt_f64(re));
        }
        if re == 0.0 {
            return write!(f, "{}*i", fmt_f64(im));
        }
        let sign = if im < 0.0 { '-' } else { '+' };
        write!(f, "{} {} {}*i", fmt_f64(re), sign, fmt_f64(im.abs()))
    }
}
