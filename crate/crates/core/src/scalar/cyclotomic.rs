//! Exact arithmetic in the cyclotomic field Q(zeta_N).
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^(phi(N)-1)` and
//! every product is reduced modulo the N-th cyclotomic polynomial. Values of
//! different conductors are embedded into the field of the lcm of their
//! conductors before they are combined, so `zeta(3) + zeta(4)` is a valid
//! element of Q(zeta_12).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ScalarError;

/// The N-th cyclotomic polynomial with integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    field(n).modulus.clone()
}

pub fn euler_phi(n: u32) -> usize {
    let mut n = n as u64;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

pub(crate) fn divisors(n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

#[derive(Debug)]
pub(crate) struct CycloField {
    conductor: u32,
    phi: usize,
    /// Monic, length phi + 1.
    modulus: Vec<BigInt>,
}

fn registry() -> &'static Mutex<HashMap<u32, Arc<CycloField>>> {
    static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
    FIELDS.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn field(n: u32) -> Arc<CycloField> {
    assert!(n >= 1, "cyclotomic conductor must be positive");
    if let Some(f) = registry().lock().unwrap().get(&n) {
        return f.clone();
    }
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, all divisions exact and monic.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let div = field(d).modulus.clone();
        num = divide_monic(&num, &div);
    }
    let built = Arc::new(CycloField {
        conductor: n,
        phi: num.len() - 1,
        modulus: num,
    });
    registry()
        .lock()
        .unwrap()
        .entry(n)
        .or_insert(built)
        .clone()
}

fn divide_monic(num: &[BigInt], div: &[BigInt]) -> Vec<BigInt> {
    let dd = div.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in div.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// An element of Q(zeta_N) in the power basis.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CycloField>,
    coords: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn from_rational(conductor: u32, q: BigRational) -> Self {
        let field = field(conductor);
        let mut coords = vec![BigRational::zero(); field.phi];
        coords[0] = q;
        Cyclotomic { field, coords }
    }

    pub fn from_int(conductor: u32, v: i64) -> Self {
        Self::from_rational(conductor, BigRational::from_integer(BigInt::from(v)))
    }

    /// `zeta_n^k`; negative `k` is taken modulo `n`.
    pub fn zeta(n: u32, k: i64) -> Self {
        let field = field(n);
        let e = k.rem_euclid(n as i64) as usize;
        let mut raw = vec![BigRational::zero(); e + 1];
        raw[e] = BigRational::one();
        let coords = reduce(raw, &field);
        Cyclotomic { field, coords }
    }

    /// Builds an element from power-basis coordinates (any length; reduced).
    pub fn from_coords(conductor: u32, coords: Vec<BigRational>) -> Self {
        let field = field(conductor);
        let coords = reduce(coords, &field);
        Cyclotomic { field, coords }
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The value as a rational number, if it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Embeds into Q(zeta_m); `m` must be a multiple of the conductor.
    pub fn lift(&self, m: u32) -> Self {
        let n = self.field.conductor;
        if m == n {
            return self.clone();
        }
        assert!(m % n == 0, "cannot embed Q(zeta_{n}) into Q(zeta_{m})");
        let step = (m / n) as usize;
        let target = field(m);
        let mut raw = vec![BigRational::zero(); (self.coords.len() - 1) * step + 1];
        for (k, c) in self.coords.iter().enumerate() {
            raw[k * step] = c.clone();
        }
        Cyclotomic {
            coords: reduce(raw, &target),
            field: target,
        }
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let (n, m) = (a.field.conductor, b.field.conductor);
        if n == m {
            return (a.clone(), b.clone());
        }
        let l = n.lcm(&m);
        (a.lift(l), b.lift(l))
    }

    pub fn add(&self, other: &Self) -> Self {
        if Arc::ptr_eq(&self.field, &other.field) {
            let coords = self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(x, y)| x + y)
                .collect();
            return Cyclotomic {
                field: self.field.clone(),
                coords,
            };
        }
        let (a, b) = Self::aligned(self, other);
        a.add(&b)
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if !Arc::ptr_eq(&self.field, &other.field) {
            let (a, b) = Self::aligned(self, other);
            return a.mul(&b);
        }
        if self.field.phi == 1 {
            return Cyclotomic {
                field: self.field.clone(),
                coords: vec![&self.coords[0] * &other.coords[0]],
            };
        }
        let mut raw = vec![BigRational::zero(); 2 * self.field.phi - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Cyclotomic {
            coords: reduce(raw, &self.field),
            field: self.field.clone(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Cyclotomic {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(self.field.conductor, q.recip()));
        }
        // Solve (multiplication-by-self matrix) * v = e_0 over Q.
        let phi = self.field.phi;
        let mut columns = Vec::with_capacity(phi);
        for j in 0..phi {
            let basis = Self::from_coords(self.field.conductor, unit_vector(phi, j));
            columns.push(self.mul(&basis).coords);
        }
        let mut aug: Vec<Vec<BigRational>> = (0..phi)
            .map(|r| {
                let mut row: Vec<BigRational> = columns.iter().map(|c| c[r].clone()).collect();
                row.push(if r == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        for col in 0..phi {
            let pivot = (col..phi)
                .find(|&r| !aug[r][col].is_zero())
                .expect("nonzero element of a field has an invertible multiplication map");
            aug.swap(col, pivot);
            let p = aug[col][col].clone();
            for v in aug[col].iter_mut() {
                *v /= &p;
            }
            for r in 0..phi {
                if r != col && !aug[r][col].is_zero() {
                    let factor = aug[r][col].clone();
                    let pivot_row = aug[col].clone();
                    for (v, pv) in aug[r].iter_mut().zip(pivot_row.iter()) {
                        *v -= &factor * pv;
                    }
                }
            }
        }
        let coords = aug.into_iter().map(|row| row[phi].clone()).collect();
        Ok(Cyclotomic {
            field: self.field.clone(),
            coords,
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_int(self.field.conductor, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.field.conductor as f64;
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / n;
                Complex64::from_polar(rational_to_f64(c), angle)
            })
            .sum()
    }

    /// Least `l` with `self^l = 1`. Roots of unity in Q(zeta_N) have order dividing 2N.
    pub fn root_of_unity_order(&self) -> Option<u32> {
        let bound = 2 * self.field.conductor;
        if self.is_zero() || !self.pow(bound as u64).is_one() {
            return None;
        }
        divisors(bound)
            .into_iter()
            .find(|&k| self.pow(k as u64).is_one())
    }
}

fn unit_vector(len: usize, j: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); len];
    v[j] = BigRational::one();
    v
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Reduces a coefficient vector modulo the field's cyclotomic polynomial.
fn reduce(mut raw: Vec<BigRational>, field: &CycloField) -> Vec<BigRational> {
    let phi = field.phi;
    if raw.len() > phi {
        for deg in (phi..raw.len()).rev() {
            let c = std::mem::take(&mut raw[deg]);
            if c.is_zero() {
                continue;
            }
            // x^deg = x^(deg-phi) * (x^phi) and x^phi = -sum_{j<phi} m_j x^j.
            for (j, m) in field.modulus[..phi].iter().enumerate() {
                if !m.is_zero() {
                    raw[deg - phi + j] -= &c * BigRational::from_integer(m.clone());
                }
            }
        }
    }
    raw.resize(phi, BigRational::zero());
    raw
}

/// A polynomial over `Q(zeta_N)` as integer coordinate vectors over one
/// common denominator. Used for products and compositions, where rational
/// normalization per coefficient operation would dominate.
struct Cleared {
    coeffs: Vec<Vec<BigInt>>,
    den: BigInt,
}

impl Cleared {
    fn new(values: &[Cyclotomic], l: u32) -> Self {
        let values: Vec<Cyclotomic> = values.iter().map(|v| v.lift(l)).collect();
        let den = values
            .iter()
            .flat_map(|v| v.coords.iter())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let coeffs = values
            .iter()
            .map(|v| {
                v.coords
                    .iter()
                    .map(|c| c.numer() * (&den / c.denom()))
                    .collect()
            })
            .collect();
        Cleared { coeffs, den }
    }

    fn finish(self, target: &Arc<CycloField>) -> Vec<Cyclotomic> {
        let den = self.den;
        self.coeffs
            .into_iter()
            .map(|row| Cyclotomic {
                coords: row
                    .into_iter()
                    .map(|c| {
                        if den.is_one() {
                            BigRational::from_integer(c)
                        } else {
                            BigRational::new(c, den.clone())
                        }
                    })
                    .collect(),
                field: target.clone(),
            })
            .collect()
    }
}

type IntPoly = Vec<Vec<BigInt>>;

/// Product of integer-coordinate polynomials, reduced modulo the cyclotomic
/// polynomial of `target`.
fn int_product(a: &[Vec<BigInt>], b: &[Vec<BigInt>], target: &CycloField) -> IntPoly {
    let mut raw = if a.len().min(b.len()) * target.phi < 8 {
        schoolbook(a, b, target.phi)
    } else {
        kronecker(a, b, target.phi)
    };
    reduce_rows(&mut raw, target);
    raw
}

/// Unreduced product; rows have length `2 phi - 1`.
fn schoolbook(a: &[Vec<BigInt>], b: &[Vec<BigInt>], phi: usize) -> IntPoly {
    let mut raw = vec![vec![BigInt::zero(); 2 * phi - 1]; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (k, xk) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, y) in b.iter().enumerate() {
                let row = &mut raw[i + j];
                for (m, ym) in y.iter().enumerate() {
                    if !ym.is_zero() {
                        row[k + m] += xk * ym;
                    }
                }
            }
        }
    }
    raw
}

/// Unreduced product by Kronecker substitution: both operands are packed
/// into single integers with signed slots wide enough for any output
/// coefficient, multiplied once and unpacked.
fn kronecker(a: &[Vec<BigInt>], b: &[Vec<BigInt>], phi: usize) -> IntPoly {
    let width = 2 * phi - 1;
    let max_bits = |p: &[Vec<BigInt>]| p.iter().flatten().map(|c| c.bits()).max().unwrap_or(0);
    let terms = (a.len().min(b.len()) * phi) as u64;
    let bits = max_bits(a) + max_bits(b) + u64::from(64 - terms.leading_zeros()) + 2;
    let limbs = bits.div_ceil(32) as usize;
    let pack = |p: &[Vec<BigInt>]| -> BigInt {
        let mut pos = vec![0u32; p.len() * width * limbs];
        let mut neg = pos.clone();
        for (i, row) in p.iter().enumerate() {
            for (t, c) in row.iter().enumerate() {
                let dest = if c.is_negative() { &mut neg } else { &mut pos };
                let mag = c.magnitude().to_u32_digits();
                let at = (i * width + t) * limbs;
                dest[at..at + mag.len()].copy_from_slice(&mag);
            }
        }
        BigInt::from(BigUint::new(pos)) - BigInt::from(BigUint::new(neg))
    };
    let product = pack(a) * pack(b);
    let negative = product.is_negative();
    let digits = product.magnitude().to_u32_digits();
    let slot_bits = 32 * limbs as u64;
    let full = BigInt::one() << slot_bits;
    let half = BigUint::one() << (slot_bits - 1);
    let mut carry = false;
    let mut raw = vec![vec![BigInt::zero(); width]; a.len() + b.len() - 1];
    for (s, slot) in raw.iter_mut().flatten().enumerate() {
        let lo = (s * limbs).min(digits.len());
        let hi = ((s + 1) * limbs).min(digits.len());
        let mut v = BigUint::from_slice(&digits[lo..hi]);
        if carry {
            v += 1u32;
        }
        carry = v >= half;
        let value = if carry { BigInt::from(v) - &full } else { BigInt::from(v) };
        *slot = if negative { -value } else { value };
    }
    raw
}

fn reduce_rows(raw: &mut IntPoly, target: &CycloField) {
    let phi = target.phi;
    for row in raw {
        for deg in (phi..row.len()).rev() {
            let c = std::mem::take(&mut row[deg]);
            if c.is_zero() {
                continue;
            }
            for (j, m) in target.modulus[..phi].iter().enumerate() {
                if !m.is_zero() {
                    row[deg - phi + j] -= &c * m;
                }
            }
        }
        row.truncate(phi);
    }
}

fn add_rows(acc: &mut IntPoly, other: IntPoly) {
    if acc.len() < other.len() {
        let phi = other[0].len();
        acc.resize(other.len(), vec![BigInt::zero(); phi]);
    }
    for (row, o) in acc.iter_mut().zip(other) {
        for (a, b) in row.iter_mut().zip(o) {
            *a += b;
        }
    }
}

/// `Q^m` and `d`, shared across one composition `P(Q / d)`.
struct Substitution<'a> {
    q: &'a [Vec<BigInt>],
    d: &'a BigInt,
    target: &'a CycloField,
    q_pows: HashMap<usize, IntPoly>,
}

impl Substitution<'_> {
    fn q_pow(&mut self, m: usize) -> IntPoly {
        if m == 1 {
            return self.q.to_vec();
        }
        if let Some(p) = self.q_pows.get(&m) {
            return p.clone();
        }
        let half = self.q_pow(m / 2);
        let mut p = int_product(&half, &half, self.target);
        if m % 2 == 1 {
            p = int_product(&p, self.q, self.target);
        }
        self.q_pows.insert(m, p.clone());
        p
    }

    /// `sum_j P_j Q^j d^(n-1-j)` for `n = p.len()`, splitting in halves.
    fn apply(&mut self, p: &[Vec<BigInt>]) -> IntPoly {
        let n = p.len();
        if n <= 4 {
            let mut acc = vec![p[n - 1].clone()];
            let mut scale = BigInt::one();
            for pj in p.iter().rev().skip(1) {
                acc = int_product(&acc, self.q, self.target);
                scale *= self.d;
                for (a, c) in acc[0].iter_mut().zip(pj) {
                    *a += c * &scale;
                }
            }
            return acc;
        }
        let m = n / 2;
        let mut lo = self.apply(&p[..m]);
        if !self.d.is_one() {
            let s = num_traits::pow(self.d.clone(), n - m);
            lo.iter_mut().flatten().for_each(|c| *c *= &s);
        }
        let hi = self.apply(&p[m..]);
        add_rows(&mut lo, int_product(&self.q_pow(m), &hi, self.target));
        lo
    }
}

fn common_conductor<'a>(values: impl Iterator<Item = &'a Cyclotomic>) -> u32 {
    values.fold(1u32, |acc, v| acc.lcm(&v.field.conductor))
}

/// Coefficients of the product of two polynomials over cyclotomic fields.
pub(crate) fn poly_product(a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
    let l = common_conductor(a.iter().chain(b));
    let target = field(l);
    let (a, b) = (Cleared::new(a, l), Cleared::new(b, l));
    Cleared {
        coeffs: int_product(&a.coeffs, &b.coeffs, &target),
        den: a.den * b.den,
    }
    .finish(&target)
}

/// Coefficients of `p(q)` for polynomials over cyclotomic fields.
///
/// With `p = P / D` of degree `n` and `q = Q / d` this evaluates
/// `sum_j P_j Q^j d^(n-j)` by splitting `P` in halves, then divides by `D d^n`.
pub(crate) fn poly_compose(p: &[Cyclotomic], q: &[Cyclotomic]) -> Vec<Cyclotomic> {
    let l = common_conductor(p.iter().chain(q));
    let target = field(l);
    let (p, q) = (Cleared::new(p, l), Cleared::new(q, l));
    let n = p.coeffs.len();
    let coeffs = Substitution {
        q: &q.coeffs,
        d: &q.den,
        target: &target,
        q_pows: HashMap::new(),
    }
    .apply(&p.coeffs);
    Cleared {
        coeffs,
        den: p.den * num_traits::pow(q.den, n - 1),
    }
    .finish(&target)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.field.conductor == other.field.conductor {
            return self.coords == other.coords;
        }
        let (a, b) = Self::aligned(self, other);
        a.coords == b.coords
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic[{}]({})", self.field.conductor, self)
    }
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Cyclotomic {
    /// Canonical syntax: a rational, or a signed sum of `c*zeta(N)^k` terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return f.write_str(&fmt_rational(&q));
        }
        let n = self.field.conductor;
        let mut out = String::new();
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let magnitude = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let power = match k {
                0 => String::new(),
                1 => format!("zeta({n})"),
                _ => format!("zeta({n})^{k}"),
            };
            if k == 0 {
                out.push_str(&fmt_rational(&magnitude));
            } else if magnitude.is_one() {
                out.push_str(&power);
            } else {
                out.push_str(&format!("{}*{}", fmt_rational(&magnitude), power));
            }
        }
        f.write_str(&out)
    }
}
