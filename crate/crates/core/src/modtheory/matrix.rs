//! Dense square matrices over [`Scalar`] with just enough linear algebra for
//! module construction, classification and the span-closure simplicity test.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::poly::Poly;
use crate::scalar::{Backend, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    /// Row-major.
    data: Vec<Scalar>,
}

/// How small a pivot may be before it counts as zero.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Zero {
    Exact,
    /// Relative to the largest entry of the matrix being reduced.
    Relative(f64),
}

impl Zero {
    pub(crate) fn for_backend(backend: Backend, tol: f64) -> Self {
        match backend {
            Backend::Exact => Zero::Exact,
            Backend::Approx => Zero::Relative(100.0 * tol),
        }
    }

    fn negligible(self, s: &Scalar, scale: f64) -> bool {
        match self {
            Zero::Exact => s.is_zero(),
            Zero::Relative(eps) => s.norm() <= eps * scale.max(1.0),
        }
    }
}

impl Matrix {
    pub fn zeros(n: usize, template: &Scalar) -> Self {
        Matrix {
            n,
            data: vec![template.zero_like(); n * n],
        }
    }

    pub fn identity(n: usize, template: &Scalar) -> Self {
        Self::scalar(n, &template.one_like())
    }

    pub fn scalar(n: usize, s: &Scalar) -> Self {
        let mut m = Self::zeros(n, s);
        for i in 0..n {
            m.set(i, i, s.clone());
        }
        m
    }

    pub fn diagonal(values: &[Scalar]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, &values[0]);
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    /// `None` unless the rows form a nonempty square array.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Option<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Scalar>]) -> Self {
        let n = cols.len();
        let mut m = Self::zeros(n, &cols[0][0]);
        for (c, col) in cols.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.n + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.data.chunks(self.n).map(<[Scalar]>::to_vec).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn backend(&self) -> Backend {
        self.data[0].backend()
    }

    pub fn tol(&self) -> Option<f64> {
        self.data.iter().filter_map(Scalar::tol).reduce(f64::max)
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.n).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.n)
            .map(|r| {
                (0..self.n).fold(v[0].zero_like(), |acc, c| &acc + &(self.get(r, c) * &v[c]))
            })
            .collect()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.n, &self.data[0]);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `p(self)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly) -> Self {
        let template = &self.data[0];
        let mut acc = Self::zeros(self.n, template);
        for c in p.coeffs().iter().rev() {
            acc = &(&acc * self) + &Self::scalar(self.n, c);
        }
        acc
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(Scalar::norm).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub(crate) fn is_negligible(&self, zero: Zero, scale: f64) -> bool {
        self.data.iter().all(|s| zero.negligible(s, scale))
    }

    /// `Some(s)` when `self = s I` (diagonal entries compared to the first one).
    pub(crate) fn as_scalar(&self, zero: Zero) -> Option<Scalar> {
        let scale = self.max_norm();
        let s = self.get(0, 0).clone();
        for r in 0..self.n {
            for c in 0..self.n {
                let expected = if r == c { s.clone() } else { s.zero_like() };
                if !zero.negligible(&(self.get(r, c) - &expected), scale) {
                    return None;
                }
            }
        }
        Some(s)
    }

    pub(crate) fn is_diagonal(&self, zero: Zero) -> bool {
        let scale = self.max_norm();
        (0..self.n).all(|r| (0..self.n).all(|c| r == c || zero.negligible(self.get(r, c), scale)))
    }

    /// Row reduction with full pivoting. Returns the rank and the reduced
    /// rows together with the pivot columns.
    fn reduce(&self, zero: Zero) -> (Vec<Vec<Scalar>>, Vec<usize>) {
        let n = self.n;
        let scale = self.max_norm();
        let mut rows = self.rows();
        let mut pivots = Vec::new();
        let mut row = 0;
        let mut free_cols: Vec<usize> = (0..n).collect();
        while row < n && !free_cols.is_empty() {
            // largest remaining entry
            let mut best: Option<(usize, usize, f64)> = None;
            for r in row..n {
                for &c in &free_cols {
                    let v = rows[r][c].norm();
                    let nonzero = !zero.negligible(&rows[r][c], scale);
                    if nonzero && best.is_none_or(|(_, _, b)| v > b) {
                        best = Some((r, c, v));
                        if matches!(zero, Zero::Exact) {
                            break;
                        }
                    }
                }
                if matches!(zero, Zero::Exact) && best.is_some() {
                    break;
                }
            }
            let Some((pr, pc, _)) = best else { break };
            rows.swap(row, pr);
            let inv = rows[row][pc].inv().expect("pivot is nonzero");
            rows[row] = rows[row].iter().map(|x| x * &inv).collect();
            for r in 0..n {
                if r != row && !rows[r][pc].is_zero() {
                    let factor = rows[r][pc].clone();
                    let pivot_row = rows[row].clone();
                    for (x, p) in rows[r].iter_mut().zip(&pivot_row) {
                        *x = &*x - &(&factor * p);
                    }
                }
            }
            free_cols.retain(|&c| c != pc);
            pivots.push(pc);
            row += 1;
        }
        (rows, pivots)
    }

    pub(crate) fn rank(&self, zero: Zero) -> usize {
        self.reduce(zero).1.len()
    }

    /// A nonzero kernel vector, if the matrix is singular.
    pub(crate) fn null_vector(&self, zero: Zero) -> Option<Vec<Scalar>> {
        let (rows, pivots) = self.reduce(zero);
        let n = self.n;
        let free = (0..n).find(|c| !pivots.contains(c))?;
        let template = &self.data[0];
        let mut v = vec![template.zero_like(); n];
        v[free] = template.one_like();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -&rows[i][free];
        }
        Some(v)
    }

    pub(crate) fn inverse(&self, zero: Zero) -> Option<Self> {
        let n = self.n;
        let template = &self.data[0];
        // Gauss-Jordan on [A | I] with partial pivoting
        let scale = self.max_norm();
        let mut a = self.rows();
        let mut b = Self::identity(n, template).rows();
        for col in 0..n {
            let pr = (col..n)
                .filter(|&r| !zero.negligible(&a[r][col], scale))
                .max_by(|&x, &y| a[x][col].norm().partial_cmp(&a[y][col].norm()).unwrap())?;
            a.swap(col, pr);
            b.swap(col, pr);
            let inv = a[col][col].inv().ok()?;
            a[col] = a[col].iter().map(|x| x * &inv).collect();
            b[col] = b[col].iter().map(|x| x * &inv).collect();
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    let (pa, pb) = (a[col].clone(), b[col].clone());
                    for (x, p) in a[r].iter_mut().zip(&pa) {
                        *x = &*x - &(&factor * p);
                    }
                    for (x, p) in b[r].iter_mut().zip(&pb) {
                        *x = &*x - &(&factor * p);
                    }
                }
            }
        }
        Matrix::from_rows(b)
    }

    /// Characteristic polynomial `det(t I - A)` by the Faddeev-LeVerrier recursion.
    pub fn charpoly(&self) -> Poly {
        let n = self.n;
        let template = &self.data[0];
        let id = Self::identity(n, template);
        let mut coeffs = vec![template.zero_like(); n + 1];
        coeffs[n] = template.one_like();
        let mut m = Self::zeros(n, template);
        for k in 1..=n {
            m = &(self * &m) + &id.scale(&coeffs[n - k + 1]);
            let am = self * &m;
            let trace = (0..n).fold(template.zero_like(), |acc, i| &acc + am.get(i, i));
            let ck = (&-&trace)
                .try_div(&template.int_like(k as i64))
                .expect("k is nonzero");
            coeffs[n - k] = ck;
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.data.iter().map(Scalar::to_complex).collect()
    }
}

macro_rules! entrywise {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr<&'a Matrix> for &'a Matrix {
            type Output = Matrix;
            fn $m(self, rhs: &Matrix) -> Matrix {
                assert_eq!(self.n, rhs.n, "matrix sizes differ");
                Matrix {
                    n: self.n,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.$m(b)).collect(),
                }
            }
        }
    };
}
entrywise!(Add, add);
entrywise!(Sub, sub);

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "matrix sizes differ");
        let n = self.n;
        let mut out = Matrix::zeros(n, &self.data[0]);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        let cur = out.get(r, c);
                        let next = cur + &(a * b);
                        out.set(r, c, next);
                    }
                }
            }
        }
        out
    }
}
