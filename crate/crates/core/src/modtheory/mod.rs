//! Finite-dimensional simple modules as explicit matrices.
//!
//! A module of dimension `n` is given by matrices `X`, `H`, `Y` acting on the
//! basis `t^0, ..., t^{n-1}`. Entry `(r, c)` is the coefficient of `t^r` in
//! the image of `t^c`.

mod enumerate;
mod json;
mod matrix;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::poly::{Orbit, Poly, PolyError};
use crate::scalar::{Backend, Field, Scalar, ScalarError};

pub use enumerate::{enumerate_simples, SampleConfig, SimpleEnumeration, SimpleFamily};
pub use json::JsonError;
pub use matrix::Matrix;

pub(crate) use matrix::Zero;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModError {
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("borderline: {0}; rejected because it holds only up to numerical tolerance")]
    Borderline(String),
    #[error("not a simple module of this family: {0}")]
    NotInFamily(String),
    #[error("matrices must be square of equal size {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("f = h: H(f) is commutative and its simple modules are the one-dimensional characters")]
    Commutative,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModuleDescriptor {
    /// `A'(lambda, zdot, a)`: `x` cyclic with `x^n = a`.
    Aprime { orbit: Orbit, zdot: Scalar, a: Scalar },
    /// `B'(lambda, zdot, a)`: `y` cyclic with `y^n = 1/a` and `x^n = 0`.
    Bprime { orbit: Orbit, zdot: Scalar, a: Scalar },
    /// `C(zdot, n)`: `x` nilpotent.
    Cmod { zdot: Scalar, n: usize },
}

impl ModuleDescriptor {
    pub fn dim(&self) -> usize {
        match self {
            ModuleDescriptor::Aprime { orbit, .. } | ModuleDescriptor::Bprime { orbit, .. } => {
                orbit.period()
            }
            ModuleDescriptor::Cmod { n, .. } => *n,
        }
    }

    pub fn zdot(&self) -> &Scalar {
        match self {
            ModuleDescriptor::Aprime { zdot, .. }
            | ModuleDescriptor::Bprime { zdot, .. }
            | ModuleDescriptor::Cmod { zdot, .. } => zdot,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModuleDescriptor::Aprime { .. } => "Aprime",
            ModuleDescriptor::Bprime { .. } => "Bprime",
            ModuleDescriptor::Cmod { .. } => "Cmod",
        }
    }

    pub fn backend(&self) -> Backend {
        self.zdot().backend()
    }

    /// Same data with every scalar promoted to the approximate backend.
    pub fn promote(&self, tol: f64) -> Self {
        let orbit = |o: &Orbit| Orbit::new(o.values().iter().map(|v| v.promote(tol)).collect());
        match self {
            ModuleDescriptor::Aprime { orbit: o, zdot, a } => ModuleDescriptor::Aprime {
                orbit: orbit(o),
                zdot: zdot.promote(tol),
                a: a.promote(tol),
            },
            ModuleDescriptor::Bprime { orbit: o, zdot, a } => ModuleDescriptor::Bprime {
                orbit: orbit(o),
                zdot: zdot.promote(tol),
                a: a.promote(tol),
            },
            ModuleDescriptor::Cmod { zdot, n } => ModuleDescriptor::Cmod {
                zdot: zdot.promote(tol),
                n: *n,
            },
        }
    }
}

#[derive(Serialize)]
struct DescriptorJson<'a> {
    schema_version: u32,
    #[serde(rename = "type")]
    kind: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    orbit: Option<&'a Orbit>,
    zdot: &'a Scalar,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<&'a Scalar>,
    n: usize,
}

impl Serialize for ModuleDescriptor {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let (orbit, a) = match self {
            ModuleDescriptor::Aprime { orbit, a, .. } | ModuleDescriptor::Bprime { orbit, a, .. } => {
                (Some(orbit), Some(a))
            }
            ModuleDescriptor::Cmod { .. } => (None, None),
        };
        DescriptorJson {
            schema_version: SCHEMA_VERSION,
            kind: self.kind(),
            orbit,
            zdot: self.zdot(),
            a,
            n: self.dim(),
        }
        .serialize(serializer)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixModule {
    pub x: Matrix,
    pub h: Matrix,
    pub y: Matrix,
}

#[derive(Serialize)]
struct ModuleJson {
    schema_version: u32,
    n: usize,
    #[serde(rename = "X")]
    x: Vec<Vec<Scalar>>,
    #[serde(rename = "H")]
    h: Vec<Vec<Scalar>>,
    #[serde(rename = "Y")]
    y: Vec<Vec<Scalar>>,
}

impl Serialize for MatrixModule {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ModuleJson {
            schema_version: SCHEMA_VERSION,
            n: self.dim(),
            x: self.x.rows(),
            h: self.h.rows(),
            y: self.y.rows(),
        }
        .serialize(serializer)
    }
}

impl MatrixModule {
    pub fn new(x: Matrix, h: Matrix, y: Matrix) -> Result<Self, ModError> {
        let n = x.dim();
        for m in [&h, &y] {
            if m.dim() != n {
                return Err(ModError::Dimension {
                    expected: n,
                    found: m.dim(),
                });
            }
        }
        let backend = x.backend();
        if [&h, &y]
            .iter()
            .chain(std::iter::once(&&x))
            .any(|m| m.entries().iter().any(|s| s.backend() != backend))
        {
            return Err(ScalarError::BackendMismatch.into());
        }
        Ok(MatrixModule { x, h, y })
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn backend(&self) -> Backend {
        self.x.backend()
    }

    fn template(&self) -> &Scalar {
        self.x.get(0, 0)
    }
}

/// Outcome of a comparison with zero that respects numerical tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ZeroTest {
    Zero,
    Borderline,
    NonZero,
}

/// Exact values are compared exactly. Approximate values are zero within
/// `10 tol` of the scale and borderline up to `sqrt(tol)`, which is about the
/// accuracy of a root of multiplicity two or three.
pub(crate) fn zero_test(v: &Scalar, scale: f64, tol: f64) -> ZeroTest {
    match v {
        Scalar::Exact(_) => {
            if v.is_zero() {
                ZeroTest::Zero
            } else {
                ZeroTest::NonZero
            }
        }
        Scalar::Approx(_) => {
            let s = scale.max(1.0);
            let r = v.norm();
            if r <= 10.0 * tol * s {
                ZeroTest::Zero
            } else if r <= tol.sqrt() * s {
                ZeroTest::Borderline
            } else {
                ZeroTest::NonZero
            }
        }
    }
}

fn field_of(s: &Scalar, field: &Field) -> Field {
    match s.backend() {
        Backend::Exact => *field,
        Backend::Approx => Field::approx(s.tol().unwrap_or(field.tol)),
    }
}

fn map_for(f: &Poly, template: &Scalar, tol: f64) -> Poly {
    match template.backend() {
        Backend::Exact => f.clone(),
        Backend::Approx => f.promote(template.tol().unwrap_or(tol)),
    }
}

/// Checks the conditions on `zdot` for `C(zdot, n)`: `zdot + f^{(n)}(-zdot) = 0`
/// and, when `simple`, `zdot + f^{(i)}(-zdot) != 0` for `0 < i < n`.
pub(crate) fn check_c_conditions(
    f: &Poly,
    zdot: &Scalar,
    n: usize,
    tol: f64,
    simple: bool,
) -> Result<(), ModError> {
    let start = -zdot;
    let mut point = start.clone();
    for i in 1..=n {
        point = f.evaluate(&point);
        let value = zdot + &point;
        let scale = zdot.norm() + point.norm();
        let test = zero_test(&value, scale, tol);
        if i == n {
            match test {
                ZeroTest::Zero => {}
                ZeroTest::Borderline => {
                    return Err(ModError::Borderline(format!(
                        "zdot + f^({n})(-zdot) = {value} is only approximately zero"
                    )))
                }
                ZeroTest::NonZero => {
                    return Err(ModError::Invariant(format!(
                        "zdot + f^({n})(-zdot) = {value}, must be 0"
                    )))
                }
            }
        } else if simple {
            match test {
                ZeroTest::Zero => {
                    return Err(ModError::Invariant(format!(
                        "zdot + f^({i})(-zdot) = 0 for 0 < {i} < {n}; the module is not simple"
                    )))
                }
                ZeroTest::Borderline => {
                    return Err(ModError::Borderline(format!(
                        "zdot + f^({i})(-zdot) = {value} is nearly zero"
                    )))
                }
                ZeroTest::NonZero => {}
            }
        }
    }
    Ok(())
}

fn check_descriptor(d: &ModuleDescriptor, f: &Poly, tol: f64) -> Result<(), ModError> {
    match d {
        ModuleDescriptor::Aprime { orbit, a, zdot } | ModuleDescriptor::Bprime { orbit, a, zdot } => {
            let backend = zdot.backend();
            if a.backend() != backend || orbit.values().iter().any(|v| v.backend() != backend) {
                return Err(ScalarError::BackendMismatch.into());
            }
            let map = map_for(f, zdot, tol);
            orbit.validate(&map).map_err(ModError::Invariant)?;
            match zero_test(a, 1.0, tol) {
                ZeroTest::Zero => return Err(ModError::Invariant("a must be nonzero".into())),
                ZeroTest::Borderline => return Err(ModError::Borderline("a is nearly zero".into())),
                ZeroTest::NonZero => {}
            }
            if let ModuleDescriptor::Bprime { .. } = d {
                let tests: Vec<ZeroTest> = orbit
                    .values()
                    .iter()
                    .map(|l| zero_test(&(l + zdot), l.norm() + zdot.norm(), tol))
                    .collect();
                if !tests.contains(&ZeroTest::Zero) {
                    return Err(if tests.contains(&ZeroTest::Borderline) {
                        ModError::Borderline("lambda(i) + zdot is only approximately zero".into())
                    } else {
                        ModError::Invariant("B' needs lambda(i) + zdot = 0 for some i".into())
                    });
                }
            }
            Ok(())
        }
        ModuleDescriptor::Cmod { zdot, n } => {
            if *n == 0 {
                return Err(ModError::Invariant("dimension must be positive".into()));
            }
            check_c_conditions(&map_for(f, zdot, tol), zdot, *n, tol, true)
        }
    }
}

/// Matrices of the module described by `d` after checking its invariants.
pub fn build(d: &ModuleDescriptor, f: &Poly, field: &Field) -> Result<MatrixModule, ModError> {
    check_descriptor(d, f, field.tol)?;
    Ok(build_unchecked(d, f, field.tol))
}

/// `C(zdot, n)` checking only `zdot + f^{(n)}(-zdot) = 0`, so that the
/// non-simple members of the construction can be built as well.
pub fn build_c_module(zdot: &Scalar, n: usize, f: &Poly, field: &Field) -> Result<MatrixModule, ModError> {
    if n == 0 {
        return Err(ModError::Invariant("dimension must be positive".into()));
    }
    check_c_conditions(&map_for(f, zdot, field.tol), zdot, n, field.tol, false)?;
    Ok(build_unchecked(
        &ModuleDescriptor::Cmod {
            zdot: zdot.clone(),
            n,
        },
        f,
        field.tol,
    ))
}

fn build_unchecked(d: &ModuleDescriptor, f: &Poly, tol: f64) -> MatrixModule {
    let n = d.dim();
    let zdot = d.zdot();
    let mut x = Matrix::zeros(n, zdot);
    let mut y = Matrix::zeros(n, zdot);
    let h;
    match d {
        ModuleDescriptor::Aprime { orbit, a, .. } => {
            h = Matrix::diagonal(orbit.values());
            let a_inv = a.inv().expect("checked nonzero");
            for i in 0..n {
                // x t^i = t^{i+1}, t^n = a t^0
                let xi = if i + 1 == n { a.clone() } else { a.one_like() };
                x.set((i + 1) % n, i, xi);
                // y t^i = (lambda(i) + zdot) t^{i-1}, t^{-1} = a^{-1} t^{n-1}
                let w = orbit.at(i as i64) + zdot;
                let yi = if i == 0 { &w * &a_inv } else { w };
                y.set((i + n - 1) % n, i, yi);
            }
        }
        ModuleDescriptor::Bprime { orbit, a, .. } => {
            h = Matrix::diagonal(orbit.values());
            let a_inv = a.inv().expect("checked nonzero");
            for i in 0..n {
                // x t^i = (lambda(i+1) + zdot) t^{i+1}
                let w = orbit.at(i as i64 + 1) + zdot;
                let xi = if i + 1 == n { &w * a } else { w };
                x.set((i + 1) % n, i, xi);
                let yi = if i == 0 { a_inv.clone() } else { a.one_like() };
                y.set((i + n - 1) % n, i, yi);
            }
        }
        ModuleDescriptor::Cmod { .. } => {
            let map = map_for(f, zdot, tol);
            let mut weights = Vec::with_capacity(n);
            let mut point = -zdot;
            for _ in 0..n {
                weights.push(point.clone());
                point = map.evaluate(&point);
            }
            for i in 0..n {
                if i + 1 < n {
                    x.set(i + 1, i, zdot.one_like());
                }
                if i > 0 {
                    y.set(i - 1, i, zdot + &weights[i]);
                }
            }
            h = Matrix::diagonal(&weights);
        }
    }
    MatrixModule { x, h, y }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub schema_version: u32,
    pub ok: bool,
    pub backend: Backend,
    /// Largest entry of `HX - X f(H)`.
    pub hx: f64,
    /// Largest entry of `YH - f(H) Y`.
    pub yh: f64,
    /// Largest entry of `YX - XY - (f(H) - H)`.
    pub commutator: f64,
    /// Whether `XY - H` is a scalar matrix.
    pub z_scalar: bool,
}

/// Checks the three defining relations on the matrices.
pub fn verify_relations(m: &MatrixModule, f: &Poly, field: &Field) -> RelationReport {
    let tol = m.x.tol().unwrap_or(field.tol);
    let map = map_for(f, m.template(), tol);
    let fh = m.h.eval_poly(&map);
    let r1 = &(&m.h * &m.x) - &(&m.x * &fh);
    let r2 = &(&m.y * &m.h) - &(&fh * &m.y);
    let r3 = &(&(&m.y * &m.x) - &(&m.x * &m.y)) - &(&fh - &m.h);
    let scale = [&m.x, &m.h, &m.y, &fh]
        .iter()
        .map(|a| a.max_norm())
        .fold(1.0, f64::max);
    let ok = match m.backend() {
        Backend::Exact => r1.is_zero() && r2.is_zero() && r3.is_zero(),
        Backend::Approx => [&r1, &r2, &r3].iter().all(|r| r.max_norm() <= tol * scale),
    };
    let zero = Zero::for_backend(m.backend(), tol);
    let z = &(&m.x * &m.y) - &m.h;
    RelationReport {
        schema_version: SCHEMA_VERSION,
        ok,
        backend: m.backend(),
        hx: r1.max_norm(),
        yh: r2.max_norm(),
        commutator: r3.max_norm(),
        z_scalar: z.as_scalar(zero).is_some(),
    }
}

/// Dimension of the algebra generated by `X`, `H`, `Y`, by closing the span
/// of `{I, X, H, Y}` under left multiplication by the generators.
pub fn burnside_dimension(m: &MatrixModule, field: &Field) -> usize {
    let n = m.dim();
    let target = n * n;
    match m.backend() {
        Backend::Exact => {
            let mut basis = ExactSpan::default();
            close_span(m, target, |mat| basis.insert(mat.entries()))
        }
        Backend::Approx => {
            let tol = m.x.tol().unwrap_or(field.tol);
            let mut basis = ComplexSpan::new(100.0 * tol);
            close_span(m, target, |mat| basis.insert(mat.to_complex()))
        }
    }
}

fn close_span(m: &MatrixModule, target: usize, mut insert: impl FnMut(&Matrix) -> bool) -> usize {
    let id = Matrix::identity(m.dim(), m.template());
    let mut queue = vec![id, m.x.clone(), m.h.clone(), m.y.clone()];
    let mut dim = 0;
    while let Some(a) = queue.pop() {
        if dim == target {
            break;
        }
        if insert(&a) {
            dim += 1;
            for g in [&m.x, &m.h, &m.y] {
                queue.push(g * &a);
            }
        }
    }
    dim
}

/// Echelon basis with the invariant that each vector vanishes at the pivots
/// of all earlier vectors.
#[derive(Default)]
struct ExactSpan {
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl ExactSpan {
    fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x = &*x - &(&c * r);
                }
            }
        }
        let Some(p) = v.iter().position(|s| !s.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero pivot");
        let v: Vec<Scalar> = v.iter().map(|s| s * &inv).collect();
        self.rows.push((p, v));
        true
    }
}

/// Orthonormal basis by modified Gram-Schmidt; a vector is new when its
/// residual exceeds `rel` times its original norm.
struct ComplexSpan {
    rel: f64,
    rows: Vec<Vec<Complex64>>,
}

impl ComplexSpan {
    fn new(rel: f64) -> Self {
        ComplexSpan { rel, rows: Vec::new() }
    }

    fn insert(&mut self, mut v: Vec<Complex64>) -> bool {
        let norm0 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm0 == 0.0 {
            return false;
        }
        for _ in 0..2 {
            for q in &self.rows {
                let dot: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(q) {
                    *x -= dot * a;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= self.rel * norm0 {
            return false;
        }
        self.rows.push(v.into_iter().map(|z| z / norm).collect());
        true
    }
}

/// Simple exactly when the generated algebra is all of `M_n`.
pub fn is_simple(m: &MatrixModule, field: &Field) -> bool {
    burnside_dimension(m, field) == m.dim() * m.dim()
}

/// Which of the three mutually exclusive conditions holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `X^n != 0`.
    XCyclic,
    /// `X^n = 0` and `Y` invertible.
    YInvertible,
    /// `X^n = 0` and `Y` singular.
    Nilpotent,
}

pub fn trichotomy(m: &MatrixModule, field: &Field) -> Branch {
    let n = m.dim();
    let tol = m.x.tol().unwrap_or(field.tol);
    let zero = Zero::for_backend(m.backend(), tol);
    let xn = m.x.pow(n as u32);
    let scale = m.x.max_norm().max(1.0).powi(n as i32);
    if !xn.is_negligible(zero, scale) {
        Branch::XCyclic
    } else if m.y.rank(zero) == n {
        Branch::YInvertible
    } else {
        Branch::Nilpotent
    }
}

/// Eigenvector of `h` for some eigenvalue, preferring the diagonal.
fn weight_vector(h: &Matrix, zero: Zero, field: &Field) -> Result<Vec<Scalar>, ModError> {
    let n = h.dim();
    let template = h.get(0, 0);
    if h.is_diagonal(zero) {
        let mut v = vec![template.zero_like(); n];
        v[0] = template.one_like();
        return Ok(v);
    }
    let cp = h.charpoly();
    let fl = field_of(template, field);
    let roots = crate::poly::solve(&cp, &fl)?;
    for mu in roots.roots {
        let mu = if template.backend() == Backend::Approx {
            mu.promote(fl.tol)
        } else if mu.backend() == Backend::Approx {
            return Err(ModError::NotInFamily(
                "eigenvalues of H do not lie in the exact field; use the approximate backend".into(),
            ));
        } else {
            mu
        };
        let shifted = h - &Matrix::scalar(n, &mu);
        if let Some(v) = shifted.null_vector(zero) {
            return Ok(v);
        }
    }
    Err(ModError::NotInFamily("no eigenvector of H found".into()))
}

/// Diagonal of `H` in the basis given by the columns of `p`.
fn weights_in_basis(h: &Matrix, p: &Matrix, zero: Zero) -> Result<Vec<Scalar>, ModError> {
    let inv = p
        .inverse(zero)
        .ok_or_else(|| ModError::NotInFamily("weight vectors are not a basis".into()))?;
    let d = &(&inv * h) * p;
    if !d.is_diagonal(zero) {
        return Err(ModError::NotInFamily("H is not diagonal in the cyclic basis".into()));
    }
    Ok((0..p.dim()).map(|i| d.get(i, i).clone()).collect())
}

/// Recovers the descriptor of a simple module.
pub fn classify(m: &MatrixModule, f: &Poly, field: &Field) -> Result<ModuleDescriptor, ModError> {
    let n = m.dim();
    let tol = m.x.tol().unwrap_or(field.tol);
    let zero = Zero::for_backend(m.backend(), tol);
    let z = &(&m.x * &m.y) - &m.h;
    let zdot = z
        .as_scalar(zero)
        .ok_or_else(|| ModError::NotInFamily("XY - H is not a scalar matrix".into()))?;
    let descriptor = match trichotomy(m, field) {
        Branch::XCyclic => {
            let a = m
                .x
                .pow(n as u32)
                .as_scalar(zero)
                .ok_or_else(|| ModError::NotInFamily("X^n is not a scalar matrix".into()))?;
            let v = weight_vector(&m.h, zero, field)?;
            // t^i = X^i v
            let mut cols = vec![v];
            for i in 1..n {
                let next = m.x.apply(&cols[i - 1]);
                cols.push(next);
            }
            let weights = weights_in_basis(&m.h, &Matrix::from_columns(&cols), zero)?;
            ModuleDescriptor::Aprime {
                orbit: Orbit::new(weights),
                zdot,
                a,
            }
        }
        Branch::YInvertible => {
            let a_inv = m
                .y
                .pow(n as u32)
                .as_scalar(zero)
                .ok_or_else(|| ModError::NotInFamily("Y^n is not a scalar matrix".into()))?;
            let a = a_inv.inv()?;
            let v = weight_vector(&m.h, zero, field)?;
            // t^{n-1} = v, t^{i-1} = Y t^i
            let mut cols = vec![v];
            for i in 1..n {
                let next = m.y.apply(&cols[i - 1]);
                cols.push(next);
            }
            cols.reverse();
            let weights = weights_in_basis(&m.h, &Matrix::from_columns(&cols), zero)?;
            ModuleDescriptor::Bprime {
                orbit: Orbit::new(weights),
                zdot,
                a,
            }
        }
        Branch::Nilpotent => ModuleDescriptor::Cmod { zdot, n },
    };
    check_descriptor(&descriptor, f, tol).map_err(|e| ModError::NotInFamily(e.to_string()))?;
    Ok(descriptor)
}

/// Same variant, same `zdot` and `a`, and orbits equal up to an index shift.
pub fn modules_isomorphic(d1: &ModuleDescriptor, d2: &ModuleDescriptor) -> bool {
    use ModuleDescriptor::*;
    match (d1, d2) {
        (Aprime { orbit: o1, zdot: z1, a: a1 }, Aprime { orbit: o2, zdot: z2, a: a2 })
        | (Bprime { orbit: o1, zdot: z1, a: a1 }, Bprime { orbit: o2, zdot: z2, a: a2 }) => {
            z1 == z2 && a1 == a2 && o1.is_rotation_of(o2)
        }
        (Cmod { zdot: z1, n: n1 }, Cmod { zdot: z2, n: n2 }) => n1 == n2 && z1 == z2,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3() -> Field {
        Field::exact(3)
    }

    #[test]
    fn c_module_for_rotation() {
        let field = q3();
        let w = field.zeta(3, 1);
        let f = Poly::monomial(w.clone(), 1);
        let zdot = field.int(2);
        let d = ModuleDescriptor::Cmod { zdot: zdot.clone(), n: 3 };
        let m = build(&d, &f, &field).unwrap();
        for i in 0..3 {
            let wi = w.pow(i as u64);
            assert_eq!(*m.h.get(i, i), -&(&wi * &zdot));
            if i > 0 {
                assert_eq!(*m.y.get(i - 1, i), &(&field.one() - &wi) * &zdot);
            }
        }
        assert!(verify_relations(&m, &f, &field).ok);
        assert!(is_simple(&m, &field));
        assert_eq!(trichotomy(&m, &field), Branch::Nilpotent);
        assert!(modules_isomorphic(&classify(&m, &f, &field).unwrap(), &d));
    }

    #[test]
    fn one_dimensional_a_module() {
        let field = Field::exact(1);
        let f = Poly::zero();
        let (b, zdot, a) = (field.zero(), field.int(6), field.int(3));
        let d = ModuleDescriptor::Aprime {
            orbit: Orbit::new(vec![b]),
            zdot,
            a: a.clone(),
        };
        let m = build(&d, &f, &field).unwrap();
        assert_eq!(*m.x.get(0, 0), a);
        assert_eq!(*m.y.get(0, 0), field.int(2));
        assert!(verify_relations(&m, &f, &field).ok);
        assert!(is_simple(&m, &field));
        assert_eq!(classify(&m, &f, &field).unwrap(), d);
    }

    #[test]
    fn b_module_for_rotation() {
        let field = q3();
        let w = field.zeta(3, 1);
        let f = Poly::monomial(w.clone(), 1);
        let b = field.int(2);
        let orbit = Orbit::new((0..3).map(|i| &b * &w.pow(i)).collect());
        let j = 1;
        let zdot = -&(&b * &w.pow(j));
        let d = ModuleDescriptor::Bprime { orbit, zdot, a: field.int(5) };
        let m = build(&d, &f, &field).unwrap();
        for i in 0..2u64 {
            let expected = &b * &(&w.pow(i + 1) - &w.pow(j));
            assert_eq!(*m.x.get(i as usize + 1, i as usize), expected);
        }
        assert!(verify_relations(&m, &f, &field).ok);
        assert!(is_simple(&m, &field));
        assert_eq!(trichotomy(&m, &field), Branch::YInvertible);
        assert!(modules_isomorphic(&classify(&m, &f, &field).unwrap(), &d));
    }

    #[test]
    fn perturbed_module_fails() {
        let field = q3();
        let f = Poly::monomial(field.one(), 2);
        let orbit = Orbit::new(vec![field.zeta(3, 1), field.zeta(3, 2)]);
        let d = ModuleDescriptor::Aprime { orbit, zdot: field.one(), a: field.int(2) };
        let mut m = build(&d, &f, &field).unwrap();
        // an entry outside the weight pattern of X breaks hx = x f(h)
        let bumped = m.x.get(0, 0) + &field.one();
        m.x.set(0, 0, bumped);
        let r = verify_relations(&m, &f, &field);
        assert!(!r.ok);
        assert!(r.hx > 0.0);
    }

    #[test]
    fn descriptor_invariants() {
        let field = q3();
        let f = Poly::monomial(field.one(), 2);
        let orbit = Orbit::new(vec![field.zeta(3, 1), field.zeta(3, 2)]);
        let bad_b = ModuleDescriptor::Bprime { orbit: orbit.clone(), zdot: field.one(), a: field.one() };
        assert!(matches!(build(&bad_b, &f, &field), Err(ModError::Invariant(_))));
        let zero_a = ModuleDescriptor::Aprime { orbit, zdot: field.one(), a: field.zero() };
        assert!(matches!(build(&zero_a, &f, &field), Err(ModError::Invariant(_))));
        let not_orbit = ModuleDescriptor::Aprime {
            orbit: Orbit::new(vec![field.int(2), field.int(4)]),
            zdot: field.one(),
            a: field.one(),
        };
        assert!(matches!(build(&not_orbit, &f, &field), Err(ModError::Invariant(_))));
    }

    #[test]
    fn non_simple_c_construction() {
        // f = -h: zdot + f(-zdot) = 2 zdot, zdot + f^(2)(-zdot) = 0, so zdot = 0
        // makes the exclusion fail at i = 1 while C(0, 2) is still a module
        let field = Field::exact(1);
        let f = Poly::monomial(field.int(-1), 1);
        let zdot = field.zero();
        assert!(build(&ModuleDescriptor::Cmod { zdot: zdot.clone(), n: 2 }, &f, &field).is_err());
        let m = build_c_module(&zdot, 2, &f, &field).unwrap();
        assert!(verify_relations(&m, &f, &field).ok);
        assert!(!is_simple(&m, &field));
    }

    #[test]
    fn a_is_a_similarity_invariant() {
        let field = q3();
        let f = Poly::monomial(field.one(), 2);
        let orbit = Orbit::new(vec![field.zeta(3, 1), field.zeta(3, 2)]);
        let d1 = ModuleDescriptor::Aprime { orbit: orbit.clone(), zdot: field.one(), a: field.int(2) };
        let d2 = ModuleDescriptor::Aprime { orbit: orbit.rotated(1), zdot: field.one(), a: field.int(2) };
        let d3 = ModuleDescriptor::Aprime { orbit: orbit.clone(), zdot: field.one(), a: field.int(3) };
        assert!(modules_isomorphic(&d1, &d2));
        assert!(!modules_isomorphic(&d1, &d3));
        let b = ModuleDescriptor::Bprime { orbit, zdot: field.one(), a: field.int(2) };
        assert!(!modules_isomorphic(&d1, &b));
        let m1 = build(&d1, &f, &field).unwrap();
        let m3 = build(&d3, &f, &field).unwrap();
        assert_ne!(m1.x.pow(2), m3.x.pow(2));
    }
}
