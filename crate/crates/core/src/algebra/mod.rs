//! Elements of H(f) in the normal form `sum x^i g_ik(h) y^k`.

mod free_module;
mod rewrite;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::poly::{wrap, Poly};
use crate::scalar::{Field, Scalar, ScalarError};

pub use free_module::{free_module_action, FreePolyElement};
pub use rewrite::RewriteStats;

use rewrite::{add_term, Rewriter, Terms};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("elements belong to different presentations")]
    PresentationMismatch,
    #[error("the zero element has no degree or leading term")]
    ZeroElement,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// The defining polynomial together with the coefficient field.
#[derive(Debug, Clone)]
pub struct Presentation {
    f: Poly,
    field: Field,
}

impl Presentation {
    /// Exact coefficients are promoted when `field` is approximate; approximate
    /// coefficients cannot be used with an exact field.
    pub fn new(f: Poly, field: Field) -> Result<Arc<Self>, AlgebraError> {
        let f = if field.is_exact() {
            if f.coeffs().iter().any(|c| c.tol().is_some()) {
                return Err(ScalarError::BackendMismatch.into());
            }
            f
        } else {
            f.promote(field.tol)
        };
        Ok(Arc::new(Presentation { f, field }))
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The polynomial `h` in this field.
    pub fn h(&self) -> Poly {
        Poly::identity(&self.field)
    }

    pub fn one_poly(&self) -> Poly {
        Poly::constant(self.field.one())
    }

    fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || (a.field.backend == b.field.backend && a.f == b.f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    X,
    H,
    Y,
    Z,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::X, Generator::H, Generator::Y, Generator::Z];

    pub fn symbol(self) -> char {
        match self {
            Generator::X => 'x',
            Generator::H => 'h',
            Generator::Y => 'y',
            Generator::Z => 'z',
        }
    }
}

/// Lexicographic degree `(i, k)` of the term `x^i g(h) y^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree(pub u32, pub u32);

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        Degree(self.0 + rhs.0, self.1 + rhs.1)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

#[derive(Clone, Debug)]
pub struct GhaElement {
    pres: Arc<Presentation>,
    terms: Terms,
}

impl GhaElement {
    pub fn zero(pres: &Arc<Presentation>) -> Self {
        GhaElement {
            pres: pres.clone(),
            terms: Terms::new(),
        }
    }

    pub fn one(pres: &Arc<Presentation>) -> Self {
        Self::scalar(pres, pres.field.one())
    }

    pub fn scalar(pres: &Arc<Presentation>, s: Scalar) -> Self {
        Self::from_poly(pres, Poly::constant(pres.field.coerce(&s)))
    }

    /// `g(h)`.
    pub fn from_poly(pres: &Arc<Presentation>, g: Poly) -> Self {
        Self::monomial(pres, 0, g, 0)
    }

    /// `x^i g(h) y^k`.
    pub fn monomial(pres: &Arc<Presentation>, i: u32, g: Poly, k: u32) -> Self {
        let mut terms = Terms::new();
        add_term(&mut terms, (i, k), g);
        GhaElement {
            pres: pres.clone(),
            terms,
        }
    }

    /// Builds from `(i, k) -> g_ik`; zero polynomials are dropped.
    pub fn from_terms(
        pres: &Arc<Presentation>,
        terms: impl IntoIterator<Item = ((u32, u32), Poly)>,
    ) -> Self {
        let mut acc = Terms::new();
        for (key, g) in terms {
            add_term(&mut acc, key, g);
        }
        GhaElement {
            pres: pres.clone(),
            terms: acc,
        }
    }

    pub fn generator(pres: &Arc<Presentation>, which: Generator) -> Self {
        let one = pres.one_poly();
        match which {
            Generator::X => Self::monomial(pres, 1, one, 0),
            Generator::H => Self::from_poly(pres, pres.h()),
            Generator::Y => Self::monomial(pres, 0, one, 1),
            // z = xy - h
            Generator::Z => Self::from_terms(pres, [((1, 1), one), ((0, 0), -&pres.h())]),
        }
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Poly> {
        &self.terms
    }

    pub fn coefficient(&self, i: u32, k: u32) -> Option<&Poly> {
        self.terms.get(&(i, k))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if Presentation::same(&self.pres, &other.pres) {
            Ok(())
        } else {
            Err(AlgebraError::PresentationMismatch)
        }
    }

    fn with_terms(&self, terms: Terms) -> Self {
        GhaElement {
            pres: self.pres.clone(),
            terms,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (key, g) in &other.terms {
            add_term(&mut terms, *key, g.clone());
        }
        Ok(self.with_terms(terms))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&-other)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let s = self.pres.field.coerce(s);
        let mut terms = Terms::new();
        for (key, g) in &self.terms {
            add_term(&mut terms, *key, g.scale(&s));
        }
        self.with_terms(terms)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.multiply_with_stats(other).map(|(p, _)| p)
    }

    /// Product together with counters from the rewriting kernel.
    pub fn multiply_with_stats(&self, other: &Self) -> Result<(Self, RewriteStats), AlgebraError> {
        self.check(other)?;
        let mut rw = Rewriter::new(&self.pres);
        let terms = rw.multiply(&self.terms, &other.terms);
        Ok((self.with_terms(terms), rw.stats))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GhaElement::one(&self.pres);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn degree(&self) -> Result<Degree, AlgebraError> {
        self.terms
            .keys()
            .next_back()
            .map(|&(i, k)| Degree(i, k))
            .ok_or(AlgebraError::ZeroElement)
    }

    /// `(n, m, g)` for the leading term `x^n g(h) y^m`.
    pub fn leading_term(&self) -> Result<(u32, u32, &Poly), AlgebraError> {
        self.terms
            .iter()
            .next_back()
            .map(|(&(i, k), g)| (i, k, g))
            .ok_or(AlgebraError::ZeroElement)
    }

    /// The first generator among x, h, y that fails to commute, with the
    /// nonzero commutator `[self, g]`.
    pub fn central_failure(&self) -> Option<(Generator, GhaElement)> {
        [Generator::X, Generator::H, Generator::Y]
            .into_iter()
            .find_map(|g| {
                let c = self
                    .commutator(&GhaElement::generator(&self.pres, g))
                    .expect("same presentation");
                (!c.is_zero()).then_some((g, c))
            })
    }

    pub fn is_central(&self) -> bool {
        self.central_failure().is_none()
    }
}

impl PartialEq for GhaElement {
    fn eq(&self, other: &Self) -> bool {
        Presentation::same(&self.pres, &other.pres) && self.terms == other.terms
    }
}

impl Neg for &GhaElement {
    type Output = GhaElement;
    fn neg(self) -> GhaElement {
        self.with_terms(self.terms.iter().map(|(k, g)| (*k, -g)).collect())
    }
}

impl Neg for GhaElement {
    type Output = GhaElement;
    fn neg(self) -> GhaElement {
        -&self
    }
}

macro_rules! element_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        /// Panics when the operands come from different presentations.
        impl<'a> $tr<&'a GhaElement> for &'a GhaElement {
            type Output = GhaElement;
            fn $m(self, rhs: &GhaElement) -> GhaElement {
                self.$try(rhs).expect("presentation mismatch")
            }
        }
        impl $tr for GhaElement {
            type Output = GhaElement;
            fn $m(self, rhs: GhaElement) -> GhaElement {
                (&self).$m(&rhs)
            }
        }
    };
}
element_binop!(Add, add, try_add);
element_binop!(Sub, sub, try_sub);
element_binop!(Mul, mul, try_mul);

fn power(symbol: char, e: u32) -> Option<String> {
    match e {
        0 => None,
        1 => Some(symbol.to_string()),
        _ => Some(format!("{symbol}^{e}")),
    }
}

fn poly_factor(g: &Poly) -> String {
    let nonzero = g.coeffs().iter().filter(|c| !c.is_zero()).count();
    let s = g.to_string();
    if nonzero > 1 {
        format!("({s})")
    } else {
        wrap(s)
    }
}

impl serde::Serialize for GhaElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for GhaElement {
    /// Terms by `(i, k)` descending, e.g. `x^2*(h^2 + 1)*y + (-1)*h`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(i, k), g)| {
                let xs = power('x', i);
                let ys = power('y', k);
                let trivial = g.is_constant()
                    && g.coeffs()[0].is_one()
                    && g.coeffs()[0].tol().is_none()
                    && (xs.is_some() || ys.is_some());
                let mid = match (xs.is_some() || ys.is_some(), trivial) {
                    (_, true) => None,
                    (true, false) => Some(poly_factor(g)),
                    (false, false) => Some(g.to_string()),
                };
                [xs, mid, ys].into_iter().flatten().collect::<Vec<_>>().join("*")
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
