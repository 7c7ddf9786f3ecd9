//! The faithful action of H(f) on the commutative polynomial space C[X, H, Y].
//!
//! Generators act on monomials by
//!
//! * `x . X^i H^j Y^k = X^(i+1) H^j Y^k`
//! * `h . X^i H^j Y^k = X^i f^(i)(H) H^j Y^k`
//! * `y . H^j Y^k = f(H)^j Y^(k+1)`
//! * `y . X^i H^j Y^k = (x y + f(h) - h) . X^(i-1) H^j Y^k`
//!
//! The last rule is applied in closed form, see `y_monomial`.
//!
//! This is computed without the rewriting code and serves as an independent
//! check on multiplication: `(a b) . 1 = a . (b . 1)`.

use std::collections::BTreeMap;

use super::{GhaElement, Presentation};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// A polynomial in commuting variables X, H, Y as `(i, j, k) -> coefficient`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FreePolyElement {
    coeffs: BTreeMap<(u32, u32, u32), Scalar>,
}

impl FreePolyElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant `1` with the given scalar as template.
    pub fn constant(c: Scalar) -> Self {
        Self::from_map([((0, 0, 0), c)])
    }

    pub fn from_map(entries: impl IntoIterator<Item = ((u32, u32, u32), Scalar)>) -> Self {
        let mut out = Self::default();
        for (key, c) in entries {
            out.add(key, c);
        }
        out
    }

    fn add(&mut self, key: (u32, u32, u32), c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&key) {
            Some(old) => {
                let sum = &old + &c;
                if !sum.is_zero() {
                    self.coeffs.insert(key, sum);
                }
            }
            None => {
                self.coeffs.insert(key, c);
            }
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32, u32), Scalar> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// `X^i P(H) Y^k` grouped by `(i, k)`.
type Grouped = BTreeMap<(u32, u32), Poly>;

fn group(v: &FreePolyElement) -> Grouped {
    let mut out = Grouped::new();
    for (&(i, j, k), c) in &v.coeffs {
        let term = Poly::monomial(c.clone(), j as usize);
        let entry = out.entry((i, k)).or_insert_with(Poly::zero);
        *entry = &*entry + &term;
    }
    out.retain(|_, p| !p.is_zero());
    out
}

fn ungroup(g: &Grouped) -> FreePolyElement {
    let mut out = FreePolyElement::zero();
    for (&(i, k), p) in g {
        for (j, c) in p.coeffs().iter().enumerate() {
            out.add((i, j as u32, k), c.clone());
        }
    }
    out
}

fn accumulate(acc: &mut Grouped, key: (u32, u32), p: Poly) {
    let entry = acc.entry(key).or_insert_with(Poly::zero);
    *entry = &*entry + &p;
    if entry.is_zero() {
        acc.remove(&key);
    }
}

fn combine(a: Grouped, b: Grouped) -> Grouped {
    let mut out = a;
    for (key, p) in b {
        accumulate(&mut out, key, p);
    }
    out
}

struct Action<'a> {
    pres: &'a Presentation,
    iterates: Vec<Poly>,
}

impl<'a> Action<'a> {
    fn new(pres: &'a Presentation) -> Self {
        Action {
            pres,
            iterates: vec![pres.h()],
        }
    }

    fn iterate(&mut self, i: u32) -> Poly {
        while self.iterates.len() <= i as usize {
            let next = self.iterates.last().unwrap().compose(self.pres.f());
            self.iterates.push(next);
        }
        self.iterates[i as usize].clone()
    }

    fn x(&mut self, v: &Grouped) -> Grouped {
        v.iter().map(|(&(i, k), p)| ((i + 1, k), p.clone())).collect()
    }

    /// `g(h) . v`: on `X^i P(H) Y^k` the operator `h` is multiplication by
    /// `f^(i)(H)`, so `g(h)` multiplies by `g(f^(i)(H))`.
    fn poly_in_h(&mut self, g: &Poly, v: &Grouped) -> Grouped {
        let mut out = Grouped::new();
        for (&(i, k), p) in v {
            let gi = if i == 0 {
                g.clone()
            } else if g == self.pres.f() {
                self.iterate(i + 1)
            } else {
                g.compose(&self.iterate(i))
            };
            accumulate(&mut out, (i, k), &gi * p);
        }
        out
    }

    fn y(&mut self, v: &Grouped) -> Grouped {
        let mut out = Grouped::new();
        for (&(i, k), p) in v {
            let image = self.y_monomial(i, k, p);
            out = combine(out, image);
        }
        out
    }

    /// `y . X^i P(H) Y^k`. Unrolling the last rule down to `i = 0`, the
    /// corrections `(f(h) - h) . X^(m-1) P Y^k = X^(m-1) (f^(m) - f^(m-1)) P Y^k`
    /// all land on `X^(i-1)` after the shifts and telescope to `f^(i) - H`.
    fn y_monomial(&mut self, i: u32, k: u32, p: &Poly) -> Grouped {
        let lifted = ((i, k + 1), p.compose(self.pres.f()));
        let mut out: Grouped = [lifted].into_iter().collect();
        if i > 0 {
            let fi = self.iterate(i);
            let correction = &(&fi - &self.pres.h()) * p;
            accumulate(&mut out, (i - 1, k), correction);
        }
        out
    }

    /// `x^i g(h) y^k . v`, applied right to left.
    fn element(&mut self, alpha: &GhaElement, v: &Grouped) -> Grouped {
        let mut out = Grouped::new();
        for (&(i, k), g) in alpha.terms() {
            let mut w = v.clone();
            for _ in 0..k {
                w = self.y(&w);
            }
            w = self.poly_in_h(g, &w);
            for _ in 0..i {
                w = self.x(&w);
            }
            out = combine(out, w);
        }
        out
    }
}

/// The action of `alpha` on `v` in C[X, H, Y].
pub fn free_module_action(alpha: &GhaElement, v: &FreePolyElement) -> FreePolyElement {
    let mut action = Action::new(alpha.presentation());
    let image = action.element(alpha, &group(v));
    ungroup(&image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator;
    use crate::scalar::Field;

    fn setup() -> (std::sync::Arc<Presentation>, Field) {
        let field = Field::exact(1);
        let p = Presentation::new(Poly::monomial(field.one(), 2), field.clone()).unwrap();
        (p, field)
    }

    #[test]
    fn generators_on_one() {
        let (p, field) = setup();
        let one = FreePolyElement::constant(field.one());
        let x = GhaElement::generator(&p, Generator::X);
        let y = GhaElement::generator(&p, Generator::Y);
        let h = GhaElement::generator(&p, Generator::H);
        assert_eq!(
            free_module_action(&x, &one),
            FreePolyElement::from_map([((1, 0, 0), field.one())])
        );
        assert_eq!(
            free_module_action(&y, &one),
            FreePolyElement::from_map([((0, 0, 1), field.one())])
        );
        // h . X = X H^2 when f = h^2
        let big_x = FreePolyElement::from_map([((1, 0, 0), field.one())]);
        assert_eq!(
            free_module_action(&h, &big_x),
            FreePolyElement::from_map([((1, 2, 0), field.one())])
        );
    }

    #[test]
    fn relation_yx_on_one() {
        let (p, field) = setup();
        let one = FreePolyElement::constant(field.one());
        let x = GhaElement::generator(&p, Generator::X);
        let y = GhaElement::generator(&p, Generator::Y);
        let yx = free_module_action(&y, &free_module_action(&x, &one));
        // (x y + f(h) - h) . 1 = XY + H^2 - H
        let expected = FreePolyElement::from_map([
            ((1, 0, 1), field.one()),
            ((0, 2, 0), field.one()),
            ((0, 1, 0), field.int(-1)),
        ]);
        assert_eq!(yx, expected);
        let h = FreePolyElement::from_map([((0, 1, 0), field.one())]);
        let yxh = free_module_action(&y, &free_module_action(&x, &h));
        // y . XH = X f(H) Y + (f(h) - h) . H = X H^2 Y + H^3 - H^2
        let expected = FreePolyElement::from_map([
            ((1, 2, 1), field.one()),
            ((0, 3, 0), field.one()),
            ((0, 2, 0), field.int(-1)),
        ]);
        assert_eq!(yxh, expected);
    }
}
