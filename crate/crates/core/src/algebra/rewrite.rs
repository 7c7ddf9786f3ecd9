//! Normal-form multiplication by rewriting.
//!
//! A product of two basis monomials `x^i1 g1(h) y^k1 * x^i2 g2(h) y^k2` only
//! needs the normal form of `y^k1 x^i2`. Those swaps are computed by peeling
//! one `y` past one `x` with `yx = xy + f(h) - h`:
//!
//! * `y x^i = x (y x^(i-1)) + x^(i-1) (f^(i) - f^(i-1))(h)`
//! * `y^k x^i = y (y^(k-1) x^i)`, pushing the single `y` through each term.
//!
//! Every recursive call strictly decreases `(k, i)` in lexicographic order and
//! each pair is memoized for the duration of one product.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::Presentation;
use crate::poly::Poly;

pub(crate) type Terms = BTreeMap<(u32, u32), Poly>;

/// Adds `poly` to the coefficient of `x^i (.) y^k`, pruning zeros.
pub(crate) fn add_term(terms: &mut Terms, key: (u32, u32), poly: Poly) {
    if poly.is_zero() {
        return;
    }
    match terms.remove(&key) {
        Some(existing) => {
            let sum = &existing + &poly;
            if !sum.is_zero() {
                terms.insert(key, sum);
            }
        }
        None => {
            terms.insert(key, poly);
        }
    }
}

/// Counters collected while multiplying.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RewriteStats {
    /// Swap kernels `y^k x^i` (k, i >= 1) actually evaluated.
    pub kernel_calls: usize,
    /// Largest `(k, i)` for which a swap was requested.
    pub max_measure: (u32, u32),
}

pub(crate) struct Rewriter<'a> {
    pres: &'a Presentation,
    iterates: Vec<Poly>,
    swaps: HashMap<(u32, u32), Rc<Vec<(u32, u32, Poly)>>>,
    pub(crate) stats: RewriteStats,
}

impl<'a> Rewriter<'a> {
    pub(crate) fn new(pres: &'a Presentation) -> Self {
        Rewriter {
            pres,
            iterates: vec![pres.h()],
            swaps: HashMap::new(),
            stats: RewriteStats::default(),
        }
    }

    /// `f^{(a)}`.
    fn iterate(&mut self, a: u32) -> &Poly {
        while self.iterates.len() <= a as usize {
            let next = self.pres.f().compose(self.iterates.last().unwrap());
            self.iterates.push(next);
        }
        &self.iterates[a as usize]
    }

    /// `g(f^{(a)}(h))`.
    fn shifted(&mut self, g: &Poly, a: u32) -> Poly {
        if a == 0 || g.is_constant() {
            g.clone()
        } else {
            g.compose(self.iterate(a))
        }
    }

    /// Normal form of `y^k x^i` as `(a, b, p)` meaning `x^a p(h) y^b`.
    fn swap(&mut self, k: u32, i: u32) -> Rc<Vec<(u32, u32, Poly)>> {
        if k == 0 || i == 0 {
            return Rc::new(vec![(i, k, Poly::constant(self.pres.field().one()))]);
        }
        if let Some(hit) = self.swaps.get(&(k, i)) {
            return hit.clone();
        }
        self.stats.kernel_calls += 1;
        self.stats.max_measure = self.stats.max_measure.max((k, i));
        let mut acc = Terms::new();
        if k == 1 {
            for (a, b, p) in self.swap(1, i - 1).iter() {
                add_term(&mut acc, (a + 1, *b), p.clone());
            }
            let diff = {
                let hi = self.iterate(i).clone();
                &hi - self.iterate(i - 1)
            };
            add_term(&mut acc, (i - 1, 0), diff);
        } else {
            let inner = self.swap(k - 1, i);
            for (a, b, p) in inner.iter() {
                let head = self.swap(1, *a);
                for (a2, b2, q) in head.iter() {
                    let moved = self.shifted(p, *b2);
                    add_term(&mut acc, (*a2, b2 + b), q * &moved);
                }
            }
        }
        let result = Rc::new(acc.into_iter().map(|((a, b), p)| (a, b, p)).collect::<Vec<_>>());
        self.swaps.insert((k, i), result.clone());
        result
    }

    fn monomial_product(
        &mut self,
        (i1, g1, k1): (u32, &Poly, u32),
        (i2, g2, k2): (u32, &Poly, u32),
        out: &mut Terms,
    ) {
        let middle = self.swap(k1, i2);
        let mut left_cache: HashMap<u32, Poly> = HashMap::new();
        let mut right_cache: HashMap<u32, Poly> = HashMap::new();
        for (a, b, p) in middle.iter() {
            if !left_cache.contains_key(a) {
                let v = self.shifted(g1, *a);
                left_cache.insert(*a, v);
            }
            if !right_cache.contains_key(b) {
                let v = self.shifted(g2, *b);
                right_cache.insert(*b, v);
            }
            let poly = &(&left_cache[a] * p) * &right_cache[b];
            add_term(out, (i1 + a, b + k2), poly);
        }
    }

    pub(crate) fn multiply(&mut self, lhs: &Terms, rhs: &Terms) -> Terms {
        let mut out = Terms::new();
        for (&(i1, k1), g1) in lhs {
            for (&(i2, k2), g2) in rhs {
                self.monomial_product((i1, g1, k1), (i2, g2, k2), &mut out);
            }
        }
        out
    }
}
