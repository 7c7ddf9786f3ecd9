//! Periodic orbits of the dynamical system `h -> f(h)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;

use super::roots::{roots_complex, RootConfig};
use super::{Poly, PolyError};
use crate::scalar::{divisors, euler_phi, rational_to_f64, ApproxComplex, Backend, Field, Scalar};

/// One period `lambda(0..m)` of a periodic sequence with `f(lambda(i)) = lambda(i+1 mod m)`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(transparent)]
pub struct Orbit {
    values: Vec<Scalar>,
}

impl Orbit {
    /// Wraps values without checking them against a map; see [`Orbit::validate`].
    pub fn new(values: Vec<Scalar>) -> Self {
        assert!(!values.is_empty(), "an orbit has at least one point");
        Orbit { values }
    }

    /// The forward orbit of a periodic point `b`, if it closes within `max_period` steps.
    pub fn of_point(f: &Poly, b: &Scalar, max_period: usize) -> Option<Orbit> {
        let mut values = vec![b.clone()];
        let mut cur = f.evaluate(b);
        while values.len() <= max_period {
            if cur == *b {
                return Some(Orbit { values });
            }
            values.push(cur.clone());
            cur = f.evaluate(&cur);
        }
        None
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// `lambda(i)` for any integer index.
    pub fn at(&self, i: i64) -> &Scalar {
        &self.values[i.rem_euclid(self.values.len() as i64) as usize]
    }

    pub fn backend(&self) -> Backend {
        self.values[0].backend()
    }

    pub fn rotated(&self, shift: usize) -> Orbit {
        let n = self.values.len();
        Orbit {
            values: (0..n).map(|i| self.values[(i + shift) % n].clone()).collect(),
        }
    }

    /// Rotation starting at the lexicographically smallest `(re, im)`, ties broken by later entries.
    pub fn canonical(&self) -> Orbit {
        let n = self.values.len();
        let keys: Vec<(f64, f64)> = self.values.iter().map(Scalar::sort_key).collect();
        let best = (0..n)
            .min_by(|&a, &b| {
                (0..n)
                    .map(|k| keys[(a + k) % n].partial_cmp(&keys[(b + k) % n]).unwrap())
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(0);
        self.rotated(best)
    }

    /// Whether the two orbits agree up to an index shift.
    pub fn is_rotation_of(&self, other: &Orbit) -> bool {
        let n = self.values.len();
        n == other.values.len() && (0..n).any(|s| self.rotated(s).values == other.values)
    }

    /// Checks `f(lambda(i)) = lambda(i+1)` and that no proper divisor of the length is a period.
    pub fn validate(&self, f: &Poly) -> Result<(), String> {
        let n = self.values.len();
        for i in 0..n {
            let image = f.evaluate(&self.values[i]);
            if image != self.values[(i + 1) % n] {
                return Err(format!(
                    "f(lambda({i})) = {image} but lambda({}) = {}",
                    (i + 1) % n,
                    self.values[(i + 1) % n]
                ));
            }
        }
        for d in divisors(n as u32) {
            let d = d as usize;
            if d < n && (0..n).all(|i| self.values[i] == self.values[(i + d) % n]) {
                return Err(format!("orbit has period {d}, smaller than its length {n}"));
            }
        }
        Ok(())
    }
}

/// The continuum `lambda(i) = c + w^i (b - c)`, `b != c`, of exact-period points
/// of `f = w h + (1 - w) c` when `w` is a primitive `period`-th root of unity.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct LinearFamily {
    pub center: Scalar,
    pub multiplier: Scalar,
    pub period: usize,
}

impl LinearFamily {
    /// The orbit through `b`; `b` must differ from the center.
    pub fn orbit(&self, b: &Scalar) -> Orbit {
        let mut values = Vec::with_capacity(self.period);
        let mut offset = b - &self.center;
        for _ in 0..self.period {
            values.push(&self.center + &offset);
            offset = &offset * &self.multiplier;
        }
        Orbit::new(values)
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct OrbitSet {
    pub backend: Backend,
    pub orbits: Vec<Orbit>,
    /// Roots of `f^{(n)} - h` that survived the exact-period filter but could
    /// not be chained into an orbit within tolerance.
    pub residual_roots: Vec<Scalar>,
    pub family: Option<LinearFamily>,
}

/// Distinct roots of a polynomial, exact when all of them lie in the working field.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RootSet {
    pub exact: bool,
    pub roots: Vec<Scalar>,
}

fn lcm_conductor(p: &Poly, field: &Field) -> u32 {
    p.coeffs().iter().fold(field.conductor, |acc, c| match c {
        Scalar::Exact(x) => acc.lcm(&x.conductor()),
        Scalar::Approx(_) => acc,
    })
}

/// Best rational approximation with denominator at most `max_den` via continued fractions.
fn rational_approx(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() || x.abs() > 1e15 {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = v - a;
        if frac.abs() < 1e-13 {
            break;
        }
        v = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

fn close_rational(x: f64) -> Option<BigRational> {
    rational_approx(x, 1_000_000).filter(|r| (rational_to_f64(r) - x).abs() <= 1e-8 * (1.0 + x.abs()))
}

/// Exact candidates near `z`: `rho * u` (rational `rho`, root of unity `u` of
/// the field) and, in quadratic fields, `p + q zeta_N` with rational `p`, `q`.
pub(crate) fn recognize(z: Complex64, exact: &Field) -> Vec<Scalar> {
    let mut out = Vec::new();
    if z.norm() < 1e-9 {
        out.push(exact.zero());
        return out;
    }
    if euler_phi(exact.conductor) == 2 {
        let zeta = exact.zeta(exact.conductor, 1);
        let zc = zeta.to_complex();
        let q = z.im / zc.im;
        let p = z.re - q * zc.re;
        if let (Some(p), Some(q)) = (close_rational(p), close_rational(q)) {
            out.push(&exact.rational(p) + &(&exact.rational(q) * &zeta));
        }
    }
    for u in exact.roots_of_unity() {
        let w = z / u.to_complex();
        if w.re <= 0.0 || w.im.abs() > 1e-7 * (1.0 + w.norm()) {
            continue;
        }
        if let Some(rho) = close_rational(w.re) {
            out.push(&exact.rational(rho) * &u);
        }
    }
    out
}

/// Distinct roots of `p`.
///
/// Exact coefficients: numeric roots of the square-free part are matched
/// against exact candidates and accepted only when every root is certified by
/// exact evaluation; otherwise the roots are returned approximately.
pub fn solve(p: &Poly, field: &Field) -> Result<RootSet, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let approx_cfg = RootConfig::with_tol(field.tol);
    if p.is_constant() {
        return Ok(RootSet {
            exact: p.backend() == Some(Backend::Exact),
            roots: Vec::new(),
        });
    }
    if p.backend() == Some(Backend::Exact) {
        let sf = if p.degree().unwrap_or(0) <= 512 {
            p.square_free_part()
        } else {
            p.clone()
        };
        let numeric = roots_complex(&sf.to_complex(), &approx_cfg)?;
        let exact_field = Field::exact(lcm_conductor(p, field));
        let mut certified: Vec<Scalar> = Vec::new();
        for z in &numeric {
            if let Some(c) = recognize(*z, &exact_field)
                .into_iter()
                .find(|c| sf.evaluate(c).is_zero())
            {
                if !certified.contains(&c) {
                    certified.push(c);
                }
            }
        }
        if Some(certified.len()) == sf.degree() && sf.degree() == Some(numeric.len()) {
            return Ok(RootSet {
                exact: true,
                roots: certified,
            });
        }
        let roots = dedup_complex(numeric, field.tol)
            .into_iter()
            .map(|z| Scalar::Approx(ApproxComplex::new(z, field.tol)))
            .collect();
        return Ok(RootSet { exact: false, roots });
    }
    let numeric = roots_complex(&p.to_complex(), &approx_cfg)?;
    let roots = dedup_complex(numeric, field.tol)
        .into_iter()
        .map(|z| Scalar::Approx(ApproxComplex::new(z, field.tol)))
        .collect();
    Ok(RootSet { exact: false, roots })
}

fn dedup_complex(values: Vec<Complex64>, tol: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for z in values {
        if !out.iter().any(|w| (w - z).norm() <= 10.0 * tol) {
            out.push(z);
        }
    }
    out
}

fn apply_times(f: &Poly, x: &Scalar, times: usize) -> Scalar {
    (0..times).fold(x.clone(), |acc, _| f.evaluate(&acc))
}

fn close(a: &Scalar, b: &Scalar, tol: f64) -> bool {
    match (a, b) {
        (Scalar::Exact(_), Scalar::Exact(_)) => a == b,
        _ => (a.to_complex() - b.to_complex()).norm() <= 10.0 * tol,
    }
}

/// Orbits of exact period `n` of `h -> f(h)`.
///
/// Computes the roots of `f^{(n)}(h) - h`, drops those fixed by `f^{(d)}` for a
/// proper divisor `d` of `n` and chains the rest into orbits. When
/// `f^{(n)} = h` identically (linear `f` with a root-of-unity multiplier) the
/// continuum is reported in [`OrbitSet::family`] instead.
pub fn periodic_points(f: &Poly, n: usize, field: &Field) -> Result<OrbitSet, PolyError> {
    assert!(n >= 1, "period must be positive");
    if f.is_identity() {
        return Err(PolyError::ContinuumOfOrbits);
    }
    let h = match f.backend() {
        Some(_) => f.identity_like(),
        None => Poly::identity(field),
    };
    let g = &f.iterate(n)? - &h;
    let backend = f.backend().unwrap_or(field.backend);
    if g.is_zero() {
        return Ok(linear_continuum(f, n, field, backend));
    }
    let rs = solve(&g, field)?;
    let (map, backend) = if rs.exact {
        (f.clone(), Backend::Exact)
    } else {
        (f.promote(field.tol), Backend::Approx)
    };
    let proper: Vec<usize> = divisors(n as u32)
        .into_iter()
        .map(|d| d as usize)
        .filter(|&d| d < n)
        .collect();
    let survivors: Vec<Scalar> = rs
        .roots
        .into_iter()
        .filter(|r| !proper.iter().any(|&d| close(&apply_times(&map, r, d), r, field.tol)))
        .collect();

    let mut used = vec![false; survivors.len()];
    let mut orbits = Vec::new();
    let mut residual = Vec::new();
    for start in 0..survivors.len() {
        if used[start] {
            continue;
        }
        let mut chain = vec![start];
        let mut ok = true;
        for step in 1..=n {
            let image = map.evaluate(&survivors[*chain.last().unwrap()]);
            if step == n {
                ok = close(&image, &survivors[start], field.tol);
                break;
            }
            let next = (0..survivors.len())
                .filter(|&j| !used[j] && !chain.contains(&j))
                .filter(|&j| close(&image, &survivors[j], field.tol))
                .min_by(|&a, &b| {
                    let da = (survivors[a].to_complex() - image.to_complex()).norm();
                    let db = (survivors[b].to_complex() - image.to_complex()).norm();
                    da.partial_cmp(&db).unwrap()
                });
            match next {
                Some(j) => chain.push(j),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            for &j in &chain {
                used[j] = true;
            }
            let orbit = Orbit::new(chain.iter().map(|&j| survivors[j].clone()).collect());
            orbits.push(orbit.canonical());
        } else {
            used[start] = true;
            residual.push(survivors[start].clone());
        }
    }
    orbits.sort_by(|a, b| {
        a.values()[0]
            .sort_key()
            .partial_cmp(&b.values()[0].sort_key())
            .unwrap()
    });
    Ok(OrbitSet {
        backend,
        orbits,
        residual_roots: residual,
        family: None,
    })
}

/// `f = w h + b` with `w^n = 1`, `w != 1`: every point but the center has period `ord(w)`.
fn linear_continuum(f: &Poly, n: usize, field: &Field, backend: Backend) -> OrbitSet {
    let w = f.coeff(1).cloned().expect("f^(n) = h forces deg f = 1");
    let b = f.coeff(0).cloned().unwrap_or_else(|| w.zero_like());
    let one = w.one_like();
    let center = &b * &(&one - &w).inv().expect("w != 1 when f != h");
    let order = w.root_of_unity_order(field.max_order.max(n as u32));
    let family = (order == Some(n as u32)).then(|| LinearFamily {
        center,
        multiplier: w,
        period: n,
    });
    OrbitSet {
        backend,
        orbits: Vec::new(),
        residual_roots: Vec::new(),
        family,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squaring_map_period_two_exact() {
        let f = Field::exact(3);
        let sq = Poly::monomial(f.one(), 2);
        let set = periodic_points(&sq, 2, &f).unwrap();
        assert_eq!(set.backend, Backend::Exact);
        assert_eq!(set.orbits.len(), 1);
        let orbit = &set.orbits[0];
        assert!(orbit.is_rotation_of(&Orbit::new(vec![f.zeta(3, 1), f.zeta(3, 2)])));
        orbit.validate(&sq).unwrap();
    }

    #[test]
    fn squaring_map_period_two_without_zeta3_is_approximate() {
        let f = Field::exact(1);
        let sq = Poly::monomial(f.one(), 2);
        let set = periodic_points(&sq, 2, &f).unwrap();
        assert_eq!(set.backend, Backend::Approx);
        assert_eq!(set.orbits.len(), 1);
        assert!(set.residual_roots.is_empty());
        let z = set.orbits[0].values()[0].to_complex();
        assert!((z.powu(3) - 1.0).norm() < 1e-9);
    }

    #[test]
    fn example15_has_no_period_two_orbit() {
        let f = Field::exact(1);
        let p = Poly::from_coeffs(vec![f.ratio(-3, 4), f.int(2), f.int(1)]);
        let set = periodic_points(&p, 2, &f).unwrap();
        assert_eq!(set.backend, Backend::Exact);
        assert!(set.orbits.is_empty());
        assert!(set.residual_roots.is_empty());
        let fixed = periodic_points(&p, 1, &f).unwrap();
        assert_eq!(fixed.orbits.len(), 2);
    }

    #[test]
    fn rotation_family() {
        let f = Field::exact(3);
        let wh = Poly::monomial(f.zeta(3, 1), 1);
        let set = periodic_points(&wh, 3, &f).unwrap();
        let family = set.family.expect("continuum reported as a family");
        let orbit = family.orbit(&f.int(2));
        orbit.validate(&wh).unwrap();
        assert_eq!(orbit.values()[1], &f.int(2) * &f.zeta(3, 1));
        // order 3 does not divide into period 2 orbits; only the center is fixed
        let two = periodic_points(&wh, 2, &f).unwrap();
        assert!(two.orbits.is_empty() && two.family.is_none());
    }

    #[test]
    fn identity_is_rejected() {
        let f = Field::exact(1);
        assert!(matches!(
            periodic_points(&Poly::identity(&f), 3, &f),
            Err(PolyError::ContinuumOfOrbits)
        ));
    }

    #[test]
    fn translation_has_no_finite_orbits() {
        let f = Field::exact(1);
        let p = Poly::from_ints(&[1, 1], &f);
        for n in 1..4 {
            assert!(periodic_points(&p, n, &f).unwrap().orbits.is_empty());
        }
    }

    #[test]
    fn canonical_rotation_prefers_smallest_real_part() {
        let f = Field::exact(1);
        let o = Orbit::new(vec![f.int(3), f.int(-1), f.int(2)]);
        assert_eq!(o.canonical().values(), &[f.int(-1), f.int(2), f.int(3)]);
    }

    #[test]
    fn recognizes_rationals_and_roots_of_unity() {
        let f = Field::exact(3);
        let z = f.zeta(3, 1).to_complex() * 0.75;
        let cands = recognize(z, &f);
        assert!(cands.contains(&(&f.ratio(3, 4) * &f.zeta(3, 1))));
        assert_eq!(rational_approx(-1.5, 100), Some(BigRational::new((-3).into(), 2.into())));
    }
}
