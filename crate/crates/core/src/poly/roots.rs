//! Simultaneous root finding (Aberth–Ehrlich) with Newton polishing.

use num_complex::Complex64;

use super::{Poly, PolyError};
use crate::scalar::{ApproxComplex, Scalar, DEFAULT_TOL};

#[derive(Clone, Copy, Debug)]
pub struct RootConfig {
    /// Residual tolerance: accept `r` when `|p(r)| <= tol * (1 + ||p||_r)`.
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            tol: DEFAULT_TOL,
            max_iterations: 2000,
        }
    }
}

impl RootConfig {
    pub fn with_tol(tol: f64) -> Self {
        RootConfig {
            tol,
            ..Default::default()
        }
    }
}

fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut p = zero;
    let mut dp = zero;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Evaluation scale at `z`: `sum |a_i| * max(1, |z|)^i`.
fn scale_at(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm().max(1.0);
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

fn residual_ok(coeffs: &[Complex64], z: Complex64, tol: f64) -> bool {
    let (p, _) = eval_with_derivative(coeffs, z);
    p.norm() <= tol * (1.0 + scale_at(coeffs, z))
}

/// All complex roots with multiplicity of the polynomial with the given
/// coefficients (lowest degree first). The leading coefficient must be nonzero.
pub fn roots_complex(coeffs: &[Complex64], cfg: &RootConfig) -> Result<Vec<Complex64>, PolyError> {
    let mut coeffs: Vec<Complex64> = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(PolyError::ConstantPolynomial);
    }
    let mut found = Vec::new();
    // exact zero roots
    let zeros = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    found.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(zeros));
    let reduced: Vec<Complex64> = coeffs[zeros..].to_vec();
    let n = reduced.len() - 1;
    if n == 0 {
        return Ok(found);
    }
    if n == 1 {
        found.push(-reduced[0] / reduced[1]);
        return Ok(found);
    }

    let lead = reduced[n];
    let radius = (reduced[0] / lead).norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    let mut iterations = 0;
    while iterations < cfg.max_iterations {
        iterations += 1;
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = eval_with_derivative(&reduced, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step <= 1e-15 {
            break;
        }
    }

    for root in z.iter_mut() {
        polish(&reduced, root);
    }
    // Multiple roots converge linearly; an unconverged run is still accepted
    // when every residual passes.
    let all_ok = z.iter().all(|&r| residual_ok(&reduced, r, cfg.tol));
    if !all_ok {
        found.extend(z);
        return Err(PolyError::NoConvergence {
            iterations,
            partial: found,
        });
    }
    found.extend(z);
    Ok(found)
}

/// Newton steps, kept only while they reduce the residual.
fn polish(coeffs: &[Complex64], root: &mut Complex64) {
    let (mut p, mut dp) = eval_with_derivative(coeffs, *root);
    for _ in 0..8 {
        if p.norm() == 0.0 || dp.norm() == 0.0 {
            return;
        }
        let candidate = *root - p / dp;
        let (cp, cdp) = eval_with_derivative(coeffs, candidate);
        if !(cp.norm() < p.norm()) {
            return;
        }
        *root = candidate;
        p = cp;
        dp = cdp;
    }
}

/// Roots with multiplicity as approximate scalars.
pub fn roots(p: &Poly, cfg: &RootConfig) -> Result<Vec<Scalar>, PolyError> {
    if p.is_constant() {
        return Err(PolyError::ConstantPolynomial);
    }
    Ok(roots_complex(&p.to_complex(), cfg)?
        .into_iter()
        .map(|z| Scalar::Approx(ApproxComplex::new(z, cfg.tol)))
        .collect())
}
