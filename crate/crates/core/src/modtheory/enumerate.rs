//! All simple modules of a given dimension, as families with sample members.

use rayon::prelude::*;
use serde::Serialize;

use super::{check_c_conditions, ModError, ModuleDescriptor, SCHEMA_VERSION};
use crate::poly::{periodic_points, solve, LinearFamily, Orbit, Poly};
use crate::scalar::{Backend, Field, Scalar};

#[derive(Clone, Copy, Debug)]
pub struct SampleConfig {
    /// Members instantiated per continuous family.
    pub count: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { count: 2 }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "family")]
pub enum SimpleFamily {
    /// `A'(lambda, zdot, a)` over one orbit; `zdot` and `a != 0` are free.
    Aprime {
        orbit: Orbit,
        free: Vec<&'static str>,
        samples: Vec<ModuleDescriptor>,
    },
    /// `B'(lambda, zdot, a)` over one orbit with `zdot` among `-lambda(i)`; `a != 0` is free.
    Bprime {
        orbit: Orbit,
        zdot: Vec<Scalar>,
        free: Vec<&'static str>,
        samples: Vec<ModuleDescriptor>,
    },
    /// `A'` over every orbit `lambda(i) = center + multiplier^i (b - center)`, `b != center`.
    AprimeContinuum {
        center: Scalar,
        multiplier: Scalar,
        free: Vec<&'static str>,
        samples: Vec<ModuleDescriptor>,
    },
    /// `B'` over the same continuum of orbits with `zdot = -lambda(j)`.
    BprimeContinuum {
        center: Scalar,
        multiplier: Scalar,
        free: Vec<&'static str>,
        samples: Vec<ModuleDescriptor>,
    },
    /// An isolated `C(zdot, n)`.
    Cmod { zdot: Scalar, n: usize },
    /// `C(zdot, n)` for every `zdot` outside `excluded`.
    CContinuum {
        n: usize,
        excluded: Vec<Scalar>,
        samples: Vec<ModuleDescriptor>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct SimpleEnumeration {
    pub schema_version: u32,
    pub n: usize,
    pub families: Vec<SimpleFamily>,
    /// Periodic points that could not be chained into orbits.
    pub residual_roots: Vec<Scalar>,
    /// Candidates rejected because a defining condition held only approximately.
    pub borderline: Vec<String>,
}

impl SimpleEnumeration {
    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    /// Every instantiated descriptor, isolated C modules included.
    pub fn samples(&self) -> Vec<ModuleDescriptor> {
        let mut out = Vec::new();
        for fam in &self.families {
            match fam {
                SimpleFamily::Aprime { samples, .. }
                | SimpleFamily::Bprime { samples, .. }
                | SimpleFamily::AprimeContinuum { samples, .. }
                | SimpleFamily::BprimeContinuum { samples, .. }
                | SimpleFamily::CContinuum { samples, .. } => out.extend(samples.iter().cloned()),
                SimpleFamily::Cmod { zdot, n } => out.push(ModuleDescriptor::Cmod {
                    zdot: zdot.clone(),
                    n: *n,
                }),
            }
        }
        out
    }
}

const ZDOT_SAMPLES: [(i64, i64); 6] = [(0, 1), (1, 1), (-2, 1), (1, 2), (3, 1), (-3, 2)];
const NONZERO_SAMPLES: [(i64, i64); 6] = [(1, 1), (2, 1), (-1, 1), (1, 2), (3, 1), (-2, 3)];

fn sample_zdot(field: &Field, k: usize) -> Scalar {
    let (p, q) = ZDOT_SAMPLES[k % 6];
    &field.ratio(p, q) + &field.int((k / 6) as i64)
}

fn sample_nonzero(field: &Field, k: usize) -> Scalar {
    let (p, q) = NONZERO_SAMPLES[k % 6];
    &field.ratio(p, q) * &field.int((k / 6 + 1) as i64)
}

fn field_for(backend: Backend, field: &Field) -> Field {
    match backend {
        Backend::Exact => *field,
        Backend::Approx => field.to_approx(),
    }
}

fn orbit_families(orbit: &Orbit, cfg: &SampleConfig, field: &Field) -> Vec<SimpleFamily> {
    let sf = field_for(orbit.backend(), field);
    let n = orbit.period();
    let a_samples = (0..cfg.count)
        .map(|k| ModuleDescriptor::Aprime {
            orbit: orbit.clone(),
            zdot: sample_zdot(&sf, k),
            a: sample_nonzero(&sf, k),
        })
        .collect();
    let zdots: Vec<Scalar> = orbit.values().iter().map(|l| -l).collect();
    let b_samples = (0..cfg.count)
        .map(|k| ModuleDescriptor::Bprime {
            orbit: orbit.clone(),
            zdot: zdots[k % n].clone(),
            a: sample_nonzero(&sf, k),
        })
        .collect();
    vec![
        SimpleFamily::Aprime {
            orbit: orbit.clone(),
            free: vec!["zdot", "a"],
            samples: a_samples,
        },
        SimpleFamily::Bprime {
            orbit: orbit.clone(),
            zdot: zdots,
            free: vec!["a"],
            samples: b_samples,
        },
    ]
}

fn continuum_families(fam: &LinearFamily, cfg: &SampleConfig, field: &Field) -> Vec<SimpleFamily> {
    let sf = field_for(fam.center.backend(), field);
    let n = fam.period;
    let orbit_k = |k: usize| fam.orbit(&(&fam.center + &sample_nonzero(&sf, k)));
    let a_samples = (0..cfg.count)
        .map(|k| ModuleDescriptor::Aprime {
            orbit: orbit_k(k),
            zdot: sample_zdot(&sf, k),
            a: sample_nonzero(&sf, k + 1),
        })
        .collect();
    let b_samples = (0..cfg.count)
        .map(|k| {
            let orbit = orbit_k(k);
            let zdot = -orbit.at((k % n) as i64);
            ModuleDescriptor::Bprime {
                orbit,
                zdot,
                a: sample_nonzero(&sf, k + 1),
            }
        })
        .collect();
    vec![
        SimpleFamily::AprimeContinuum {
            center: fam.center.clone(),
            multiplier: fam.multiplier.clone(),
            free: vec!["b", "zdot", "a"],
            samples: a_samples,
        },
        SimpleFamily::BprimeContinuum {
            center: fam.center.clone(),
            multiplier: fam.multiplier.clone(),
            free: vec!["b", "j", "a"],
            samples: b_samples,
        },
    ]
}

/// `zdot + f^{(i)}(-zdot)` as a polynomial in `zdot`.
fn c_condition(f: &Poly, i: usize) -> Result<Poly, ModError> {
    let h = f.identity_like();
    let fi = f.iterate(i)?;
    Ok(&fi.compose(&-&h) + &h)
}

fn c_families(
    f: &Poly,
    n: usize,
    cfg: &SampleConfig,
    field: &Field,
    borderline: &mut Vec<String>,
) -> Result<Vec<SimpleFamily>, ModError> {
    let g = c_condition(f, n)?;
    if g.is_zero() {
        // every zdot satisfies the module condition; only the exclusion cuts
        let mut excluded: Vec<Scalar> = Vec::new();
        for i in 1..n {
            let e = c_condition(f, i)?;
            if e.is_zero() {
                return Ok(Vec::new());
            }
            for r in solve(&e, field)?.roots {
                if !excluded.contains(&r) {
                    excluded.push(r);
                }
            }
        }
        excluded.sort_by(|a, b| a.sort_key().partial_cmp(&b.sort_key()).unwrap());
        let mut samples = Vec::new();
        let mut k = 0;
        while samples.len() < cfg.count && k < cfg.count + excluded.len() + 6 {
            let zdot = sample_zdot(field, k + 1);
            k += 1;
            let clash = excluded.iter().any(|e| {
                let diff = (e.to_complex() - zdot.to_complex()).norm();
                diff <= 10.0 * field.tol * (1.0 + zdot.norm())
            });
            if !clash {
                samples.push(ModuleDescriptor::Cmod { zdot, n });
            }
        }
        return Ok(vec![SimpleFamily::CContinuum { n, excluded, samples }]);
    }
    if g.is_constant() {
        return Ok(Vec::new());
    }
    let roots = solve(&g, field)?;
    let checked: Vec<(Scalar, Result<(), ModError>)> = roots
        .roots
        .into_par_iter()
        .map(|zdot| {
            let map = match zdot.backend() {
                Backend::Exact => f.clone(),
                Backend::Approx => f.promote(field.tol),
            };
            let verdict = check_c_conditions(&map, &zdot, n, field.tol, true);
            (zdot, verdict)
        })
        .collect();
    let mut out = Vec::new();
    for (zdot, verdict) in checked {
        match verdict {
            Ok(()) => out.push(zdot),
            Err(ModError::Borderline(msg)) => borderline.push(format!("C({zdot}, {n}): {msg}")),
            Err(_) => {}
        }
    }
    out.sort_by(|a, b| a.sort_key().partial_cmp(&b.sort_key()).unwrap());
    Ok(out.into_iter().map(|zdot| SimpleFamily::Cmod { zdot, n }).collect())
}

/// Families of `n`-dimensional simple modules over H(f).
pub fn enumerate_simples(
    f: &Poly,
    n: usize,
    cfg: &SampleConfig,
    field: &Field,
) -> Result<SimpleEnumeration, ModError> {
    if n == 0 {
        return Err(ModError::Invariant("dimension must be positive".into()));
    }
    if f.is_identity() {
        return Err(ModError::Commutative);
    }
    let set = periodic_points(f, n, field)?;
    let mut families: Vec<SimpleFamily> = set
        .orbits
        .par_iter()
        .flat_map_iter(|orbit| orbit_families(orbit, cfg, field))
        .collect();
    if let Some(fam) = &set.family {
        families.extend(continuum_families(fam, cfg, field));
    }
    let mut borderline = Vec::new();
    families.extend(c_families(f, n, cfg, field, &mut borderline)?);
    Ok(SimpleEnumeration {
        schema_version: SCHEMA_VERSION,
        n,
        families,
        residual_roots: set.residual_roots,
        borderline,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modtheory::{build, classify, is_simple, modules_isomorphic, verify_relations};

    #[test]
    fn translation_has_no_finite_simples() {
        let field = Field::exact(1);
        let f = Poly::from_ints(&[1, 1], &field);
        for n in 1..4 {
            assert!(enumerate_simples(&f, n, &SampleConfig::default(), &field).unwrap().is_empty());
        }
    }

    #[test]
    fn example_with_only_fixed_points() {
        let field = Field::exact(1);
        let f = Poly::from_coeffs(vec![field.ratio(-3, 4), field.int(2), field.one()]);
        let e = enumerate_simples(&f, 2, &SampleConfig::default(), &field).unwrap();
        assert!(e.is_empty());
        assert!(e.residual_roots.is_empty());
        // the C candidates are zdot = 3/2 and -1/2, both fixed by f after negation
        let g = c_condition(&f, 2).unwrap();
        let roots = solve(&g, &field).unwrap();
        assert!(roots.exact);
        let mut got: Vec<Scalar> = roots.roots;
        got.sort_by(|a, b| a.sort_key().partial_cmp(&b.sort_key()).unwrap());
        assert_eq!(got, vec![field.ratio(-1, 2), field.ratio(3, 2)]);
        for z in &got {
            assert!((z + &f.evaluate(&-z)).is_zero());
        }
    }

    #[test]
    fn rotation_families_round_trip() {
        let field = Field::exact(3);
        let f = Poly::monomial(field.zeta(3, 1), 1);
        let e = enumerate_simples(&f, 3, &SampleConfig { count: 3 }, &field).unwrap();
        let kinds: Vec<&str> = e
            .families
            .iter()
            .map(|fam| match fam {
                SimpleFamily::AprimeContinuum { .. } => "A",
                SimpleFamily::BprimeContinuum { .. } => "B",
                SimpleFamily::CContinuum { .. } => "C",
                _ => "?",
            })
            .collect();
        assert_eq!(kinds, ["A", "B", "C"]);
        for d in e.samples() {
            let m = build(&d, &f, &field).unwrap();
            assert!(verify_relations(&m, &f, &field).ok);
            assert!(is_simple(&m, &field));
            assert!(modules_isomorphic(&classify(&m, &f, &field).unwrap(), &d));
        }
    }

    #[test]
    fn identity_is_rejected() {
        let field = Field::exact(1);
        assert_eq!(
            enumerate_simples(&Poly::identity(&field), 2, &SampleConfig::default(), &field).unwrap_err(),
            ModError::Commutative
        );
    }
}
