//! Openness probe: random coefficient perturbations of an MG map, each rerun
//! through the MG search.
//!
//! Every component gets a coefficient shift, uniform in `[-eps, eps]`, at
//! every integer point of `Γ(f)`. So the perturbed map ranges over all maps
//! supported in `Γ(f)`. `eps` is kept below every nonzero vertex coefficient,
//! so no vertex disappears and `Γ` is preserved. The automatic choice
//! `eps = c1 / (2 eta)` uses the estimated lower constant `c1` and the number
//! `eta` of integer points in `2Γ`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::estimate::{estimate_constants, EstimateConfig};
use super::{all_passed, check_mg, monomial_at, MgConfig, MgError};
use crate::geom::{newton_polytope, Polytope};
use crate::polynomial::{Polynomial, PolynomialMap};
use crate::scalar::rational_from_f64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EpsilonChoice {
    Fixed(f64),
    /// `c1_hat / (2 eta)`.
    Auto,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeConfig {
    pub trials: usize,
    pub epsilon: EpsilonChoice,
    pub seed: u64,
    pub mg: MgConfig,
    pub estimate: EstimateConfig,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            trials: 100,
            epsilon: EpsilonChoice::Auto,
            seed: 0,
            mg: MgConfig::default(),
            estimate: EstimateConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationReport {
    pub trials: usize,
    pub unfalsified: usize,
    pub fraction_unfalsified: f64,
    pub epsilon: f64,
    /// Integer points of `2Γ` (automatic epsilon only).
    pub eta: Option<usize>,
    pub c1_hat: Option<f64>,
    /// Largest coefficient shift of the mildest trial that produced a violation.
    pub smallest_violating_shift: Option<f64>,
}

impl PerturbationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "trials": self.trials,
            "unfalsified": self.unfalsified,
            "fraction_unfalsified": self.fraction_unfalsified,
            "epsilon": self.epsilon,
            "eta": self.eta,
            "c1_hat": self.c1_hat,
            "smallest_violating_shift": self.smallest_violating_shift,
        })
    }
}

/// All integer points of a polytope, by scanning its bounding box.
pub fn integer_points(p: &Polytope<BigRational>) -> Vec<Vec<BigRational>> {
    let n = p.dim();
    let lo: Vec<BigInt> = (0..n)
        .map(|j| {
            p.vertices()
                .iter()
                .map(|v| v[j].ceil().to_integer())
                .min()
                .expect("vertex")
        })
        .collect();
    let hi: Vec<BigInt> = (0..n)
        .map(|j| {
            p.vertices()
                .iter()
                .map(|v| v[j].floor().to_integer())
                .max()
                .expect("vertex")
        })
        .collect();
    let mut out = Vec::new();
    let mut current: Vec<BigInt> = lo.clone();
    if current.iter().zip(&hi).any(|(a, b)| a > b) {
        return out;
    }
    loop {
        let point: Vec<BigRational> = current.iter().cloned().map(BigRational::from_integer).collect();
        if p.contains(&point) {
            out.push(point);
        }
        // odometer increment
        let mut j = 0;
        loop {
            if j == n {
                return out;
            }
            if current[j] < hi[j] {
                current[j] += 1;
                break;
            }
            current[j] = lo[j].clone();
            j += 1;
        }
    }
}

/// Smallest nonzero coefficient magnitude at a vertex of `Γ(f)`.
fn vertex_coefficient_floor(f: &PolynomialMap, gamma: &Polytope<BigRational>) -> f64 {
    gamma
        .vertices()
        .iter()
        .flat_map(|v| {
            let m = monomial_at(v);
            f.components()
                .iter()
                .map(move |p| p.coefficient(&m))
                .filter(|c| !c.is_zero())
                .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
        })
        .fold(f64::INFINITY, f64::min)
}

fn perturbed(
    f: &PolynomialMap,
    lattice: &[Vec<BigRational>],
    epsilon: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(PolynomialMap, f64), MgError> {
    let mut largest = 0.0f64;
    let mut components = Vec::with_capacity(f.len());
    for p in f.components() {
        let mut terms: Vec<_> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        for point in lattice {
            let shift = epsilon * rng.gen_range(-1.0..=1.0);
            largest = largest.max(shift.abs());
            let q = rational_from_f64(shift).expect("finite shift");
            terms.push((monomial_at(point), q));
        }
        components.push(Polynomial::from_terms(f.dim(), terms));
    }
    Ok((PolynomialMap::new(components)?, largest))
}

/// Runs `trials` perturbed copies of `f` through the MG search.
pub fn perturbation_probe(f: &PolynomialMap, config: &ProbeConfig) -> Result<PerturbationReport, MgError> {
    if !all_passed(&check_mg(f, &config.mg)?) {
        return Err(MgError::NotMg);
    }
    let gamma = newton_polytope(f)?;
    let (epsilon, eta, c1) = match config.epsilon {
        EpsilonChoice::Fixed(e) => (e, None, None),
        EpsilonChoice::Auto => {
            let est = estimate_constants(f, &config.estimate)?;
            let doubled = gamma.scaled(&BigRational::from_integer(2.into()))?;
            let eta = integer_points(&doubled).len();
            (est.c1_hat / (2.0 * eta as f64), Some(eta), Some(est.c1_hat))
        }
    };
    let limit = vertex_coefficient_floor(f, &gamma);
    if !(epsilon > 0.0 && epsilon < limit) {
        return Err(MgError::EpsilonOutOfRange { epsilon, limit });
    }
    let lattice = integer_points(&gamma);
    let outcomes: Vec<(bool, f64)> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(trial as u64);
            let (g, shift) = perturbed(f, &lattice, epsilon, &mut rng)?;
            if newton_polytope(&g)? != gamma {
                return Err(MgError::Inconsistent("perturbation changed the Newton polytope".into()));
            }
            Ok((all_passed(&check_mg(&g, &config.mg)?), shift))
        })
        .collect::<Result<_, _>>()?;
    let unfalsified = outcomes.iter().filter(|(ok, _)| *ok).count();
    let smallest_violating_shift = outcomes.iter().filter(|(ok, _)| !ok).map(|(_, s)| *s).reduce(f64::min);
    Ok(PerturbationReport {
        trials: config.trials,
        unfalsified,
        fraction_unfalsified: if config.trials == 0 {
            1.0
        } else {
            unfalsified as f64 / config.trials as f64
        },
        epsilon,
        eta,
        c1_hat: c1,
        smallest_violating_shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::convex_hull;
    use crate::scalar::big;

    fn map(text: &str) -> PolynomialMap {
        PolynomialMap::parse(text, 2).unwrap()
    }

    #[test]
    fn lattice_points_of_triangle() {
        let tri = convex_hull(&[vec![big(0), big(0)], vec![big(2), big(0)], vec![big(0), big(2)]]).unwrap();
        assert_eq!(integer_points(&tri).len(), 6);
        let seg = newton_polytope(&map("x1^6 + x2^4")).unwrap();
        assert_eq!(integer_points(&seg).len(), 3);
        let doubled = seg.scaled(&big(2)).unwrap();
        assert_eq!(integer_points(&doubled).len(), 5);
    }

    #[test]
    fn disk_survives_fixed_epsilon() {
        let config = ProbeConfig {
            trials: 20,
            epsilon: EpsilonChoice::Fixed(0.1),
            ..ProbeConfig::default()
        };
        let r = perturbation_probe(&map("x1^2 + x2^2"), &config).unwrap();
        assert_eq!(r.unfalsified, 20);
        assert_eq!(r.smallest_violating_shift, None);
    }

    #[test]
    fn auto_epsilon_follows_recipe() {
        let config = ProbeConfig {
            trials: 4,
            ..ProbeConfig::default()
        };
        let r = perturbation_probe(&map("x1^2 + x2^2"), &config).unwrap();
        // c1 = 1, 2Γ = conv{(4,0),(0,4)} has 5 integer points
        assert_eq!(r.eta, Some(5));
        assert!((r.epsilon - 0.1).abs() < 1e-9);
        assert_eq!(r.fraction_unfalsified, 1.0);
    }

    #[test]
    fn refuses_non_mg_and_large_epsilon() {
        let config = ProbeConfig {
            trials: 1,
            epsilon: EpsilonChoice::Fixed(0.1),
            ..ProbeConfig::default()
        };
        assert_eq!(perturbation_probe(&map("x1^2 - x2^2"), &config), Err(MgError::NotMg));
        let big_eps = ProbeConfig {
            epsilon: EpsilonChoice::Fixed(2.0),
            ..config
        };
        assert!(matches!(
            perturbation_probe(&map("x1^2 + x2^2"), &big_eps),
            Err(MgError::EpsilonOutOfRange { .. })
        ));
    }

    #[test]
    fn large_perturbation_can_break_mg() {
        // the edge form is barely definite (middle coefficient 1.9 < 2), so shifts
        // up to 0.9 may break it; any reported violation must respect epsilon
        let config = ProbeConfig {
            trials: 8,
            epsilon: EpsilonChoice::Fixed(0.9),
            ..ProbeConfig::default()
        };
        let r = perturbation_probe(&map("x1^2 + 19/10*x1*x2 + x2^2"), &config).unwrap();
        assert_eq!(r.trials, 8);
        if r.unfalsified < 8 {
            assert!(r.smallest_violating_shift.unwrap() <= 0.9);
        }
    }
}
