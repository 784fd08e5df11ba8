//! Empirical two-sided constants `c1 N_f(x) <= max_i |f_i(x)| <= c2 N_f(x)`.
//!
//! Points are drawn log-uniformly: a uniform sign pattern, `log|x_j|` uniform
//! in `[-T, T]`, keeping only `|x| > rho`. The extreme sampled ratios are then
//! polished by compass search over the same region. So the estimates bracket
//! fresh draws from that distribution, not just the original sample.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::search::{compass_search, CompiledSystem};
use super::{vertex_monomials, MgError};
use crate::geom::newton_polytope;
use crate::polynomial::PolynomialMap;

const CHUNK: usize = 4096;
const POLISH: usize = 8;
/// Stream offset separating hold-out draws from estimation draws.
const HOLDOUT_STREAM: u64 = 1 << 40;

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateConfig {
    pub samples: usize,
    pub rho: f64,
    /// Half-width of the log-coordinate sampling box.
    pub t_max: f64,
    pub seed: u64,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig {
            samples: 20_000,
            rho: 1.0,
            t_max: 8.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MgEstimate {
    pub c1_hat: f64,
    pub c2_hat: f64,
    pub rho: f64,
    pub t_max: f64,
    pub sample_count: usize,
}

impl MgEstimate {
    pub fn to_json(&self) -> Value {
        json!({
            "c1_hat": self.c1_hat,
            "c2_hat": self.c2_hat,
            "rho": self.rho,
            "t_max": self.t_max,
            "sample_count": self.sample_count,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HoldoutReport {
    pub samples: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Samples outside `[c1 (1 - tol), c2 (1 + tol)]`.
    pub violations: usize,
}

struct Sample {
    negative: Vec<bool>,
    t: Vec<f64>,
    ratio: f64,
}

fn outside_ball(t: &[f64], rho: f64) -> bool {
    t.iter().map(|v| (2.0 * v).exp()).sum::<f64>() > rho * rho
}

fn draw(rng: &mut ChaCha8Rng, n: usize, config: &EstimateConfig) -> (Vec<bool>, Vec<f64>) {
    loop {
        let negative: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let t: Vec<f64> = (0..n).map(|_| rng.gen_range(-config.t_max..=config.t_max)).collect();
        if outside_ball(&t, config.rho) {
            return (negative, t);
        }
    }
}

/// Draws `count` samples in fixed-size chunks with one RNG stream per chunk,
/// so the result does not depend on the thread count.
fn sample_ratios(
    system: &CompiledSystem,
    n: usize,
    config: &EstimateConfig,
    count: usize,
    stream_base: u64,
) -> Result<Vec<Sample>, MgError> {
    let chunks = count.div_ceil(CHUNK);
    let per_chunk: Vec<Vec<Sample>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(stream_base + c as u64);
            let size = CHUNK.min(count - c * CHUNK);
            let mut out = Vec::with_capacity(size);
            for _ in 0..size {
                let (negative, t) = draw(&mut rng, n, config);
                let ratio = system.ratio(&negative, &t);
                if !ratio.is_finite() {
                    return Err(MgError::ZeroNormaliser);
                }
                out.push(Sample { negative, t, ratio });
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    Ok(per_chunk.into_iter().flatten().collect())
}

fn compile(f: &PolynomialMap) -> Result<CompiledSystem, MgError> {
    let gamma = newton_polytope(f)?;
    Ok(CompiledSystem::new(f.components(), &vertex_monomials(&gamma)))
}

fn check_rho(config: &EstimateConfig, n: usize) -> Result<(), MgError> {
    if !(config.rho >= 0.0) || !outside_ball(&vec![config.t_max; n], config.rho) {
        return Err(MgError::RhoTooLarge { rho: config.rho });
    }
    Ok(())
}

/// Estimates `c1` (minimum) and `c2` (maximum) of `max_i |f_i| / N_f`.
pub fn estimate_constants(f: &PolynomialMap, config: &EstimateConfig) -> Result<MgEstimate, MgError> {
    let n = f.dim();
    check_rho(config, n)?;
    let system = compile(f)?;
    let mut samples = sample_ratios(&system, n, config, config.samples.max(1), 0)?;
    samples.sort_by(|a, b| a.ratio.total_cmp(&b.ratio));

    let restricted = |negative: &[bool], t: &[f64]| -> f64 {
        if outside_ball(t, config.rho) {
            system.ratio(negative, t)
        } else {
            f64::NAN
        }
    };
    let mut c1 = samples[0].ratio;
    let mut c2 = samples[samples.len() - 1].ratio;
    let lows = samples.iter().take(POLISH);
    let highs = samples.iter().rev().take(POLISH);
    for s in lows {
        let obj = |t: &[f64]| {
            let v = restricted(&s.negative, t);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        let out = compass_search(&obj, &s.t, config.t_max, (1.0, 1e-12), 20_000, f64::NEG_INFINITY);
        c1 = c1.min(out.value);
    }
    for s in highs {
        let obj = |t: &[f64]| {
            let v = restricted(&s.negative, t);
            if v.is_nan() {
                f64::INFINITY
            } else {
                -v
            }
        };
        let out = compass_search(&obj, &s.t, config.t_max, (1.0, 1e-12), 20_000, f64::NEG_INFINITY);
        c2 = c2.max(-out.value);
    }
    Ok(MgEstimate {
        c1_hat: c1,
        c2_hat: c2,
        rho: config.rho,
        t_max: config.t_max,
        sample_count: samples.len(),
    })
}

/// Draws fresh samples from the estimation distribution and counts ratios
/// outside the bracket `[c1 (1 - tolerance), c2 (1 + tolerance)]`.
pub fn holdout_check(
    f: &PolynomialMap,
    estimate: &MgEstimate,
    samples: usize,
    tolerance: f64,
    seed: u64,
) -> Result<HoldoutReport, MgError> {
    let n = f.dim();
    let config = EstimateConfig {
        samples,
        rho: estimate.rho,
        t_max: estimate.t_max,
        seed,
    };
    check_rho(&config, n)?;
    let system = compile(f)?;
    let drawn = sample_ratios(&system, n, &config, samples, HOLDOUT_STREAM)?;
    let lo = estimate.c1_hat * (1.0 - tolerance);
    let hi = estimate.c2_hat * (1.0 + tolerance);
    Ok(HoldoutReport {
        samples: drawn.len(),
        min_ratio: drawn.iter().map(|s| s.ratio).fold(f64::INFINITY, f64::min),
        max_ratio: drawn.iter().map(|s| s.ratio).fold(f64::NEG_INFINITY, f64::max),
        violations: drawn.iter().filter(|s| s.ratio < lo || s.ratio > hi).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(text: &str) -> PolynomialMap {
        PolynomialMap::parse(text, 2).unwrap()
    }

    #[test]
    fn disk_ratio_is_one() {
        let e = estimate_constants(&map("x1^2 + x2^2"), &EstimateConfig::default()).unwrap();
        assert!((e.c1_hat - 1.0).abs() < 1e-12 && (e.c2_hat - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_form_bracket() {
        let f = map("x1^2 + x1*x2 + x2^2");
        let e = estimate_constants(&f, &EstimateConfig::default()).unwrap();
        assert!(e.c1_hat >= 0.5 - 1e-12 && e.c1_hat < 0.5 + 1e-6, "{e:?}");
        assert!(e.c2_hat <= 1.5 + 1e-12 && e.c2_hat > 1.5 - 1e-6, "{e:?}");
        let h = holdout_check(&f, &e, 10_000, 1e-6, 99).unwrap();
        assert_eq!(h.violations, 0);
    }

    #[test]
    fn sextic_quartic() {
        let e = estimate_constants(&map("x1^6 + x2^4"), &EstimateConfig::default()).unwrap();
        assert!(e.c1_hat <= 1.0 + 1e-12 && (e.c2_hat - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rho_outside_box_is_rejected() {
        let config = EstimateConfig {
            rho: 1e9,
            ..EstimateConfig::default()
        };
        assert!(matches!(
            estimate_constants(&map("x1^2 + x2^2"), &config),
            Err(MgError::RhoTooLarge { .. })
        ));
    }
}
