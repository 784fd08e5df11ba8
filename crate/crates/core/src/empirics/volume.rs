//! Volume of a sublevel set `G^f(r)` by grid integration or Monte Carlo.
//!
//! Both methods integrate over an axis-aligned box `prod [-B_j, B_j]`. Each
//! half-width starts at 1 and doubles until the boundary slab
//! `7B_j/8 <= |x_j| <= B_j` holds no sample node of the set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::EmpiricsError;
use crate::asym::volume_profile;
use crate::polynomial::PolynomialMap;

/// Upper limit on a box half-width before the shape counts as unsupported.
pub const MAX_EXTENT: f64 = (1u64 << 24) as f64;
/// Samples drawn per RNG stream in Monte Carlo.
const CHUNK: usize = 4096;
/// Total node budget for one slab test.
const SHELL_NODES: f64 = 65_536.0;
const SHELL_LAYERS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VolumeMethod {
    /// Midpoint rule with `resolution` cells per axis.
    Grid { resolution: usize },
    /// Uniform sampling of the box.
    MonteCarlo { samples: usize },
}

impl VolumeMethod {
    pub fn name(&self) -> &'static str {
        match self {
            VolumeMethod::Grid { .. } => "GRID",
            VolumeMethod::MonteCarlo { .. } => "MONTE_CARLO",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeEstimate {
    pub estimate: f64,
    /// Binomial standard error (Monte Carlo). For the grid this is the
    /// difference from the half-resolution grid.
    pub stderr: f64,
    /// Half-widths of the integration box.
    pub extents: Vec<f64>,
}

impl VolumeEstimate {
    pub fn to_json(&self) -> Value {
        json!({"estimate": self.estimate, "stderr": self.stderr, "extents": self.extents})
    }
}

/// Floating-point evaluator for the test `max_i |f_i(x)| <= r`.
pub(crate) struct FloatSystem {
    components: Vec<Vec<(f64, Vec<i32>)>>,
}

impl FloatSystem {
    pub(crate) fn new(f: &PolynomialMap) -> Self {
        use num_traits::ToPrimitive;
        let components = f
            .components()
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(m, c)| {
                        (
                            c.to_f64().unwrap_or(f64::NAN),
                            m.exponents().iter().map(|&e| e as i32).collect(),
                        )
                    })
                    .collect()
            })
            .collect();
        FloatSystem { components }
    }

    pub(crate) fn contains(&self, x: &[f64], r: f64) -> bool {
        self.components.iter().all(|comp| {
            let v: f64 = comp
                .iter()
                .map(|(c, e)| e.iter().zip(x).fold(*c, |acc, (&k, &xj)| acc * xj.powi(k)))
                .sum();
            v.abs() <= r
        })
    }
}

/// Midpoint of cell `i` of `cells` equal cells on `[-b, b]`.
fn midpoint(i: usize, cells: usize, b: f64) -> f64 {
    -b + (i as f64 + 0.5) * (2.0 * b / cells as f64)
}

/// Whether some slab node on axis `axis` lies in the set.
fn slab_occupied(system: &FloatSystem, r: f64, extents: &[f64], axis: usize) -> bool {
    let n = extents.len();
    let per_axis = if n == 1 {
        1
    } else {
        (SHELL_NODES.powf(1.0 / (n - 1) as f64) as usize).max(4)
    };
    let others = per_axis.pow((n - 1) as u32);
    (0..2 * SHELL_LAYERS).into_par_iter().any(|layer| {
        let sign = if layer % 2 == 0 { 1.0 } else { -1.0 };
        let depth = (layer / 2) as f64 + 0.5;
        let along = sign * extents[axis] * (1.0 - depth / (8.0 * SHELL_LAYERS as f64));
        let mut x = vec![0.0; n];
        (0..others).any(|index| {
            let mut rest = index;
            for (j, slot) in x.iter_mut().enumerate() {
                if j == axis {
                    *slot = along;
                } else {
                    *slot = midpoint(rest % per_axis, per_axis, extents[j]);
                    rest /= per_axis;
                }
            }
            system.contains(&x, r)
        })
    })
}

/// Grows the box axis by axis until every boundary slab is empty.
fn enclosing_box(system: &FloatSystem, r: f64, n: usize) -> Result<Vec<f64>, EmpiricsError> {
    let mut extents = vec![1.0; n];
    loop {
        let mut grew = false;
        for axis in 0..n {
            while slab_occupied(system, r, &extents, axis) {
                extents[axis] *= 2.0;
                grew = true;
                if extents[axis] > MAX_EXTENT {
                    return Err(EmpiricsError::UnsupportedShape {
                        axis,
                        extent: extents[axis],
                    });
                }
            }
        }
        if !grew {
            return Ok(extents);
        }
    }
}

fn grid_count(system: &FloatSystem, r: f64, extents: &[f64], cells: usize) -> u64 {
    let n = extents.len();
    let rest_cells = cells.pow((n - 1) as u32);
    (0..cells)
        .into_par_iter()
        .map(|first| {
            let mut x = vec![0.0; n];
            x[0] = midpoint(first, cells, extents[0]);
            (0..rest_cells)
                .filter(|&index| {
                    let mut rest = index;
                    for j in 1..n {
                        x[j] = midpoint(rest % cells, cells, extents[j]);
                        rest /= cells;
                    }
                    system.contains(&x, r)
                })
                .count() as u64
        })
        .sum()
}

fn monte_carlo_count(
    system: &FloatSystem,
    r: f64,
    extents: &[f64],
    samples: usize,
    seed: u64,
    stream_base: u64,
) -> u64 {
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream_base + c as u64);
            let size = CHUNK.min(samples - c * CHUNK);
            let mut x = vec![0.0; extents.len()];
            let mut hits = 0u64;
            for _ in 0..size {
                for (slot, b) in x.iter_mut().zip(extents) {
                    *slot = rng.gen_range(-*b..*b);
                }
                if system.contains(&x, r) {
                    hits += 1;
                }
            }
            hits
        })
        .sum()
}

pub(crate) fn estimate_volume_stream(
    f: &PolynomialMap,
    r: f64,
    method: VolumeMethod,
    seed: u64,
    stream_base: u64,
) -> Result<VolumeEstimate, EmpiricsError> {
    let (finite, _) = volume_profile(f)?;
    if !finite {
        return Err(EmpiricsError::InfiniteVolume);
    }
    if !r.is_finite() {
        return Err(EmpiricsError::InvalidLevel(r));
    }
    let n = f.dim();
    if r <= 0.0 {
        // a nonzero polynomial vanishes on a null set
        return Ok(VolumeEstimate {
            estimate: 0.0,
            stderr: 0.0,
            extents: vec![0.0; n],
        });
    }
    let system = FloatSystem::new(f);
    let extents = enclosing_box(&system, r, n)?;
    let box_volume: f64 = extents.iter().map(|b| 2.0 * b).product();
    let (estimate, stderr) = match method {
        VolumeMethod::Grid { resolution } => {
            if resolution < 2 {
                return Err(EmpiricsError::InvalidBudget(
                    "grid resolution must be at least 2".into(),
                ));
            }
            let fine = grid_count(&system, r, &extents, resolution) as f64 / (resolution as f64).powi(n as i32);
            let coarse =
                grid_count(&system, r, &extents, resolution / 2) as f64 / ((resolution / 2) as f64).powi(n as i32);
            (box_volume * fine, box_volume * (fine - coarse).abs())
        }
        VolumeMethod::MonteCarlo { samples } => {
            if samples == 0 {
                return Err(EmpiricsError::InvalidBudget("sample count must be positive".into()));
            }
            let hits = monte_carlo_count(&system, r, &extents, samples, seed, stream_base);
            let p = hits as f64 / samples as f64;
            (box_volume * p, box_volume * (p * (1.0 - p) / samples as f64).sqrt())
        }
    };
    Ok(VolumeEstimate {
        estimate,
        stderr,
        extents,
    })
}

/// Estimates `|G^f(r)|`. Deterministic for a fixed seed, whatever the thread count.
pub fn estimate_volume(
    f: &PolynomialMap,
    r: f64,
    method: VolumeMethod,
    seed: u64,
) -> Result<VolumeEstimate, EmpiricsError> {
    estimate_volume_stream(f, r, method, seed, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn map(text: &str) -> PolynomialMap {
        PolynomialMap::parse(text, 2).unwrap()
    }

    /// `4 * int_0^a (r - u^6)^(1/4) du` with `a = r^(1/6)`, by composite Simpson
    /// after the substitution `u = a (1 - s^2)`, which removes the endpoint
    /// singularity.
    fn sextic_quartic_oracle(r: f64) -> f64 {
        let a = r.powf(1.0 / 6.0);
        let g = |s: f64| {
            let u = a * (1.0 - s * s);
            (r - u.powi(6)).max(0.0).powf(0.25) * 2.0 * a * s
        };
        let panels = 200_000;
        let h = 1.0 / panels as f64;
        let mut sum = g(0.0) + g(1.0);
        for i in 1..panels {
            sum += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        4.0 * sum * h / 3.0
    }

    #[test]
    fn disk_area() {
        let v = estimate_volume(&map("x1^2 + x2^2"), 100.0, VolumeMethod::Grid { resolution: 800 }, 0).unwrap();
        assert!((v.estimate - PI * 100.0).abs() / (PI * 100.0) < 2e-3, "{v:?}");
        assert_eq!(v.extents, vec![16.0, 16.0]);
    }

    #[test]
    fn sextic_quartic_against_quadrature() {
        let exact = sextic_quartic_oracle(1.0);
        let v = estimate_volume(&map("x1^6 + x2^4"), 1.0, VolumeMethod::Grid { resolution: 1000 }, 0).unwrap();
        assert!((v.estimate - exact).abs() / exact < 5e-3, "{} vs {exact}", v.estimate);
    }

    #[test]
    fn zero_level_and_refusals() {
        let v = estimate_volume(&map("x1^2 + x2^2"), 0.0, VolumeMethod::Grid { resolution: 8 }, 0).unwrap();
        assert_eq!(v.estimate, 0.0);
        assert_eq!(
            estimate_volume(&map("x1*x2"), 1.0, VolumeMethod::Grid { resolution: 8 }, 0),
            Err(EmpiricsError::InfiniteVolume)
        );
        assert!(matches!(
            estimate_volume(&map("x1^2 + x2^2"), 1.0, VolumeMethod::MonteCarlo { samples: 0 }, 0),
            Err(EmpiricsError::InvalidBudget(_))
        ));
    }

    #[test]
    fn grid_and_monte_carlo_agree() {
        for (text, r) in [
            ("x1^2 + x2^2", 50.0),
            ("x1^6 + x2^4", 30.0),
            ("x1^2 + x1*x2 + x2^2", 10.0),
        ] {
            let f = map(text);
            let g = estimate_volume(&f, r, VolumeMethod::Grid { resolution: 600 }, 0).unwrap();
            let m = estimate_volume(&f, r, VolumeMethod::MonteCarlo { samples: 200_000 }, 7).unwrap();
            let combined = (g.stderr.powi(2) + m.stderr.powi(2)).sqrt();
            assert!((g.estimate - m.estimate).abs() <= 3.0 * combined, "{text}: {g:?} {m:?}");
        }
    }

    #[test]
    fn monte_carlo_is_seed_deterministic() {
        let f = map("x1^6 + x2^4");
        let a = estimate_volume(&f, 100.0, VolumeMethod::MonteCarlo { samples: 10_000 }, 3).unwrap();
        let b = estimate_volume(&f, 100.0, VolumeMethod::MonteCarlo { samples: 10_000 }, 3).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        let c = estimate_volume(&f, 100.0, VolumeMethod::MonteCarlo { samples: 10_000 }, 4).unwrap();
        assert_ne!(a.estimate.to_bits(), c.estimate.to_bits());
    }

    #[test]
    fn three_dimensional_ball() {
        let f = PolynomialMap::parse("x1^2 + x2^2 + x3^2", 3).unwrap();
        let v = estimate_volume(&f, 4.0, VolumeMethod::Grid { resolution: 120 }, 0).unwrap();
        let exact = 4.0 / 3.0 * PI * 8.0;
        assert!((v.estimate - exact).abs() / exact < 1e-2, "{v:?}");
    }
}
