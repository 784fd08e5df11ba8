//! Floating-point machinery for the MG search: scale-free evaluation in log
//! coordinates, compass search, Halton starts and rational rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::polynomial::Polynomial;
use crate::scalar::rational_from_f64;

struct Term {
    coef: f64,
    exps: Vec<f64>,
    odd: Vec<bool>,
}

/// A polynomial system with a monomial normaliser, evaluated as
/// `max_i |p_i(x)| / sum_alpha |x^alpha|` at `x_j = s_j exp(t_j)`.
///
/// Every monomial is scaled by `exp(-L)`, where `L` is the largest log-magnitude
/// present. So the ratio is computed without overflow for any `t`.
pub(crate) struct CompiledSystem {
    components: Vec<Vec<Term>>,
    normaliser: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl CompiledSystem {
    pub(crate) fn new(components: &[Polynomial], normaliser: &[Vec<u32>]) -> Self {
        let components = components
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(m, c)| Term {
                        coef: c.to_f64().unwrap_or(f64::NAN),
                        exps: m.exponents().iter().map(|&e| e as f64).collect(),
                        odd: m.exponents().iter().map(|&e| e % 2 == 1).collect(),
                    })
                    .collect()
            })
            .collect();
        let normaliser = normaliser
            .iter()
            .map(|a| a.iter().map(|&e| e as f64).collect())
            .collect();
        CompiledSystem { components, normaliser }
    }

    /// The scale-free ratio; `signs[j]` is `true` for a negative coordinate.
    pub(crate) fn ratio(&self, negative: &[bool], t: &[f64]) -> f64 {
        let mut top = f64::NEG_INFINITY;
        for comp in &self.components {
            for term in comp {
                top = top.max(dot(&term.exps, t));
            }
        }
        for a in &self.normaliser {
            top = top.max(dot(a, t));
        }
        let norm: f64 = self.normaliser.iter().map(|a| (dot(a, t) - top).exp()).sum();
        let mut worst = 0.0f64;
        for comp in &self.components {
            let mut sum = 0.0;
            let mut comp_err = 0.0;
            for term in comp {
                let flips = term.odd.iter().zip(negative).filter(|(o, s)| **o && **s).count();
                let sign = if flips % 2 == 1 { -1.0 } else { 1.0 };
                let v = sign * term.coef * (dot(&term.exps, t) - top).exp();
                // Neumaier compensation keeps near-cancellations honest
                let s = sum + v;
                comp_err += if f64::abs(sum) >= f64::abs(v) {
                    (sum - s) + v
                } else {
                    (v - s) + sum
                };
                sum = s;
            }
            worst = worst.max((sum + comp_err).abs());
        }
        worst / norm
    }

    /// The ratio at a point with no zero coordinate.
    #[cfg(test)]
    pub(crate) fn ratio_at(&self, x: &[f64]) -> f64 {
        let negative: Vec<bool> = x.iter().map(|v| *v < 0.0).collect();
        let t: Vec<f64> = x.iter().map(|v| v.abs().ln()).collect();
        self.ratio(&negative, &t)
    }
}

pub(crate) struct SearchOutcome {
    pub t: Vec<f64>,
    pub value: f64,
    pub evals: u64,
}

/// Compass search minimizing `objective` over the box `[-bound, bound]^n`;
/// stops early once the value reaches `stop_at`.
pub(crate) fn compass_search(
    objective: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    bound: f64,
    (initial_step, min_step): (f64, f64),
    max_evals: u64,
    stop_at: f64,
) -> SearchOutcome {
    let mut t = start.to_vec();
    let mut best = objective(&t);
    let mut evals = 1u64;
    let mut step = initial_step;
    while step >= min_step && evals < max_evals && best > stop_at {
        let mut improved = false;
        'dirs: for j in 0..t.len() {
            for dir in [1.0, -1.0] {
                let mut cand = t.clone();
                cand[j] = (cand[j] + dir * step).clamp(-bound, bound);
                if cand[j] == t[j] {
                    continue;
                }
                let v = objective(&cand);
                evals += 1;
                if v < best {
                    best = v;
                    t = cand;
                    improved = true;
                    break 'dirs;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    SearchOutcome { t, value: best, evals }
}

const PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Point `index` of the Halton sequence in `[0, 1)^dim`.
pub(crate) fn halton(index: u64, dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|j| {
            let base = PRIMES[j % PRIMES.len()] as u64;
            let mut f = 1.0;
            let mut r = 0.0;
            let mut i = index;
            while i > 0 {
                f /= base as f64;
                r += f * (i % base) as f64;
                i /= base;
            }
            r
        })
        .collect()
}

/// Best rational approximation with denominator at most `max_den`
/// (continued fractions); `None` for non-finite input.
pub(crate) fn approximate(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let exact = rational_from_f64(x)?;
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::from(1), BigInt::from(1), BigInt::zero());
    let mut rest = exact.clone();
    let limit = BigInt::from(max_den);
    loop {
        let a = rest.floor().to_integer();
        let q2 = &a * &q1 + &q0;
        if q2 > limit {
            break;
        }
        let p2 = &a * &p1 + &p0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = rest.clone() - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    if q1.is_zero() {
        return Some(BigRational::from_integer(exact.round().to_integer()));
    }
    Some(BigRational::new(p1, q1))
}

/// Rational point near `x`, or `None` if a coordinate rounds to zero.
pub(crate) fn rational_point(x: &[f64], max_den: u64) -> Option<Vec<BigRational>> {
    let p: Vec<BigRational> = x.iter().map(|&v| approximate(v, max_den)).collect::<Option<_>>()?;
    if p.iter().any(|v| v.is_zero()) {
        return None;
    }
    // keep the orthant: rounding must not flip a sign
    if p.iter().zip(x).any(|(q, v)| q.is_negative() != (*v < 0.0)) {
        return None;
    }
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::Polynomial;
    use crate::scalar::frac;

    #[test]
    fn ratio_is_scale_free() {
        let p = Polynomial::parse("x1^2 + x1*x2 + x2^2", 2).unwrap();
        let sys = CompiledSystem::new(&[p], &[vec![2, 0], vec![0, 2]]);
        // at a = -b the ratio is 1/2, at a = b it is 3/2, for any magnitude
        for t in [0.0, 30.0, -30.0, 400.0] {
            assert!((sys.ratio(&[false, true], &[t, t]) - 0.5).abs() < 1e-12);
            assert!((sys.ratio(&[false, false], &[t, t]) - 1.5).abs() < 1e-12);
        }
        assert!((sys.ratio_at(&[2.0, 1.0]) - 7.0 / 5.0).abs() < 1e-12);
    }

    #[test]
    fn compass_finds_valley() {
        let obj = |t: &[f64]| (t[0] - 1.0).abs() + (t[1] + 2.0).powi(2);
        let out = compass_search(&obj, &[0.0, 0.0], 12.0, (1.0, 1e-12), 10_000, 0.0);
        assert!(out.value < 1e-9);
        assert!((out.t[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn halton_points() {
        assert_eq!(halton(1, 2), vec![0.5, 1.0 / 3.0]);
        assert_eq!(halton(2, 1), vec![0.25]);
    }

    #[test]
    fn rational_rounding() {
        assert_eq!(approximate(0.333333333, 100), Some(frac(1, 3)));
        assert_eq!(approximate(-2.5, 10), Some(frac(-5, 2)));
        assert_eq!(approximate(1e-9, 10), Some(frac(0, 1)));
        assert!(rational_point(&[1e-9, 1.0], 10).is_none());
        assert_eq!(
            rational_point(&[1.0000000001, -1.0], 1000),
            Some(vec![frac(1, 1), frac(-1, 1)])
        );
    }
}
