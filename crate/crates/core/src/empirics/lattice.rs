//! Exact counting of the nonzero-coordinate integer points of a sublevel set.
//!
//! Each component is scaled to integer coefficients, `g_i = L_i f_i`. The
//! test `|f_i(x)| <= r` then becomes `|g_i(x)| <= floor(L_i r)`, which is
//! exact. Points are counted line by line along the last coordinate. Each
//! line is a univariate polynomial in the last coordinate. Integer intervals
//! on which the predicate is provably constant are counted in one step. The
//! proof is a Taylor expansion at the interval midpoint, which bounds the
//! range of every component. Arithmetic is checked `i128`, with `BigInt` as
//! the fallback on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive};
use rayon::prelude::*;

use super::EmpiricsError;
use crate::asym::lattice_profile;
use crate::polynomial::PolynomialMap;
use crate::scalar::rational_from_f64;

/// Exact ring arithmetic with overflow detection.
trait Exact: Clone + Ord + Signed + CheckedAdd + CheckedSub + CheckedMul + From<i64> {
    fn from_big(v: &BigInt) -> Option<Self>;
}

impl Exact for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
}

impl Exact for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
}

/// Result of an exact count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCount {
    pub count: u64,
    /// Counts per orthant, indexed by the bit mask of negative coordinates.
    pub per_orthant: Vec<u64>,
    /// Half-width of the final enumeration box.
    pub box_half_width: i64,
}

/// One component scaled to integer coefficients, with its integer bound.
struct IntegerComponent {
    terms: Vec<(Vec<u32>, BigInt)>,
    bound: BigInt,
}

pub(crate) struct IntegerSystem {
    n: usize,
    components: Vec<IntegerComponent>,
}

impl IntegerSystem {
    /// `None` when `r < 0` (the sublevel set is empty).
    pub(crate) fn new(f: &PolynomialMap, r: f64) -> Result<Option<Self>, EmpiricsError> {
        let r_exact = rational_from_f64(r).ok_or(EmpiricsError::InvalidLevel(r))?;
        if r_exact.is_negative() {
            return Ok(None);
        }
        let components = f
            .components()
            .iter()
            .map(|p| {
                let scale = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
                let terms = p
                    .terms()
                    .map(|(m, c)| {
                        let scaled = c * BigRational::from_integer(scale.clone());
                        (m.exponents().to_vec(), scaled.to_integer())
                    })
                    .collect();
                let bound = (r_exact.clone() * BigRational::from_integer(scale))
                    .floor()
                    .to_integer();
                IntegerComponent { terms, bound }
            })
            .collect();
        Ok(Some(IntegerSystem { n: f.dim(), components }))
    }

    /// Exact membership test for one point.
    #[cfg(test)]
    pub(crate) fn contains(&self, x: &[i64]) -> bool {
        self.components.iter().all(|c| {
            let value: BigInt = c
                .terms
                .iter()
                .map(|(e, coef)| {
                    e.iter()
                        .zip(x)
                        .fold(coef.clone(), |acc, (&k, &v)| acc * BigInt::from(v).pow(k))
                })
                .sum();
            value.abs() <= c.bound
        })
    }

    /// Univariate coefficients (low to high) in the magnitude `t` of the last
    /// coordinate, whose sign is `last_sign`.
    fn line<T: Exact>(&self, prefix: &[i64], last_sign: i64) -> Option<Vec<(Vec<T>, T)>> {
        let last = self.n - 1;
        self.components
            .iter()
            .map(|c| {
                let degree = c.terms.iter().map(|(e, _)| e[last]).max().unwrap_or(0) as usize;
                let mut coeffs = vec![T::from(0); degree + 1];
                for (e, coef) in &c.terms {
                    let mut v = T::from_big(coef)?;
                    for (&k, &x) in e[..last].iter().zip(prefix) {
                        for _ in 0..k {
                            v = v.checked_mul(&T::from(x))?;
                        }
                    }
                    if e[last] % 2 == 1 && last_sign < 0 {
                        v = -v;
                    }
                    let slot = &mut coeffs[e[last] as usize];
                    *slot = slot.checked_add(&v)?;
                }
                Some((coeffs, T::from_big(&c.bound)?))
            })
            .collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Block {
    Inside,
    Outside,
    Unknown,
}

/// Taylor coefficients of `p` at `c`: `p(c + h) = sum_k q_k h^k`.
fn taylor_shift<T: Exact>(p: &[T], c: &T) -> Option<Vec<T>> {
    let mut q = p.to_vec();
    let d = q.len().saturating_sub(1);
    for i in 0..d {
        for k in (i..d).rev() {
            q[k] = q[k].checked_add(&c.checked_mul(&q[k + 1])?)?;
        }
    }
    Some(q)
}

fn classify<T: Exact>(poly: &[T], bound: &T, lo: i64, hi: i64) -> Option<Block> {
    let c = lo + (hi - lo) / 2;
    let w = T::from((hi - c).max(c - lo));
    let q = taylor_shift(poly, &T::from(c))?;
    let mut spread = T::from(0);
    let mut wk = T::from(1);
    for coef in &q[1..] {
        wk = wk.checked_mul(&w)?;
        spread = spread.checked_add(&coef.abs().checked_mul(&wk)?)?;
    }
    let centre = &q[0];
    if centre.abs().checked_add(&spread)? <= *bound {
        Some(Block::Inside)
    } else if centre.checked_sub(&spread)? > *bound || centre.checked_add(&spread)? < -bound.clone() {
        Some(Block::Outside)
    } else {
        Some(Block::Unknown)
    }
}

/// Maximal inside intervals of `t` in `[lo, hi]`; `None` on overflow.
fn inside_blocks<T: Exact>(line: &[(Vec<T>, T)], lo: i64, hi: i64) -> Option<Vec<(i64, i64)>> {
    let mut out = Vec::new();
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        let mut verdict = Block::Inside;
        for (poly, bound) in line {
            match classify(poly, bound, a, b)? {
                Block::Outside => {
                    verdict = Block::Outside;
                    break;
                }
                Block::Unknown => verdict = Block::Unknown,
                Block::Inside => {}
            }
        }
        match verdict {
            Block::Inside => out.push((a, b)),
            Block::Outside => {}
            Block::Unknown => {
                // a == b is always decided, so the split is proper
                let mid = a + (b - a) / 2;
                stack.push((mid + 1, b));
                stack.push((a, mid));
            }
        }
    }
    Some(out)
}

fn line_blocks(system: &IntegerSystem, prefix: &[i64], last_sign: i64, hi: i64) -> Vec<(i64, i64)> {
    system
        .line::<i128>(prefix, last_sign)
        .and_then(|line| inside_blocks(&line, 1, hi))
        .unwrap_or_else(|| {
            let line = system
                .line::<BigInt>(prefix, last_sign)
                .expect("BigInt arithmetic cannot overflow");
            inside_blocks(&line, 1, hi).expect("BigInt arithmetic cannot overflow")
        })
}

/// Per-orthant counts in `[-b, b]^n` and in the inner box `[-inner, inner]^n`.
pub(crate) fn count_boxes(system: &IntegerSystem, b: i64, inner: i64) -> (Vec<u64>, Vec<u64>) {
    let n = system.n;
    let width = b as u64;
    let lines = width.pow((n - 1) as u32);
    let per: Vec<(u64, u64)> = (0..1u32 << n)
        .map(|mask| {
            let signs: Vec<i64> = (0..n).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect();
            (0..lines)
                .into_par_iter()
                .map(|index| {
                    let mut rest = index;
                    let mut prefix = Vec::with_capacity(n - 1);
                    let mut magnitude_max = 0;
                    for sign in &signs[..n - 1] {
                        let y = (rest % width) as i64 + 1;
                        rest /= width;
                        magnitude_max = magnitude_max.max(y);
                        prefix.push(sign * y);
                    }
                    let blocks = line_blocks(system, &prefix, signs[n - 1], b);
                    let total: u64 = blocks.iter().map(|(a, z)| (z - a + 1) as u64).sum();
                    let inside_inner = if magnitude_max <= inner {
                        blocks
                            .iter()
                            .filter(|(a, _)| *a <= inner)
                            .map(|(a, z)| ((*z).min(inner) - a + 1) as u64)
                            .sum()
                    } else {
                        0
                    };
                    (total, inside_inner)
                })
                .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1))
        })
        .collect();
    (per.iter().map(|p| p.0).collect(), per.iter().map(|p| p.1).collect())
}

/// Exact number of points of `Z^f(r)`: integer points with all coordinates
/// nonzero and `max_i |f_i(x)| <= r`.
///
/// The box `[-B, B]^n` doubles from `B = 1` until its boundary shell, of
/// thickness `max(1, B/8)`, holds no member. Exceeding `max_box` yields
/// [`EmpiricsError::NonTerminated`] with the partial count.
pub fn count_lattice(f: &PolynomialMap, r: f64, max_box: i64) -> Result<LatticeCount, EmpiricsError> {
    let (finite, _) = lattice_profile(f)?;
    if !finite {
        return Err(EmpiricsError::InfiniteCount);
    }
    let n = f.dim();
    let Some(system) = IntegerSystem::new(f, r)? else {
        return Ok(LatticeCount {
            count: 0,
            per_orthant: vec![0; 1 << n],
            box_half_width: 0,
        });
    };
    let mut b: i64 = 1;
    loop {
        let thickness = (b / 8).max(1);
        let (outer, inner) = count_boxes(&system, b, b - thickness);
        let total: u64 = outer.iter().sum();
        if outer == inner {
            return Ok(LatticeCount {
                count: total,
                per_orthant: outer,
                box_half_width: b,
            });
        }
        if b.saturating_mul(2) > max_box {
            return Err(EmpiricsError::NonTerminated {
                partial: total,
                box_half_width: b,
            });
        }
        b *= 2;
    }
}
