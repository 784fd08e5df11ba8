//! Scalar traits shared by the exact and floating parts of the crate.
//!
//! Geometry and linear programming are written against [`Field`], an exact
//! ordered field. Anything `Ord` with signed field arithmetic qualifies, which
//! rules out `f32`/`f64` at compile time. The usual instantiation is
//! [`BigRational`]; `Ratio<i64>` and `Ratio<i128>` work too for small inputs.
//!
//! Empirical code (volume estimation, exponent fitting) is written against
//! [`Real`], i.e. `f32` or `f64`.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use nalgebra as na;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An exact ordered field.
pub trait Field:
    Clone + Debug + Display + Num + Signed + Ord + Hash + FromPrimitive + ToPrimitive + Send + Sync
{
    fn from_usize_exact(v: usize) -> Self {
        Self::from_usize(v).expect("integer out of range for scalar")
    }

    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("integer out of range for scalar")
    }
}

impl<T> Field for T where
    T: Clone + Debug + Display + Num + Signed + Ord + Hash + FromPrimitive + ToPrimitive + Send + Sync
{
}

/// Floating point types usable by the empirical modules.
pub trait Real:
    Copy + num_traits::Float + num_traits::FloatConst + FromPrimitive + na::RealField + Send + Sync
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Conversion from an exact rational coefficient into an evaluation domain.
pub trait FromRational: Sized {
    fn from_rational(q: &BigRational) -> Option<Self>;
}

impl FromRational for f64 {
    fn from_rational(q: &BigRational) -> Option<Self> {
        q.to_f64()
    }
}

impl FromRational for f32 {
    fn from_rational(q: &BigRational) -> Option<Self> {
        q.to_f32()
    }
}

impl FromRational for BigRational {
    fn from_rational(q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }
}

impl FromRational for Ratio<i64> {
    fn from_rational(q: &BigRational) -> Option<Self> {
        Some(Ratio::new(q.numer().to_i64()?, q.denom().to_i64()?))
    }
}

impl FromRational for Ratio<i128> {
    fn from_rational(q: &BigRational) -> Option<Self> {
        Some(Ratio::new(q.numer().to_i128()?, q.denom().to_i128()?))
    }
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Splits a ratio into numerator and denominator strings, denominator positive.
pub fn ratio_parts<I>(q: &Ratio<I>) -> (String, String)
where
    I: Integer + Clone + Display + Signed,
{
    let (mut n, mut d) = (q.numer().clone(), q.denom().clone());
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    (n.to_string(), d.to_string())
}

pub fn big(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact rank of a set of row vectors by Gaussian elimination.
pub fn rank<T: Field>(rows: &[Vec<T>]) -> usize {
    row_echelon(rows.to_vec()).len()
}

/// Reduced row echelon basis of the row space (nonzero rows only).
pub fn row_echelon<T: Field>(mut m: Vec<Vec<T>>) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(p) = (pivot_row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, p);
        let inv = T::one() / m[pivot_row][col].clone();
        for v in m[pivot_row].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != pivot_row && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in col..cols {
                    let delta = factor.clone() * m[pivot_row][j].clone();
                    m[i][j] = m[i][j].clone() - delta;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == m.len() {
            break;
        }
    }
    m.truncate(pivot_row);
    m
}

/// Basis of the null space {x : row·x = 0 for every row}.
pub fn null_space<T: Field>(rows: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    let rref = row_echelon(rows.to_vec());
    let mut pivots = Vec::new();
    for r in &rref {
        if let Some(c) = r.iter().position(|v| !v.is_zero()) {
            pivots.push(c);
        }
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![T::zero(); cols];
        v[free] = T::one();
        for (r, &pc) in rref.iter().zip(&pivots) {
            v[pc] = -r[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves a square system exactly; `None` if singular.
pub fn solve_square<T: Field>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = b.len();
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        let inv = T::one() / m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in col..=n {
                    let delta = factor.clone() * m[col][j].clone();
                    m[i][j] = m[i][j].clone() - delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

pub fn dot<T: Field>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Scales a nonzero vector so that its first nonzero entry has absolute value one.
pub fn normalize_direction<T: Field>(v: &mut [T]) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
        if !lead.is_one() {
            for x in v.iter_mut() {
                *x = x.clone() / lead.clone();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn rank_and_null_space() {
        let rows = vec![
            vec![big(1), big(2), big(3)],
            vec![big(2), big(4), big(6)],
            vec![big(0), big(1), big(1)],
        ];
        assert_eq!(rank(&rows), 2);
        let ns = null_space(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert!(dot(r, &ns[0]).is_zero());
        }
    }

    #[test]
    fn solve_square_small_ratio() {
        let a = vec![
            vec![Ratio::<i64>::from_integer(2), Ratio::from_integer(1)],
            vec![Ratio::from_integer(1), Ratio::from_integer(2)],
        ];
        let b = vec![Ratio::from_integer(1), Ratio::from_integer(1)];
        let x = solve_square(&a, &b).unwrap();
        assert_eq!(x, vec![Ratio::new(1, 3), Ratio::new(1, 3)]);
    }

    #[test]
    fn float_conversions() {
        let q = frac(5, 12);
        assert!((f64::from_rational(&q).unwrap() - 5.0 / 12.0).abs() < 1e-15);
        assert_eq!(rational_from_f64(0.25).unwrap(), frac(1, 4));
        assert_eq!(ratio_parts(&frac(-3, 6)), ("-1".to_string(), "2".to_string()));
    }
}
