//! Double description: extreme rays of a pointed cone {y : <g_i, y> <= 0}.

use crate::scalar::{dot, normalize_direction, row_echelon, solve_square, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray<T> {
    v: Vec<T>,
    zeros: Bits,
}

/// Extreme rays of {y in R^d : <g, y> <= 0 for every row g}.
///
/// Returns `None` when the rows do not have rank `d` (the cone is not pointed).
/// Rays are scaled so their first nonzero entry is +-1; order is deterministic.
pub(crate) fn extreme_rays<T: Field>(rows: &[Vec<T>], d: usize) -> Option<Vec<Vec<T>>> {
    let m = rows.len();
    // greedy choice of d independent rows, in input order
    let mut chosen: Vec<usize> = Vec::with_capacity(d);
    let mut basis: Vec<Vec<T>> = Vec::new();
    for (i, g) in rows.iter().enumerate() {
        let mut trial = basis.clone();
        trial.push(g.clone());
        if row_echelon(trial.clone()).len() == trial.len() {
            basis = trial;
            chosen.push(i);
            if chosen.len() == d {
                break;
            }
        }
    }
    if chosen.len() < d {
        return None;
    }

    // initial rays: columns of -R^{-1}
    let mut rays: Vec<Ray<T>> = Vec::with_capacity(d);
    for k in 0..d {
        let mut rhs = vec![T::zero(); d];
        rhs[k] = -T::one();
        let mut v = solve_square(&basis, &rhs)?;
        normalize_direction(&mut v);
        let mut zeros = Bits::new(m);
        for (kk, &i) in chosen.iter().enumerate() {
            if kk != k {
                zeros.set(i);
            }
        }
        rays.push(Ray { v, zeros });
    }

    for (i, g) in rows.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let values: Vec<T> = rays.iter().map(|r| dot(g, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_negative()).collect();
        for (k, r) in rays.iter_mut().enumerate() {
            if values[k].is_zero() {
                r.zeros.set(i);
            }
        }
        if pos.is_empty() {
            continue;
        }
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() + 2 < d {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .filter(|&k| k != p && k != q)
                    .all(|k| !common.is_subset_of(&rays[k].zeros));
                if !adjacent {
                    continue;
                }
                let sp = values[p].clone();
                let sq = values[q].clone();
                let mut v: Vec<T> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(a, b)| sp.clone() * a.clone() - sq.clone() * b.clone())
                    .collect();
                normalize_direction(&mut v);
                let mut zeros = common;
                zeros.set(i);
                fresh.push(Ray { v, zeros });
            }
        }
        let mut keep: Vec<Ray<T>> = rays
            .into_iter()
            .zip(&values)
            .filter(|(_, s)| !s.is_positive())
            .map(|(r, _)| r)
            .collect();
        keep.extend(fresh);
        rays = keep;
    }

    let mut out: Vec<Vec<T>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::big;
    use num_traits::Signed;

    #[test]
    fn positive_quadrant() {
        // {y : -y1 <= 0, -y2 <= 0, -y1 - y2 <= 0}
        let rows = vec![vec![big(-1), big(0)], vec![big(0), big(-1)], vec![big(-1), big(-1)]];
        let rays = extreme_rays(&rows, 2).unwrap();
        assert_eq!(rays, vec![vec![big(0), big(1)], vec![big(1), big(0)]]);
    }

    #[test]
    fn square_pyramid() {
        // cone over the square [-1,1]^2 at height 1: |y1| <= y3, |y2| <= y3
        let rows = vec![
            vec![big(1), big(0), big(-1)],
            vec![big(-1), big(0), big(-1)],
            vec![big(0), big(1), big(-1)],
            vec![big(0), big(-1), big(-1)],
        ];
        let rays = extreme_rays(&rows, 3).unwrap();
        assert_eq!(rays.len(), 4);
        for r in &rays {
            assert_eq!(r[0].clone().abs(), big(1));
            assert_eq!(r[1].clone().abs(), big(1));
        }
    }

    #[test]
    fn not_pointed() {
        let rows = vec![vec![big(1), big(0)]];
        assert!(extreme_rays(&rows, 2).is_none());
    }
}
