//! Exact linear programming over an ordered field.
//!
//! Dense two-phase primal simplex with Bland's rule. Every optimal answer
//! carries a dual certificate that is checked by direct arithmetic before it
//! is returned, and every unbounded answer carries an improving feasible ray.
//!
//! The optimal face is described without reference to the final basis: a
//! constraint is tight on the whole optimal face iff maximizing its slack over
//! that face yields zero. This keeps the face dimension correct on degenerate
//! optima, where the basis says little about the face.

use std::fmt;

use thiserror::Error;

use crate::scalar::{dot, rank, solve_square, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("linear program has no constraints")]
    NoConstraints,
    #[error("constraint {row} has {got} coefficients, expected {expected}")]
    DimensionMismatch { row: usize, expected: usize, got: usize },
    #[error("dual_of expects a maximization with only <= constraints")]
    UnsupportedShape,
    #[error("solution is not optimal")]
    NotOptimal,
    #[error("internal simplex failure: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

impl<T: Field> Constraint<T> {
    pub fn new(coeffs: Vec<T>, relation: Relation, rhs: T) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    pub fn is_satisfied(&self, x: &[T]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }

    pub fn is_tight(&self, x: &[T]) -> bool {
        dot(&self.coeffs, x) == self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram<T> {
    pub sense: Sense,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
    /// `nonneg[j]` marks x_j >= 0; other variables are free.
    pub nonneg: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    /// Optimal objective value (in the program's own sense).
    pub value: Option<T>,
    /// An optimal point, or a feasible point when unbounded.
    pub point: Option<Vec<T>>,
    /// Dual multipliers for the constraints of the maximization form
    /// (the objective is negated first for minimization programs).
    pub dual: Option<Vec<T>>,
    /// Improving feasible direction when unbounded.
    pub ray: Option<Vec<T>>,
    pub optimal_face_dim: Option<usize>,
    /// Constraints tight on the entire optimal face.
    pub tight_set: Vec<usize>,
    /// Nonnegativity bounds x_j >= 0 tight on the entire optimal face.
    pub tight_bounds: Vec<usize>,
}

impl<T: Field> LinearProgram<T> {
    pub fn new(sense: Sense, objective: Vec<T>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
            nonneg: vec![false; n],
        }
    }

    pub fn with_constraint(mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> Self {
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
        self
    }

    pub fn with_all_nonneg(mut self) -> Self {
        self.nonneg = vec![true; self.objective.len()];
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.constraints.is_empty() {
            return Err(LpError::NoConstraints);
        }
        if self.nonneg.len() != n {
            return Err(LpError::DimensionMismatch {
                row: usize::MAX,
                expected: n,
                got: self.nonneg.len(),
            });
        }
        for (row, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::DimensionMismatch {
                    row,
                    expected: n,
                    got: c.coeffs.len(),
                });
            }
        }
        Ok(())
    }

    pub fn is_feasible(&self, x: &[T]) -> bool {
        x.len() == self.num_vars()
            && self.constraints.iter().all(|c| c.is_satisfied(x))
            && x.iter().zip(&self.nonneg).all(|(v, &nn)| !nn || !v.is_negative())
    }

    pub fn objective_at(&self, x: &[T]) -> T {
        dot(&self.objective, x)
    }

    fn max_objective(&self) -> Vec<T> {
        match self.sense {
            Sense::Maximize => self.objective.clone(),
            Sense::Minimize => self.objective.iter().map(|c| -c.clone()).collect(),
        }
    }
}

/// Solves the program and analyses its optimal face.
pub fn solve<T: Field>(lp: &LinearProgram<T>) -> Result<LpSolution<T>, LpError> {
    let mut sol = solve_basic(lp)?;
    if sol.status == LpStatus::Optimal {
        let (dim, tight, bounds) = analyse_face(lp, sol.value.as_ref().expect("optimal value"))?;
        sol.optimal_face_dim = Some(dim);
        sol.tight_set = tight;
        sol.tight_bounds = bounds;
    }
    Ok(sol)
}

/// Dimension of the optimal face {x feasible : objective(x) = value}.
pub fn optimal_face_dimension<T: Field>(lp: &LinearProgram<T>, sol: &LpSolution<T>) -> Result<usize, LpError> {
    if sol.status != LpStatus::Optimal {
        return Err(LpError::NotOptimal);
    }
    let value = sol.value.as_ref().ok_or(LpError::NotOptimal)?;
    Ok(analyse_face(lp, value)?.0)
}

/// Checks the stored dual certificate: dual feasibility and a matching bound.
pub fn verify_certificate<T: Field>(lp: &LinearProgram<T>, sol: &LpSolution<T>) -> bool {
    let (Some(y), Some(value), Some(x)) = (&sol.dual, &sol.value, &sol.point) else {
        return false;
    };
    if y.len() != lp.constraints.len() || !lp.is_feasible(x) || &lp.objective_at(x) != value {
        return false;
    }
    let c = lp.max_objective();
    for (yi, con) in y.iter().zip(&lp.constraints) {
        let sign_ok = match con.relation {
            Relation::Le => !yi.is_negative(),
            Relation::Ge => !yi.is_positive(),
            Relation::Eq => true,
        };
        if !sign_ok {
            return false;
        }
    }
    for j in 0..lp.num_vars() {
        let col: T = lp
            .constraints
            .iter()
            .zip(y)
            .fold(T::zero(), |acc, (con, yi)| acc + con.coeffs[j].clone() * yi.clone());
        let reduced = col - c[j].clone();
        let ok = if lp.nonneg[j] {
            !reduced.is_negative()
        } else {
            reduced.is_zero()
        };
        if !ok {
            return false;
        }
    }
    let bound: T = lp
        .constraints
        .iter()
        .zip(y)
        .fold(T::zero(), |acc, (con, yi)| acc + con.rhs.clone() * yi.clone());
    let max_value = match lp.sense {
        Sense::Maximize => value.clone(),
        Sense::Minimize => -value.clone(),
    };
    bound == max_value
}

/// Verifies an unbounded certificate: the ray keeps feasibility and improves the objective.
pub fn verify_ray<T: Field>(lp: &LinearProgram<T>, ray: &[T]) -> bool {
    if ray.len() != lp.num_vars() {
        return false;
    }
    let homogeneous_ok = lp.constraints.iter().all(|con| {
        let v = dot(&con.coeffs, ray);
        match con.relation {
            Relation::Le => !v.is_positive(),
            Relation::Ge => !v.is_negative(),
            Relation::Eq => v.is_zero(),
        }
    });
    let bounds_ok = ray.iter().zip(&lp.nonneg).all(|(v, &nn)| !nn || !v.is_negative());
    homogeneous_ok && bounds_ok && dot(&lp.max_objective(), ray).is_positive()
}

/// The dual of `max <c,x> s.t. Ax <= b` with free or nonnegative variables:
/// `min <b,u> s.t. (A^T u)_j = c_j` for free x_j, `>= c_j` for x_j >= 0, u >= 0.
pub fn dual_of<T: Field>(lp: &LinearProgram<T>) -> Result<LinearProgram<T>, LpError> {
    lp.validate()?;
    if lp.sense != Sense::Maximize || lp.constraints.iter().any(|c| c.relation != Relation::Le) {
        return Err(LpError::UnsupportedShape);
    }
    let s = lp.constraints.len();
    let objective = lp.constraints.iter().map(|c| c.rhs.clone()).collect();
    let mut dual = LinearProgram::new(Sense::Minimize, objective).with_all_nonneg();
    for j in 0..lp.num_vars() {
        let coeffs = (0..s).map(|i| lp.constraints[i].coeffs[j].clone()).collect();
        let relation = if lp.nonneg[j] { Relation::Ge } else { Relation::Eq };
        dual.constraints
            .push(Constraint::new(coeffs, relation, lp.objective[j].clone()));
    }
    Ok(dual)
}

fn analyse_face<T: Field>(lp: &LinearProgram<T>, value: &T) -> Result<(usize, Vec<usize>, Vec<usize>), LpError> {
    let n = lp.num_vars();
    let mut restricted = lp.clone();
    restricted
        .constraints
        .push(Constraint::new(lp.objective.clone(), Relation::Eq, value.clone()));

    let mut tight = Vec::new();
    let mut normals = vec![lp.objective.clone()];
    for (i, con) in lp.constraints.iter().enumerate() {
        let is_tight = match con.relation {
            Relation::Eq => true,
            // slack of a <= row is b - <a,x>; maximize -<a,x> and compare with -b
            Relation::Le => {
                let mut aux = restricted.clone();
                aux.sense = Sense::Maximize;
                aux.objective = con.coeffs.iter().map(|v| -v.clone()).collect();
                slack_value(&aux, &(-con.rhs.clone()))?
            }
            Relation::Ge => {
                let mut aux = restricted.clone();
                aux.sense = Sense::Maximize;
                aux.objective = con.coeffs.clone();
                slack_value(&aux, &con.rhs)?
            }
        };
        if is_tight {
            tight.push(i);
            normals.push(con.coeffs.clone());
        }
    }
    let mut bounds = Vec::new();
    for j in (0..n).filter(|&j| lp.nonneg[j]) {
        let mut e = vec![T::zero(); n];
        e[j] = T::one();
        let mut aux = restricted.clone();
        aux.sense = Sense::Maximize;
        aux.objective = e.clone();
        if slack_value(&aux, &T::zero())? {
            bounds.push(j);
            normals.push(e);
        }
    }
    let dim = n - rank(&normals);
    Ok((dim, tight, bounds))
}

/// True iff `max objective` over the restricted program equals `at_bound` exactly.
fn slack_value<T: Field>(aux: &LinearProgram<T>, at_bound: &T) -> Result<bool, LpError> {
    let s = solve_basic(aux)?;
    Ok(match s.status {
        LpStatus::Optimal => s.value.as_ref() == Some(at_bound),
        LpStatus::Unbounded => false,
        LpStatus::Infeasible => return Err(LpError::Internal("optimal face is empty".into())),
    })
}

/// Column layout of the standard form.
struct Layout {
    /// For each original variable: (plus column, optional minus column).
    var_cols: Vec<(usize, Option<usize>)>,
    /// Row sign flips applied to make the right-hand side nonnegative.
    row_sign: Vec<bool>,
}

/// Solves the program without the optimal-face analysis (`optimal_face_dim`
/// stays `None` and the tight sets stay empty). Certificates are still checked.
pub fn solve_basic<T: Field>(lp: &LinearProgram<T>) -> Result<LpSolution<T>, LpError> {
    lp.validate()?;
    let m = lp.constraints.len();
    let n = lp.num_vars();

    let mut var_cols = Vec::with_capacity(n);
    let mut col = 0;
    for j in 0..n {
        if lp.nonneg[j] {
            var_cols.push((col, None));
            col += 1;
        } else {
            var_cols.push((col, Some(col + 1)));
            col += 2;
        }
    }
    let mut slack_cols = Vec::with_capacity(m);
    for con in &lp.constraints {
        if con.relation == Relation::Eq {
            slack_cols.push(None);
        } else {
            slack_cols.push(Some(col));
            col += 1;
        }
    }
    let structural = col;
    let total = structural + m; // artificials follow
    let rhs_col = total;

    let mut row_sign = Vec::with_capacity(m);
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    for (i, con) in lp.constraints.iter().enumerate() {
        let mut row = vec![T::zero(); total + 1];
        for (j, a) in con.coeffs.iter().enumerate() {
            let (p, q) = var_cols[j];
            row[p] = a.clone();
            if let Some(q) = q {
                row[q] = -a.clone();
            }
        }
        if let Some(s) = slack_cols[i] {
            row[s] = match con.relation {
                Relation::Le => T::one(),
                Relation::Ge => -T::one(),
                Relation::Eq => unreachable!(),
            };
        }
        row[rhs_col] = con.rhs.clone();
        let flip = con.rhs.is_negative();
        if flip {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        row[structural + i] = T::one();
        row_sign.push(flip);
        rows.push(row);
    }
    let layout = Layout { var_cols, row_sign };
    let original_rows: Vec<Vec<T>> = rows.iter().map(|r| r[..structural].to_vec()).collect();

    let mut tab = Tableau {
        rows,
        basis: (0..m).map(|i| structural + i).collect(),
        row_ids: (0..m).collect(),
        rhs_col,
    };

    // phase 1: maximize -sum(artificials)
    let mut phase1_cost = vec![T::zero(); total];
    for c in phase1_cost.iter_mut().skip(structural) {
        *c = -T::one();
    }
    match tab.optimize(&phase1_cost, total)? {
        Pivoted::Optimal => {}
        Pivoted::Unbounded(_) => return Err(LpError::Internal("phase one unbounded".into())),
    }
    let infeasibility = tab.objective_value(&phase1_cost);
    if infeasibility.is_negative() {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            value: None,
            point: None,
            dual: None,
            ray: None,
            optimal_face_dim: None,
            tight_set: Vec::new(),
            tight_bounds: Vec::new(),
        });
    }
    tab.drive_out_artificials(structural);

    // phase 2 over structural columns only
    let c = lp.max_objective();
    let mut cost = vec![T::zero(); total];
    for (j, &(p, q)) in layout.var_cols.iter().enumerate() {
        cost[p] = c[j].clone();
        if let Some(q) = q {
            cost[q] = -c[j].clone();
        }
    }
    let outcome = tab.optimize(&cost, structural)?;
    let std_point = tab.point(total);
    let point = layout.recover(&std_point);
    match outcome {
        Pivoted::Unbounded(entering) => {
            let mut dir = vec![T::zero(); total];
            dir[entering] = T::one();
            for (r, &b) in tab.basis.iter().enumerate() {
                dir[b] = -tab.rows[r][entering].clone();
            }
            let ray = layout.recover(&dir);
            if !verify_ray(lp, &ray) {
                return Err(LpError::Internal("unbounded ray failed verification".into()));
            }
            Ok(LpSolution {
                status: LpStatus::Unbounded,
                value: None,
                point: Some(point),
                dual: None,
                ray: Some(ray),
                optimal_face_dim: None,
                tight_set: Vec::new(),
                tight_bounds: Vec::new(),
            })
        }
        Pivoted::Optimal => {
            let dual = tab.dual(&cost, &original_rows, m, &layout)?;
            let value = lp.objective_at(&point);
            let sol = LpSolution {
                status: LpStatus::Optimal,
                value: Some(value),
                point: Some(point),
                dual: Some(dual),
                ray: None,
                optimal_face_dim: None,
                tight_set: Vec::new(),
                tight_bounds: Vec::new(),
            };
            if !verify_certificate(lp, &sol) {
                return Err(LpError::Internal("dual certificate failed verification".into()));
            }
            Ok(sol)
        }
    }
}

impl Layout {
    fn recover<T: Field>(&self, std: &[T]) -> Vec<T> {
        self.var_cols
            .iter()
            .map(|&(p, q)| match q {
                Some(q) => std[p].clone() - std[q].clone(),
                None => std[p].clone(),
            })
            .collect()
    }
}

enum Pivoted {
    Optimal,
    Unbounded(usize),
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    /// Original row index of each tableau row (redundant rows get dropped).
    row_ids: Vec<usize>,
    rhs_col: usize,
}

impl<T: Field> Tableau<T> {
    fn reduced_cost(&self, cost: &[T], j: usize) -> T {
        let mut d = cost[j].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            if !self.rows[r][j].is_zero() && !cost[b].is_zero() {
                d = d - cost[b].clone() * self.rows[r][j].clone();
            }
        }
        d
    }

    fn objective_value(&self, cost: &[T]) -> T {
        self.basis.iter().enumerate().fold(T::zero(), |acc, (r, &b)| {
            acc + cost[b].clone() * self.rows[r][self.rhs_col].clone()
        })
    }

    /// Bland's rule over columns `0..allowed`.
    fn optimize(&mut self, cost: &[T], allowed: usize) -> Result<Pivoted, LpError> {
        loop {
            let entering = (0..allowed).find(|&j| !self.basis.contains(&j) && self.reduced_cost(cost, j).is_positive());
            let Some(j) = entering else {
                return Ok(Pivoted::Optimal);
            };
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][j];
                if a.is_positive() {
                    let ratio = self.rows[r][self.rhs_col].clone() / a.clone();
                    let better = match &leave {
                        None => true,
                        Some((lr, lratio)) => ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr]),
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            match leave {
                None => return Ok(Pivoted::Unbounded(j)),
                Some((r, _)) => self.pivot(r, j),
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let inv = T::one() / self.rows[r][j].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let factor = row[j].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = v.clone() - factor.clone() * p.clone();
                }
            }
        }
        self.basis[r] = j;
    }

    fn drive_out_artificials(&mut self, structural: usize) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= structural {
                match (0..structural).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(j) => {
                        self.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        // redundant row
                        self.rows.remove(r);
                        self.basis.remove(r);
                        self.row_ids.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }

    fn point(&self, total: usize) -> Vec<T> {
        let mut x = vec![T::zero(); total];
        for (r, &b) in self.basis.iter().enumerate() {
            x[b] = self.rows[r][self.rhs_col].clone();
        }
        x
    }

    /// Solves B^T y = c_B on the surviving rows, then undoes the row sign flips.
    fn dual(&self, cost: &[T], original_rows: &[Vec<T>], m: usize, layout: &Layout) -> Result<Vec<T>, LpError> {
        let k = self.rows.len();
        // transpose of the basis submatrix restricted to surviving rows
        let bt: Vec<Vec<T>> = self
            .basis
            .iter()
            .map(|&b| self.row_ids.iter().map(|&i| original_rows[i][b].clone()).collect())
            .collect();
        let cb: Vec<T> = self.basis.iter().map(|&b| cost[b].clone()).collect();
        let y_sub = if k == 0 {
            Vec::new()
        } else {
            solve_square(&bt, &cb).ok_or_else(|| LpError::Internal("singular basis".into()))?
        };
        let mut y = vec![T::zero(); m];
        for (&i, v) in self.row_ids.iter().zip(y_sub) {
            y[i] = if layout.row_sign[i] { -v } else { v };
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{big, frac};
    use num_rational::BigRational;

    fn lp2(c: [i64; 2]) -> LinearProgram<BigRational> {
        LinearProgram::new(Sense::Maximize, vec![big(c[0]), big(c[1])])
    }

    #[test]
    fn box_lp() {
        let lp = lp2([1, 1])
            .with_constraint(vec![big(2), big(0)], Relation::Le, big(1))
            .with_constraint(vec![big(0), big(2)], Relation::Le, big(1));
        let s = solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, Some(big(1)));
        assert_eq!(s.point, Some(vec![frac(1, 2), frac(1, 2)]));
        assert_eq!(s.optimal_face_dim, Some(0));
        assert!(verify_certificate(&lp, &s));
    }

    #[test]
    fn two_by_two_system() {
        let lp = lp2([1, 1])
            .with_constraint(vec![big(2), big(1)], Relation::Le, big(1))
            .with_constraint(vec![big(1), big(2)], Relation::Le, big(1));
        let s = solve(&lp).unwrap();
        assert_eq!(s.value, Some(frac(2, 3)));
        assert_eq!(s.point, Some(vec![frac(1, 3), frac(1, 3)]));
        assert_eq!(s.optimal_face_dim, Some(0));
    }

    #[test]
    fn unbounded_with_ray() {
        let lp = LinearProgram::new(Sense::Maximize, vec![big(1)]).with_constraint(vec![big(1)], Relation::Ge, big(0));
        let s = solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
        assert_eq!(s.ray, Some(vec![big(1)]));
    }

    #[test]
    fn infeasible() {
        let lp = lp2([1, 0])
            .with_constraint(vec![big(1), big(0)], Relation::Le, big(-1))
            .with_constraint(vec![big(1), big(0)], Relation::Ge, big(1));
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn face_dimension_of_parallel_objective() {
        let lp = lp2([1, 1]).with_constraint(vec![big(1), big(1)], Relation::Le, big(1));
        let s = solve(&lp).unwrap();
        assert_eq!(s.value, Some(big(1)));
        assert_eq!(optimal_face_dimension(&lp, &s).unwrap(), 1);

        let lp = lp.with_all_nonneg();
        let s = solve(&lp).unwrap();
        assert_eq!(s.optimal_face_dim, Some(1));
        assert!(s.tight_bounds.is_empty());
        assert_eq!(s.tight_set, vec![0]);
    }

    #[test]
    fn face_dimension_requires_optimal() {
        let lp = LinearProgram::new(Sense::Maximize, vec![big(1)]).with_constraint(vec![big(1)], Relation::Ge, big(0));
        let s = solve(&lp).unwrap();
        assert_eq!(optimal_face_dimension(&lp, &s), Err(LpError::NotOptimal));
    }

    #[test]
    fn malformed() {
        let lp: LinearProgram<BigRational> = lp2([1, 1]);
        assert_eq!(solve(&lp).unwrap_err(), LpError::NoConstraints);
        let lp = lp2([1, 1]).with_constraint(vec![big(1)], Relation::Le, big(1));
        assert!(matches!(solve(&lp), Err(LpError::DimensionMismatch { .. })));
    }

    #[test]
    fn duals_of_both_shapes() {
        let primal = lp2([1, 1])
            .with_constraint(vec![big(2), big(0)], Relation::Le, big(1))
            .with_constraint(vec![big(0), big(2)], Relation::Le, big(1));
        let d = dual_of(&primal).unwrap();
        assert_eq!(d.sense, Sense::Minimize);
        assert_eq!(d.objective, vec![big(1), big(1)]);
        assert!(d.nonneg.iter().all(|&b| b));
        assert_eq!(
            d.constraints[0],
            Constraint::new(vec![big(2), big(0)], Relation::Eq, big(1))
        );
        assert_eq!(
            d.constraints[1],
            Constraint::new(vec![big(0), big(2)], Relation::Eq, big(1))
        );
        assert_eq!(solve(&d).unwrap().value, solve(&primal).unwrap().value);

        let primal_nn = primal.clone().with_all_nonneg();
        let d = dual_of(&primal_nn).unwrap();
        assert!(d.constraints.iter().all(|c| c.relation == Relation::Ge));
        assert_eq!(solve(&d).unwrap().value, Some(big(1)));

        let bad = lp2([1, 1]).with_constraint(vec![big(1), big(1)], Relation::Ge, big(1));
        assert_eq!(dual_of(&bad).unwrap_err(), LpError::UnsupportedShape);
    }

    #[test]
    fn minimization_and_equalities() {
        // min x1 + 2 x2 s.t. x1 + x2 = 3, x >= 0  -> 3 at (3, 0)
        let lp = LinearProgram::new(Sense::Minimize, vec![big(1), big(2)])
            .with_constraint(vec![big(1), big(1)], Relation::Eq, big(3))
            .with_all_nonneg();
        let s = solve(&lp).unwrap();
        assert_eq!(s.value, Some(big(3)));
        assert_eq!(s.point, Some(vec![big(3), big(0)]));
        assert!(verify_certificate(&lp, &s));
        assert_eq!(s.optimal_face_dim, Some(0));
    }

    #[test]
    fn redundant_equalities() {
        let lp = lp2([1, 0])
            .with_constraint(vec![big(1), big(1)], Relation::Eq, big(1))
            .with_constraint(vec![big(2), big(2)], Relation::Eq, big(2))
            .with_all_nonneg();
        let s = solve(&lp).unwrap();
        assert_eq!(s.value, Some(big(1)));
        assert!(verify_certificate(&lp, &s));
    }

    #[test]
    fn works_with_machine_ratios() {
        use num_rational::Ratio;
        let r = |v: i64| Ratio::<i64>::from_integer(v);
        let lp = LinearProgram::new(Sense::Maximize, vec![r(1), r(1)])
            .with_constraint(vec![r(2), r(1)], Relation::Le, r(1))
            .with_constraint(vec![r(1), r(2)], Relation::Le, r(1));
        assert_eq!(solve(&lp).unwrap().value, Some(Ratio::new(2, 3)));
    }
}
